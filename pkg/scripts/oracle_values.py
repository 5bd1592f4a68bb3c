"""Reference values for the test suite, computed with mpmath only.

Run once; the printed numbers are frozen in the tests.  Nothing here imports
the package, so the references are independent of its quadrature code.
"""
import mpmath as mp

mp.mp.dps = 25


def zj(lam, a, b):
    # int exp(-2 i lam z - a e^z - b e^-z) dz = 2 (b/a)^(-i lam) K_{2 i lam}(2 sqrt(a b))
    return 2 * (mp.mpf(b) / a) ** (-1j * lam) * mp.besselk(2j * lam, 2 * mp.sqrt(a * b))


def whittaker_w(kappa, mu, z):
    return mp.exp(-z / 2) * z ** (mu + 0.5) * mp.hyperu(0.5 + mu - kappa, 1 + 2 * mu, z)


def psi1(lam, alpha, beta, x):
    return mp.exp(x / 2) / mp.sqrt(2 * beta) * whittaker_w(-alpha / beta, -1j * lam, 2 * beta * mp.exp(-x))


def phi2(a, b):
    return mp.exp(-a * a - 0.3 * b * b)


# the integrands below are < 1e-40 outside the finite limits used

def apply_r(v, x1, x2):
    f = lambda y: mp.exp(1j * v * (x1 - y) - mp.exp(x1 - y) - mp.exp(y - x2)) * phi2(y, x1)
    return mp.quad(f, [-8, -2, 0, 2, 10])


def apply_rtilde(v, x1, x2):
    f = lambda y: (mp.exp(1j * v * (x1 - y) - mp.exp(x1 - y) + mp.exp(x1 - x2))
                   * (1 - mp.exp(y - x2)) ** (1j * v - 1) * phi2(y, x1))
    return mp.quad(f, [-10, x2 - 3, x2 - 1, x2]) / mp.gamma(1j * v)


def apply_rhat(v, x1, x2):
    def outer(y2):
        g = lambda y1: (mp.exp(1j * v * (y2 - y1) - mp.exp(-x1 - y2) - mp.exp(y1 - x2))
                        * (1 - mp.exp(y2 - y1)) ** (-1j * v - 1) * mp.exp(-y1 * y1 - y2 * y2))
        return mp.quad(g, [y2, y2 + 1, y2 + 4, 12])
    return mp.quad(outer, [-10, -3, 0, 3, 10])


def phi_gl2(l1, l2, x1, x2):
    # open two-site chain: exp(i(l1+l2)(x1+x2)/2) 2 K_{i(l1-l2)}(2 exp((x1-x2)/2))
    return mp.exp(0.5j * (l1 + l2) * (x1 + x2)) * 2 * mp.besselk(1j * (l1 - l2), 2 * mp.exp((x1 - x2) / 2))


if __name__ == "__main__":
    print("zj real", complex(zj(0.8, 0.7, 1.3)))
    print("zj complex", complex(zj(0.5 - 0.3j, 0.7, 1.3)))
    print("gamma 2i lam", complex(mp.gamma(2j * (0.5 - 0.3j))))
    print("psi1 a", complex(psi1(0.8, 0.5, 1.0, 0.3)))
    print("psi1 b", complex(psi1(1.3, 0.2, 1.5, -1.0)))
    print("R", complex(apply_r(0.8 - 0.3j, 0.2, 0.7)))
    print("Rtilde", complex(apply_rtilde(0.5 - 0.6j, 0.2, 0.7)))
    print("Rhat", complex(apply_rhat(0.4 + 0.7j, 0.1, 0.3)))
    for pt in [(0.3, 1.2), (-0.5, 0.2), (1.0, -0.4)]:
        print("phi_gl2", pt, complex(phi_gl2(0.6, 1.1, *pt)))
