"""Independent mpmath estimate of how fast the boundary-weighted z_1 integral
approaches its beta -> 0 limit (alpha fixed, g = alpha/beta + 1/2).

Prints the relative difference per beta and the decade ratios.
"""
import mpmath as mp

mp.mp.dps = 40


def full(lam, alpha, beta, t):
    g = mp.mpf(alpha) / beta + mp.mpf(1) / 2

    def f(z):
        u = beta * mp.exp(-z)
        return (mp.exp(-2j * lam * z - mp.exp(z - t))
                * (1 + u) ** (-1j * lam - g) * (1 - u) ** (-1j * lam + g - 1))

    lb = mp.log(beta)
    return mp.quad(f, [lb, lb + 1e-6, lb + 1, 0, 5, 8])


def limit(lam, alpha, t):
    f = lambda z: mp.exp(-2j * lam * z - mp.exp(z - t) - 2 * alpha * mp.exp(-z))
    return mp.quad(f, [-12, -4, 0, 5, 8])


def main():
    lam, alpha, t = 1.0, 1.0, 0.0
    ref = limit(lam, alpha, t)
    diffs = []
    for beta in (mp.mpf("1e-2"), mp.mpf("1e-3"), mp.mpf("1e-4")):
        d = abs(full(lam, alpha, beta, t) - ref) / abs(ref)
        diffs.append(d)
        print(f"beta={float(beta):.0e}  rel diff={float(d):.6e}")
    for a, b in zip(diffs, diffs[1:]):
        print(f"decade ratio {float(a / b):.3f}")


if __name__ == "__main__":
    main()
