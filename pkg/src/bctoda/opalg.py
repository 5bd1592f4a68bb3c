"""Exact normal-ordered differential operators and 2x2 / 4x4 operator matrices.

An operator on n sites is a finite sum of terms c * exp(a . x) * d^k with
all exponentials to the left of all derivatives.  Coefficients c are
polynomials in the formal symbols u, v, alpha, beta with exact Gaussian
rational scalars, so every identity check is an exact comparison with zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .errors import DivisionFailsError, OddPowersError, SizeLimitError, UnboundSymbolError

SYMBOLS = ("u", "v", "alpha", "beta")
_SYM_INDEX = {s: i for i, s in enumerate(SYMBOLS)}
MAX_SITES = 3


class Scalar:
    """Exact Gaussian rational re + i*im."""
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real).limit_denominator(10**12), Fraction(x.imag).limit_denominator(10**12))
        return cls(x, 0)

    def __add__(self, o):
        if not isinstance(o, _NUMBER):
            return NotImplemented
        o = Scalar.coerce(o)
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, o):
        if not isinstance(o, _NUMBER):
            return NotImplemented
        return self + (-Scalar.coerce(o))

    def __mul__(self, o):
        if not isinstance(o, _NUMBER):
            return NotImplemented
        o = Scalar.coerce(o)
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __eq__(self, o):
        try:
            o = Scalar.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i)"

    def sexpr(self) -> str:
        return f"(q {self.re} {self.im})"


_NUMBER = (Scalar, int, Fraction, float, complex)

I = Scalar(0, 1)
ONE = Scalar(1)
ZERO = Scalar(0)


def _mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


_MONO_ONE = (0,) * len(SYMBOLS)


class SpectralPoly:
    """Polynomial in u, v, alpha, beta; terms map exponent tuples to Scalars."""
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, Scalar] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> "SpectralPoly":
        return cls({_MONO_ONE: Scalar.coerce(c)})

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "SpectralPoly":
        m = [0] * len(SYMBOLS)
        m[_SYM_INDEX[name]] = power
        return cls({tuple(m): ONE})

    @classmethod
    def coerce(cls, x) -> "SpectralPoly":
        if isinstance(x, SpectralPoly):
            return x
        if isinstance(x, str):
            return cls.symbol(x)
        return cls.const(x)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, o):
        o = SpectralPoly.coerce(o)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, ZERO) + c
        return SpectralPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return SpectralPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-SpectralPoly.coerce(o))

    def __rsub__(self, o):
        return SpectralPoly.coerce(o) - self

    def __mul__(self, o):
        o = SpectralPoly.coerce(o)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, ZERO) + c1 * c2
        return SpectralPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = SpectralPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        return (self - SpectralPoly.coerce(o)).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def subs(self, mapping: Mapping[str, object]) -> "SpectralPoly":
        """Substitute symbols by polynomials (simultaneously)."""
        repl = {_SYM_INDEX[k]: SpectralPoly.coerce(v) for k, v in mapping.items()}
        out = SpectralPoly()
        for m, c in self.terms.items():
            term = SpectralPoly({tuple(0 if i in repl else e for i, e in enumerate(m)): c})
            for i, p in repl.items():
                if m[i]:
                    term = term * p ** m[i]
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, complex]) -> complex:
        total = 0j
        for m, c in self.terms.items():
            t = complex(c)
            for i, e in enumerate(m):
                if e:
                    if SYMBOLS[i] not in values:
                        raise UnboundSymbolError(f"symbol {SYMBOLS[i]} not substituted")
                    t *= complex(values[SYMBOLS[i]]) ** e
            total += t
        return total

    def degree(self, name: str) -> int:
        i = _SYM_INDEX[name]
        return max((m[i] for m in self.terms), default=-1)

    def split(self, name: str) -> dict:
        """Coefficients by power of ``name``: {k: poly without name}."""
        i = _SYM_INDEX[name]
        out: dict = {}
        for m, c in self.terms.items():
            rest = tuple(0 if j == i else e for j, e in enumerate(m))
            out.setdefault(m[i], {})[rest] = c
        return {k: SpectralPoly(t) for k, t in out.items()}

    def free_symbols(self) -> set:
        return {SYMBOLS[i] for m in self.terms for i, e in enumerate(m) if e}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def sexpr(self) -> str:
        parts = []
        for m, c in self.sorted_terms():
            syms = " ".join(f"({SYMBOLS[i]} {e})" for i, e in enumerate(m) if e)
            parts.append(f"(mono {c.sexpr()}{' ' + syms if syms else ''})")
        return "(poly" + "".join(" " + p for p in parts) + ")"

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            syms = "*".join(f"{SYMBOLS[i]}^{e}" if e > 1 else SYMBOLS[i] for i, e in enumerate(m) if e)
            parts.append(f"{c!r}*{syms}" if syms else repr(c))
        return " + ".join(parts)


def _poly(x) -> SpectralPoly:
    return SpectralPoly.coerce(x)


class OpPoly:
    """Normal-ordered operator sum_{(a,k)} c_{a,k} exp(a.x) d^k on a fixed number of sites."""
    __slots__ = ("sites", "terms")

    def __init__(self, sites: int, terms: Mapping[tuple, SpectralPoly] | None = None):
        self.sites = sites
        self.terms = {key: c for key, c in (terms or {}).items() if not c.is_zero()}

    # constructors
    @classmethod
    def scalar(cls, sites: int, c) -> "OpPoly":
        z = (0,) * sites
        return cls(sites, {(z, z): _poly(c)})

    @classmethod
    def exp(cls, sites: int, site: int, weight: int, c=1) -> "OpPoly":
        a = [0] * sites
        a[site - 1] = weight
        return cls(sites, {(tuple(a), (0,) * sites): _poly(c)})

    @classmethod
    def der(cls, sites: int, site: int, order: int = 1, c=1) -> "OpPoly":
        k = [0] * sites
        k[site - 1] = order
        return cls(sites, {((0,) * sites, tuple(k)): _poly(c)})

    @classmethod
    def term(cls, sites: int, a: Iterable[int], k: Iterable[int], c=1) -> "OpPoly":
        return cls(sites, {(tuple(a), tuple(k)): _poly(c)})

    def coerce(self, o) -> "OpPoly":
        if isinstance(o, OpPoly):
            if o.sites != self.sites:
                raise ValueError("site count mismatch")
            return o
        return OpPoly.scalar(self.sites, o)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, o):
        o = self.coerce(o)
        out = dict(self.terms)
        for key, c in o.terms.items():
            out[key] = out[key] + c if key in out else c
        return OpPoly(self.sites, out)

    __radd__ = __add__

    def __neg__(self):
        return OpPoly(self.sites, {k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self.coerce(o))

    def __rsub__(self, o):
        return self.coerce(o) - self

    def __mul__(self, o):
        if not isinstance(o, OpPoly):
            c = _poly(o)
            return OpPoly(self.sites, {k: v * c for k, v in self.terms.items()})
        return op_mul(self, o)

    def __rmul__(self, o):
        c = _poly(o)
        return OpPoly(self.sites, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, o):
        return (self - self.coerce(o)).is_zero()

    def __hash__(self):
        return hash(self.sexpr())

    def map_coeffs(self, fn) -> "OpPoly":
        return OpPoly(self.sites, {k: fn(c) for k, c in self.terms.items()})

    def subs(self, mapping: Mapping[str, object]) -> "OpPoly":
        return self.map_coeffs(lambda c: c.subs(mapping))

    def embed(self, sites: int) -> "OpPoly":
        pad = (0,) * (sites - self.sites)
        return OpPoly(sites, {(a + pad, k + pad): c for (a, k), c in self.terms.items()})

    def split(self, name: str) -> dict:
        """Coefficient operators by power of a spectral symbol."""
        out: dict = {}
        for key, c in self.terms.items():
            for p, cp in c.split(name).items():
                out.setdefault(p, {})[key] = cp
        return {p: OpPoly(self.sites, t) for p, t in out.items()}

    def degree(self, name: str) -> int:
        return max((c.degree(name) for c in self.terms.values()), default=-1)

    def max_order(self) -> int:
        return max((sum(k) for (_, k) in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]), reverse=True)

    def sexpr(self) -> str:
        parts = []
        for (a, k), c in self.sorted_terms():
            parts.append(f"(term (exp {' '.join(map(str, a))}) (der {' '.join(map(str, k))}) {c.sexpr()})")
        return f"(op {self.sites}" + "".join(" " + p for p in parts) + ")"

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, k), c in self.sorted_terms():
            e = "*".join(f"e^({w}x{j + 1})" for j, w in enumerate(a) if w)
            d = "*".join(f"d{j + 1}^{o}" if o > 1 else f"d{j + 1}" for j, o in enumerate(k) if o)
            parts.append("*".join(p for p in (f"[{c!r}]", e, d) if p))
        return " + ".join(parts)


def _der_past_exp(k: int, b: int) -> list:
    """d^k e^{b x} = e^{b x} sum_j C(k,j) b^{k-j} d^j; returns [(j, coefficient)]."""
    if b == 0:
        return [(k, 1)]
    return [(j, comb(k, j) * b ** (k - j)) for j in range(k + 1)]


def op_mul(x: OpPoly, y: OpPoly) -> OpPoly:
    """Normal-ordered product x*y."""
    if x.sites != y.sites:
        raise ValueError("site count mismatch")
    out: dict = {}
    for (a1, k1), c1 in x.terms.items():
        for (a2, k2), c2 in y.terms.items():
            c = c1 * c2
            a = tuple(p + q for p, q in zip(a1, a2))
            # expand each site independently, then take the tensor product
            per_site = [_der_past_exp(k, b) for k, b in zip(k1, a2)]
            combos = [((), 1)]
            for j, opts in enumerate(per_site):
                combos = [(ks + (kk + k2[j],), w * ww) for ks, w in combos for kk, ww in opts]
            for ks, w in combos:
                key = (a, ks)
                add = c * w if w != 1 else c
                out[key] = out[key] + add if key in out else add
    return OpPoly(x.sites, out)


def commutator(h1: OpPoly, h2: OpPoly) -> OpPoly:
    return op_mul(h1, h2) - op_mul(h2, h1)


def conjugate_shift(op: OpPoly, site: int, shift) -> OpPoly:
    """Replace d_site by (d_site + shift); shift is a SpectralPoly-coercible value.

    exp(-i v x_n) X exp(i v x_n) is X with d_n -> d_n - i v, so the
    conjugation by a non-integral exponential is shift = -i*v.
    """
    s = _poly(shift)
    j = site - 1
    out = OpPoly(op.sites)
    for (a, k), c in op.terms.items():
        kk = k[j]
        for m in range(kk + 1):
            knew = k[:j] + (m,) + k[j + 1:]
            out = out + OpPoly(op.sites, {(a, knew): c * s ** (kk - m) * comb(kk, m)})
    return out


class MatrixOp:
    """Dense matrix with OpPoly entries."""
    __slots__ = ("rows", "cols", "entries", "sites")

    def __init__(self, entries):
        self.entries = [list(r) for r in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0])
        self.sites = self.entries[0][0].sites
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")

    @classmethod
    def scalar_matrix(cls, sites: int, rows) -> "MatrixOp":
        return cls([[OpPoly.scalar(sites, x) for x in r] for r in rows])

    @classmethod
    def identity(cls, sites: int, n: int) -> "MatrixOp":
        return cls.scalar_matrix(sites, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, o: "MatrixOp") -> "MatrixOp":
        if self.cols != o.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(o.cols):
                acc = OpPoly(self.sites)
                for k in range(self.cols):
                    if self.entries[i][k].terms and o.entries[k][j].terms:
                        acc = acc + op_mul(self.entries[i][k], o.entries[k][j])
                row.append(acc)
            out.append(row)
        return MatrixOp(out)

    def __add__(self, o):
        return MatrixOp([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, o.entries)])

    def __sub__(self, o):
        return MatrixOp([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, o.entries)])

    def map(self, fn) -> "MatrixOp":
        return MatrixOp([[fn(e) for e in r] for r in self.entries])

    def subs(self, mapping) -> "MatrixOp":
        return self.map(lambda e: e.subs(mapping))

    def transpose(self) -> "MatrixOp":
        """Entrywise transpose (operator entries are not transposed)."""
        return MatrixOp([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def embed(self, sites: int) -> "MatrixOp":
        return self.map(lambda e: e.embed(sites))

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def sexpr(self) -> str:
        rows = " ".join("(row " + " ".join(e.sexpr() for e in r) + ")" for r in self.entries)
        return f"(matrix {self.rows} {self.cols} {rows})"


def kron(a: MatrixOp, b: MatrixOp) -> MatrixOp:
    """a (x) b with entries a_ij * b_kl (a's entry to the left)."""
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            out.append([op_mul(a[i, j], b[k, l]) for j in range(a.cols) for l in range(b.cols)])
    return MatrixOp(out)


# ---------------------------------------------------------------------------
# model matrices

U = SpectralPoly.symbol("u")
V = SpectralPoly.symbol("v")
ALPHA = SpectralPoly.symbol("alpha")
BETA = SpectralPoly.symbol("beta")
HALF_I = SpectralPoly.const(Scalar(0, Fraction(1, 2)))


def lax_toda(site: int = 1, sites: int | None = None, arg=U) -> MatrixOp:
    """[[arg + i d, e^{-x}], [-e^{x}, 0]] at ``site``."""
    s = sites or site
    return MatrixOp([
        [OpPoly.scalar(s, arg) + OpPoly.der(s, site, 1, I), OpPoly.exp(s, site, -1)],
        [OpPoly.exp(s, site, 1, -1), OpPoly(s)],
    ])


def lax_dst(site: int = 1, sites: int | None = None, arg=U) -> MatrixOp:
    """[[arg + i d, e^{-x}], [-e^{x} d, i]] at ``site``."""
    s = sites or site
    a = [0] * s
    k = [0] * s
    a[site - 1], k[site - 1] = 1, 1
    return MatrixOp([
        [OpPoly.scalar(s, arg) + OpPoly.der(s, site, 1, I), OpPoly.exp(s, site, -1)],
        [OpPoly.term(s, a, k, -1), OpPoly.scalar(s, I)],
    ])


def k_matrix(sites: int = 1, arg=U) -> MatrixOp:
    arg = _poly(arg)
    return MatrixOp.scalar_matrix(sites, [
        [-ALPHA, arg - HALF_I],
        [-(BETA * BETA) * (arg - HALF_I), -ALPHA],
    ])


def yang_r(sites: int = 1, arg=U) -> MatrixOp:
    arg = _poly(arg)
    return MatrixOp.scalar_matrix(sites, [
        [arg + I, 0, 0, 0],
        [0, arg, I, 0],
        [0, I, arg, 0],
        [0, 0, 0, arg + I],
    ])


def sigma2(sites: int = 1) -> MatrixOp:
    return MatrixOp.scalar_matrix(sites, [[0, -I], [I, 0]])


def _check_n(n: int, lo: int):
    if n > MAX_SITES:
        raise SizeLimitError(f"n = {n} exceeds the supported maximum {MAX_SITES}")
    if n < lo:
        raise ValueError(f"n must be >= {lo}")


def monodromy_gl(n: int, arg=U) -> MatrixOp:
    """T_n(u) = L_n(u) ... L_1(u)."""
    _check_n(n, 1)
    t = lax_toda(1, n, arg)
    for j in range(2, n + 1):
        t = lax_toda(j, n, arg) @ t
    return t


def monodromy_bc(n: int) -> MatrixOp:
    """T_n(u) K(u) sigma2 T_n^t(-u) sigma2; n = 0 gives K(u) on one dummy site."""
    _check_n(n, 0)
    if n == 0:
        return k_matrix(1)
    t = monodromy_gl(n)
    t_neg = t.subs({"u": -U}).transpose()
    return t @ k_matrix(n) @ sigma2(n) @ t_neg @ sigma2(n)


def extract_hamiltonians(n: int, family: str) -> list:
    """Commuting Hamiltonians H_1..H_n from the generating entry of the monodromy.

    GL: A_n(u) = u^n + sum_s u^{n-s} H_s.
    BC: B_n(u) = (-1)^n (u - i/2)(u^{2n} + sum_s u^{2(n-s)} H_s).
    """
    family = family.upper()
    if family == "GL":
        coeffs = monodromy_gl(n)[0, 0].split("u")
        if coeffs.get(n) != OpPoly.scalar(n, 1):
            raise DivisionFailsError("A_n(u) is not monic")
        return [coeffs.get(n - s, OpPoly(n)) for s in range(1, n + 1)]
    if family != "BC":
        raise ValueError(f"unknown family {family!r}")
    _check_n(n, 1)
    b = monodromy_bc(n)[0, 1]
    coeffs = b.split("u")
    deg = max(coeffs)
    # synthetic division by (u - i/2), highest power first
    quot = {}
    carry = OpPoly(n)
    for p in range(deg, 0, -1):
        carry = coeffs.get(p, OpPoly(n)) + carry * HALF_I
        quot[p - 1] = carry
    remainder = coeffs.get(0, OpPoly(n)) + carry * HALF_I
    if not remainder.is_zero():
        raise DivisionFailsError("(u - i/2) does not divide B_n(u)")
    sign = (-1) ** n
    quot = {p: q * sign for p, q in quot.items() if not q.is_zero()}
    odd = [p for p in quot if p % 2]
    if odd:
        raise OddPowersError(f"odd powers {sorted(odd)} survive in B_n(u)/(u - i/2)")
    if quot.get(2 * n) != OpPoly.scalar(n, 1):
        raise DivisionFailsError("B_n(u)/((-1)^n (u - i/2)) is not monic of degree 2n")
    return [quot.get(2 * (n - s), OpPoly(n)) for s in range(1, n + 1)]


# ---------------------------------------------------------------------------
# identity checks


@dataclass
class IdentityResult:
    holds: bool
    witness: tuple | None = None   # (row, col, nonzero entry) of lhs - rhs

    def __bool__(self):
        return self.holds


def verify_identity(lhs: MatrixOp, rhs: MatrixOp) -> IdentityResult:
    if (lhs.rows, lhs.cols) != (rhs.rows, rhs.cols):
        raise ValueError("dimension mismatch")
    diff = lhs - rhs
    for i, r in enumerate(diff.entries):
        for j, e in enumerate(r):
            if not e.is_zero():
                return IdentityResult(False, (i, j, e))
    return IdentityResult(True)


def _id2(sites):
    return MatrixOp.identity(sites, 2)


def yang_baxter_sides(lax_u: MatrixOp, lax_v: MatrixOp, r: MatrixOp):
    """R (X(u) (x) 1)(1 (x) X(v)) and (1 (x) X(v))(X(u) (x) 1) R."""
    s = lax_u.sites
    x1 = kron(lax_u, _id2(s))
    x2 = kron(_id2(s), lax_v)
    return r @ x1 @ x2, x2 @ x1 @ r


def reflection_sides(k_u: MatrixOp, k_v: MatrixOp, sites: int):
    """R(u-v)(K(u) (x) 1) R(u+v-i)(1 (x) K(v)) and its mirror."""
    r_minus = yang_r(sites, U - V)
    r_plus = yang_r(sites, U + V - I)
    k1 = kron(k_u, _id2(sites))
    k2 = kron(_id2(sites), k_v)
    return r_minus @ k1 @ r_plus @ k2, k2 @ r_plus @ k1 @ r_minus


def verify_rll(kind: str = "toda") -> IdentityResult:
    make = lax_toda if kind == "toda" else lax_dst
    return verify_identity(*yang_baxter_sides(make(1, 1, U), make(1, 1, V), yang_r(1, U - V)))


def verify_rtt(n: int) -> IdentityResult:
    return verify_identity(*yang_baxter_sides(monodromy_gl(n, U), monodromy_gl(n, V), yang_r(n, U - V)))


def verify_rkrk() -> IdentityResult:
    return verify_identity(*reflection_sides(k_matrix(1, U), k_matrix(1, V), 1))


def verify_rtrt(n: int = 1) -> IdentityResult:
    t_u = monodromy_bc(n)
    t_v = t_u.subs({"u": V})
    return verify_identity(*reflection_sides(t_u, t_v, n))


def mfact_matrices(lam=U):
    """(M(lam), U, V(lam)) with M = U V."""
    m = lax_dst(1, 1, lam)
    u_mat = MatrixOp([[OpPoly.scalar(1, 1), OpPoly.exp(1, 1, -1, -I)],
                      [OpPoly(1), OpPoly.scalar(1, 1)]])
    v_mat = MatrixOp([[OpPoly.scalar(1, lam), OpPoly(1)],
                      [OpPoly.term(1, (1,), (1,), -1), OpPoly.scalar(1, I)]])
    return m, u_mat, v_mat


def verify_mfact() -> IdentityResult:
    m, u_mat, v_mat = mfact_matrices()
    return verify_identity(m, u_mat @ v_mat)


def ace_sides(n: int):
    """Both sides of the A-recursion conjugated by exp(-i v x_n).

    Returns (conjugated lhs, A_n(u)) as OpPoly on n sites.
    """
    _check_n(n, 1)
    if n == 1:
        a_prev, c_prev = OpPoly.scalar(1, 1), OpPoly(1)
    else:
        t = monodromy_gl(n - 1).embed(n)
        a_prev, c_prev = t[0, 0], t[1, 0]
    first = OpPoly.scalar(n, U - V) + OpPoly.der(n, n, 1, I)
    lhs = op_mul(first, a_prev) + op_mul(OpPoly.exp(n, n, -1), c_prev)
    lhs = conjugate_shift(lhs, n, -I * V)
    return lhs, monodromy_gl(n)[0, 0]


def verify_ace(n: int) -> IdentityResult:
    lhs, rhs = ace_sides(n)
    return verify_identity(MatrixOp([[lhs]]), MatrixOp([[rhs]]))


def b_is_even(n: int) -> bool:
    try:
        extract_hamiltonians(n, "BC")
    except (OddPowersError, DivisionFailsError):
        return False
    return True


def hamiltonians_commute(n: int, family: str) -> bool:
    hs = extract_hamiltonians(n, family)
    return all(commutator(hs[i], hs[j]).is_zero() for i in range(len(hs)) for j in range(i + 1, len(hs)))


def leading_symbol_ok(n: int) -> bool:
    """Top-order part of H_s equals the elementary symmetric sum of d_j^2."""
    from itertools import combinations
    for s, h in enumerate(extract_hamiltonians(n, "BC"), start=1):
        top = OpPoly(n, {key: c for key, c in h.terms.items() if sum(key[1]) == 2 * s})
        expected = OpPoly(n)
        for js in combinations(range(n), s):
            k = [0] * n
            for j in js:
                k[j] = 2
            expected = expected + OpPoly.term(n, (0,) * n, k, 1)
        if top != expected:
            return False
    return True


def symbolic_suite() -> dict:
    """Every exact identity the algebra certifies, name -> bool."""
    out = {
        "rll_toda": bool(verify_rll("toda")),
        "rll_dst": bool(verify_rll("dst")),
        "rkrk": bool(verify_rkrk()),
        "rtt_n1": bool(verify_rtt(1)),
        "rtt_n2": bool(verify_rtt(2)),
        "rtrt_n1": bool(verify_rtrt(1)),
        "mfact": bool(verify_mfact()),
        "ace_n1": bool(verify_ace(1)),
        "ace_n2": bool(verify_ace(2)),
    }
    for n in (1, 2, 3):
        out[f"b_even_n{n}"] = b_is_even(n)
        out[f"commute_gl_n{n}"] = hamiltonians_commute(n, "GL")
        out[f"commute_bc_n{n}"] = hamiltonians_commute(n, "BC")
        out[f"leading_symbol_n{n}"] = leading_symbol_ok(n)
    return out


def to_numeric_applier(op: OpPoly, substitutions: Mapping[str, complex] | None = None, step: float = 1e-2):
    """Numeric descriptor of ``op`` with all spectral symbols bound."""
    from .verify import FDOperator

    substitutions = dict(substitutions or {})
    terms = []
    for (a, k), c in op.sorted_terms():
        missing = c.free_symbols() - set(substitutions)
        if missing:
            raise UnboundSymbolError(f"unbound symbols {sorted(missing)}")
        val = c.evaluate(substitutions)
        if val != 0:
            terms.append((val, tuple(a), tuple(k)))
    return FDOperator(tuple(terms), step)
