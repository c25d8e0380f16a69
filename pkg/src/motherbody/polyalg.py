"""Univariate and bivariate polynomial algebra.

Three coefficient kinds are supported by :class:`UniPoly`:

* ``"float"`` -- Python ``complex`` (double precision),
* ``"exact"`` -- :class:`GaussRat`, complex numbers with rational parts,
* ``"mp"``    -- ``gmpy2.mpc`` values at some working precision.

Root finding always evaluates Newton corrections in extended precision, so
the returned roots are accurate roots of the polynomial *as stored* even when
the monomial-basis representation is badly conditioned.
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction
from numbers import Number

import gmpy2
import numpy as np

from .errors import NotSimplePole, ZeroPolynomial

__all__ = [
    "GaussRat", "UniPoly", "BiPoly", "NewtonSupport",
    "poly_roots", "coprime", "resultant", "discriminant_D", "residue_at",
    "newton_support", "upper_hull",
]

CLUSTER_RTOL = 1e-8


# ---------------------------------------------------------------------------
# exact complex rationals
# ---------------------------------------------------------------------------

class GaussRat:
    """Complex number with :class:`fractions.Fraction` real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, float):
            return cls(Fraction(x), 0)
        if isinstance(x, tuple) and len(x) == 2:
            return cls(x[0], x[1])
        raise TypeError(f"cannot convert {type(x).__name__} to GaussRat")

    def __add__(self, other):
        if isinstance(other, GaussRat):
            return GaussRat(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussRat(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, (GaussRat, int, Fraction)):
            return self + (-GaussRat.coerce(other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussRat.coerce(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussRat):
            return GaussRat(self.re * other.re - self.im * other.im,
                            self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Fraction)):
            return GaussRat(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussRat(self.re / other, self.im / other)
        if isinstance(other, GaussRat):
            n = other.re * other.re + other.im * other.im
            if n == 0:
                raise ZeroDivisionError("GaussRat division by zero")
            return GaussRat((self.re * other.re + self.im * other.im) / n,
                            (self.im * other.re - self.re * other.im) / n)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussRat.coerce(other) / self
        return NotImplemented

    def __pow__(self, k: int):
        out = GaussRat(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def __abs__(self):
        return math.hypot(self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussRat({self.re})"
        return f"GaussRat({self.re}, {self.im})"


def _kind(c) -> str:
    if isinstance(c, GaussRat):
        return "exact"
    if type(c).__name__ == "mpc" or type(c).__name__ == "mpfr":
        return "mp"
    return "float"


def _to_mpc(c):
    if isinstance(c, GaussRat):
        return gmpy2.mpc(gmpy2.mpq(c.re.numerator, c.re.denominator),
                         gmpy2.mpq(c.im.numerator, c.im.denominator))
    if _kind(c) == "mp":
        return c if type(c).__name__ == "mpc" else gmpy2.mpc(c, precision=c.precision)
    c = complex(c)
    return gmpy2.mpc(c.real, c.imag)


def _is_zero(c) -> bool:
    # gmpy2.mpc(0) is truthy, so compare instead of testing bool(c)
    return c == 0


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------

class UniPoly:
    """Univariate polynomial, coefficients in ascending degree.

    Trailing (exactly) zero coefficients are stripped, so the leading
    coefficient is nonzero unless the polynomial is zero (``coeffs == ()``).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(), exact: bool = False):
        if exact:
            cs = [GaussRat.coerce(c) for c in coeffs]
        else:
            cs = []
            for c in coeffs:
                k = _kind(c)
                if k == "float":
                    cs.append(complex(c))
                elif k == "mp":
                    # keep the value's own precision (mpc() would round to context)
                    cs.append(c if type(c).__name__ == "mpc" else gmpy2.mpc(c, precision=c.precision))
                else:
                    cs.append(c)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    # -- construction helpers -------------------------------------------------
    @classmethod
    def monomial(cls, degree: int, coeff=1, exact=False) -> "UniPoly":
        return cls([0] * degree + [coeff], exact=exact)

    @classmethod
    def from_roots(cls, roots, lead=1.0) -> "UniPoly":
        c = np.polynomial.polynomial.polyfromroots(np.asarray(roots, complex))
        return cls(lead * c)

    def _like(self, coeffs):
        return UniPoly(coeffs, exact=self.exact)

    # -- properties -----------------------------------------------------------
    @property
    def kind(self) -> str:
        return _kind(self.coeffs[0]) if self.coeffs else "float"

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return GaussRat(0) if self.exact else 0j

    def as_array(self) -> np.ndarray:
        if self.is_zero:
            return np.zeros(1, complex)
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def to_float(self) -> "UniPoly":
        return UniPoly([complex(c) for c in self.coeffs])

    def to_exact(self) -> "UniPoly":
        return UniPoly(self.coeffs, exact=True)

    def to_mp(self) -> "UniPoly":
        return UniPoly([_to_mpc(c) for c in self.coeffs])

    # -- arithmetic -----------------------------------------------------------
    def _coerce_other(self, other):
        if isinstance(other, UniPoly):
            if self.exact != other.exact and not (self.is_zero or other.is_zero):
                if self.exact:
                    return self.to_float(), other
                return self, other.to_float()
            return self, other
        return None

    def __add__(self, other):
        if isinstance(other, Number) or isinstance(other, GaussRat):
            other = UniPoly([other], exact=self.exact)
        pair = self._coerce_other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = max(len(a.coeffs), len(b.coeffs))
        exact = a.exact or b.exact
        zero = GaussRat(0) if exact else 0j
        out = [(a.coeffs[k] if k < len(a.coeffs) else zero)
               + (b.coeffs[k] if k < len(b.coeffs) else zero) for k in range(n)]
        return UniPoly(out, exact=exact)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, Number) or isinstance(other, GaussRat):
            other = UniPoly([other], exact=self.exact)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            a, b = self._coerce_other(other)
            if a.is_zero or b.is_zero:
                return UniPoly()
            exact = a.exact or b.exact
            if not exact and a.kind == "float" and b.kind == "float":
                return UniPoly(np.convolve(a.as_array(), b.as_array()))
            zero = GaussRat(0) if exact else 0
            out = [zero] * (len(a.coeffs) + len(b.coeffs) - 1)
            for i, x in enumerate(a.coeffs):
                for j, y in enumerate(b.coeffs):
                    out[i + j] = out[i + j] + x * y
            return UniPoly(out, exact=exact)
        if isinstance(other, (Number, GaussRat)) or _kind(other) == "mp":
            if self.exact and not isinstance(other, (int, Fraction, GaussRat)):
                return self.to_float() * other
            return self._like([c * other for c in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self._like([c / scalar for c in self.coeffs])

    def __pow__(self, k: int):
        out = UniPoly([1], exact=self.exact)
        for _ in range(k):
            out = out * self
        return out

    def deriv(self, order: int = 1) -> "UniPoly":
        cs = list(self.coeffs)
        for _ in range(order):
            cs = [c * k for k, c in enumerate(cs)][1:]
        return self._like(cs)

    def divmod(self, other: "UniPoly"):
        """Polynomial long division, ``self = q*other + r`` with deg r < deg other."""
        if other.is_zero:
            raise ZeroPolynomial("division by the zero polynomial")
        exact = self.exact and other.exact
        zero = GaussRat(0) if exact else 0j
        rem = list(self.coeffs) if exact else [complex(c) for c in self.coeffs]
        den = list(other.coeffs) if exact else [complex(c) for c in other.coeffs]
        dd = len(den) - 1
        if len(rem) - 1 < dd:
            return UniPoly([], exact=exact), UniPoly(rem, exact=exact)
        quo = [zero] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k] / den[-1]
            quo[k - dd] = c
            for j in range(dd + 1):
                rem[k - dd + j] = rem[k - dd + j] - c * den[j]
        return UniPoly(quo, exact=exact), UniPoly(rem[:dd], exact=exact)

    def monic(self) -> "UniPoly":
        return self / self.lc

    def __call__(self, z):
        if self.is_zero:
            return 0 * z if isinstance(z, np.ndarray) else 0
        if isinstance(z, np.ndarray) and self.kind != "mp":
            return np.polynomial.polynomial.polyval(z, self.as_array())
        cs = self.coeffs
        if self.exact and not isinstance(z, (GaussRat, int, Fraction)):
            cs = [complex(c) for c in cs]
        acc = cs[-1]
        for c in reversed(cs[:-1]):
            acc = acc * z + c
        return acc

    def trimmed(self, tol: float) -> "UniPoly":
        """Drop leading coefficients with modulus below ``tol * max|coeff|``."""
        arr = self.as_array()
        if arr.size == 0:
            return self
        scale = np.max(np.abs(arr))
        cs = list(self.coeffs)
        while cs and abs(complex(cs[-1])) <= tol * scale:
            cs.pop()
        return self._like(cs)

    def roots(self):
        return poly_roots(self)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r})"

    # -- JSON -----------------------------------------------------------------
    def to_json(self) -> dict:
        return {"coeffs": [_coeff_to_json(c, self.exact) for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc) -> "UniPoly":
        from .errors import SchemaError
        try:
            raw = doc["coeffs"]
        except (KeyError, TypeError) as exc:
            raise SchemaError("univariate polynomial needs a 'coeffs' list") from exc
        exact = any(isinstance(part, dict) for c in raw for part in
                    (c if isinstance(c, (list, tuple)) else [c]))
        return cls([_coeff_from_json(c, exact) for c in raw], exact=exact)


def _coeff_to_json(c, exact):
    if exact:
        return [{"num": c.re.numerator, "den": c.re.denominator},
                {"num": c.im.numerator, "den": c.im.denominator}]
    c = complex(c)
    return [c.real, c.imag]


def _coeff_from_json(c, exact):
    from .errors import SchemaError

    def part(x):
        if isinstance(x, dict):
            return Fraction(int(x["num"]), int(x.get("den", 1)))
        return Fraction(x) if exact else float(x)

    try:
        if isinstance(c, (list, tuple)):
            re, im = (part(c[0]), part(c[1])) if len(c) == 2 else (part(c[0]), 0)
        else:
            re, im = part(c), 0
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        raise SchemaError(f"bad coefficient {c!r}") from exc
    if exact:
        return GaussRat(re, im)
    return complex(float(re), float(im))


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def upper_hull(points):
    """Upper convex hull of points sorted by x (monotone chain)."""
    pts = sorted(points)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _log2abs(c) -> float:
    if _kind(c) == "mp":
        a = abs(c)
        return float(gmpy2.log2(a)) if a > 0 else -math.inf
    a = abs(complex(c))
    return math.log2(a) if a > 0 else -math.inf


def _initial_guesses(log2c):
    """Starting points on circles read off the Newton polygon of |coeffs|."""
    d = len(log2c) - 1
    pts = [(k, v) for k, v in enumerate(log2c) if v > -math.inf]
    hull = upper_hull(pts)
    out = []
    for (k0, v0), (k1, v1) in zip(hull, hull[1:]):
        m = k1 - k0
        r = 2.0 ** ((v0 - v1) / m)
        ang = 2 * np.pi * np.arange(m) / m + 0.7 + 0.11 * len(out) / max(d, 1)
        out.extend(r * np.exp(1j * ang))
    return np.array(out, dtype=complex)


def _working_precision(log2c) -> int:
    finite = [v for v in log2c if v > -math.inf]
    spread = max(finite) - min(finite)
    d = len(log2c) - 1
    return int(96 + 2 * d + spread)


def _aberth(coeffs, prec, maxiter=400, z_init=None):
    """Aberth-Ehrlich iteration; Newton ratios evaluated in extended precision."""
    log2c = [_log2abs(c) for c in coeffs]
    d = len(coeffs) - 1
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        mc = [_to_mpc(c) for c in coeffs]
        dmc = [mc[k] * k for k in range(1, d + 1)]
        z = _initial_guesses(log2c) if z_init is None else np.array(z_init, complex)
        active = np.ones(d, bool)
        calm = np.zeros(d, int)
        zero = gmpy2.mpc(0)
        for _ in range(maxiter):
            idx = np.flatnonzero(active)
            if idx.size == 0:
                break
            zm = np.array([gmpy2.mpc(complex(x).real, complex(x).imag) for x in z[idx]],
                          dtype=object)
            acc = np.full(idx.size, mc[-1], dtype=object)
            dacc = np.full(idx.size, zero, dtype=object)
            for k in range(d - 1, -1, -1):
                dacc = dacc * zm + acc
                acc = acc * zm + mc[k]
            ratio = np.empty(idx.size, complex)
            for t, (a, b) in enumerate(zip(acc, dacc)):
                if a == 0:
                    ratio[t] = 0.0
                elif b == 0:
                    ratio[t] = 1e-3 * (1 + abs(z[idx[t]]))
                else:
                    ratio[t] = complex(a / b)
            diff = z[idx][:, None] - z[None, :]
            diff[np.arange(idx.size), idx] = 1.0
            s = (1.0 / diff).sum(axis=1) - 1.0
            w = ratio / (1.0 - ratio * s)
            bad = ~np.isfinite(w)
            w[bad] = ratio[bad]
            z[idx] = z[idx] - w
            small = np.abs(w) <= 2.0 ** -50 * np.maximum(np.abs(z[idx]), 1e-300)
            tiny = np.abs(w) <= 1e-11 * (1 + np.abs(z[idx]))
            calm[idx] = np.where(tiny, calm[idx] + 1, 0)
            done = small | (ratio == 0) | (calm[idx] >= 25)
            active[idx[done]] = False
        converged = not active.any()
    return z, converged


def _cluster(values, rtol=CLUSTER_RTOL):
    """Group approximations within ``rtol*(1+|r|)``; returns (mean, count) pairs."""
    vals = list(values)
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= rtol * (1 + max(abs(vals[i]), abs(vals[j]))):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(vals[i])
    out = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    out.sort(key=lambda rm: (round(rm[0].real, 12), round(rm[0].imag, 12)))
    return out


def poly_roots(p: UniPoly, cluster_rtol: float = CLUSTER_RTOL):
    """Roots of ``p`` with multiplicities, as a list of ``(root, multiplicity)``.

    Simultaneous Aberth-Ehrlich iteration started from the Newton polygon of
    the coefficient moduli. When the iteration stalls it is restarted once from
    the companion-matrix eigenvalues.
    """
    if p.is_zero:
        raise ZeroPolynomial("poly_roots of the zero polynomial")
    cs = list(p.coeffs)
    nzero = 0
    while _is_zero(cs[nzero]):
        nzero += 1
    core = cs[nzero:]
    approx = np.zeros(0, complex)
    if len(core) > 1:
        prec = _working_precision([_log2abs(c) for c in core])
        approx, ok = _aberth(core, prec)
        for _ in range(2):
            if ok:
                break
            # clustered roots need more bits before the Newton ratio is resolved
            prec *= 3
            approx, ok = _aberth(core, prec, z_init=approx)
        if not ok:
            arr = np.array([complex(c) for c in core])
            approx, ok = _aberth(core, prec, z_init=np.roots(arr[::-1]))
            if not ok:
                warnings.warn("root iteration did not fully converge", RuntimeWarning)
    vals = list(approx) + [0j] * nzero
    return _cluster(vals, cluster_rtol)


def roots_flat(p: UniPoly) -> np.ndarray:
    """All roots repeated by multiplicity."""
    return np.array([r for r, m in poly_roots(p) for _ in range(m)], dtype=complex)


# ---------------------------------------------------------------------------
# gcd / resultants
# ---------------------------------------------------------------------------

def sylvester_matrix(p: UniPoly, q: UniPoly):
    m, n = p.degree, q.degree
    size = m + n
    exact = p.exact and q.exact
    zero = GaussRat(0) if exact else 0j
    S = [[zero] * size for _ in range(size)]
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for r in range(n):
        for k, c in enumerate(pc):
            S[r][r + k] = c
    for r in range(m):
        for k, c in enumerate(qc):
            S[n + r][r + k] = c
    return S


def _exact_det(M):
    M = [row[:] for row in M]
    n = len(M)
    det = GaussRat(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return GaussRat(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col]
        for r in range(col + 1, n):
            if M[r][col]:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return det


def resultant(p: UniPoly, q: UniPoly):
    """Resultant as the determinant of the Sylvester matrix."""
    if p.is_zero or q.is_zero:
        raise ZeroPolynomial("resultant with the zero polynomial")
    if p.degree == 0 and q.degree == 0:
        return GaussRat(1) if p.exact and q.exact else 1.0 + 0j
    S = sylvester_matrix(p, q)
    if p.exact and q.exact:
        return _exact_det(S)
    return complex(np.linalg.det(np.array(S, dtype=complex)))


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd; exact coefficients only."""
    if not (p.exact and q.exact):
        raise TypeError("poly_gcd needs exact coefficients; use coprime() for floats")
    a, b = p, q
    while not b.is_zero:
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero else a


def coprime(p: UniPoly, q: UniPoly, tol: float = 1e-10) -> bool:
    """True iff ``p`` and ``q`` share no root.

    Exact inputs use the Euclidean gcd. Float inputs use the smallest singular
    value of the Sylvester matrix of the unit-normalised polynomials, relative to
    the largest.
    """
    if p.is_zero or q.is_zero:
        raise ZeroPolynomial("coprime() with the zero polynomial")
    if p.degree == 0 or q.degree == 0:
        return True
    if p.exact and q.exact:
        return poly_gcd(p, q).degree == 0
    pa, qa = p.as_array(), q.as_array()
    pn = UniPoly(pa / np.linalg.norm(pa))
    qn = UniPoly(qa / np.linalg.norm(qa))
    sv = np.linalg.svd(np.array(sylvester_matrix(pn, qn), dtype=complex), compute_uv=False)
    return sv[-1] > tol * sv[0]


def discriminant_D(P: UniPoly, Q: UniPoly, R: UniPoly) -> UniPoly:
    """``Q**2 - 4*P*R``."""
    return Q * Q - P * R * 4


def residue_at(num: UniPoly, den: UniPoly, z0, tol: float = 1e-10):
    """Residue of ``num/den`` at a simple root ``z0`` of ``den``."""
    d1 = den.deriv()
    dv = d1(z0)
    scale = sum(abs(complex(c)) for c in den.coeffs) * (1 + abs(complex(z0))) ** max(den.degree, 0)
    if abs(complex(dv)) <= tol * scale:
        raise NotSimplePole(f"{complex(z0)} is not a simple root of the denominator")
    return num(z0) / dv


# ---------------------------------------------------------------------------
# bivariate polynomials
# ---------------------------------------------------------------------------

class BiPoly:
    """Sparse polynomial in (C, z): ``{(i, j): alpha_ij}`` for ``alpha_ij C**i z**j``."""

    __slots__ = ("monomials",)

    def __init__(self, monomials=None, exact: bool = False):
        out = {}
        for (i, j), c in dict(monomials or {}).items():
            i, j = int(i), int(j)
            if i < 0 or j < 0:
                raise ValueError("exponents must be non-negative")
            c = GaussRat.coerce(c) if exact else (c if isinstance(c, GaussRat) else complex(c))
            if c:
                out[(i, j)] = c
        self.monomials = out

    @property
    def exact(self) -> bool:
        return any(isinstance(c, GaussRat) for c in self.monomials.values())

    @property
    def support(self):
        return frozenset(self.monomials)

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    def coeff(self, i, j):
        return self.monomials.get((i, j), GaussRat(0) if self.exact else 0j)

    def items(self):
        return sorted(self.monomials.items())

    @property
    def c_degree(self) -> int:
        return max((i for i, _ in self.monomials), default=-1)

    def coeff_poly(self, i: int) -> UniPoly:
        """Coefficient of ``C**i`` as a polynomial in z."""
        js = [j for (a, j) in self.monomials if a == i]
        if not js:
            return UniPoly([], exact=self.exact)
        zero = GaussRat(0) if self.exact else 0j
        cs = [zero] * (max(js) + 1)
        for j in js:
            cs[j] = self.monomials[(i, j)]
        return UniPoly(cs, exact=self.exact)

    @classmethod
    def from_coefficient_polys(cls, polys) -> "BiPoly":
        """``sum_i polys[i](z) * C**i``."""
        mon = {}
        exact = any(p.exact for p in polys if not p.is_zero)
        for i, p in enumerate(polys):
            for j, c in enumerate(p.coeffs):
                if c:
                    mon[(i, j)] = c
        return cls(mon, exact=exact)

    @classmethod
    def from_triple(cls, P: UniPoly, Q: UniPoly, R: UniPoly) -> "BiPoly":
        """``P(z) C**2 + Q(z) C + R(z)``."""
        return cls.from_coefficient_polys([R, Q, P])

    def __add__(self, other: "BiPoly") -> "BiPoly":
        mon = dict(self.monomials)
        for k, c in other.monomials.items():
            mon[k] = mon[k] + c if k in mon else c
        return BiPoly(mon, exact=self.exact and other.exact)

    def __neg__(self):
        return BiPoly({k: -c for k, c in self.monomials.items()}, exact=self.exact)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            mon = {}
            for (i, j), a in self.monomials.items():
                for (k, l), b in other.monomials.items():
                    key = (i + k, j + l)
                    mon[key] = mon[key] + a * b if key in mon else a * b
            return BiPoly(mon, exact=self.exact and other.exact)
        return BiPoly({k: c * other for k, c in self.monomials.items()},
                      exact=self.exact and isinstance(other, (int, Fraction, GaussRat)))

    __rmul__ = __mul__

    def __call__(self, C, z):
        return sum(complex(c) * C ** i * z ** j for (i, j), c in self.monomials.items())

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.monomials == other.monomials
        return NotImplemented

    def __repr__(self):
        return f"BiPoly({self.items()!r})"

    def to_float(self) -> "BiPoly":
        return BiPoly({k: complex(c) for k, c in self.monomials.items()})

    def to_json(self) -> dict:
        out = []
        for (i, j), c in self.items():
            if isinstance(c, GaussRat):
                out.append({"i": i, "j": j,
                            "re": {"num": c.re.numerator, "den": c.re.denominator},
                            "im": {"num": c.im.numerator, "den": c.im.denominator}})
            else:
                out.append({"i": i, "j": j, "re": c.real, "im": c.imag})
        return {"monomials": out}

    @classmethod
    def from_json(cls, doc) -> "BiPoly":
        from .errors import SchemaError
        try:
            mons = doc["monomials"]
            exact = any(isinstance(m.get("re"), dict) or isinstance(m.get("im"), dict)
                        for m in mons)
            out = {}
            for m in mons:
                re, im = m.get("re", 0), m.get("im", 0)
                if exact:
                    val = GaussRat(
                        Fraction(re["num"], re.get("den", 1)) if isinstance(re, dict) else Fraction(re),
                        Fraction(im["num"], im.get("den", 1)) if isinstance(im, dict) else Fraction(im))
                else:
                    val = complex(float(re), float(im))
                key = (int(m["i"]), int(m["j"]))
                out[key] = out[key] + val if key in out else val
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise SchemaError("bivariate polynomial needs a 'monomials' list of {i,j,re,im}") from exc
        return cls(out, exact=exact)


class NewtonSupport:
    """Support set, its convex hull (Newton polygon) and ``M = min(i - j)``."""

    __slots__ = ("points", "hull", "M")

    def __init__(self, points):
        self.points = frozenset((int(i), int(j)) for i, j in points)
        if not self.points:
            raise ValueError("empty support")
        self.hull = tuple(convex_hull(self.points))
        self.M = min(i - j for i, j in self.points)

    @property
    def dimension(self) -> int:
        return min(len(self.hull) - 1, 2)

    def __repr__(self):
        return f"NewtonSupport(points={sorted(self.points)}, M={self.M})"


def convex_hull(points):
    """Counter-clockwise hull vertices (collinear points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def newton_support(P: BiPoly) -> NewtonSupport:
    if P.is_zero:
        raise ZeroPolynomial("newton_support of the zero polynomial")
    return NewtonSupport(P.support)
