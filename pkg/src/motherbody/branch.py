"""Branches at infinity: probability-branch tests and formal series.

Conventions: a bivariate polynomial is stored as ``{(i, j): alpha}`` for
``alpha * C**i * z**j``; a branch at infinity is written in ``w = 1/z`` as
``C = a0*w + a2*w**2 + a3*w**3 + ...``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (MultiplePole, NecessaryConditionFails, NonRealResidue,
                     NotCoprime, SufficientConditionFails, ZeroPolynomial)
from .measure import SignedMeasure, atomic_measure
from .polyalg import BiPoly, GaussRat, NewtonSupport, UniPoly, coprime, newton_support, poly_roots

ZERO_RTOL = 1e-10


@dataclass(frozen=True)
class BranchSeries:
    a0: float
    tail: tuple          # a_2 .. a_N
    N: int
    exact: bool = False

    def coefficient(self, i: int):
        if i == 1:
            return self.a0
        if i == 0 or i > self.N:
            return 0
        return self.tail[i - 2]

    def __call__(self, z):
        w = 1.0 / np.asarray(z, complex)
        out = self.a0 * w
        for i, a in enumerate(self.tail, start=2):
            out = out + complex(a) * w ** i
        return out

    def to_json(self) -> dict:
        return {"a0": self.a0, "N": self.N,
                "tail": [[complex(a).real, complex(a).imag] for a in self.tail]}


@dataclass(frozen=True)
class BranchReport:
    M: int
    necessary_holds: bool
    sufficient_holds: bool
    diagonal_sum: complex
    weighted_diagonal_sum: complex

    def to_json(self) -> dict:
        return {"M": self.M,
                "necessary_holds": self.necessary_holds,
                "sufficient_holds": self.sufficient_holds,
                "diagonal_sum": [complex(self.diagonal_sum).real, complex(self.diagonal_sum).imag],
                "weighted_diagonal_sum": [complex(self.weighted_diagonal_sum).real,
                                          complex(self.weighted_diagonal_sum).imag]}


def _diagonal(P: BiPoly, M: int):
    return [(i, c) for (i, j), c in P.items() if i - j == M]


def _vanishes(value, scale, exact) -> bool:
    if exact:
        return value == 0
    return abs(complex(value)) <= ZERO_RTOL * scale


def probability_branch_test(P: BiPoly) -> BranchReport:
    """Evaluate the diagonal conditions for a branch ``C ~ 1/z`` at infinity.

    ``necessary_holds``: the coefficients on the lowest diagonal
    ``i - j = M(P)`` sum to zero. ``sufficient_holds``: their ``i``-weighted
    sum does not vanish (infinity is not a branch point). The two flags are
    reported independently.
    """
    if P.is_zero:
        raise ZeroPolynomial("probability_branch_test of the zero polynomial")
    M = newton_support(P).M
    diag = _diagonal(P, M)
    exact = P.exact
    zero = GaussRat(0) if exact else 0j
    s = sum((c for _, c in diag), zero)
    ws = sum((c * i for i, c in diag), zero)
    scale = sum(abs(complex(c)) for _, c in diag)
    wscale = sum(i * abs(complex(c)) for i, c in diag)
    necessary = _vanishes(s, scale, exact)
    sufficient = not _vanishes(ws, max(wscale, scale), exact)
    return BranchReport(M, necessary, sufficient, s, ws)


# ---------------------------------------------------------------------------
# truncated power series in w
# ---------------------------------------------------------------------------

def _series_mul(a, b, n, zero):
    out = [zero] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j, y in enumerate(b[: n - i]):
            out[i + j] = out[i + j] + x * y
    return out


def shifted_substitution(P: BiPoly, d, n: int):
    """Coefficients of ``sum alpha_ij * d(w)**i * w**(i - j - M)`` mod ``w**n``.

    ``d`` is the coefficient list of ``D = C/w``.
    """
    M = newton_support(P).M
    exact = P.exact
    zero = GaussRat(0) if exact else 0j
    one = GaussRat(1) if exact else 1 + 0j
    powers = [[one] + [zero] * (n - 1)]
    for _ in range(P.c_degree):
        powers.append(_series_mul(powers[-1], d, n, zero))
    out = [zero] * n
    for (i, j), c in P.items():
        shift = i - j - M
        for k in range(n - shift):
            if powers[i][k]:
                out[k + shift] = out[k + shift] + c * powers[i][k]
    return out


def expand_probability_branch(P: BiPoly, N: int) -> BranchSeries:
    """Probability branch ``C = 1/z + sum_{i=2}^N a_i/z**i`` solving ``P(C, z) = 0``.

    Works in ``C = D*w``: each new coefficient is the unique solution of a
    linear equation whose slope is the weighted diagonal sum.
    """
    report = probability_branch_test(P)
    if not report.necessary_holds:
        raise NecessaryConditionFails(
            f"diagonal sum {complex(report.diagonal_sum)} != 0", report=report)
    if not report.sufficient_holds:
        raise SufficientConditionFails(
            "weighted diagonal sum vanishes; the recursion cannot be solved", report=report)
    exact = P.exact
    zero = GaussRat(0) if exact else 0j
    one = GaussRat(1) if exact else 1 + 0j
    slope = report.weighted_diagonal_sum
    n = max(N, 1)
    d = [one] + [zero] * (n - 1)
    for r in range(n - 1):
        b = shifted_substitution(P, d, r + 2)[r + 1]
        d[r + 1] = -b / slope
    tail = tuple(d[1:N])
    return BranchSeries(a0=1.0, tail=tail, N=N, exact=exact)


def branch_residual(P: BiPoly, series: BranchSeries, n: int):
    """Coefficients of ``w**0 .. w**(n-1)`` of ``P(series, 1/w) * w**(-M)``."""
    exact = series.exact and P.exact
    zero = GaussRat(0) if exact else 0j
    one = GaussRat(1) if exact else 1 + 0j
    d = [one] + [a if exact else complex(a) for a in series.tail]
    d = (d + [zero] * n)[:n]
    return shifted_substitution(P if exact else P.to_float(), d, n)


def is_balanced(P: BiPoly) -> bool:
    return newton_support(P).M == 0


def genericity_irreducible(S: NewtonSupport) -> bool:
    """Generic irreducibility of polynomials with support ``S``.

    Requires a two-dimensional Newton polygon and a point on each coordinate
    axis (the origin counts for both).
    """
    if S.dimension < 2:
        return False
    on_c_axis = any(j == 0 for _, j in S.points)
    on_z_axis = any(i == 0 for i, _ in S.points)
    return on_c_axis and on_z_axis


def rational_motherbody(num: UniPoly, den: UniPoly, tol: float = 1e-10) -> SignedMeasure:
    """Atomic motherbody of ``num/den``: one atom per pole, weight = residue.

    Pole locations may be complex; every pole must be simple with a real
    residue.
    """
    if num.is_zero or den.is_zero:
        raise ZeroPolynomial("rational_motherbody needs nonzero numerator and denominator")
    if num.degree >= den.degree:
        raise ValueError("the germ must vanish at infinity (deg num < deg den)")
    if not coprime(num, den):
        raise NotCoprime("numerator and denominator share a root")
    atoms = []
    d1 = den.deriv()
    for z0, mult in poly_roots(den):
        if mult > 1:
            raise MultiplePole(f"pole of order {mult} at {z0}", pole=z0, order=mult)
        res = complex(num(z0)) / complex(d1(z0))
        if abs(res.imag) > tol * (1 + abs(res)):
            raise NonRealResidue(f"residue {res} at {z0}", pole=z0, residue=res)
        atoms.append((z0, res.real))
    return atomic_measure(atoms)
