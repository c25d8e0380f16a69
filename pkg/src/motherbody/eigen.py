"""Exactly solvable operators and their eigenpolynomials.

An operator ``sum_{i=1}^k Q_i(z) d^i/dz^i`` with ``deg Q_i <= i`` maps
polynomials of degree ``m`` to polynomials of degree ``<= m``. Its
homogenized spectral problem

    sum_i lam**(k-i) Q_i(z) p^(i)(z) = lam**k p(z)

is therefore triangular in the monomial basis and is solved by
back-substitution. Eigenpolynomials of degree in the hundreds have monomial
coefficients whose roots are extremely ill-conditioned, so the solve is done
in extended precision (gmpy2) and handed unrounded to the root finder.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import gmpy2
import numpy as np

from .branch import genericity_irreducible, is_balanced, probability_branch_test
from .errors import (EvalAtRoot, MultipleRootLambda, NoConstantTerm, NoProbabilityBranch,
                     NotBalanced, NoUnitRoot, Resonance)
from .polyalg import BiPoly, UniPoly, _to_mpc, newton_support, roots_flat

RESONANCE_RTOL = 1e-10
UNIT_ROOT_TOL = 1e-10


@dataclass(frozen=True)
class ExactlySolvableOperator:
    Qs: tuple            # Q_1 .. Q_k

    def __post_init__(self):
        Qs = tuple(q if isinstance(q, UniPoly) else UniPoly(q) for q in self.Qs)
        object.__setattr__(self, "Qs", tuple(q.to_float() for q in Qs))
        if not self.Qs:
            raise ValueError("operator needs at least one coefficient")
        for i, q in enumerate(self.Qs, start=1):
            if q.degree > i:
                raise ValueError(f"deg Q_{i} = {q.degree} exceeds {i}")
        if not any(q.degree == i for i, q in enumerate(self.Qs, start=1)):
            raise ValueError("no coefficient with deg Q_i = i: operator is not exactly solvable")

    @property
    def k(self) -> int:
        return len(self.Qs)

    @property
    def a(self) -> np.ndarray:
        """``a[i, j]`` = coefficient of ``z**j`` in ``Q_i`` (row 0 unused)."""
        k = self.k
        out = np.zeros((k + 1, k + 1), complex)
        for i, q in enumerate(self.Qs, start=1):
            for j in range(q.degree + 1):
                out[i, j] = complex(q.coeff(j))
        return out

    @property
    def j0(self) -> int:
        return max(i for i, q in enumerate(self.Qs, start=1) if q.degree == i)

    @property
    def nondegenerate(self) -> bool:
        return self.j0 == self.k

    def symbol(self) -> BiPoly:
        mons = {}
        for i, q in enumerate(self.Qs, start=1):
            for j, c in enumerate(q.coeffs):
                mons[(i, j)] = c
        return BiPoly(mons)

    def limit_polynomial(self) -> np.ndarray:
        """Coefficients (highest power first) of ``t**k - sum a_ii t**(k-i)``.

        Its roots are the possible limits of ``lam_n / n``.
        """
        a = self.a
        return np.array([1.0] + [-a[i, i] for i in range(1, self.k + 1)], complex)

    def to_json(self) -> dict:
        return {"k": self.k, "Qs": [q.to_json() for q in self.Qs],
                "nondegenerate": self.nondegenerate, "j0": self.j0}


@dataclass(frozen=True)
class EigenPair:
    n: int
    lam: complex
    p: UniPoly           # monic, extended-precision coefficients
    lam_mp: object = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        return {"n": self.n, "lambda": [self.lam.real, self.lam.imag],
                "p": self.p.to_float().to_json()}


@dataclass(frozen=True)
class RootMeasure:
    points: np.ndarray

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.n, 1.0 / self.n)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def cauchy(self, z):
        z = np.asarray(z, complex)
        return np.mean(1.0 / (z[..., None] - self.points), axis=-1)

    def histogram(self, bins=40, axis="real") -> dict:
        x = self.points.real if axis == "real" else self.points.imag
        dens, edges = np.histogram(x, bins=bins, density=True)
        return {"axis": axis, "edges": edges.tolist(), "density": dens.tolist()}


def _falling(n: int, i: int) -> float:
    out = 1
    for t in range(i):
        out *= n - t
    return out


# ---------------------------------------------------------------------------

def operator_from_balanced(P: BiPoly) -> ExactlySolvableOperator:
    """Operator whose symbol is ``P + 1`` after scaling the constant term to -1."""
    if not is_balanced(P):
        raise NotBalanced(f"M(P) = {newton_support(P).M} != 0")
    c0 = complex(P.coeff(0, 0))
    if c0 == 0:
        raise NoConstantTerm("balanced polynomial without constant term")
    report = probability_branch_test(P)
    # a unit root of the limit equation is all the operator needs; a double
    # unit root is reported later by select_principal_sequence
    if not report.necessary_holds:
        raise NoProbabilityBranch(f"diagonal sum {complex(report.diagonal_sum)} != 0")
    if not genericity_irreducible(newton_support(P)):
        warnings.warn("support is not generically irreducible; continuing", UserWarning)
    scale = -1.0 / c0
    k = P.c_degree
    Qs = [UniPoly([0])] * k
    for i in range(1, k + 1):
        Qs[i - 1] = P.coeff_poly(i).to_float() * scale
    return ExactlySolvableOperator(tuple(Qs))


def _eigen_equation(op: ExactlySolvableOperator, n: int) -> np.ndarray:
    a = op.a
    return np.array([1.0] + [-a[i, i] * _falling(n, i) for i in range(1, op.k + 1)], complex)


def eigenvalues_for_degree(op: ExactlySolvableOperator, n: int) -> list:
    """All ``k`` roots of the degree-``n`` eigenvalue equation, with multiplicity."""
    if n < 1:
        raise ValueError("n must be positive")
    # roots of the scaled equation in lam/n are O(1)
    a = op.a
    scaled = np.array([1.0] + [-a[i, i] * _falling(n, i) / n ** i for i in range(1, op.k + 1)])
    nz = op.k
    while nz > 0 and scaled[nz] == 0:
        nz -= 1
    roots = list(np.roots(scaled[: nz + 1]) * n) if nz > 0 else []
    roots += [0j] * (op.k - nz)
    out = [_refine_lambda(op, n, complex(r)) if r != 0 else 0j for r in roots]
    return sorted(out, key=lambda z: (-z.real, -z.imag))


def _refine_lambda(op, n, lam, prec=None):
    """Newton polish of a root of the eigenvalue equation; returns (complex, mpc)."""
    c = _eigen_equation(op, n)
    mp = prec is not None
    with gmpy2.context(gmpy2.get_context(), precision=prec or 53):
        cm = [_to_mpc(x) for x in c]
        x = _to_mpc(lam)
        for _ in range(200 if mp else 30):
            f = cm[0]
            df = gmpy2.mpc(0)
            for t in cm[1:]:
                df = df * x + f
                f = f * x + t
            if df == 0:
                break
            step = f / df
            x = x - step
            if abs(step) <= abs(x) * gmpy2.mpfr(2) ** (-(prec or 53) + 4) or step == 0:
                break
    if mp:
        return complex(x), x
    return complex(x)


def _limit_checks(op):
    g = op.limit_polynomial()
    g1 = np.polyval(g, 1.0)
    dg1 = np.polyval(np.polyder(g), 1.0)
    scale = np.sum(np.abs(g))
    if abs(g1) > UNIT_ROOT_TOL * scale:
        raise NoUnitRoot(f"limit equation at 1 equals {g1}")
    if abs(dg1) <= UNIT_ROOT_TOL * scale:
        raise MultipleRootLambda("1 is a multiple root of the limit equation")


def select_principal_sequence(op: ExactlySolvableOperator, n_max: int, n_min: int | None = None):
    """Eigenvalues ``lam_n`` (``n_min <= n <= n_max``) on the branch with ``lam_n/n -> 1``.

    Nearest-neighbour continuation of ``lam_n/n`` starting at ``n_max`` (anchored
    at the root closest to 1) and marching down. Returns ``[(n, lam_n), ...]``
    in increasing ``n``.
    """
    _limit_checks(op)
    n_min = op.k if n_min is None else n_min
    out = []
    prev = 1.0 + 0j
    for n in range(n_max, n_min - 1, -1):
        lams = eigenvalues_for_degree(op, n)
        ratio = [lam / n for lam in lams]
        j = int(np.argmin([abs(r - prev) for r in ratio]))
        prev = ratio[j]
        out.append((n, lams[j]))
    return out[::-1]


def _precision_for(n: int) -> int:
    return 128 + 4 * n


def homogenized_matrix_entry(op, lam, l: int, m: int):
    """Coefficient of ``z**l`` in the homogenized operator applied to ``z**m``."""
    s = m - l
    if s < 0:
        return 0
    tot = 0
    for i in range(1, op.k + 1):
        j = i - s
        if 0 <= j <= i:
            tot += lam ** (op.k - i) * op.a[i, j] * _falling(m, i)
    return tot


def eigenpolynomial(op: ExactlySolvableOperator, n: int, lam) -> EigenPair:
    """Monic degree-``n`` solution of the homogenized problem for eigenvalue ``lam``.

    ``lam`` is polished to a root of the eigenvalue equation before the
    triangular solve. Raises Resonance when a lower diagonal entry coincides
    with ``lam**k``.
    """
    k = op.k
    prec = _precision_for(n)
    lam = complex(lam)
    if lam != 0:
        lam_c, lam_m = _refine_lambda(op, n, lam, prec=prec)
        if abs(lam_c - lam) > 1e-6 * max(1.0, abs(lam)):
            raise ValueError(f"{lam} is not an eigenvalue for degree {n}")
    else:
        lam_c, lam_m = 0j, gmpy2.mpc(0)
    A = op.a
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        lam_pows = [gmpy2.mpc(1)]
        for _ in range(k):
            lam_pows.append(lam_pows[-1] * lam_m)
        lk = lam_pows[k]
        am = {(i, j): _to_mpc(A[i, j]) for i in range(1, k + 1) for j in range(i + 1) if A[i, j] != 0}
        # T(l, m) with s = m - l: sum_i lam^(k-i) a[i, i-s] m^(i)
        by_shift = {}
        for (i, j), c in am.items():
            by_shift.setdefault(i - j, []).append((i, lam_pows[k - i] * c))

        def entry(s, m):
            tot = gmpy2.mpc(0)
            for i, c in by_shift.get(s, ()):
                f = _falling(m, i)
                if f:
                    tot += c * f
            return tot

        c = [gmpy2.mpc(0)] * (n + 1)
        c[n] = gmpy2.mpc(1)
        lkabs = abs(lk)
        for l in range(n - 1, -1, -1):
            d = entry(0, l)
            denom = lk - d
            if abs(denom) <= RESONANCE_RTOL * max(lkabs, abs(d), 1e-300) or (lk == 0 and d == 0):
                raise Resonance(f"diagonal entry at degree {l} equals lam^k", degree=l)
            rhs = gmpy2.mpc(0)
            for s in range(1, min(k, n - l) + 1):
                if by_shift.get(s):
                    rhs += c[l + s] * entry(s, l + s)
            c[l] = rhs / denom
    return EigenPair(n=n, lam=lam_c, p=UniPoly(c), lam_mp=lam_m)


def eigen_residual(op: ExactlySolvableOperator, pair: EigenPair) -> np.ndarray:
    """Coefficients of ``sum lam^(k-i) Q_i p^(i) - lam^k p`` (extended precision, returned as complex)."""
    k = op.k
    with gmpy2.context(gmpy2.get_context(), precision=_precision_for(pair.n)):
        lam = pair.lam_mp if pair.lam_mp is not None else _to_mpc(pair.lam)
        p = pair.p.to_mp()
        acc = p * (-(lam ** k))
        for i, q in enumerate(op.Qs, start=1):
            acc = acc + q.to_mp() * p.deriv(i) * (lam ** (k - i))
        return np.array([complex(x) for x in acc.coeffs] or [0j])


def root_measure(pair: EigenPair) -> RootMeasure:
    return RootMeasure(points=roots_flat(pair.p))


def cauchy_of_polynomial(p: UniPoly, z) -> complex:
    """``p'(z) / (n p(z))``, the Cauchy transform of the root-counting measure."""
    val = complex(p(z)) if p.kind != "mp" else complex(p(_to_mpc(z)))
    if val == 0:
        raise EvalAtRoot(f"p vanishes at {z}")
    dp = p.deriv()
    dval = complex(dp(z)) if p.kind != "mp" else complex(dp(_to_mpc(z)))
    return dval / (p.degree * val)


def log_derivative_ratio(pair: EigenPair, z) -> complex:
    """``L_n(z) = p_n'(z) / (lambda_n p_n(z))``, the quantity entering the symbol equation."""
    return cauchy_of_polynomial(pair.p, z) * pair.n / complex(pair.lam)


def symbol_residual(op: ExactlySolvableOperator, L, z) -> float:
    """``|sum_i Q_i(z) L**i - 1|``."""
    L = complex(L)
    return abs(sum(complex(q(z)) * L ** i for i, q in enumerate(op.Qs, start=1)) - 1)


def roots_bounded_check(op: ExactlySolvableOperator, n_list) -> dict:
    """Largest root modulus of the principal eigenpolynomial for each degree."""
    n_list = sorted(set(int(n) for n in n_list))
    warns = []
    if not op.nondegenerate:
        warns.append("nondegeneracy hypothesis unmet: boundedness is not guaranteed")
    try:
        _limit_checks(op)
        seq = dict(select_principal_sequence(op, max(n_list), n_min=min(n_list)))
    except (NoUnitRoot, MultipleRootLambda) as exc:
        warns.append(f"limit-equation hypothesis unmet ({exc.code})")
        seq = {n: max(eigenvalues_for_degree(op, n), key=lambda z: abs(z)) for n in n_list}
    maxmod = {}
    for n in n_list:
        pair = eigenpolynomial(op, n, seq[n])
        r = roots_flat(pair.p)
        maxmod[n] = float(np.max(np.abs(r))) if r.size else 0.0
    vals = list(maxmod.values())
    med = float(np.median(vals))
    growing = any(v > 2 * med for v in vals) if med > 0 else any(v > 0 for v in vals)
    return {"max_modulus": maxmod, "growth_flag": bool(growing), "warnings": warns}
