"""Independent numerical checks of candidate measures.

Everything here works from a :class:`~motherbody.measure.SignedMeasure`
alone (plus the defining equation where needed), so it can audit measures
produced by any route, including ones read back from JSON.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import LevelCurveNotClosed, TooCloseToSupport
from .measure import Arc, SignedMeasure, grading_power
from .polyalg import BiPoly, UniPoly, newton_support, poly_roots

SEED = 0x5EED
EXCLUSION = 1e-3
GAUSS_NODES = 32

_GX, _GW = np.polynomial.legendre.leggauss(GAUSS_NODES)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def _panel_rule(a, b, k_left, k_right, n_panels):
    """Composite Gauss nodes/weights on [a, b] graded towards the ends."""
    mid = 0.5 * (a + b)
    ts, ws = [], []
    for lo, hi, k, flip in ((a, mid, k_left, False), (mid, b, k_right, True)):
        L = hi - lo
        edges = np.linspace(0.0, 1.0, n_panels + 1)
        for u0, u1 in zip(edges[:-1], edges[1:]):
            u = 0.5 * (u1 - u0) * _GX + 0.5 * (u1 + u0)
            wu = 0.5 * (u1 - u0) * _GW
            s = L * u ** k
            ds = L * k * u ** (k - 1) * wu
            if flip:
                ts.append(hi - s)
            else:
                ts.append(lo + s)
            ws.append(ds)
    return np.concatenate(ts), np.concatenate(ws)


def arc_integral(arc: Arc, f, n_panels: int = 4, rtol: float = 1e-13, max_panels: int = 256):
    """``int f(z) dmu`` over one arc, refining the panels until two passes agree."""
    t0, t1 = arc.t_span
    kl, kr = (grading_power(e) for e in arc.end_exponents)
    prev = None
    n = n_panels
    while True:
        t, w = _panel_rule(t0, t1, kl, kr, n)
        val = np.dot(w * arc.rate_at(t), f(arc.z_of(t)))
        if prev is not None and abs(val - prev) <= rtol * max(1e-300, abs(val), abs(prev)) + 1e-300:
            return val
        if n >= max_panels:
            return val
        prev = val
        n *= 2


def integrate(mu: SignedMeasure, f, **kw) -> complex:
    total = sum(a.weight * f(np.array([complex(a.location)]))[0] for a in mu.atoms)
    for arc in mu.arcs:
        total = total + arc_integral(arc, f, **kw)
    return complex(total)


def _check_distance(mu: SignedMeasure, z: complex):
    pts = mu.support_points(per_arc=2000)
    if pts.size == 0:
        return
    dist = float(np.min(np.abs(pts - z)))
    if dist <= EXCLUSION * (1 + abs(z)):
        raise TooCloseToSupport(f"{z} lies within {dist:.3g} of the support", point=z, distance=dist)


def cauchy_quadrature(mu: SignedMeasure, z, check: bool = True) -> complex:
    """Cauchy transform ``int dmu(x) / (z - x)`` at a point off the support."""
    z = complex(z)
    if check:
        _check_distance(mu, z)
    return integrate(mu, lambda x: 1.0 / (z - x))


def moments(mu: SignedMeasure, k_max: int) -> list:
    """Holomorphic moments ``m_k = int x**k dmu`` for ``k = 0..k_max``."""
    ks = np.arange(k_max + 1)
    out = np.zeros(k_max + 1, complex)
    for a in mu.atoms:
        out += a.weight * complex(a.location) ** ks
    for arc in mu.arcs:
        for k in ks:
            out[k] += arc_integral(arc, lambda x, k=k: x ** k)
    out[0] = mu.total_mass
    return [complex(m) for m in out]


def log_potential(mu: SignedMeasure, z, check: bool = True) -> float:
    """Logarithmic potential ``int log|z - x| dmu``."""
    z = complex(z)
    if check:
        _check_distance(mu, z)
    return float(integrate(mu, lambda x: np.log(np.abs(z - x))).real)


# ---------------------------------------------------------------------------
# comparison with an equation
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    sample_points: list
    branch_values: list
    quadrature_values: list
    max_abs_error: float
    moments: list = field(default_factory=list)
    mass_error: float = float("nan")
    equation_residual: float = float("nan")
    branch_mismatch: bool = False
    skipped: int = 0

    def to_json(self) -> dict:
        c = lambda z: [complex(z).real, complex(z).imag]   # noqa: E731
        return {"sample_points": [c(z) for z in self.sample_points],
                "branch_values": [c(z) for z in self.branch_values],
                "quadrature_values": [c(z) for z in self.quadrature_values],
                "max_abs_error": self.max_abs_error, "moments": [c(m) for m in self.moments],
                "mass_error": self.mass_error, "equation_residual": self.equation_residual,
                "branch_mismatch": self.branch_mismatch, "skipped": self.skipped}


def _as_bipoly(equation) -> BiPoly:
    if isinstance(equation, BiPoly):
        return equation
    polys = [p.to_float() for p in equation]
    if len(polys) == 3:
        P, Q, R = polys
        return BiPoly.from_triple(P, Q, R)
    if len(polys) == 2:
        num, den = polys                     # den * C - num = 0
        return BiPoly.from_coefficient_polys([-num, den])
    raise ValueError("equation must be a BiPoly, (P, Q, R) or (num, den)")


def _equation_roots(bp: BiPoly, z: complex):
    cs = [complex(bp.coeff_poly(i)(z)) if not bp.coeff_poly(i).is_zero else 0j
          for i in range(bp.c_degree + 1)]
    return np.roots(np.array(cs[::-1])), cs


def germ_residues(bp: BiPoly) -> np.ndarray:
    """Values ``a`` for which the equation has a branch ``a/z + O(1/z**2)`` at infinity."""
    M = newton_support(bp).M
    diag = np.zeros(bp.c_degree + 1, complex)
    for (i, j), c in bp.items():
        if i - j == M:
            diag[i] += complex(c)
    roots = np.roots(diag[::-1]) if np.count_nonzero(diag) > 1 else np.zeros(0)
    return roots[np.abs(roots) > 1e-14]


def random_samples(n: int, radius: float = 5.0, seed: int = SEED) -> np.ndarray:
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def compare_branch(mu: SignedMeasure, equation, samples=100, branch=None, seed: int = SEED,
                   radius: float = 5.0, k_max: int = 6) -> VerificationReport:
    """Check the quadrature transform against the equation at sample points.

    ``samples`` is a count (random points in a disk, fixed seed) or an array
    of points. ``branch`` is the designated branch (a callable, e.g.
    ``Section.value``); without it the nearest root of the equation is used,
    so only the equation residual is tested. Points too close to the support
    are skipped and counted.
    """
    bp = _as_bipoly(equation)
    pts = random_samples(samples, radius, seed) if np.isscalar(samples) else np.asarray(samples, complex)
    kept, bvals, qvals, resid = [], [], [], []
    skipped = 0
    mismatch = False
    for z in pts:
        try:
            q = cauchy_quadrature(mu, z)
        except TooCloseToSupport:
            skipped += 1
            continue
        roots, cs = _equation_roots(bp, z)
        scale = sum(abs(c) * abs(q) ** i for i, c in enumerate(cs)) or 1.0
        resid.append(abs(sum(c * q ** i for i, c in enumerate(cs))) / scale)
        if branch is not None:
            b = complex(branch(z))
            if roots.size > 1:
                other = roots[np.argmax(np.abs(roots - b))]
                if abs(q - other) < abs(q - b):
                    mismatch = True
        else:
            b = complex(roots[np.argmin(np.abs(roots - q))]) if roots.size else np.nan
        kept.append(complex(z))
        bvals.append(b)
        qvals.append(q)
    err = float(np.max(np.abs(np.array(bvals) - np.array(qvals)))) if kept else float("nan")
    m = moments(mu, k_max)
    germ = germ_residues(bp)
    mass_err = float(np.min(np.abs(germ - mu.total_mass))) if germ.size else float("nan")
    return VerificationReport(kept, bvals, qvals, err, m, mass_err,
                              float(max(resid)) if resid else float("nan"), mismatch, skipped)


def moment_expansion_error(mu: SignedMeasure, z, k_max: int = 6) -> float:
    """``|C(z) - sum_k m_k / z**(k+1)|`` at a large ``z``."""
    m = moments(mu, k_max)
    z = complex(z)
    series = sum(mk / z ** (k + 1) for k, mk in enumerate(m))
    return abs(cauchy_quadrature(mu, z) - series)


# ---------------------------------------------------------------------------
# jump density
# ---------------------------------------------------------------------------

def jump_density_check(mu: SignedMeasure, qd, n: int = 101) -> float:
    """Largest relative imaginary part of the predicted jump density along the arcs.

    The jump of the Cauchy transform across an arc is ``+-sqrt(D)/P``; along a
    horizontal trajectory ``tangent * sqrt(D)/P / (2 pi i)`` is real.
    """
    D, P = qd.D, qd.P
    worst = 0.0
    for arc in mu.arcs:
        t = np.linspace(*arc.t_span, n)[1:-1]
        z = arc.z_of(t)
        tau = arc.dz_of(t)
        tau = tau / np.abs(tau)
        val = tau * np.sqrt(D(z) + 0j) / P(z) / (2j * np.pi)
        rel = np.abs(val.imag) / np.maximum(np.abs(val), 1e-300)
        worst = max(worst, float(np.max(rel)))
    return worst


# ---------------------------------------------------------------------------
# level curves of rational germs
# ---------------------------------------------------------------------------

class RationalGerm:
    """``f = num/den`` with ``f ~ a0/z`` at infinity and real residues."""

    def __init__(self, num: UniPoly, den: UniPoly):
        self.num, self.den = num.to_float(), den.to_float()
        if self.den.degree != self.num.degree + 1:
            raise ValueError("f must behave like a0/z at infinity")
        self.a0 = complex(self.num.lc) / complex(self.den.lc)
        if abs(self.a0.imag) > 1e-12 or self.a0.real <= 0:
            raise ValueError("the leading coefficient a0 must be real and positive")
        self.a0 = self.a0.real
        self._poles = poly_roots(self.den)
        self._dnum = self.num.deriv()
        self._dden = self.den.deriv()
        self._partial = self._partial_fractions()

    def _partial_fractions(self):
        """``[(pole, [c1, c2, ...])]`` with ``f = sum c_k / (z - p)**k``."""
        out = []
        from math import factorial
        for p, m in self._poles:
            if m == 1:
                out.append((complex(p), [complex(self.num(p)) / complex(self._dden(p))]))
                continue
            others = [q for q, k in self._poles for _ in range(k) if q != p]
            rest = UniPoly.from_roots(others, lead=complex(self.den.lc)) if others else UniPoly([complex(self.den.lc)])
            # g = num / rest is analytic at p; c_k = g^(m-k)(p) / (m-k)!
            cs = []
            for k in range(m, 0, -1):
                order = m - k
                h = 1e-3 * (1 + abs(p))
                ang = np.exp(2j * np.pi * np.arange(64) / 64)
                g = self.num(p + h * ang) / rest(p + h * ang)
                deriv = np.mean(g * ang ** (-order)) / h ** order * factorial(order)
                cs.append(complex(deriv) / factorial(order))
            out.append((complex(p), cs[::-1]))
        return out

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def potential(self, z):
        """``h = Re F`` with ``F' = f`` (well defined when all residues are real)."""
        z = np.asarray(z, complex)
        acc = np.zeros(z.shape)
        for p, cs in self._partial:
            acc = acc + (cs[0] * np.log(z - p)).real
            for k, c in enumerate(cs[1:], start=2):
                acc = acc + (c * (z - p) ** (1 - k) / (1 - k)).real
        return acc


def level_curve_measure(f, v: float, rtol: float = 1e-13, probes: int = 4) -> SignedMeasure:
    """Measure on the level curve ``h = v`` around infinity, ``h = Re int f``.

    ``f`` is a :class:`RationalGerm` or a ``(num, den)`` pair. The curve is
    traced as ``dz/dt = i/f(z)``, along which ``int f dz`` grows by ``i dt``;
    the measure ``f dz / (2 pi i)`` then has constant rate ``1/(2 pi)`` in t
    and total mass ``a0``. Its Cauchy transform equals ``f`` outside the curve
    and vanishes inside; the interior value at a few probe points is stored
    in ``meta``.
    """
    germ = f if isinstance(f, RationalGerm) else RationalGerm(*f)
    poles = np.array([p for p, _ in germ._poles], complex)
    scale = 1.0 + (np.max(np.abs(poles)) if poles.size else 0.0)
    # the start: outermost crossing of h = v on a ray that avoids the poles
    ang = 0.123
    ray = np.exp(1j * ang)
    r_hi = scale
    while germ.potential(r_hi * ray) <= v:
        r_hi *= 2
        if r_hi > 1e12:
            raise LevelCurveNotClosed("level not reached on the search ray")
    rs = np.geomspace(r_hi, 1e-6 * scale, 4000)
    hs = germ.potential(rs * ray)
    below = np.nonzero(hs < v)[0]
    if below.size == 0:
        raise LevelCurveNotClosed(f"level {v} not crossed on the search ray", level=v)
    i = below[0]
    r0 = brentq(lambda r: germ.potential(r * ray) - v, rs[i], rs[i - 1], xtol=1e-15)
    z0 = r0 * ray
    T = 2 * np.pi * germ.a0

    def rhs(t, y):
        z = y[0] + 1j * y[1]
        w = 1j / germ(z)
        return [w.real, w.imag]

    sol = solve_ivp(rhs, (0.0, T), [z0.real, z0.imag], method="DOP853", rtol=rtol,
                    atol=rtol * r0, dense_output=True)
    zend = sol.y[0, -1] + 1j * sol.y[1, -1]
    if not sol.success or abs(zend - z0) > 1e-6 * abs(z0):
        raise LevelCurveNotClosed(f"trajectory from {z0} does not close after t = {T}",
                                  gap=float(abs(zend - z0)), level=v)
    path = sol.sol(np.linspace(0.0, T, 4001))
    path = path[0] + 1j * path[1]
    fmin = float(np.min(np.abs(germ(path))))
    if fmin < 1e-6 * germ.a0 / scale:
        raise LevelCurveNotClosed("level curve passes through a critical point", level=v)
    for p in poles:
        turns = np.sum(np.diff(np.unwrap(np.angle(path - p)))) / (2 * np.pi)
        if round(turns) != 1:
            raise LevelCurveNotClosed(f"the level curve winds {turns:.3g} times around the pole {p}",
                                      level=v)

    def z_of(t):
        y = sol.sol(np.asarray(t, float))
        return y[0] + 1j * y[1]

    def dz_of(t):
        return 1j / germ(z_of(t))

    arc = Arc(z_of=z_of, dz_of=dz_of, t_span=(0.0, T), rate=1.0 / (2 * np.pi), closed=True,
              meta={"level": v})
    mu = SignedMeasure(arcs=[arc])
    inner = poles if poles.size else np.array([0j])
    probe_pts = list(inner[:probes])
    if poles.size:
        probe_pts.append(complex(np.mean(poles)))
    vals = []
    for z in probe_pts:
        try:
            vals.append(abs(cauchy_quadrature(mu, z)))
        except TooCloseToSupport:
            pass
    mu.meta.update({"level": v, "start": z0, "a0": germ.a0,
                    "interior_probes": [complex(z) for z in probe_pts],
                    "interior_max": max(vals) if vals else float("nan")})
    return mu
