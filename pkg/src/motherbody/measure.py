"""Signed measures made of point masses and weighted arcs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Atom:
    location: complex
    weight: float


@dataclass(eq=False)
class Arc:
    """A weighted parametrised curve.

    The measure of the piece of curve between parameters ``a < b`` is
    ``int_a^b rate(t) dt``. For the arcs produced by this package the
    parameter is a canonical (flat) coordinate and ``rate`` is constant, which
    keeps the arc measure smooth even where the arclength density blows up
    like an inverse square root.

    ``end_exponents`` record the local behaviour ``z - z_end ~ (t - t_end)**e``
    at both ends; quadrature grades its panels towards ends with ``e != 1``.
    """

    z_of: Callable[[np.ndarray], np.ndarray]
    dz_of: Callable[[np.ndarray], np.ndarray]
    t_span: tuple
    rate: object = 1.0
    end_exponents: tuple = (1.0, 1.0)
    closed: bool = False
    meta: dict = field(default_factory=dict)
    n_nodes: int = 201

    @property
    def constant_rate(self) -> bool:
        return not callable(self.rate)

    def rate_at(self, t):
        t = np.asarray(t, float)
        if self.constant_rate:
            return np.full(t.shape, float(self.rate))
        return np.asarray(self.rate(t), float)

    def mass(self) -> float:
        t0, t1 = self.t_span
        if self.constant_rate:
            return float(self.rate) * (t1 - t0)
        # two panels: graded parametrisations are only piecewise smooth at the middle
        x, w = np.polynomial.legendre.leggauss(64)
        tm = 0.5 * (t0 + t1)
        tot = 0.0
        for a, b in ((t0, tm), (tm, t1)):
            t = 0.5 * (b - a) * x + 0.5 * (b + a)
            tot += 0.5 * (b - a) * np.dot(w, self.rate_at(t))
        return float(tot)

    @property
    def params(self) -> np.ndarray:
        return np.linspace(*self.t_span, self.n_nodes)

    @property
    def nodes(self) -> np.ndarray:
        return self.z_of(self.params)

    @property
    def density(self) -> np.ndarray:
        """Real density with respect to arclength at :attr:`nodes`."""
        t = self.params
        speed = np.abs(self.dz_of(t))
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.rate_at(t) / speed

    @property
    def endpoints(self):
        z = self.z_of(np.array(self.t_span, float))
        return complex(z[0]), complex(z[1])


@dataclass(eq=False)
class SignedMeasure:
    atoms: list = field(default_factory=list)
    arcs: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def total_mass(self) -> float:
        return float(sum(a.weight for a in self.atoms) + sum(a.mass() for a in self.arcs))

    @property
    def is_positive(self) -> bool:
        tol = 1e-9
        if any(a.weight < -tol for a in self.atoms):
            return False
        for arc in self.arcs:
            r = arc.rate_at(np.linspace(*arc.t_span, 64))
            if np.any(r < -tol * max(1.0, np.max(np.abs(r)))):
                return False
        return True

    def support_points(self, per_arc: int = 400) -> np.ndarray:
        pts = [complex(a.location) for a in self.atoms]
        for arc in self.arcs:
            pts.extend(arc.z_of(np.linspace(*arc.t_span, per_arc)))
        return np.array(pts, dtype=complex)

    def __repr__(self):
        return (f"SignedMeasure(atoms={len(self.atoms)}, arcs={len(self.arcs)}, "
                f"mass={self.total_mass:.12g})")


def atomic_measure(pairs) -> SignedMeasure:
    return SignedMeasure(atoms=[Atom(complex(z), float(w)) for z, w in pairs])


def polyline_arc(nodes, density, closed=False) -> Arc:
    """Arc rebuilt from polyline samples and arclength densities (e.g. from JSON).

    The curve is a cubic spline through the nodes in the cumulative-arclength
    parameter; the density is interpolated by the same spline family.
    """
    from scipy.interpolate import CubicSpline

    z = np.asarray(nodes, complex)
    rho = np.asarray(density, float)
    s = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(z)))])
    bc = "periodic" if closed and abs(z[0] - z[-1]) < 1e-12 else "not-a-knot"
    spl = CubicSpline(s, z, bc_type=bc)
    rspl = CubicSpline(s, rho, bc_type=bc)

    def rate(t):
        return rspl(t) * np.abs(spl(t, 1))

    return Arc(z_of=spl, dz_of=lambda t: spl(t, 1), t_span=(0.0, float(s[-1])),
               rate=rate, closed=closed, n_nodes=len(z))


def grading_power(e: float) -> int:
    """Power ``k`` in ``t = L u**k`` that makes ``t**e`` smooth in ``u``."""
    if e >= 1 or e <= 0:
        return 1
    return max(1, int(round(2.0 / e)))


def graded_map(t_span, end_exponents):
    """``(t_of, dt_of, sigma_of)`` for a parameter ``sigma`` in [0, 2] graded at both ends.

    ``t - t0 ~ sigma**k`` near 0 and ``t1 - t ~ (2 - sigma)**k`` near 2, so a
    curve behaving like ``(t - t_end)**e`` at an end is smooth in sigma.
    """
    t0, t1 = map(float, t_span)
    L = 0.5 * (t1 - t0)
    kl, kr = (grading_power(e) for e in end_exponents)

    def t_of(s):
        s = np.asarray(s, float)
        return np.where(s <= 1, t0 + L * np.clip(s, 0, 1) ** kl, t1 - L * np.clip(2 - s, 0, 1) ** kr)

    def dt_of(s):
        s = np.asarray(s, float)
        return np.where(s <= 1, L * kl * np.clip(s, 0, 1) ** (kl - 1),
                        L * kr * np.clip(2 - s, 0, 1) ** (kr - 1))

    def sigma_of(t):
        u = (np.asarray(t, float) - t0) / L
        return np.where(u <= 1, np.clip(u, 0, 1) ** (1.0 / kl), 2 - np.clip(2 - u, 0, 1) ** (1.0 / kr))

    return t_of, dt_of, sigma_of


def arc_samples(arc: Arc, n: int = 201) -> dict:
    """JSON-ready samples of an arc, graded towards singular ends."""
    t_of, _, _ = graded_map(arc.t_span, arc.end_exponents)
    t = t_of(np.linspace(0, 2, n))
    z = arc.z_of(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        dens = arc.rate_at(t) / np.abs(arc.dz_of(t))
    doc = {"nodes": [[p.real, p.imag] for p in z],
           "density": [float(x) if np.isfinite(x) else None for x in dens],
           "closed": bool(arc.closed), "mass": arc.mass()}
    if arc.constant_rate:
        doc.update({"w": t.tolist(), "rate": float(arc.rate),
                    "end_exponents": [float(e) for e in arc.end_exponents]})
    return doc


def parametrised_arc(nodes, w, rate, end_exponents=(1.0, 1.0), closed=False) -> Arc:
    """Arc rebuilt from samples ``z(w_i)`` of a constant-rate parametrisation."""
    from scipy.interpolate import CubicSpline

    z = np.asarray(nodes, complex)
    w = np.asarray(w, float)
    t_of, dt_of, sigma_of = graded_map((w[0], w[-1]), end_exponents)
    s = sigma_of(w)
    bc = "periodic" if closed and abs(z[0] - z[-1]) < 1e-12 else "not-a-knot"
    if bc == "periodic":
        z = z.copy()
        z[-1] = z[0]
    spl = CubicSpline(s, z, bc_type=bc)
    rate = float(rate)
    return Arc(z_of=spl, dz_of=lambda t: spl(t, 1), t_span=(0.0, 2.0),
               rate=lambda t: rate * dt_of(t), closed=closed)
