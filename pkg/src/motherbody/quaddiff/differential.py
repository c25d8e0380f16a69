"""Rational quadratic differentials ``phi(z) dz**2`` attached to ``P C**2 + Q C + R = 0``."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateDifferential
from ..polyalg import UniPoly, discriminant_D, poly_roots

MERGE_RTOL = 1e-7


@dataclass(frozen=True)
class SingularPoint:
    location: complex
    order: int                # > 0 zero order, < 0 pole order
    coefficient: complex      # phi ~ coefficient * (z - location)**order
    index: int = -1

    @property
    def kind(self) -> str:
        if self.order > 0:
            return "zero"
        return {-1: "simple-pole", -2: "double-pole"}.get(self.order, "higher-pole")

    @property
    def is_critical(self) -> bool:
        """Zeros and simple poles: trajectories reach them in finite canonical time."""
        return self.order >= -1

    @property
    def directions(self) -> np.ndarray:
        """Horizontal launch angles, solutions of ``arg c + (m+2) theta = 0 mod 2 pi``."""
        m = self.order
        if m < -1:
            return np.zeros(0)
        k = m + 2
        base = -np.angle(self.coefficient) / k
        return np.mod(base + 2 * np.pi * np.arange(k) / k, 2 * np.pi)

    def to_json(self) -> dict:
        return {"location": [self.location.real, self.location.imag], "kind": self.kind,
                "order": self.order,
                "coefficient": [self.coefficient.real, self.coefficient.imag],
                "directions": self.directions.tolist()}


@dataclass(frozen=True, eq=False)
class QuadraticDifferential:
    """``phi dz**2`` with ``phi = gain * prod (z - s_k)**m_k`` over its singular points.

    ``mode`` is ``"theta"`` for ``(4PR - Q**2)/P**2`` and ``"psi"`` for ``R/P``
    (used when Q vanishes). ``theta_scale`` is the constant with
    ``Theta = theta_scale * phi`` (4 in psi mode, 1 otherwise).
    """

    P: UniPoly
    Q: UniPoly
    R: UniPoly
    mode: str = "theta"
    points: tuple = field(default=())
    gain: complex = 0j
    num: UniPoly = field(default=None)
    den: UniPoly = field(default=None)

    @property
    def D(self) -> UniPoly:
        return discriminant_D(self.P, self.Q, self.R)

    @property
    def theta_scale(self) -> float:
        return 4.0 if self.mode == "psi" else 1.0

    @property
    def degenerate(self) -> bool:
        return self.gain == 0

    @property
    def locations(self) -> np.ndarray:
        return np.array([s.location for s in self.points], complex)

    @property
    def orders(self) -> np.ndarray:
        return np.array([s.order for s in self.points], float)

    @property
    def order_at_infinity(self) -> int:
        """Order of ``phi dz**2`` at infinity (negative for a pole)."""
        return int(-4 - sum(s.order for s in self.points))

    @property
    def leading_at_infinity(self) -> complex:
        """``c`` with ``phi dz**2 ~ c u**order du**2`` in ``u = 1/z``."""
        return complex(self.gain)

    @property
    def scale(self) -> float:
        locs = self.locations
        return float(max(1.0, np.max(np.abs(locs)))) if locs.size else 1.0

    @property
    def diameter(self) -> float:
        locs = self.locations
        if locs.size < 2:
            return 1.0
        return float(max(1.0, np.max(np.abs(locs[:, None] - locs[None, :]))))

    def __call__(self, z):
        z = np.asarray(z, complex)
        out = np.full(z.shape, complex(self.gain))
        for s in self.points:
            out = out * (z - s.location) ** s.order
        return out

    def log_derivative(self, z):
        z = np.asarray(z, complex)
        return sum(s.order / (z - s.location) for s in self.points) + 0 * z

    def sqrt_ratio(self, z, z_ref):
        """``sqrt(phi(z)) / sqrt(phi(z_ref))`` continued along the segment from z_ref.

        Exact as long as the segment avoids the singular points: the argument
        of each factor ``z - s`` changes by less than pi along a segment.
        """
        z = np.asarray(z, complex)
        acc = np.zeros(z.shape, complex)
        for s in self.points:
            acc = acc + 0.5 * s.order * np.log((z - s.location) / (z_ref - s.location))
        return np.exp(acc)

    def critical_points(self):
        return [s for s in self.points if s.is_critical]

    def zeros(self):
        return [s for s in self.points if s.order > 0]

    def to_json(self) -> dict:
        return {"mode": self.mode, "P": self.P.to_json(), "Q": self.Q.to_json(),
                "R": self.R.to_json(), "D": self.D.to_json(),
                "singular_points": [s.to_json() for s in self.points],
                "order_at_infinity": self.order_at_infinity}


def _root_table(p: UniPoly, sign: int, table):
    if p.degree < 1:
        return
    for r, m in poly_roots(p):
        table.append([complex(r), sign * m])


def _merge(table):
    """Combine entries at (numerically) equal locations, cancelling zeros against poles."""
    out = []
    for z, m in table:
        for e in out:
            if abs(e[0] - z) <= MERGE_RTOL * (1 + abs(z)):
                e[1] += m
                break
        else:
            out.append([z, m])
    return [(z, m) for z, m in out if m != 0]


def build_theta(P: UniPoly, Q: UniPoly, R: UniPoly, mode: str | None = None) -> QuadraticDifferential:
    """Quadratic differential of the triple.

    By default ``(4PR - Q**2)/P**2 dz**2``; when ``Q`` vanishes the reduced
    form ``R/P dz**2`` is used instead (same trajectories, a quarter of the
    coefficient). A zero numerator yields a differential flagged
    ``degenerate``.
    """
    P, Q, R = P.to_float(), Q.to_float(), R.to_float()
    if P.is_zero:
        raise DegenerateDifferential("P must be nonzero")
    if mode is None:
        mode = "psi" if Q.is_zero else "theta"
    if mode == "psi":
        num, den = R, P
        table = []
        _root_table(num, +1, table)
        _root_table(den, -1, table)
    else:
        num = -discriminant_D(P, Q, R)
        den = P * P
        table = []
        _root_table(num, +1, table)
        if P.degree >= 1:
            for r, m in poly_roots(P):
                table.append([complex(r), -2 * m])
    if num.is_zero:
        return QuadraticDifferential(P, Q, R, mode, (), 0j, num, den)
    merged = _merge(table)
    gain = complex(num.lc) / complex(den.lc)
    pts = []
    for idx, (z, m) in enumerate(sorted(merged, key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))):
        c = gain
        for w, k in merged:
            if w != z:
                c *= (z - w) ** k
        pts.append(SingularPoint(z, int(m), complex(c), idx))
    # lowest-terms numerator/denominator rebuilt from the reduced factorisation
    zs = [z for z, m in merged for _ in range(m) if m > 0]
    ps = [z for z, m in merged for _ in range(-m) if m < 0]
    rnum = UniPoly.from_roots(zs, lead=complex(num.lc)) if zs else UniPoly([complex(num.lc)])
    rden = UniPoly.from_roots(ps, lead=complex(den.lc)) if ps else UniPoly([complex(den.lc)])
    return QuadraticDifferential(P, Q, R, mode, tuple(pts), gain, rnum, rden)


def singular_points(qd: QuadraticDifferential):
    if qd.degenerate:
        raise DegenerateDifferential("phi vanishes identically")
    return list(qd.points)


def differential_from_factors(points, gain=1.0) -> QuadraticDifferential:
    """Differential given directly as ``gain * prod (z - s)**m`` (for experiments and tests)."""
    table = _merge([[complex(z), int(m)] for z, m in points])
    pts = []
    for idx, (z, m) in enumerate(table):
        c = complex(gain)
        for w, k in table:
            if w != z:
                c *= (z - w) ** k
        pts.append(SingularPoint(z, m, c, idx))
    one = UniPoly([1.0])
    zs = [z for z, m in table for _ in range(m) if m > 0]
    ps = [z for z, m in table for _ in range(-m) if m < 0]
    num = UniPoly.from_roots(zs, lead=gain) if zs else UniPoly([gain])
    den = UniPoly.from_roots(ps) if ps else one
    return QuadraticDifferential(den, UniPoly([]), num, "psi", tuple(pts), complex(gain), num, den)
