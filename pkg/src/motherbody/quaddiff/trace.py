"""Horizontal trajectories traced in the canonical parameter ``w``.

Along a horizontal trajectory ``dw = sqrt(phi) dz`` is real, so the curve is
the solution of ``dz/dw = 1/sqrt(phi(z))`` for real ``w``. The square root is
continued exactly between nearby points through the factorised form of
``phi`` (see :meth:`QuadraticDifferential.sqrt_ratio`), which removes any
ambiguity in the choice of branch.

Near a zero of order ``m`` (or a simple pole, ``m = -1``) the trajectory is
described by the local model ``z - s ~ (w - w_s)**(2/(m+2))``; the traced
curve hands over to that model at distance ``snap`` from the point.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import DOP853, OdeSolution

from ..errors import StartAtHigherPole
from .differential import QuadraticDifferential, SingularPoint

SNAP_RTOL = 1e-6
CAPTURE_TOL = 1e-7
_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)
_V = 0.5 * (_GL_X + 1)
_VW = 0.5 * _GL_W


def snap_radius(z) -> float:
    return SNAP_RTOL * (1 + abs(z))


def integral_to_point(qd: QuadraticDifferential, z, sqrt_z, target: complex, order: int = 0):
    """``int_z^target sqrt(phi) dzeta`` along the segment, branch continued from ``sqrt_z``.

    ``order`` is the order of ``phi`` at ``target`` (0 if regular); the
    substitution ``zeta = target + (z - target) v**2`` makes the integrand
    smooth for orders ``>= -1``.
    """
    d = z - target
    zeta = target + d * _V ** 2
    vals = sqrt_z * qd.sqrt_ratio(zeta, z) * 2 * d * _V
    return -complex(np.dot(_VW, vals))


@dataclass(eq=False)
class Trajectory:
    qd: QuadraticDifferential = field(repr=False)
    start: SingularPoint | None
    start_point: complex
    end: SingularPoint | None = None
    classification: str = "open"
    arclength: float = 0.0
    W: float = 0.0
    start_direction: float = 0.0
    end_direction: float | None = None
    head: tuple | None = field(default=None, repr=False)     # (s, z0, w0, exponent)
    tail: tuple | None = field(default=None, repr=False)     # (e, zc, wc, exponent)
    solution: object = field(default=None, repr=False)
    w_range: tuple = (0.0, 0.0)
    nodes_w: np.ndarray = field(default=None, repr=False)
    nodes_z: np.ndarray = field(default=None, repr=False)

    @property
    def end_point(self) -> complex:
        return complex(self.z_of(np.array([self.W]))[0])

    @property
    def double_singular(self) -> bool:
        return self.classification == "double-singular"

    def z_of(self, w) -> np.ndarray:
        w = np.atleast_1d(np.asarray(w, float))
        out = np.empty(w.shape, complex)
        lo, hi = self.w_range
        mid = (w >= lo) & (w <= hi)
        if np.any(mid):
            out[mid] = self.solution(w[mid])[0] if self.solution is not None else self.start_point
        if self.head is not None:
            s, z0, w0, e = self.head
            m = w < lo
            out[m] = s + (z0 - s) * (np.clip(w[m], 0, None) / w0) ** e
        else:
            out[w < lo] = self.start_point
        if self.tail is not None:
            s, zc, wc, e = self.tail
            m = w > hi
            out[m] = s + (zc - s) * (np.clip(self.W - w[m], 0, None) / (self.W - wc)) ** e
        else:
            m = w > hi
            if np.any(m):
                out[m] = self.solution(np.array([hi]))[0][0] if self.solution is not None else self.start_point
        return out

    def velocity(self, w) -> np.ndarray:
        """Complex ``dz/dw`` (``1/sqrt(phi)`` on the branch followed by the trace)."""
        w = np.atleast_1d(np.asarray(w, float))
        out = np.empty(w.shape, complex)
        lo, hi = self.w_range
        mid = (w >= lo) & (w <= hi)
        if np.any(mid) and self.solution is not None:
            wm = w[mid]
            with np.errstate(divide="ignore", invalid="ignore"):
                v = 1.0 / np.sqrt(self.qd(self.solution(wm)[0]))
            h = 1e-7 * max(self.W, 1e-300)
            a = np.clip(wm - h, lo, hi)
            b = np.clip(wm + h, lo, hi)
            fd = self.solution(b)[0] - self.solution(a)[0]
            out[mid] = np.where((v * np.conj(fd)).real < 0, -v, v)
        if self.head is not None:
            s0, z0, w0, e = self.head
            m = w < lo
            with np.errstate(divide="ignore", invalid="ignore"):
                out[m] = e * (z0 - s0) / w0 * (np.clip(w[m], 0, None) / w0) ** (e - 1)
        if self.tail is not None:
            s0, zc, wc, e = self.tail
            m = w > hi
            with np.errstate(divide="ignore", invalid="ignore"):
                out[m] = -e * (zc - s0) / (self.W - wc) * (np.clip(self.W - w[m], 0, None) / (self.W - wc)) ** (e - 1)
        return out

    def speed(self, w) -> np.ndarray:
        """``|dz/dw| = |phi|**(-1/2)`` along the curve."""
        with np.errstate(divide="ignore"):
            return np.abs(self.qd(self.z_of(w))) ** -0.5

    def sample_params(self, n: int = 400) -> np.ndarray:
        t = np.linspace(0.0, 1.0, n)
        return self.W * 0.5 * (1 - np.cos(np.pi * t))

    def polyline(self, n: int = 400) -> np.ndarray:
        return self.z_of(self.sample_params(n))

    def end_exponents(self) -> tuple:
        e0 = self.head[3] if self.head is not None else 1.0
        e1 = self.tail[3] if self.tail is not None else 1.0
        return (e0, e1)

    def horizontality(self, n: int = 2000) -> float:
        """Accumulated ``|Im int sqrt(phi) dz|`` along the sampled polyline."""
        w = np.linspace(0, self.W, n)
        z = self.z_of(w)
        zm = 0.5 * (z[1:] + z[:-1])
        sq = np.sqrt(self.qd(zm))
        dz = np.diff(z)
        # sign of each midpoint root is irrelevant for |Im|: pick the one making Re positive
        inc = sq * dz
        inc = np.where(inc.real < 0, -inc, inc)
        return float(np.abs(np.sum(inc.imag)))

    def to_json(self, n: int = 200) -> dict:
        pts = self.polyline(n)
        return {"start": None if self.start is None else self.start.index,
                "end": None if self.end is None else self.end.index,
                "classification": self.classification,
                "arclength": self.arclength, "W": self.W,
                "polyline": [[z.real, z.imag] for z in pts]}


def _nearest_direction(point: SingularPoint, theta: float) -> float:
    dirs = point.directions
    diff = np.angle(np.exp(1j * (dirs - theta)))
    return float(dirs[int(np.argmin(np.abs(diff)))])


def _launch_from(qd, s: SingularPoint, theta: float):
    """Start point next to ``s`` on the trajectory leaving along ``theta``."""
    m = s.order
    eps = snap_radius(s.location)
    sign = 1.0
    sq = None
    for _ in range(4):
        z0 = s.location + eps * np.exp(1j * theta)
        sq = np.sqrt(complex(qd(np.array([z0]))[0])) * sign
        F = -integral_to_point(qd, z0, sq, s.location, m)
        if F.real < 0:
            sq, F, sign = -sq, -F, -sign
        dF = sq * 1j * eps * np.exp(1j * theta)
        if abs(F.imag) <= 1e-14 * abs(F) or dF.imag == 0:
            break
        theta = theta - F.imag / dF.imag
    return z0, sq, F.real, theta


def trace_trajectory(qd: QuadraticDifferential, start, direction: float, budget: float | None = None,
                     bound: float | None = None, rtol: float = 1e-11, max_steps: int = 200000,
                     detect_closed: bool = True) -> Trajectory:
    """Trace the horizontal trajectory leaving ``start`` in ``direction``.

    ``start`` is a complex point or a :class:`SingularPoint` (a zero or a
    simple pole). At a singular point the direction is snapped to the
    nearest horizontal direction. Terminates at a singular point, on
    closing up (regular starts), on leaving the disk of radius ``bound`` or
    when the arclength exceeds ``budget``.
    """
    pts = qd.points
    locs = np.array([p.location for p in pts], complex)
    scale = qd.scale
    if budget is None:
        budget = 50.0 * qd.diameter
    if bound is None:
        bound = 4.0 * scale if len(pts) else np.inf

    if not isinstance(start, SingularPoint):
        z = complex(start)
        for p in pts:
            if abs(z - p.location) <= snap_radius(p.location):
                start = p
                break
    if isinstance(start, SingularPoint):
        if not start.is_critical:
            raise StartAtHigherPole(f"cannot launch from a pole of order {-start.order}",
                                    location=start.location)
        theta = _nearest_direction(start, float(direction))
        z0, sq0, w0, theta_c = _launch_from(qd, start, theta)
        head = (start.location, z0, w0, 2.0 / (start.order + 2))
        origin = start
        start_point = start.location
    else:
        z0 = complex(start)
        sq0 = np.sqrt(complex(qd(np.array([z0]))[0]))
        if (sq0 * np.exp(1j * direction)).real < 0:
            sq0 = -sq0
        w0, head, origin, theta = 0.0, None, None, float(direction)
        start_point = z0

    # separation of each singular point from the others (capture disks)
    if len(locs) > 1:
        sep = np.abs(locs[:, None] - locs[None, :]) + np.diag(np.full(len(locs), np.inf))
        capture_r = 0.3 * np.min(sep, axis=1)
    else:
        capture_r = np.full(len(locs), 0.3 * scale)
    capture_r = np.minimum(capture_r, 0.3 * scale)

    ref = {"z": z0, "s": sq0}

    def fun(w, y):
        return np.array([1.0 / (ref["s"] * qd.sqrt_ratio(y[0], ref["z"]))])

    def max_step_at(z, sq):
        dist = np.min(np.abs(locs - z)) if len(locs) else scale
        return max(0.2 * dist, 1e-14 * scale) * abs(sq)

    solver = DOP853(fun, w0, np.array([z0], complex), t_bound=1e300,
                    max_step=max_step_at(z0, sq0), rtol=rtol, atol=1e-14 * scale)
    ts, interps = [w0], []
    nodes_w, nodes_z = [w0], [z0]
    arclength = abs(z0 - start_point)
    classification = "budget-exceeded"
    end, tail, W = None, None, None
    target = None            # (index, W_end) once a capture is detected
    closing = None
    left_start = False

    for _ in range(max_steps):
        z_old = ref["z"]
        msg = solver.step()
        if solver.status == "failed":
            classification = "budget-exceeded"
            break
        z = complex(solver.y[0])
        sq = ref["s"] * qd.sqrt_ratio(z, ref["z"])
        ref["z"], ref["s"] = z, complex(sq)
        ts.append(solver.t)
        interps.append(solver.dense_output())
        nodes_w.append(solver.t)
        nodes_z.append(z)
        arclength += abs(z - z_old)
        solver.max_step = max_step_at(z, sq)
        w = solver.t

        if closing is not None:
            if solver.status == "finished" or w >= closing:
                classification = "closed"
                W = closing
                break
            continue

        if target is not None:
            k, _ = target
            if abs(z - locs[k]) <= snap_radius(locs[k]):
                I = integral_to_point(qd, z, sq, locs[k], pts[k].order)
                W = w + I.real
                end = pts[k]
                tail = (end.location, z, w, 2.0 / (end.order + 2))
                classification = "double-singular" if origin is not None else "singular"
                break
            continue

        # capture: a critical point straight ahead in canonical time
        dists = np.abs(locs - z)
        for k in np.flatnonzero(dists <= capture_r):
            p = pts[k]
            if not p.is_critical:
                if dists[k] <= snap_radius(p.location):
                    end, W, classification = p, w, "pole-ended"
                    break
                continue
            if origin is not None and p is origin and not left_start:
                continue
            I = integral_to_point(qd, z, sq, p.location, p.order)
            if I.real > 0 and abs(I.imag) <= CAPTURE_TOL * max(1.0, abs(w), abs(I)):
                target = (k, w + I.real)
                break
        if classification == "pole-ended":
            break
        if origin is not None and not left_start and abs(z - origin.location) > capture_r[origin.index if origin.index >= 0 else 0]:
            left_start = True

        if origin is None and detect_closed:
            d0 = abs(z - z0)
            if not left_start and d0 > 0.05 * scale:
                left_start = True
            if left_start and len(locs) and d0 < 0.3 * np.min(np.abs(locs - z0)):
                J = integral_to_point(qd, z, sq, z0, 0)
                if J.real > 0 and abs(J.imag) <= CAPTURE_TOL * max(1.0, abs(w)):
                    closing = w + J.real
                    solver.t_bound = closing
                    solver.max_step = min(solver.max_step, J.real)
                    if solver.h_abs is not None:
                        solver.h_abs = min(solver.h_abs, J.real)
                    continue
            elif left_start and not len(locs) and d0 < 0.1:
                pass

        if abs(z) > bound:
            classification = "escaped"
            break
        if arclength > budget:
            classification = "budget-exceeded"
            break

    if W is None:
        W = solver.t
    solution = OdeSolution(np.array(ts), interps) if interps else None
    traj = Trajectory(qd=qd, start=origin, start_point=start_point, end=end,
                      classification=classification, arclength=float(arclength), W=float(W),
                      start_direction=float(theta), head=head, tail=tail, solution=solution,
                      w_range=(float(ts[0]), float(ts[-1])),
                      nodes_w=np.array(nodes_w), nodes_z=np.array(nodes_z))
    if tail is not None:
        e = end
        traj.end_direction = _nearest_direction(e, float(np.angle(nodes_z[-1] - e.location)))
        traj.arclength += abs(nodes_z[-1] - e.location)
    return traj
