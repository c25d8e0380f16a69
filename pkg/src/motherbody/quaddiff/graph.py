"""Embedded multigraphs of critical trajectories and their complementary regions."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import networkx as nx
import numpy as np

from ..errors import BranchPointAtInfinity, DegenerateEmbedding, NotCoprime, SchemaError
from ..polyalg import coprime
from .differential import QuadraticDifferential, SingularPoint
from .trace import Trajectory, trace_trajectory

ANGLE_TIE = 1e-9


@dataclass(eq=False)
class GraphEdge:
    u: int
    v: int
    angle_u: float
    angle_v: float
    points: np.ndarray                      # polyline from u to v
    curve: Trajectory | None = field(default=None, repr=False)

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def to_json(self) -> dict:
        return {"u": self.u, "v": self.v, "angle_u": self.angle_u, "angle_v": self.angle_v,
                "W": None if self.curve is None else self.curve.W,
                "polyline": [[z.real, z.imag] for z in self.points]}


def _signed_area(poly: np.ndarray) -> float:
    x, y = poly.real, poly.imag
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def winding_number(poly: np.ndarray, z: complex) -> int:
    """Winding number of the closed polygon ``poly`` around ``z``."""
    d = poly - z
    ang = np.angle(np.roll(d, -1) / d)
    return int(round(float(np.sum(ang)) / (2 * np.pi)))


def segments_crossings(a: complex, b: complex, poly: np.ndarray) -> int:
    """Number of proper crossings of segment ``[a, b]`` with polyline ``poly``."""
    p, q = poly[:-1], poly[1:]
    r, s = b - a, q - p

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    den = cross(r, s)
    ok = den != 0
    qp = p - a
    with np.errstate(divide="ignore", invalid="ignore"):
        t = cross(qp, s) / den
        u = cross(qp, r) / den
    hit = ok & (t >= 0) & (t < 1) & (u >= 0) & (u < 1)
    return int(np.count_nonzero(hit))


@dataclass(eq=False)
class TrajectoryGraph:
    vertices: list
    edges: list
    singular: list = field(default_factory=list)
    qd: QuadraticDifferential | None = field(default=None, repr=False)
    launches: list = field(default_factory=list, repr=False)
    kind: str = "abstract"
    _cache: dict = field(default_factory=dict, repr=False)

    # -- combinatorics --------------------------------------------------------
    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.edges)

    def nx_graph(self) -> nx.MultiGraph:
        G = nx.MultiGraph()
        G.add_nodes_from(range(self.V))
        for k, e in enumerate(self.edges):
            G.add_edge(e.u, e.v, key=k)
        return G

    @property
    def components(self) -> list:
        return [sorted(c) for c in nx.connected_components(self.nx_graph())]

    def degree(self, v: int) -> int:
        return sum((e.u == v) + (e.v == v) for e in self.edges)

    def subgraph(self, edge_ids) -> "TrajectoryGraph":
        return TrajectoryGraph(self.vertices, [self.edges[k] for k in sorted(edge_ids)],
                               self.singular, self.qd, kind=self.kind + "-sub")

    # -- embedding --------------------------------------------------------------
    def rotation(self) -> dict:
        """Edge-ends around each vertex sorted counter-clockwise: ``[(angle, edge, is_head)]``."""
        if "rotation" in self._cache:
            return self._cache["rotation"]
        rot = {v: [] for v in range(self.V)}
        for k, e in enumerate(self.edges):
            rot[e.u].append((float(np.mod(e.angle_u, 2 * np.pi)), k, False))
            rot[e.v].append((float(np.mod(e.angle_v, 2 * np.pi)), k, True))
        for v, ends in rot.items():
            ends.sort()
            for (a, _, _), (b, _, _) in zip(ends, ends[1:] + ends[:1]):
                if len(ends) > 1 and abs(np.angle(np.exp(1j * (a - b)))) <= ANGLE_TIE:
                    raise DegenerateEmbedding(f"two edge-ends leave vertex {v} at angle {a}", vertex=v)
        self._cache["rotation"] = rot
        return rot

    def dart_points(self, dart) -> np.ndarray:
        k, fwd = dart
        pts = self.edges[k].points
        return pts if fwd else pts[::-1]

    def face_walks(self) -> list:
        """Boundary walks of the faces of every component, as lists of darts.

        A dart ``(k, True)`` runs along edge ``k`` from ``u`` to ``v``; each walk
        keeps its face on the left.
        """
        if "walks" in self._cache:
            return self._cache["walks"]
        rot = self.rotation()
        pos = {}
        for v, ends in rot.items():
            for idx, (_, k, head) in enumerate(ends):
                pos[(k, head)] = (v, idx)
        seen = set()
        walks = []
        for k in range(self.E):
            for fwd in (True, False):
                if (k, fwd) in seen:
                    continue
                walk = []
                dart = (k, fwd)
                while dart not in seen:
                    seen.add(dart)
                    walk.append(dart)
                    kk, f = dart
                    v, idx = pos[(kk, f)]       # arriving end: head if forward
                    ends = rot[v]
                    _, k2, head2 = ends[(idx - 1) % len(ends)]
                    dart = (k2, not head2)
                walks.append(walk)
        self._cache["walks"] = walks
        return walks

    def walk_polygon(self, walk) -> np.ndarray:
        return np.concatenate([self.dart_points(d)[:-1] for d in walk])

    def faces(self) -> list:
        """Bounded faces (positively oriented walks) with their areas."""
        out = []
        for walk in self.face_walks():
            a = _signed_area(self.walk_polygon(walk))
            out.append({"walk": walk, "area": a})
        return out

    def regions(self) -> dict:
        """Connected components of the complement.

        Returns ``{"count": d, "dart_region": {dart: region}, "polygons": [...],
        "vertex_region": {isolated vertex: region}}`` with region 0 the
        unbounded one.
        """
        if "regions" in self._cache:
            return self._cache["regions"]
        walks = self.face_walks()
        comp_of_vertex = {}
        comps = self.components
        for c, verts in enumerate(comps):
            for v in verts:
                comp_of_vertex[v] = c
        areas = [_signed_area(self.walk_polygon(w)) for w in walks]
        comp_walks = {c: [] for c in range(len(comps))}
        for i, w in enumerate(walks):
            comp_walks[comp_of_vertex[self.edges[w[0][0]].u]].append(i)
        bounded, outer = [], {}
        for c, ids in comp_walks.items():
            if not ids:
                continue
            o = min(ids, key=lambda i: areas[i])
            outer[c] = o
            bounded.extend(i for i in ids if i != o)
        polygons = {i: self.walk_polygon(walks[i]) for i in bounded}
        region_of_walk = {i: r + 1 for r, i in enumerate(bounded)}

        def container(c):
            v = comps[c][0]
            z = self.vertices[v]
            best, best_area = 0, np.inf
            for i in bounded:
                if comp_of_vertex[self.edges[walks[i][0][0]].u] == c:
                    continue
                if winding_number(polygons[i], z) != 0 and areas[i] < best_area:
                    best, best_area = region_of_walk[i], areas[i]
            return best

        vertex_region = {}
        for c in range(len(comps)):
            r = container(c)
            if c in outer:
                region_of_walk[outer[c]] = r
            else:
                vertex_region[comps[c][0]] = r
        dart_region = {}
        for i, w in enumerate(walks):
            for dart in w:
                dart_region[dart] = region_of_walk[i]
        out = {"count": 1 + len(bounded), "dart_region": dart_region,
               "polygons": [polygons[i] for i in bounded], "vertex_region": vertex_region,
               "areas": [areas[i] for i in bounded]}
        self._cache["regions"] = out
        return out

    @property
    def d(self) -> int:
        return self.regions()["count"]

    def edge_sides(self, k: int) -> tuple:
        """(left region, right region) of edge ``k`` in its own orientation."""
        dr = self.regions()["dart_region"]
        return dr[(k, True)], dr[(k, False)]

    def region_of_point(self, z: complex) -> int:
        """Region containing a point off the graph."""
        reg = self.regions()
        best, best_area = 0, np.inf
        for r, (poly, a) in enumerate(zip(reg["polygons"], reg["areas"]), start=1):
            if winding_number(poly, z) != 0 and a < best_area:
                best, best_area = r, a
        return best

    def euler_check(self) -> bool:
        return self.V - self.E + self.d == 1 + len(self.components)

    # -- I/O ----------------------------------------------------------------------
    def to_json(self) -> dict:
        reg = self.regions()
        return {"kind": self.kind,
                "vertices": [{"location": [complex(z).real, complex(z).imag],
                              "kind": None if not self.singular or self.singular[i] is None
                              else self.singular[i].kind}
                             for i, z in enumerate(self.vertices)],
                "edges": [e.to_json() for e in self.edges],
                "faces": [[[z.real, z.imag] for z in poly] for poly in reg["polygons"]],
                "d": reg["count"], "components": len(self.components)}

    @classmethod
    def from_json(cls, doc) -> "TrajectoryGraph":
        """Abstract embedded multigraph: vertices plus polyline edges.

        ``{"vertices": [[x, y], ...], "edges": [{"u": i, "v": j, "polyline": [[x, y], ...]}]}``;
        a vertex may also be ``{"location": [x, y]}``. Edge-end angles are read
        from the first and last polyline segments unless ``angle_u``/``angle_v``
        are given. A missing polyline means a straight segment.
        """
        try:
            verts = []
            for v in doc["vertices"]:
                xy = v["location"] if isinstance(v, dict) else v
                verts.append(complex(float(xy[0]), float(xy[1])))
            edges = []
            for e in doc.get("edges", []):
                u, v = int(e["u"]), int(e["v"])
                if "polyline" in e and e["polyline"]:
                    pts = np.array([complex(float(x), float(y)) for x, y in e["polyline"]])
                else:
                    pts = np.array([verts[u], verts[v]])
                pts[0], pts[-1] = verts[u], verts[v]
                au = e.get("angle_u", float(np.angle(pts[1] - pts[0])))
                av = e.get("angle_v", float(np.angle(pts[-2] - pts[-1])))
                edges.append(GraphEdge(u, v, float(au), float(av), pts))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise SchemaError(f"malformed graph JSON: {exc}") from exc
        return cls(verts, edges)


# ---------------------------------------------------------------------------
# construction from a differential
# ---------------------------------------------------------------------------

def check_infinity(qd: QuadraticDifferential):
    """Reject triples for which infinity is a branch point of the curve."""
    P, Q, R = qd.P, qd.Q, qd.R
    D = qd.D
    nP = P.degree
    if nP >= 2 and Q.degree <= nP - 1 and R.degree <= nP - 2:
        if D.degree < 2 * nP - 2:
            raise BranchPointAtInfinity(f"deg D = {D.degree} < {2 * nP - 2}")
        return
    if D.degree % 2 == 1:
        raise BranchPointAtInfinity(f"deg D = {D.degree} is odd")
    warnings.warn("triple is outside the standard degree normalisation; "
                  "treating it as a general coprime triple", UserWarning)


def _trace_all(qd, launch_points, budget, jobs=1):
    tasks = [(p, th) for p in launch_points for th in p.directions]
    if jobs and jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = [ex.submit(trace_trajectory, qd, p, th, budget) for p, th in tasks]
            return [f.result() for f in futs]
    return [trace_trajectory(qd, p, th, budget) for p, th in tasks]


def _dir_index(p: SingularPoint, theta: float) -> int:
    diff = np.angle(np.exp(1j * (p.directions - theta)))
    return int(np.argmin(np.abs(diff)))


def _dedupe(trajs):
    """One representative per geometric edge: a trace and its reverse share end-direction pairs."""
    kept, keys = [], {}
    for t in trajs:
        a = (t.start.index, _dir_index(t.start, t.start_direction))
        b = (t.end.index, _dir_index(t.end, t.end_direction))
        key = (a, b) if a <= b else (b, a)
        if key in keys:
            other = keys[key]
            if abs(other.W - t.W) > 1e-5 * max(1.0, t.W):
                warnings.warn(f"reversed traces disagree in canonical length: {other.W} vs {t.W}",
                              RuntimeWarning)
            continue
        keys[key] = t
        kept.append(t)
    return kept


def _graph_from(qd, vertices_pts, trajs, launches, kind):
    index = {p.index: i for i, p in enumerate(vertices_pts)}
    edges = []
    for t in trajs:
        pts = t.polyline()
        edges.append(GraphEdge(index[t.start.index], index[t.end.index],
                               float(t.start.directions[_dir_index(t.start, t.start_direction)]),
                               float(t.end.directions[_dir_index(t.end, t.end_direction)]),
                               pts, t))
    return TrajectoryGraph([p.location for p in vertices_pts], edges, list(vertices_pts), qd,
                           launches, kind)


def build_DK0(qd: QuadraticDifferential, budget: float | None = None, jobs: int = 1,
              include_simple_poles: bool = False) -> TrajectoryGraph:
    """Graph of trajectories joining zeros of the differential.

    Launches from every zero in every horizontal direction. The returned
    graph keeps the traces with both ends at zeros; with
    ``include_simple_poles`` traces ending at simple poles are kept as well
    (and the simple poles become vertices).
    """
    check_infinity(qd)
    zeros = qd.zeros()
    launch_pts = list(zeros) + ([p for p in qd.points if p.order == -1] if include_simple_poles else [])
    launches = _trace_all(qd, launch_pts, budget, jobs)
    ok = {p.index for p in launch_pts}
    good = [t for t in launches if t.classification == "double-singular" and t.end.index in ok]
    trajs = _dedupe(good)
    g = _graph_from(qd, launch_pts, trajs, launches, "DK" if include_simple_poles else "DK0")
    return g


def spans_all_branch_points(graph: TrajectoryGraph, qd: QuadraticDifferential) -> bool:
    """Every zero of D is a vertex with at least one edge."""
    D = qd.D
    if D.degree < 1:
        return True
    from ..polyalg import poly_roots
    for r, _ in poly_roots(D):
        hit = [i for i, z in enumerate(graph.vertices)
               if abs(z - r) <= 1e-6 * (1 + abs(r)) and graph.degree(i) > 0]
        if not hit:
            return False
    return True


class StrebelResult(NamedTuple):
    ok: bool
    graph: TrajectoryGraph | None
    status: str            # "strebel" | "not-strebel" | "budget-exceeded"
    reason: str


def strebel_surrogate(qd: QuadraticDifferential, budget: float | None = None, jobs: int = 1) -> StrebelResult:
    """Numerical Strebel test for ``R/P dz**2``.

    Pole-order gates first (no pole of order > 2, negative leading
    coefficient at double poles, infinity included); then every critical
    trajectory must end at a zero or simple pole within budget. The graph
    returned is the critical graph with every finite singular point as a
    vertex.
    """
    if not qd.Q.is_zero:
        raise ValueError("the Strebel surrogate is defined for Q = 0")
    if qd.P.degree >= 1 and qd.R.degree >= 1 and not coprime(qd.P, qd.R):
        raise NotCoprime("P and R share a root")
    for p in qd.points:
        if p.order < -2:
            return StrebelResult(False, None, "not-strebel", f"pole of order {-p.order} at {p.location}")
        if p.order == -2 and not (abs(p.coefficient.imag) <= 1e-9 * abs(p.coefficient)
                                  and p.coefficient.real < 0):
            return StrebelResult(False, None, "not-strebel",
                                 f"double pole at {p.location} with coefficient {p.coefficient}")
    oinf = qd.order_at_infinity
    cinf = qd.leading_at_infinity
    if oinf < -2:
        return StrebelResult(False, None, "not-strebel", f"pole of order {-oinf} at infinity")
    if oinf == -2 and not (abs(cinf.imag) <= 1e-9 * abs(cinf) and cinf.real < 0):
        return StrebelResult(False, None, "not-strebel", f"double pole at infinity with coefficient {cinf}")
    crit = [p for p in qd.points if p.is_critical]
    launches = _trace_all(qd, crit, budget, jobs)
    status, reason = "strebel", ""
    for t in launches:
        if t.classification == "budget-exceeded":
            status, reason = "budget-exceeded", "a critical trajectory did not terminate within budget"
        elif t.classification != "double-singular" and status == "strebel":
            status, reason = "not-strebel", f"critical trajectory {t.classification}"
    good = [t for t in launches if t.classification == "double-singular"]
    trajs = _dedupe(good)
    g = _graph_from(qd, list(qd.points), trajs, launches, "K")
    return StrebelResult(status == "strebel", g, status, reason)
