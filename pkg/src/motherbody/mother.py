"""Motherbody candidates for quadratic equations ``P C**2 + Q C + R = 0``.

A candidate is fixed by a subgraph ``G`` of the critical graph: the branch of
the curve is the one behaving like ``alpha/z`` at infinity, continued through
the plane and switched to the other sheet whenever the path crosses ``G``.
Its jump across ``G`` is a real measure; the poles it keeps are atoms.

Square roots of ``D = Q**2 - 4PR`` are continued exactly along straight
segments via the factorisation of ``D`` (each factor ``z - d`` changes its
argument by less than pi along a segment avoiding ``d``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .errors import (DegenerateEmbedding, InconsistentSection, MotherbodyError, MultiplePoleOfP,
                     NonRealDensity, NonRealResidue, NoProbabilityBranch, NotSpanning, NotStrebel,
                     TooManyEdges)
from .measure import Arc, Atom, SignedMeasure, arc_samples
from .polyalg import BiPoly, UniPoly, newton_support, poly_roots
from .quaddiff.differential import QuadraticDifferential
from .quaddiff.graph import (ANGLE_TIE, TrajectoryGraph, build_DK0, segments_crossings,
                             strebel_surrogate)

MAX_EDGES = 20
REAL_RTOL = 1e-6


# ---------------------------------------------------------------------------
# spanning subgraphs
# ---------------------------------------------------------------------------

def enumerate_spanning_subgraphs(graph: TrajectoryGraph) -> list:
    """Edge subsets touching every vertex, ordered by bitmask."""
    E = graph.E
    if E > MAX_EDGES:
        raise TooManyEdges(f"{E} edges exceed the exhaustive bound {MAX_EDGES}")
    if graph.V == 0:
        return [()]
    ends = [(1 << e.u) | (1 << e.v) for e in graph.edges]
    full = (1 << graph.V) - 1
    out = []
    for mask in range(1, 1 << E):
        cover = 0
        ids = []
        for k in range(E):
            if mask >> k & 1:
                cover |= ends[k]
                ids.append(k)
        if cover == full:
            out.append(tuple(ids))
    return out


# ---------------------------------------------------------------------------
# the marked branch at infinity
# ---------------------------------------------------------------------------

def infinity_alphas(P: UniPoly, Q: UniPoly, R: UniPoly) -> list:
    """Values ``alpha`` for which the curve has a branch ``alpha/z + O(1/z**2)``."""
    from .verify import germ_residues
    bp = BiPoly.from_triple(P.to_float(), Q.to_float(), R.to_float())
    return [complex(r) for r in germ_residues(bp)]


def marked_alpha(P: UniPoly, Q: UniPoly, R: UniPoly, alpha=None) -> float:
    """Real ``alpha`` of the marked branch (user choice, else the largest real one)."""
    roots = infinity_alphas(P, Q, R)
    real = [r.real for r in roots if abs(r.imag) <= 1e-10 * max(1.0, abs(r))]
    if alpha is not None:
        if not roots:
            raise NoProbabilityBranch("no branch of the form alpha/z at infinity")
        best = min(roots, key=lambda r: abs(r - alpha))
        if abs(best - alpha) > 1e-6 * max(1.0, abs(alpha)) or abs(best.imag) > 1e-10:
            raise NoProbabilityBranch(f"alpha = {alpha} is not a real root of the balance at infinity")
        return float(best.real)
    if not real:
        raise NoProbabilityBranch("no real branch of the form alpha/z at infinity")
    return float(max(real))


def _left_probe(pts, frac=0.05):
    """Midpoint of a polyline, its unit tangent and a small offset to the left."""
    pts = np.asarray(pts, complex)
    if len(pts) < 3:
        pts = np.array([pts[0], 0.5 * (pts[0] + pts[-1]), pts[-1]])
    j = len(pts) // 2
    tang = pts[j + 1] - pts[j - 1]
    tang /= abs(tang)
    delta = frac * min(abs(pts[j + 1] - pts[j]), abs(pts[j] - pts[j - 1]))
    return pts[j], tang, pts[j] + 1j * tang * delta


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Section:
    """Branch of the curve over the complement of ``G`` containing the marked point."""

    qd: QuadraticDifferential = field(repr=False)
    graph: TrajectoryGraph = field(repr=False)
    G: tuple
    alpha: float
    far_radius: float = 0.0
    _droots: np.ndarray = field(default=None, repr=False)
    _dmult: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        D = self.qd.D
        if D.degree >= 1:
            rm = poly_roots(D)
            self._droots = np.array([r for r, _ in rm], complex)
            self._dmult = np.array([m for _, m in rm], float)
        else:
            self._droots = np.zeros(0, complex)
            self._dmult = np.zeros(0)
        self._dlc = complex(D.lc) if not D.is_zero else 0j
        if not self.far_radius:
            pts = list(self.graph.vertices) + list(self._droots) + [0j]
            self.far_radius = 100.0 * (1 + max(abs(complex(z)) for z in pts))
        self._polys = [self.graph.edges[k].points for k in self.G]

    # -- raw ingredients --------------------------------------------------------
    def _roots_at(self, z):
        P, Q, R = self.qd.P, self.qd.Q, self.qd.R
        p, q, r = complex(P(z)), complex(Q(z)), complex(R(z))
        if p == 0:
            return np.array([-r / q if q else np.inf])
        disc = np.sqrt(q * q - 4 * p * r + 0j)
        return np.array([(-q + disc) / (2 * p), (-q - disc) / (2 * p)])

    def _far_sqrt(self, z_far):
        """``s = 2 P C + Q`` (a square root of D) on the marked branch at ``z_far``."""
        cands = self._roots_at(z_far)
        C = cands[int(np.argmin(np.abs(cands - self.alpha / z_far)))]
        return 2 * complex(self.qd.P(z_far)) * C + complex(self.qd.Q(z_far))

    def _continue(self, s0, a, b):
        """Continue ``s = sqrt(D)`` along the segment ``[a, b]``."""
        if self._droots.size == 0:
            return s0
        ratio = (b - self._droots) / (a - self._droots)
        return s0 * np.exp(np.sum(0.5 * self._dmult * np.log(ratio)))

    def _crossings(self, a, b) -> int:
        return sum(segments_crossings(a, b, poly) for poly in self._polys)

    def sqrt_D(self, z, approach: float | None = None, n_paths: int = 2) -> complex:
        """The section's square root of D at ``z`` (checked along several paths)."""
        z = complex(z)
        base = [0.37, 2.51, 4.43] if approach is None else [approach, approach + 0.45, approach - 0.45]
        vals = []
        for ang in base[:max(1, n_paths)]:
            zf = z + self.far_radius * np.exp(1j * ang)
            s = self._far_sqrt(zf)
            s = self._continue(s, zf, z)
            if self._crossings(zf, z) % 2:
                s = -s
            vals.append(s)
        ref = vals[0]
        scale = max(abs(ref), 1e-300)
        for v in vals[1:]:
            if abs(v - ref) > 1e-6 * scale:
                raise InconsistentSection(f"branch at {z} depends on the path", point=z)
        return ref

    def value(self, z, **kw) -> complex:
        s = self.sqrt_D(z, **kw)
        return (-complex(self.qd.Q(z)) + s) / (2 * complex(self.qd.P(z)))

    # -- per-edge quantities -----------------------------------------------------
    def edge_rate(self, k: int) -> float:
        """Mass per unit canonical parameter on edge ``k`` (in the trace orientation).

        Zero for edges outside ``G``.
        """
        edge = self.graph.edges[k]
        if k not in self.G:
            return 0.0
        zm, tang, left = _left_probe(edge.points)
        s = self.sqrt_D(left, approach=float(np.angle(1j * tang)), n_paths=3)
        s = self._continue(s, left, zm)
        # trace orientation: dz/dw = 1/sqrt(phi) with Re(sqrt(phi) dz) > 0
        sq = np.sqrt(complex(self.qd(np.array([zm]))[0]))
        if (sq * tang).real < 0:
            sq = -sq
        rate = -s / (2j * np.pi * complex(self.qd.P(zm)) * sq)
        expected = np.sqrt(self.qd.theta_scale) / (2 * np.pi)
        if abs(rate.imag) > REAL_RTOL * abs(rate) or abs(abs(rate) - expected) > 1e-4 * expected:
            raise NonRealDensity(f"edge {k}: jump rate {rate} (expected +-{expected})", edge=k)
        return float(np.sign(rate.real) * expected)

    def pole_residue(self, p: complex, multiplicity: int) -> complex:
        """Residue of the section at a zero ``p`` of P (0 when the finite sheet is selected)."""
        P, Q = self.qd.P, self.qd.Q
        if not Q.is_zero:
            s = self.sqrt_D(p)
            q = complex(Q(p))
            if abs(s + q) > abs(s - q):
                return 0j
            if multiplicity > 1:
                raise MultiplePoleOfP(f"selected pole of P at {p} has multiplicity {multiplicity}", pole=p)
            return -q / complex(P.deriv()(p))
        if multiplicity % 2:
            # a branch point of C: integrable singularity, no atom
            return 0j
        # Q = 0: contour integral on a small circle that avoids everything else
        others = [complex(z) for z in self.graph.vertices if abs(complex(z) - p) > 1e-9]
        others += [complex(z) for z in self._droots if abs(z - p) > 1e-9]
        rad = 0.2 * min([abs(z - p) for z in others] or [1.0])
        if self._polys:
            dist = np.abs(np.concatenate(self._polys) - p)
            dist = dist[dist > 1e-9]
            if dist.size:
                rad = min(rad, 0.2 * float(np.min(dist)))
        n = 64
        ang = 2 * np.pi * np.arange(n + 1) / n
        zc = p + rad * np.exp(1j * ang)
        s = self.sqrt_D(zc[0])
        vals = []
        for a, b in zip(zc[:-1], zc[1:]):
            vals.append(s)
            s = self._continue(s, a, b)
        vals = np.array(vals)
        Cv = vals / (2 * P(zc[:-1]))
        return complex(np.mean(Cv * (zc[:-1] - p)))


def _check_parity(graph: TrajectoryGraph, G, qd: QuadraticDifferential):
    """Sheet switching across G is consistent iff every vertex has G-degree of the parity of D's order there.

    A small loop around a vertex crosses G ``deg`` times while the square root
    of D changes sign iff the vertex is a branch point; any closed loop in the
    complement reduces to a sum of such loops.
    """
    D = qd.D
    rm = poly_roots(D) if D.degree >= 1 else []
    for v, z in enumerate(graph.vertices):
        z = complex(z)
        order = sum(m for r, m in rm if abs(r - z) <= 1e-6 * (1 + abs(z)))
        deg = sum((graph.edges[k].u == v) + (graph.edges[k].v == v) for k in G)
        if (deg - order) % 2:
            raise InconsistentSection(f"vertex {z} has degree {deg} in the subgraph but D has order {order}",
                                      point=z)


def section_from_subgraph(graph: TrajectoryGraph, G, qd: QuadraticDifferential, alpha=None,
                          check_spanning: bool = True) -> Section:
    """Section switching sheets across ``G`` and containing the marked point at infinity."""
    G = tuple(sorted(G))
    if check_spanning:
        D = qd.D
        if D.degree >= 1:
            for r, m in poly_roots(D):
                if m % 2 == 0:
                    continue
                touched = [k for k in G for v in (graph.edges[k].u, graph.edges[k].v)
                           if abs(graph.vertices[v] - r) <= 1e-6 * (1 + abs(r))]
                if not touched:
                    raise NotSpanning(f"branch point {r} is not covered by the subgraph", point=r)
    a = marked_alpha(qd.P, qd.Q, qd.R, alpha)
    _check_parity(graph, G, qd)
    sec = Section(qd, graph, G, a)
    sub = graph.subgraph(G)
    # one check point per region of the complement of G
    for dart, reg in sorted(sub.regions()["dart_region"].items()):
        _, tang, left = _left_probe(sub.dart_points(dart))
        sec.sqrt_D(left, approach=float(np.angle(1j * tang)), n_paths=3)
    return sec


def section_assignment(sec: Section) -> list:
    """Representative point and branch value for each region of the complement of G."""
    sub = sec.graph.subgraph(sec.G)
    reg = sub.regions()
    reps = {}
    for dart, r in sorted(reg["dart_region"].items()):
        if r in reps:
            continue
        reps[r] = _left_probe(sub.dart_points(dart))[2]
    if 0 not in reps:
        reps[0] = sec.far_radius * 0.5 + 0j
    out = []
    for r in sorted(reps):
        z = complex(reps[r])
        out.append({"region": r, "point": z, "C": sec.value(z)})
    return out


# ---------------------------------------------------------------------------
# candidates
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class MotherbodyCandidate:
    subgraph: tuple
    section: Section | None = field(default=None, repr=False)
    poles: list = field(default_factory=list)
    measure: SignedMeasure | None = None
    positive: bool = False
    status: str = "ok"
    detail: str = ""
    mass_error: float = float("nan")
    signs: tuple | None = None

    def to_json(self, n_nodes: int = 201) -> dict:
        doc = {"subgraph": list(self.subgraph), "status": self.status, "detail": self.detail,
               "poles": [{"z": [complex(z).real, complex(z).imag], "res": float(np.real(r))}
                         for z, r in self.poles],
               "positive": bool(self.positive)}
        if self.signs is not None:
            doc["region_signs"] = list(self.signs)
        if self.measure is not None:
            doc["mass"] = self.measure.total_mass
            doc["arcs"] = []
            for arc in self.measure.arcs:
                doc["arcs"].append(dict(arc_samples(arc, n_nodes), edge=arc.meta.get("edge")))
        return doc


def _edge_arc(edge, k, rate):
    t = edge.curve
    return Arc(z_of=t.z_of, dz_of=t.velocity, t_span=(0.0, t.W), rate=rate,
               end_exponents=t.end_exponents(), meta={"edge": k})


def poles_and_residues(section: Section, tol: float = 1e-9) -> list:
    """Zeros of P at which the section is infinite, with the residues there."""
    P = section.qd.P
    out = []
    if P.degree < 1:
        return out
    for p, m in poly_roots(P):
        res = section.pole_residue(p, m)
        if abs(res) > tol:
            if abs(res.imag) > 1e-8 * max(1.0, abs(res)):
                raise NonRealResidue(f"residue {res} at {p}", pole=p, residue=res)
            out.append((complex(p), float(res.real)))
    return out


def realize_measure(candidate: MotherbodyCandidate, qd: QuadraticDifferential | None = None) -> SignedMeasure:
    sec = candidate.section
    arcs = []
    for k in sec.G:
        rate = sec.edge_rate(k)
        arcs.append(_edge_arc(sec.graph.edges[k], k, rate))
    atoms = [Atom(z, float(np.real(r))) for z, r in candidate.poles]
    mu = SignedMeasure(atoms=atoms, arcs=arcs)
    candidate.measure = mu
    candidate.positive = mu.is_positive
    candidate.mass_error = abs(mu.total_mass - sec.alpha)
    return mu


def build_candidate(graph: TrajectoryGraph, G, qd: QuadraticDifferential, alpha=None) -> MotherbodyCandidate:
    cand = MotherbodyCandidate(tuple(sorted(G)))
    try:
        cand.section = section_from_subgraph(graph, G, qd, alpha)
        cand.poles = poles_and_residues(cand.section)
        realize_measure(cand, qd)
    except MotherbodyError as exc:
        cand.status = exc.code
        cand.detail = exc.detail
    return cand


def enumerate_candidates(qd: QuadraticDifferential, graph: TrajectoryGraph | None = None,
                         alpha=None, jobs: int = 1) -> list:
    """All spanning-subgraph candidates of the critical graph (general ``Q``)."""
    if graph is None:
        graph = build_DK0(qd, jobs=jobs)
    subs = enumerate_spanning_subgraphs(graph)
    if qd.D.degree < 1 and not subs:
        subs = [()]
    return [build_candidate(graph, G, qd, alpha) for G in subs]


# ---------------------------------------------------------------------------
# Q = 0
# ---------------------------------------------------------------------------

def region_sign_supports(K: TrajectoryGraph) -> list:
    """``(signs, edges)`` for every sign choice on the bounded regions of the complement.

    Works on abstract graphs: the support of the measure attached to a sign
    choice is the set of edges with equal signs on both sides.
    """
    d = K.regions()["count"]
    sides = [K.edge_sides(k) for k in range(K.E)]
    out = []
    for bits in itertools.product((1, -1), repeat=d - 1):
        eps = (1,) + bits
        out.append((eps, tuple(k for k, (a, b) in enumerate(sides) if eps[a] == eps[b])))
    return out


def q_zero_enumerate(qd: QuadraticDifferential, K: TrajectoryGraph | None = None, alpha=None) -> list:
    """The ``2**(d-1)`` real measures supported on the critical graph of ``R/P dz**2``.

    One measure per choice of sign of the branch in each bounded region of
    the complement (the unbounded region keeps the ``alpha/z`` branch).
    """
    if not qd.Q.is_zero:
        raise ValueError("q_zero_enumerate needs Q = 0")
    if K is None:
        res = strebel_surrogate(qd)
        if not res.ok:
            raise NotStrebel(res.reason or res.status, status=res.status)
        K = res.graph
    reg = K.regions()
    # base section: switch sheets across every edge of K
    base = Section(qd, K, tuple(range(K.E)), marked_alpha(qd.P, qd.Q, qd.R, alpha))
    base_rates = [base.edge_rate(k) for k in range(K.E)]
    sides = [K.edge_sides(k) for k in range(K.E)]
    atoms0 = []
    for p, m in (poly_roots(qd.P) if qd.P.degree >= 1 else []):
        if m < 2:
            continue
        v = min(range(K.V), key=lambda i: abs(K.vertices[i] - p))
        region = reg["vertex_region"].get(v, K.region_of_point(p))
        r = base.pole_residue(p, m)
        if abs(r.imag) > 1e-8 * max(1.0, abs(r)):
            raise NonRealResidue(f"residue {r} at {p}", pole=p, residue=r)
        atoms0.append((complex(p), float(r.real), region))
    out = []
    for eps, G in region_sign_supports(K):
        arcs = [_edge_arc(K.edges[k], k, eps[sides[k][0]] * base_rates[k]) for k in G]
        atoms = [Atom(z, eps[r] * w) for z, w, r in atoms0]
        mu = SignedMeasure(atoms=atoms, arcs=arcs)
        sec = Section(qd, K, tuple(G), base.alpha)
        cand = MotherbodyCandidate(tuple(G), sec, [(a.location, a.weight) for a in atoms], mu,
                                   mu.is_positive, signs=eps,
                                   mass_error=abs(mu.total_mass - base.alpha))
        out.append(cand)
    return out


# ---------------------------------------------------------------------------
# positivity
# ---------------------------------------------------------------------------

def simple_cycles(graph: TrajectoryGraph) -> list:
    """All simple cycles as lists of darts ``(edge, forward)``."""
    cycles = []
    for k, e in enumerate(graph.edges):
        if e.is_loop:
            cycles.append([(k, True)])
    par = {}
    simple = nx.Graph()
    for k, e in enumerate(graph.edges):
        if e.is_loop:
            continue
        key = (min(e.u, e.v), max(e.u, e.v))
        par.setdefault(key, []).append(k)
        simple.add_edge(*key)
    for (u, v), ks in par.items():
        for a, b in itertools.combinations(ks, 2):
            ea = graph.edges[a]
            eb = graph.edges[b]
            cycles.append([(a, ea.u == u), (b, eb.u == v)])
    for nodes in nx.simple_cycles(simple):
        if len(nodes) < 3:
            continue
        hops = list(zip(nodes, nodes[1:] + nodes[:1]))
        choices = [par[(min(x, y), max(x, y))] for x, y in hops]
        for pick in itertools.product(*choices):
            cycles.append([(k, graph.edges[k].u == x) for k, (x, y) in zip(pick, hops)])
    return cycles


def _cycle_polygon(graph, cyc):
    return np.concatenate([graph.dart_points(d)[:-1] for d in cyc])


def _end_angle(graph, dart, at_head: bool):
    k, fwd = dart
    e = graph.edges[k]
    # dart leaves from its tail end and arrives at its head end
    if at_head:
        return e.angle_v if fwd else e.angle_u
    return e.angle_u if fwd else e.angle_v


def positivity_criterion(K: TrajectoryGraph) -> dict:
    """Positive-measure test: no edge may be attached to a simple cycle from inside.

    For every simple cycle, oriented counter-clockwise, and every vertex on
    it, the other edge-ends at that vertex must not point into the interior
    wedge between the outgoing and incoming cycle edges. When the test
    passes the support is the forest of edges lying on no simple cycle.
    """
    from .quaddiff.graph import _signed_area
    cycles = simple_cycles(K)
    on_cycle = set()
    offending = []
    for cyc in cycles:
        poly = _cycle_polygon(K, cyc)
        if _signed_area(poly) < 0:
            cyc = [(k, not f) for k, f in reversed(cyc)]
        cyc_edges = {k for k, _ in cyc}
        on_cycle |= cyc_edges
        n = len(cyc)
        for i in range(n):
            din, dout = cyc[i - 1], cyc[i]
            kin, kout = din[0], dout[0]
            e_out = K.edges[kout]
            v = e_out.u if dout[1] else e_out.v
            a_out = _end_angle(K, dout, at_head=False)
            a_in = _end_angle(K, din, at_head=True)
            width = np.mod(a_in - a_out, 2 * np.pi)
            for k, e in enumerate(K.edges):
                if k in cyc_edges:
                    continue
                for ang, vert in ((e.angle_u, e.u), (e.angle_v, e.v)):
                    if vert != v:
                        continue
                    rel = np.mod(ang - a_out, 2 * np.pi)
                    if min(rel, abs(rel - width), 2 * np.pi - rel) <= ANGLE_TIE:
                        raise DegenerateEmbedding(f"edge {k} is tangent to a cycle at vertex {v}", vertex=v)
                    if rel < width:
                        offending.append({"cycle": sorted(cyc_edges), "edge": k, "vertex": v})
    admits = not offending
    support = [k for k in range(K.E) if k not in on_cycle] if admits else []
    return {"admits": admits, "support": support, "offending": offending,
            "cycles": [sorted({k for k, _ in c}) for c in cycles]}
