"""Hand-built embedded graphs and standard triples used in demos and tests."""
from __future__ import annotations

import numpy as np

from .polyalg import UniPoly
from .quaddiff.graph import GraphEdge, TrajectoryGraph


def _arc(center, radius, a0, a1, n=65):
    t = np.linspace(a0, a1, n)
    return center + radius * np.exp(1j * t)


def _segment(a, b, n=17):
    return np.linspace(complex(a), complex(b), n)


def _edge(u, v, pts):
    pts = np.asarray(pts, complex)
    return GraphEdge(u, v, float(np.angle(pts[1] - pts[0])), float(np.angle(pts[-2] - pts[-1])), pts)


def circle_chain() -> TrajectoryGraph:
    """Two circles joined by a bridge, with a whisker on each outer side.

    Vertices on the real axis at -6, -4, -2, 2, 4, 6, 8; the circles sit on
    [-4, -2] and [2, 4]. Every edge-end touching a circle points outwards.
    """
    xs = [-6.0, -4.0, -2.0, 2.0, 4.0, 6.0, 8.0]
    verts = [complex(x) for x in xs]
    edges = [
        _edge(0, 1, _segment(-6, -4)),
        _edge(1, 2, _arc(-3, 1, np.pi, 0)),           # upper half, left to right
        _edge(1, 2, _arc(-3, 1, np.pi, 2 * np.pi)),   # lower half
        _edge(2, 3, _segment(-2, 2)),
        _edge(3, 4, _arc(3, 1, np.pi, 0)),
        _edge(3, 4, _arc(3, 1, np.pi, 2 * np.pi)),
        _edge(4, 5, _segment(4, 6)),
        _edge(5, 6, _segment(6, 8)),
    ]
    return TrajectoryGraph(verts, edges)


def cut_cycle() -> TrajectoryGraph:
    """A circle through -1 and 1 split by the chord between them."""
    verts = [-1 + 0j, 1 + 0j]
    edges = [
        _edge(0, 1, _arc(0, 1, np.pi, 0)),
        _edge(0, 1, _segment(-1, 1)),
        _edge(0, 1, _arc(0, 1, np.pi, 2 * np.pi)),
    ]
    return TrajectoryGraph(verts, edges)


def figure_eight_with_segments() -> TrajectoryGraph:
    """Two loops at the origin, each enclosing a segment (three complementary regions)."""
    verts = [0j, 1 + 0j, 2 + 0j, -1 + 0j, -2 + 0j]
    theta = np.linspace(-np.pi / 4, np.pi / 4, 129)
    right = 3 * np.cos(2 * theta) * np.exp(1j * theta)     # rose petal, corner at 0
    right[0] = right[-1] = 0
    left = -right
    edges = [
        _edge(1, 2, _segment(1, 2)),
        _edge(0, 0, right),
        _edge(0, 0, left),
        _edge(3, 4, _segment(-1, -2)),
    ]
    return TrajectoryGraph(verts, edges)


def semicircle_triple():
    """``C**2 - z C + 1``: Cauchy transform of the semicircle law on [-2, 2]."""
    return UniPoly([1.0]), UniPoly([0.0, -1.0]), UniPoly([1.0])


def arcsine_triple():
    """``(z**2 - 1) C**2 - 1``: Cauchy transform of the arcsine law on [-1, 1]."""
    return UniPoly([-1.0, 0.0, 1.0]), UniPoly([]), UniPoly([-1.0])


def two_interval_triple(a=1.0, b=2.0):
    """``(z**2 - a**2)(z**2 - b**2) C**2 - z**2``: a Strebel case with three regions."""
    return UniPoly.from_roots([a, -a, b, -b]), UniPoly([]), UniPoly([0.0, 0.0, -1.0])
