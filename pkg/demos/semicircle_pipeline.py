"""
From a quadratic equation to its motherbody measure.

P C**2 + Q C + R = 0 with (P, Q, R) = (1, -z, 1): the differential is
(4 - z**2) dz**2, one trajectory joins the zeros at -2 and 2, and the
unique candidate is the semicircle law.
"""
import warnings
from pathlib import Path

import numpy as np

from motherbody import gallery, io, mother
from motherbody.quaddiff import build_DK0, build_theta
from motherbody.verify import cauchy_quadrature, compare_branch, moments

P, Q, R = gallery.semicircle_triple()
with warnings.catch_warnings():
    warnings.simplefilter("ignore")        # (1, -z, 1) is outside the degree normalisation
    qd = build_theta(P, Q, R)
    graph = build_DK0(qd)
print("singular points:", [(s.location, s.order) for s in qd.points])
print("graph V, E, d:", graph.V, graph.E, graph.d)

for c in mother.enumerate_candidates(qd, graph):
    print(c.subgraph, c.status, "positive" if c.positive else "signed")
    mu = c.measure
    print("  moments:", np.round(np.real(moments(mu, 6)), 8))
    print("  transform at 3:", cauchy_quadrature(mu, 3.0), (3 - np.sqrt(5)) / 2)
    print("  max branch error:", compare_branch(mu, (P, Q, R), samples=50).max_abs_error)

Path("semicircle.svg").write_text(io.graph_svg(qd, graph, graph.launches, mu))
