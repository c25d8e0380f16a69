import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motherbody import gallery
from motherbody.errors import DegenerateDifferential, StartAtHigherPole
from motherbody.polyalg import UniPoly
from motherbody.quaddiff import (TrajectoryGraph, build_DK0, build_theta, differential_from_factors,
                                 singular_points, snap_radius, spans_all_branch_points,
                                 strebel_surrogate, trace_trajectory)


def _by_location(points):
    return sorted(points, key=lambda s: (s.location.real, s.location.imag))


def test_theta_semicircle():
    qd = build_theta(*gallery.semicircle_triple())
    zs = np.linspace(-3, 3, 7) + 0.5j
    assert np.allclose(qd(zs), 4 - zs ** 2, atol=1e-13)
    pts = _by_location(singular_points(qd))
    assert [s.order for s in pts] == [1, 1]
    assert np.allclose([s.location for s in pts], [-2, 2], atol=1e-14)
    assert all(len(s.directions) == 3 for s in pts)
    # in u = 1/z: (4 - u**-2) u**-4 du**2 has a pole of order 6
    assert qd.order_at_infinity == -6


def test_theta_reduces_common_factor():
    P, Q, R = gallery.arcsine_triple()
    qd = build_theta(P, Q, R, mode="theta")
    zs = np.array([0.3 + 1j, 2.0, -1.5j])
    assert np.allclose(qd(zs), -4 / (zs ** 2 - 1), atol=1e-13)
    assert sorted(s.order for s in qd.points) == [-1, -1]
    psi = build_theta(P, Q, R)
    assert psi.mode == "psi" and psi.theta_scale == 4.0
    assert np.allclose(psi(zs) * 4, qd(zs), atol=1e-13)


def test_degenerate_theta():
    qd = build_theta(UniPoly([0, 0, 1]), UniPoly([]), UniPoly([]))
    assert qd.degenerate
    with pytest.raises(DegenerateDifferential):
        singular_points(qd)


def test_directions_of_simple_zero():
    (s,) = differential_from_factors([(0, 1)]).points
    assert np.allclose(np.sort(s.directions), [0, 2 * np.pi / 3, 4 * np.pi / 3], atol=1e-14)
    # along each direction z**1 dz**2 is real positive
    for th in s.directions:
        z = np.exp(1j * th)
        assert abs((z * z * z).imag) < 1e-13 and (z ** 3).real > 0


@given(st.integers(1, 5), st.floats(0, 2 * np.pi))
@settings(max_examples=30, deadline=None)
def test_zero_of_order_m_has_m_plus_2_equal_directions(m, phase):
    (s,) = differential_from_factors([(0, m)], gain=np.exp(1j * phase)).points
    d = np.sort(s.directions)
    assert d.size == m + 2
    assert np.allclose(np.diff(np.concatenate([d, [d[0] + 2 * np.pi]])), 2 * np.pi / (m + 2), atol=1e-12)


def test_trace_semicircle_segment():
    qd = build_theta(*gallery.semicircle_triple())
    left = _by_location(qd.points)[0]
    t = trace_trajectory(qd, left, 0.0)
    assert t.classification == "double-singular"
    assert abs(t.end.location - 2) < 1e-12
    pts = t.polyline(500)
    assert np.max(np.abs(pts.imag)) < 1e-8
    assert abs(t.arclength - 4) < 1e-6


def test_trace_between_simple_poles():
    qd = build_theta(*gallery.arcsine_triple(), mode="theta")
    left = _by_location(qd.points)[0]
    t = trace_trajectory(qd, left, 0.0)
    assert t.classification == "double-singular" and abs(t.end.location - 1) < 1e-12
    assert np.max(np.abs(t.polyline(500).imag)) < 1e-8


def test_trace_constant_differential_budget():
    qd = differential_from_factors([], gain=1.0)
    t = trace_trajectory(qd, 0.0, 0.0, budget=10.0)
    assert t.classification == "budget-exceeded"
    pts = t.polyline(100)
    assert np.max(np.abs(pts.imag)) < 1e-12 and pts.real.max() >= 10 - 1e-9


def test_refuses_higher_pole():
    qd = differential_from_factors([(0, -2), (1, 1)], gain=-1.0)
    dbl = [s for s in qd.points if s.order == -2][0]
    with pytest.raises(StartAtHigherPole):
        trace_trajectory(qd, dbl, 0.0)


def test_semicircle_graph(semicircle):
    g = semicircle["graph"]
    assert (g.V, g.E, g.d) == (2, 1, 1)
    assert spans_all_branch_points(g, semicircle["qd"])
    assert g.euler_check()


def test_escaping_zero_not_spanned():
    # c (z**2 - 1) dz**2 with c off the real axis: int_{-1}^{1} sqrt(phi) is not real,
    # so no trajectory joins the zeros and all of them escape
    c = np.exp(0.5j)
    P, Q, R = UniPoly([1.0]), UniPoly([]), UniPoly([-c, 0, c])
    qd = build_theta(P, Q, R)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = build_DK0(qd)
    assert g.E == 0
    assert all(t.classification == "escaped" for t in g.launches)
    assert not spans_all_branch_points(g, qd)


def test_double_zero_covered_by_one_edge_end():
    qd = build_theta(UniPoly([1.0]), UniPoly([]), UniPoly([0, 0, 0.5, -0.25]))   # D = z**2 (z - 2)
    g = TrajectoryGraph.from_json({"vertices": [[0, 0], [2, 0]], "edges": [{"u": 0, "v": 1}]})
    assert spans_all_branch_points(g, qd)


def test_strebel_arcsine(arcsine):
    res = arcsine["strebel"]
    assert res.ok and res.status == "strebel"
    g = res.graph
    assert g.E == 1 and g.d == 1
    assert np.max(np.abs(g.edges[0].points.imag)) < 1e-8
    assert {round(abs(z), 12) for z in g.vertices} == {1.0}


def test_strebel_rejects_triple_pole_before_tracing():
    res = strebel_surrogate(build_theta(UniPoly([0, 0, 0, 1]), UniPoly([]), UniPoly([-1])))
    assert not res.ok and res.graph is None and "order 3" in res.reason


def test_strebel_double_pole_circles():
    qd = build_theta(UniPoly([0, 0, 1]), UniPoly([]), UniPoly([-1]))          # -dz**2/z**2
    res = strebel_surrogate(qd)
    assert res.ok and res.graph.V == 1 and res.graph.E == 0
    t = trace_trajectory(qd, 1.0, np.pi / 2)
    assert t.classification == "closed"
    assert np.max(np.abs(np.abs(t.polyline(300)) - 1)) < 1e-8
    bad = strebel_surrogate(build_theta(UniPoly([0, 0, 1]), UniPoly([]), UniPoly([1])))
    assert not bad.ok and bad.status == "not-strebel"


def _all_traces(entry):
    g = entry["graph"]
    return [e.curve for e in g.edges if e.curve is not None]


def test_horizontality_and_reversibility(semicircle, arcsine, two_intervals, random_pipeline):
    entries = [semicircle, arcsine, two_intervals] + [e for e in random_pipeline if e["graph"] is not None]
    n = 0
    for entry in entries:
        for t in _all_traces(entry):
            assert t.horizontality() <= 1e-6 * t.arclength
            back = trace_trajectory(entry["qd"], t.end, t.end_direction)
            assert back.end is not None
            assert abs(back.end.location - t.start.location) <= snap_radius(t.start.location)
            n += 1
    assert n > 20


def test_euler_relation(semicircle, arcsine, two_intervals, random_pipeline):
    graphs = [semicircle["graph"], arcsine["graph"], two_intervals["graph"]]
    graphs += [e["graph"] for e in random_pipeline if e["graph"] is not None]
    for g in graphs:
        assert g.euler_check(), (g.V, g.E, g.d, len(g.components))
    for make in (gallery.circle_chain, gallery.cut_cycle, gallery.figure_eight_with_segments):
        assert make().euler_check()


def _compose(p: UniPoly, a, b, power):
    """Coefficients of p((zeta - b)/a) / a**power."""
    poly = np.polynomial.Polynomial(p.as_array() if not p.is_zero else [0])
    inner = np.polynomial.Polynomial([-b / a, 1 / a])
    return UniPoly(list(poly(inner).coef / a ** power))


def _hausdorff(a, b):
    d = np.abs(a[:, None] - b[None, :])
    return max(d.min(axis=1).max(), d.min(axis=0).max())


def _dense(edge):
    return edge.curve.polyline(2000) if edge.curve is not None else edge.points


@given(st.floats(0.3, 3), st.floats(0, 2 * np.pi), st.complex_numbers(max_magnitude=2))
@settings(max_examples=4, deadline=None)
def test_affine_covariance(modulus, arg, shift):
    P, Q, R = gallery.semicircle_triple()
    P, Q, R = P.to_float(), Q.to_float(), R.to_float()
    a = modulus * np.exp(1j * arg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g0 = build_DK0(build_theta(P, Q, R))
        g1 = build_DK0(build_theta(_compose(P, a, shift, 0), _compose(Q, a, shift, 1),
                                   _compose(R, a, shift, 2)))
    assert (g0.V, g0.E) == (g1.V, g1.E)
    img = a * np.asarray(g0.vertices) + shift
    for z in g1.vertices:
        assert np.min(np.abs(img - z)) <= 1e-6 * max(1, abs(a))
    for e0 in g0.edges:
        mapped = a * _dense(e0) + shift
        assert min(_hausdorff(mapped, _dense(e1)) for e1 in g1.edges) <= 1e-6 * max(1, abs(a))
