import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motherbody.eigen import (ExactlySolvableOperator, cauchy_of_polynomial, eigen_residual,
                              eigenpolynomial, eigenvalues_for_degree, homogenized_matrix_entry,
                              log_derivative_ratio, operator_from_balanced, root_measure, roots_bounded_check,
                              select_principal_sequence, symbol_residual)
from motherbody.errors import (EvalAtRoot, NoConstantTerm, NotBalanced, NoUnitRoot, Resonance)
from motherbody.polyalg import BiPoly, UniPoly

ARCSINE = BiPoly({(2, 2): 1, (2, 0): -1, (0, 0): -1})


@pytest.fixture(scope="module")
def arcsine_op():
    return operator_from_balanced(ARCSINE)


def _coeffs(p):
    return np.array([complex(c) for c in p.coeffs])


def test_operator_from_balanced(arcsine_op):
    assert arcsine_op.k == 2 and arcsine_op.nondegenerate
    assert np.allclose(arcsine_op.Qs[1].as_array(), [-1, 0, 1])
    assert arcsine_op.Qs[0].is_zero
    lin = operator_from_balanced(BiPoly({(1, 1): 1, (0, 0): -1}))
    assert lin.k == 1 and np.allclose(lin.Qs[0].as_array(), [0, 1])
    scaled = operator_from_balanced(BiPoly({(2, 2): 2, (2, 0): -2, (0, 0): -2}))
    assert all(np.allclose(a.as_array(), b.as_array()) for a, b in zip(scaled.Qs, arcsine_op.Qs)
               if not a.is_zero)


def test_operator_rejections():
    with pytest.raises(NotBalanced):
        operator_from_balanced(BiPoly({(2, 0): 1, (0, 1): -1}))
    with pytest.raises(NoConstantTerm):
        operator_from_balanced(BiPoly({(2, 2): 1, (1, 1): -1}))


def test_eigenvalue_examples(arcsine_op):
    lams = sorted(eigenvalues_for_degree(arcsine_op, 5), key=lambda z: z.real)
    assert np.allclose(lams, [-np.sqrt(20), np.sqrt(20)], atol=1e-12)
    z_d = ExactlySolvableOperator((UniPoly([0, 1]),))
    assert np.allclose(eigenvalues_for_degree(z_d, 7), [7])
    degen = ExactlySolvableOperator((UniPoly([0, 1]), UniPoly([1])))
    assert not degen.nondegenerate and degen.j0 == 1
    got = sorted(eigenvalues_for_degree(degen, 4), key=lambda z: z.real)
    assert np.allclose(got, [0, 4], atol=1e-12)


def test_principal_sequence(arcsine_op):
    seq = select_principal_sequence(arcsine_op, 40)
    assert [n for n, _ in seq] == list(range(2, 41))
    for n, lam in seq:
        assert abs(lam - np.sqrt(n * (n - 1))) < 1e-9 * n
    z_d = ExactlySolvableOperator((UniPoly([0, 1]),))
    assert all(abs(lam - n) < 1e-12 for n, lam in select_principal_sequence(z_d, 10))
    with pytest.raises(NoUnitRoot):
        select_principal_sequence(ExactlySolvableOperator((UniPoly([]), UniPoly([0, 0, -1]))), 10)


@pytest.mark.parametrize("n, want", [
    (2, [-1, 0, 1]),
    (3, [0, -1, 0, 1]),
    (4, [0.2, 0, -1.2, 0, 1]),
])
def test_closed_form_eigenpolynomials(arcsine_op, n, want):
    pair = eigenpolynomial(arcsine_op, n, np.sqrt(n * (n - 1)))
    assert np.max(np.abs(_coeffs(pair.p) - want)) <= 1e-12


def test_p4_roots(arcsine_op):
    pts = np.sort(root_measure(eigenpolynomial(arcsine_op, 4, np.sqrt(12))).points.real)
    s = 1 / np.sqrt(5)
    assert np.allclose(pts, [-1, -s, s, 1], atol=1e-12)
    assert abs(np.mean(pts)) < 1e-14


def test_root_measure_examples(arcsine_op):
    rm = root_measure(eigenpolynomial(arcsine_op, 3, np.sqrt(6)))
    assert np.allclose(np.sort(rm.points.real), [-1, 0, 1], atol=1e-13)
    assert np.allclose(rm.weights, 1 / 3)
    z_d = ExactlySolvableOperator((UniPoly([0, 1]),))
    rm = root_measure(eigenpolynomial(z_d, 5, 5))
    assert rm.n == 5 and np.all(np.abs(rm.points) < 1e-12) and abs(rm.total_mass - 1) < 1e-15


def test_zero_eigenvalue_resonates(arcsine_op):
    for n in (2, 3, 6):
        with pytest.raises(Resonance):
            eigenpolynomial(arcsine_op, n, 0)


def test_eigen_identity(arcsine_op):
    for n, lam in select_principal_sequence(arcsine_op, 60, n_min=30)[::10]:
        pair = eigenpolynomial(arcsine_op, n, lam)
        assert np.max(np.abs(eigen_residual(arcsine_op, pair))) <= 1e-10 * (1 + abs(lam) ** 2)


def test_cauchy_of_polynomial_examples():
    assert abs(cauchy_of_polynomial(UniPoly([0, -1, 0, 1]), 2) - 11 / 18) < 1e-15
    for n in (1, 5, 30):
        assert abs(cauchy_of_polynomial(UniPoly([0] * n + [1]), 2) - 0.5) < 1e-15
    assert cauchy_of_polynomial(UniPoly([-1, 0, 1]), 0) == 0
    with pytest.raises(EvalAtRoot):
        cauchy_of_polynomial(UniPoly([-1, 0, 1]), 1)


def test_symbol_residual_exact_branches(arcsine_op):
    assert symbol_residual(arcsine_op, 1 / np.sqrt(3.0), 2) < 1e-15
    z_d = ExactlySolvableOperator((UniPoly([0, 1]),))
    for z in (0.3, 2 - 1j, -5):
        assert symbol_residual(z_d, 1 / z, z) < 1e-15


def test_symbol_residual_decreases(arcsine_op):
    res = []
    for n in (25, 50):
        pair = eigenpolynomial(arcsine_op, n, np.sqrt(n * (n - 1)))
        res.append(symbol_residual(arcsine_op, cauchy_of_polynomial(pair.p, 3.0), 3.0))
    assert res[1] < res[0] / 1.5


def test_roots_bounded(arcsine_op):
    rep = roots_bounded_check(arcsine_op, [10, 30, 60])
    assert all(v <= 1 + 1e-12 for v in rep["max_modulus"].values())
    assert not rep["growth_flag"] and not rep["warnings"]
    z_d = ExactlySolvableOperator((UniPoly([0, 1]),))
    assert all(v < 1e-12 for v in roots_bounded_check(z_d, [3, 6])["max_modulus"].values())
    degen = ExactlySolvableOperator((UniPoly([0, 1]), UniPoly([1])))
    rep = roots_bounded_check(degen, [4, 8])
    assert any("nondegeneracy" in w for w in rep["warnings"])
    assert set(rep["max_modulus"]) == {4, 8}


def test_arcsine_ks_moderate_degree(arcsine_op):
    n = 80
    pts = np.sort(root_measure(eigenpolynomial(arcsine_op, n, np.sqrt(n * (n - 1)))).points.real)
    F = 0.5 + np.arcsin(np.clip(pts, -1, 1)) / np.pi
    ks = max(np.max(np.arange(1, n + 1) / n - F), np.max(F - np.arange(n) / n))
    assert ks < 0.05


def _apply(op, lam, m):
    """Homogenized operator applied to z**m by plain polynomial arithmetic."""
    k = op.k
    p = np.polynomial.Polynomial([0] * m + [1])
    out = np.polynomial.Polynomial([-lam ** k * 0])
    for i, q in enumerate(op.Qs, start=1):
        out = out + lam ** (k - i) * np.polynomial.Polynomial(q.as_array() if not q.is_zero else [0]) * p.deriv(i)
    return out


@given(st.integers(1, 3), st.data(), st.integers(0, 50))
@settings(max_examples=40, deadline=None)
def test_triangularity(k, data, m):
    draws = [data.draw(st.lists(st.integers(-3, 3), min_size=i + 1, max_size=i + 1))
             for i in range(1, k + 1)]
    draws[-1][-1] = 1                                   # deg Q_k = k
    Qs = [UniPoly(c) for c in draws]
    op = ExactlySolvableOperator(tuple(Qs))
    lam = 1.7
    image = _apply(op, lam, m).coef
    nz = np.nonzero(np.abs(image) > 1e-9 * max(1.0, np.max(np.abs(image))))[0]
    assert nz.size == 0 or nz.max() <= m
    for l in range(0, m + 1):
        want = image[l] if l < image.size else 0
        got = homogenized_matrix_entry(op, lam, l, m)
        assert abs(got - want) <= 1e-9 * max(1.0, np.max(np.abs(image)))


def test_log_derivative_ratio(arcsine_op):
    pair = eigenpolynomial(arcsine_op, 3, np.sqrt(6))
    # p3 = z**3 - z, so p3'(2)/p3(2) = 11/6
    assert abs(log_derivative_ratio(pair, 2.0) - 11 / 6 / np.sqrt(6)) < 1e-14
