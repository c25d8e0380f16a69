from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motherbody.errors import NotSimplePole, SchemaError, ZeroPolynomial
from motherbody.polyalg import (BiPoly, GaussRat, UniPoly, coprime, discriminant_D, newton_support,
                                poly_gcd, poly_roots, residue_at, resultant, roots_flat)


def _sorted(rm):
    return sorted(rm, key=lambda t: (round(t[0].real, 8), round(t[0].imag, 8)))


def test_roots_symmetric_pair():
    rm = _sorted(poly_roots(UniPoly([-1, 0, 1])))
    assert [m for _, m in rm] == [1, 1]
    assert abs(rm[0][0] + 1) < 1e-14 and abs(rm[1][0] - 1) < 1e-14


def test_roots_repeated():
    rm = poly_roots(UniPoly([4, -4, 1]))
    assert len(rm) == 1 and rm[0][1] == 2
    assert abs(rm[0][0] - 2) < 1e-12


def test_roots_of_unity_against_companion_matrix():
    p = UniPoly([-1, 0, 0, 0, 0, 1])
    ours = np.sort_complex(roots_flat(p))
    companion = np.sort_complex(np.linalg.eigvals(_companion([-1, 0, 0, 0, 0])))
    assert np.allclose(ours, companion, atol=1e-12)
    assert np.allclose(np.abs(ours), 1, atol=1e-14)


def _companion(low):
    """Companion matrix of the monic polynomial z**n + sum low[k] z**k."""
    n = len(low)
    C = np.zeros((n, n), complex)
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -np.asarray(low)
    return C


def test_roots_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        poly_roots(UniPoly([]))


def _chebyshev_T(n):
    """Integer coefficients of T_n from T_{k+1} = 2 z T_k - T_{k-1}."""
    a, b = [1], [0, 1]
    for _ in range(n - 1):
        a, b = b, [x - y for x, y in zip([0] + [2 * c for c in b], a + [0, 0])]
    return b


def test_roots_with_zero_root_and_high_degree():
    p = UniPoly([0, 0] + _chebyshev_T(60), exact=True)
    rm = poly_roots(p)
    zero = [m for r, m in rm if abs(r) < 1e-12]
    assert zero == [2]
    found = np.sort(np.array([r.real for r, m in rm if abs(r) > 1e-12]))
    want = np.sort(np.cos(np.pi * (np.arange(60) + 0.5) / 60))
    assert np.allclose(found, want, atol=1e-12)


def test_coprime_examples():
    assert not coprime(UniPoly([-1, 0, 1]), UniPoly([-1, 1]))
    assert coprime(UniPoly([-1, 0, 1]), UniPoly([0, 1]))
    p, q = UniPoly([1, 0, 1]), UniPoly([1, 2, 1])
    assert coprime(p, q)
    # resultant oracle: prod over roots +-i of q = (2i)(-2i) = 4
    assert abs(resultant(p, q) - 4) < 1e-12
    pe, qe = UniPoly([1, 0, 1], exact=True), UniPoly([1, 2, 1], exact=True)
    assert resultant(pe, qe) == GaussRat(4)
    assert coprime(pe, qe)


def test_exact_gcd():
    p = UniPoly([-1, 0, 1], exact=True)
    q = UniPoly([-1, 1], exact=True)
    assert poly_gcd(p, q).coeffs == (GaussRat(-1), GaussRat(1))


def test_discriminant_examples():
    D = discriminant_D(UniPoly([1]), UniPoly([0, -1]), UniPoly([1]))
    assert np.allclose(D.as_array(), [-4, 0, 1])
    D = discriminant_D(UniPoly([-1, 0, 1]), UniPoly([]), UniPoly([-1]))
    assert np.allclose(D.as_array(), [-4, 0, 4])
    assert discriminant_D(UniPoly([]), UniPoly([]), UniPoly([])).is_zero


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=4),
       st.lists(st.floats(-3, 3), min_size=1, max_size=4),
       st.lists(st.floats(-3, 3), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_discriminant_pointwise(p, q, r):
    P, Q, R = UniPoly(p), UniPoly(q), UniPoly(r)
    D = discriminant_D(P, Q, R)
    zs = np.random.default_rng(1).normal(size=20) + 1j * np.random.default_rng(2).normal(size=20)
    want = Q(zs) ** 2 - 4 * P(zs) * R(zs)
    got = D(zs) if not D.is_zero else np.zeros_like(zs)
    scale = np.abs(Q(zs)) ** 2 + 4 * np.abs(P(zs) * R(zs)) + 1e-300
    assert np.all(np.abs(got - want) <= 1e-12 * scale)


def test_residue_examples():
    num, den = UniPoly([1, 3]), UniPoly([-1, 0, 1])
    assert abs(residue_at(num, den, 1.0) - 2) < 1e-15
    assert abs(residue_at(num, den, -1.0) - 1) < 1e-15
    with pytest.raises(NotSimplePole):
        residue_at(UniPoly([1]), UniPoly([0, 0, 1]), 0.0)


def test_newton_support_examples():
    s = newton_support(BiPoly({(1, 1): 1, (0, 0): -1}))
    assert s.points == {(1, 1), (0, 0)} and s.M == 0
    assert newton_support(BiPoly({(2, 0): 1, (0, 1): -1})).M == -1
    s = newton_support(BiPoly({(2, 2): 1, (2, 0): 1, (0, 0): -1}))
    assert s.M == 0
    assert set(s.hull) <= s.points


@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)),
                       st.integers(1, 5), min_size=1, max_size=6),
       st.integers(0, 3))
@settings(max_examples=50, deadline=None)
def test_M_invariant_under_diagonal_shift(mons, a):
    P = BiPoly(mons)
    shifted = BiPoly({(i + a, j + a): c for (i, j), c in mons.items()})
    assert newton_support(shifted).M == newton_support(P).M


@given(st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=1, max_size=12, unique=True))
@settings(max_examples=40, deadline=None)
def test_roots_reconstruct(pairs):
    roots = np.array([complex(a, b) for a, b in pairs])
    d = np.abs(roots[:, None] - roots[None, :]) + np.eye(len(roots))
    if np.min(d) < 0.05:
        return                                     # only well-separated roots are claimed
    p = UniPoly.from_roots(roots)
    back = UniPoly.from_roots(roots_flat(p))
    a, b = p.as_array(), back.as_array()
    assert np.max(np.abs(a - b)) <= 1e-10 * np.max(np.abs(a))


def test_json_roundtrip_float_and_exact():
    p = UniPoly([1 + 2j, 0, -3])
    assert UniPoly.from_json(p.to_json()).coeffs == p.coeffs
    pe = UniPoly([Fraction(1, 3), 2], exact=True)
    back = UniPoly.from_json(pe.to_json())
    assert back.exact and back.coeffs == pe.coeffs
    bp = BiPoly({(2, 2): 1, (2, 0): -1, (0, 0): -1})
    assert BiPoly.from_json(bp.to_json()).monomials == bp.monomials
    with pytest.raises(SchemaError):
        UniPoly.from_json({"nope": []})
    with pytest.raises(SchemaError):
        BiPoly.from_json({"monomials": [{"i": "x"}]})
