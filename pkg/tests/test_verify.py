import json

import numpy as np
import pytest

from motherbody.branch import rational_motherbody
from motherbody.errors import LevelCurveNotClosed, TooCloseToSupport
from motherbody.measure import Arc, Atom, SignedMeasure, atomic_measure
from motherbody.polyalg import UniPoly
from motherbody.verify import (RationalGerm, cauchy_quadrature, compare_branch, jump_density_check,
                               level_curve_measure, log_potential, moment_expansion_error, moments)

E = np.e


def _circle(radius, mass=1.0):
    return SignedMeasure(arcs=[Arc(z_of=lambda t: radius * np.exp(1j * np.asarray(t)),
                                   dz_of=lambda t: 1j * radius * np.exp(1j * np.asarray(t)),
                                   t_span=(0.0, 2 * np.pi), rate=mass / (2 * np.pi), closed=True)])


def _mu(entry):
    return entry["candidates"][0].measure


# -- transform, moments, potential -----------------------------------------------------

def test_cauchy_examples(arcsine, semicircle):
    assert abs(cauchy_quadrature(_mu(arcsine), 2.0) - 1 / np.sqrt(3)) < 1e-6
    assert abs(cauchy_quadrature(_mu(semicircle), 3.0) - (3 - np.sqrt(5)) / 2) < 1e-6
    assert cauchy_quadrature(atomic_measure([(0, 1.0)]), 2.0) == 0.5


def test_cauchy_near_support_refused(arcsine):
    with pytest.raises(TooCloseToSupport):
        cauchy_quadrature(_mu(arcsine), 0.5 + 1e-5j)


def test_moments_examples(arcsine, semicircle):
    m = moments(_mu(semicircle), 4)
    assert np.allclose(m, [1, 0, 1, 0, 2], atol=1e-6)
    assert abs(moments(_mu(arcsine), 2)[2] - 0.5) < 1e-6
    m = moments(atomic_measure([(0, 1.0)]), 5)
    assert m[0] == 1 and all(abs(x) == 0 for x in m[1:])


def test_log_potential_examples(arcsine):
    assert abs(log_potential(atomic_measure([(0, 1.0)]), E) - 1) < 1e-15
    assert abs(log_potential(_mu(arcsine), 2.0) - (np.log(2 + np.sqrt(3)) - np.log(2))) < 1e-6
    for z in (3.0, -2 + 2.5j):
        assert abs(log_potential(_circle(1.5), z) - np.log(abs(z))) < 1e-10


def test_mass_equals_zeroth_moment(semicircle, arcsine, two_intervals):
    measures = [_mu(semicircle), _mu(arcsine)] + [c.measure for c in two_intervals["candidates"]]
    measures += [_circle(2.0, 3.0), rational_motherbody(UniPoly([1, 3]), UniPoly([-1, 0, 1]))]
    for mu in measures:
        assert abs(moments(mu, 0)[0] - mu.total_mass) <= 1e-10


def test_large_z_moment_expansion(semicircle, arcsine, two_intervals):
    measures = [_mu(semicircle), _mu(arcsine)] + [c.measure for c in two_intervals["candidates"]]
    for mu in measures:
        for z in (1e3, 1e3j * np.exp(0.3j)):
            assert moment_expansion_error(mu, z) <= 1e-8


# -- branch comparison -------------------------------------------------------------------

def test_compare_branch_arcsine(arcsine):
    c = arcsine["candidates"][0]
    rep = compare_branch(c.measure, (arcsine["P"], arcsine["Q"], arcsine["R"]), samples=100,
                         branch=c.section.value)
    assert rep.max_abs_error <= 1e-4 and not rep.branch_mismatch
    assert len(rep.sample_points) + rep.skipped == 100
    assert rep.mass_error < 1e-9
    json.dumps(rep.to_json())


def test_compare_branch_flags_flipped_section(arcsine):
    c = arcsine["candidates"][0]
    rep = compare_branch(c.measure, (arcsine["P"], arcsine["Q"], arcsine["R"]), samples=30,
                         branch=lambda z: -c.section.value(z))
    assert rep.branch_mismatch
    assert rep.equation_residual < 1e-8


def test_compare_branch_rational_atoms():
    num, den = UniPoly([1, 3]), UniPoly([-1, 0, 1])
    rep = compare_branch(rational_motherbody(num, den), (num, den), samples=100)
    assert rep.max_abs_error <= 1e-10
    # the swapped weights give the transform (3z - 1)/(z**2 - 1) and fail
    swapped = atomic_measure([(1.0, 1.0), (-1.0, 2.0)])
    assert compare_branch(swapped, (num, den), samples=20).max_abs_error > 1e-2


# -- level curves --------------------------------------------------------------------------

def test_level_curve_unit_point_mass():
    mu = level_curve_measure((UniPoly([1]), UniPoly([0, 1])), 1.0)
    assert mu.meta["interior_max"] <= 1e-8
    for z in (0.3 + 0.2j, -1.5j):
        assert abs(cauchy_quadrature(mu, z)) <= 1e-8
    for z in (2 * E, -4 + 3j):
        assert abs(cauchy_quadrature(mu, z) - 1 / z) <= 1e-8
    arc = mu.arcs[0]
    assert np.max(np.abs(np.abs(arc.z_of(np.linspace(*arc.t_span, 200))) - E)) < 1e-9
    assert abs(mu.total_mass - 1) < 1e-12


def test_level_curve_two_poles():
    germ = RationalGerm(UniPoly([0, 2]), UniPoly([-1, 0, 1]))      # 1/(z - 1) + 1/(z + 1)
    mu = level_curve_measure(germ, 3.0)
    assert abs(mu.total_mass - 2) < 1e-9
    assert mu.meta["interior_max"] <= 1e-6
    # the curve is |z**2 - 1| = e**3, so |z| > 4.7 is outside
    for z in (5.0, 5j, -4 - 4j):
        assert abs(cauchy_quadrature(mu, z) - germ(z)) <= 1e-6


def test_level_curve_too_low():
    with pytest.raises(LevelCurveNotClosed):
        level_curve_measure(RationalGerm(UniPoly([0, 2]), UniPoly([-1, 0, 1])), -1.0)


# -- jump density ------------------------------------------------------------------------------

def test_jump_density_on_trajectories(arcsine, semicircle):
    assert jump_density_check(_mu(arcsine), arcsine["qd"]) <= 1e-6
    assert jump_density_check(_mu(semicircle), semicircle["qd"]) <= 1e-6


def test_jump_density_off_trajectory_fails(semicircle):
    arc = _mu(semicircle).arcs[0]
    turn = np.exp(0.01j)
    moved = Arc(z_of=lambda t: turn * arc.z_of(t), dz_of=lambda t: turn * arc.dz_of(t),
                t_span=arc.t_span, rate=arc.rate, end_exponents=arc.end_exponents)
    assert jump_density_check(SignedMeasure(arcs=[moved]), semicircle["qd"]) > 1e-4


def test_atoms_only_transform(semicircle):
    mu = SignedMeasure(atoms=[Atom(1j, 0.5), Atom(-1j, 0.5)])
    assert jump_density_check(mu, semicircle["qd"]) == 0.0
    assert abs(cauchy_quadrature(mu, 2.0) - 0.4) < 1e-15
