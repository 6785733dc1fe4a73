"""The cyclic section, the wedge form, the morphism criterion and fiber ranks."""

import itertools

import numpy as np
import pytest

from ellconn.curve import chart_at, expand_function, random_divisor
from ellconn.errors import ExponentialBlowup, SampleAtPole
from ellconn.apparent import (
    app_defined,
    app_eval,
    app_form,
    fiber_rank_app,
    projective_vector_distance,
    sample_points,
    section_direction,
    section_s,
)
from ellconn.fuchs import EigenData, chart_connection
from conftest import complex_vec, random_instance, rng_for


# ---------------------------------------------------------------------------
# the cyclic section
# ---------------------------------------------------------------------------

def test_section_divisor_pattern():
    rng = rng_for("section")
    for _ in range(5):
        curve, _, _ = random_instance(rng, 1)
        s1, s2 = section_s(curve)
        # (valuation at w0, w1, wlam) and the order at infinity
        v1 = [expand_function(s1, chart_at(curve, q, 8)).valuation
              for q in curve.weierstrass_points()]
        assert v1 == [-1, -1, 1]
        assert s1.ord_infinity() == 1
        v2 = [expand_function(s2, chart_at(curve, q, 8)).valuation
              for q in curve.weierstrass_points()]
        assert v2 == [1, -1, -1]
        assert s2.ord_infinity() == 1


# ---------------------------------------------------------------------------
# the morphism criterion
# ---------------------------------------------------------------------------

def _brute_force_defined(nu: EigenData, tol=1e-8) -> bool:
    for choice in itertools.product(*[(a, b) for a, b in nu.pairs]):
        if abs(sum(choice)) <= tol:
            return False
    return True


def test_app_defined_matches_enumeration():
    rng = rng_for("appdef")
    for n in range(1, 11):
        nu = EigenData.random_fuchs(n, rng)
        assert app_defined(nu) == _brute_force_defined(nu)
    # constructed vanishing sum: nu1+ = -nu2+
    nu = EigenData.of([(0.6, -0.3), (-0.6, -0.7)])
    assert not app_defined(nu)
    assert not _brute_force_defined(nu)
    # one pole: both exponents nonzero
    nu1 = EigenData.of([(0.4, -1.4)])
    assert app_defined(nu1)
    with pytest.raises(ExponentialBlowup):
        app_defined(EigenData.random_fuchs(21, rng))


# ---------------------------------------------------------------------------
# the wedge form
# ---------------------------------------------------------------------------

def test_zero_higgs_gives_zero_form():
    rng = rng_for("zerohiggs")
    curve, D, nu = random_instance(rng, 2)
    zero = chart_connection(curve, D, nu, "U0", complex_vec(rng, 2), None, scale=0.0)
    assert app_form(zero).is_zero


def test_app_form_is_linear_in_the_system():
    rng = rng_for("formlin")
    curve, D, nu = random_instance(rng, 2)
    z = complex_vec(rng, 2)
    sysA = chart_connection(curve, D, nu, "U0", z, complex_vec(rng, 2), scale=1.0)
    sysB = chart_connection(curve, D, nu, "U0", z, complex_vec(rng, 2), scale=0.0)
    combo = app_form(sysA + sysB)
    parts = app_form(sysA) + app_form(sysB)
    samples = sample_points(curve, D, 5)
    for pt in samples:
        va = combo.eval_at(pt.x, pt.y)
        vb = parts.eval_at(pt.x, pt.y)
        assert abs(va - vb) <= 1e-9 * max(1.0, abs(vb))


def test_generic_connection_has_nonzero_form():
    rng = rng_for("nonzero")
    curve, D, nu = random_instance(rng, 3)
    assert app_defined(nu)
    sys = chart_connection(curve, D, nu, "U0", complex_vec(rng, 3), scale=1.0)
    vals = app_eval(sys, sample_points(curve, D, 5))
    scale = max(float(np.max(np.abs(M))) for M in sys.matrices())
    assert np.max(np.abs(vals)) > 1e-8 * scale


# ---------------------------------------------------------------------------
# evaluation vectors
# ---------------------------------------------------------------------------

def test_app_eval_linearity_and_homogeneity():
    rng = rng_for("evallin")
    for n in (1, 2, 4):
        curve, D, nu = random_instance(rng, n)
        samples = sample_points(curve, D, n + 2)
        z = complex_vec(rng, n)
        sysA = chart_connection(curve, D, nu, "U0", z, complex_vec(rng, n), scale=1.0)
        sysB = chart_connection(curve, D, nu, "U0", z, complex_vec(rng, n), scale=0.0)
        a, b = complex_vec(rng, 2)
        lhs = app_eval(a * sysA + b * sysB, samples)
        rhs = a * app_eval(sysA, samples) + b * app_eval(sysB, samples)
        assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, float(np.max(np.abs(rhs))))
        assert projective_vector_distance(app_eval(sysA, samples),
                                          app_eval(2.0 * sysA, samples)) < 1e-12


def test_single_higgs_generator_vector():
    rng = rng_for("onegen")
    curve, D, nu = random_instance(rng, 2)
    samples = sample_points(curve, D, 4)
    z = complex_vec(rng, 2)
    e0 = np.array([1.0, 0.0])
    g = chart_connection(curve, D, nu, "U0", z, e0, scale=0.0)
    v1 = app_eval(g, samples)
    v2 = app_eval(3.0 * g, samples)
    assert projective_vector_distance(v1, v2) < 1e-12


def test_distinct_connections_have_distinct_vectors():
    rng = rng_for("distinct")
    curve, D, nu = random_instance(rng, 2)
    assert app_defined(nu)
    samples = sample_points(curve, D, 4)
    z = complex_vec(rng, 2)
    v1 = app_eval(chart_connection(curve, D, nu, "U0", z, complex_vec(rng, 2),
                                   scale=1.0), samples)
    v2 = app_eval(chart_connection(curve, D, nu, "U0", z, complex_vec(rng, 2),
                                   scale=1.0), samples)
    assert projective_vector_distance(v1, v2) > 1e-6


def test_sample_at_pole_guard():
    rng = rng_for("poleguard")
    curve, D, nu = random_instance(rng, 1)
    sys = chart_connection(curve, D, nu, "U0", complex_vec(rng, 1), scale=1.0)
    bad = [curve.lift_x(D.support[0].x + 1e-5), *sample_points(curve, D, 2)]
    with pytest.raises(SampleAtPole):
        app_eval(sys, bad)


# ---------------------------------------------------------------------------
# fiber ranks
# ---------------------------------------------------------------------------

def test_fiber_rank_generic():
    rng = rng_for("rankgen")
    for n in (1, 2, 3, 4):
        curve, D, nu = random_instance(rng, n)
        mrank, expected = fiber_rank_app(curve, D, nu, complex_vec(rng, n))
        assert mrank == expected == n + 1


def test_fiber_rank_fully_degenerate():
    rng = rng_for("rankdeg")
    curve, D, nu = random_instance(rng, 3)
    z = np.array([section_direction(curve, pt) for pt in D.support])
    mrank, expected = fiber_rank_app(curve, D, nu, z)
    assert mrank == expected == 1


def test_fiber_rank_one_degenerate():
    rng = rng_for("rankone")
    curve, D, nu = random_instance(rng, 3)
    z = complex_vec(rng, 3)
    z[0] = section_direction(curve, D.support[0])
    mrank, expected = fiber_rank_app(curve, D, nu, z)
    assert mrank == expected == 3
    # cross-check with the dense singular-value oracle on the raw rows
    from ellconn.curve import basis_forms
    forms = basis_forms(curve, D)
    samples = sample_points(curve, D, 5)
    rows = [app_eval(chart_connection(curve, D, nu, "U0", z, scale=1.0),
                     samples, forms)]
    for j in range(3):
        e = np.zeros(3)
        e[j] = 1.0
        rows.append(app_eval(chart_connection(curve, D, nu, "U0", z, e, scale=0.0),
                             samples, forms))
    svals = np.linalg.svd(np.vstack(rows), compute_uv=False)
    assert np.sum(svals > 1e-8 * svals[0]) == 3


def test_fiber_rank_sample_independence():
    rng = rng_for("rankind")
    curve, D, nu = random_instance(rng, 2)
    z = complex_vec(rng, 2)
    z[1] = section_direction(curve, D.support[1])
    all_samples = sample_points(curve, D, 10)
    r1 = fiber_rank_app(curve, D, nu, z, all_samples[:5])
    r2 = fiber_rank_app(curve, D, nu, z, all_samples[5:])
    assert r1 == r2 == (2, 2)


def test_sample_points_are_reproducible():
    rng = rng_for("repro")
    curve, D, _ = random_instance(rng, 2)
    a = sample_points(curve, D, 6)
    b = sample_points(curve, D, 6)
    assert all(p.x == q.x and p.y == q.y for p, q in zip(a, b))
