"""Curve construction, charts, residues and the one-form basis."""

import numpy as np
import pytest

from ellconn.curve import (
    basis_forms,
    chart_at,
    constant_term_of_form,
    expand_function,
    form_expansion,
    make_curve,
    random_affine_point,
    random_divisor,
    residue_of_form,
    Divisor,
)
from ellconn.errors import DegenerateCurve, InvalidDivisor
from ellconn.algebra import fe_eval
from conftest import random_curve, rng_for


def test_make_curve_basic():
    c = make_curve(2.0)
    assert np.allclose(c.p.coeffs, [0.0, 2.0, -3.0, 1.0])
    assert c.wlam.x == 2.0
    for root in (0.0, 1.0, 2.0):
        assert abs(c.p(root)) < 1e-14


def test_make_curve_rejects_degenerate():
    with pytest.raises(DegenerateCurve):
        make_curve(1.0)
    with pytest.raises(DegenerateCurve):
        make_curve(1e-12)


def test_curve_roots_at_imaginary_lambda():
    c = make_curve(1j)
    for root in (0.0, 1.0, 1j):
        assert abs(c.p(root)) < 1e-14


def test_weierstrass_chart_leading_coefficients():
    # lam = 2: tau^2 = x(x-1)(x-2) near w0 forces x = tau^2/2 + 3 tau^4/8 + ...
    c = make_curve(2.0)
    ch = chart_at(c, c.w0, 8)
    assert ch.x_series.valuation == 2
    assert abs(ch.x_series.coefficient(2) - 0.5) < 1e-12
    assert abs(ch.x_series.coefficient(4) - 0.375) < 1e-12
    # tau = y exactly
    assert ch.y_series.valuation == 1
    assert abs(ch.y_series.coefficient(1) - 1.0) == 0.0


def test_generic_chart_branch_pinning():
    rng = rng_for("branch")
    c = random_curve(rng)
    pt = random_affine_point(c, rng)
    ch = chart_at(c, pt, 8)
    assert abs(ch.y_series.coefficient(0) - pt.y) < 1e-12
    assert abs(ch.x_series.coefficient(0) - pt.x) < 1e-12


def test_chart_satisfies_curve_equation():
    rng = rng_for("charteq")
    for _ in range(5):
        c = random_curve(rng)
        for pt in (c.w0, c.w1, c.wlam, random_affine_point(c, rng)):
            ch = chart_at(c, pt, 8)
            lhs = ch.y_series * ch.y_series
            from ellconn.algebra import poly_on_series
            rhs = poly_on_series(c.p, ch.x_series)
            diff = lhs - rhs
            assert diff.is_zero or diff.valuation >= min(8, diff.truncation_order) \
                or float(np.max(np.abs(diff.coeffs))) < 1e-10


def test_expand_function_examples():
    c = make_curve(2.0)
    # 1/y at w0: valuation -1, leading coefficient 1
    inv_y = 1.0 / c.fe_y()
    s = expand_function(inv_y, chart_at(c, c.w0, 8))
    assert s.valuation == -1 and abs(s.coefficient(-1) - 1.0) < 1e-12
    # x at a generic chart: x0 + tau
    rng = rng_for("xshift")
    pt = random_affine_point(c, rng)
    sx = expand_function(c.fe_x(), chart_at(c, pt, 8))
    assert abs(sx.coefficient(0) - pt.x) < 1e-14 and abs(sx.coefficient(1) - 1.0) < 1e-14


def test_phi1_local_form_at_w0():
    # phi1 = dy/y + O(y) at w0
    rng = rng_for("phi1w0")
    c = random_curve(rng)
    D = random_divisor(c, 1, rng)
    phi1 = basis_forms(c, D)[2]
    e = form_expansion(phi1, c, chart_at(c, c.w0, 8))
    assert e.valuation == -1
    assert abs(e.coefficient(-1) - 1.0) < 1e-10
    assert abs(e.coefficient(0)) < 1e-10


RESIDUE_TABLE = [  # (form index offset, point name, expected residue)
    ("phi0", "w0", 0.0), ("phi0", "w1", 1.0), ("phi0", "wlam", -1.0),
    ("phi1", "w0", 1.0), ("phi1", "w1", 0.0), ("phi1", "wlam", -1.0),
    ("theta", "w0", -1.0), ("theta", "w1", 0.0), ("theta", "wlam", 0.0),
]


def test_residue_table_is_reproduced():
    rng = rng_for("restable")
    for _ in range(5):
        c = random_curve(rng)
        D = random_divisor(c, 2, rng)
        forms = basis_forms(c, D)
        pts = {"w0": c.w0, "w1": c.w1, "wlam": c.wlam}
        for name, ptname, want in RESIDUE_TABLE:
            hs = [forms[1]] if name == "phi0" else [forms[2]] if name == "phi1" \
                else forms[3:]
            for h in hs:
                got = residue_of_form(h, c, pts[ptname])
                assert abs(got - want) < 1e-9
        for j, (tj, _) in enumerate(D.points):
            assert abs(residue_of_form(forms[3 + j], c, tj) - 1.0) < 1e-9
            other = forms[3 + 1 - j]
            assert abs(residue_of_form(other, c, tj)) < 1e-9


def test_theta_constant_terms():
    """dy-coefficients of theta_j at the half-period points.

    At w0 the constant is -y_j/(lam x_j); at w1 and wlam the tabulated values
    x_j(x_j-lam)/y_j and -x_j(x_j-1)/y_j are normalized against the local
    expansion of the invariant form, i.e. the dy-coefficients carry the extra
    1/p'(1) = 1/(1-lam) resp. 1/p'(lam) = 1/(lam(lam-1)) (verified here also
    by a contour integral, independent of the series code).
    """
    rng = rng_for("thetaconst")
    c = random_curve(rng)
    D = random_divisor(c, 2, rng)
    forms = basis_forms(c, D)
    lam = c.lam
    for j, (tj, _) in enumerate(D.points):
        xj, yj = tj.x, tj.y
        got_w0 = constant_term_of_form(forms[3 + j], c, c.w0)
        assert abs(got_w0 - (-yj / (lam * xj))) < 1e-9
        got_w1 = constant_term_of_form(forms[3 + j], c, c.w1)
        want_w1 = xj * (xj - lam) / (yj * (lam - 1.0))
        assert abs(got_w1 - want_w1) < 1e-9 * max(1.0, abs(want_w1))
        got_wl = constant_term_of_form(forms[3 + j], c, c.wlam)
        want_wl = -xj * (xj - 1.0) / (yj * lam * (lam - 1.0))
        assert abs(got_wl - want_wl) < 1e-9 * max(1.0, abs(want_wl))
        # independent contour-integral oracle for the w1 constant
        assert abs(_contour_coefficient(forms[3 + j], c, c.w1, 0) - got_w1) < 1e-8


def _contour_coefficient(h, curve, pt, k, radius=1e-2, nodes=256):
    ch = chart_at(curve, pt, 8)
    total = 0.0
    for m in range(nodes):
        tau = radius * np.exp(2j * np.pi * m / nodes)
        q = ch.point_at(tau)
        if ch.coord_kind == "y_at_weierstrass":
            w = 1.0 / curve.p_prime(q.x)
        else:
            w = 1.0 / (2.0 * q.y)
        total += h.eval_at(q.x, q.y) * w * tau ** (-k)
    return total / nodes


def test_omega_constant_terms():
    rng = rng_for("omegaconst")
    for _ in range(5):
        c = random_curve(rng)
        D = random_divisor(c, 1, rng)
        one = basis_forms(c, D)[0]
        lam = c.lam
        assert abs(constant_term_of_form(one, c, c.w0) - 1.0 / lam) < 1e-10
        assert abs(constant_term_of_form(one, c, c.w1) - 1.0 / (1.0 - lam)) < 1e-10
        assert abs(constant_term_of_form(one, c, c.wlam)
                   - 1.0 / (lam * (lam - 1.0))) < 1e-10


def test_theta_constant_at_w1_matches_table_for_lambda_two():
    # at lam = 2 the normalization factor is 1, so the tabulated value holds as-is
    rng = rng_for("lam2")
    c = make_curve(2.0)
    D = random_divisor(c, 1, rng)
    t1 = D.support[0]
    got = constant_term_of_form(basis_forms(c, D)[3], c, c.w1)
    assert abs(got - t1.x * (t1.x - 2.0) / t1.y) < 1e-9


def test_theta_regular_at_other_poles():
    rng = rng_for("thetareg")
    c = random_curve(rng)
    D = random_divisor(c, 3, rng)
    forms = basis_forms(c, D)
    for j in range(3):
        for k in range(3):
            if k == j:
                continue
            e = expand_function(forms[3 + j], chart_at(c, D.support[k], 8))
            assert e.is_zero or e.valuation >= 0


def test_residue_theorem_on_basis_and_combinations():
    rng = rng_for("resthm")
    c = random_curve(rng)
    D = random_divisor(c, 3, rng)
    forms = basis_forms(c, D)
    poles = [c.w0, c.w1, c.wlam] + D.support
    for h in forms:
        assert h.ord_infinity() >= 0
        total = sum(residue_of_form(h, c, pt) for pt in poles)
        assert abs(total) < 1e-9
    for _ in range(10):
        coeffs = rng.standard_normal(len(forms)) + 1j * rng.standard_normal(len(forms))
        h = forms[0] * coeffs[0]
        for ck, fk in zip(coeffs[1:], forms[1:]):
            h = h + ck * fk
        total = sum(residue_of_form(h, c, pt) for pt in poles)
        assert abs(total) < 1e-9


def test_chart_vs_evaluation_consistency():
    rng = rng_for("chartcons")
    c = random_curve(rng)
    D = random_divisor(c, 2, rng)
    forms = basis_forms(c, D)
    tau = 1e-2
    for h in forms[1:]:
        for center in (c.w0, c.w1, random_affine_point(c, rng)):
            ch = chart_at(c, center, 12)
            series_val = expand_function(h, ch).eval_at(tau)
            pt = ch.point_at(tau)
            direct = fe_eval(h, c.point(pt.x, pt.y))
            assert abs(series_val - direct) <= 1e-7 * max(1.0, abs(direct))


def test_divisor_validation():
    rng = rng_for("divval")
    c = random_curve(rng)
    good = random_divisor(c, 2, rng)
    pt = good.support[0]
    with pytest.raises(InvalidDivisor):
        basis_forms(c, Divisor.reduced([pt, pt]))
    with pytest.raises(InvalidDivisor):
        basis_forms(c, Divisor.reduced([c.w0]))
    with pytest.raises(InvalidDivisor):
        basis_forms(c, Divisor(((pt, 2),)))
