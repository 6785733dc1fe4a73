"""The apparent map in the Fuchsian model: the cyclic section, the wedge form
F = nabla(s) ^ s as an exact field element, its evaluation vector at fixed
samples, the morphism criterion on exponents, and the fiber-rank computation.

The map is represented in evaluation coordinates (values of F/omega at a fixed
reproducible sample set) rather than coefficients in a basis of the target
linear system: projective equality and rank statements are basis-independent,
and the fixed rational factor relating this model to the intrinsic form drops
out of every comparison between systems over the same (curve, divisor).  Only
comparisons and ranks are ever reported, never absolute coordinates.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .algebra import FieldElement, Polynomial, POLY_ZERO
from .curve import Curve, CurvePoint, Divisor, basis_forms
from .errors import EvaluationAtPole, ExponentialBlowup, RankUnstable, SampleAtPole
from .fuchs import EigenData, FuchsianSystem, chart_connection, projective_distance
from .stability import ENUM_LIMIT, sign_sums

SIGN_SUM_TOL = 1e-8
RANK_RTOL = 1e-8
SAMPLE_MARGIN = 1e-3
DEGENERACY_TOL = 1e-8


def section_s(curve: Curve) -> tuple[FieldElement, FieldElement]:
    """The cyclic section ((x - lam)/y, (1 - lam) x / y) of the trivial bundle.

    s1 has simple poles at w_0, w_1 and simple zeros at w_lam and infinity;
    s2 has simple poles at w_1, w_lam and simple zeros at w_0 and infinity.
    """
    lam = curve.lam
    p = curve.p
    s1 = curve.fe(POLY_ZERO, Polynomial([-lam, 1.0]), p)       # (x - lam) y / p
    s2 = curve.fe(POLY_ZERO, Polynomial([0.0, 1.0 - lam]), p)  # (1 - lam) x y / p
    return s1, s2


def app_defined(nu: EigenData, tol: float = SIGN_SUM_TOL) -> bool:
    """True iff no sign choice makes nu_1^{e_1} + ... + nu_n^{e_n} vanish."""
    if nu.n > ENUM_LIMIT:
        raise ExponentialBlowup(f"sign-sum enumeration capped at n <= {ENUM_LIMIT}")
    return bool(np.min(np.abs(sign_sums(nu))) > tol)


def app_form(sys: FuchsianSystem, forms: list[FieldElement] | None = None) -> FieldElement:
    """F/omega for F = nabla(s) ^ s, an exact field element.

    F/omega = (scale ds1/omega + (A s)_1) s2 - (scale ds2/omega + (A s)_2) s1
    with A the matrix of one-forms divided by omega; jointly linear in
    (scale, B_1..B_n).
    """
    forms = forms if forms is not None else basis_forms(sys.curve, sys.D)
    s1, s2 = section_s(sys.curve)
    h11 = sys.entry_field(0, 0, forms)
    h12 = sys.entry_field(0, 1, forms)
    h21 = sys.entry_field(1, 0, forms)
    h22 = sys.entry_field(1, 1, forms)
    nab1 = sys.scale * s1.derivative_over_omega() + h11 * s1 + h12 * s2
    nab2 = sys.scale * s2.derivative_over_omega() + h21 * s1 + h22 * s2
    return nab1 * s2 - nab2 * s1


def _denominator_x_values(curve: Curve, D: Divisor) -> list[complex]:
    """x over which some factor of the assembled denominators vanishes.

    Besides the Weierstrass x's and the pole x_j's this includes lam/x_j, where
    the rationalized theta_j denominator x_j^2 p - y_j^2 x^2 has its removable
    third root (the unreduced fraction degenerates to 0/0 there).
    """
    xs = [0.0 + 0.0j, 1.0 + 0.0j, complex(curve.lam)]
    for pt in D.support:
        xs.append(pt.x)
        xs.append(curve.lam / pt.x)
    return xs


def sample_points(curve: Curve, D: Divisor, m: int,
                  margin: float = SAMPLE_MARGIN) -> list[CurvePoint]:
    """m reproducible points clear of every pole of F/omega.

    The seed is a hash of (lam, divisor coordinates), so reports for the same
    instance are identical across runs; the margin rule excludes every x over
    which a denominator factor vanishes.
    """
    key = np.array([curve.lam] + [pt.x for pt in D.support] + [pt.y for pt in D.support],
                   dtype=complex)
    digest = hashlib.sha256(np.round(key, 12).tobytes()).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    avoid = _denominator_x_values(curve, D)
    # generate with a comfortable gap; the stated margin stays the precondition
    gap = max(margin, 0.05)
    pts: list[CurvePoint] = []
    while len(pts) < m:
        u, v = rng.random(), rng.random()
        x = 3.0 * np.sqrt(u) * np.exp(2j * np.pi * v)
        if all(abs(x - a) > gap for a in avoid):
            pts.append(curve.lift_x(x))
            avoid.append(x)
    return pts


def app_eval(sys: FuchsianSystem, samples: list[CurvePoint],
             forms: list[FieldElement] | None = None) -> np.ndarray:
    """Values of F/omega at the samples; compare projectively across systems.

    Evaluated factor by factor (section, its derivative, and the four matrix
    entries are all low-degree elements with structural denominators), which
    keeps the computation exact-to-rounding; assembling one global fraction
    first would pile up enormous coefficient spreads for nothing.
    """
    if len(samples) < sys.n + 1:
        raise ValueError("need at least n+1 samples")
    forms = forms if forms is not None else basis_forms(sys.curve, sys.D)
    s1, s2 = section_s(sys.curve)
    ds1, ds2 = s1.derivative_over_omega(), s2.derivative_over_omega()
    entries = [[sys.entry_field(i, k, forms) for k in range(2)] for i in range(2)]
    margin_avoid = _denominator_x_values(sys.curve, sys.D)
    out = np.empty(len(samples), dtype=complex)
    for i, pt in enumerate(samples):
        if any(abs(pt.x - a) <= SAMPLE_MARGIN for a in margin_avoid):
            raise SampleAtPole(f"sample x={pt.x} within margin of a pole")
        try:
            sv = np.array([s1.eval_at(pt.x, pt.y), s2.eval_at(pt.x, pt.y)])
            dsv = np.array([ds1.eval_at(pt.x, pt.y), ds2.eval_at(pt.x, pt.y)])
            h = np.array([[entries[a][b].eval_at(pt.x, pt.y) for b in range(2)]
                          for a in range(2)])
        except EvaluationAtPole as exc:
            raise SampleAtPole(str(exc)) from exc
        nab = sys.scale * dsv + h @ sv
        out[i] = nab[0] * sv[1] - nab[1] * sv[0]
    return out


def projective_vector_distance(u: np.ndarray, v: np.ndarray) -> float:
    """sin of the Hermitian angle: 0 iff the vectors are parallel.

    Computed from the projection residual (stable near 0, unlike 1 - cos^2).
    """
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("zero vector has no direction")
    resid = v - (np.vdot(u, v) / np.vdot(u, u)) * u
    return float(np.linalg.norm(resid) / nv)


def fiber_rank_app(curve: Curve, D: Divisor, nu: EigenData, z,
                   samples: list[CurvePoint] | None = None) -> tuple[int, int]:
    """(matrix_rank, expected) for the fiber over the plus-directions z.

    Stacks the evaluation vectors of the base connection and the n Higgs
    generators of the U0 chart into an (n+1) x m matrix; its rank counts 1 plus
    the number of j with (z_j : 1) not the direction of the section at t_j
    (the degenerate generators wedge to zero).  The projective fiber rank of
    the map is matrix_rank - 1.
    """
    z = np.asarray(z, dtype=complex)
    n = D.n
    samples = samples if samples is not None else sample_points(curve, D, n + 2)
    if len(samples) < n + 2:
        raise ValueError("need at least n+2 samples")
    forms = basis_forms(curve, D)
    rows = [app_eval(chart_connection(curve, D, nu, "U0", z, scale=1.0), samples, forms)]
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        rows.append(app_eval(chart_connection(curve, D, nu, "U0", z, e, scale=0.0),
                             samples, forms))
    A = np.vstack(rows)
    svals = np.linalg.svd(A, compute_uv=False)
    thresh = RANK_RTOL * svals[0]
    if np.any((svals > thresh / 10.0) & (svals < thresh * 10.0)):
        raise RankUnstable(f"singular values {svals} straddle the threshold {thresh}")
    matrix_rank = int(np.sum(svals > thresh))
    s1, s2 = section_s(curve)
    expected = 1
    for j, pt in enumerate(D.support):
        sec = np.array([s1.eval_at(pt.x, pt.y), s2.eval_at(pt.x, pt.y)])
        if projective_distance(np.array([z[j], 1.0]), sec) > DEGENERACY_TOL:
            expected += 1
    return matrix_rank, expected


def section_direction(curve: Curve, pt: CurvePoint) -> complex:
    """z with (z : 1) the direction of the cyclic section at an affine point."""
    s1, s2 = section_s(curve)
    return s1.eval_at(pt.x, pt.y) / s2.eval_at(pt.x, pt.y)
