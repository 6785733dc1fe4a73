"""The three explicit two-forms of the moduli charts and their transport.

* sum_j dz_j ^ dr_j on the U0 chart,
* -(sum_j dw_j ^ ds_j) on the Uinf chart,
* omega_nu = sum_j nu_j dz_j ^ dzeta_j / (z_j - zeta_j)^2 on the eigenspace
  chart S^n,

together with a finite-difference pullback (central differences at two step
sizes with a Richardson consistency check), the Kronecker-delta residue
pairing, and Moebius transport of omega_nu.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curve import Curve, Divisor, basis_forms, residue_of_form
from .errors import (
    ChartBoundary,
    ChartMismatch,
    DegenerateMoebius,
    DiagonalPoint,
    FDInconsistent,
)
from .fuchs import EigenData, transition_map

OFF_DIAGONAL_TOL = 1e-10
FD_STEP = 1e-5
FD_CONSISTENCY = 1e-4


@dataclass(frozen=True)
class ChartPoint:
    """Point of a 2n-dimensional chart: base block plus fiber block.

    chart is one of "U0" ((z, r)), "Uinf" ((w, s)) or "Sn" ((z, zeta))."""

    chart: str
    base: np.ndarray
    fiber: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", np.asarray(self.base, dtype=complex).ravel())
        object.__setattr__(self, "fiber", np.asarray(self.fiber, dtype=complex).ravel())
        if self.base.size != self.fiber.size:
            raise ValueError("base and fiber blocks must have equal length")

    @property
    def n(self) -> int:
        return self.base.size


def sn_point(z, zeta) -> ChartPoint:
    pt = ChartPoint("Sn", z, zeta)
    if np.any(np.abs(pt.base - pt.fiber) <= OFF_DIAGONAL_TOL):
        raise DiagonalPoint("some z_j equals zeta_j")
    return pt


@dataclass(frozen=True)
class TangentVector:
    """Tangent vector at a chart point, split as (delta base, delta fiber)."""

    chart: str
    base: np.ndarray
    fiber: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", np.asarray(self.base, dtype=complex).ravel())
        object.__setattr__(self, "fiber", np.asarray(self.fiber, dtype=complex).ravel())

    @staticmethod
    def unit(chart: str, n: int, block: str, j: int) -> "TangentVector":
        b, f = np.zeros(n, dtype=complex), np.zeros(n, dtype=complex)
        (b if block == "base" else f)[j] = 1.0
        return TangentVector(chart, b, f)

    @staticmethod
    def random(chart: str, n: int, rng: np.random.Generator) -> "TangentVector":
        return TangentVector(chart,
                             rng.standard_normal(n) + 1j * rng.standard_normal(n),
                             rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _wedge_sums(t1: TangentVector, t2: TangentVector) -> np.ndarray:
    return t1.base * t2.fiber - t2.base * t1.fiber


def two_form_eval(form_tag: str, point: ChartPoint | None, t1: TangentVector,
                  t2: TangentVector, nu: EigenData | None = None) -> complex:
    """Value of the tagged two-form on a pair of tangent vectors.

    darboux_u0:   sum_j dz_j ^ dr_j            (weight +1)
    darboux_uinf: -(sum_j dw_j ^ ds_j)         (weight -1)
    omega_nu:     sum_j nu_j dz_j ^ dzeta_j / (z_j - zeta_j)^2
    """
    if t1.chart != t2.chart:
        raise ChartMismatch(f"vectors on {t1.chart} vs {t2.chart}")
    if form_tag == "darboux_u0":
        if t1.chart != "U0":
            raise ChartMismatch("darboux_u0 expects U0 vectors")
        return complex(np.sum(_wedge_sums(t1, t2)))
    if form_tag == "darboux_uinf":
        if t1.chart != "Uinf":
            raise ChartMismatch("darboux_uinf expects Uinf vectors")
        return complex(-np.sum(_wedge_sums(t1, t2)))
    if form_tag == "omega_nu":
        if t1.chart != "Sn":
            raise ChartMismatch("omega_nu expects Sn vectors")
        if nu is None or point is None:
            raise ValueError("omega_nu needs the exponents and the base point")
        gap = point.base - point.fiber
        if np.any(np.abs(gap) <= OFF_DIAGONAL_TOL):
            raise DiagonalPoint("omega_nu undefined on the diagonal")
        return complex(np.sum(nu.reduced * _wedge_sums(t1, t2) / gap ** 2))
    raise ValueError(f"unknown form {form_tag!r}")


# ---------------------------------------------------------------------------
# numeric pullback
# ---------------------------------------------------------------------------

def _pushforward(map_fn: Callable[[ChartPoint], ChartPoint], point: ChartPoint,
                 t: TangentVector, h: float) -> TangentVector:
    plus = map_fn(ChartPoint(point.chart, point.base + h * t.base,
                             point.fiber + h * t.fiber))
    minus = map_fn(ChartPoint(point.chart, point.base - h * t.base,
                              point.fiber - h * t.fiber))
    return TangentVector(plus.chart, (plus.base - minus.base) / (2 * h),
                         (plus.fiber - minus.fiber) / (2 * h))


def pullback_two_form(map_fn: Callable[[ChartPoint], ChartPoint], point: ChartPoint,
                      t1: TangentVector, t2: TangentVector, target_form: str,
                      nu: EigenData | None = None, fd_step: float = FD_STEP) -> complex:
    """(map* form)(t1, t2) by central finite differences.

    Evaluates at fd_step and fd_step/2; the two values must agree to the
    Richardson consistency tolerance, and the finer one is returned.
    """
    image = map_fn(point)
    vals = []
    for h in (fd_step, fd_step / 2.0):
        p1 = _pushforward(map_fn, point, t1, h)
        p2 = _pushforward(map_fn, point, t2, h)
        vals.append(two_form_eval(target_form, image, p1, p2, nu=nu))
    if abs(vals[0] - vals[1]) > FD_CONSISTENCY * max(1.0, abs(vals[1])):
        raise FDInconsistent(f"step halving moved the value {vals[0]} -> {vals[1]}")
    return vals[1]


# -- standard chart maps ----------------------------------------------------

def transition_chart_map(nu: EigenData) -> Callable[[ChartPoint], ChartPoint]:
    """(w, s) on Uinf -> (z, r) on U0."""
    def fn(pt: ChartPoint) -> ChartPoint:
        if pt.chart != "Uinf":
            raise ChartMismatch("transition starts on Uinf")
        z, r = transition_map(nu, pt.base, pt.fiber)
        return ChartPoint("U0", z, r)
    return fn


def eigenspace_chart_map(nu: EigenData) -> Callable[[ChartPoint], ChartPoint]:
    """(z, r) on U0 -> (z, zeta) with zeta_j = z_j - nu_j / r_j."""
    red = nu.reduced
    def fn(pt: ChartPoint) -> ChartPoint:
        if pt.chart != "U0":
            raise ChartMismatch("eigenspace chart map starts on U0")
        if np.any(np.abs(pt.fiber) <= 1e-14):
            raise ChartBoundary("zeta undefined where r_j = 0")
        return ChartPoint("Sn", pt.base, pt.base - red / pt.fiber)
    return fn


def identity_map(pt: ChartPoint) -> ChartPoint:
    return pt


# ---------------------------------------------------------------------------
# residue pairing
# ---------------------------------------------------------------------------

def serre_pairing_residue(curve: Curve, D: Divisor, k: int, j: int, z) -> complex:
    """Res at t_j of  -z_k phi0 + phi1 + (y_k/x_k) omega + theta_k; equals delta_j^k.

    This is the (2,1) entry of the k-th Higgs generator on the U0 chart, the
    one-form implementing the duality between that generator and the j-th base
    deformation.
    """
    z = np.asarray(z, dtype=complex)
    forms = basis_forms(curve, D)
    pk = D.points[k][0]
    h = (-z[k]) * forms[1] + forms[2] + (pk.y / pk.x) * forms[0] + forms[3 + k]
    return residue_of_form(h, curve, D.points[j][0])


# ---------------------------------------------------------------------------
# Moebius transport of omega_nu
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Moebius:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        if abs(self.a * self.d - self.b * self.c) <= 1e-12:
            raise DegenerateMoebius("ad - bc vanishes")

    def __call__(self, t: complex) -> complex:
        return (self.a * t + self.b) / (self.c * t + self.d)

    @staticmethod
    def random(rng: np.random.Generator) -> "Moebius":
        while True:
            a, b, c, d = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            if abs(a * d - b * c) > 1e-2:
                return Moebius(a, b, c, d)


def mobius_product_map(sigma, maps: list[Moebius]) -> Callable[[ChartPoint], ChartPoint]:
    """Xi(z, zeta)_j = (phi_j(z_{sigma(j)}), phi_j(zeta_{sigma(j)})) on Sn.

    sigma is a 0-indexed permutation array: output slot j draws from input
    slot sigma[j].
    """
    sigma = np.asarray(sigma, dtype=int)
    def fn(pt: ChartPoint) -> ChartPoint:
        if pt.chart != "Sn":
            raise ChartMismatch("Moebius transport acts on Sn")
        z = np.array([maps[j](pt.base[sigma[j]]) for j in range(pt.n)])
        zeta = np.array([maps[j](pt.fiber[sigma[j]]) for j in range(pt.n)])
        return ChartPoint("Sn", z, zeta)
    return fn


def permuted_exponents(nu: EigenData, sigma) -> EigenData:
    """nu^sigma with (nu^sigma)_j = nu_{sigma(j)} (0-indexed sigma)."""
    sigma = np.asarray(sigma, dtype=int)
    return EigenData.of([nu.pairs[sigma[j]] for j in range(nu.n)])


def mobius_transport(sigma, maps: list[Moebius], pt: ChartPoint,
                     t1: TangentVector, t2: TangentVector,
                     nu: EigenData) -> tuple[complex, complex]:
    """(omega_nu at pt, pullback of omega_{nu^sigma} through Xi at pt).

    The two agree: each factor kernel dz ^ dzeta / (z - zeta)^2 is invariant
    under a Moebius map applied to both members, and the permutation relabels
    the weights.
    """
    if np.any(np.abs(pt.base - pt.fiber) <= OFF_DIAGONAL_TOL):
        raise DiagonalPoint("transport undefined on the diagonal")
    before = two_form_eval("omega_nu", pt, t1, t2, nu=nu)
    xi = mobius_product_map(sigma, maps)
    image = xi(pt)
    if np.any(np.abs(image.base - image.fiber) <= OFF_DIAGONAL_TOL):
        raise DiagonalPoint("image hits the diagonal")
    after = pullback_two_form(xi, pt, t1, t2, "omega_nu",
                              nu=permuted_exponents(nu, sigma))
    return before, after
