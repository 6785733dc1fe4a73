"""The curve y^2 = x(x-1)(x-lam), its local charts and the n+3 one-form basis.

Charts are series-uniformized by Newton iteration: at a Weierstrass point the
local coordinate is tau = y and x(tau) solves tau^2 = p(x); at a generic point
tau = x - x0 and y(tau) is the square-root branch through y0.  The point at
infinity is never given a chart; its behavior is controlled exactly by degree
bookkeeping on field elements (``FieldElement.ord_infinity``).

All one-forms are represented by their quotient against the invariant form
omega = dx/(2y) = dy/p'(x); residues of h*omega are read off a Laurent
expansion of h times the chart expansion of omega/dtau.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    DEFAULT_TRUNC_TERMS,
    FieldElement,
    LaurentSeries,
    Polynomial,
    POLY_ONE,
    POLY_ZERO,
    poly_on_series,
)
from .errors import DegenerateCurve, InvalidDivisor, NewtonStall, TruncationExceeded

DEGENERATE_TOL = 1e-10
POINT_TOL = 1e-10
WEIERSTRASS_MARGIN = 1e-8


@dataclass(frozen=True)
class CurvePoint:
    kind: str  # "affine" | "infinity"
    x: complex = 0.0
    y: complex = 0.0

    @property
    def is_affine(self) -> bool:
        return self.kind == "affine"


INFINITY = CurvePoint("infinity")


@dataclass(frozen=True)
class Curve:
    """y^2 = p(x) with p = x(x-1)(x-lam), lam not in {0, 1}."""

    lam: complex
    p: Polynomial = field(init=False)

    def __post_init__(self) -> None:
        lam = complex(self.lam)
        if min(abs(lam), abs(lam - 1.0)) <= DEGENERATE_TOL:
            raise DegenerateCurve(f"lambda={lam} is within tolerance of {{0, 1}}")
        # x(x-1)(x-lam) = x^3 - (1+lam)x^2 + lam x
        object.__setattr__(self, "p", Polynomial([0.0, lam, -(1.0 + lam), 1.0]))

    @property
    def p_prime(self) -> Polynomial:
        return self.p.derivative()

    @property
    def w0(self) -> CurvePoint:
        return CurvePoint("affine", 0.0, 0.0)

    @property
    def w1(self) -> CurvePoint:
        return CurvePoint("affine", 1.0, 0.0)

    @property
    def wlam(self) -> CurvePoint:
        return CurvePoint("affine", self.lam, 0.0)

    def weierstrass_points(self) -> tuple[CurvePoint, CurvePoint, CurvePoint]:
        return (self.w0, self.w1, self.wlam)

    def is_weierstrass_x(self, x: complex, margin: float = WEIERSTRASS_MARGIN) -> bool:
        return min(abs(x), abs(x - 1.0), abs(x - self.lam)) <= margin

    def point(self, x: complex, y: complex) -> CurvePoint:
        """Validated affine point: |y^2 - p(x)| <= tol (1 + |p(x)| + |y|^2)."""
        x, y = complex(x), complex(y)
        px = self.p(x)
        if abs(y * y - px) > POINT_TOL * (1.0 + abs(px) + abs(y) ** 2):
            raise ValueError(f"({x}, {y}) does not satisfy y^2 = p(x)")
        return CurvePoint("affine", x, y)

    def lift_x(self, x: complex) -> CurvePoint:
        """Point over x with the principal square-root branch of y."""
        return CurvePoint("affine", complex(x), complex(np.sqrt(complex(self.p(x)))))

    # -- field-element constructors over this curve --------------------------

    def fe_const(self, c: complex) -> FieldElement:
        return FieldElement.const(c, self.p)

    def fe_x(self) -> FieldElement:
        return FieldElement.coordinate_x(self.p)

    def fe_y(self) -> FieldElement:
        return FieldElement.coordinate_y(self.p)

    def fe(self, P: Polynomial, Q: Polynomial, R: Polynomial) -> FieldElement:
        return FieldElement(P, Q, R, self.p)


def make_curve(lam: complex) -> Curve:
    return Curve(complex(lam))


@dataclass(frozen=True)
class Divisor:
    """Formal sum of affine points with integer multiplicities."""

    points: tuple[tuple[CurvePoint, int], ...]

    @staticmethod
    def reduced(pts) -> "Divisor":
        return Divisor(tuple((pt, 1) for pt in pts))

    @property
    def support(self) -> list[CurvePoint]:
        return [pt for pt, _ in self.points]

    @property
    def n(self) -> int:
        return len(self.points)


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chart:
    center: CurvePoint
    coord_kind: str  # "y_at_weierstrass" | "xshift_at_generic"
    x_series: LaurentSeries
    y_series: LaurentSeries

    @property
    def order(self) -> int:
        return self.x_series.truncation_order

    def point_at(self, tau: complex) -> CurvePoint:
        return CurvePoint("affine", self.x_series.eval_at(tau), self.y_series.eval_at(tau))


def _settled(defect: LaurentSeries, order: int, scale: float) -> bool:
    """Newton defect is spent: formally zero, pushed past the window, or noise."""
    if defect.is_zero or defect.valuation >= order:
        return True
    return float(np.max(np.abs(defect.coeffs))) <= 1e-13 * max(1.0, scale)


def _newton_weierstrass(curve: Curve, a: complex, order: int) -> LaurentSeries:
    """Solve p(x(tau)) = tau^2 with x(0) = a in the truncated series ring."""
    tau2 = LaurentSeries.tau(order, power=2)
    scale = float(np.max(np.abs(curve.p.coeffs)))
    x = LaurentSeries.from_scalar(a, order)
    for _ in range(order.bit_length() + 3):
        defect = poly_on_series(curve.p, x) - tau2
        if _settled(defect, order, scale):
            return x
        x = x - defect / poly_on_series(curve.p_prime, x)
        x = x.truncate(order)
    raise NewtonStall(f"implicit solve at Weierstrass x={a} did not converge")


def _newton_sqrt(P: LaurentSeries, y0: complex, order: int) -> LaurentSeries:
    """Square root of P with constant term branch y0 (y0 != 0)."""
    scale = float(np.max(np.abs(P.coeffs))) if not P.is_zero else 1.0
    y = LaurentSeries.from_scalar(y0, order)
    for _ in range(order.bit_length() + 3):
        defect = y * y - P
        if _settled(defect, order, scale):
            return y
        y = (y + P / y) * 0.5
        y = y.truncate(order)
    raise NewtonStall("series square root did not converge")


def chart_at(curve: Curve, pt: CurvePoint, order: int = DEFAULT_TRUNC_TERMS) -> Chart:
    if not pt.is_affine:
        raise InvalidDivisor("charts exist only at affine points")
    if order < 4:
        raise ValueError("chart order must be at least 4")
    if abs(pt.y) <= WEIERSTRASS_MARGIN:
        x_series = _newton_weierstrass(curve, pt.x, order)
        y_series = LaurentSeries.tau(order, power=1)
        return Chart(pt, "y_at_weierstrass", x_series, y_series)
    x_series = LaurentSeries.from_polynomial(Polynomial([pt.x, 1.0]), order)
    P = poly_on_series(curve.p, x_series)
    y_series = _newton_sqrt(P, pt.y, order)
    return Chart(pt, "xshift_at_generic", x_series, y_series)


def expand_function(a: FieldElement, chart: Chart) -> LaurentSeries:
    """Laurent expansion of a field element in the chart coordinate.

    The valuation of the result is the exact order of ``a`` at the center
    (leading numerical noise is stripped by the series normalization).
    """
    num = poly_on_series(a.P, chart.x_series) + poly_on_series(a.Q, chart.x_series) * chart.y_series
    den = poly_on_series(a.R, chart.x_series)
    if den.is_zero:
        # denominator vanishes through the whole window: the chart is too shallow
        raise TruncationExceeded(
            "denominator vanishes to the chart truncation; deepen the chart")
    if num.is_zero:
        return LaurentSeries.zero(num.truncation_order - den.valuation)
    return num / den


def omega_over_dtau(curve: Curve, chart: Chart) -> LaurentSeries:
    """Expansion of omega/dtau: 1/p'(x(tau)) at Weierstrass centers, 1/(2 y(tau)) else."""
    if chart.coord_kind == "y_at_weierstrass":
        return LaurentSeries.from_scalar(1.0, chart.order) / poly_on_series(curve.p_prime,
                                                                            chart.x_series)
    return LaurentSeries.from_scalar(0.5, chart.order) / chart.y_series


def form_expansion(h: FieldElement, curve: Curve, chart: Chart) -> LaurentSeries:
    """Expansion of the one-form h*omega against dtau in the chart."""
    return expand_function(h, chart) * omega_over_dtau(curve, chart)


def residue_of_form(h: FieldElement, curve: Curve, pt: CurvePoint,
                    order: int = DEFAULT_TRUNC_TERMS) -> complex:
    """Res_pt(h * omega), retrying with deeper charts if truncation runs out."""
    for k in (order, 2 * order, 4 * order):
        try:
            return form_expansion(h, curve, chart_at(curve, pt, k)).coefficient(-1)
        except TruncationExceeded:
            continue
    raise TruncationExceeded(f"residue at {pt} needs chart order beyond {4 * order}")


def constant_term_of_form(h: FieldElement, curve: Curve, pt: CurvePoint,
                          order: int = DEFAULT_TRUNC_TERMS) -> complex:
    """Coefficient of dtau (tau^0) of h * omega in the chart at pt."""
    for k in (order, 2 * order, 4 * order):
        try:
            return form_expansion(h, curve, chart_at(curve, pt, k)).coefficient(0)
        except TruncationExceeded:
            continue
    raise TruncationExceeded(f"constant term at {pt} needs chart order beyond {4 * order}")


# ---------------------------------------------------------------------------
# the n+3 one-form basis
# ---------------------------------------------------------------------------

def validate_divisor(curve: Curve, D: Divisor) -> None:
    for pt, mult in D.points:
        if mult != 1:
            raise InvalidDivisor("divisor must be reduced (all multiplicities 1)")
        if not pt.is_affine:
            raise InvalidDivisor("divisor must be affine")
        if curve.is_weierstrass_x(pt.x) or abs(pt.y) <= WEIERSTRASS_MARGIN:
            raise InvalidDivisor(f"pole t=({pt.x}, {pt.y}) collides with a Weierstrass point")
    pts = D.support
    # same x for two poles is allowed only for conjugate points, never same (x, y)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i].x - pts[j].x) <= POINT_TOL and abs(pts[i].y - pts[j].y) <= POINT_TOL:
                raise InvalidDivisor("repeated point in divisor")


def basis_forms(curve: Curve, D: Divisor) -> list[FieldElement]:
    """The basis [omega, phi0, phi1, theta_1..theta_n], each divided by omega.

    omega/omega is the constant 1;
    phi0/omega = (1-lam) x / y,  phi1/omega = -lam (x-1) / y, and
    theta_j/omega = x_j (x_j x - lam) / (x_j y - y_j x), returned in the
    conjugate-rationalized representation with denominator x_j^2 p - y_j^2 x^2.
    """
    validate_divisor(curve, D)
    lam = curve.lam
    p = curve.p
    one = curve.fe_const(1.0)
    # (1-lam) x / y = (1-lam) x y / p
    phi0 = curve.fe(POLY_ZERO, Polynomial([0.0, 1.0 - lam]), p)
    # -lam (x-1)/y = -lam (x-1) y / p
    phi1 = curve.fe(POLY_ZERO, Polynomial([lam, -lam]), p)
    thetas = []
    for pt, _ in D.points:
        xj, yj = pt.x, pt.y
        # theta_j/omega = x_j (x_j x - lam) / (x_j y - y_j x); rationalized by
        # (x_j y + y_j x):  num = x_j (x_j x - lam)(x_j y + y_j x),
        #                   den = x_j^2 p(x) - y_j^2 x^2.
        lin = Polynomial([-lam * xj, xj * xj])            # x_j(x_j x - lam)
        numP = lin * Polynomial([0.0, yj])                # ... * y_j x   (no y)
        numQ = lin * Polynomial([xj])                     # ... * x_j    (times y)
        den = Polynomial([xj * xj]) * p - Polynomial([0.0, 0.0, yj * yj])
        thetas.append(curve.fe(numP, numQ, den))
    return [one, phi0, phi1, *thetas]


# ---------------------------------------------------------------------------
# reproducible sampling helpers
# ---------------------------------------------------------------------------

def random_affine_point(curve: Curve, rng: np.random.Generator,
                        avoid_x=(), margin: float = 1e-3, radius: float = 3.0) -> CurvePoint:
    """x uniform on a disc of the given radius, kept away from the listed
    x-values (and the Weierstrass x's) by the margin; y is the principal root."""
    avoid = [0.0, 1.0, curve.lam, *avoid_x]
    for _ in range(10_000):
        u, v = rng.random(), rng.random()
        x = radius * np.sqrt(u) * np.exp(2j * np.pi * v)
        if all(abs(x - a) > margin for a in avoid):
            return curve.lift_x(x)
    raise RuntimeError("could not sample a point clear of the avoid set")


def random_divisor(curve: Curve, n: int, rng: np.random.Generator,
                   margin: float = 1e-3) -> Divisor:
    pts: list[CurvePoint] = []
    while len(pts) < n:
        pt = random_affine_point(curve, rng, avoid_x=[q.x for q in pts], margin=margin)
        pts.append(pt)
    return Divisor.reduced(pts)
