"""Exact arithmetic in the function field of y^2 = p(x) and truncated Laurent series.

Everything downstream (one-form bases, residues, apparent forms) is built on the
two rings implemented here:

* ``FieldElement`` -- an element (P(x) + Q(x) y) / R(x) of the degree-2 extension
  C(x)[y] / (y^2 - p(x)), with double-precision complex coefficients.
* ``LaurentSeries`` -- a truncated Laurent expansion in a local chart coordinate,
  with explicit bookkeeping of the justified truncation order.

No exact gcd machinery is used: degree growth is bounded by a normalization pass
that cancels common roots of numerator and denominator detected to a relative
tolerance (see ``FieldElement.normalized``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DivisionByZeroElement,
    EvaluationAtPole,
    IllConditionedLeadingTerm,
    TruncationExceeded,
)

# Relative tolerances of the numeric regime (double precision, desk scale).
TRIM_TOL = 1e-14          # trailing/leading coefficient stripping
CANCEL_TOL = 1e-10        # common-root cancellation between numerator and denominator
POLE_TOL = 1e-10          # |R(x)| below this relative scale counts as a pole
SERIES_STRIP_TOL = 1e-12  # leading-coefficient stripping in series normalization
SERIES_DIV_TOL = 1e-10    # leading term of a divisor must clear this relative size
DEFAULT_TRUNC_TERMS = 8   # default number of series terms past the valuation
CANCEL_DEGREE_SKIP = 16   # normalization pass skipped while deg R stays at or below this


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def _trim(coeffs: np.ndarray) -> np.ndarray:
    """Strip trailing coefficients that are negligible relative to the largest."""
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size == 0:
        return c
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return c[:0]
    keep = np.nonzero(np.abs(c) > TRIM_TOL * scale)[0]
    if keep.size == 0:
        return c[:0]
    return c[: keep[-1] + 1]


@dataclass(frozen=True)
class Polynomial:
    """Dense complex polynomial, coefficients ascending in degree.

    The zero polynomial is represented by an empty coefficient array and its
    ``degree`` is the sentinel ``None`` (never -1, to avoid silent arithmetic
    on degrees).
    """

    coeffs: np.ndarray

    def __init__(self, coeffs) -> None:
        object.__setattr__(self, "coeffs", _trim(np.asarray(coeffs, dtype=complex)))

    @property
    def degree(self) -> int | None:
        return None if self.coeffs.size == 0 else self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if a.size < b.size:
            a, b = b, a
        out = a.copy()
        out[: b.size] += b
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self.coeffs)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial([])
            return Polynomial(np.convolve(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __call__(self, x: complex) -> complex:
        # Horner; zero polynomial evaluates to 0.
        acc = 0.0 + 0.0j
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.coeffs.size <= 1:
            return Polynomial([])
        k = np.arange(1, self.coeffs.size)
        return Polynomial(self.coeffs[1:] * k)

    def deflate(self, root: complex) -> "Polynomial":
        """Divide by (x - root), discarding the (assumed negligible) remainder."""
        if self.is_zero:
            return self
        a = self.coeffs
        n = a.size - 1
        out = np.zeros(n, dtype=complex)
        acc = a[n]
        for k in range(n - 1, -1, -1):
            out[k] = acc
            acc = a[k] + root * acc
        return Polynomial(out)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Long division self = q * other + rem (other nonzero)."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero or self.coeffs.size < other.coeffs.size:
            return Polynomial([]), self
        rem = self.coeffs.copy()
        db = other.coeffs.size - 1
        lead = other.coeffs[-1]
        q = np.zeros(rem.size - db, dtype=complex)
        for k in range(rem.size - db - 1, -1, -1):
            c = rem[k + db] / lead
            q[k] = c
            rem[k: k + db + 1] -= c * other.coeffs
        return Polynomial(q), Polynomial(rem[:db] if db else [])

    def divides(self, other: "Polynomial", tol: float = 1e-12) -> "Polynomial | None":
        """Quotient other/self when the division is (numerically) exact."""
        if self.is_zero or other.is_zero:
            return None
        q, rem = other.divmod(self)
        if rem.is_zero or (float(np.max(np.abs(rem.coeffs)))
                           <= tol * float(np.max(np.abs(other.coeffs)))):
            return q
        return None

    def roots(self) -> np.ndarray:
        if self.coeffs.size <= 1:
            return np.zeros(0, dtype=complex)
        return np.roots(self.coeffs[::-1])

    def _scale_at(self, x: complex) -> float:
        """Largest term magnitude at x: the scale cancellation must beat."""
        if self.is_zero:
            return 1.0
        ax = max(1.0, abs(x))
        return float(np.max(np.abs(self.coeffs) * ax ** np.arange(self.coeffs.size)))

    def vanishes_at(self, x: complex, tol: float = CANCEL_TOL) -> bool:
        return abs(self(x)) <= tol * self._scale_at(x)

    def polish_root(self, r: complex, steps: int = 4) -> complex:
        """A few Newton corrections of an approximate root."""
        dp = self.derivative()
        for _ in range(steps):
            d = dp(r)
            if d == 0:
                return r
            step = self(r) / d
            r = r - step
            if abs(step) <= 1e-15 * max(1.0, abs(r)):
                break
        return r

    def __repr__(self) -> str:  # compact, degree-first
        return f"Polynomial(deg={self.degree}, coeffs={np.round(self.coeffs, 6)!r})"


POLY_ZERO = Polynomial([])
POLY_ONE = Polynomial([1.0])
POLY_X = Polynomial([0.0, 1.0])


def _deflation_ok(deflated: Polynomial, r: complex, original: Polynomial,
                  tol: float = 1e-9) -> bool:
    """Deflation is trusted only if (x - r) * deflated reproduces the original."""
    if original.is_zero:
        return True
    recon = deflated * Polynomial([-r, 1.0])
    diff = recon - original
    if diff.is_zero:
        return True
    scale = float(np.max(np.abs(original.coeffs)))
    return float(np.max(np.abs(diff.coeffs))) <= tol * max(scale, 1e-300)


def _proportional(a: Polynomial, b: Polynomial) -> complex | None:
    """c with b = c * a, or None. Zero polynomials never match."""
    if a.is_zero or b.is_zero or a.coeffs.size != b.coeffs.size:
        return None
    c = b.coeffs[-1] / a.coeffs[-1]
    diff = b.coeffs - c * a.coeffs
    if np.max(np.abs(diff)) <= 1e-12 * np.max(np.abs(b.coeffs)):
        return complex(c)
    return None


def _clustered_roots(R: Polynomial, tol: float = 2e-3):
    """Roots of R grouped into (center, multiplicity) clusters.

    np.roots resolves an exact multiplicity-m root only to about eps^(1/m), so
    repeated factors come back as a cluster; its center is recovered to full
    precision afterwards by polishing on the (m-1)-st derivative.
    """
    clusters: list[list] = []  # [coordinate sum, count]
    for r in R.roots():
        for cl in clusters:
            if abs(r - cl[0] / cl[1]) <= tol * max(1.0, abs(r)):
                cl[0] += r
                cl[1] += 1
                break
        else:
            clusters.append([r, 1])
    return [(s / m, m) for s, m in clusters]


def _polish_cluster(R: Polynomial, r: complex, mult: int) -> complex:
    g = R
    for _ in range(mult - 1):
        g = g.derivative()
    return g.polish_root(r, steps=6)


# ---------------------------------------------------------------------------
# function-field elements
# ---------------------------------------------------------------------------

class FieldElement:
    """(P(x) + Q(x) y) / R(x) modulo y^2 = p(x).

    Immutable; all arithmetic is exact up to floating-point rounding.  Division
    rationalizes by the conjugate (P - Q y).  Instances carry the modulus
    polynomial ``p`` of their curve; mixing elements over different moduli is a
    programming error and raises ValueError.
    """

    __slots__ = ("P", "Q", "R", "p")

    def __init__(self, P: Polynomial, Q: Polynomial, R: Polynomial, p: Polynomial):
        if R.is_zero:
            raise DivisionByZeroElement("field element with identically zero denominator")
        if P.is_zero and Q.is_zero:
            R = POLY_ONE  # canonical zero, so a zero term never bloats denominators
        self.P = P
        self.Q = Q
        self.R = R
        self.p = p

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(c: complex, p: Polynomial) -> "FieldElement":
        return FieldElement(Polynomial([c]), POLY_ZERO, POLY_ONE, p)

    @staticmethod
    def coordinate_x(p: Polynomial) -> "FieldElement":
        return FieldElement(POLY_X, POLY_ZERO, POLY_ONE, p)

    @staticmethod
    def coordinate_y(p: Polynomial) -> "FieldElement":
        return FieldElement(POLY_ZERO, POLY_ONE, POLY_ONE, p)

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.P.is_zero and self.Q.is_zero

    def _check_compat(self, other: "FieldElement") -> None:
        if self.p.coeffs.shape != other.p.coeffs.shape or not np.allclose(
            self.p.coeffs, other.p.coeffs, rtol=1e-12, atol=0.0
        ):
            raise ValueError("field elements over different curves")

    def coefficient_scale(self) -> float:
        parts = [np.max(np.abs(q.coeffs)) for q in (self.P, self.Q, self.R) if not q.is_zero]
        return float(max(parts)) if parts else 0.0

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "FieldElement":
        other = self._coerce(other)
        self._check_compat(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        c = _proportional(self.R, other.R)
        if c is not None:
            # other.R = c * self.R: share the denominator instead of squaring it
            P = self.P + (1.0 / c) * other.P
            Q = self.Q + (1.0 / c) * other.Q
            return FieldElement(P, Q, self.R, self.p)
        # one denominator dividing the other is the next most common case
        k = self.R.divides(other.R)
        if k is not None:
            return FieldElement(self.P * k + other.P, self.Q * k + other.Q,
                                other.R, self.p)
        k = other.R.divides(self.R)
        if k is not None:
            return FieldElement(self.P + other.P * k, self.Q + other.Q * k,
                                self.R, self.p)
        P = self.P * other.R + other.P * self.R
        Q = self.Q * other.R + other.Q * self.R
        return FieldElement(P, Q, self.R * other.R, self.p).normalized()

    def __radd__(self, other) -> "FieldElement":
        return self + other

    def __sub__(self, other) -> "FieldElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FieldElement":
        return (-self) + other

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.P, -self.Q, self.R, self.p)

    def __mul__(self, other) -> "FieldElement":
        other = self._coerce(other)
        self._check_compat(other)
        if self.is_zero or other.is_zero:
            return FieldElement(POLY_ZERO, POLY_ZERO, POLY_ONE, self.p)
        # (P1 + Q1 y)(P2 + Q2 y) = P1 P2 + Q1 Q2 p + (P1 Q2 + Q1 P2) y
        P = self.P * other.P + self.Q * other.Q * self.p
        Q = self.P * other.Q + self.Q * other.P
        return FieldElement(P, Q, self.R * other.R, self.p).normalized()

    def __rmul__(self, other) -> "FieldElement":
        return self * other

    def __truediv__(self, other) -> "FieldElement":
        other = self._coerce(other)
        self._check_compat(other)
        if other.is_zero:
            raise DivisionByZeroElement("division by the zero field element")
        # 1 / ((P + Qy)/R) = R (P - Qy) / (P^2 - Q^2 p)
        norm = other.P * other.P - other.Q * other.Q * other.p
        if norm.is_zero:
            raise DivisionByZeroElement("conjugate norm vanished; divisor is a zero divisor")
        inv = FieldElement(other.R * other.P, -(other.R * other.Q), norm, self.p)
        return (self * inv).normalized()

    def __rtruediv__(self, other) -> "FieldElement":
        return self._coerce(other) / self

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        return FieldElement.const(complex(other), self.p)

    # -- normalization -------------------------------------------------------

    def normalized(self, degree_skip: int = CANCEL_DEGREE_SKIP) -> "FieldElement":
        """Cancel common roots of (P, Q, R); skipped while deg R <= degree_skip.

        Root detection is a relative-tolerance test at the numerically computed
        (and Newton-polished) roots of R, never an exact gcd.  Repeated factors
        come back from the rootfinder as clusters, whose centers are recovered
        by polishing on a derivative.  Each deflation is accepted only if
        multiplying back by (x - r) reproduces the original coefficients to
        1e-9 relative, so an inaccurate root can never silently degrade the
        element.  This bounds degree growth in long products (apparent-form
        assembly) at negligible cost elsewhere.
        """
        R = self.R
        if R.degree is None or R.degree <= degree_skip:
            return self
        P, Q = self.P, self.Q
        changed = False
        for center, mult in _clustered_roots(R):
            r = _polish_cluster(R, center, mult)
            for _ in range(mult):
                if not (
                    R.degree is not None
                    and R.degree > 0
                    and R.vanishes_at(r)
                    and (P.is_zero or P.vanishes_at(r))
                    and (Q.is_zero or Q.vanishes_at(r))
                ):
                    break
                P2 = P.deflate(r) if not P.is_zero else P
                Q2 = Q.deflate(r) if not Q.is_zero else Q
                R2 = R.deflate(r)
                if not (_deflation_ok(P2, r, P) and _deflation_ok(Q2, r, Q)
                        and _deflation_ok(R2, r, R)):
                    break
                P, Q, R = P2, Q2, R2
                changed = True
        return FieldElement(P, Q, R, self.p) if changed else self

    # -- evaluation and invariants --------------------------------------------

    def eval_at(self, x: complex, y: complex) -> complex:
        rx = self.R(x)
        if abs(rx) <= POLE_TOL * self.R._scale_at(x):
            raise EvaluationAtPole(f"denominator vanishes at x={x}")
        return (self.P(x) + self.Q(x) * y) / rx

    def ord_infinity(self) -> int:
        """Order at the point at infinity, from degrees alone.

        x has a double pole and y a triple pole at infinity, so
        ord = 2 deg R + min(-2 deg P, -2 deg Q - 3); the two arguments of the
        min have opposite parity, hence never tie.  Zero components contribute
        +infinity.
        """
        if self.is_zero:
            raise DivisionByZeroElement("ord_infinity of the zero element")
        wp = -2 * self.P.degree if self.P.degree is not None else math.inf
        wq = -2 * self.Q.degree - 3 if self.Q.degree is not None else math.inf
        return 2 * (self.R.degree or 0) + int(min(wp, wq))

    def derivative_over_omega(self) -> "FieldElement":
        """d(self)/omega for omega = dx/(2y), using dx/omega = 2y, dy/omega = p'(x).

        For a = (P + Q y)/R this is
        ((2Q'R - 2QR') p + QR p' + (2P'R - 2PR') y) / R^2, a derivation.
        """
        P, Q, R, p = self.P, self.Q, self.R, self.p
        dP, dQ, dR, dp = P.derivative(), Q.derivative(), R.derivative(), p.derivative()
        newP = (dQ * R - Q * dR) * p * 2 + Q * R * dp
        newQ = (dP * R - P * dR) * 2
        return FieldElement(newP, newQ, R * R, p).normalized()

    def __repr__(self) -> str:
        return f"FieldElement(P={self.P!r}, Q={self.Q!r}, R={self.R!r})"


def fe_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch-by-name wrapper over the operator methods."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def fe_eval(a: FieldElement, pt) -> complex:
    """Evaluate at an affine curve point (duck-typed: needs .x and .y)."""
    return a.eval_at(pt.x, pt.y)


def fe_derivative_over_omega(a: FieldElement, curve=None) -> FieldElement:
    return a.derivative_over_omega()


# ---------------------------------------------------------------------------
# truncated Laurent series
# ---------------------------------------------------------------------------

class LaurentSeries:
    """Truncated Laurent series  sum_k c[k] tau^(valuation + k).

    Coefficients are justified strictly below ``truncation_order``; the stored
    array always spans exactly that window, exact zeros included.  The zero
    series keeps valuation == truncation_order and an empty array.  Arithmetic
    propagates the minimum justified truncation of its inputs.
    """

    __slots__ = ("valuation", "coeffs", "truncation_order")

    def __init__(self, valuation: int, coeffs, truncation_order: int):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if valuation + c.size != truncation_order:
            # pad or cut to the declared window
            want = truncation_order - valuation
            if want < 0:
                raise ValueError("truncation_order below valuation")
            if c.size < want:
                c = np.concatenate([c, np.zeros(want - c.size, dtype=complex)])
            else:
                c = c[:want]
        # strip numerically-zero leading coefficients so valuation = exact order
        if c.size:
            scale = np.max(np.abs(c))
            if scale == 0.0:
                valuation, c = truncation_order, c[:0]
            else:
                nz = np.nonzero(np.abs(c) > SERIES_STRIP_TOL * scale)[0]
                if nz.size == 0:
                    valuation, c = truncation_order, c[:0]
                else:
                    valuation += int(nz[0])
                    c = c[nz[0]:]
        else:
            valuation = truncation_order
        self.valuation = int(valuation)
        self.coeffs = c
        self.truncation_order = int(truncation_order)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(truncation_order: int) -> "LaurentSeries":
        return LaurentSeries(truncation_order, [], truncation_order)

    @staticmethod
    def from_scalar(c: complex, truncation_order: int) -> "LaurentSeries":
        if truncation_order <= 0:
            return LaurentSeries.zero(truncation_order)
        a = np.zeros(truncation_order, dtype=complex)
        a[0] = c
        return LaurentSeries(0, a, truncation_order)

    @staticmethod
    def tau(truncation_order: int, power: int = 1) -> "LaurentSeries":
        if truncation_order <= power:
            return LaurentSeries.zero(truncation_order)
        c = np.zeros(truncation_order - power, dtype=complex)
        c[0] = 1.0
        return LaurentSeries(power, c, truncation_order)

    @staticmethod
    def from_polynomial(poly: Polynomial, truncation_order: int) -> "LaurentSeries":
        if poly.is_zero:
            return LaurentSeries.zero(truncation_order)
        n = min(poly.coeffs.size, max(truncation_order, 0))
        c = np.zeros(max(truncation_order, 0), dtype=complex)
        c[:n] = poly.coeffs[:n]
        return LaurentSeries(0, c, truncation_order)

    # -- structure -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def coefficient(self, k: int) -> complex:
        if k >= self.truncation_order:
            raise TruncationExceeded(
                f"coefficient at tau^{k} beyond truncation order {self.truncation_order}"
            )
        if k < self.valuation:
            return 0.0 + 0.0j
        return complex(self.coeffs[k - self.valuation])

    def eval_at(self, tau: complex) -> complex:
        """Numeric value of the truncated expansion; no tail estimate."""
        powers = tau ** np.arange(self.valuation, self.truncation_order)
        return complex(np.dot(self.coeffs, powers))

    def truncate(self, new_order: int) -> "LaurentSeries":
        if new_order >= self.truncation_order:
            return self
        return LaurentSeries(self.valuation, self.coeffs[: max(new_order - self.valuation, 0)],
                             new_order)

    # -- ring operations -------------------------------------------------------

    def __add__(self, other) -> "LaurentSeries":
        other = self._coerce(other)
        t = min(self.truncation_order, other.truncation_order)
        v = min(self.valuation, other.valuation)
        if v >= t:
            return LaurentSeries.zero(t)
        out = np.zeros(t - v, dtype=complex)
        if not self.is_zero:
            lo = self.valuation - v
            hi = min(self.truncation_order, t) - v
            out[lo:hi] += self.coeffs[: hi - lo]
        if not other.is_zero:
            lo = other.valuation - v
            hi = min(other.truncation_order, t) - v
            out[lo:hi] += other.coeffs[: hi - lo]
        return LaurentSeries(v, out, t)

    def __radd__(self, other) -> "LaurentSeries":
        return self + other

    def __sub__(self, other) -> "LaurentSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentSeries":
        return (-self) + other

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.valuation, -self.coeffs, self.truncation_order)

    def __mul__(self, other) -> "LaurentSeries":
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            t = min(self.valuation + other.truncation_order,
                    other.valuation + self.truncation_order)
            return LaurentSeries.zero(t)
        v = self.valuation + other.valuation
        t = min(self.valuation + other.truncation_order,
                other.valuation + self.truncation_order)
        full = np.convolve(self.coeffs, other.coeffs)
        return LaurentSeries(v, full[: t - v], t)

    def __rmul__(self, other) -> "LaurentSeries":
        return self * other

    def __truediv__(self, other) -> "LaurentSeries":
        other = self._coerce(other)
        if other.is_zero:
            raise IllConditionedLeadingTerm("division by a (truncated) zero series")
        bmax = np.max(np.abs(other.coeffs))
        if abs(other.coeffs[0]) < SERIES_DIV_TOL * bmax:
            raise IllConditionedLeadingTerm(
                "leading coefficient too small relative to the series scale"
            )
        if self.is_zero:
            # zero dividend: quotient is zero wherever the dividend's zeros are known
            return LaurentSeries.zero(self.truncation_order - other.valuation)
        m, k = self.coeffs.size, other.coeffs.size
        nq = min(m, k)
        q = np.zeros(nq, dtype=complex)
        b0 = other.coeffs[0]
        for i in range(nq):
            acc = self.coeffs[i]
            jmax = min(i, k - 1)
            if jmax > 0:
                acc = acc - np.dot(other.coeffs[1: jmax + 1], q[i - 1:: -1][:jmax])
            q[i] = acc / b0
        v = self.valuation - other.valuation
        return LaurentSeries(v, q, v + nq)

    def _coerce(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries.from_scalar(complex(other), self.truncation_order - min(self.valuation, 0))

    def __repr__(self) -> str:
        return (f"LaurentSeries(val={self.valuation}, trunc={self.truncation_order}, "
                f"coeffs={np.round(self.coeffs, 6)!r})")


def series_arith(a: LaurentSeries, b: LaurentSeries, op: str) -> LaurentSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def series_coefficient(a: LaurentSeries, k: int) -> complex:
    return a.coefficient(k)


def poly_on_series(poly: Polynomial, xs: LaurentSeries) -> LaurentSeries:
    """Evaluate a polynomial on a series with nonnegative valuation (Horner)."""
    if xs.valuation < 0:
        raise ValueError("polynomial substitution requires series valuation >= 0")
    t = xs.truncation_order
    if poly.is_zero:
        return LaurentSeries.zero(t)
    acc = LaurentSeries.from_scalar(poly.coeffs[-1], t)
    for c in poly.coeffs[-2::-1]:
        acc = acc * xs + LaurentSeries.from_scalar(c, t)
    return acc
