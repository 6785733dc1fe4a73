"""Exception hierarchy shared by all ellconn modules."""


class EllconnError(Exception):
    """Base class for every error raised by this package."""


# --- exact function-field / series arithmetic ---

class DivisionByZeroElement(EllconnError):
    """Division by the zero element of the function field."""


class EvaluationAtPole(EllconnError):
    """Evaluation requested at (or too close to) a pole of the element."""


class TruncationExceeded(EllconnError):
    """A series coefficient beyond the justified truncation order was requested."""


class IllConditionedLeadingTerm(EllconnError):
    """Series division by a series whose leading coefficient is numerically ambiguous."""


# --- curve / chart layer ---

class DegenerateCurve(EllconnError):
    """Curve parameter makes y^2 = x(x-1)(x-lam) singular (lam in {0, 1})."""


class NewtonStall(EllconnError):
    """Series Newton iteration failed to contract the defect."""


class InvalidDivisor(EllconnError):
    """Divisor with repeated points, non-affine points, or Weierstrass collisions."""


# --- Fuchsian systems ---

class InvalidResidues(EllconnError):
    """Residue matrices are not trace-free to tolerance."""


class NotAConnection(EllconnError):
    """Operation defined only for systems with nonzero leading scale."""


class EigenvalueMismatch(EllconnError):
    """Residue eigenvalues disagree with the prescribed exponents."""


class DegenerateResidue(EllconnError):
    """Residue is (numerically) scalar: no distinguished eigenspaces."""


class DiagonalPoint(EllconnError):
    """Pair of projective directions collapses onto the diagonal."""


class ChartBoundary(EllconnError):
    """Chart coordinate hit the boundary of its domain (some w_j = 0)."""


# --- combinatorial layer ---

class OddCardinality(EllconnError):
    """Index subset must have even cardinality."""


class ExponentialBlowup(EllconnError):
    """Guard against 2^n enumerations for n too large."""


class EvenN(EllconnError):
    """Operation only defined for an odd number of poles."""


class IntegerNu(EllconnError):
    """Exponent must not be an integer."""


# --- symplectic layer ---

class ChartMismatch(EllconnError):
    """Tangent vectors attached to incompatible charts."""


class FDInconsistent(EllconnError):
    """Finite-difference evaluations at two step sizes disagree."""


class DegenerateMoebius(EllconnError):
    """Moebius coefficients with vanishing determinant."""


# --- apparent map ---

class SampleAtPole(EllconnError):
    """Evaluation sample too close to a pole of the apparent form."""


class RankUnstable(EllconnError):
    """A singular value sits too close to the rank threshold to decide."""


# --- cli ---

class ParseError(EllconnError):
    """Malformed problem instance file."""


class ValidationError(EllconnError):
    """Problem instance violates a stated invariant."""
