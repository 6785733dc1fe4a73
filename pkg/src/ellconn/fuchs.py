"""Rank-2 Fuchsian systems on the trivial bundle with three apparent poles.

A system is stored by its coefficient matrices against the one-form basis
[omega, phi0, phi1, theta_1..theta_n]; the three Weierstrass poles are made
apparent by closed-form coefficient sums in the residue entries, with the
1/2-eigenspaces pinned to (1:0), (1:1), (0:1) over w_0, w_1, w_lam.  A
``scale`` field carries the leading coefficient of the Leibniz rule, so the
same assembly serves connections (scale 1), Higgs fields (scale 0) and the
interpolating pencil; apparentness and the eigenspace correspondence require
scale != 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import FieldElement
from .curve import (
    Chart,
    Curve,
    CurvePoint,
    Divisor,
    basis_forms,
    chart_at,
    form_expansion,
)
from .errors import (
    ChartBoundary,
    DegenerateResidue,
    DiagonalPoint,
    EigenvalueMismatch,
    InvalidResidues,
    NotAConnection,
    TruncationExceeded,
)

TRACE_TOL = 1e-10
EIGEN_TOL = 1e-8
DISTINCT_TOL = 1e-10
APPARENT_TOL = 1e-8


# ---------------------------------------------------------------------------
# eigenvalue data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenData:
    """Ordered exponent pairs (nu_j^+, nu_j^-) over the n poles."""

    pairs: tuple[tuple[complex, complex], ...]

    @staticmethod
    def of(pairs) -> "EigenData":
        return EigenData(tuple((complex(a), complex(b)) for a, b in pairs))

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def plus(self) -> np.ndarray:
        return np.array([a for a, _ in self.pairs], dtype=complex)

    @property
    def minus(self) -> np.ndarray:
        return np.array([b for _, b in self.pairs], dtype=complex)

    @property
    def reduced(self) -> np.ndarray:
        """nu_j = nu_j^+ - nu_j^-, the exponent differences."""
        return self.plus - self.minus

    def fuchs_defect(self) -> float:
        """|1 + sum of all exponents|; zero for degree-one connection data."""
        return float(abs(1.0 + np.sum(self.plus) + np.sum(self.minus)))

    @staticmethod
    def random_fuchs(n: int, rng: np.random.Generator, scale: float = 0.7) -> "EigenData":
        """Random exponents satisfying the degree-one Fuchs relation."""
        vals = scale * (rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n))
        vals[-1] = -1.0 - np.sum(vals[:-1])
        return EigenData.of(list(zip(vals[0::2], vals[1::2])))


# ---------------------------------------------------------------------------
# 2x2 closed-form eigen pieces (trace-free matrices)
# ---------------------------------------------------------------------------

def tracefree_eigenvalues(M: np.ndarray) -> tuple[complex, complex]:
    """Eigenvalues +-sqrt(a^2 + bc) of [[a, b], [c, -a]]."""
    a, b, c = M[0, 0], M[0, 1], M[1, 0]
    mu = np.sqrt(a * a + b * c)
    return complex(mu), complex(-mu)


def tracefree_eigenvector(M: np.ndarray, mu: complex) -> np.ndarray:
    """Eigenvector of trace-free M for eigenvalue mu, better-conditioned row.

    (M - mu) kills both (b, mu - a) and (mu + a, c); pick the larger one.
    """
    a, b, c = M[0, 0], M[0, 1], M[1, 0]
    v1 = np.array([b, mu - a], dtype=complex)
    v2 = np.array([mu + a, c], dtype=complex)
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    nv = np.linalg.norm(v)
    if nv <= 1e-14 * max(1.0, float(np.linalg.norm(M))):
        raise DegenerateResidue("matrix is numerically scalar; no distinguished eigenvector")
    return v / nv


def projective_distance(u, v) -> float:
    """|u x v| for unit-normalized directions: 0 iff projectively equal."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("zero vector is not a projective direction")
    return float(abs(u[0] * v[1] - u[1] * v[0]) / (nu * nv))


# ---------------------------------------------------------------------------
# points of S^n (ordered eigenspace pairs)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParPoint:
    """n ordered pairs of distinct projective directions (plus first)."""

    directions: np.ndarray  # shape (n, 2, 2): [j, 0] = plus, [j, 1] = minus

    def __post_init__(self) -> None:
        d = np.asarray(self.directions, dtype=complex)
        if d.ndim != 3 or d.shape[1:] != (2, 2):
            raise ValueError("directions must have shape (n, 2, 2)")
        object.__setattr__(self, "directions", d)
        for j in range(d.shape[0]):
            if projective_distance(d[j, 0], d[j, 1]) <= DISTINCT_TOL:
                raise DiagonalPoint(f"pair {j} lies on the diagonal")

    @property
    def n(self) -> int:
        return int(self.directions.shape[0])

    def plus(self, j: int) -> np.ndarray:
        return self.directions[j, 0]

    def minus(self, j: int) -> np.ndarray:
        return self.directions[j, 1]

    def max_distance(self, other: "ParPoint") -> float:
        return max(
            projective_distance(self.directions[j, s], other.directions[j, s])
            for j in range(self.n) for s in (0, 1)
        )

    @staticmethod
    def random(n: int, rng: np.random.Generator, min_gap: float = 1e-2) -> "ParPoint":
        dirs = np.empty((n, 2, 2), dtype=complex)
        for j in range(n):
            while True:
                cand = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
                cand /= np.linalg.norm(cand, axis=1, keepdims=True)
                if projective_distance(cand[0], cand[1]) > min_gap:
                    dirs[j] = cand
                    break
        return ParPoint(dirs)


# ---------------------------------------------------------------------------
# the systems themselves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FuchsianSystem:
    """scale * d + A_phi0 phi0 + A_phi1 phi1 + A_omega omega + sum_j B_j theta_j."""

    curve: Curve
    D: Divisor
    A_phi0: np.ndarray
    A_phi1: np.ndarray
    A_omega: np.ndarray
    B: tuple[np.ndarray, ...]
    scale: complex = 1.0

    @property
    def n(self) -> int:
        return self.D.n

    def matrices(self) -> list[np.ndarray]:
        """Coefficients in basis order [omega, phi0, phi1, theta_1..theta_n]."""
        return [self.A_omega, self.A_phi0, self.A_phi1, *self.B]

    def max_trace(self) -> float:
        return max(abs(np.trace(M)) for M in self.matrices())

    def entry_field(self, i: int, k: int, forms: list[FieldElement] | None = None) -> FieldElement:
        """Matrix entry (i, k) of the one-form part, divided by omega."""
        forms = forms if forms is not None else basis_forms(self.curve, self.D)
        acc = self.A_omega[i, k] * forms[0]
        acc = acc + self.A_phi0[i, k] * forms[1]
        acc = acc + self.A_phi1[i, k] * forms[2]
        for j in range(self.n):
            acc = acc + self.B[j][i, k] * forms[3 + j]
        return acc

    def deviation(self, other: "FuchsianSystem") -> float:
        """Max entry-wise difference over all coefficient matrices and the scale."""
        d = abs(self.scale - other.scale)
        for M, N in zip(self.matrices(), other.matrices()):
            d = max(d, float(np.max(np.abs(M - N))))
        return d

    def __add__(self, other: "FuchsianSystem") -> "FuchsianSystem":
        if self.D is not other.D and self.D != other.D:
            raise ValueError("systems over different divisors")
        return FuchsianSystem(
            self.curve, self.D,
            self.A_phi0 + other.A_phi0, self.A_phi1 + other.A_phi1,
            self.A_omega + other.A_omega,
            tuple(b1 + b2 for b1, b2 in zip(self.B, other.B)),
            self.scale + other.scale,
        )

    def __rmul__(self, c: complex) -> "FuchsianSystem":
        c = complex(c)
        return FuchsianSystem(
            self.curve, self.D,
            c * self.A_phi0, c * self.A_phi1, c * self.A_omega,
            tuple(c * b for b in self.B), c * self.scale,
        )


def build_system(curve: Curve, D: Divisor, residues, scale: complex = 1.0) -> FuchsianSystem:
    """System with prescribed residues B_j over the t_j and apparent Weierstrass poles.

    With B_j = [[alpha_j, beta_j], [gamma_j, -alpha_j]] the apparentness
    conditions at w_0, w_1, w_lam (eigenvalues +-scale/2, eigenspaces (1:0),
    (1:1), (0:1)) determine the remaining coefficients:

        a0 = -sum alpha,  b0 = scale/2 + sum alpha,  c0 = scale/2 - sum alpha,
        a1 = scale/2 + sum alpha,  b1 = -scale/2 - sum alpha,  c1 = sum gamma,
        a2 = sum y_j/2 [ (2 alpha_j + beta_j - gamma_j)/(x_j - 1)
                         + gamma_j/x_j - beta_j/(x_j - lam) ],
        b2 = sum y_j beta_j/(x_j - lam),   c2 = sum y_j gamma_j/x_j.
    """
    residues = [np.asarray(B, dtype=complex) for B in residues]
    if len(residues) != D.n:
        raise InvalidResidues("one residue matrix per pole required")
    for B in residues:
        if abs(np.trace(B)) > TRACE_TOL * max(1.0, float(np.max(np.abs(B)))):
            raise InvalidResidues("residue matrix is not trace-free")
    lam = curve.lam
    s_alpha = sum(B[0, 0] for B in residues)
    s_gamma = sum(B[1, 0] for B in residues)
    half = complex(scale) / 2.0
    a0, b0, c0 = -s_alpha, half + s_alpha, half - s_alpha
    a1, b1, c1 = half + s_alpha, -half - s_alpha, s_gamma
    a2 = b2 = c2 = 0.0 + 0.0j
    for (pt, _), B in zip(D.points, residues):
        xj, yj = pt.x, pt.y
        alpha, beta, gamma = B[0, 0], B[0, 1], B[1, 0]
        a2 += (yj / 2.0) * ((2 * alpha + beta - gamma) / (xj - 1.0)
                            + gamma / xj - beta / (xj - lam))
        b2 += yj * beta / (xj - lam)
        c2 += yj * gamma / xj
    return FuchsianSystem(
        curve, D,
        np.array([[a0, b0], [c0, -a0]]),
        np.array([[a1, b1], [c1, -a1]]),
        np.array([[a2, b2], [c2, -a2]]),
        tuple(residues),
        complex(scale),
    )


# ---------------------------------------------------------------------------
# apparentness verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ApparentReport:
    point: CurvePoint
    eigenvalue_defect: float
    eigenspace_defect: float
    invariance_defect: float

    @property
    def passed(self) -> bool:
        return max(self.eigenvalue_defect, self.eigenspace_defect,
                   self.invariance_defect) <= APPARENT_TOL


def _prescribed_direction(curve: Curve, wpt: CurvePoint) -> np.ndarray:
    if abs(wpt.x) <= 1e-12:
        return np.array([1.0, 0.0], dtype=complex)
    if abs(wpt.x - 1.0) <= 1e-12:
        return np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    if abs(wpt.x - curve.lam) <= 1e-12:
        return np.array([0.0, 1.0], dtype=complex)
    raise ValueError("apparentness is checked at the Weierstrass points only")


def polar_part(sys: FuchsianSystem, chart: Chart,
               forms: list[FieldElement] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(R, C): residue and constant matrices of the one-form part in the chart."""
    forms = forms if forms is not None else basis_forms(sys.curve, sys.D)
    mats = sys.matrices()
    R = np.zeros((2, 2), dtype=complex)
    C = np.zeros((2, 2), dtype=complex)
    for M, h in zip(mats, [forms[0], forms[1], forms[2], *forms[3:]]):
        e = form_expansion(h, sys.curve, chart)
        R += M * e.coefficient(-1)
        C += M * e.coefficient(0)
    return R, C


def check_apparent(sys: FuchsianSystem, wpt: CurvePoint,
                   forms: list[FieldElement] | None = None) -> ApparentReport:
    """Expand the system at a Weierstrass point and measure the three defects.

    The constant part is taken in the paper-standard local coordinate tau = y
    at the Weierstrass point (the constant matrix is chart-dependent; this
    convention is fixed once and for all here).
    """
    if abs(sys.scale) <= 1e-14:
        raise NotAConnection("apparentness is defined only for scale != 0")
    for order in (8, 16, 32):
        try:
            R, C = polar_part(sys, chart_at(sys.curve, wpt, order), forms)
            break
        except TruncationExceeded:
            continue
    else:
        raise TruncationExceeded("polar part did not stabilize")
    half = sys.scale / 2.0
    mu_p, mu_m = tracefree_eigenvalues(R)
    ev_defect = min(max(abs(mu_p - half), abs(mu_m + half)),
                    max(abs(mu_m - half), abs(mu_p + half)))
    v = tracefree_eigenvector(R, half)
    es_defect = projective_distance(v, _prescribed_direction(sys.curve, wpt))
    Cv = C @ v
    proj = (np.vdot(v, Cv) / np.vdot(v, v)) * v
    inv_defect = float(np.linalg.norm(Cv - proj) / max(1.0, np.linalg.norm(Cv)))
    return ApparentReport(wpt, float(ev_defect), float(es_defect), inv_defect)


# ---------------------------------------------------------------------------
# the eigenspace correspondence with S^n
# ---------------------------------------------------------------------------

def par(sys: FuchsianSystem, nu: EigenData) -> ParPoint:
    """Ordered residual eigenspaces ((+nu_j/2)-space first) over the t_j."""
    if abs(sys.scale) <= 1e-14:
        raise NotAConnection("the eigenspace correspondence requires scale != 0")
    red = nu.reduced
    dirs = np.empty((sys.n, 2, 2), dtype=complex)
    for j, B in enumerate(sys.B):
        M = np.asarray(B, dtype=complex) / sys.scale
        target = red[j] / 2.0
        if abs(target) <= DISTINCT_TOL:
            raise DegenerateResidue(f"nu_{j + 1} vanishes; eigenspaces undistinguished")
        mu_p, mu_m = tracefree_eigenvalues(M)
        defect = min(max(abs(mu_p - target), abs(mu_m + target)),
                     max(abs(mu_m - target), abs(mu_p + target)))
        if defect > EIGEN_TOL * max(1.0, abs(target)):
            raise EigenvalueMismatch(
                f"residue {j + 1} has exponents {mu_p}, {mu_m}, expected +-{target}"
            )
        dirs[j, 0] = tracefree_eigenvector(M, target)
        dirs[j, 1] = tracefree_eigenvector(M, -target)
    return ParPoint(dirs)


def par_inverse(curve: Curve, D: Divisor, nu: EigenData, pp: ParPoint,
                scale: complex = 1.0) -> FuchsianSystem:
    """System whose residue over t_j has the prescribed eigenspace pair.

    B_j is the conjugate of diag(nu_j/2, -nu_j/2) by the eigenvector matrix
    [(z, u), (w, v)]:  B_j = nu_j/2 * [[zv + uw, -2zu], [2wv, -(zv + uw)]] / (zv - uw).
    """
    red = nu.reduced
    residues = []
    for j in range(pp.n):
        z, w = pp.plus(j)
        u, v = pp.minus(j)
        det = z * v - w * u
        if abs(det) <= DISTINCT_TOL:
            raise DiagonalPoint(f"pair {j} lies on the diagonal")
        if abs(red[j]) <= DISTINCT_TOL:
            raise DegenerateResidue(f"nu_{j + 1} vanishes")
        mul = scale * red[j] / (2.0 * det)
        residues.append(mul * np.array([[z * v + u * w, -2.0 * z * u],
                                        [2.0 * w * v, -(z * v + u * w)]], dtype=complex))
    return build_system(curve, D, residues, scale=scale)


# ---------------------------------------------------------------------------
# chart trivializations and the affine transition
# ---------------------------------------------------------------------------

def chart_connection(curve: Curve, D: Divisor, nu: EigenData, chart_tag: str,
                     base, fiber=None, scale: complex = 1.0) -> FuchsianSystem:
    """scale * (base connection of the chart) + sum_j fiber_j * (Higgs generator).

    On U0 the base point is z (plus-direction (z_j:1), minus (1:0)); on Uinf it
    is w (plus (1:w_j), minus (0:1)).  Residues over t_j:

        U0:   scale * nu_j/2 [[-1, 2 z_j], [0, 1]] + fiber_j [[z_j, -z_j^2], [1, -z_j]]
        Uinf: scale * nu_j/2 [[1, 0], [2 w_j, -1]] + fiber_j [[w_j, -1], [w_j^2, -w_j]]

    and the Weierstrass data follow from the same closed-form assembly.
    """
    base = np.asarray(base, dtype=complex)
    fiber = np.zeros(D.n, dtype=complex) if fiber is None else np.asarray(fiber, dtype=complex)
    red = nu.reduced
    residues = []
    for j in range(D.n):
        if chart_tag == "U0":
            con = 0.5 * red[j] * np.array([[-1.0, 2.0 * base[j]], [0.0, 1.0]], dtype=complex)
            higgs = np.array([[base[j], -base[j] ** 2], [1.0, -base[j]]], dtype=complex)
        elif chart_tag == "Uinf":
            con = 0.5 * red[j] * np.array([[1.0, 0.0], [2.0 * base[j], -1.0]], dtype=complex)
            higgs = np.array([[base[j], -1.0], [base[j] ** 2, -base[j]]], dtype=complex)
        else:
            raise ValueError(f"unknown chart {chart_tag!r}")
        residues.append(scale * con + fiber[j] * higgs)
    return build_system(curve, D, residues, scale=scale)


def transition_map(nu: EigenData, w, s) -> tuple[np.ndarray, np.ndarray]:
    """(w, s) on Uinf -> (z, r) on U0:  z = 1/w,  r = w^2 s + nu w."""
    w = np.asarray(w, dtype=complex)
    s = np.asarray(s, dtype=complex)
    if np.any(np.abs(w) <= 1e-14):
        raise ChartBoundary("transition undefined where w_j = 0")
    return 1.0 / w, w * w * s + nu.reduced * w


def transition_map_inverse(nu: EigenData, z, r) -> tuple[np.ndarray, np.ndarray]:
    """(z, r) on U0 -> (w, s) on Uinf:  w = 1/z,  s = z^2 r - nu z."""
    z = np.asarray(z, dtype=complex)
    r = np.asarray(r, dtype=complex)
    if np.any(np.abs(z) <= 1e-14):
        raise ChartBoundary("inverse transition undefined where z_j = 0")
    return 1.0 / z, z * z * r - nu.reduced * z


def lambda_transition_matrix(nu: EigenData, w) -> np.ndarray:
    """Transition of the rank-(n+1) pencil bundle over (lambda_c, s_1..s_n).

    Lower triangular: first row (1, 0..0), first column (1, nu_1 w_1, ..,
    nu_n w_n), diagonal (1, w_1^2, .., w_n^2).  At lambda_c = 1 it reproduces
    the affine transition; at lambda_c = 0 the pure Higgs scaling r = w^2 s.
    """
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) <= 1e-14):
        raise ChartBoundary("transition matrix undefined where w_j = 0")
    n = w.size
    T = np.zeros((n + 1, n + 1), dtype=complex)
    T[0, 0] = 1.0
    T[1:, 0] = nu.reduced * w
    T[np.arange(1, n + 1), np.arange(1, n + 1)] = w * w
    return T


def splitting_check(curve: Curve, D: Divisor, nu: EigenData, w, s=None) -> float:
    """Deviation of the two sides of the chart-splitting identity.

    Checks Uinf(w, s) = U0(1/w, w^2 s + nu w) as full systems (s = 0 is the
    pure splitting cocycle), returning the maximum coefficient deviation.
    """
    w = np.asarray(w, dtype=complex)
    s = np.zeros(D.n, dtype=complex) if s is None else np.asarray(s, dtype=complex)
    lhs = chart_connection(curve, D, nu, "Uinf", w, s, scale=1.0)
    z, r = transition_map(nu, w, s)
    rhs = chart_connection(curve, D, nu, "U0", z, r, scale=1.0)
    return lhs.deviation(rhs)


def higgs_transition_deviation(curve: Curve, D: Divisor, nu: EigenData, w) -> float:
    """Deviation in Theta^inf(w_j) = w_j^2 Theta^0(1/w_j), summed over j with unit fibers."""
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) <= 1e-14):
        raise ChartBoundary("undefined where w_j = 0")
    lhs = chart_connection(curve, D, nu, "Uinf", w, np.ones(D.n), scale=0.0)
    rhs = chart_connection(curve, D, nu, "U0", 1.0 / w, w * w, scale=0.0)
    return lhs.deviation(rhs)
