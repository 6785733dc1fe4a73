"""Parabolic-stability combinatorics: walls, chambers, weight involutions,
elementary-transformation eigenvalue calculus, genericity predicates, and the
closed-form data of the unstable locus and of the 4-punctured-sphere exponent
match.

Wall enumeration is bounded to |d| <= n throughout: a wall value 1 - 2d + S
with |S| < n can only vanish when |1 - 2d| < n + 1, i.e. |d| <= n covers every
wall meeting the weight cube (the bound is derived here, not quoted).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvenN, ExponentialBlowup, IntegerNu, OddCardinality
from .fuchs import EigenData

WEIGHT_MARGIN = 1e-12
INTEGER_TOL = 1e-8
ENUM_LIMIT = 20


@dataclass(frozen=True)
class WeightVector:
    """Parabolic weights mu in the open cube (0, 1)^n."""

    mu: np.ndarray

    def __init__(self, mu) -> None:
        m = np.asarray(mu, dtype=float).ravel()
        if m.size and not np.all((m > WEIGHT_MARGIN) & (m < 1.0 - WEIGHT_MARGIN)):
            raise ValueError("weights must lie strictly inside (0, 1)")
        object.__setattr__(self, "mu", m)

    @property
    def n(self) -> int:
        return self.mu.size


@dataclass(frozen=True)
class WallSpec:
    """Wall H(d, I): 1 - 2d + sum_{k not in I} mu_k - sum_{k in I} mu_k = 0."""

    d: int
    I: frozenset[int]

    def value(self, mu: WeightVector) -> float:
        signs = np.ones(mu.n)
        for k in self.I:
            signs[k - 1] = -1.0
        return 1.0 - 2.0 * self.d + float(np.dot(signs, mu.mu))


def all_walls(n: int, dmax: int | None = None):
    """Every wall (d, I) with |d| <= dmax (default n); 2^n I-subsets."""
    if n > ENUM_LIMIT:
        raise ExponentialBlowup(f"wall enumeration capped at n <= {ENUM_LIMIT}")
    dmax = n if dmax is None else dmax
    for mask in range(2 ** n):
        I = frozenset(k + 1 for k in range(n) if mask >> k & 1)
        for d in range(-dmax, dmax + 1):
            yield WallSpec(d, I)


def stab_value(degE: int, degL: int, onL, mu: WeightVector) -> float:
    """degE - 2 degL + sum_{k not on L} mu_k - sum_{k on L} mu_k."""
    onL = set(onL)
    signs = np.array([-1.0 if (k + 1) in onL else 1.0 for k in range(mu.n)])
    return degE - 2 * degL + float(np.dot(signs, mu.mu))


def _require_even(I) -> frozenset[int]:
    I = frozenset(int(k) for k in I)
    if len(I) % 2 != 0:
        raise OddCardinality(f"|I| = {len(I)} must be even")
    return I


def chamber_membership(mu: WeightVector, I) -> bool:
    """mu lies in the chamber c_I: sum_{not I} mu - sum_{I} mu + |I| < 1 strictly."""
    I = _require_even(I)
    signs = np.array([-1.0 if (k + 1) in I else 1.0 for k in range(mu.n)])
    return float(np.dot(signs, mu.mu)) + len(I) < 1.0 - WEIGHT_MARGIN


def phi_I(mu: WeightVector, I) -> WeightVector:
    """Weight involution mu_i -> 1 - mu_i on I (|I| even); maps c onto c_I."""
    I = _require_even(I)
    out = mu.mu.copy()
    for k in I:
        out[k - 1] = 1.0 - out[k - 1]
    return WeightVector(out)


@dataclass(frozen=True)
class SignVector:
    eps: tuple[int, ...]  # entries +1 / -1

    @staticmethod
    def of(seq) -> "SignVector":
        out = []
        for e in seq:
            if e in (1, +1, "+"):
                out.append(1)
            elif e in (-1, "-"):
                out.append(-1)
            else:
                raise ValueError(f"sign entry {e!r}")
        return SignVector(tuple(out))


def elm_eigenvalues(nu: EigenData, I, eps: SignVector) -> EigenData:
    """Exponent transport under the degree-shifting modification on I.

    For k in I with chosen sign eps_k (delta_k the other sign):
        out^{delta_k} = nu^{eps_k} - 1/2,   out^{eps_k} = nu^{delta_k} + 1/2;
    unchanged off I.  The total exponent sum is preserved and the map is an
    involution for fixed (I, eps).
    """
    I = _require_even(I)
    if len(eps.eps) != nu.n:
        raise ValueError("sign vector length must match the number of poles")
    pairs = []
    for k in range(nu.n):
        np_, nm = nu.pairs[k]
        if (k + 1) not in I:
            pairs.append((np_, nm))
        elif eps.eps[k] == 1:
            # eps = +, delta = -: minus slot gets nu^+ - 1/2, plus slot nu^- + 1/2
            pairs.append((nm + 0.5, np_ - 0.5))
        else:
            pairs.append((nm - 0.5, np_ + 0.5))
    return EigenData.of(pairs)


def sign_sums(nu: EigenData) -> np.ndarray:
    """All 2^n sums nu_1^{e_1} + ... + nu_n^{e_n}."""
    if nu.n > ENUM_LIMIT:
        raise ExponentialBlowup(f"sign-sum enumeration capped at n <= {ENUM_LIMIT}")
    sums = np.zeros(1, dtype=complex)
    for a, b in nu.pairs:
        sums = np.concatenate([sums + a, sums + b])
    return sums


def is_integer(z: complex, tol: float = INTEGER_TOL) -> bool:
    return abs(z.imag) <= tol and abs(z.real - round(z.real)) <= tol


@dataclass(frozen=True)
class GenericityReport:
    fuchs_ok: bool
    no_integer_sums: bool
    distinct_pairs: bool
    strong_condition: bool

    @property
    def all_ok(self) -> bool:
        return self.fuchs_ok and self.no_integer_sums and self.distinct_pairs \
            and self.strong_condition


def genericity_report(nu: EigenData) -> GenericityReport:
    """The three genericity conditions plus the Fuchs relation.

    no_integer_sums: no sign choice makes the exponent sum an integer (this is
    what rules out reducible systems); distinct_pairs: nu_k^+ != nu_k^-;
    strong_condition: nu_k = nu_k^+ - nu_k^- avoids {0, 1, -1}, so every
    modified exponent set keeps distinguished eigenspaces.
    """
    fuchs_ok = nu.fuchs_defect() <= 1e-9
    sums = sign_sums(nu)
    no_int = not any(is_integer(complex(s)) for s in sums)
    distinct = all(abs(a - b) > INTEGER_TOL for a, b in nu.pairs)
    strong = all(min(abs(r), abs(r - 1.0), abs(r + 1.0)) > INTEGER_TOL
                 for r in nu.reduced)
    return GenericityReport(fuchs_ok, no_int, distinct, strong)


def zn_directions(nu: EigenData) -> tuple[np.ndarray, np.ndarray]:
    """The forced direction pair over t_1 for the fully-unstable locus (n odd).

    p_1^+ = (1 : 1) and
    p_1^- = ((n+1)/2 + sum_{j >= 2} (nu_j^- + nu_j^+) : (n+1)/2 + sum_j nu_j^-).
    """
    n = nu.n
    if n % 2 == 0:
        raise EvenN("the fully-unstable locus is empty for an even number of poles")
    minus = nu.minus
    plus = nu.plus
    first = (n + 1) / 2.0 + np.sum(minus[1:] + plus[1:])
    second = (n + 1) / 2.0 + np.sum(minus)
    return (np.array([1.0, 1.0], dtype=complex),
            np.array([first, second], dtype=complex))


def lame_theta(nu_plus: complex) -> tuple[tuple[complex, complex], ...]:
    """Exponents over the 4-punctured sphere matched to a one-pole exponent nu.

    Returns ((1/4, -1/4), (1/4, -1/4), (1/4, -1/4), (theta+, theta-)) with
    theta+ = nu/2 - 1/4 and theta- = -theta+ - 1.
    """
    nu_plus = complex(nu_plus)
    if is_integer(nu_plus):
        raise IntegerNu(f"exponent {nu_plus} is an integer")
    tp = nu_plus / 2.0 - 0.25
    tm = -tp - 1.0
    quarter = (0.25 + 0.0j, -0.25 + 0.0j)
    return (quarter, quarter, quarter, (tp, tm))
