"""Shared helpers for the test suite: reproducible random curves, divisors,
exponent data and trace-free matrices."""

import hashlib

import numpy as np
import pytest

from ellconn.curve import make_curve, random_divisor
from ellconn.fuchs import EigenData


def rng_for(name: str, salt: int = 0) -> np.random.Generator:
    # stable across processes (the builtin hash is salted per run)
    digest = hashlib.sha256(f"{name}:{salt}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


def random_curve(rng, spread: float = 1.0):
    """Curve parameter kept away from the degenerate values 0 and 1."""
    while True:
        lam = spread * (rng.standard_normal() + 1j * rng.standard_normal()) + 1.5
        if min(abs(lam), abs(lam - 1.0)) > 0.3:
            return make_curve(lam)


def random_instance(rng, n: int):
    curve = random_curve(rng)
    D = random_divisor(curve, n, rng)
    nu = EigenData.random_fuchs(n, rng)
    return curve, D, nu


def random_tracefree(rng, n: int):
    out = []
    for _ in range(n):
        a, b, g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        out.append(np.array([[a, b], [g, -a]]))
    return out


def complex_vec(rng, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def nonzero_vec(rng, n: int, floor: float = 0.15) -> np.ndarray:
    w = complex_vec(rng, n)
    small = np.abs(w) < floor
    if np.any(small):
        w[small] = floor * w[small] / np.abs(w[small])
    return w


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
