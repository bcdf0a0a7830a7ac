"""Independent reference computations used by the test-suite.

Nothing here imports the code paths it is used to check.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def enumerate_matchings(n: int):
    """Yield every partial matching of {0..n-1} as a tuple of pairs."""

    def rec(free: tuple[int, ...]):
        if not free:
            yield ()
            return
        first, rest = free[0], free[1:]
        # first vertex stays a monomer
        yield from rec(rest)
        for k, partner in enumerate(rest):
            for tail in rec(rest[:k] + rest[k + 1 :]):
                yield ((first, partner),) + tail

    yield from rec(tuple(range(n)))


def brute_force_partition(a: float, b: float, n: int) -> float:
    z = 0.0
    for d in enumerate_matchings(n):
        m = (n - 2 * len(d)) / n
        z += n ** (-len(d)) * math.exp(n * (0.5 * a * m * m + b * m))
    return z


def bisect_root(a: float, b: float, lo: float = 1e-300, hi: float = 1.0 - 1e-15) -> float:
    """Plain bisection on exp(a*y+b)*sqrt(1-y) - y over a sign-change bracket."""

    def r(y):
        return math.exp(a * y + b) * math.sqrt(1.0 - y) - y

    r_lo = r(lo)
    for _ in range(3000):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if (r(mid) > 0) == (r_lo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def central_weights(order: int, accuracy: int = 10) -> tuple[tuple[int, float], ...]:
    """Exact central-difference weights for the given derivative order and accuracy."""
    half = (order + 1) // 2 - 1 + accuracy // 2
    offsets = list(range(-half, half + 1))
    size = len(offsets)
    # Solve sum_k w_k o_k^r = r! delta_{r,order} in exact rational arithmetic.
    mat = [[Fraction(o) ** r for o in offsets] + [Fraction(math.factorial(order) if r == order else 0)] for r in range(size)]
    for col in range(size):
        piv = next(r for r in range(col, size) if mat[r][col] != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        for r in range(size):
            if r != col and mat[r][col] != 0:
                f = mat[r][col] / mat[col][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[col])]
    weights = [mat[r][size] / mat[r][r] for r in range(size)]
    return tuple((o, float(w)) for o, w in zip(offsets, weights) if w != 0)


def mixed_partial(f, x: float, y: float, i: int, j: int, h: float = 0.05) -> float:
    """``d^(i+j) f / dx^i dy^j`` by tensor-product high-order central differences."""
    wx = central_weights(i) if i else ((0, 1.0),)
    wy = central_weights(j) if j else ((0, 1.0),)
    total = math.fsum(cx * cy * f(x + ox * h, y + oy * h) for ox, cx in wx for oy, cy in wy)
    return total / h ** (i + j)


def gauss_moment_by_pairings(c11: float, c12: float, c22: float, i: int, j: int) -> float:
    """Isserlis: sum over perfect pairings of i X's and j Y's of products of covariances."""
    labels = "x" * i + "y" * j
    cov = {("x", "x"): c11, ("x", "y"): c12, ("y", "x"): c12, ("y", "y"): c22}

    def rec(items: str) -> float:
        if not items:
            return 1.0
        head, rest = items[0], items[1:]
        return sum(cov[head, rest[k]] * rec(rest[:k] + rest[k + 1 :]) for k in range(len(rest)))

    if (i + j) % 2:
        return 0.0
    return rec(labels)
