"""Exact finite-N thermodynamics on the complete graph.

All configurations with ``k`` dimers share the monomer density
``m = (N - 2k)/N``, and there are ``N! / ((N-2k)! k! 2^k)`` of them, so the
partition function is a sum of ``N//2 + 1`` terms evaluated in log space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from mdfs.laplace import corrections
from mdfs.params import ModelParams


def log_matching_count(n: int, k: int) -> float:
    """Log of the number of k-dimer matchings of the complete graph on n vertices."""
    if k < 0 or 2 * k > n:
        raise ValueError(f"need 0 <= 2k <= n, got n={n}, k={k}")
    return float(gammaln(n + 1) - gammaln(n - 2 * k + 1) - gammaln(k + 1) - k * np.log(2.0))


@dataclass(frozen=True)
class ExactObservables:
    n: int
    log_z: float
    pressure: float
    monomer_mean: float
    monomer_second: float
    susceptibility: float


def log_weights(p: ModelParams, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Monomer densities and unnormalized log Gibbs weights for k = 0..n//2."""
    k = np.arange(n // 2 + 1, dtype=float)
    m = (n - 2.0 * k) / n
    logw = (
        gammaln(n + 1.0)
        - gammaln(n - 2.0 * k + 1.0)
        - gammaln(k + 1.0)
        - k * np.log(2.0)
        - k * np.log(n)
        + n * (0.5 * p.a * m * m + p.b * m)
    )
    return m, logw


def observables(p: ModelParams, n: int) -> ExactObservables:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if p.a < 0:
        raise ValueError(f"a must be >= 0, got {p.a!r}")
    m, logw = log_weights(p, n)
    log_z = float(logsumexp(logw))
    w = np.exp(logw - log_z)
    mean = float(np.dot(w, m))
    var = float(np.dot(w, (m - mean) ** 2))
    return ExactObservables(
        n=n,
        log_z=log_z,
        pressure=log_z / n,
        monomer_mean=mean,
        monomer_second=var + mean * mean,
        susceptibility=n * var,
    )


@dataclass(frozen=True)
class Extrapolation:
    n: tuple[int, ...]
    r_pressure: tuple[float, ...]
    r_monomer: tuple[float, ...]
    r_susceptibility: tuple[float, ...]
    Lambda_hat: float
    Lambda1_hat: float
    Lambda2_hat: float
    slopes: tuple[float, float, float]


def richardson(n: Sequence[float], r: Sequence[float]) -> float:
    """Limit of ``r_N = L + c/N`` from the last two sizes; equals ``2 r_2N - r_N`` for doubling."""
    n1, n2 = n[-2], n[-1]
    return (n2 * r[-1] - n1 * r[-2]) / (n2 - n1)


def decay_slope(n: Sequence[float], residuals: Sequence[float]) -> float:
    """Least-squares slope of ``log|residual|`` against ``log N``."""
    return float(np.polyfit(np.log(n), np.log(np.abs(residuals)), 1)[0])


def _limit_for_slope(n: np.ndarray, r: np.ndarray) -> float:
    # Quadratic fit in 1/N over the last three sizes; the two-point Richardson
    # value leaves an O(1/N^2) bias that would distort the tail of the slope fit.
    if len(n) < 3:
        return richardson(n, r)
    return float(np.polyfit(1.0 / n[-3:], r[-3:], 2)[-1])


def correction_extrapolation(
    p: ModelParams,
    n_list: Sequence[int],
    limits: tuple[float, float, float] | None = None,
) -> Extrapolation:
    """Estimate the ``1/N`` coefficients from exact finite-N data.

    ``limits`` are ``(p*, m*, chi*)``; when omitted they come from
    :func:`mdfs.laplace.corrections`.
    """
    sizes = list(n_list)
    if len(sizes) < 4 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("n_list must be strictly increasing with at least 4 entries")
    if limits is None:
        cs = corrections(p)
        limits = (cs.p_star, cs.m_star, cs.chi_star)
    n = np.asarray(sizes, dtype=float)
    obs = [observables(p, size) for size in sizes]
    rs = [
        n * (np.array([o.pressure for o in obs]) - limits[0]),
        n * (np.array([o.monomer_mean for o in obs]) - limits[1]),
        n * (np.array([o.susceptibility for o in obs]) - limits[2]),
    ]
    hats = [richardson(n, r) for r in rs]
    slopes = tuple(decay_slope(n, r - _limit_for_slope(n, r)) for r in rs)
    return Extrapolation(
        n=tuple(sizes),
        r_pressure=tuple(rs[0]),
        r_monomer=tuple(rs[1]),
        r_susceptibility=tuple(rs[2]),
        Lambda_hat=hats[0],
        Lambda1_hat=hats[1],
        Lambda2_hat=hats[2],
        slopes=slopes,  # type: ignore[arg-type]
    )
