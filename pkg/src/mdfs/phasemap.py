"""Curves in the (J, h) plane where the finite-size corrections change sign.

``sign_change_curve`` locates zeros of the analytic coefficients
(Lambda, Lambda', Lambda'').  ``numeric_monotonicity_curve`` locates the
places where the exact finite-N sequence switches between approaching its
limit from above and from below, using forward differences ``q_2N - q_N``.
Since ``q_2N - q_N = -Lambda_q / (2N) + O(N^-2)``, both curves should overlap.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from mdfs.exact import observables
from mdfs.laplace import corrections
from mdfs.params import A_CRITICAL, CoexistenceError, CriticalPointError, NoRootError, field_of_root, from_jh

log = logging.getLogger(__name__)

QUANTITIES = ("pressure", "monomer", "susceptibility")
_CORRECTION_FIELD = {"pressure": "Lambda", "monomer": "Lambda1", "susceptibility": "Lambda2"}
_OBSERVABLE_FIELD = {"pressure": "pressure", "monomer": "monomer_mean", "susceptibility": "susceptibility"}
_EXPECTED_ERRORS = (CoexistenceError, CriticalPointError, NoRootError)
# y* moving by more than this across a final bracket means a first-order jump
_JUMP_TOL = 1e-3


@dataclass(frozen=True)
class CurvePoint:
    j: float
    h: float
    quantity: str
    method: str
    bracket_width: float


def max_workers() -> int:
    env = os.environ.get("MDFS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def critical_point_jh() -> tuple[float, float]:
    """Critical point in the (J, h) parameterization."""
    y_c = 2.0 - math.sqrt(2.0)
    b_c = field_of_root(A_CRITICAL, y_c)
    j_c = A_CRITICAL / 2.0
    return j_c, b_c + j_c


def pressure_zero_h(j: float) -> float | None:
    """Closed-form h where Lambda = 0, i.e. y* = 1/(2a).

    Only meaningful where that root is the selected maximizer; returns None
    for ``a <= 1/2`` where no such root exists.
    """
    a = 2.0 * j
    if a <= 0.5:
        return None
    return field_of_root(a, 1.0 / (2.0 * a)) + j


def _check_quantity(quantity: str) -> None:
    if quantity not in QUANTITIES:
        raise ValueError(f"quantity must be one of {QUANTITIES}, got {quantity!r}")


def _scan_grid(h_bracket: tuple[float, float], step: float) -> np.ndarray:
    lo, hi = h_bracket
    if not hi > lo:
        raise ValueError("h_bracket must be increasing")
    n = max(2, int(math.ceil((hi - lo) / step)) + 1)
    return np.linspace(lo, hi, n)


def _analytic_value(quantity: str, j: float, h: float) -> tuple[float, float] | None:
    """(correction, y*) or None where the corrections are undefined."""
    try:
        cs = corrections(from_jh(j, h))
    except _EXPECTED_ERRORS:
        return None
    return getattr(cs, _CORRECTION_FIELD[quantity]), cs.m_star


def _sign(v: float) -> int:
    return int(v > 0) - int(v < 0)


def _analytic_for_j(quantity: str, j: float, h_bracket, tol: float, scan_step: float) -> list[CurvePoint]:
    hs = _scan_grid(h_bracket, scan_step)
    vals = [_analytic_value(quantity, j, h) for h in hs]
    out = []
    for k in range(len(hs) - 1):
        left, right = vals[k], vals[k + 1]
        if left is None or right is None or _sign(left[0]) * _sign(right[0]) >= 0:
            continue
        lo, hi = float(hs[k]), float(hs[k + 1])
        s_lo = _sign(left[0])
        y_lo, y_hi = left[1], right[1]
        failed = False
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            v = _analytic_value(quantity, j, mid)
            if v is None:
                log.warning("%s: J=%.6g bisection hit an undefined point at h=%.6g", quantity, j, mid)
                failed = True
                break
            if v[0] == 0.0:
                lo = hi = mid
                break
            if _sign(v[0]) == s_lo:
                lo, y_lo = mid, v[1]
            else:
                hi, y_hi = mid, v[1]
        if failed:
            continue
        if abs(y_hi - y_lo) > _JUMP_TOL:
            log.info("%s: J=%.6g sign change at h~%.6g is a coexistence jump, skipped", quantity, j, lo)
            continue
        out.append(CurvePoint(j, 0.5 * (lo + hi), quantity, "analytic", hi - lo))
    if not out:
        log.info("%s: no analytic sign change for J=%.6g in %s", quantity, j, h_bracket)
    return out


def _ordered_map(fn: Callable[[float], list[CurvePoint]], j_grid: Iterable[float]) -> list[CurvePoint]:
    js = [float(j) for j in j_grid]
    if any(j <= 0 for j in js):
        raise ValueError("j_grid must be positive")
    workers = min(max_workers(), len(js)) or 1
    if workers == 1:
        results = [fn(j) for j in js]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, js))
    return [pt for chunk in results for pt in chunk]


def sign_change_curve(
    quantity: str,
    j_grid: Sequence[float],
    h_bracket: tuple[float, float] = (-3.0, 1.5),
    tol: float = 1e-8,
    scan_step: float = 0.05,
) -> list[CurvePoint]:
    """Zeros in h of Lambda, Lambda' or Lambda'' for each J of ``j_grid``.

    Each J is scanned on a grid of spacing ``scan_step`` and every sign change
    is bisected to width ``tol``.  Points where the corrections are undefined
    (critical point, coexistence) and first-order jumps are logged and skipped.
    """
    _check_quantity(quantity)
    if tol <= 0:
        raise ValueError("tol must be positive")
    return _ordered_map(lambda j: _analytic_for_j(quantity, j, h_bracket, tol, scan_step), j_grid)


def finite_size_differences(quantity: str, j: float, h: float, n_list: Sequence[int]) -> np.ndarray:
    """Consecutive differences ``q_{n[k+1]} - q_{n[k]}`` of an exact observable."""
    p = from_jh(j, h)
    q = np.array([getattr(observables(p, n), _OBSERVABLE_FIELD[quantity]) for n in n_list])
    return np.diff(q)


def numeric_sign(quantity: str, j: float, h: float, n_list: Sequence[int]) -> int:
    """Common sign of all consecutive differences, or 0 when they disagree."""
    signs = {_sign(d) for d in finite_size_differences(quantity, j, h, n_list)}
    return signs.pop() if len(signs) == 1 else 0


def _numeric_for_j(quantity: str, j: float, h_bracket, n_list, tol: float, scan_step: float) -> list[CurvePoint]:
    hs = _scan_grid(h_bracket, scan_step)
    signs = [numeric_sign(quantity, j, float(h), n_list) for h in hs]
    determined = [k for k, s in enumerate(signs) if s != 0]
    out = []
    for k0, k1 in zip(determined, determined[1:]):
        if signs[k0] == signs[k1]:
            continue
        lo, hi = float(hs[k0]), float(hs[k1])
        s_lo = signs[k0]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            s = numeric_sign(quantity, j, mid, n_list)
            if s == 0:
                # Sizes disagree: the crossing is resolved only to this width.
                break
            if s == s_lo:
                lo = mid
            else:
                hi = mid
        if hi - lo > scan_step:
            log.warning("%s: J=%.6g crossing near h=%.6g unresolved (sizes disagree), skipped", quantity, j, lo)
            continue
        out.append(CurvePoint(j, 0.5 * (lo + hi), quantity, "numeric", hi - lo))
    if not out:
        log.info("%s: no numeric monotonicity change for J=%.6g in %s", quantity, j, h_bracket)
    return out


def numeric_monotonicity_curve(
    quantity: str,
    j_grid: Sequence[float],
    h_bracket: tuple[float, float] = (-3.0, 1.5),
    n_list: Sequence[int] = (256, 512, 1024),
    tol: float = 1e-6,
    scan_step: float = 0.05,
) -> list[CurvePoint]:
    """h-locations where the exact finite-N sequence changes monotonicity.

    The sign at a given h is the common sign of all consecutive forward
    differences over ``n_list``; bisection stops early when the sizes
    disagree, and the reported ``bracket_width`` records the resolution.
    """
    _check_quantity(quantity)
    sizes = list(n_list)
    if len(sizes) < 3 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("n_list needs at least 3 strictly increasing sizes")
    if tol <= 0:
        raise ValueError("tol must be positive")
    return _ordered_map(lambda j: _numeric_for_j(quantity, j, h_bracket, sizes, tol, scan_step), j_grid)
