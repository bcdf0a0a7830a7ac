"""Direct numerical checks of the Gaussian-integral representation.

``Z_N = N sqrt(a) / (2 pi) \\iint Phi(x, y)^N dx dy`` is integrated over a
truncated rectangle by globally adaptive subdivision with a tensor
Gauss-Legendre rule; the error estimate per cell is the difference between two
rule orders.  The independent Gaussian-moment oracle lives here as well.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from mdfs.params import ModelParams, solve_self_consistency

_HIGH, _LOW = 24, 16
_GL = {order: np.polynomial.legendre.leggauss(order) for order in (_HIGH, _LOW)}
# log-drop of |Phi|^N below its peak at which the rectangle is cut
_TAIL_LOG = 45.0


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    est_error: float
    evaluations: int


def _log_abs_phi(p: ModelParams, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = x + np.exp(p.a * y + p.b)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(s)) - 0.5 * x * x - 0.5 * p.a * y * y, np.sign(s)


def _scaled_integrand(p: ModelParams, n: int, x: np.ndarray, y: np.ndarray, log_peak: float) -> np.ndarray:
    log_abs, sign = _log_abs_phi(p, x, y)
    return sign**n * np.exp(n * (log_abs - log_peak))


def _outer_radius(bound, level: float) -> float:
    """Smallest doubling radius R with ``bound(r) < level`` for every r >= R."""
    r = 1.0
    while bound(r) >= level:
        r *= 2.0
    return r


def integration_box(p: ModelParams, n: int, scale: float = 1.0) -> tuple[float, float, float, float]:
    """Rectangle outside which ``|Phi|^N`` is below ``exp(-45)`` of its peak."""
    log_peak = solve_self_consistency(p).p_star
    cut = log_peak - _TAIL_LOG / n
    # Coarse radii from envelopes of log|Phi| that decrease beyond their argmax:
    # |Phi| <= (|x| + e^{b + a/2}) e^{-x^2/2} and |Phi| <= 2 max(1, e^{ay+b}) e^{-ay^2/2}.
    c = math.exp(p.b + 0.5 * p.a)
    rx = _outer_radius(lambda r: math.log(r + c) - 0.5 * r * r if r > 1.0 else math.inf, cut)
    ry = _outer_radius(
        lambda r: math.log(2.0) + max(0.0, p.a * r + p.b) - 0.5 * p.a * r * r if r > 1.0 + abs(p.b) else math.inf,
        cut,
    )
    # Shrink onto the actual super-level set.
    xs = np.linspace(-rx, rx, 801)
    ys = np.linspace(-ry, ry, 801)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    keep = _log_abs_phi(p, X, Y)[0] >= cut
    x_in, y_in = xs[keep.any(axis=1)], ys[keep.any(axis=0)]
    pad_x, pad_y = 3 * (xs[1] - xs[0]), 3 * (ys[1] - ys[0])
    x0, x1 = max(x_in[0] - pad_x, -rx), min(x_in[-1] + pad_x, rx)
    y0, y1 = max(y_in[0] - pad_y, -ry), min(y_in[-1] + pad_y, ry)
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    hx, hy = 0.5 * (x1 - x0) * scale, 0.5 * (y1 - y0) * scale
    return cx - hx, cx + hx, cy - hy, cy + hy


def _cell(p: ModelParams, n: int, box: tuple[float, float, float, float], log_peak: float) -> tuple[float, float]:
    x0, x1, y0, y1 = box
    out = []
    for order in (_HIGH, _LOW):
        t, w = _GL[order]
        xs = 0.5 * (x1 - x0) * t + 0.5 * (x1 + x0)
        ys = 0.5 * (y1 - y0) * t + 0.5 * (y1 + y0)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        f = _scaled_integrand(p, n, X, Y, log_peak)
        out.append(0.25 * (x1 - x0) * (y1 - y0) * float(w @ f @ w))
    return out[0], abs(out[0] - out[1])


def integral_partition(
    p: ModelParams,
    n: int,
    rtol: float = 1e-12,
    max_cells: int = 20000,
    box_scale: float = 1.0,
) -> QuadratureResult:
    """Partition function from the two-dimensional integral representation.

    Odd ``n`` integrates the signed ``Phi^N`` as is.  Raises
    :class:`QuadratureError` if the cell budget runs out before the summed
    error estimate drops below ``rtol`` times the value.
    """
    if p.a <= 0:
        raise ValueError("the integral representation needs a > 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    log_peak = solve_self_consistency(p).p_star
    root = integration_box(p, n, box_scale)
    value, err = _cell(p, n, root, log_peak)
    # heap of (-error, insertion id, box, value, error)
    heap = [(-err, 0, root, value, err)]
    total, total_err, counter = value, err, 1
    evals = _HIGH**2 + _LOW**2
    while total_err > rtol * abs(total):
        if counter >= max_cells:
            raise QuadratureError(f"no convergence after {counter} cells: error {total_err:.3e} on {total:.6e}")
        _, _, box, v, e = heapq.heappop(heap)
        total -= v
        total_err -= e
        x0, x1, y0, y1 = box
        xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        for child in ((x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)):
            cv, ce = _cell(p, n, child, log_peak)
            evals += _HIGH**2 + _LOW**2
            counter += 1
            heapq.heappush(heap, (-ce, counter, child, cv, ce))
            total += cv
            total_err += ce
    # Re-sum in a fixed order so the result does not depend on heap history.
    cells = sorted(heap, key=lambda c: c[2])
    total = math.fsum(c[3] for c in cells)
    total_err = math.fsum(c[4] for c in cells)
    prefactor = n * math.sqrt(p.a) / (2.0 * math.pi)
    scale = prefactor * math.exp(n * log_peak)
    return QuadratureResult(value=scale * total, est_error=scale * total_err, evaluations=evals)


def _check_cov(cov) -> np.ndarray:
    c = np.asarray(cov, dtype=float)
    if c.shape != (2, 2) or not np.allclose(c, c.T):
        raise ValueError("covariance must be a symmetric 2x2 matrix")
    if c[0, 0] <= 0 or np.linalg.det(c) <= 0:
        raise ValueError("covariance must be positive definite")
    return c


def gaussian_moment_oracle(cov, i: int, j: int, method: str = "recursion") -> float:
    """``E[X^i Y^j]`` for the centred Gaussian with covariance ``cov``.

    ``method="recursion"`` uses Stein's identity
    ``E[X^i Y^j] = (i-1) c11 E[X^(i-2) Y^j] + j c12 E[X^(i-1) Y^(j-1)]``;
    ``method="hermite"`` uses a product Gauss-Hermite rule through the
    Cholesky factor, exact for total degree up to 19.
    """
    c = _check_cov(cov)
    if i < 0 or j < 0:
        raise ValueError("moment indices must be non-negative")
    if (i + j) % 2:
        return 0.0
    if method == "recursion":
        return _moment_recursion(c[0, 0], c[0, 1], c[1, 1], i, j)
    if method == "hermite":
        z, w = np.polynomial.hermite_e.hermegauss(10)
        w = w / math.sqrt(2.0 * math.pi)
        chol = np.linalg.cholesky(c)
        Z1, Z2 = np.meshgrid(z, z, indexing="ij")
        X = chol[0, 0] * Z1
        Y = chol[1, 0] * Z1 + chol[1, 1] * Z2
        return float(w @ (X**i * Y**j) @ w)
    raise ValueError(f"unknown method {method!r}")


def _moment_recursion(c11: float, c12: float, c22: float, i: int, j: int) -> float:
    memo: dict[tuple[int, int], float] = {}

    def m(i: int, j: int) -> float:
        if i < 0 or j < 0 or (i + j) % 2:
            return 0.0
        if i == 0 and j == 0:
            return 1.0
        if (i, j) not in memo:
            if i > 0:
                memo[i, j] = (i - 1) * c11 * m(i - 2, j) + j * c12 * m(i - 1, j - 1)
            else:
                memo[i, j] = (j - 1) * c22 * m(i, j - 2)
        return memo[i, j]

    return m(i, j)
