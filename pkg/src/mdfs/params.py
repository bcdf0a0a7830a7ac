"""Model parameters and the self-consistency equation.

The monomer-dimer model on the complete graph is parameterized by an
attraction strength ``a`` and a monomer field ``b``.  In the thermodynamic
limit the monomer density ``y`` solves

    exp(a*y + b) = y / sqrt(1 - y),

and ``x = sqrt(1 - y)``.  For ``a`` above the critical value there can be up to
three solutions; the physical one maximizes ``F(sqrt(1 - y), y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

A_CRITICAL = (3.0 + 2.0 * math.sqrt(2.0)) / 2.0

# Lower end can sit essentially at zero: r(y) has no singularity there.
_Y_LO = 1e-300
_Y_HI = 1.0 - 1e-15
_TIE_TOL = 1e-10
_NARROW_BAND = 1e-8
_SCAN_CELLS = 1000


class NoRootError(RuntimeError):
    """Bracketing found no sign change of the self-consistency residual."""


class CoexistenceError(ValueError):
    """Two stationary points give the same pressure (coexistence line)."""

    def __init__(self, a: float, b: float, roots: tuple[float, ...]):
        self.a, self.b, self.roots = a, b, roots
        super().__init__(f"coexistence tie at a={a!r}, b={b!r}: roots {roots}")


class CriticalPointError(ValueError):
    """The Hessian determinant vanishes; finite-size corrections diverge."""

    def __init__(self, a: float, b: float, det: float):
        self.a, self.b, self.det = a, b, det
        super().__init__(f"too close to the critical point at a={a!r}, b={b!r} (D={det:.3e})")


@dataclass(frozen=True)
class ModelParams:
    a: float
    b: float

    @property
    def j(self) -> float:
        return self.a / 2.0

    @property
    def h(self) -> float:
        return self.b + self.a / 2.0


def from_jh(j: float, h: float) -> ModelParams:
    """Convert the (J, h) parameterization into (a, b) = (2J, h - J)."""
    return ModelParams(2.0 * j, h - j)


def critical_point() -> tuple[float, float]:
    """Return ``(a_c, y_c)``, the point where the three-root band opens."""
    a_c = A_CRITICAL
    return a_c, (2.0 * a_c + 1.0) / (4.0 * a_c)


def field_of_root(a: float, y: float) -> float:
    """Value of ``b`` for which ``y`` solves the self-consistency equation."""
    return math.log(y) - 0.5 * math.log1p(-y) - a * y


def stationary_bounds(a: float) -> tuple[float, float] | None:
    """Turning points ``(y_-, y_+)`` of ``b(y)``, or None when ``a < a_c``."""
    if a <= 0:
        raise ValueError(f"a must be positive, got {a!r}")
    disc = 4.0 * a * a - 12.0 * a + 1.0
    if a < A_CRITICAL:
        return None
    # Rounding can make the discriminant slightly negative at a == a_c.
    root = math.sqrt(max(disc, 0.0))
    return (2.0 * a + 1.0 - root) / (4.0 * a), (2.0 * a + 1.0 + root) / (4.0 * a)


def residual(p: ModelParams, y: float) -> float:
    return math.exp(p.a * y + p.b) * math.sqrt(1.0 - y) - y


def _residual_and_slope(p: ModelParams, y: float) -> tuple[float, float]:
    e = math.exp(p.a * y + p.b)
    s = math.sqrt(1.0 - y)
    return e * s - y, e * (p.a * s - 0.5 / s) - 1.0


def _safe_newton(p: ModelParams, lo: float, hi: float, r_lo: float) -> float:
    """Root of the residual on [lo, hi] given a sign change.

    Newton steps are accepted only while they stay inside the current bracket
    and shrink it at least as fast as bisection would.
    """
    y = 0.5 * (lo + hi)
    width_prev = hi - lo
    for _ in range(400):
        r, dr = _residual_and_slope(p, y)
        if r == 0.0:
            return y
        if (r > 0) == (r_lo > 0):
            lo, r_lo = y, r
        else:
            hi = y
        width = hi - lo
        if width <= 4 * math.ulp(max(abs(lo), abs(hi))):
            break
        step_ok = dr != 0.0
        if step_ok:
            y_new = y - r / dr
            step_ok = lo < y_new < hi and abs(y_new - y) < 0.5 * width_prev
        width_prev = width
        y = y_new if step_ok else 0.5 * (lo + hi)
    # Pick the endpoint with the smaller residual.
    best = min((lo, hi, y), key=lambda t: abs(residual(p, t)))
    return best


@dataclass(frozen=True)
class FixedPoint:
    roots: tuple[float, ...]
    y_star: float
    x_star: float
    p_star: float


def _brackets(p: ModelParams) -> list[tuple[float, float]]:
    bounds = stationary_bounds(p.a)
    if bounds is None:
        return [(_Y_LO, _Y_HI)]
    y_minus, y_plus = bounds
    if y_plus - y_minus < _NARROW_BAND:
        # Tangency region: let a dense scan find the sign changes.
        grid = [_Y_LO] + [i / _SCAN_CELLS for i in range(1, _SCAN_CELLS)] + [_Y_HI]
        return list(zip(grid[:-1], grid[1:]))
    return [(_Y_LO, y_minus), (y_minus, y_plus), (y_plus, _Y_HI)]


def pressure_at_root(p: ModelParams, y: float) -> float:
    """``F(sqrt(1 - y), y)``."""
    x = math.sqrt(1.0 - y)
    return -0.5 * x * x - 0.5 * p.a * y * y + math.log(x + math.exp(p.a * y + p.b))


def solve_self_consistency(p: ModelParams, tol: float = 1e-12) -> FixedPoint:
    """Find every stationary point and select the global maximizer of F.

    Raises :class:`NoRootError` if no bracket shows a sign change and
    :class:`CoexistenceError` if two roots give the same pressure within 1e-10.
    """
    if p.a <= 0:
        raise ValueError(f"a must be positive, got {p.a!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    roots: list[float] = []
    for lo, hi in _brackets(p):
        r_lo, r_hi = residual(p, lo), residual(p, hi)
        if r_lo == 0.0:
            y = lo
        elif r_hi == 0.0:
            y = hi
        elif (r_lo > 0) != (r_hi > 0):
            y = _safe_newton(p, lo, hi, r_lo)
        else:
            continue
        r, dr = _residual_and_slope(p, y)
        # Near y = 1 the slope blows up and tol may be below what a double can resolve.
        if abs(r) > max(tol, 4.0 * math.ulp(y) * abs(dr)):
            raise NoRootError(f"residual {r:.3e} above tol at y={y!r} for {p}")
        if not roots or y - roots[-1] > 1e-14:
            roots.append(y)
    if not roots:
        raise NoRootError(f"no sign change of the residual on (0, 1) for {p}")

    pressures = [pressure_at_root(p, y) for y in roots]
    order = sorted(range(len(roots)), key=lambda i: pressures[i], reverse=True)
    best = order[0]
    if len(order) > 1 and pressures[best] - pressures[order[1]] < _TIE_TOL:
        raise CoexistenceError(p.a, p.b, tuple(roots))
    y_star = roots[best]
    return FixedPoint(
        roots=tuple(roots),
        y_star=y_star,
        x_star=math.sqrt(1.0 - y_star),
        p_star=pressures[best],
    )
