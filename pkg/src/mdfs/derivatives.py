"""Closed-form derivative tables at the maximizer and the Gaussian moment table.

Everything is expressed through ``y*`` alone, using ``x* = sqrt(1 - y*)`` and
``exp(a*y* + b) = y* / x*`` at the stationary point.

Moment normalization: ``gamma[i, j]`` is the Gaussian moment ``E[X^i Y^j]``
under the covariance ``adj(-Hess F) = D * C``, so ``gamma[i, j] / D**((i+j)/2)``
is the moment under the true covariance ``C = (-Hess F)^-1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mdfs.params import ModelParams

Index = tuple[int, int]


def f_value(p: ModelParams, x: float, y: float) -> float:
    """``F(x, y) = -x^2/2 - a*y^2/2 + log(x + exp(a*y + b))``."""
    s = x + math.exp(p.a * y + p.b)
    if s <= 0:
        raise ValueError(f"log argument x + exp(a*y+b) = {s!r} is not positive")
    return -0.5 * x * x - 0.5 * p.a * y * y + math.log(s)


def g_value(p: ModelParams, x: float, y: float) -> float:
    """``g = dF/db = exp(a*y + b) / (x + exp(a*y + b))``."""
    e = math.exp(p.a * y + p.b)
    return e / (x + e)


def phi_value(p: ModelParams, x: float, y: float) -> float:
    return (x + math.exp(p.a * y + p.b)) * math.exp(-0.5 * x * x - 0.5 * p.a * y * y)


@dataclass(frozen=True)
class DerivPack:
    a: float
    y_star: float
    F: dict[Index, float]
    g: dict[Index, float]
    gt: dict[Index, float]
    gh: dict[Index, float]
    D: float

    @property
    def x_star(self) -> float:
        return math.sqrt(1.0 - self.y_star)


def _f_table(a: float, y: float) -> dict[Index, float]:
    s = math.sqrt(1.0 - y)
    q = y * (1.0 - y)
    c2 = 1.0 - 2.0 * y
    c3 = 1.0 - 6.0 * y + 6.0 * y * y
    return {
        (2, 0): -2.0 + y,
        (1, 1): -a * y * s,
        (0, 2): -a + a * a * q,
        (3, 0): 2.0 * (1.0 - y) * s,
        (2, 1): 2.0 * a * q,
        (1, 2): -a * a * y * s * c2,
        (0, 3): a**3 * q * c2,
        (4, 0): -6.0 * (1.0 - y) ** 2,
        (3, 1): -6.0 * a * y * (1.0 - y) * s,
        (2, 2): 2.0 * a * a * q * (1.0 - 3.0 * y),
        (1, 3): -a**3 * y * s * c3,
        (0, 4): a**4 * q * c3,
    }


def _g_table(a: float, y: float) -> dict[Index, float]:
    s = math.sqrt(1.0 - y)
    q = y * (1.0 - y)
    c2 = 1.0 - 2.0 * y
    c3 = 1.0 - 6.0 * y + 6.0 * y * y
    return {
        (1, 0): -y * s,
        (0, 1): a * q,
        (2, 0): 2.0 * q,
        (1, 1): -a * y * s * c2,
        (0, 2): a * a * q * c2,
        (3, 0): -6.0 * y * (1.0 - y) * s,
        (2, 1): 2.0 * a * q * (1.0 - 3.0 * y),
        (1, 2): -a * a * y * s * c3,
        (0, 3): a**3 * q * c3,
    }


def _gt_table(g: dict[Index, float]) -> dict[Index, float]:
    # Leibniz rule for (g - y*)^2, whose value vanishes at the maximizer.
    return {
        (1, 0): 0.0,
        (0, 1): 0.0,
        (2, 0): 2.0 * g[1, 0] ** 2,
        (1, 1): 2.0 * g[1, 0] * g[0, 1],
        (0, 2): 2.0 * g[0, 1] ** 2,
        (3, 0): 6.0 * g[1, 0] * g[2, 0],
        (2, 1): 4.0 * g[1, 0] * g[1, 1] + 2.0 * g[0, 1] * g[2, 0],
        (1, 2): 4.0 * g[0, 1] * g[1, 1] + 2.0 * g[1, 0] * g[0, 2],
        (0, 3): 6.0 * g[0, 1] * g[0, 2],
        (4, 0): 6.0 * g[2, 0] ** 2 + 8.0 * g[1, 0] * g[3, 0],
        (3, 1): 6.0 * g[2, 0] * g[1, 1] + 6.0 * g[1, 0] * g[2, 1] + 2.0 * g[0, 1] * g[3, 0],
        (2, 2): 4.0 * g[1, 1] ** 2
        + 2.0 * g[2, 0] * g[0, 2]
        + 4.0 * g[1, 0] * g[1, 2]
        + 4.0 * g[0, 1] * g[2, 1],
        (1, 3): 6.0 * g[1, 1] * g[0, 2] + 6.0 * g[0, 1] * g[1, 2] + 2.0 * g[1, 0] * g[0, 3],
        (0, 4): 6.0 * g[0, 2] ** 2 + 8.0 * g[0, 1] * g[0, 3],
    }


def _gh_table(g: dict[Index, float], y: float) -> dict[Index, float]:
    c = 1.0 - 2.0 * y
    return {
        (1, 0): c * g[1, 0],
        (0, 1): c * g[0, 1],
        (2, 0): -2.0 * g[1, 0] ** 2 + c * g[2, 0],
        (1, 1): -2.0 * g[1, 0] * g[0, 1] + c * g[1, 1],
        (0, 2): -2.0 * g[0, 1] ** 2 + c * g[0, 2],
    }


def build_deriv_pack(p: ModelParams, y_star: float) -> DerivPack:
    if not 0.0 < y_star < 1.0:
        raise ValueError(f"y_star must lie in (0, 1), got {y_star!r}")
    F = _f_table(p.a, y_star)
    g = _g_table(p.a, y_star)
    D = F[0, 2] * F[2, 0] - F[1, 1] ** 2
    return DerivPack(
        a=p.a,
        y_star=y_star,
        F=F,
        g=g,
        gt=_gt_table(g),
        gh=_gh_table(g, y_star),
        D=D,
    )


@dataclass(frozen=True)
class MomentTable:
    gamma: dict[Index, float]

    def __getitem__(self, key: Index) -> float:
        i, j = key
        if (i + j) % 2:
            return 0.0
        return self.gamma[key]


def build_moment_table(dp: DerivPack) -> MomentTable:
    """Even Gaussian moments of orders 2 through 8 as polynomials in F20, F11, F02.

    With ``s11 = -F02``, ``s12 = F11`` and ``s22 = -F20`` these are the Wick
    pairing counts for the covariance ``[[s11, s12], [s12, s22]]``.
    """
    u, v, w = dp.F[2, 0], dp.F[1, 1], dp.F[0, 2]
    gamma = {
        (2, 0): -w,
        (1, 1): v,
        (0, 2): -u,
        (4, 0): 3 * w**2,
        (3, 1): -3 * w * v,
        (2, 2): w * u + 2 * v**2,
        (1, 3): -3 * v * u,
        (0, 4): 3 * u**2,
        (6, 0): -15 * w**3,
        (5, 1): 15 * w**2 * v,
        (4, 2): -3 * w**2 * u - 12 * w * v**2,
        (3, 3): 9 * w * v * u + 6 * v**3,
        (2, 4): -3 * w * u**2 - 12 * v**2 * u,
        (1, 5): 15 * v * u**2,
        (0, 6): -15 * u**3,
        (8, 0): 105 * w**4,
        (7, 1): -105 * w**3 * v,
        (6, 2): 90 * w**2 * v**2 + 15 * w**3 * u,
        (5, 3): -45 * w**2 * v * u - 60 * w * v**3,
        (4, 4): 9 * w**2 * u**2 + 24 * v**4 + 72 * w * v**2 * u,
        (3, 5): -45 * w * v * u**2 - 60 * u * v**3,
        (2, 6): 90 * v**2 * u**2 + 15 * w * u**3,
        (1, 7): -105 * u**3 * v,
        (0, 8): 105 * u**4,
    }
    return MomentTable(gamma)
