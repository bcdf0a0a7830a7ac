"""Laplace expansion of the two-dimensional integral representation.

For ``I_N(G) = \\iint Phi^N G`` normalized by its Gaussian leading term, the
rescaled integrand is ``E_C[exp(f_N) G_N]`` with ``(X, Y) ~ N(0, C)``::

    exp(f_N) = 1 + f3/sqrt(N) + (f4 + f3^2/2)/N + ...
    G_N      = G* + G1/sqrt(N) + G2/N + G3/N^(3/2) + G4/N^2 + ...

where ``fk`` and ``Gk`` are the order-k Taylor polynomials.  Collecting powers
of ``1/N`` (odd Gaussian moments vanish) gives

    L   = E[f4] + E[f3^2]/2                     (G = 1)
    K_G = E[G2] + E[f3 G1]                      (G* = 0)
    M_G = E[G4] + E[f3 G3] + E[f4 G2] + E[f3^2 G2]/2   (G* = 0, grad G* = 0)

Every moment ``E_C[X^i Y^j]`` equals ``gamma[i, j] / D**((i+j)/2)``.

The observables follow from ratios of such integrals.  Since
``d/db Phi^N = N g Phi^N`` and ``d/db g = g(1 - g)``::

    mu_N  = I(g)/I(1)                 = y* + K_g/N + O(N^-2)
    chi_N = N Var_I(g) + I(g(1-g))/I(1)
          = y*(1-y*) + K1_gt + (K_gh - K1_gt L + M_gt - K_g^2)/N + O(N^-2)

with ``gt = (g - y*)^2`` and ``gh = g(1 - g)``; the ``L`` term cancels in the
ratio for ``mu_N`` but not at second order for ``chi_N``.  Finally
``Z_N = sqrt(a/D) exp(N p*) (1 + L/N + ...)`` gives ``Lambda = -log sqrt(D/a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Literal

from mdfs.derivatives import DerivPack, Index, MomentTable, build_deriv_pack, build_moment_table
from mdfs.params import CriticalPointError, ModelParams, solve_self_consistency

_CRITICAL_D = 1e-10


def _indices(order: int) -> list[Index]:
    return [(i, order - i) for i in range(order, -1, -1)]


def _taylor(table: dict[Index, float], order: int) -> list[tuple[Index, float]]:
    """Taylor coefficients ``T_ij / (i! j!)`` of one homogeneous order."""
    return [((i, j), table[i, j] / (math.factorial(i) * math.factorial(j))) for i, j in _indices(order)]


def _expect(mt: MomentTable, D: float, *factors: list[tuple[Index, float]]) -> float:
    """``E_C`` of a product of homogeneous polynomials, via the moment table."""
    total = 0.0
    for terms in product(*factors):
        i = sum(t[0][0] for t in terms)
        j = sum(t[0][1] for t in terms)
        coef = math.prod(t[1] for t in terms)
        total += coef * mt[i, j] / D ** ((i + j) // 2)
    return total


def coeff_L(dp: DerivPack, mt: MomentTable, normalization: Literal["corrected", "printed"] = "corrected") -> float:
    """``1/N`` coefficient of the normalized partition integral.

    ``normalization="printed"`` reproduces the alternative literal form with
    denominators ``D`` and ``D^2`` and no factor 1/2 on the cubic-squared term;
    it exists only so the two forms can be compared against exact data.
    """
    f3, f4 = _taylor(dp.F, 3), _taylor(dp.F, 4)
    if normalization == "corrected":
        return _expect(mt, dp.D, f4) + 0.5 * _expect(mt, dp.D, f3, f3)
    if normalization == "printed":
        l1 = sum(c * mt[ij] / dp.D for ij, c in f4)
        l2 = sum(c1 * c2 * mt[i1 + i2, j1 + j2] / dp.D**2 for ((i1, j1), c1), ((i2, j2), c2) in product(f3, f3))
        return l1 + l2
    raise ValueError(f"unknown normalization {normalization!r}")


def coeff_K(dp: DerivPack, G: dict[Index, float], mt: MomentTable) -> tuple[float, float]:
    """``(K1_G, K_G)`` for a function vanishing at the maximizer."""
    g1, g2 = _taylor(G, 1), _taylor(G, 2)
    k1 = _expect(mt, dp.D, g2)
    return k1, k1 + _expect(mt, dp.D, _taylor(dp.F, 3), g1)


def coeff_M(dp: DerivPack, G: dict[Index, float], mt: MomentTable) -> float:
    """``1/N^2`` coefficient for G with vanishing value and gradient at the maximizer."""
    f3, f4 = _taylor(dp.F, 3), _taylor(dp.F, 4)
    g2, g3, g4 = _taylor(G, 2), _taylor(G, 3), _taylor(G, 4)
    return (
        _expect(mt, dp.D, g4)
        + _expect(mt, dp.D, f3, g3)
        + _expect(mt, dp.D, f4, g2)
        + 0.5 * _expect(mt, dp.D, f3, f3, g2)
    )


@dataclass(frozen=True)
class CorrectionSet:
    p_star: float
    m_star: float
    chi_star: float
    Lambda: float
    Lambda1: float
    Lambda2: float
    L_coeff: float
    K_g: float
    K1_gt: float
    M_gt: float
    K_gh: float
    D: float
    x_star: float

    @property
    def y_star(self) -> float:
        return self.m_star


def corrections_from_pack(
    p: ModelParams,
    dp: DerivPack,
    p_star: float,
    normalization: Literal["corrected", "printed"] = "corrected",
) -> CorrectionSet:
    if dp.D < _CRITICAL_D:
        raise CriticalPointError(p.a, p.b, dp.D)
    mt = build_moment_table(dp)
    y = dp.y_star
    L = coeff_L(dp, mt, normalization)
    _, K_g = coeff_K(dp, dp.g, mt)
    K1_gt, _ = coeff_K(dp, dp.gt, mt)
    M_gt = coeff_M(dp, dp.gt, mt)
    _, K_gh = coeff_K(dp, dp.gh, mt)
    return CorrectionSet(
        p_star=p_star,
        m_star=y,
        chi_star=y * (1.0 - y) + K1_gt,
        Lambda=-0.5 * math.log(dp.D / p.a),
        Lambda1=K_g,
        Lambda2=K_gh - K1_gt * L + M_gt - K_g**2,
        L_coeff=L,
        K_g=K_g,
        K1_gt=K1_gt,
        M_gt=M_gt,
        K_gh=K_gh,
        D=dp.D,
        x_star=dp.x_star,
    )


def corrections(
    p: ModelParams,
    tol: float = 1e-12,
    normalization: Literal["corrected", "printed"] = "corrected",
) -> CorrectionSet:
    """Limits and ``1/N`` corrections of pressure, monomer density and susceptibility.

    Raises :class:`~mdfs.params.CoexistenceError` on the coexistence line and
    :class:`~mdfs.params.CriticalPointError` when ``D < 1e-10``.
    """
    fp = solve_self_consistency(p, tol)
    dp = build_deriv_pack(p, fp.y_star)
    return corrections_from_pack(p, dp, fp.p_star, normalization)


def chi_star_closed_form(p: ModelParams, m_star: float) -> float:
    """``2m(1-m) / (2 - m - 2a m(1-m))``."""
    q = m_star * (1.0 - m_star)
    den = 2.0 - m_star - 2.0 * p.a * q
    if den <= 1e-12:
        raise CriticalPointError(p.a, p.b, p.a * den)
    return 2.0 * q / den
