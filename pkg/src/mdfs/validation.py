"""Self-checks exposed through ``mdfs validate``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from mdfs.derivatives import build_deriv_pack, build_moment_table
from mdfs.exact import correction_extrapolation, decay_slope, observables
from mdfs.laplace import chi_star_closed_form, corrections
from mdfs.params import CoexistenceError, CriticalPointError, ModelParams
from mdfs.quadrature import gaussian_moment_oracle, integral_partition

SUITES = ("moments", "integral", "chi-star", "determinant", "extrapolation")

REFERENCE_POINTS = [ModelParams(1.0, 0.0), ModelParams(0.5, 0.5), ModelParams(2.0, -1.0), ModelParams(4.0, -3.0)]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))


def grid_points(n_a: int = 20, n_b: int = 20, min_det: float = 0.05) -> list[tuple[ModelParams, float]]:
    """(params, y*) on a regular (a, b) grid over [0.1, 5] x [-3, 2] away from criticality."""
    out = []
    for a in np.linspace(0.1, 5.0, n_a):
        for b in np.linspace(-3.0, 2.0, n_b):
            p = ModelParams(float(a), float(b))
            try:
                cs = corrections(p)
            except (CoexistenceError, CriticalPointError):
                continue
            if cs.D >= min_det:
                out.append((p, cs.m_star))
    return out


def check_moments() -> list[Check]:
    checks = []
    for p in REFERENCE_POINTS:
        cs = corrections(p)
        dp = build_deriv_pack(p, cs.m_star)
        mt = build_moment_table(dp)
        F = dp.F
        cov = np.array([[-F[0, 2], F[1, 1]], [F[1, 1], -F[2, 0]]]) / dp.D
        worst = 0.0
        for (i, j), gamma in mt.gamma.items():
            ref = dp.D ** ((i + j) // 2) * gaussian_moment_oracle(cov, i, j)
            worst = max(worst, abs(gamma - ref) / max(1.0, abs(ref)))
        checks.append(Check("moments", f"gamma table a={p.a} b={p.b}", worst < 1e-8, f"max rel err {worst:.2e}"))
    return checks


def check_integral() -> list[Check]:
    checks = []
    for n in (2, 3, 8):
        for p in (ModelParams(1.0, 0.0), ModelParams(0.5, -1.0)):
            z = math.exp(observables(p, n).log_z)
            q = integral_partition(p, n)
            err = abs(q.value - z) / z
            checks.append(Check("integral", f"Z_{n} a={p.a} b={p.b}", err < 1e-8, f"rel err {err:.2e}"))
    return checks


def check_chi_star() -> list[Check]:
    worst = 0.0
    for p, y in grid_points(10, 10):
        chi = corrections(p).chi_star
        worst = max(worst, abs(chi - chi_star_closed_form(p, y)) / max(1.0, chi))
    return [Check("chi-star", "expansion form vs closed form", worst < 1e-10, f"max err {worst:.2e}")]


def check_determinant() -> list[Check]:
    worst = 0.0
    for p, y in grid_points(10, 10, min_det=0.0):
        D = build_deriv_pack(p, y).D
        worst = max(worst, abs(D - p.a * (2.0 - y - 2.0 * p.a * y * (1.0 - y))))
    return [Check("determinant", "D = a(2 - y - 2ay(1-y))", worst < 1e-12, f"max abs err {worst:.2e}")]


def check_extrapolation(n_list=(256, 512, 1024, 2048, 4096)) -> list[Check]:
    checks = []
    n = np.asarray(n_list, dtype=float)
    for p in REFERENCE_POINTS:
        cs = corrections(p)
        ex = correction_extrapolation(p, n_list, (cs.p_star, cs.m_star, cs.chi_star))
        for label, r, target, tol in (
            ("Lambda", ex.r_pressure, cs.Lambda, 0.02),
            ("Lambda1", ex.r_monomer, cs.Lambda1, 0.02),
            ("Lambda2", ex.r_susceptibility, cs.Lambda2, 0.1),
        ):
            resid = np.asarray(r) - target
            slope = decay_slope(n, resid)
            ok = abs(resid[-1]) < tol and -1.3 <= slope <= -0.7
            checks.append(
                Check(
                    "extrapolation",
                    f"{label} a={p.a} b={p.b}",
                    ok,
                    f"N={int(n[-1])} residual {resid[-1]:+.2e} (tol {tol}), slope {slope:.3f}",
                )
            )
    return checks


_RUNNERS: dict[str, Callable[[], list[Check]]] = {
    "moments": check_moments,
    "integral": check_integral,
    "chi-star": check_chi_star,
    "determinant": check_determinant,
    "extrapolation": check_extrapolation,
}


def run_suites(names: list[str] | None = None) -> list[Check]:
    out = []
    for name in names or list(SUITES):
        if name not in _RUNNERS:
            raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
        out.extend(_RUNNERS[name]())
    return out
