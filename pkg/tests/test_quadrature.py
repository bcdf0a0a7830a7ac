import math

import numpy as np
import pytest

from mdfs.derivatives import build_deriv_pack, build_moment_table
from mdfs.exact import observables
from mdfs.params import ModelParams, solve_self_consistency
from mdfs.quadrature import QuadratureError, gaussian_moment_oracle, integral_partition
from oracles import brute_force_partition, gauss_moment_by_pairings


def test_two_site_value():
    q = integral_partition(ModelParams(1.0, 0.0), 2)
    assert q.value == pytest.approx(math.e + 0.5, rel=1e-12)
    assert q.value == pytest.approx(3.21828, abs=1e-5)
    assert q.est_error >= 0
    assert q.evaluations > 0


def test_sixteen_sites():
    p = ModelParams(1.0, 0.0)
    q = integral_partition(p, 16)
    assert q.value == pytest.approx(math.exp(observables(p, 16).log_z), rel=1e-8)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_odd_sizes_signed_integrand(n):
    p = ModelParams(0.5, -1.0)
    assert integral_partition(p, n).value == pytest.approx(brute_force_partition(0.5, -1.0, n), rel=1e-10)


def test_truncation_robustness():
    p = ModelParams(2.0, 0.5)
    q1 = integral_partition(p, 8)
    q2 = integral_partition(p, 8, box_scale=2.0)
    assert abs(q1.value - q2.value) <= max(q1.est_error, q2.est_error, 1e-13 * q1.value)


def test_nonconvergence_is_reported():
    with pytest.raises(QuadratureError):
        integral_partition(ModelParams(1.0, 0.0), 8, rtol=1e-30, max_cells=20)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        integral_partition(ModelParams(0.0, 0.0), 4)
    with pytest.raises(ValueError):
        integral_partition(ModelParams(1.0, 0.0), 0)


def test_moment_oracle_identity():
    eye = np.eye(2)
    assert gaussian_moment_oracle(eye, 4, 0) == 3
    assert gaussian_moment_oracle(eye, 2, 2) == 1
    assert gaussian_moment_oracle(eye, 8, 0) == 105
    assert gaussian_moment_oracle([[2.0, 0.3], [0.3, 1.0]], 1, 0) == 0.0
    with pytest.raises(ValueError):
        gaussian_moment_oracle([[1.0, 2.0], [2.0, 1.0]], 2, 0)
    with pytest.raises(ValueError):
        gaussian_moment_oracle([[1.0, 0.1], [0.2, 1.0]], 2, 0)


def test_moment_oracle_methods_agree():
    cov = np.array([[1.7, -0.6], [-0.6, 0.9]])
    for total in range(0, 9):
        for i in range(total + 1):
            j = total - i
            r = gaussian_moment_oracle(cov, i, j, method="recursion")
            h = gaussian_moment_oracle(cov, i, j, method="hermite")
            w = gauss_moment_by_pairings(cov[0, 0], cov[0, 1], cov[1, 1], i, j)
            assert h == pytest.approx(r, rel=1e-10, abs=1e-12)
            assert w == pytest.approx(r, rel=1e-12, abs=1e-14)


def test_moment_oracle_reproduces_gamma_22():
    p = ModelParams(1.0, 0.0)
    dp = build_deriv_pack(p, solve_self_consistency(p).y_star)
    F = dp.F
    cov = np.array([[-F[0, 2], F[1, 1]], [F[1, 1], -F[2, 0]]]) / dp.D
    expected = F[0, 2] * F[2, 0] + 2 * F[1, 1] ** 2
    assert dp.D**2 * gaussian_moment_oracle(cov, 2, 2) == pytest.approx(expected, rel=1e-10)
    assert build_moment_table(dp)[2, 2] == pytest.approx(expected, rel=1e-15)
