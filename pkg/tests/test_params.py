import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdfs.derivatives import f_value, g_value
from mdfs.params import (
    A_CRITICAL,
    CoexistenceError,
    ModelParams,
    critical_point,
    field_of_root,
    from_jh,
    residual,
    solve_self_consistency,
    stationary_bounds,
)
from oracles import bisect_root


def test_from_jh():
    assert from_jh(0.5, 0.5) == ModelParams(1.0, 0.0)
    assert from_jh(0.0, 0.0) == ModelParams(0.0, 0.0)
    p = from_jh(1.45711, -0.34412)
    assert p.a == pytest.approx(2.91422)
    assert p.b == pytest.approx(-1.80123)
    assert (p.j, p.h) == pytest.approx((1.45711, -0.34412))


def test_critical_point():
    a_c, y_c = critical_point()
    assert a_c == pytest.approx(2.914214, abs=1e-6)
    assert y_c == pytest.approx(2.0 - math.sqrt(2.0), abs=1e-15)
    assert 4 * a_c**2 - 12 * a_c + 1 == pytest.approx(0.0, abs=1e-13)


def test_stationary_bounds():
    lo, hi = stationary_bounds(4.0)
    assert lo == pytest.approx((9 - math.sqrt(17)) / 16, abs=1e-15)
    assert hi == pytest.approx((9 + math.sqrt(17)) / 16, abs=1e-15)
    assert lo == pytest.approx(0.304806, abs=1e-6)
    assert hi == pytest.approx(0.820194, abs=1e-6)
    assert stationary_bounds(2.0) is None
    lo, hi = stationary_bounds(A_CRITICAL)
    assert lo == pytest.approx(2 - math.sqrt(2), abs=1e-7)
    assert hi == pytest.approx(2 - math.sqrt(2), abs=1e-7)
    with pytest.raises(ValueError):
        stationary_bounds(0.0)


def test_single_root_at_a1_b0():
    fp = solve_self_consistency(ModelParams(1.0, 0.0))
    assert len(fp.roots) == 1
    assert fp.y_star == pytest.approx(bisect_root(1.0, 0.0), abs=1e-14)
    assert fp.y_star == pytest.approx(0.8672, abs=1e-4)
    assert fp.x_star == pytest.approx(math.sqrt(1 - fp.y_star), rel=1e-15)
    assert fp.p_star == pytest.approx(f_value(ModelParams(1.0, 0.0), fp.x_star, fp.y_star), abs=1e-15)


def test_weak_attraction_limit_is_golden_ratio():
    fp = solve_self_consistency(ModelParams(1e-6, 0.0))
    assert fp.y_star == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-4)


def test_three_roots_inside_band():
    p = ModelParams(4.0, -2.4)
    fp = solve_self_consistency(p)
    lo, hi = stationary_bounds(4.0)
    assert len(fp.roots) == 3
    assert 0 < fp.roots[0] < lo < fp.roots[1] < hi < fp.roots[2] < 1
    # dense sign scan oracle
    ys = np.linspace(1e-9, 1 - 1e-9, 200001)
    r = np.exp(4 * ys - 2.4) * np.sqrt(1 - ys) - ys
    crossings = ys[:-1][np.diff(np.sign(r)) != 0]
    assert len(crossings) == 3
    np.testing.assert_allclose(fp.roots, crossings, atol=1e-5)
    for y in fp.roots:
        assert abs(residual(p, y)) < 1e-12
    pressures = [f_value(p, math.sqrt(1 - y), y) for y in fp.roots]
    assert fp.y_star == fp.roots[int(np.argmax(pressures))]


def test_coexistence_tie_is_an_error():
    # bisect on b for the equal-pressure point of a=4 between the outer roots
    a = 4.0

    def gap(b):
        fp_roots = solve_self_consistency(ModelParams(a, b), tol=1e-12)
        return fp_roots.y_star > 0.5

    lo, hi = -2.6, -2.25
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        try:
            high = gap(mid)
        except CoexistenceError:
            break
        if high:
            hi = mid
        else:
            lo = mid
    with pytest.raises(CoexistenceError) as info:
        solve_self_consistency(ModelParams(a, 0.5 * (lo + hi)))
    assert len(info.value.roots) == 3


def test_root_count_subcritical_grid():
    for a in np.linspace(0.05, A_CRITICAL, 50):
        for b in (-3.0, -1.0, 0.0, 2.0):
            fp = solve_self_consistency(ModelParams(float(a), b))
            assert len(fp.roots) == 1


def test_invalid_input():
    with pytest.raises(ValueError):
        solve_self_consistency(ModelParams(0.0, 0.0))
    with pytest.raises(ValueError):
        solve_self_consistency(ModelParams(1.0, 0.0), tol=0.0)


def test_field_of_root_inverts_equation():
    for a, y in [(1.0, 0.3), (4.0, 0.9), (0.2, 0.05)]:
        assert residual(ModelParams(a, field_of_root(a, y)), y) == pytest.approx(0.0, abs=1e-14)


params = st.builds(
    ModelParams,
    a=st.floats(0.05, 6.0),
    b=st.floats(-6.0, 3.0),
)


@settings(max_examples=150, deadline=None)
@given(params)
def test_fixed_point_invariants(p):
    try:
        fp = solve_self_consistency(p)
    except CoexistenceError:
        return
    assert 1 <= len(fp.roots) <= 3
    if p.a <= A_CRITICAL:
        assert len(fp.roots) == 1
    assert fp.x_star**2 + fp.y_star == pytest.approx(1.0, abs=1e-15)
    assert g_value(p, fp.x_star, fp.y_star) == pytest.approx(fp.y_star, rel=1e-11, abs=1e-15)
    assert fp.p_star == max(f_value(p, math.sqrt(1 - y), y) for y in fp.roots)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 6.0), st.floats(-5.0, 2.0), st.floats(0.001, 1.0))
def test_monotone_in_field(a, b, db):
    try:
        y1 = solve_self_consistency(ModelParams(a, b)).y_star
        y2 = solve_self_consistency(ModelParams(a, b + db)).y_star
    except CoexistenceError:
        return
    assert y1 <= y2
