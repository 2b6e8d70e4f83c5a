from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from majda_znd.errors import ConvergenceError, NonFiniteState, StepSizeUnderflow
from majda_znd.numerics import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, adaptive_quad, integrate_ode


def test_rule_weights_integrate_constants_and_odd_moments():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert abs(np.dot(KRONROD_WEIGHTS, NODES**21)) < 1e-15
    # the 15-point Kronrod rule is exact through degree 22
    assert np.dot(KRONROD_WEIGHTS, NODES**22) == pytest.approx(2.0 / 23.0, rel=1e-13)


def test_smooth_integral():
    res = adaptive_quad(np.exp, 0.0, 1.0, 1e-12, 1e-300)
    assert res.value == pytest.approx(math.e - 1.0, rel=1e-14)
    assert res.error_estimate <= 1e-12 * abs(res.value)


def test_endpoint_singularity():
    res = adaptive_quad(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0, 1e-6, 1e-300)
    assert res.value == pytest.approx(2.0, rel=1e-6)


def test_unreachable_tolerance_names_the_worst_interval():
    # without extrapolation, 1/sqrt(x) stalls once the first interval hits the width floor
    with pytest.raises(ConvergenceError) as info:
        adaptive_quad(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0, 1e-10, 1e-300)
    lo, hi = info.value.worst_interval
    assert lo == 0.0 and hi < 1e-13


def test_tolerance_below_rounding_floor_is_refused():
    with pytest.raises(ConvergenceError, match="rounding"):
        adaptive_quad(lambda x: np.cos(7.875 * x), 0.0, 2.0, 1e-15, 1e-15)


def test_budget_exhaustion():
    with pytest.raises(ConvergenceError, match="budget"):
        adaptive_quad(lambda x: np.sin(1.0 / (x + 1e-3)), 0.0, 1.0, 1e-12, 1e-14, max_intervals=8)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(-3, 3), w=st.floats(0.1, 10))
def test_quadrature_is_linear(a, b, w):
    f = lambda x: np.cos(w * x)
    g = lambda x: x**3 * np.exp(-x)
    lhs = adaptive_quad(lambda x: a * f(x) + b * g(x), 0.0, 2.0, 1e-12, 1e-12).value
    rhs = a * adaptive_quad(f, 0.0, 2.0, 1e-12, 1e-12).value + b * adaptive_quad(g, 0.0, 2.0, 1e-12, 1e-12).value
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


def test_ode_exponential_and_t_eval():
    grid = np.linspace(0.0, 2.0, 11)
    res = integrate_ode(lambda t, y: -2.0 * y, [1.0], 0.0, 2.0, 1e-10, 1e-14, t_eval=grid)
    assert np.allclose(res.t_eval, grid, rtol=0, atol=0)
    assert np.allclose(np.array(res.y_eval)[:, 0], np.exp(-2.0 * grid), rtol=1e-8, atol=0)


def test_ode_complex_rotation_and_backwards():
    res = integrate_ode(lambda t, y: 1j * y, [1.0 + 0j], 0.0, -math.pi, 1e-11, 1e-14)
    assert abs(res.final_state[0] - (-1.0)) < 1e-9


def test_ode_fifth_order_convergence():
    # fixed tolerance ladder: global error should scale like rtol
    errs = []
    for tol in (1e-5, 1e-7, 1e-9):
        res = integrate_ode(lambda t, y: np.array([y[1], -y[0]]), [0.0, 1.0], 0.0, 10.0, tol, tol * 1e-3)
        errs.append(abs(res.final_state[0] - math.sin(10.0)))
    assert errs[2] < errs[1] < errs[0]
    assert errs[2] < 1e-7


def test_ode_blow_up_is_reported():
    # y' = y^2 blows up at t = 1
    with pytest.raises((NonFiniteState, StepSizeUnderflow)):
        integrate_ode(lambda t, y: y * y, [1.0], 0.0, 2.0, 1e-8, 1e-10)


def test_reference_integrals():
    assert adaptive_quad(lambda t: np.ones_like(t), 0.0, 1.0).value == 1.0
    res = adaptive_quad(lambda t: np.exp(1j * np.log(t)), 0.0, 1.0, 1e-10, 1e-12)
    assert abs(res.value - (0.5 - 0.5j)) <= 1e-10
    res = adaptive_quad(lambda t: np.exp(-t), 0.0, 20.0, 1e-12, 1e-14)
    assert res.value == pytest.approx(1.0 - math.exp(-20.0), rel=1e-12)
    assert res.evaluations >= 15


def test_ode_reference_solutions():
    res = integrate_ode(lambda t, y: y, [1.0], 0.0, 1.0, 1e-10, 1e-12)
    assert abs(res.final_state[0] - math.e) <= 1e-8 * math.e
    # 2x2 linear system against its matrix exponential via the eigen-decomposition
    a = np.array([[-1.0, 2.0], [0.5, -3.0]])
    w, v = np.linalg.eig(a)
    y0 = np.array([1.0, -2.0])
    exact = v @ np.diag(np.exp(2.0 * w)) @ np.linalg.solve(v, y0)
    res = integrate_ode(lambda t, y: a @ y, y0, 0.0, 2.0, 1e-11, 1e-14)
    assert np.allclose(res.final_state, exact, rtol=1e-8, atol=1e-12)
    assert res.steps_accepted > 0
