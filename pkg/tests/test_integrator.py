import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wallach_flow.integrator import DenseStep, Dopri5, StepFailure, rk4_fixed


def decay(t, y):
    return (-y[0], -2.0 * y[1])


def rotation(t, y):
    return (-y[1], y[0])


def test_exact_solution_of_linear_decay():
    solver = Dopri5(decay, rtol=1e-10, atol=1e-12)
    t, y = solver.solve(0.0, (1.0, 1.0), 5.0)
    assert t == 5.0
    assert y[0] == pytest.approx(math.exp(-5.0), rel=1e-8)
    assert y[1] == pytest.approx(math.exp(-10.0), rel=1e-8)
    assert solver.n_accept > 0


def test_error_shrinks_with_tolerance():
    errs = []
    for rtol in (1e-6, 1e-8, 1e-10):
        _, y = Dopri5(rotation, rtol=rtol, atol=rtol * 1e-2).solve(0.0, (1.0, 0.0), 10.0)
        errs.append(math.hypot(y[0] - math.cos(10.0), y[1] - math.sin(10.0)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-8


def test_backward_integration():
    t, y = Dopri5(decay, 1e-10, 1e-12).solve(2.0, (math.exp(-2.0), math.exp(-4.0)), 0.0)
    assert t == 0.0
    assert y[0] == pytest.approx(1.0, rel=1e-8)


def test_dense_output_is_accurate_between_steps():
    steps = []

    def keep(step: DenseStep):
        steps.append(step)
        return False

    Dopri5(rotation, 1e-10, 1e-12, max_step=0.5).solve(0.0, (1.0, 0.0), 6.0, keep)
    worst = 0.0
    for step in steps:
        for th in (0.25, 0.5, 0.75):
            t = step.t0 + th * (step.t1 - step.t0)
            y = step(t)
            worst = max(worst, math.hypot(y[0] - math.cos(t), y[1] - math.sin(t)))
        assert step(step.t0) == pytest.approx(step.y0)
        assert step(step.t1) == pytest.approx(step.y1)
    assert worst < 1e-8


def test_callback_can_stop_early():
    t, _ = Dopri5(decay, 1e-8, 1e-10).solve(0.0, (1.0, 1.0), 100.0, lambda step: step.t1 > 1.0)
    assert 1.0 < t < 100.0


def test_blow_up_raises_step_failure():
    with pytest.raises(StepFailure):
        Dopri5(lambda t, y: (y[0] * y[0],), 1e-10, 1e-12).solve(0.0, (1.0,), 2.0)


def test_invalid_settings():
    with pytest.raises(ValueError):
        Dopri5(decay, rtol=0.0)
    with pytest.raises(ValueError):
        Dopri5(decay, max_step=-1.0)


@settings(max_examples=25)
@given(st.floats(min_value=-2.0, max_value=2.0), st.floats(min_value=0.1, max_value=3.0))
def test_scalar_linear_ode_property(lam, T):
    _, y = Dopri5(lambda t, y: (lam * y[0],), 1e-10, 1e-14).solve(0.0, (1.0,), T)
    assert y[0] == pytest.approx(math.exp(lam * T), rel=1e-8)


def test_rk4_is_fourth_order():
    f = lambda x, y: y  # noqa: E731
    errs = []
    for n in (10, 20, 40):
        ys = rk4_fixed(f, 0.0, 1.0, 1.0 / n, n)
        assert len(ys) == n + 1
        errs.append(abs(ys[-1] - math.e))
    ratios = [errs[k] / errs[k + 1] for k in range(2)]
    assert all(14.0 < r < 18.0 for r in ratios)


def test_rk4_mesh_matches_numpy_reference():
    # y' = -2 x y on a backward mesh, compared against the exact Gaussian
    ys = rk4_fixed(lambda x, y: -2.0 * x * y, 1.0, math.exp(-1.0), -0.001, 1000)
    xs = 1.0 - 0.001 * np.arange(1001)
    assert np.allclose(ys, np.exp(-xs**2), rtol=1e-10)
