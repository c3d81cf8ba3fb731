"""Trust-region minimizer: pinned convergence targets and box invariants."""

import numpy as np
import pytest

from p2b.optimize import OptProblem, OptResult, ValidationError, minimize


def rosenbrock(x):
    return float((1.0 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2)


class TestProblemValidation:
    def test_lower_must_be_below_upper(self):
        with pytest.raises(ValidationError):
            OptProblem(lower=[0.0, 1.0], upper=[1.0, 1.0], budget=50)

    def test_budget_floor_is_design_size(self):
        # 2n+1 points are needed just to fit the first model
        with pytest.raises(ValidationError):
            OptProblem(lower=[0.0] * 3, upper=[1.0] * 3, budget=6)
        OptProblem(lower=[0.0] * 3, upper=[1.0] * 3, budget=7)

    def test_tolerance_positive(self):
        with pytest.raises(ValidationError):
            OptProblem(lower=[0.0], upper=[1.0], budget=10, x_tolerance=0.0)

    def test_x0_out_of_bounds(self):
        p = OptProblem(lower=[0.0], upper=[1.0], budget=10)
        with pytest.raises(ValidationError):
            minimize(lambda x: float(x[0]), np.array([1.5]), p)

    def test_x0_shape_mismatch(self):
        p = OptProblem(lower=[0.0, 0.0], upper=[1.0, 1.0], budget=10)
        with pytest.raises(ValidationError):
            minimize(lambda x: float(x.sum()), np.array([0.5]), p)


class TestPinnedExamples:
    def test_quadratic_interior_minimum(self):
        c = np.array([0.3, -0.2, 0.1, 0.4])
        p = OptProblem(lower=[-1.0] * 4, upper=[1.0] * 4, budget=200)
        r = minimize(lambda x: float(np.sum((x - c) ** 2)), np.zeros(4), p)
        assert np.abs(r.x_best - c).max() < 1e-6
        assert r.evaluations <= 200

    def test_rosenbrock_within_budget(self):
        p = OptProblem(lower=[-2.0, -2.0], upper=[2.0, 2.0], budget=500)
        r = minimize(rosenbrock, np.array([-1.2, 1.0]), p)
        assert r.f_best < 1e-3
        assert r.evaluations <= 500

    def test_linear_lands_on_bound_exactly(self):
        p = OptProblem(lower=[0.5], upper=[2.0], budget=100)
        r = minimize(lambda x: float(x[0]), np.array([1.5]), p)
        assert r.x_best[0] == 0.5


class TestInvariants:
    def test_every_evaluation_inside_box(self):
        lower = np.array([-1.0, 0.0, 2.0])
        upper = np.array([1.0, 0.5, 5.0])
        seen = []

        def f(x):
            seen.append(x.copy())
            return rosenbrock(x[:2]) + (x[2] - 3.0) ** 2

        p = OptProblem(lower=lower, upper=upper, budget=300)
        r = minimize(f, np.array([0.0, 0.25, 4.0]), p)
        assert len(seen) == r.evaluations <= 300
        for x in seen:
            assert np.all(x >= lower) and np.all(x <= upper)
        assert np.all(r.x_best >= lower) and np.all(r.x_best <= upper)

    def test_best_so_far_monotone(self):
        values = []

        def f(x):
            values.append(rosenbrock(x))
            return values[-1]

        p = OptProblem(lower=[-2.0, -2.0], upper=[2.0, 2.0], budget=400)
        r = minimize(f, np.array([1.5, -1.0]), p)
        best = np.minimum.accumulate(values)
        assert np.all(np.diff(best) <= 0)
        assert r.f_best == best[-1]

    def test_deterministic(self):
        p = OptProblem(lower=[-2.0, -2.0], upper=[2.0, 2.0], budget=150)
        r1 = minimize(rosenbrock, np.array([0.3, 0.7]), p)
        r2 = minimize(rosenbrock, np.array([0.3, 0.7]), p)
        assert np.array_equal(r1.x_best, r2.x_best)
        assert r1.f_best == r2.f_best
        assert r1.evaluations == r2.evaluations
        assert r1.stop_reason == r2.stop_reason

    def test_stop_reason_is_known(self):
        p = OptProblem(lower=[-1.0], upper=[1.0], budget=30)
        r = minimize(lambda x: float(x[0] ** 2), np.array([0.8]), p)
        assert r.stop_reason in {"budget", "step-tolerance", "stagnation"}

    def test_convex_quadratic_projected_minimizer(self):
        # diagonal quadratic: the box projection of the free minimum is
        # the constrained minimizer, giving a closed-form target
        c = np.array([1.4, -0.3, 0.9])
        w = np.array([3.0, 1.0, 7.0])
        lower = np.array([-1.0, -1.0, -1.0])
        upper = np.array([1.0, 1.0, 1.0])
        expected = np.clip(c, lower, upper)
        p = OptProblem(lower=lower, upper=upper, budget=50 * 3)
        r = minimize(lambda x: float(np.sum(w * (x - c) ** 2)), np.zeros(3), p)
        assert np.abs(r.x_best - expected).max() < 1e-5

    def test_budget_never_exceeded_on_hard_objective(self):
        count = 0

        def f(x):
            nonlocal count
            count += 1
            # rough, multimodal; the point is budget discipline not success
            return float(np.sum(np.sin(5.0 * x) ** 2) + 0.1 * np.sum(x ** 2))

        p = OptProblem(lower=[-3.0] * 2, upper=[3.0] * 2, budget=57)
        r = minimize(f, np.array([2.0, -2.0]), p)
        assert count == r.evaluations <= 57


class TestResultShape:
    def test_result_fields(self):
        p = OptProblem(lower=[0.0], upper=[1.0], budget=20)
        r = minimize(lambda x: float((x[0] - 0.4) ** 2), np.array([0.9]), p)
        assert isinstance(r, OptResult)
        assert r.f_best == pytest.approx((r.x_best[0] - 0.4) ** 2)
