"""Unit tests for the scalar root finders."""

import math

import numpy as np
import pytest

from memsim.errors import NoConvergence, OutOfValidityRange
from memsim.rootfind import bisect, newton_bisection


class TestBisect:
    def test_cosine_root(self):
        root = bisect(math.cos, 1.0, 2.0, xtol=1e-13)
        assert root == pytest.approx(math.pi / 2.0, abs=1e-12)

    def test_exact_endpoint_roots(self):
        assert bisect(lambda x: x, 0.0, 1.0) == 0.0
        assert bisect(lambda x: x - 1.0, 0.0, 1.0) == 1.0

    def test_no_sign_change(self):
        with pytest.raises(NoConvergence):
            bisect(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_iteration_budget(self):
        with pytest.raises(NoConvergence):
            bisect(math.cos, 1.0, 2.0, xtol=1e-15, max_iter=3)


class TestNewtonBisection:
    def test_cubic_with_analytic_derivative(self):
        f = lambda x: x ** 3 - 2.0
        df = lambda x: 3.0 * x * x
        root = newton_bisection(f, 0.0, 2.0, df=df, ftol=1e-14)
        assert root == pytest.approx(2.0 ** (1.0 / 3.0), rel=1e-12)

    def test_finite_difference_slope(self):
        f = lambda x: math.exp(x) - 3.0
        root = newton_bisection(f, 0.0, 2.0, ftol=1e-13)
        assert root == pytest.approx(math.log(3.0), rel=1e-10)

    def test_matches_pure_bisection(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            a = rng.uniform(0.5, 3.0)
            f = lambda x, a=a: math.tanh(x) - a / 4.0
            newton = newton_bisection(f, 0.0, 5.0, ftol=1e-14)
            pure = bisect(f, 0.0, 5.0, xtol=1e-13)
            assert newton == pytest.approx(pure, abs=1e-9)

    def test_hint_outside_bracket_is_ignored(self):
        f = lambda x: x - 0.5
        root = newton_bisection(f, 0.0, 1.0, x0=25.0, ftol=1e-14)
        assert root == pytest.approx(0.5, abs=1e-12)

    def test_function_raising_inside_bracket(self):
        # Mimics a port relation whose validity window ends mid-bracket:
        # evaluations past the window raise, and the solver must retreat.
        def f(x):
            if x > 1.4:
                raise OutOfValidityRange(f"x={x} beyond window")
            return x - 1.0

        root = newton_bisection(f, 0.0, 1.3999, ftol=1e-13)
        assert root == pytest.approx(1.0, abs=1e-10)

    def test_no_sign_change(self):
        with pytest.raises(NoConvergence):
            newton_bisection(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_iteration_budget(self):
        with pytest.raises(NoConvergence):
            newton_bisection(math.cos, 1.0, 2.0, ftol=1e-300, max_iter=5)

    def test_swapped_bracket_order(self):
        root = newton_bisection(lambda x: x - 0.25, 1.0, 0.0, ftol=1e-14)
        assert root == pytest.approx(0.25, abs=1e-12)
