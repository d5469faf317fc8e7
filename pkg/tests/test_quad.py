import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stripembed.errors import DimensionError, DomainError
from stripembed.quad import (
    QuadratureRule,
    Rectangle,
    composite_rule,
    estimate_1d,
    integrate_1d,
    integrate_grid,
    integrate_tensor,
    tanh_sinh_rule,
    tensor_rule,
    uniform_edges,
)
from stripembed.ptrig import pi_p_closed_form, sin_p


def test_gauss_legendre_exactness():
    rule = QuadratureRule.gauss_legendre(5)
    assert rule.order == 9
    for deg in range(10):
        exact = (1 - (-1) ** (deg + 1)) / (deg + 1)
        assert float(rule.weights @ rule.nodes ** deg) == pytest.approx(exact, abs=1e-14)


def test_rule_validation():
    with pytest.raises(DomainError):
        QuadratureRule(np.array([0.0]), np.array([1.0]), 1)
    with pytest.raises(DomainError):
        QuadratureRule(np.array([0.0, 2.0]), np.array([1.0, 1.0]), 1)
    with pytest.raises(DomainError):
        QuadratureRule.gauss_legendre(0)


def test_rectangle_geometry():
    r = Rectangle(((0, 1), (2, 5)))
    assert r.ndim == 2 and r.volume == 3.0
    assert r.shifted([1, 0]).intervals == ((1.0, 2.0), (2.0, 5.0))
    assert r.intersect(Rectangle(((1, 2), (2, 5)))) is None
    assert r.intersect(Rectangle(((0.5, 2), (0, 3)))).intervals == ((0.5, 1.0), (2.0, 3.0))
    assert r.contains(np.array([[0.5, 3.0], [2.0, 3.0]])).tolist() == [True, False]
    for bad in [((1, 0),), ((0, math.inf),), ()]:
        with pytest.raises(DomainError):
            Rectangle(bad)


def test_sin_p_half_period_power_integral():
    # int_0^2 |sin_1.5(pi_1.5 x / 2)|^1.5 dx = 2 / 1.5
    P = pi_p_closed_form(1.5)
    f = lambda x: np.abs(sin_p(1.5, P * x / 2)) ** 1.5  # noqa: E731
    assert integrate_1d(f, 0.0, 2.0, cells=32) == pytest.approx(2 / 1.5, abs=1e-8)


def test_tensor_product_of_sines():
    box = Rectangle(((0, math.pi), (0, math.pi)))
    val = integrate_tensor(lambda x: (np.sin(x[..., 0]) * np.sin(x[..., 1])) ** 2, box, 2)
    assert val == pytest.approx(math.pi ** 2 / 4, abs=1e-13)


def test_tensor_dimension_cap():
    box = Rectangle(((0, 1),) * 5)
    with pytest.raises(DimensionError):
        integrate_tensor(lambda x: x[..., 0], box)
    with pytest.raises(DimensionError):
        tensor_rule([uniform_edges(0, 1, 1)] * 5)


def test_grid_contraction_matches_tensor():
    box = Rectangle(((0, 1), (0, 2), (-1, 1)))
    f = lambda x: np.exp(x[..., 0]) * x[..., 1] ** 2 + x[..., 2] ** 4  # noqa: E731
    xs, ws = tensor_rule([uniform_edges(a, b, 2) for a, b in box.intervals])
    grid = np.stack(np.meshgrid(*xs, indexing="ij"), axis=-1)
    assert integrate_grid(f(grid), ws) == pytest.approx(integrate_tensor(f, box, 2), rel=1e-14)
    exact = (math.e - 1) * 8 / 3 * 2 + 2 * 2 / 5
    assert integrate_tensor(f, box, 1) == pytest.approx(exact, rel=1e-13)


def test_composite_rule_rejects_bad_edges():
    with pytest.raises(DomainError):
        composite_rule([0.0, 0.0, 1.0])
    with pytest.raises(DomainError):
        uniform_edges(1.0, 0.0, 3)


def test_estimate_reports_refinement():
    res = estimate_1d(np.sqrt, 0.0, 1.0, cells=4)
    assert abs(res.value - 2 / 3) <= 10 * res.error + 1e-15


def test_tanh_sinh_singular_endpoint():
    rule = tanh_sinh_rule(1 / 32)
    # int_0^1 s^-0.9 ds = 10, evaluated through the distance to 0
    assert float(rule.weights @ rule.left ** -0.9) == pytest.approx(10.0, rel=1e-10)
    assert np.all(rule.left > 0) and np.all(rule.right > 0)


@given(st.floats(-5, 5), st.floats(0.1, 5), st.integers(1, 6))
def test_linear_functions_exact(a, w, cells):
    b = a + w
    val = integrate_1d(lambda x: 3 * x - 1, a, b, cells)
    assert val == pytest.approx(1.5 * (b * b - a * a) - w, abs=1e-10 * (1 + abs(a) + abs(b)) ** 2)
