import math

import pytest

from bour_edge.errors import QuadratureFailure
from bour_edge.quadrature import _kronrod_panel, integrate, integrate_cumulative


def simpson(f, a, b, panels=4096):
    """Independent fixed-grid composite Simpson oracle."""
    h = (b - a) / panels
    total = f(a) + f(b)
    for i in range(1, panels):
        total += (4 if i % 2 else 2) * f(a + i * h)
    return total * h / 3.0


def test_kronrod_polynomial_exactness():
    # the 15-point Kronrod rule integrates degree <= 22 exactly
    for deg in (7, 13, 22):
        value, _ = _kronrod_panel(lambda x, d=deg: x**d, 0.0, 1.0)
        assert value == pytest.approx(1.0 / (deg + 1), abs=1e-15)


def test_known_integrals():
    value, err = integrate(math.sin, 0.0, math.pi, 1e-13)
    assert value == pytest.approx(2.0, abs=1e-13)
    assert err < 1e-12
    value, _ = integrate(lambda x: math.exp(-x * x), 0.0, 3.0, 1e-13)
    assert value == pytest.approx(math.erf(3.0) * math.sqrt(math.pi) / 2.0, abs=1e-13)


def test_orientation():
    forward, _ = integrate(math.cos, 0.0, 0.5, 1e-13)
    backward, _ = integrate(math.cos, 0.5, 0.0, 1e-13)
    assert backward == -forward
    assert integrate(math.cos, 0.3, 0.3)[0] == 0.0


@pytest.mark.parametrize("f,a,b", [
    (lambda x: x * math.sin(3 * x) * math.exp(-x), 0.0, 2.0),
    (lambda x: 1.0 / (1.0 + x * x), -1.0, 3.0),
    (lambda x: math.sqrt(1.0 + x * x) * math.cos(x), 0.0, 1.5),
])
def test_against_simpson_oracle(f, a, b):
    adaptive, _ = integrate(f, a, b, 1e-12)
    assert adaptive == pytest.approx(simpson(f, a, b), abs=1e-10)


def test_budget_failure():
    # integrable endpoint singularity with a tiny budget cannot reach 1e-15
    with pytest.raises(QuadratureFailure):
        integrate(lambda x: math.sqrt(abs(x)), 0.0, 1.0, 1e-15, max_subdivisions=3)


def test_cumulative_matches_prefix_integrals():
    nodes = [0.0, 0.2, 0.5, 0.9, 1.4]
    cumulative = integrate_cumulative(math.cos, nodes, 1e-13)
    for node, value in zip(nodes, cumulative):
        assert value == pytest.approx(math.sin(node), abs=1e-12)


def test_cumulative_descending_nodes():
    nodes = [0.0, -0.3, -0.8]
    cumulative = integrate_cumulative(math.cos, nodes, 1e-13)
    for node, value in zip(nodes, cumulative):
        assert value == pytest.approx(math.sin(node), abs=1e-12)
