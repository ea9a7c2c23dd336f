import math

import numpy as np
import pytest

from app.base import BadParameters, QuadratureStall
from app.core import (
    StolzDomain,
    circle_contour,
    contour_quadrature,
    keyhole_contour,
    stolz_boundary,
    stolz_contains,
)
from app.utils import NumericContext


def test_stolz_contains():
    d = StolzDomain(math.pi / 4)
    assert stolz_contains(d, 0j)
    assert stolz_contains(d, 0.5 + 0j)
    assert stolz_contains(d, 0.9 + 0.05j)
    assert not stolz_contains(d, 0.9 + 0.2j)
    assert not stolz_contains(d, 1.0 + 0j)
    assert not stolz_contains(d, 1.01 + 0j)
    with pytest.raises(BadParameters):
        StolzDomain(0.0)


@pytest.mark.parametrize("eta, r", [(math.pi / 3, 0.1), (math.pi / 3, 0.7), (0.49 * math.pi, 0.3)])
def test_keyhole_closes(eta, r):
    """Consecutive panels meet, in both the kite and the two-arc shapes."""
    contour = keyhole_contour(eta, r)
    assert contour.closure_mismatch() < 1e-12
    assert contour.degenerate == (r >= math.cos(eta))
    assert len(contour.panels) == (2 if contour.degenerate else 4)


def test_stolz_boundary():
    assert len(stolz_boundary(math.pi / 2).panels) == 1
    boundary = stolz_boundary(math.pi / 4)
    assert boundary.closure_mismatch() < 1e-12
    assert circle_contour(0j, 1.0).arclength == pytest.approx(2 * math.pi)


def test_cauchy_integrals():
    circle = circle_contour(0j, 1.0)
    value, error = contour_quadrature(circle, lambda z: 1.0 / z, 1e-12, vectorized=True)
    assert value == pytest.approx(2j * math.pi, abs=1e-12)
    value, _ = contour_quadrature(circle, lambda z: z**3, 1e-12, vectorized=True)
    assert abs(value) < 1e-12


def test_keyhole_winding():
    """The keyhole contour winds once around points of B_eta."""
    contour = keyhole_contour(math.pi / 3, 0.1)
    for a in (0.5, 0.95, -0.5j):
        value, _ = contour_quadrature(contour, lambda z: 1.0 / (z - a), 1e-10, vectorized=True)
        assert value == pytest.approx(2j * math.pi, abs=1e-9)


def test_arclength_measure():
    contour = keyhole_contour(math.pi / 4, 0.2)
    value, _ = contour_quadrature(
        contour, lambda z: np.ones_like(z), 1e-12, vectorized=True, measure="abs"
    )
    assert value.real == pytest.approx(contour.arclength, rel=1e-12)


def test_quadrature_stall():
    NumericContext.override(quad_max_depth=3)
    with pytest.raises(QuadratureStall):
        contour_quadrature(
            circle_contour(0j, 1.0), lambda z: np.sqrt(np.abs(z.real)), 1e-14, vectorized=True
        )


@pytest.mark.parametrize("eta, r", [(math.pi / 3, 0.1), (math.pi / 4, 0.9)])
def test_panel_derivative(eta, r):
    """dz matches a central difference of the parametrization."""
    h = 1e-6
    for panel in keyhole_contour(eta, r).panels:
        for t in (0.1, 0.5, 0.9):
            numeric = (panel.z(t + h) - panel.z(t - h)) / (2 * h)
            assert abs(numeric - panel.dz(t)) <= 1e-6 * (1.0 + abs(panel.dz(t)))


def test_keyhole_continuous_at_threshold():
    """Arclength and winding do not jump where the kite turns into two arcs."""
    eta = math.pi / 3
    threshold = math.cos(eta)
    below = keyhole_contour(eta, threshold - 1e-9)
    above = keyhole_contour(eta, threshold + 1e-9)
    assert not below.degenerate and above.degenerate
    assert below.arclength == pytest.approx(above.arclength, abs=1e-6)
    for contour in (below, above):
        value, _ = contour_quadrature(contour, lambda z: 1.0 / (z - 0.3), 1e-10, vectorized=True)
        assert value == pytest.approx(2j * math.pi, abs=1e-9)
