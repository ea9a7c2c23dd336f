import math

import numpy as np
import pytest
import scipy.special

from app.base import BadParameters, DomainError
from app.core import (
    Lemma2Inputs,
    ei_lower_estimate,
    ei_upper_estimate,
    exp_integral,
    keyhole_kernel_integral,
    lemma2_bound,
    lemma2_component_integrals,
    lemma2_simplified_bound,
    thm2_tau_constant,
)


def test_exp_integral_values():
    assert exp_integral(1.0) == pytest.approx(0.219383934395520, rel=1e-12)
    assert exp_integral(0.5) == pytest.approx(0.559773594776160, rel=1e-12)
    assert exp_integral(0.25) < math.log(4.0)


def test_exp_integral_oracle():
    for s in np.logspace(-4, math.log10(50.0), 40):
        assert exp_integral(float(s)) == pytest.approx(scipy.special.exp1(s), rel=1e-11)


def test_exp_integral_domain():
    for s in (0.0, -1.0, math.inf):
        with pytest.raises(DomainError):
            exp_integral(s)


def test_ei_sandwich():
    for s in np.logspace(-4, math.log10(50.0), 200):
        s = float(s)
        assert ei_lower_estimate(s) < exp_integral(s) < ei_upper_estimate(s)


def test_lemma2_inputs():
    with pytest.raises(BadParameters):
        Lemma2Inputs(1.0, 0, 0.5)
    with pytest.raises(BadParameters):
        Lemma2Inputs(0.5, -1, 0.5)
    with pytest.raises(BadParameters):
        Lemma2Inputs(0.5, 0, math.pi / 2)


def test_lemma2_bound_formula():
    inp = Lemma2Inputs(0.1, 0, math.pi / 3)
    expected = 4.0 * math.sqrt(3.0) / 2.0 * math.log(8.0) + 4.0 * exp_integral(0.025) + 2 * math.pi
    assert lemma2_bound(inp) == pytest.approx(expected, rel=1e-14)


def test_simplified_bound():
    inp = Lemma2Inputs(0.2, 3, math.pi / 4)
    assert lemma2_bound(inp) <= lemma2_simplified_bound(inp)
    with pytest.raises(BadParameters):
        lemma2_simplified_bound(Lemma2Inputs(0.5, 3, math.pi / 4))


def test_kernel_integral_below_majorant():
    inp = Lemma2Inputs(0.1, 0, math.pi / 3)
    value = keyhole_kernel_integral(inp, 1e-8)
    assert 0.0 < value <= lemma2_bound(inp)


def test_component_integrals():
    """On the arc about 1, |z|^0/|z-1| = 1/r, so G3 is the arc angle 2(pi - eta)."""
    eta = math.pi / 3
    inp = Lemma2Inputs(0.1, 0, eta)
    parts = lemma2_component_integrals(inp, 1e-9)
    assert parts["g3"] == pytest.approx(2.0 * (math.pi - eta), rel=1e-9)
    assert parts["g3"] <= 2.0 * math.pi
    total = keyhole_kernel_integral(inp, 1e-9)
    assert sum(parts.values()) == pytest.approx(total, rel=1e-8)


def test_two_arc_case():
    inp = Lemma2Inputs(0.7, 2, math.pi / 3)
    parts = lemma2_component_integrals(inp, 1e-9)
    assert parts["g2"] == 0.0
    assert keyhole_kernel_integral(inp, 1e-8) <= lemma2_bound(inp)


def test_tau_constant():
    values = [thm2_tau_constant(t) for t in np.linspace(0.01, 0.99, 99)]
    assert min(values) < 6.0
    with pytest.raises(BadParameters):
        thm2_tau_constant(1.0)


@pytest.mark.parametrize("eta", [math.pi / 8, math.pi / 4, math.pi / 3, 0.49 * math.pi])
@pytest.mark.parametrize("m", [0, 1, 2, 5, 10, 50])
def test_kernel_integral_grid(eta, m):
    for r in (0.01, 0.1, 0.3, 0.7, 0.95):
        inp = Lemma2Inputs(r, m, eta)
        bound = lemma2_bound(inp)
        tol = 1e-8 * max(1.0, bound)
        assert keyhole_kernel_integral(inp, tol) <= bound + tol
