import math

import numpy as np
import pytest

from app.analysis import (
    basis_constant,
    diagonal_operator,
    discrete_characteristics,
    kreiss_constant,
    kreiss_test_matrix,
    nikolski_check,
    profile_operator,
    scaled_operator_check,
    sector_bound_check,
    sector_constant,
    spijker_check,
    sweep_angles,
    tadmor_ritt_constant,
    type_angle,
    unimodular_operator,
)
from app.base import EtaTooSmall, Overflow, SpectrumNotUnimodular, SpectrumOutsideDisc
from app.utils import ComplexMatrix


def test_sweep_angles():
    angles = sweep_angles(64)
    assert angles[0] == -math.pi
    assert 0.0 in angles
    assert math.pi * 2.0**-32 in angles
    assert np.all(np.diff(angles) > 0)


def test_tr_constant_zero():
    """For T = 0, |z-1|/|z| peaks at z = -1."""
    c, z = tadmor_ritt_constant(ComplexMatrix.zeros(2))
    assert c == pytest.approx(2.0, abs=1e-4)
    assert z.real < 0


def test_tr_constant_identity():
    c, _ = tadmor_ritt_constant(ComplexMatrix.identity(3))
    assert c == pytest.approx(1.0, abs=1e-12)


def test_tr_constant_diagonal():
    c, _ = tadmor_ritt_constant(diagonal_operator([1.0, 0.5]))
    assert c == pytest.approx(4.0 / 3.0, abs=1e-4)


def test_spectrum_outside_disc():
    with pytest.raises(SpectrumOutsideDisc):
        tadmor_ritt_constant(diagonal_operator([1.1, 0.0]))


def test_kreiss_constant(jordan_example):
    assert kreiss_constant(ComplexMatrix.zeros(2)) == 1.0
    assert kreiss_constant(jordan_example) > 1.0


def test_type_angle():
    assert type_angle(1.0) == 0.0
    assert type_angle(2.0) == pytest.approx(math.pi / 3)


def test_sector_constant():
    t = diagonal_operator([1.0, 0.5])
    c_tr = 4.0 / 3.0
    with pytest.raises(EtaTooSmall):
        sector_constant(t, 0.5, c_tr)
    report = sector_bound_check(t, 1.2, c_tr)
    assert report.passed
    assert report.lhs >= 1.0 - 1e-9


def test_power_scan_diagonal():
    pb, c1, converged = discrete_characteristics(diagonal_operator([0.5]))
    assert pb == pytest.approx(0.5)
    assert c1 == pytest.approx(0.5)
    assert converged


def test_power_scan_zero():
    pb, c1, converged = discrete_characteristics(ComplexMatrix.zeros(3))
    assert (pb, c1, converged) == (0.0, 1.0, True)


def test_power_scan_overflow():
    with pytest.raises(Overflow):
        discrete_characteristics(diagonal_operator([1.5]))


def test_power_scan_truncated():
    pb, _, converged = discrete_characteristics(ComplexMatrix.identity(2), n_max=100)
    assert pb == 1.0
    assert not converged


def test_spijker():
    report = spijker_check(kreiss_test_matrix(4, seed=7))
    assert report.passed
    assert report.inputs["N"] == 4


def test_nikolski():
    t = unimodular_operator(4, 0.0, seed=2)
    assert basis_constant(t.eigvecs) == pytest.approx(1.0)
    report = nikolski_check(t.eigvals, t.eigvecs, kreiss_constant(t), pb=1.0)
    assert report.passed
    assert report.inputs["eps"] == pytest.approx(0.32)
    with pytest.raises(SpectrumNotUnimodular):
        nikolski_check([0.5, 1.0], np.eye(2), 1.0, pb=1.0)


def test_basis_constant_skewed():
    x = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    assert basis_constant(x) > 1.0


def test_scaling_check():
    report = scaled_operator_check(diagonal_operator([1.0, 0.5]), 0.5)
    assert report.passed
    assert report.lhs == pytest.approx(1.6, abs=1e-3)


def test_profile_identity():
    profile = profile_operator(ComplexMatrix.identity(2), n_max=200)
    assert profile.c_tr == pytest.approx(1.0, abs=1e-12)
    assert profile.pb == 1.0
    assert profile.theta == pytest.approx(0.0, abs=1e-6)
    assert profile.c_kreiss <= profile.c_tr + 1e-12


def test_profile_roundtrip(jordan_example):
    profile = profile_operator(jordan_example)
    data = profile.to_json_data()
    assert type(profile).from_json_data(data) == profile
    assert profile.c_kreiss <= profile.c_tr
    assert profile.converged


@pytest.mark.parametrize("operator", ["diag", "random"])
def test_sector_constant_monotone(operator, diag_example, random_example):
    """C_eta shrinks as eta grows, and stays below C(T) / (1 - cos eta / cos theta)."""
    t = diag_example if operator == "diag" else random_example
    c_tr, _ = tadmor_ritt_constant(t)
    theta = type_angle(c_tr)
    etas = np.linspace(theta + 0.1, math.pi / 2, 5) if theta + 0.1 < math.pi / 2 else []
    values = [sector_constant(t, float(eta), c_tr) for eta in etas]
    for wider, narrower in zip(values, values[1:]):
        assert wider >= narrower - 1e-3
    for eta in etas:
        assert sector_bound_check(t, float(eta), c_tr).passed


def test_kreiss_below_tr(jordan_example, random_example):
    for t in (jordan_example, random_example):
        profile = profile_operator(t)
        assert profile.c_kreiss <= profile.c_tr + 1e-9
