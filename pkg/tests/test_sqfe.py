import math

import numpy as np
import pytest

from app.analysis import (
    diagonal_operator,
    dual_envelopes,
    jordan_block,
    profile_operator,
    r_equivalence_check,
    random_tr,
    random_unit_vectors,
    sfqe_lemma_bound,
    sfqe_lemma_check,
    shift_identity_check,
    sqfe_constant,
    square_norm,
    thm3_chain,
    thm3_envelope,
    thm3_radius,
)
from app.analysis.profile import discrete_characteristics
from app.analysis.sqfe import shift_identity_residual
from app.base import BadParameters, DegenerateC1, Divergence
from app.utils import ComplexMatrix, TailFlag, load_run_config
from app.workers.suites import thm3_shape_reports

X = np.array([1.0, 2.0 - 1.0j])


def test_square_norm_of_zero():
    result = square_norm(ComplexMatrix.zeros(2), X)
    assert result.value == pytest.approx(np.linalg.norm(X))
    assert result.closed_form == pytest.approx(np.linalg.norm(X))
    assert result.tail_flag is TailFlag.converged


def test_square_norm_of_identity():
    result = square_norm(ComplexMatrix.identity(2), X)
    assert result.value == 0.0
    assert result.closed_form == 0.0


@pytest.mark.parametrize("lam", [0.3, 0.7, 0.95, -0.5])
def test_square_norm_closed_form(lam):
    """For T = lam I the square function is ||x|| / (1 + lam)."""
    result = square_norm(diagonal_operator([lam, lam]), X)
    expected = np.linalg.norm(X) / (1.0 + lam)
    assert result.value == pytest.approx(expected, rel=1e-8)
    assert result.consistent


def test_square_norm_agrees_off_diagonal():
    """A unitary change of basis leaves the square function alone."""
    q, _ = np.linalg.qr(np.array([[1.0, 2.0], [3.0, -1.0]], dtype=complex))
    t = q @ np.diag([0.3, 0.8]) @ q.conj().T
    rotated = square_norm(t, q @ X).value
    direct = square_norm(diagonal_operator([0.3, 0.8]), X).value
    assert rotated == pytest.approx(direct, rel=1e-8)


def test_square_norm_divergence():
    with pytest.raises(Divergence):
        square_norm(diagonal_operator([1.01]), [1.0])


def test_square_norm_rejects_zero_vector():
    with pytest.raises(BadParameters):
        square_norm(ComplexMatrix.zeros(2), [0.0, 0.0])


def test_sfqe_lemma_bound():
    r = math.exp(-0.5)
    expected = math.sqrt(2.0) * math.sqrt(2.0 + math.log(2.0))
    assert sfqe_lemma_bound(1.0, 1.0, 0, r) == pytest.approx(expected)
    with pytest.raises(DegenerateC1):
        sfqe_lemma_bound(1.0, 0.0, 0, r)
    with pytest.raises(DegenerateC1):
        thm3_envelope(1.0, 1.0, 0.0, 0, 4)
    with pytest.raises(BadParameters):
        sfqe_lemma_bound(1.0, 1.0, 0, 1.0)


@pytest.mark.parametrize("m, n", [(0, 0), (0, 10), (3, 40), (16, 16)])
def test_radius_choice(m, n):
    """At r = exp(-1/(2(n-m+1))) the lemma bound turns into the envelope."""
    r = thm3_radius(m, n)
    pb, c1 = 1.3, 0.7
    lemma = sfqe_lemma_bound(pb, c1, m, r)
    envelope = thm3_envelope(1.0, pb, c1, m, n)
    assert lemma == pytest.approx(envelope * r**m / math.exp(0.5))


def test_lemma_on_diagonal_and_jordan():
    for t in (diagonal_operator([0.3, 0.9]), jordan_block(0.5, 3)):
        pb, c1, _ = discrete_characteristics(t)
        x = np.ones(t.dim, dtype=complex)
        for m in (0, 1, 4):
            for r in (0.5, 0.9):
                assert sfqe_lemma_check(t, x, pb, c1, m, r).passed
        assert thm3_chain(t, x, pb, c1, 2, 20).passed


def test_sqfe_constant():
    assert sqfe_constant(ComplexMatrix.zeros(3)) == pytest.approx(1.0)
    assert sqfe_constant(diagonal_operator([0.2, 0.5])) == pytest.approx(1.0 / 1.2)
    assert sqfe_constant(diagonal_operator([1.0, 1.0])) == 0.0


def test_sqfe_constant_sampled(jordan_example):
    k = sqfe_constant(jordan_example, samples=8, seed=1)
    assert k > 0.0
    assert k == sqfe_constant(jordan_example, samples=8, seed=1)


def test_shift_identity(random_example):
    x = np.arange(1, random_example.dim + 1, dtype=complex)
    assert shift_identity_check(random_example, x, [0.1, 0.5, 0.9]).passed


def test_r_equivalence_on_identity():
    x = np.array([3.0, 4.0])
    report = r_equivalence_check(ComplexMatrix.identity(2), x, [0.25, 0.5, 0.9], pb=1.0)
    assert report.inputs["norm_T"] == 0.0
    for r, value in zip([0.25, 0.5, 0.9], report.inputs["norm_rT"]):
        assert value == pytest.approx(5.0 / (1.0 + r), rel=1e-8)
    assert report.passed
    with pytest.raises(BadParameters):
        r_equivalence_check(ComplexMatrix.identity(2), x, [1.0])


def test_dual_envelopes(jordan_example):
    profile = profile_operator(jordan_example)
    envelopes = dual_envelopes(jordan_example, profile, 0, 16, samples=8, seed=0)
    assert set(envelopes) == {"T", "T*"}
    assert all(v > 0.0 for v in envelopes.values())


def test_shift_identity_random_tr():
    t = random_tr(8, math.pi / 4, 20.0, 0)
    x = random_unit_vectors(8, 1, 0)[0]
    report = shift_identity_check(t, x, [0.5, 0.9, 0.99])
    assert report.lhs <= 1e-12
    assert report.passed


def test_shift_identity_residual_small_for_normal_operator():
    x = np.array([1.0, -2.0, 0.5j])
    t = diagonal_operator([0.99, -0.5, 0.3j])
    assert shift_identity_residual(t, x, [0.1, 0.5, 0.99]) <= 1e-14


def test_envelope_shape():
    """The envelope grows like sqrt(b + ln((n+2)/(m+1))) in n."""
    pb, c1 = 1.0, 0.5
    b = 1.0 + pb**2 / c1**2
    values = [thm3_envelope(1.0, pb, c1, 0, 2**k) for k in range(2, 11)]
    assert values == sorted(values)
    ratio = thm3_envelope(1.0, pb, c1, 0, 1024) / thm3_envelope(1.0, pb, c1, 0, 16)
    assert ratio == pytest.approx(math.sqrt((b + math.log(1026)) / (b + math.log(18))))
    assert thm3_envelope(2.0, pb, c1, 0, 16) == pytest.approx(2.0 * thm3_envelope(1.0, pb, c1, 0, 16))


def test_multiplier_stays_under_envelope():
    cfg = load_run_config(command="verify", suite="sqfe", budget=16)
    reports = thm3_shape_reports(cfg)
    assert [r.inputs["k"] for r in reports] == list(range(5, 11))
    assert all(r.passed for r in reports)
    assert set(reports[0].inputs["envelopes_at_16"]) == {"T", "T*"}
