import numpy as np
import pytest

from app.analysis import jordan_block
from app.base import SingularResolvent
from app.core import mat_poly, op_norm2, resolvent, spectral_radius_bound
from app.utils import ComplexMatrix, PolySpan


def test_resolvent_jordan():
    """R(1, J) for the 2x2 Jordan block at 1/2."""
    r = resolvent(jordan_block(0.5, 2), 1.0)
    assert np.allclose(r.entries, [[2.0, 4.0], [0.0, 2.0]], rtol=0, atol=1e-14)
    assert r.residual < 1e-12


def test_resolvent_matches_inverse(rng):
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    z = 4.0 + 1.0j
    expected = np.linalg.inv(z * np.eye(6) - a)
    assert np.allclose(resolvent(a, z).entries, expected, rtol=1e-12, atol=1e-14)


def test_resolvent_singular():
    with pytest.raises(SingularResolvent):
        resolvent(ComplexMatrix.identity(3), 1.0)


def test_op_norm2_matches_svd(rng):
    for n in (1, 2, 5, 16):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        expected = np.linalg.norm(a, 2)
        assert op_norm2(a) == pytest.approx(expected, rel=1e-9)


def test_op_norm2_special_cases():
    assert op_norm2(ComplexMatrix.zeros(4)) == 0.0
    assert op_norm2(ComplexMatrix.diagonal([0.5, -2.0, 1j])) == 2.0
    assert op_norm2(jordan_block(0.0, 2)) == pytest.approx(1.0, rel=1e-12)


def test_mat_poly_horner(rng):
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    p = PolySpan(0, [1.0, 2.0, 3.0])
    expected = np.eye(5) + 2.0 * a + 3.0 * a @ a
    assert np.allclose(mat_poly(p, a).entries, expected, rtol=1e-12, atol=1e-12)
    shifted = p.shifted(2)
    assert np.allclose(mat_poly(shifted, a).entries, a @ a @ expected, rtol=1e-12, atol=1e-10)


def test_mat_poly_diagonal():
    values = [0.5, -0.25j, 0.9]
    p = PolySpan(1, [2.0, 0.0, 1.0 - 1.0j])
    expected = np.diag([p(v) for v in values])
    assert np.allclose(mat_poly(p, ComplexMatrix.diagonal(values)).entries, expected)


def test_spectral_radius_bound(rng):
    assert spectral_radius_bound(jordan_block(0.5, 3)) == 0.5
    a = np.diag([0.3, -0.7]) + np.triu(rng.standard_normal((2, 2)), 1)
    assert spectral_radius_bound(a) == pytest.approx(0.7, rel=1e-12)


def test_resolvent_identity(random_example):
    """R(z) - R(w) = (w - z) R(z) R(w)."""
    z, w = 1.5 + 0.2j, -1.2 + 0.8j
    rz, rw = resolvent(random_example, z).entries, resolvent(random_example, w).entries
    scale = 1.0 + np.linalg.norm(rz, 2) * np.linalg.norm(rw, 2)
    assert np.linalg.norm((rz - rw) - (w - z) * rz @ rw, 2) <= 1e-12 * scale


def test_resolvent_residual_attached(rng):
    a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    r = resolvent(a, 10.0)
    assert r.residual <= 1e-10 * (1.0 + np.linalg.norm(r.entries, 2))


def test_op_norm2_unitary_invariance(rng):
    a = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    u, _ = np.linalg.qr(rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7)))
    v, _ = np.linalg.qr(rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7)))
    assert op_norm2(u @ a @ v) == pytest.approx(op_norm2(a), rel=1e-9)


@pytest.mark.parametrize("dim", [1, 5, 32])
def test_mat_poly_monomials(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    a = 0.99 * a / np.linalg.norm(a, 2)
    for k in (0, 1, 2, 7, 33, 64):
        expected = np.linalg.matrix_power(a, k)
        assert np.allclose(mat_poly(PolySpan.monomial(k), a).entries, expected, rtol=0, atol=1e-12)
