"""
Dense complex matrix kernels: resolvent solves through an LU
factorization with partial pivoting, the Euclidean operator norm
by power iteration, and polynomial evaluation by Horner's rule.
"""
from typing import Optional

import numpy as np
import scipy.linalg

from ..base import NoConvergence, SingularResolvent, prinlv
from ..utils import ComplexMatrix, NumericContext as NC, PolySpan, as_array
from ..utils.formats import MatrixLike


def lu_factor_checked(a: np.ndarray, pivot_tol: Optional[float] = None):
    """
    Factor `a` as P L U and check the pivots of U against
    `pivot_tol * max|a_ij|`.  Returns the scipy factorization.
    """
    pivot_tol = NC.get().pivot_tol if pivot_tol is None else pivot_tol
    scale = float(np.max(np.abs(a)))
    lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if scale == 0.0 or smallest < pivot_tol * scale:
        raise SingularResolvent(
            "Pivot below tolerance: point is numerically in the spectrum",
            {"pivot": smallest, "scale": scale},
        )
    return lu, piv


def resolvent(t: MatrixLike, z: complex) -> ComplexMatrix:
    """
    R(z, T) = (zI - T)^{-1}, with the residual ||(zI-T)M - I|| attached.
    """
    a = as_array(t)
    n = a.shape[0]
    shifted = z * np.eye(n, dtype=np.complex128) - a
    factors = lu_factor_checked(shifted)
    identity = np.eye(n, dtype=np.complex128)
    result = scipy.linalg.lu_solve(factors, identity, check_finite=False)
    residual = float(np.linalg.norm(shifted @ result - identity, 2))
    bound = NC.get().residual_tol * (1.0 + float(np.linalg.norm(result, 2)))
    if residual > bound:
        # not an error: the residual rides on the result for callers to check
        prinlv(f"Resolvent at z={z} has residual {residual:.3e} above {bound:.3e}.")
    return ComplexMatrix(result, residual=residual)


def resolvent_array(a: np.ndarray, z: complex) -> np.ndarray:
    """Resolvent without wrapping, for inner loops."""
    n = a.shape[0]
    shifted = z * np.eye(n, dtype=np.complex128) - a
    factors = lu_factor_checked(shifted)
    return scipy.linalg.lu_solve(
        factors, np.eye(n, dtype=np.complex128), check_finite=False
    )


def _rayleigh_sigma(gram: np.ndarray, x: np.ndarray) -> float:
    num = np.vdot(x, gram @ x).real
    den = np.vdot(x, x).real
    return float(np.sqrt(max(num, 0.0) / den)) if den > 0 else 0.0


def op_norm2(m: MatrixLike) -> float:
    """
    The largest singular value, by power iteration on M*M.

    The Gram matrix is first squared repeatedly (with rescaling) so
    the start vector lands in the dominant eigenspace; then plain
    power steps run until successive estimates agree to `norm_tol`.
    One restart with a fresh start vector is allowed on stagnation.
    """
    settings = NC.get()
    a = as_array(m)
    if not np.any(a):
        return 0.0
    if not np.any(a - np.diag(np.diag(a))):
        return float(np.max(np.abs(np.diag(a))))
    scale = float(np.max(np.abs(a)))
    a = a / scale
    gram = a.conj().T @ a
    n = gram.shape[0]
    rng = np.random.default_rng(settings.norm_seed + n)
    accel = gram / np.max(np.abs(gram))
    for _ in range(40):
        nxt = accel @ accel
        top = np.max(np.abs(nxt))
        if top == 0.0 or not np.isfinite(top):
            break
        nxt = nxt / top
        settled = np.max(np.abs(nxt - accel)) < 1e-15
        accel = nxt
        if settled:
            break
    for attempt in range(2):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        y = accel @ x
        if np.linalg.norm(y) > 0:
            x = y
        x = x / np.linalg.norm(x)
        sigma = _rayleigh_sigma(gram, x)
        for it in range(settings.norm_max_iter):
            y = gram @ x
            ny = np.linalg.norm(y)
            if ny == 0.0:
                break
            x = y / ny
            new_sigma = _rayleigh_sigma(gram, x)
            if abs(new_sigma - sigma) <= settings.norm_tol * new_sigma:
                return new_sigma * scale
            sigma = new_sigma
        prinlv(f"Power iteration stagnated (attempt {attempt + 1}); restarting.")
    raise NoConvergence(
        "Power iteration did not converge within the iteration cap",
        {"estimate": sigma * scale},
    )


def mat_poly(p: PolySpan, t: MatrixLike) -> ComplexMatrix:
    """T^m p0(T) with p0 evaluated by Horner's rule on matrices."""
    return ComplexMatrix(mat_poly_array(p, as_array(t)))


def mat_poly_array(p: PolySpan, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    diagonal = np.diag(a)
    if not np.any(a - np.diag(diagonal)):
        return np.diag(np.asarray(p.evaluate(diagonal), dtype=np.complex128))
    acc = np.zeros((n, n), dtype=np.complex128)
    identity = np.eye(n, dtype=np.complex128)
    for c in p.coeffs[::-1]:
        acc = acc @ a + c * identity
    if p.m:
        acc = np.linalg.matrix_power(a, p.m) @ acc
    return acc


def spectral_radius_bound(t: MatrixLike) -> float:
    """
    An upper estimate of the spectral radius: the largest eigenvalue
    modulus when eigen data is known, else from the eigenvalue solver.
    """
    if isinstance(t, ComplexMatrix) and t.eigvals is not None:
        return float(np.max(np.abs(t.eigvals)))
    return float(np.max(np.abs(scipy.linalg.eigvals(as_array(t), check_finite=False))))
