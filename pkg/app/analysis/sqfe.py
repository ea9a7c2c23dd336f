"""
Discrete square functions on Euclidean space.

    ||x||_T^2 = sum_{k>=1} k ||T^k x - T^{k-1} x||^2

together with the shifted-norm bound for rT, the uniformity in r of
the square function of rT, and the logarithmic envelope for the
polynomial calculus of operators with square function estimates.
"""
import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..base import BadParameters, DegenerateC1, Divergence, parallel_map, prinlv
from ..utils import (
    BoundReport,
    ComplexMatrix,
    NumericContext as NC,
    OperatorProfile,
    SquareNormResult,
    TailFlag,
    as_array,
)
from ..utils.formats import MatrixLike
from .profile import discrete_characteristics


def _as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise BadParameters("Vector has non-finite entries")
    return v


def _diagonal_entries(a: np.ndarray) -> Optional[np.ndarray]:
    if np.any(a - np.diag(np.diag(a))):
        return None
    return np.diag(a).copy()


def _closed_form(lam: np.ndarray, x: np.ndarray) -> Optional[float]:
    """
    For T = diag(lam) with every |lam_j| < 1 or lam_j = 1:
    ||x||_T^2 = sum |x_j|^2 |1 - lam_j|^2 / (1 - |lam_j|^2)^2.
    """
    fixed = lam == 1.0
    inside = np.abs(lam) < 1.0
    if not np.all(fixed | inside):
        return None
    l, v = lam[inside], x[inside]
    weights = np.abs(1.0 - l) ** 2 / (1.0 - np.abs(l) ** 2) ** 2
    return float(math.sqrt(np.sum(np.abs(v) ** 2 * weights)))


def square_norm(t: MatrixLike, x, eps: Optional[float] = None) -> SquareNormResult:
    """
    Partial sums of the square function, stopped after `sq_window`
    consecutive non-increasing terms below eps * (sum + eps), or at
    `sq_max_terms`.
    Diagonal operators also get the closed form.
    """
    settings = NC.get()
    eps = settings.sq_eps if eps is None else eps
    a = as_array(t)
    x = _as_vector(x)
    norm_sq = float(np.vdot(x, x).real)
    if norm_sq <= 0.0:
        raise BadParameters("The square function needs a nonzero vector")
    if x.shape[0] != a.shape[0]:
        raise BadParameters(f"Vector of length {x.shape[0]} for a {a.shape[0]}-dim operator")
    lam = _diagonal_entries(a)
    step = (lambda v: lam * v) if lam is not None else (lambda v: a @ v)
    limit = settings.sq_divergence * norm_sq
    previous, current = x, step(x)
    total, last, quiet = 0.0, math.inf, 0
    for k in range(1, settings.sq_max_terms + 1):
        diff = current - previous
        term = k * float(np.vdot(diff, diff).real)
        total += term
        if total > limit:
            raise Divergence(
                f"Square function partial sum exceeded {settings.sq_divergence:g} ||x||^2",
                {"k": k, "partial": total},
            )
        # terms still rising (lambda near 1) never count as quiet
        quiet = quiet + 1 if term < eps * (total + eps) and term <= last else 0
        last = term
        if quiet >= settings.sq_window:
            flag = TailFlag.converged
            break
        previous, current = current, step(current)
    else:
        flag = TailFlag.truncated
        prinlv(f"Square function truncated after {settings.sq_max_terms} terms.")
    closed = _closed_form(lam, x) if lam is not None else None
    return SquareNormResult(math.sqrt(total), k, flag, closed)


def shifted_square_norm(t: MatrixLike, x, m: int, r: float) -> SquareNormResult:
    """||(rT)^m x||_{rT}."""
    a = r * as_array(t)
    v = _as_vector(x)
    for _ in range(m):
        v = a @ v
    if not np.any(v):
        return SquareNormResult(0.0, 0, TailFlag.converged, 0.0)
    return square_norm(a, v)


def sfqe_lemma_bound(pb: float, c1: float, m: int, r: float) -> float:
    """
    sqrt(2) c1 r^m sqrt(b + ln(1 - 1/(2 (m+1) ln r))), b = 1 + pb^2/c1^2:
    the bound on ||(rT)^m x||_{rT} per unit ||x||.
    """
    if c1 == 0.0:
        raise DegenerateC1("c1 = 0 leaves the square function constant undefined")
    if not 0.0 < r < 1.0:
        raise BadParameters(f"r must lie in (0, 1), got {r}")
    if m < 0:
        raise BadParameters(f"m must be nonnegative, got {m}")
    b = 1.0 + pb**2 / c1**2
    inner = math.log(1.0 - 1.0 / (2.0 * (m + 1) * math.log(r)))
    return math.sqrt(2.0) * c1 * r**m * math.sqrt(b + inner)


def sfqe_lemma_check(
    t: MatrixLike, x, pb: float, c1: float, m: int, r: float
) -> BoundReport:
    measured = shifted_square_norm(t, x, m, r).value
    norm = float(np.linalg.norm(_as_vector(x)))
    return BoundReport(
        "sqfe_lemma", measured, sfqe_lemma_bound(pb, c1, m, r) * norm, {"m": m, "r": r}, 1e-9
    )


def diagonal_square_constant(t: MatrixLike) -> Optional[float]:
    """Exact K for diagonal operators covered by the closed form, else None."""
    lam = _diagonal_entries(as_array(t))
    if lam is None:
        return None
    fixed = lam == 1.0
    inside = np.abs(lam) < 1.0
    if not np.all(fixed | inside):
        return None
    if not np.any(inside):
        return 0.0
    l = lam[inside]
    return float(np.max(np.abs(1.0 - l) / (1.0 - np.abs(l) ** 2)))


def random_unit_vectors(dim: int, count: int, seed: int) -> List[np.ndarray]:
    rng = np.random.default_rng(seed)
    vectors = []
    for _ in range(count):
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        vectors.append(v / np.linalg.norm(v))
    return vectors


def sqfe_constant(t: MatrixLike, samples: int = 64, seed: Optional[int] = None) -> float:
    """
    The square function constant K: exact for diagonal operators, else
    the largest ||x||_T over random unit vectors (a lower bound).
    """
    exact = diagonal_square_constant(t)
    if exact is not None:
        return exact
    seed = NC.get().seed if seed is None else seed
    a = as_array(t)
    vectors = random_unit_vectors(a.shape[0], samples, seed)
    values = parallel_map(lambda v: square_norm(a, v).value, vectors)
    prinlv(f"Sampled square function constant over {samples} vector(s): lower bound.")
    return float(max(values))


def thm3_envelope(K: float, pb: float, c1: float, m: int, n: int) -> float:
    """
    sqrt(2) c1 K e^(1/2) sqrt(b + ln((n+2)/(m+1))), b = 1 + pb^2/c1^2,
    the calculus bound without its non-explicit absolute factor.
    """
    if c1 == 0.0:
        raise DegenerateC1("c1 = 0 leaves the envelope undefined")
    if not 0 <= m <= n:
        raise BadParameters(f"Need 0 <= m <= n, got m={m}, n={n}")
    b = 1.0 + pb**2 / c1**2
    return math.sqrt(2.0) * c1 * K * math.exp(0.5) * math.sqrt(b + math.log((n + 2) / (m + 1)))


def thm3_radius(m: int, n: int) -> float:
    """The contraction r = exp(-1/(2 (n-m+1))) used with the envelope."""
    return math.exp(-1.0 / (2.0 * (n - m + 1)))


def dual_envelopes(
    t: MatrixLike,
    profile: OperatorProfile,
    m: int,
    n: int,
    samples: int = 64,
    seed: Optional[int] = None,
) -> Dict[str, float]:
    """
    The envelope computed with K of T and with K of T*; powers of T and
    T* have equal norms, so pb and c1 are shared.
    """
    t = t if isinstance(t, ComplexMatrix) else ComplexMatrix(as_array(t))
    return {
        "T": thm3_envelope(sqfe_constant(t, samples, seed), profile.pb, profile.c1, m, n),
        "T*": thm3_envelope(
            sqfe_constant(t.conj_transpose(), samples, seed), profile.pb, profile.c1, m, n
        ),
    }


def thm3_chain(t: MatrixLike, x, pb: float, c1: float, m: int, n: int) -> BoundReport:
    """
    With r = exp(-1/(2(n-m+1))), the shifted-norm bound becomes
    sqrt(2) c1 r^m sqrt(b + ln((n+2)/(m+1))) ||x||; compare it with the
    measured ||(rT)^m x||_{rT}.
    """
    r = thm3_radius(m, n)
    lemma = sfqe_lemma_check(t, x, pb, c1, m, r)
    return BoundReport("thm3_chain", lemma.lhs, lemma.rhs, {"m": m, "n": n, "r": r}, lemma.tol)


def shift_identity_residual(t: MatrixLike, x, r_list: Sequence[float], terms: int = 100) -> float:
    """
    max over k = 1..terms and r of the coordinate-wise residual of
    (I-T) T^k x = (I-rT) T^k x - (1-r) T^(k+1) x,
    relative to 1 + max(|T^k x|, |T^(k+1) x|).
    """
    a = as_array(t)
    power = a @ _as_vector(x)
    worst = 0.0
    for _ in range(terms):
        following = a @ power
        lhs = power - following
        scale = 1.0 + max(float(np.max(np.abs(power))), float(np.max(np.abs(following))))
        for r in r_list:
            rhs = (power - r * following) - (1.0 - r) * following
            worst = max(worst, float(np.max(np.abs(lhs - rhs))) / scale)
        power = following
    return worst


def shift_identity_check(t: MatrixLike, x, r_list: Sequence[float]) -> BoundReport:
    residual = shift_identity_residual(t, x, r_list)
    return BoundReport("shift_identity", residual, 1e-12, {"r_list": list(r_list)})


def r_equivalence_check(
    t: MatrixLike, x, r_list: Sequence[float], pb: Optional[float] = None
) -> BoundReport:
    """
    sup over r of ||x||_{rT} against sqrt(2) (||x||_T^2 + pb^2 ||x||^2/(1+r)^2)^(1/2),
    which follows from
    (rT)^k x - (rT)^(k-1) x = r^(k-1) ((T^k - T^(k-1)) x - (1-r) T^k x).
    """
    if not r_list or any(not 0.0 < r < 1.0 for r in r_list):
        raise BadParameters(f"Radii must lie in (0, 1), got {list(r_list)}")
    a = as_array(t)
    v = _as_vector(x)
    pb = discrete_characteristics(a)[0] if pb is None else pb
    base = square_norm(a, v).value
    measured = [square_norm(r * a, v).value for r in r_list]
    norm_sq = float(np.vdot(v, v).real)
    r_min = min(r_list)
    rhs = math.sqrt(2.0 * (base**2 + pb**2 * norm_sq / (1.0 + r_min) ** 2))
    return BoundReport(
        "r_equivalence",
        max(measured),
        rhs,
        {
            "r_list": list(r_list),
            "norm_T": base,
            "norm_rT": measured,
            "identity_residual": shift_identity_residual(a, v, r_list),
        },
        1e-9,
    )
