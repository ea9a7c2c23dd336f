"""
Test operators and the C(T,m,n) sharpness search.

Every factory output carries the eigen data it was built from, so the
spectral precheck and the keyhole enclosure test never need an
eigenvalue solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
import scipy.linalg

from ..base import BadParameters, PrecisionLoss, parallel_map, prinlv
from ..core import StolzDomain, mat_poly_array, op_norm2, resolvent, stolz_contains
from ..utils import ComplexMatrix, NumericContext as NC, PolySpan, as_array
from ..utils.formats import MatrixLike
from .fcalc import besov_window, sup_norm_disc


def multiplier_operator(n: int) -> ComplexMatrix:
    """diag(1 - 2^-1, ..., 1 - 2^-N), the multiplier of a conditional basis."""
    if n < 1:
        raise BadParameters(f"Dimension must be positive, got {n}")
    if n > 64:
        raise PrecisionLoss(f"1 - 2^-{n} is 1 in binary64; the cap is N = 64")
    return ComplexMatrix.diagonal(1.0 - 2.0 ** -np.arange(1, n + 1, dtype=float))


def jordan_block(lam: complex, n: int) -> ComplexMatrix:
    if n < 1:
        raise BadParameters(f"Dimension must be positive, got {n}")
    entries = lam * np.eye(n, dtype=np.complex128) + np.eye(n, k=1, dtype=np.complex128)
    return ComplexMatrix(entries, eigvals=np.full(n, lam, dtype=np.complex128))


def cayley(a: MatrixLike) -> ComplexMatrix:
    """
    (I - A)(A + I)^-1.  The inverse is -R(-1, A), so a numerically
    singular A + I raises SingularResolvent.
    """
    arr = as_array(a)
    n = arr.shape[0]
    inverse = -as_array(resolvent(arr, -1.0))
    entries = (np.eye(n, dtype=np.complex128) - arr) @ inverse
    if isinstance(a, ComplexMatrix) and a.eigvals is not None:
        lam = a.eigvals
        return ComplexMatrix(entries, eigvals=(1.0 - lam) / (1.0 + lam), eigvecs=a.eigvecs)
    return ComplexMatrix(entries)


def _gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _similar(s: np.ndarray, eigvals: np.ndarray) -> ComplexMatrix:
    entries = s @ np.diag(eigvals) @ scipy.linalg.inv(s)
    return ComplexMatrix(entries, eigvals=eigvals, eigvecs=s)


def _tuned_similarity(g: np.ndarray, cond_cap: float) -> np.ndarray:
    """I + rho G with the largest rho in [0, 1] found by bisection keeping cond <= cap."""
    n = g.shape[0]
    identity = np.eye(n, dtype=np.complex128)
    if cond_cap <= 1.0:
        return identity
    if np.linalg.cond(identity + g) <= cond_cap:
        return identity + g
    lo, hi = 0.0, 1.0
    for _ in range(40):
        mid = (lo + hi) / 2.0
        if np.linalg.cond(identity + mid * g) <= cond_cap:
            lo = mid
        else:
            hi = mid
    return identity + lo * g


def stolz_sample(n: int, theta: float, rng: np.random.Generator, shrink: float = 0.98) -> np.ndarray:
    """n points uniform in B_theta by rejection from its bounding box, then shrunk."""
    domain = StolzDomain(theta)
    height = math.sin(theta)
    points: List[complex] = []
    while len(points) < n:
        w = complex(rng.uniform(-height, 1.0), rng.uniform(-height, height))
        if stolz_contains(domain, w):
            points.append(shrink * w)
    return np.asarray(points, dtype=np.complex128)


def random_tr(n: int, theta: float, cond_cap: float, seed: int) -> ComplexMatrix:
    """
    S D S^-1 with D sampled from a 0.98-shrunk B_theta and S = I + rho G,
    rho tuned so that cond(S) <= cond_cap.  Deterministic in `seed`.
    """
    if not 0.0 < theta < math.pi / 2:
        raise BadParameters(f"theta must lie in (0, pi/2), got {theta}")
    rng = np.random.default_rng(seed)
    eigvals = stolz_sample(n, theta, rng)
    g = _gaussian(rng, (n, n)) / math.sqrt(2.0 * n)
    return _similar(_tuned_similarity(g, cond_cap), eigvals)


def kreiss_test_matrix(n: int, seed: int) -> ComplexMatrix:
    """
    A unitarily rotated upper triangular matrix with eigenvalues uniform
    in 0.9 D and a random strictly upper part.
    """
    rng = np.random.default_rng(seed)
    radius = 0.9 * np.sqrt(rng.uniform(0.0, 1.0, n))
    eigvals = radius * np.exp(2j * math.pi * rng.uniform(0.0, 1.0, n))
    upper = np.triu(_gaussian(rng, (n, n)), k=1) * (0.3 / math.sqrt(n))
    q, _ = np.linalg.qr(_gaussian(rng, (n, n)))
    entries = q @ (np.diag(eigvals) + upper) @ q.conj().T
    return ComplexMatrix(entries, eigvals=eigvals)


def unimodular_operator(n: int, skew: float, seed: int) -> ComplexMatrix:
    """S diag(e^{i phi}) S^-1 with S = I + skew * G; skew = 0 gives a unitary diagonal."""
    rng = np.random.default_rng(seed)
    eigvals = np.exp(1j * np.sort(rng.uniform(0.0, 2.0 * math.pi, n)))
    s = np.eye(n, dtype=np.complex128) + skew * _gaussian(rng, (n, n)) / math.sqrt(2.0)
    return _similar(s, eigvals)


def diagonal_operator(values) -> ComplexMatrix:
    return ComplexMatrix.diagonal(values)


def _hpd_matrix(n: int, seed: int, low: float = 0.2, high: float = 5.0) -> ComplexMatrix:
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(_gaussian(rng, (n, n)))
    lam = rng.uniform(low, high, n).astype(np.complex128)
    return ComplexMatrix(q @ np.diag(lam) @ q.conj().T, eigvals=lam, eigvecs=q)


class OperatorKind(str, Enum):
    multiplier = "multiplier"
    jordan = "jordan"
    cayley = "cayley"
    random_tr = "random_tr"
    diagonal = "diagonal"
    kreiss = "kreiss"
    unimodular = "unimodular"


def _complex_param(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(re, im)
    return complex(value)


@dataclass
class OperatorSpec:
    """
    A named recipe for a test operator.  `params` holds the arguments of
    the matching factory; complex values are stored as [re, im] pairs.
    """

    kind: OperatorKind
    params: Dict[str, Any] = field(default_factory=dict)

    def build(self) -> ComplexMatrix:
        p = self.params
        try:
            if self.kind is OperatorKind.multiplier:
                return multiplier_operator(int(p["N"]))
            if self.kind is OperatorKind.jordan:
                return jordan_block(_complex_param(p["lambda"]), int(p["n"]))
            if self.kind is OperatorKind.cayley:
                return cayley(_hpd_matrix(int(p["N"]), int(p.get("seed", 0))))
            if self.kind is OperatorKind.random_tr:
                return random_tr(
                    int(p["N"]), float(p["theta"]), float(p["cond_cap"]), int(p.get("seed", 0))
                )
            if self.kind is OperatorKind.diagonal:
                return diagonal_operator([_complex_param(v) for v in p["values"]])
            if self.kind is OperatorKind.kreiss:
                return kreiss_test_matrix(int(p["N"]), int(p.get("seed", 0)))
            if self.kind is OperatorKind.unimodular:
                return unimodular_operator(
                    int(p["N"]), float(p.get("skew", 0.0)), int(p.get("seed", 0))
                )
        except KeyError as e:
            raise BadParameters(f"Operator '{self.kind.value}' needs parameter {e}")
        raise BadParameters(f"Unknown operator kind: {self.kind}")

    def label(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.kind.value}({args})"

    def to_json_data(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "params": self.params}

    @classmethod
    def from_json_data(cls, data: Dict[str, Any]) -> OperatorSpec:
        try:
            return cls(OperatorKind(data["kind"]), dict(data.get("params", {})))
        except (KeyError, ValueError) as e:
            raise BadParameters(f"Not a valid operator record: {e}")


def factory_specs(seed: int = 0) -> List[OperatorSpec]:
    """The standard family the verify suites run over."""
    return [
        OperatorSpec(OperatorKind.diagonal, {"values": [1.0, 0.5]}),
        OperatorSpec(OperatorKind.multiplier, {"N": 16}),
        OperatorSpec(OperatorKind.jordan, {"lambda": 0.5, "n": 4}),
        OperatorSpec(OperatorKind.cayley, {"N": 6, "seed": seed}),
        OperatorSpec(
            OperatorKind.random_tr,
            {"N": 8, "theta": math.pi / 4, "cond_cap": 20.0, "seed": seed},
        ),
    ]


def ctm_candidates(m: int, n: int, budget: int, seed: int) -> List[PolySpan]:
    """
    The candidate list of `ctm_search`, in order: the monomials z^m..z^n,
    dyadic windows shifted to start at z^m, then random Gaussian spans.
    Any prefix of a longer list is the shorter list.
    """
    if not 0 <= m <= n:
        raise BadParameters(f"Need 0 <= m <= n, got m={m}, n={n}")
    if n - m > 4096:
        raise BadParameters(f"Span width {n - m} exceeds 4096")
    width = n - m + 1
    candidates = [PolySpan.monomial(k) for k in range(m, n + 1)]
    j = 0
    while len(candidates) < budget:
        window = besov_window(j)
        if window.n - window.m + 1 > width and j > 0:
            break
        coeffs = window.dense()[window.m : window.m + width]
        candidates.append(PolySpan(m, coeffs))
        j += 1
    rng = np.random.default_rng(seed)
    while len(candidates) < budget:
        candidates.append(PolySpan(m, _gaussian(rng, width)))
    return candidates[: max(budget, 1)]


def ctm_search(t: MatrixLike, m: int, n: int, budget: int, seed: Optional[int] = None) -> float:
    """
    A lower bound for C(T,m,n): the largest ||p(T)|| / ||p||_D over the
    candidate list.
    """
    seed = NC.get().seed if seed is None else seed
    a = as_array(t)
    candidates = ctm_candidates(m, n, budget, seed)

    def ratio(p: PolySpan) -> float:
        norm = abs(p.coeffs[0]) if len(p.coeffs) == 1 else sup_norm_disc(p)
        return op_norm2(mat_poly_array(p, a)) / norm if norm > 0 else 0.0

    values = parallel_map(ratio, candidates)
    prinlv(f"C(T,{m},{n}) search over {len(candidates)} candidate(s): {max(values):.12g}")
    return float(max(values))


def uniform_basis_constant(vectors: MatrixLike, budget: int, seed: Optional[int] = None) -> float:
    """
    A lower bound for sup over unimodular alpha of ||X diag(alpha) X^-1||.
    Candidates: alpha = 1, then alternating random unimodular alphas and
    alphas aligned with a random dual pair (u, y) so that every
    alpha_k (X^-1 u)_k (X* y)_k is real and nonnegative.
    """
    seed = NC.get().seed if seed is None else seed
    x = as_array(vectors)
    if not np.isfinite(np.linalg.cond(x)):
        raise BadParameters("Basis vectors are linearly dependent")
    x_inv = scipy.linalg.inv(x)
    n = x.shape[0]
    rng = np.random.default_rng(seed)
    alphas = [np.ones(n, dtype=np.complex128)]
    while len(alphas) < budget:
        if len(alphas) % 2:
            alphas.append(np.exp(2j * math.pi * rng.uniform(0.0, 1.0, n)))
        else:
            u, y = _gaussian(rng, n), _gaussian(rng, n)
            weight = (x_inv @ u) * (x.conj().T @ y).conj()
            phase = np.where(np.abs(weight) > 0, np.conj(weight) / np.abs(weight), 1.0)
            alphas.append(phase.astype(np.complex128))
    values = parallel_map(lambda alpha: op_norm2(x @ np.diag(alpha) @ x_inv), alphas)
    return float(max(values))
