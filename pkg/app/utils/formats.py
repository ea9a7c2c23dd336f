from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, Optional, Sequence, Union

import numpy as np

from ..base import BadParameters, ShapeError

MatrixLike = Union["ComplexMatrix", np.ndarray, Sequence[Sequence[complex]]]


@dataclass
class ComplexMatrix:
    """
    A dense square complex matrix.  Entries are held as a
    C-contiguous complex128 array; instances are treated as immutable.

    `residual` is attached by the resolvent solver as its certificate,
    and the factory attaches `eigvals`/`eigvecs` when they are known
    by construction.
    """

    entries: np.ndarray
    residual: Optional[float] = None
    eigvals: Optional[np.ndarray] = None
    eigvecs: Optional[np.ndarray] = None

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.complex128, order="C", copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ShapeError(f"Matrix must be square and non-empty, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise BadParameters("Matrix has non-finite entries")
        a.setflags(write=False)
        self.entries = a

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int) -> ComplexMatrix:
        return cls(np.eye(dim, dtype=np.complex128))

    @classmethod
    def zeros(cls, dim: int) -> ComplexMatrix:
        return cls(np.zeros((dim, dim), dtype=np.complex128))

    @classmethod
    def diagonal(cls, values: Iterable[complex]) -> ComplexMatrix:
        values = np.asarray(list(values), dtype=np.complex128)
        return cls(
            np.diag(values), eigvals=values, eigvecs=np.eye(len(values), dtype=complex)
        )

    def is_diagonal(self) -> bool:
        a = self.entries
        return bool(np.count_nonzero(a - np.diag(np.diag(a))) == 0)

    def conj_transpose(self) -> ComplexMatrix:
        return ComplexMatrix(self.entries.conj().T)

    def scaled(self, factor: complex) -> ComplexMatrix:
        eigvals = None if self.eigvals is None else self.eigvals * factor
        return ComplexMatrix(
            self.entries * factor, eigvals=eigvals, eigvecs=self.eigvecs
        )

    def __eq__(self, other):
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)


def as_matrix(m: MatrixLike) -> ComplexMatrix:
    if isinstance(m, ComplexMatrix):
        return m
    return ComplexMatrix(np.asarray(m))


def as_array(m: MatrixLike) -> np.ndarray:
    return m.entries if isinstance(m, ComplexMatrix) else np.asarray(m, dtype=complex)


@dataclass
class PolySpan:
    """
    A polynomial p(z) = sum_{k=m}^{n} a_k z^k, stored as the
    lowest degree `m` and the coefficients `coeffs[j] = a_{m+j}`.
    """

    m: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.m < 0:
            raise BadParameters(f"Lowest degree must be nonnegative, got {self.m}")
        c = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if c.size == 0:
            raise BadParameters("A polynomial span needs at least one coefficient")
        self.coeffs = c

    @property
    def n(self) -> int:
        return self.m + len(self.coeffs) - 1

    @classmethod
    def monomial(cls, k: int, coefficient: complex = 1.0) -> PolySpan:
        return cls(k, [coefficient])

    @classmethod
    def from_dense(cls, dense: Sequence[complex]) -> PolySpan:
        """Build from a dense list a_0, a_1, ... (leading zeros become m)."""
        dense = np.asarray(dense, dtype=np.complex128)
        nonzero = np.flatnonzero(dense)
        if nonzero.size == 0:
            return cls(0, [0.0])
        return cls(int(nonzero[0]), dense[nonzero[0] :]).normalized()

    def normalized(self) -> PolySpan:
        """Trim trailing zero coefficients (keeping at least one)."""
        nonzero = np.flatnonzero(self.coeffs)
        if nonzero.size == 0:
            return PolySpan(self.m, [0.0])
        return PolySpan(self.m, self.coeffs[: nonzero[-1] + 1])

    def dense(self) -> np.ndarray:
        out = np.zeros(self.n + 1, dtype=np.complex128)
        out[self.m :] = self.coeffs
        return out

    def coefficient(self, k: int) -> complex:
        if k < self.m or k > self.n:
            return 0j
        return complex(self.coeffs[k - self.m])

    def evaluate(self, z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        """Evaluate z^m * p0(z) with p0 by Horner's rule."""
        z = np.asarray(z, dtype=np.complex128)
        p0 = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            p0 = p0 * z + c
        result = p0 * z ** self.m if self.m else p0
        return complex(result) if result.ndim == 0 else result

    def __call__(self, z):
        return self.evaluate(z)

    def times(self, other: PolySpan) -> PolySpan:
        return PolySpan(self.m + other.m, np.convolve(self.coeffs, other.coeffs))

    def shifted(self, k: int) -> PolySpan:
        """Multiply by z^k (the tau_k factor)."""
        return PolySpan(self.m + k, self.coeffs)

    def to_json_data(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @classmethod
    def from_json_data(cls, data: Dict[str, Any]) -> PolySpan:
        try:
            coeffs = [complex(re, im) for re, im in data["coeffs"]]
            return cls(int(data.get("m", 0)), coeffs)
        except (KeyError, TypeError, ValueError) as e:
            raise BadParameters(f"Not a valid polynomial record: {e}")


@dataclass
class BoundReport:
    """One verified inequality instance: lhs <= rhs (+ tol)."""

    name: str
    lhs: float
    rhs: float
    inputs: Dict[str, Any] = field(default_factory=dict)
    tol: float = 0.0

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return bool(self.lhs <= self.rhs + self.tol)

    def inputs_json(self) -> str:
        return json.dumps(self.inputs, sort_keys=True, separators=(",", ":"), default=_json_default)

    def to_json_data(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "pass": self.passed,
            "inputs": json.loads(self.inputs_json()),
        }


def _json_default(value: Any):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return [_json_default(v) if np.iscomplexobj(v) else v for v in value.tolist()]
    raise TypeError(f"Not JSON serializable: {type(value)}")


@dataclass
class OperatorProfile:
    """The scalar constants attached to an operator."""

    c_tr: float
    c_kreiss: float
    theta: float
    pb: float
    c1: float
    spectral_radius_bound: float
    grid_size: int
    n_max: int
    argmax_z: complex
    converged: bool = True

    def to_json_data(self) -> Dict[str, Any]:
        return {
            "c_tr": self.c_tr,
            "c_kreiss": self.c_kreiss,
            "theta": self.theta,
            "pb": self.pb,
            "c1": self.c1,
            "spectral_radius_bound": self.spectral_radius_bound,
            "grid_size": self.grid_size,
            "n_max": self.n_max,
            "argmax_z": [self.argmax_z.real, self.argmax_z.imag],
            "converged": self.converged,
        }

    @classmethod
    def from_json_data(cls, data: Dict[str, Any]) -> OperatorProfile:
        re, im = data["argmax_z"]
        return cls(**{**data, "argmax_z": complex(re, im)})


class TailFlag(str, Enum):
    converged = "converged"
    truncated = "truncated"


@dataclass
class SquareNormResult:
    value: float
    terms_used: int
    tail_flag: TailFlag
    closed_form: Optional[float] = None

    @property
    def consistent(self) -> bool:
        if self.closed_form is None:
            return True
        return math.fabs(self.value - self.closed_form) <= 1e-8 * (1 + self.closed_form)
