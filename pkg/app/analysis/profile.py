"""
Scalar constants of an operator: the Tadmor-Ritt constant C(T), the
Kreiss constant, sector constants, the type angle, the power bound and
the discrete-derivative bound c1, together with the finite-dimensional
Spijker and Nikolski power-bound checks.

All sup-type constants are grid estimates: they are maxima over finite
sample sets, refined around the best sample, and therefore lower bounds
of the true supremum.
"""
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..base import (
    BadParameters,
    EtaTooSmall,
    Overflow,
    SpectrumNotUnimodular,
    SpectrumOutsideDisc,
    parallel_map,
    prinl,
    prinlv,
)
from ..core import op_norm2, resolvent_array, spectral_radius_bound, stolz_boundary
from ..utils import BoundReport, ComplexMatrix, NumericContext as NC, OperatorProfile
from ..utils import as_array
from ..utils.formats import MatrixLike


@dataclass(frozen=True)
class Sample:
    """A sweep point: the angle and radius are kept for tie-breaking."""

    angle: float
    radius: float
    value: float

    @property
    def z(self) -> complex:
        return self.radius * complex(math.cos(self.angle), math.sin(self.angle))


PointValue = Callable[[np.ndarray, complex], float]


def _tr_value(a: np.ndarray, z: complex) -> float:
    return abs(z - 1.0) * op_norm2(resolvent_array(a, z))


def _kreiss_value(a: np.ndarray, z: complex) -> float:
    return (abs(z) - 1.0) * op_norm2(resolvent_array(a, z))


def check_spectrum(t: MatrixLike) -> float:
    """Return the spectral-radius estimate, raising if it leaves the closed disc."""
    rho = spectral_radius_bound(t)
    slack = NC.get().spectral_slack
    if rho > 1.0 + slack:
        raise SpectrumOutsideDisc(
            f"Spectral radius {rho:.12g} exceeds 1 + {slack:g}", {"rho": rho}
        )
    return rho


def sweep_angles(grid: int) -> np.ndarray:
    """
    `grid` equispaced angles in [-pi, pi) plus the geometric cluster
    +-2^-j * pi around arg z = 0, sorted and deduplicated.
    """
    levels = NC.get().geometric_levels
    base = -math.pi + 2.0 * math.pi * np.arange(grid) / grid
    cluster = math.pi * 2.0 ** -np.arange(1, levels + 1, dtype=float)
    return np.unique(np.concatenate([base, cluster, -cluster, [0.0]]))


def _evaluate(a: np.ndarray, points: List[Tuple[float, float]], value: PointValue):
    def one(point):
        angle, radius = point
        return Sample(angle, radius, value(a, radius * complex(math.cos(angle), math.sin(angle))))

    return parallel_map(one, points)


def _best(samples: Sequence[Sample]) -> Sample:
    """Largest value; ties go to the smaller angle, then the smaller radius."""
    return max(samples, key=lambda s: (s.value, -s.angle, -s.radius))


def _refine(
    a: np.ndarray, best: Sample, step: float, value: PointValue, radial: float = 0.0
) -> Sample:
    """
    Shrink a local stencil around the best sample until two rounds agree
    to `refine_tol` relative.  A nonzero `radial` also moves the radius,
    scaling the ring offset by powers 2**(+-radial).
    """
    settings = NC.get()
    for _ in range(settings.refine_rounds):
        delta = best.radius - 1.0
        scales = (-radial, 0.0, radial) if radial else (0.0,)
        points = [
            (best.angle + step * k / 4.0, 1.0 + delta * 2.0**e)
            for k in range(-4, 5)
            for e in scales
            if k or e
        ]
        candidate = _best(_evaluate(a, points, value))
        previous = best
        if candidate.value > best.value:
            best = candidate
        step /= 4.0
        radial /= 4.0
        if best.value - previous.value <= settings.refine_tol * max(previous.value, 1e-300):
            break
    return best


def _ring_sweep(
    a: np.ndarray, radii: Sequence[float], angles: np.ndarray, value: PointValue
) -> Tuple[Sample, float]:
    points = [(float(angle), float(radius)) for angle in angles for radius in radii]
    best = _best(_evaluate(a, points, value))
    others = angles[angles != best.angle]
    step = float(np.min(np.abs(others - best.angle))) if others.size else math.pi
    return best, step


def tadmor_ritt_constant(t: MatrixLike, grid: Optional[int] = None) -> Tuple[float, complex]:
    """
    Estimate C(T) = sup_{|z|>1} ||(z-1) R(z,T)|| by sweeping rings just
    outside the unit circle, then refining around the best sample.
    The far-field value 1 is included.  Returns (estimate, maximizer).
    """
    settings = NC.get()
    grid = grid or settings.grid
    check_spectrum(t)
    a = as_array(t)
    radii = [1.0 + delta for delta in settings.ring_deltas]
    best, step = _ring_sweep(a, radii, sweep_angles(grid), _tr_value)
    best = _refine(a, best, step, _tr_value)
    prinlv(f"C(T) sweep: {best.value:.12g} at z={best.z:.6g}")
    return max(best.value, 1.0), best.z


def _kreiss_sweep(t: MatrixLike, grid: Optional[int] = None) -> Sample:
    settings = NC.get()
    grid = grid or settings.grid
    check_spectrum(t)
    a = as_array(t)
    deltas = np.logspace(
        math.log10(settings.kreiss_delta_min),
        math.log10(settings.kreiss_delta_max),
        settings.kreiss_rings,
    )
    best, step = _ring_sweep(a, [1.0 + d for d in deltas], sweep_angles(grid), _kreiss_value)
    return _refine(a, best, step, _kreiss_value, radial=1.0)


def kreiss_constant(t: MatrixLike, grid: Optional[int] = None) -> float:
    """
    Estimate sup_{|z|>1} (|z|-1) ||R(z,T)|| over log-spaced rings.
    The value approaches 1 as |z| grows, so the estimate is at least 1.
    """
    return max(_kreiss_sweep(t, grid).value, 1.0)


def type_angle(c_tr: float) -> float:
    """theta = arccos(1/C(T))."""
    if c_tr < 1.0 - 1e-12:
        raise BadParameters(f"A Tadmor-Ritt constant is at least 1, got {c_tr}")
    return math.acos(1.0 / max(c_tr, 1.0))


def _boundary_parameters(grid: int, singular: Sequence[float]) -> np.ndarray:
    levels = NC.get().geometric_levels
    t = [np.linspace(0.0, 1.0, grid + 1)]
    for t0 in singular:
        offsets = 2.0 ** -np.arange(1, levels + 1, dtype=float)
        t.append(t0 + offsets)
        t.append(t0 - offsets)
    t = np.concatenate(t)
    return np.unique(t[(t >= 0.0) & (t <= 1.0)])


def sector_constant(
    t: MatrixLike, eta: float, c_tr: Optional[float] = None, grid: Optional[int] = None
) -> float:
    """
    Estimate C_eta(T), the sup of ||(z-1) R(z,T)|| outside B_eta, as the
    maximum over a discretization of the boundary of B_eta.  The point
    z = 1 itself is left out; the parameter grids cluster towards it.
    """
    settings = NC.get()
    grid = grid or settings.grid
    if not 0.0 < eta <= math.pi / 2:
        raise BadParameters(f"eta must lie in (0, pi/2], got {eta}")
    if c_tr is None:
        c_tr, _ = tadmor_ritt_constant(t, grid)
    theta = type_angle(c_tr)
    if eta <= theta:
        raise EtaTooSmall(
            f"eta={eta:.6g} does not exceed the type angle {theta:.6g}",
            {"eta": eta, "theta": theta},
        )
    a = as_array(t)
    boundary = stolz_boundary(eta)

    def value_at(point):
        index, param = point
        z = complex(boundary.panels[index].z(param))
        if abs(z - 1.0) < 1e-15:
            return -1.0
        return _tr_value(a, z)

    points = []
    for index, panel in enumerate(boundary.panels):
        singular = [u for u in (0.0, 0.5, 1.0) if abs(complex(panel.z(u)) - 1.0) < 1e-12]
        points.extend((index, float(u)) for u in _boundary_parameters(grid, singular))
    values = parallel_map(value_at, points)
    best = int(np.argmax(values))
    index, param = points[best]
    best_value, step = values[best], 1.0 / grid
    for _ in range(settings.refine_rounds):
        local = [
            (index, min(max(param + step * k / 4.0, 0.0), 1.0)) for k in range(-4, 5) if k
        ]
        local_values = parallel_map(value_at, local)
        j = int(np.argmax(local_values))
        gain = local_values[j] - best_value
        if gain > 0:
            best_value, param = local_values[j], local[j][1]
        step /= 4.0
        if gain <= settings.refine_tol * best_value:
            break
    return float(best_value)


def _decayed(value: float, top: float) -> bool:
    return value == 0.0 or value < top / 2


def discrete_characteristics(
    t: MatrixLike, n_max: Optional[int] = None
) -> Tuple[float, float, bool]:
    """
    Scan pb = max ||T^n|| and c1 = max n ||T^n - T^{n-1}|| over n >= 1.

    The scan stops once both sequences have stayed below half their
    running maxima for `decay_window` consecutive steps (converged), or
    at `n_max` (not converged).
    """
    settings = NC.get()
    n_max = n_max or settings.n_max
    a = as_array(t)
    previous = np.eye(a.shape[0], dtype=np.complex128)
    power = a.copy()
    pb, c1, quiet = 0.0, 0.0, 0
    for n in range(1, n_max + 1):
        norm = op_norm2(power)
        if norm > settings.power_overflow:
            raise Overflow(
                f"||T^{n}|| = {norm:.3e} exceeds {settings.power_overflow:g}",
                {"n": n, "norm": norm},
            )
        step = n * op_norm2(power - previous)
        pb, c1 = max(pb, norm), max(c1, step)
        quiet = quiet + 1 if _decayed(norm, pb) and _decayed(step, c1) else 0
        if quiet >= settings.decay_window:
            prinlv(f"Power scan settled at n={n}: pb={pb:.12g}, c1={c1:.12g}")
            return pb, c1, True
        previous, power = power, power @ a
    prinlv(f"Power scan hit the cap n_max={n_max}: pb={pb:.12g}, c1={c1:.12g}")
    return pb, c1, False


def basis_constant(eigvecs: np.ndarray) -> float:
    """
    b(X) = max over contiguous index ranges [l, k] of the norm of the
    coordinate projection X diag(1_[l,k]) X^-1.
    """
    x = np.asarray(eigvecs, dtype=np.complex128)
    if not np.isfinite(np.linalg.cond(x)):
        raise BadParameters("Eigenvector matrix is singular")
    x_inv = scipy.linalg.inv(x)
    n = x.shape[0]
    ranges = [(lo, hi) for lo in range(n) for hi in range(lo + 1, n + 1)]
    norms = parallel_map(lambda r: op_norm2(x[:, r[0] : r[1]] @ x_inv[r[0] : r[1], :]), ranges)
    return max(norms)


def nikolski_check(
    eigvals: Sequence[complex],
    eigvecs: MatrixLike,
    c_kreiss: float,
    pb: Optional[float] = None,
    n_max: Optional[int] = None,
) -> BoundReport:
    """
    Nikolski's bound for an operator with unimodular spectrum given by
    an explicit eigenbasis: pb <= 2 pi C_Kreiss N^(1 - 0.32/b^2).
    """
    lam = np.asarray(eigvals, dtype=np.complex128)
    off = np.max(np.abs(np.abs(lam) - 1.0))
    if off > 1e-10:
        raise SpectrumNotUnimodular(
            f"Eigenvalue modulus off the unit circle by {off:.3e}", {"deviation": off}
        )
    x = as_array(eigvecs)
    b = basis_constant(x)
    eps = 0.32 / b**2
    n = len(lam)
    if pb is None:
        t = x @ np.diag(lam) @ scipy.linalg.inv(x)
        pb, _, _ = discrete_characteristics(t, n_max)
    return BoundReport(
        "nikolski",
        pb,
        2.0 * math.pi * c_kreiss * n ** (1.0 - eps),
        {"N": n, "b": b, "eps": eps, "c_kreiss": c_kreiss},
        NC.get().bound_tol,
    )


def spijker_check(
    t: MatrixLike, c_kreiss: Optional[float] = None, pb: Optional[float] = None
) -> BoundReport:
    """pb <= e C_Kreiss N."""
    n = as_array(t).shape[0]
    c_kreiss = kreiss_constant(t) if c_kreiss is None else c_kreiss
    pb = discrete_characteristics(t)[0] if pb is None else pb
    return BoundReport(
        "spijker", pb, math.e * c_kreiss * n, {"N": n, "c_kreiss": c_kreiss}, NC.get().bound_tol
    )


def profile_operator(
    t: MatrixLike, grid: Optional[int] = None, n_max: Optional[int] = None
) -> OperatorProfile:
    """Compute every scalar constant of `t` into one OperatorProfile."""
    settings = NC.get()
    grid = grid or settings.grid
    n_max = n_max or settings.n_max
    rho = check_spectrum(t)
    c_tr, argmax = tadmor_ritt_constant(t, grid)
    kreiss = _kreiss_sweep(t, grid)
    c_kreiss = max(kreiss.value, 1.0)
    # (|z|-1) <= |z-1|, so the Kreiss maximizer is also a C(T) sample
    at_kreiss = _tr_value(as_array(t), kreiss.z)
    if at_kreiss > c_tr:
        c_tr, argmax = at_kreiss, kreiss.z
    pb, c1, converged = discrete_characteristics(t, n_max)
    if not converged:
        prinl(f"Power scan truncated at n_max={n_max}; pb and c1 are lower estimates.")
    return OperatorProfile(
        c_tr=c_tr,
        c_kreiss=c_kreiss,
        theta=type_angle(c_tr),
        pb=pb,
        c1=c1,
        spectral_radius_bound=rho,
        grid_size=grid,
        n_max=n_max,
        argmax_z=complex(argmax),
        converged=converged,
    )


def scaled_operator_check(
    t: MatrixLike, r: float, c_tr: Optional[float] = None, grid: Optional[int] = None
) -> BoundReport:
    """C(rT) <= 2 C(T) / (1 + r)."""
    if not 0.0 < r <= 1.0:
        raise BadParameters(f"Scale factor must lie in (0, 1], got {r}")
    if c_tr is None:
        c_tr, _ = tadmor_ritt_constant(t, grid)
    scaled = ComplexMatrix(as_array(t) * r)
    c_scaled, _ = tadmor_ritt_constant(scaled, grid)
    return BoundReport(
        "scaling", c_scaled, 2.0 * c_tr / (1.0 + r), {"r": r, "c_tr": c_tr}, 1e-3
    )


def sector_bound_check(
    t: MatrixLike, eta: float, c_tr: Optional[float] = None, grid: Optional[int] = None
) -> BoundReport:
    """C_eta(T) <= C(T) / (1 - cos(eta)/cos(theta))."""
    if c_tr is None:
        c_tr, _ = tadmor_ritt_constant(t, grid)
    theta = type_angle(c_tr)
    c_eta = sector_constant(t, eta, c_tr, grid)
    rhs = c_tr / (1.0 - math.cos(eta) / math.cos(theta))
    return BoundReport(
        "sector", c_eta, rhs, {"eta": eta, "theta": theta, "c_tr": c_tr}, 1e-3
    )
