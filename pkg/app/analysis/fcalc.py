"""
Functional calculus of a Tadmor-Ritt operator: the contour-integral
evaluation of f(T) over keyhole boundaries, polynomial sup norms on
the disc and on Stolz domains, the calculus bound formulas, Bernstein
inequalities, and the dyadic (Besov) window decomposition.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import scipy.optimize

from ..base import (
    BadParameters,
    SingularResolvent,
    SpectrumTouchesContour,
    parallel_map,
    prinlv,
)
from ..core import (
    KeyholeContour,
    Lemma2Inputs,
    StolzDomain,
    contour_nodes,
    contour_quadrature,
    keyhole_contour,
    lemma2_bound,
    mat_poly,
    op_norm2,
    resolvent_array,
    stolz_boundary,
    stolz_contains,
    thm2_tau_constant,
)
from .profile import check_spectrum, sector_constant, tadmor_ritt_constant, type_angle
from ..utils import (
    BoundReport,
    ComplexMatrix,
    NumericContext as NC,
    OperatorProfile,
    PolySpan,
    as_array,
    as_matrix,
)
from ..utils.formats import MatrixLike

Holomorphic = Union[PolySpan, Callable[[complex], complex]]


@dataclass
class CalculusResult:
    """f(T) with the quadrature diagnostics of its evaluation."""

    matrix: ComplexMatrix
    error_estimate: float
    eta: float
    r: float

    def diagnostics(self) -> Dict[str, float]:
        return {"error_estimate": self.error_estimate, "eta": self.eta, "r": self.r}


def default_contour_parameters(
    t: MatrixLike, degree: Optional[int], profile: Optional[OperatorProfile] = None
) -> Tuple[float, float]:
    """
    eta halfway between the type angle and pi/2; r = 1/(n+1) for a
    degree-n polynomial, never above 1/2.
    """
    if profile is not None:
        theta = profile.theta
    else:
        theta = type_angle(tadmor_ritt_constant(t)[0])
    eta = (theta + math.pi / 2) / 2.0
    r = 0.5 if degree is None else min(1.0 / (degree + 1), 0.5)
    return eta, r


def _check_enclosed(t: MatrixLike, contour: KeyholeContour):
    if not isinstance(t, ComplexMatrix) or t.eigvals is None:
        return
    domain = StolzDomain(contour.eta)
    for lam in t.eigvals:
        lam = complex(lam)
        if not (stolz_contains(domain, lam) or abs(lam - 1.0) < contour.r):
            raise SpectrumTouchesContour(
                f"Eigenvalue {lam} is not inside the keyhole domain",
                {"eta": contour.eta, "r": contour.r},
            )


def holomorphic_calculus(
    t: MatrixLike,
    f: Holomorphic,
    eta: Optional[float] = None,
    r: Optional[float] = None,
    tol: Optional[float] = None,
    profile: Optional[OperatorProfile] = None,
) -> CalculusResult:
    """
    f(T) = (1/(2 pi i)) times the integral of f(z) R(z,T) dz over the
    keyhole boundary, with the quadrature error estimate.
    """
    tol = NC.get().quad_tol if tol is None else tol
    degree = f.n if isinstance(f, PolySpan) else None
    if eta is None or r is None:
        default_eta, default_r = default_contour_parameters(t, degree, profile)
        eta = default_eta if eta is None else eta
        r = default_r if r is None else r
    contour = keyhole_contour(eta, r)
    check_spectrum(t)
    _check_enclosed(t, contour)
    a = as_array(t)
    scale = 1.0 / (2j * math.pi)

    def integrand(z: complex) -> np.ndarray:
        return (scale * f(z)) * resolvent_array(a, z)

    try:
        value, error = contour_quadrature(contour, integrand, tol)
    except SingularResolvent as e:
        raise SpectrumTouchesContour(
            "A contour node is numerically in the spectrum",
            {"eta": eta, "r": r, **e.context},
        )
    prinlv(f"Contour calculus with eta={eta:.6g}, r={r:.6g}: error {error:.2e}")
    return CalculusResult(ComplexMatrix(value), error, eta, r)


def riesz_dunford(
    t: MatrixLike,
    f: Holomorphic,
    eta: Optional[float] = None,
    r: Optional[float] = None,
    tol: Optional[float] = None,
    profile: Optional[OperatorProfile] = None,
) -> ComplexMatrix:
    return holomorphic_calculus(t, f, eta, r, tol, profile).matrix


def _refine_max(g: Callable[[float], float], center: float, half_width: float, lo: float, hi: float):
    a, b = max(lo, center - half_width), min(hi, center + half_width)
    if b <= a:
        return g(center)
    found = scipy.optimize.minimize_scalar(
        lambda u: -g(u), bounds=(a, b), method="bounded", options={"xatol": 1e-12}
    )
    return max(g(center), -float(found.fun))


def sup_norm_disc(p: PolySpan) -> float:
    """
    max |p| on the unit circle: a grid of 16 (n+1) angles, then a bounded
    scalar search around the best grid angle.
    """
    count = 16 * (p.n + 1)
    angles = 2.0 * math.pi * np.arange(count) / count
    values = np.abs(p.evaluate(np.exp(1j * angles)))
    best = int(np.argmax(values))

    def modulus(u: float) -> float:
        return abs(p.evaluate(complex(math.cos(u), math.sin(u))))

    step = 2.0 * math.pi / count
    return float(max(values[best], _refine_max(modulus, angles[best], step, -math.inf, math.inf)))


def sup_norm_stolz(p: PolySpan, alpha: float) -> float:
    """max |p| on the boundary of B_alpha, refined like `sup_norm_disc`."""
    boundary = stolz_boundary(alpha)
    count = 16 * (p.n + 1)
    best_value = 0.0
    for panel in boundary.panels:
        params = np.linspace(0.0, 1.0, count + 1)
        values = np.abs(p.evaluate(panel.z(params)))
        best = int(np.argmax(values))

        def modulus(u: float, panel=panel) -> float:
            return abs(p.evaluate(complex(panel.z(u))))

        refined = _refine_max(modulus, params[best], 1.0 / count, 0.0, 1.0)
        best_value = max(best_value, float(values[best]), refined)
    return best_value


def scaled_poly(p: PolySpan, factor: complex) -> PolySpan:
    """The polynomial z -> p(factor * z)."""
    powers = factor ** np.arange(p.m, p.n + 1, dtype=float)
    return PolySpan(p.m, p.coeffs * powers)


def thm1_bound(c_eta: float, inp: Lemma2Inputs) -> float:
    """(C_eta / 2 pi) times the keyhole majorant."""
    return c_eta * lemma2_bound(inp) / (2.0 * math.pi)


def thm2_constants(s: float) -> Tuple[float, float]:
    """a = 2e / (pi (1-s)) and b = -2 ln s + 6."""
    if not 0.0 < s < 1.0:
        raise BadParameters(f"s must lie in (0, 1), got {s}")
    return 2.0 * math.e / (math.pi * (1.0 - s)), -2.0 * math.log(s) + 6.0


def thm2_bound(c_tr: float, m: int, n: int, s: float = 0.5) -> float:
    """
    a C (2 ln C + b + ln((n+1)/(m+1))), the bound on ||p(T)|| per unit
    disc sup norm for p with monomials of degree m..n.
    """
    if c_tr < 1.0:
        raise BadParameters(f"C(T) must be at least 1, got {c_tr}")
    if not 0 <= m <= n:
        raise BadParameters(f"Need 0 <= m <= n, got m={m}, n={n}")
    a, b = thm2_constants(s)
    return a * c_tr * (2.0 * math.log(c_tr) + b + math.log((n + 1) / (m + 1)))


def thm2_check(t: MatrixLike, p: PolySpan, c_tr: float, s: float = 0.5) -> BoundReport:
    lhs = op_norm2(mat_poly(p, t))
    rhs = thm2_bound(c_tr, p.m, p.n, s) * sup_norm_disc(p)
    return BoundReport(
        "thm2", lhs, rhs, {"m": p.m, "n": p.n, "s": s, "c_tr": c_tr}, 1e-6 * rhs
    )


def power_bound_check(pb: float, c_tr: float, s: float = 0.5) -> BoundReport:
    """The power bound sup ||T^n|| <= a C (2 ln C + b)."""
    a, b = thm2_constants(s)
    rhs = a * c_tr * (2.0 * math.log(c_tr) + b)
    return BoundReport("power_bound", pb, rhs, {"c_tr": c_tr, "s": s}, NC.get().bound_tol)


def thm1_check(
    t: MatrixLike,
    f: PolySpan,
    m: int,
    eta: float,
    r: float,
    c_eta: Optional[float] = None,
    tol: Optional[float] = None,
) -> BoundReport:
    """
    ||(f tau_m)(T)|| against the calculus constant times the sup of |f|
    over the keyhole domain, estimated on the quadrature nodes.
    """
    inp = Lemma2Inputs(r, m, eta)
    c_eta = sector_constant(t, eta) if c_eta is None else c_eta
    contour = keyhole_contour(eta, r)
    f_sup = float(np.max(np.abs(f.evaluate(contour_nodes(contour, level=3)))))
    lhs = op_norm2(holomorphic_calculus(t, f.shifted(m), eta, r, tol).matrix)
    rhs = thm1_bound(c_eta, inp) * f_sup
    return BoundReport(
        "thm1", lhs, rhs, {**inp.as_dict(), "c_eta": c_eta, "f_sup": f_sup}, 1e-6 * rhs
    )


def thm2_chain(
    t: MatrixLike, p: PolySpan, profile: OperatorProfile, s: float = 0.5, tau: float = 1.0
) -> BoundReport:
    """
    The intermediate estimate behind the polynomial bound: with
    eta = arccos(s/C) and r = tau/(n+1),
    ||p(T)|| <= (C/(1-s)) / (2 pi) * majorant(r, m, eta) * (1+r)^(n-m) * ||p||_D.
    """
    if not 0.0 < tau <= 1.0:
        raise BadParameters(f"tau must lie in (0, 1], got {tau}")
    c_tr = profile.c_tr
    eta = math.acos(s / c_tr)
    r = min(tau / (p.n + 1), 0.5)
    inp = Lemma2Inputs(r, p.m, eta)
    c_eta_bound = c_tr / (1.0 - s)
    rhs = (
        thm1_bound(c_eta_bound, inp)
        * (1.0 + r) ** (p.n - p.m)
        * sup_norm_disc(p)
    )
    lhs = op_norm2(mat_poly(p, t))
    inputs = {"m": p.m, "n": p.n, "s": s, "tau": tau, "eta": eta, "r": r}
    if tau < 1.0:
        inputs["tau_constant"] = thm2_tau_constant(tau)
    return BoundReport("thm2_chain", lhs, rhs, inputs, 1e-6 * rhs)


def bernstein_check(
    p: PolySpan, alpha: float, m: int, scales: Tuple[float, ...] = (1.0, 1.2)
) -> List[BoundReport]:
    """
    Both Bernstein-type inequalities on B_alpha for `p`:
    growth under dilation by r >= 1, and the effect of the factor z^m.
    """
    tol = NC.get().bound_tol
    base = sup_norm_stolz(p, alpha)
    reports = []
    for r in scales:
        dilated = sup_norm_stolz(scaled_poly(p, r), alpha)
        rhs = (r / math.sin(alpha)) ** p.n * base
        reports.append(
            BoundReport("bernstein_dilation", dilated, rhs, {"alpha": alpha, "r": r, "n": p.n}, tol)
        )
    with_factor = sup_norm_stolz(p.shifted(m), alpha)
    inputs = {"alpha": alpha, "m": m, "n": p.n}
    reports.append(BoundReport("bernstein_factor_lower", with_factor, base, inputs, tol))
    reports.append(
        BoundReport(
            "bernstein_factor_upper", base, with_factor / math.sin(alpha) ** m, inputs, tol
        )
    )
    return reports


def cauchy_transform_check(t: MatrixLike, p: PolySpan, r: float) -> BoundReport:
    """q(rT) = p(T) for q(z) = p(z/r): the rescaling used with rT."""
    if not 0.0 < r <= 1.0:
        raise BadParameters(f"Scale factor must lie in (0, 1], got {r}")
    a = as_array(t)
    direct = as_array(mat_poly(p, a))
    rescaled = as_array(mat_poly(scaled_poly(p, 1.0 / r), a * r))
    scale = 1.0 + op_norm2(direct)
    return BoundReport(
        "cauchy_transform", op_norm2(rescaled - direct) / scale, 1e-9, {"r": r, "n": p.n}
    )


def window_coefficients(n: int) -> Dict[int, Fraction]:
    """
    Exact coefficients of the n-th dyadic window: 1 + z for n = 0, else a
    triangle on [2^(n-1), 2^(n+1)] peaking at 2^n with value 1.
    """
    if n < 0:
        raise BadParameters(f"Window index must be nonnegative, got {n}")
    if n == 0:
        return {0: Fraction(1), 1: Fraction(1)}
    lo, peak, hi = 2 ** (n - 1), 2**n, 2 ** (n + 1)
    coefficients = {}
    for k in range(lo, hi + 1):
        if k <= peak:
            coefficients[k] = Fraction(k - lo, lo)
        else:
            coefficients[k] = Fraction(hi - k, peak)
    return coefficients


def besov_window(n: int) -> PolySpan:
    coefficients = window_coefficients(n)
    lo = min(coefficients)
    return PolySpan(lo, [float(coefficients[k]) for k in sorted(coefficients)])


def window_part(n: int, f: PolySpan) -> Optional[PolySpan]:
    """W_n * f: the coefficients of f weighted by the n-th window, or None."""
    weights = window_coefficients(n)
    lo, hi = max(min(weights), f.m), min(max(weights), f.n)
    if lo > hi:
        return None
    coeffs = [complex(f.coefficient(k)) * float(weights[k]) for k in range(lo, hi + 1)]
    if not any(coeffs):
        return None
    return PolySpan(lo, coeffs)


def window_decomposition(f: PolySpan) -> List[Tuple[int, PolySpan]]:
    """The nonzero W_n * f, in increasing n, for a polynomial f."""
    parts = []
    n = 0
    while n == 0 or 2 ** (n - 1) <= f.n:
        part = window_part(n, f)
        if part is not None:
            parts.append((n, part))
        n += 1
    return parts


def besov_norm(f: PolySpan) -> float:
    """||f||_* = sum over n of ||W_n * f|| on the disc."""
    return float(sum(sup_norm_disc(part) for _, part in window_decomposition(f)))


def besov_calculus(
    t: MatrixLike, f: PolySpan, profile: OperatorProfile, s: float = 0.5
) -> Tuple[ComplexMatrix, BoundReport]:
    """
    f(T) as the ordered sum of the window parts evaluated at T, with the
    report ||f(T)|| <= a C (2 ln C + b + ln 5) ||f||_*.
    """
    parts = [part for _, part in window_decomposition(f)]
    a_matrix = as_array(t)
    terms = parallel_map(lambda part: as_array(mat_poly(part, a_matrix)), parts, min_items=4)
    total = np.zeros_like(a_matrix)
    for term in terms:
        total = total + term
    norm_star = float(sum(parallel_map(sup_norm_disc, parts, min_items=4)))
    a, b = thm2_constants(s)
    c_tr = profile.c_tr
    rhs = a * c_tr * (2.0 * math.log(c_tr) + b + math.log(5.0)) * norm_star
    lhs = op_norm2(total)
    report = BoundReport(
        "besov", lhs, rhs, {"n": f.n, "windows": len(parts), "norm_star": norm_star, "c_tr": c_tr},
        1e-6 * rhs,
    )
    return ComplexMatrix(total), report


def homomorphism_check(
    t: MatrixLike, p: PolySpan, q: PolySpan, tol: Optional[float] = None
) -> BoundReport:
    """(pq)(T) = p(T) q(T) for contour-evaluated polynomials."""
    t = as_matrix(t)
    product = as_array(riesz_dunford(t, p.times(q), tol=tol))
    separate = as_array(riesz_dunford(t, p, tol=tol)) @ as_array(riesz_dunford(t, q, tol=tol))
    scale = max(op_norm2(separate), 1.0)
    return BoundReport(
        "homomorphism", op_norm2(product - separate) / scale, 1e-6, {"m": p.m, "n": p.n}
    )
