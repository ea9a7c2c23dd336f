"""
The exponential integral Ei(s) = int_s^inf e^{-x}/x dx and the
keyhole estimates built on it: the analytic majorant of the kernel
integral and the kernel integral itself.
"""
import math
from dataclasses import dataclass
from typing import Dict

import numpy as np

from .geometry import PanelKind, contour_quadrature, integrate_panel, keyhole_contour
from ..base import BadParameters, DomainError
from ..utils import NumericContext as NC

EULER_GAMMA = 0.57721566490153286061
_EPS = 1e-15
_TINY = 1e-300
_MAX_TERMS = 10_000


@dataclass(frozen=True)
class Lemma2Inputs:
    """The (r, m, eta) triple of the keyhole estimate."""

    r: float
    m: int
    eta: float

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise BadParameters(f"r must lie in (0, 1), got {self.r}")
        if int(self.m) != self.m or self.m < 0:
            raise BadParameters(f"m must be a nonnegative integer, got {self.m}")
        if not 0.0 < self.eta < math.pi / 2:
            raise BadParameters(f"eta must lie in (0, pi/2), got {self.eta}")

    def as_dict(self) -> Dict[str, float]:
        return {"r": self.r, "m": int(self.m), "eta": self.eta}


def exp_integral(s: float) -> float:
    """
    Ei(s) for real s > 0: power series below 1, continued fraction
    (modified Lentz) from 1 on.
    """
    if not s > 0.0 or not math.isfinite(s):
        raise DomainError(f"Ei is defined for finite s > 0 only, got {s}")
    if s < 1.0:
        total = -EULER_GAMMA - math.log(s)
        fact = 1.0
        for k in range(1, _MAX_TERMS):
            fact *= -s / k
            term = -fact / k
            total += term
            if abs(term) < abs(total) * _EPS:
                return total
        return total
    b = s + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for k in range(1, _MAX_TERMS):
        a = -float(k * k)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-s)


def ei_lower_estimate(s: float) -> float:
    return 0.5 * math.exp(-s) * math.log1p(2.0 / s)


def ei_upper_estimate(s: float) -> float:
    return math.exp(-s) * math.log1p(1.0 / s)


def lemma2_bound(inp: Lemma2Inputs) -> float:
    """4 sin^{m+1}(eta) ln(4/cos eta) + 4 Ei(r (m+1) cos(eta)/2) + 2 pi (1+r)^m"""
    r, m, eta = inp.r, inp.m, inp.eta
    return (
        4.0 * math.sin(eta) ** (m + 1) * math.log(4.0 / math.cos(eta))
        + 4.0 * exp_integral(r * (m + 1) / 2.0 * math.cos(eta))
        + 2.0 * math.pi * (1.0 + r) ** m
    )


def lemma2_simplified_bound(inp: Lemma2Inputs) -> float:
    """The majorant valid for r <= 1/(m+1)."""
    r, m, eta = inp.r, inp.m, inp.eta
    if r > 1.0 / (m + 1):
        raise BadParameters(f"The simplified majorant needs r <= 1/(m+1), got r={r}")
    return (
        -8.0 * math.log(math.cos(eta))
        - 4.0 * math.log(r * (m + 1))
        + 2.0 * math.pi * (1.0 + r) ** m
        + 12.0 * math.log(2.0)
    )


def thm2_tau_constant(tau: float) -> float:
    """ln(1/tau) + (pi/2) e^tau + 3 ln 2; its minimum over (0, 1) lies below 6."""
    if not 0.0 < tau < 1.0:
        raise BadParameters(f"tau must lie in (0, 1), got {tau}")
    return -math.log(tau) + math.pi / 2.0 * math.exp(tau) + 3.0 * math.log(2.0)


def _kernel(m: int):
    def f(z):
        return np.abs(z) ** m / np.abs(z - 1.0)

    return f


def keyhole_kernel_integral(inp: Lemma2Inputs, tol: float = None) -> float:
    """G(m, eta, r): the |dz| integral of |z|^m/|z-1| over the keyhole boundary."""
    tol = NC.get().quad_tol if tol is None else tol
    contour = keyhole_contour(inp.eta, inp.r)
    value, _ = contour_quadrature(
        contour, _kernel(inp.m), tol, vectorized=True, measure="abs"
    )
    return float(np.real(value))


def lemma2_component_integrals(inp: Lemma2Inputs, tol: float = None) -> Dict[str, float]:
    """
    The kernel integral split into the arc about 0 ("g1"), the two
    segments ("g2", zero in the two-arc case) and the arc about 1 ("g3").
    """
    tol = NC.get().quad_tol if tol is None else tol
    contour = keyhole_contour(inp.eta, inp.r)
    parts = {"g1": 0.0, "g2": 0.0, "g3": 0.0}
    share = tol / len(contour.panels)
    for panel in contour.panels:
        value, _ = integrate_panel(
            panel, _kernel(inp.m), share, vectorized=True, measure="abs"
        )
        if panel.kind is PanelKind.segment:
            key = "g2"
        else:
            key = "g3" if panel.center == 1.0 else "g1"
        parts[key] += float(np.real(value))
    return parts
