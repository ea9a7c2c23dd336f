"""
Stolz domains, keyhole domains and their boundaries as lists of
parametrized panels, plus composite Gauss-Legendre contour quadrature.

Every panel is parametrized over t in [0, 1] and carries its analytic
derivative, so the quadrature never differentiates numerically.
Panels of a contour are listed in positive (counterclockwise) order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, List, Tuple, Union

import numpy as np

from ..base import BadParameters, QuadratureStall, prinlv
from ..utils import NumericContext as NC

Integrand = Callable[[Union[complex, np.ndarray]], Union[complex, np.ndarray]]


class PanelKind(str, Enum):
    arc = "arc"
    segment = "segment"


@dataclass(frozen=True)
class Panel:
    """
    An arc z(t) = center + radius * exp(i*(angle0 + t*(angle1 - angle0)))
    or a segment z(t) = start + t*(stop - start).
    """

    kind: PanelKind
    start: complex = 0j
    stop: complex = 0j
    center: complex = 0j
    radius: float = 0.0
    angle0: float = 0.0
    angle1: float = 0.0
    sign: int = 1

    def z(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind is PanelKind.arc:
            angle = self.angle0 + t * (self.angle1 - self.angle0)
            return self.center + self.radius * np.exp(1j * angle)
        return self.start + t * (self.stop - self.start)

    def dz(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind is PanelKind.arc:
            sweep = self.angle1 - self.angle0
            angle = self.angle0 + t * sweep
            return 1j * self.radius * sweep * np.exp(1j * angle)
        return np.full(t.shape, self.stop - self.start, dtype=complex)

    @property
    def length(self) -> float:
        if self.kind is PanelKind.arc:
            return abs(self.radius * (self.angle1 - self.angle0))
        return abs(self.stop - self.start)

    def endpoints(self) -> Tuple[complex, complex]:
        return complex(self.z(0.0)), complex(self.z(1.0))

    @classmethod
    def arc(cls, center: complex, radius: float, angle0: float, angle1: float) -> Panel:
        return cls(
            PanelKind.arc, center=center, radius=radius, angle0=angle0, angle1=angle1
        )

    @classmethod
    def segment(cls, a: complex, b: complex) -> Panel:
        return cls(PanelKind.segment, complex(a), complex(b))


@dataclass
class Contour:
    panels: List[Panel] = field(default_factory=list)

    def closure_mismatch(self) -> float:
        worst = 0.0
        for here, there in zip(self.panels, self.panels[1:] + self.panels[:1]):
            worst = max(worst, abs(here.endpoints()[1] - there.endpoints()[0]))
        return worst

    @property
    def arclength(self) -> float:
        return sum(p.length for p in self.panels)


@dataclass
class KeyholeContour(Contour):
    """The boundary of B_eta united with the disc of radius r about 1."""

    eta: float = 0.0
    r: float = 0.0

    @property
    def degenerate(self) -> bool:
        return self.r >= math.cos(self.eta)


@dataclass(frozen=True)
class StolzDomain:
    """Interior of the convex hull of {1} and the disc of radius sin(theta)."""

    theta: float

    def __post_init__(self):
        if not 0.0 < self.theta <= math.pi / 2:
            raise BadParameters(f"Stolz angle must lie in (0, pi/2], got {self.theta}")


def stolz_contains(d: StolzDomain, z: complex) -> bool:
    s = math.sin(d.theta)
    if abs(z) < s:
        return True
    w = 1.0 - z
    if z.real < s * s or w == 0:
        return False
    # the two tangent segments from 1 bound the kite |arg(1 - z)| < theta
    return abs(math.atan2(w.imag, w.real)) < d.theta


def stolz_boundary(theta: float) -> Contour:
    """Boundary of B_theta: two tangent segments from 1 and the big arc."""
    if not 0.0 < theta <= math.pi / 2:
        raise BadParameters(f"Stolz angle must lie in (0, pi/2], got {theta}")
    s = math.sin(theta)
    if theta == math.pi / 2:
        return circle_contour(0j, 1.0)
    phi = math.pi / 2 - theta
    upper = s * complex(math.cos(phi), math.sin(phi))
    return Contour(
        [
            Panel.segment(1.0, upper),
            Panel.arc(0j, s, phi, 2 * math.pi - phi),
            Panel.segment(upper.conjugate(), 1.0),
        ]
    )


def circle_contour(center: complex, radius: float) -> Contour:
    return Contour([Panel.arc(center, radius, -math.pi, math.pi)])


def keyhole_contour(eta: float, r: float) -> KeyholeContour:
    """
    Panels of the keyhole boundary, starting on the arc about 1.
    For r < cos(eta): arc about 1, upper segment, arc about 0, lower segment.
    For r >= cos(eta): the two arcs of the union of the two discs.
    The corner where an arc meets a segment belongs to the segment.
    """
    if not 0.0 < eta < math.pi / 2:
        raise BadParameters(f"eta must lie in (0, pi/2), got {eta}")
    if not 0.0 < r < 1.0:
        raise BadParameters(f"r must lie in (0, 1), got {r}")
    s, c = math.sin(eta), math.cos(eta)
    if r < c:
        phi = math.pi / 2 - eta
        e = complex(math.cos(eta), math.sin(eta))
        panels = [
            Panel.arc(1.0, r, -(math.pi - eta), math.pi - eta),
            Panel.segment(1.0 - r * e.conjugate(), 1.0 - c * e.conjugate()),
            Panel.arc(0j, s, phi, 2 * math.pi - phi),
            Panel.segment(1.0 - c * e, 1.0 - r * e),
        ]
    else:
        x = (1.0 + s * s - r * r) / 2.0
        y = math.sqrt(max(s * s - x * x, 0.0))
        alpha = math.atan2(y, x)
        beta = math.atan2(y, x - 1.0)
        panels = [
            Panel.arc(1.0, r, -beta, beta),
            Panel.arc(0j, s, alpha, 2 * math.pi - alpha),
        ]
    return KeyholeContour(panels=panels, eta=eta, r=r)


@lru_cache(maxsize=8)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def panel_nodes(panel: Panel, level: int, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Parameter nodes and weights for 2**level equal pieces of the panel."""
    x, w = gauss_legendre(order)
    pieces = 2**level
    offsets = np.arange(pieces, dtype=float)[:, None]
    t = ((offsets + x[None, :]) / pieces).reshape(-1)
    weights = np.tile(w / pieces, pieces)
    return t, weights


def contour_nodes(c: Contour, level: int = 2, order: int = None) -> np.ndarray:
    """The quadrature nodes of a contour at a given level."""
    order = order or NC.get().quad_order
    return np.concatenate([p.z(panel_nodes(p, level, order)[0]) for p in c.panels])


def _difference(a, b) -> float:
    if np.ndim(a) == 2:
        from .linalg import op_norm2

        return op_norm2(np.asarray(a) - np.asarray(b))
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _panel_sum(panel, f, level, order, vectorized, measure):
    t, w = panel_nodes(panel, level, order)
    z = panel.z(t)
    dz = panel.dz(t)
    weights = w * (np.abs(dz) if measure == "abs" else dz) * panel.sign
    if vectorized:
        return np.sum(np.asarray(f(z)) * weights)
    total = None
    for zj, wj in zip(z, weights):
        term = np.asarray(f(complex(zj))) * wj
        total = term if total is None else total + term
    return total


def integrate_panel(
    panel: Panel,
    f: Integrand,
    tol: float,
    vectorized: bool = False,
    measure: str = "dz",
):
    """
    Composite Gauss-Legendre on one panel, halving all pieces until two
    successive levels agree within `tol`.  Returns (value, last difference).
    """
    settings = NC.get()
    order, max_depth = settings.quad_order, settings.quad_max_depth
    previous = _panel_sum(panel, f, 0, order, vectorized, measure)
    for level in range(1, max_depth + 1):
        current = _panel_sum(panel, f, level, order, vectorized, measure)
        diff = _difference(current, previous)
        if diff <= tol:
            return current, diff
        previous = current
    raise QuadratureStall(
        f"Quadrature did not settle after {max_depth} halvings",
        {"panel": panel.kind.value, "difference": diff, "tol": tol},
    )


def contour_quadrature(
    c: Contour,
    f: Integrand,
    tol: float = None,
    vectorized: bool = False,
    measure: str = "dz",
):
    """
    Integrate f(z) dz (or f(z) |dz| when measure == "abs") over the
    contour.  The tolerance is shared evenly among the panels and the
    panel values are summed in panel order.
    """
    tol = NC.get().quad_tol if tol is None else tol
    if tol <= 0:
        raise BadParameters(f"Quadrature tolerance must be positive, got {tol}")
    share = tol / len(c.panels)
    value, error = None, 0.0
    for panel in c.panels:
        v, e = integrate_panel(panel, f, share, vectorized, measure)
        value = v if value is None else value + v
        error += e
    prinlv(f"Contour quadrature over {len(c.panels)} panel(s): error {error:.2e}.")
    return value, error
