from .linalg import (
    resolvent,
    resolvent_array,
    op_norm2,
    mat_poly,
    mat_poly_array,
    spectral_radius_bound,
)
from .geometry import (
    StolzDomain,
    KeyholeContour,
    Contour,
    Panel,
    PanelKind,
    stolz_contains,
    stolz_boundary,
    circle_contour,
    keyhole_contour,
    contour_quadrature,
    contour_nodes,
)
from .special import (
    Lemma2Inputs,
    exp_integral,
    ei_lower_estimate,
    ei_upper_estimate,
    lemma2_bound,
    lemma2_simplified_bound,
    thm2_tau_constant,
    keyhole_kernel_integral,
    lemma2_component_integrals,
)
