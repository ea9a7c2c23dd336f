from .profile import (
    tadmor_ritt_constant,
    kreiss_constant,
    sector_constant,
    discrete_characteristics,
    nikolski_check,
    spijker_check,
    type_angle,
    profile_operator,
    scaled_operator_check,
    sector_bound_check,
    basis_constant,
    check_spectrum,
    sweep_angles,
)
from .fcalc import (
    CalculusResult,
    holomorphic_calculus,
    riesz_dunford,
    sup_norm_disc,
    sup_norm_stolz,
    scaled_poly,
    thm1_bound,
    thm1_check,
    thm2_constants,
    thm2_bound,
    thm2_check,
    thm2_chain,
    power_bound_check,
    bernstein_check,
    cauchy_transform_check,
    window_coefficients,
    besov_window,
    window_decomposition,
    besov_norm,
    besov_calculus,
    homomorphism_check,
)
from .sqfe import (
    square_norm,
    shifted_square_norm,
    sfqe_lemma_bound,
    sfqe_lemma_check,
    sqfe_constant,
    diagonal_square_constant,
    random_unit_vectors,
    thm3_envelope,
    thm3_radius,
    thm3_chain,
    dual_envelopes,
    shift_identity_check,
    r_equivalence_check,
)
from .operators import (
    OperatorKind,
    OperatorSpec,
    multiplier_operator,
    jordan_block,
    cayley,
    random_tr,
    kreiss_test_matrix,
    unimodular_operator,
    diagonal_operator,
    factory_specs,
    ctm_candidates,
    ctm_search,
    uniform_basis_constant,
)
