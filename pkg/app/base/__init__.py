from .general import Environment, env, lookup_env, log_error, prinl, prinlv, thread_count
from .tasks import gather_in_pool, parallel_map
from .errors import (
    RittError,
    BadParameters,
    ConfigError,
    ParseError,
    ShapeError,
    SingularResolvent,
    NoConvergence,
    SpectrumOutsideDisc,
    EtaTooSmall,
    Overflow,
    SpectrumNotUnimodular,
    QuadratureStall,
    DomainError,
    SpectrumTouchesContour,
    Divergence,
    DegenerateC1,
    PrecisionLoss,
)
