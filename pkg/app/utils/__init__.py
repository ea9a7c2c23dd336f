from .constants import NumericContext
from .formats import (
    ComplexMatrix,
    PolySpan,
    BoundReport,
    OperatorProfile,
    SquareNormResult,
    TailFlag,
    as_matrix,
    as_array,
)
from .records import (
    REPORT_COLUMNS,
    parse_matrix,
    parse_poly,
    serialize_matrix,
    matrix_to_json_data,
    matrix_from_json_data,
    write_matrix,
    write_json,
    write_reports,
    reports_frame,
    read_reports,
)
from .run_config import RunConfig, load_run_config, COMMANDS, SUITES, SWEEPS
