#  MIT License
#
#  Copyright (c) 2020 Daniel C. Brotsky
#
#  Permission is hereby granted, free of charge, to any person obtaining a copy
#  of this software and associated documentation files (the "Software"), to deal
#  in the Software without restriction, including without limitation the rights
#  to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
#  copies of the Software, and to permit persons to whom the Software is
#  furnished to do so, subject to the following conditions:
#
#  The above copyright notice and this permission notice shall be included in all
#  copies or substantial portions of the Software.
#
#  THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
#  IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
#  FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
#  AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
#  LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
#  OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
#  SOFTWARE.
from typing import Callable, Dict, List

from .suites import run_suite
from .sweeps import run_sweep
from ..analysis import besov_calculus, holomorphic_calculus, profile_operator
from ..base import RittError, log_error, prinl
from ..core import mat_poly, op_norm2
from ..utils import (
    BoundReport,
    NumericContext,
    RunConfig,
    as_array,
    parse_matrix,
    parse_poly,
    write_json,
    write_matrix,
    write_reports,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VIOLATION = 4


def analyze(cfg: RunConfig) -> List[BoundReport]:
    t = parse_matrix(cfg.inputs[0])
    write_json(profile_operator(t).to_json_data(), cfg.out)
    return []


def fcalc(cfg: RunConfig) -> List[BoundReport]:
    """
    f(T) by the contour calculus, written with its diagnostics.  The
    Horner evaluation serves as the oracle for polynomial inputs.
    """
    t = parse_matrix(cfg.inputs[0])
    p = parse_poly(cfg.poly)
    result = holomorphic_calculus(t, p, cfg.eta, cfg.r, cfg.tol)
    oracle = as_array(mat_poly(p, t))
    error = op_norm2(result.matrix.entries - oracle) / max(1.0, op_norm2(oracle))
    diagnostics = {**result.diagnostics(), "oracle_error": error}
    write_matrix(result.matrix, cfg.out, {"diagnostics": diagnostics})
    tol = cfg.tol or NumericContext.get().quad_tol
    return [
        BoundReport("fcalc_quadrature", result.error_estimate, tol, {"n": p.n}),
        BoundReport("fcalc_oracle", error, 1e-7, {"n": p.n}),
    ]


def besov(cfg: RunConfig) -> List[BoundReport]:
    t = parse_matrix(cfg.inputs[0])
    p = parse_poly(cfg.poly)
    profile = profile_operator(t)
    matrix, report = besov_calculus(t, p, profile, cfg.s)
    extra = {"report": report.to_json_data(), "profile": profile.to_json_data()}
    write_matrix(matrix, cfg.out, extra)
    return [report]


def verify(cfg: RunConfig) -> List[BoundReport]:
    reports = run_suite(cfg)
    write_reports(reports, cfg.out, cfg.report_format())
    return reports


def sweep(cfg: RunConfig) -> List[BoundReport]:
    reports = run_sweep(cfg)
    write_reports(reports, cfg.out, cfg.report_format())
    return reports


COMMAND_TABLE: Dict[str, Callable[[RunConfig], List[BoundReport]]] = {
    "analyze": analyze,
    "fcalc": fcalc,
    "besov": besov,
    "verify": verify,
    "sweep": sweep,
}


def execute(cfg: RunConfig) -> int:
    """
    Run one command and return the process exit code: 0 when every
    report passes, 2 for configuration and input errors, 3 for
    numerical failures, 4 when some bound is violated.

    NumericContext is initialized from the environment, then from
    the command-line flags, and restored when the run is over.
    """
    try:
        NumericContext.initialize()
        NumericContext.override(**cfg.numeric_overrides())
        reports = COMMAND_TABLE[cfg.command](cfg)
    except RittError as e:
        log_error(f"{type(e).__name__} running '{cfg.command}'")
        return e.exit_code
    except OSError:
        log_error(f"File error running '{cfg.command}'")
        return EXIT_CONFIG
    except Exception:
        log_error(f"Unexpected failure running '{cfg.command}'")
        return EXIT_NUMERIC
    finally:
        NumericContext.finalize()
    failed = [r for r in reports if not r.passed]
    for r in failed:
        prinl(f"Violated: {r.name} lhs={r.lhs:.17g} rhs={r.rhs:.17g} {r.inputs_json()}")
    if failed:
        prinl(f"{len(failed)} of {len(reports)} report(s) violated.")
        return EXIT_VIOLATION
    prinl(f"Command '{cfg.command}' finished: {len(reports)} report(s), all passed.")
    return EXIT_OK
