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
import argparse
import sys

from app.base import ConfigError, log_error
from app.utils import SUITES, SWEEPS, load_run_config
from app.workers import EXIT_CONFIG, execute


def grid_size(value: str):
    """An integer grid size, or `default` for the configured one."""
    if value == "default":
        return None
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'default', got '{value}'")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument(
        "--grid", type=grid_size, help="angles per sweep ring (at least 64), or 'default'"
    )
    p.add_argument("--tol", type=float, help="quadrature tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eta", type=float, help="keyhole half-angle")
    p.add_argument("--r", type=float, help="keyhole radius around 1")
    p.add_argument("--s", type=float, default=0.5, help="sector parameter in (0, 1)")
    p.add_argument("--n-max", dest="n_max", type=int, help="power scan cap")
    p.add_argument("--samples", type=int, default=200, help="random draws per suite case")
    p.add_argument("--budget", type=int, default=256, help="C(T,m,n) search candidates")
    p.add_argument("--out", default="report.json")
    p.add_argument("--format", choices=("json", "csv"))


def parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="rittcalc", description="Numerical workbench for Tadmor-Ritt operators."
    )
    commands = top.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("analyze", "profile the constants of a matrix"),
        ("fcalc", "evaluate p(T) by the contour calculus"),
        ("besov", "evaluate p(T) by dyadic windows, with the bound report"),
    ):
        p = commands.add_parser(name, help=help_text)
        p.add_argument("matrix")
        if name != "analyze":
            p.add_argument("--poly", required=True)
        _add_common(p)
    p = commands.add_parser("verify", help="run an inequality suite")
    p.add_argument("suite", choices=SUITES)
    _add_common(p)
    p = commands.add_parser("sweep", help="write a parameter sweep")
    p.add_argument("--kind", choices=SWEEPS, required=True)
    _add_common(p)
    return top


def main(argv=None) -> int:
    args = vars(parser().parse_args(argv))
    matrix = args.pop("matrix", None)
    args["inputs"] = [matrix] if matrix else []
    try:
        cfg = load_run_config(**args)
    except ConfigError:
        log_error("Bad command line")
        return EXIT_CONFIG
    return execute(cfg)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        pass
