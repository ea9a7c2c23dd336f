from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ValidationError, root_validator, validator

from ..base import ConfigError

COMMANDS = ("analyze", "fcalc", "verify", "besov", "sweep")
SUITES = (
    "lemma2",
    "thm1",
    "thm2",
    "bernstein",
    "sqfe",
    "besov",
    "kreiss",
    "profile",
    "calculus",
    "all",
)
SWEEPS = ("scaling", "ctm", "lemma2")
NEEDS_MATRIX = ("analyze", "fcalc", "besov")


class RunConfig(BaseModel):
    """One command-line run: what to compute, with which knobs, and where to write it."""

    command: str
    inputs: List[str] = []
    poly: Optional[str] = None
    suite: Optional[str] = None
    kind: Optional[str] = None
    tol: Optional[float] = None
    grid: Optional[int] = None
    seed: int = 0
    eta: Optional[float] = None
    r: Optional[float] = None
    s: float = 0.5
    n_max: Optional[int] = None
    samples: int = 200
    budget: int = 256
    out: str = "report.json"
    format: Optional[str] = None

    class Config:
        extra = "forbid"

    @validator("command")
    def known_command(cls, v):
        if v not in COMMANDS:
            raise ValueError(f"unknown command '{v}'")
        return v

    @validator("tol")
    def positive_tol(cls, v):
        if v is not None and v <= 0:
            raise ValueError("tolerance must be positive")
        return v

    @validator("grid")
    def large_grid(cls, v):
        if v is not None and v < 64:
            raise ValueError("grid size must be at least 64")
        return v

    @validator("s")
    def s_in_unit_interval(cls, v):
        if not 0.0 < v < 1.0:
            raise ValueError("s must lie in (0, 1)")
        return v

    @validator("n_max", "samples", "budget")
    def positive_count(cls, v):
        if v is not None and v < 1:
            raise ValueError("counts must be positive")
        return v

    @validator("format")
    def known_format(cls, v):
        if v is not None and v not in ("json", "csv"):
            raise ValueError(f"unknown output format '{v}'")
        return v

    @root_validator(skip_on_failure=True)
    def command_arguments(cls, values):
        command = values["command"]
        if command in NEEDS_MATRIX and len(values["inputs"]) != 1:
            raise ValueError(f"'{command}' needs exactly one matrix file")
        if command in ("fcalc", "besov") and not values["poly"]:
            raise ValueError(f"'{command}' needs a polynomial file (--poly)")
        if command == "verify" and values["suite"] not in SUITES:
            raise ValueError(f"verify needs a suite, one of {', '.join(SUITES)}")
        if command == "sweep" and values["kind"] not in SWEEPS:
            raise ValueError(f"sweep needs a kind, one of {', '.join(SWEEPS)}")
        return values

    def report_format(self) -> str:
        """Sweeps default to plot-ready CSV, everything else to JSON."""
        if self.format:
            return self.format
        return "csv" if self.command == "sweep" else "json"

    def numeric_overrides(self) -> Dict[str, Any]:
        """The flags that also become NumericContext settings."""
        return {"grid": self.grid, "quad_tol": self.tol, "n_max": self.n_max, "seed": self.seed}


def load_run_config(**kwargs) -> RunConfig:
    try:
        return RunConfig(**kwargs)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"Invalid run configuration: {problems}")
