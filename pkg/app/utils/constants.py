from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, ClassVar, Dict, List

from ..base import env, Environment, prinl, prinlv, ConfigError


class NumericContext:
    """
    This is a no-instance class.  It maintains the numerical
    settings (tolerances, grid sizes, iteration caps) shared by
    every analysis, and vends them to callers.

    Settings start from the defaults below, may be overridden
    from a JSON file (DEV environment only, via RITTCALC_CONFIG),
    and finally from command-line flags via `override`.
    """

    @dataclass(frozen=True)
    class Settings:
        # linalg
        pivot_tol: float = 1e-14
        residual_tol: float = 1e-10
        norm_tol: float = 1e-12
        norm_max_iter: int = 20_000
        norm_seed: int = 20_150_401
        # profile
        grid: int = 256
        ring_deltas: List[float] = field(default_factory=lambda: [1e-6, 1e-4, 1e-2])
        kreiss_rings: int = 25
        kreiss_delta_min: float = 1e-6
        kreiss_delta_max: float = 10.0
        refine_tol: float = 1e-4
        refine_rounds: int = 8
        geometric_levels: int = 32
        spectral_slack: float = 1e-8
        n_max: int = 20_000
        decay_window: int = 50
        power_overflow: float = 1e12
        # geometry / quadrature
        quad_order: int = 16
        quad_max_depth: int = 14
        quad_tol: float = 1e-10
        # square functions
        sq_eps: float = 1e-16
        sq_window: int = 100
        sq_max_terms: int = 1_000_000
        sq_divergence: float = 1e12
        # runs
        seed: int = 0
        bound_tol: float = 1e-6

    current: ClassVar[Settings] = Settings()
    loaded_from: ClassVar[str] = "defaults"

    @classmethod
    def get(cls) -> NumericContext.Settings:
        """Return the active settings."""
        return cls.current

    @classmethod
    def load_config_from_json_data(cls, data: Dict[str, Any]):
        known = {f.name for f in fields(cls.Settings)}
        unknown = set(data.keys()) - known
        if unknown:
            raise ConfigError(f"Unknown settings in config: {sorted(unknown)}")
        cls.current = replace(cls.Settings(), **data)
        cls._validate()
        prinl(f"Loaded {len(data)} setting override(s) in {env().name} environment.")

    @classmethod
    def load_config_locally(cls, config_path: str):
        prinlv(f"Loading config from '{config_path}'...")
        try:
            with open(config_path, "r", encoding="utf-8") as fp:
                data = json.load(fp)
        except (OSError, ValueError) as e:
            raise ConfigError(f"Can't read config '{config_path}': {e}")
        cls.load_config_from_json_data(data)
        cls.loaded_from = config_path

    @classmethod
    def save_config_to_json_data(cls) -> Dict[str, Any]:
        return asdict(cls.current)

    @classmethod
    def save_config_locally(cls, config_path: str):
        prinlv(f"Saving config to '{config_path}'...")
        with open(config_path, "w", encoding="utf-8") as fp:
            json.dump(cls.save_config_to_json_data(), fp, indent=2, sort_keys=True)
            fp.write("\n")
        prinlv(f"Config saved.")

    @classmethod
    def override(cls, **kwargs):
        """Apply overrides, ignoring those given as None."""
        updates = {k: v for k, v in kwargs.items() if v is not None}
        if updates:
            cls.current = replace(cls.current, **updates)
            cls._validate()

    @classmethod
    def _validate(cls):
        s = cls.current
        for name in ("pivot_tol", "residual_tol", "norm_tol", "quad_tol", "refine_tol"):
            if getattr(s, name) <= 0:
                raise ConfigError(f"Tolerance '{name}' must be positive")
        if s.grid < 64:
            raise ConfigError(f"Grid size must be at least 64 (got {s.grid})")

    @classmethod
    def initialize(cls):
        config_path = env() is Environment.DEV and os.getenv("RITTCALC_CONFIG")
        if config_path:
            cls.load_config_locally(config_path)

    @classmethod
    def finalize(cls):
        cls.current = cls.Settings()
        cls.loaded_from = "defaults"
