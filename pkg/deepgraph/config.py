"""
Budgets, claim grids and paths shared by the library, the verification suite
and the command line.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    "Exception raised for invalid budgets or an unusable cache directory."
    pass


@dataclass(frozen=True)
class Budget:
    max_cosets: int = 200_000
    max_vertices: int = 25_000
    time_limit: float = 1800.0
    table_limit: int = 4096
    clique_cap: int = 64
    hole_steps: int = 2_000_000
    spin_cap: int = 12
    embed_cap: int = 4

    def validate(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if value <= 0:
                raise ConfigError(f"budget {f.name} must be positive, got {value}")


@dataclass(frozen=True)
class ClaimGrid:
    "Finite parameter grids on which the infinite-family claims are instantiated."

    primes: Tuple[int, ...] = (2, 3, 5)
    max_ranks: Tuple[int, ...] = (3, 2, 1)
    max_abelian_order: int = 30_000
    max_dihedral_n: int = 50
    max_quaternion_n: int = 50
    heisenberg: Tuple[Tuple[int, int], ...] = ((3, 1), (5, 1), (3, 2))
    symmetric_full: int = 7
    symmetric_spot: Tuple[int, ...] = (8, 9)
    alternating_full: int = 8
    max_cover_order: int = 10_000
    inclusion_order: int = 5040
    disjoint_samples: int = 1000
    path_samples: int = 200
    seed: int = 0


@dataclass(frozen=True)
class Config:
    """
    Everything a command needs to know about its environment.

    `Config.from_env()` reads `DEEPGRAPH_*` variables; command-line flags are
    applied on top with `with_overrides`.
    """

    cache_dir: Path = field(default_factory=lambda: Path(".deepgraph-cache"))
    budget: Budget = field(default_factory=Budget)
    grid: ClaimGrid = field(default_factory=ClaimGrid)
    output_format: str = "dot"
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, environ: Optional[Dict[str, str]] = None) -> Config:
        """
        Build a configuration from environment variables.

        Args:
            environ: mapping to read instead of `os.environ`

        Returns:
            Validated configuration

        Raises:
            ConfigError: if a variable does not parse
        """
        env = os.environ if environ is None else environ
        budget: Dict[str, Any] = {}
        for name, key, kind in (
            ("max_cosets", "DEEPGRAPH_MAX_COSETS", int),
            ("max_vertices", "DEEPGRAPH_MAX_VERTICES", int),
            ("time_limit", "DEEPGRAPH_TIME_LIMIT", float),
        ):
            if key in env:
                try:
                    budget[name] = kind(env[key])
                except ValueError as e:
                    raise ConfigError(f"{key}={env[key]!r} is not a number") from e
        config = cls(
            cache_dir=Path(env.get("DEEPGRAPH_CACHE_DIR", ".deepgraph-cache")),
            budget=replace(Budget(), **budget),
            log_level=env.get("DEEPGRAPH_LOG_LEVEL", "WARNING").upper(),
        )
        config.validate()
        return config

    def with_overrides(self, **flags: Any) -> Config:
        """
        Apply command-line flags; `None` values leave the setting unchanged.

        Args:
            flags: `cache_dir`, `output_format`, `seed` or any `Budget` field

        Returns:
            New validated configuration
        """
        budget_names = {f.name for f in fields(Budget)}
        budget = {k: v for k, v in flags.items() if k in budget_names and v is not None}
        top: Dict[str, Any] = {}
        if flags.get("cache_dir") is not None:
            top["cache_dir"] = Path(flags["cache_dir"])
        if flags.get("output_format") is not None:
            top["output_format"] = flags["output_format"]
        if flags.get("seed") is not None:
            top["grid"] = replace(self.grid, seed=int(flags["seed"]))
        config = replace(self, budget=replace(self.budget, **budget), **top)
        config.validate()
        return config

    def validate(self) -> None:
        self.budget.validate()
        if self.output_format not in ("dot", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.cache_dir.exists() and not self.cache_dir.is_dir():
            raise ConfigError(f"cache path {self.cache_dir} is not a directory")

    def ensure_cache_dir(self) -> Path:
        "Create the cache directory if needed and return it."
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ConfigError(f"cannot create cache directory {self.cache_dir}: {e}") from e
        log.debug("cache directory %s", self.cache_dir)
        return self.cache_dir
