# zakframe/config.py
from __future__ import annotations

import json
import logging
import os
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

from .errors import ConfigError
from .types import CONSTANT_MODES

log = logging.getLogger(__name__)

# Path of a JSON file overriding the defaults below.
CONFIG_ENV_VAR = "GABOR_RP_CONFIG"


@dataclass(frozen=True)
class NumericsConfig:
    # Series truncation
    zak_tol: float = 1e-10
    max_truncation: int = 1 << 15

    # Constants estimation (1-D grids for K, q, R; 2-D grid for C)
    constants_grid: int = 4096
    c_grid: int = 512
    inflation: float = 1.1
    mode: str = "raw"

    # K' only certifies the switch identity hypothesis; kept cheap
    kprime_grid: int = 256
    kprime_max_truncation: int = 4096

    # Inverse-transform quadrature for totally positive windows
    tp_accuracy: float = 1e-9

    # Certificates
    min_delta_exponent: int = 16     # delta below 2**-16 is infeasible
    grid_only_size: int = 64         # grid for windows failing assumption 3
    literal_mesh_limit: int = 1 << 16

    # Monte Carlo
    montecarlo_grid: int = 64

    # Thread pool size for G accumulation (1 = inline)
    workers: int = 1

    def __post_init__(self) -> None:
        if self.mode not in CONSTANT_MODES:
            raise ConfigError(f"mode must be one of {CONSTANT_MODES}, got {self.mode!r}")
        for name in ("zak_tol", "tp_accuracy"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.inflation < 1:
            raise ConfigError("inflation must be >= 1")
        for name in ("max_truncation", "constants_grid", "c_grid", "kprime_grid",
                     "kprime_max_truncation", "grid_only_size", "literal_mesh_limit",
                     "montecarlo_grid", "workers", "min_delta_exponent"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1")

    @property
    def min_delta(self) -> float:
        return 2.0 ** (-self.min_delta_exponent)

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def with_overrides(self, **overrides: Any) -> "NumericsConfig":
        """Flag-level overrides; None values are ignored."""
        clean = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(clean) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return replace(self, **clean)


DEFAULT_CONFIG = NumericsConfig()

# Config seen by calls that get no explicit config or tolerance
_ACTIVE: ContextVar[NumericsConfig] = ContextVar("zakframe_numerics", default=DEFAULT_CONFIG)


def load_config(path: str | Path | None = None) -> NumericsConfig:
    """
    Defaults, then the JSON file at `path` (or $GABOR_RP_CONFIG when path is None).
    A missing env var means plain defaults; a missing or malformed file is an error.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return DEFAULT_CONFIG

    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {p}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file is not valid JSON: {p}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config file must hold a JSON object: {p}")

    log.debug("loaded config overrides from %s: %s", p, sorted(data))
    try:
        return _coerce(DEFAULT_CONFIG.with_overrides(**data))
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"bad value in config file {p}: {e}") from e


# ------------------------------------------------------------------------------
# Internals
# ------------------------------------------------------------------------------
def _coerce(cfg: NumericsConfig) -> NumericsConfig:
    # JSON gives floats for "4096.0"-style values; keep int fields integral.
    updates: Dict[str, Any] = {}
    for f in fields(cfg):
        val = getattr(cfg, f.name)
        if f.type in ("int", int) and not isinstance(val, int):
            if float(val) != int(val):
                raise ConfigError(f"{f.name} must be an integer, got {val!r}")
            updates[f.name] = int(val)
    return replace(cfg, **updates) if updates else cfg


def active_config() -> NumericsConfig:
    return _ACTIVE.get()


@contextmanager
def use_config(config: Optional[NumericsConfig]) -> Iterator[NumericsConfig]:
    """Scope in which `config` backs every default tolerance, cap and quadrature accuracy."""
    cfg = resolve(config)
    token = _ACTIVE.set(cfg)
    try:
        yield cfg
    finally:
        _ACTIVE.reset(token)


def resolve(config: Optional[NumericsConfig]) -> NumericsConfig:
    return _ACTIVE.get() if config is None else config
