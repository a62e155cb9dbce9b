"""
Configuration file for the Bohr radius lab
Numeric defaults, verification tolerances and worker settings
"""

import os
from dataclasses import dataclass, replace

from dotenv import load_dotenv, dotenv_values

from domain import ConfigError

load_dotenv()

# Logging Configuration
LOG_LEVEL = os.environ.get('BOHR_LAB_LOG_LEVEL', 'INFO')

# Reproducibility
DEFAULT_SEED = 42

# Series engine
DEFAULT_K = 64
DEFAULT_RHO_W = 0.995
DEFAULT_N_SAMPLES = 8192

# Verification
DEFAULT_VERIFY_SAMPLES = 200
DEFAULT_GRID_POINTS = 8
TOL_VERIFY = 1e-9
TOL_ROOT = 1e-10

# Parallelism (the environment may tune this, never the results)
WORKERS_ENV = 'BOHR_LAB_WORKERS'
DEFAULT_WORKERS = os.cpu_count() or 1

# Key set accepted in a --config file
CONFIG_KEYS = {
    'seed': int,
    'workers': int,
    'K': int,
    'rho_w': float,
    'n_samples': int,
    'tol_verify': float,
    'tol_root': float,
}


@dataclass(frozen=True)
class Settings:
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS
    K: int = DEFAULT_K
    rho_w: float = DEFAULT_RHO_W
    n_samples: int = DEFAULT_N_SAMPLES
    tol_verify: float = TOL_VERIFY
    tol_root: float = TOL_ROOT

    def validate(self) -> 'Settings':
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.K < 1:
            raise ConfigError(f"K must be >= 1, got {self.K}")
        if not 0.0 < self.rho_w < 1.0:
            raise ConfigError(f"rho_w must lie in (0,1), got {self.rho_w}")
        if self.n_samples < 4 * (self.K + 1):
            raise ConfigError(f"n_samples must be >= 4(K+1) = {4 * (self.K + 1)}, got {self.n_samples}")
        if self.tol_verify <= 0 or self.tol_root <= 0:
            raise ConfigError("tolerances must be positive")
        return self


def _coerce(key: str, raw) -> object:
    try:
        return CONFIG_KEYS[key](raw)
    except (TypeError, ValueError):
        raise ConfigError(f"Invalid value for '{key}': {raw!r}")


def read_config_file(path: str) -> dict:
    """Parse a key=value config file into typed settings overrides."""
    if not os.path.exists(path):
        raise ConfigError(f"Config file not found: {path}")
    values = dotenv_values(path)
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"Unknown config keys in {path}: {', '.join(unknown)}")
    return {key: _coerce(key, raw) for key, raw in values.items()}


def workers_from_env() -> int | None:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}")


def load_settings(overrides: dict | None = None, config_path: str | None = None) -> Settings:
    """Build the effective settings.

    Precedence: flags > config file > BOHR_LAB_WORKERS (workers only) > defaults.
    """
    settings = Settings()
    env_workers = workers_from_env()
    if env_workers is not None:
        settings = replace(settings, workers=env_workers)
    if config_path:
        settings = replace(settings, **read_config_file(config_path))
    flags = {key: value for key, value in (overrides or {}).items() if value is not None}
    unknown = sorted(set(flags) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"Unknown settings: {', '.join(unknown)}")
    settings = replace(settings, **flags)
    return settings.validate()
