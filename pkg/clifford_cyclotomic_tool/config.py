import os
from dataclasses import dataclass, fields
from pathlib import Path

import yaml

from .errors import ConfigError

DEFAULTS_PATH = Path(__file__).parent / "resources" / "defaults.yml"
ENV_VAR = "CCG_CONFIG"


@dataclass(frozen=True)
class Settings:
    square_primes: int = 10
    square_initial_exponent: int = 8
    square_max_exponent: int = 64
    embedding_initial_precision: int = 64
    embedding_max_precision: int = 65536
    synthesis_lookahead: int = 3
    synthesis_max_steps: int = 400
    scan_workers: int = 1
    analytic_precision: int = 256
    default_seed: int = 2024
    default_trials: int = 20


_settings = None


def _read_yaml(path):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except OSError as e:
        raise ConfigError(f"Cannot read configuration file {path}: {e}")
    except yaml.YAMLError as e:
        raise ConfigError(f"Malformed configuration file {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"Configuration file {path} must contain a mapping")
    return data


def load_settings(path=None):
    """
    Loads the bundled defaults and overlays the user file, if any.
    The user file is `path`, or $CCG_CONFIG when no path is given.
    """
    values = _read_yaml(DEFAULTS_PATH)
    override = path or os.environ.get(ENV_VAR)
    if override:
        values.update(_read_yaml(override))

    known = {f.name for f in fields(Settings)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
    for key, value in values.items():
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise ConfigError(f"Configuration key '{key}' must be a non-negative integer, got {value!r}")
    return Settings(**values)


def configure(path=None):
    global _settings
    _settings = load_settings(path)
    return _settings


def get_settings():
    if _settings is None:
        return configure()
    return _settings
