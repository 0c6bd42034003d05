"""Strict JSON experiment configuration."""
import json
import numbers
from dataclasses import asdict, dataclass, field, fields

from .exceptions import ConfigError


@dataclass(frozen=True)
class CandidateConfig:
    """Parameters of the SRB-candidate time set."""

    delta: float = 0.03
    M: int = 100
    N: int = 100
    P: int = 100


@dataclass(frozen=True)
class EntropyConfig:
    decay_steps: int = 20
    segments: int = 32
    gamma: float = 0.05
    slope_from: int = 5
    slope_to: int = 20
    sample_size: int = 64
    bound_horizon: int = 16
    bound_m: int = 2
    bound_cases: int = 8
    sample_point: tuple = None  # replaces the seeded sample by a single atom


@dataclass(frozen=True)
class ExperimentConfig:
    system: str
    params: dict = field(default_factory=dict)
    master_seed: int = 0
    seeds: int = 100
    n: int = 100_000
    burn_in: int = 1000
    delta_grid: tuple = (0.005, 0.01, 0.03, 0.1)
    m_grid: tuple = (10, 100, 1000)
    candidate: CandidateConfig = CandidateConfig()
    resolution: int = 4
    terms: int = 64
    tau_hi: float = 0.99
    tau_lo: float = 0.01
    beta_hi: float = 0.1
    batch_size: int = 10
    n_jobs: int = 1
    output_dir: str = "out"
    entropy: EntropyConfig = EntropyConfig()

    def to_dict(self):
        return asdict(self)


def _int(value, path, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {value}")
    return int(value)


def _real(value, path, upper=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if not value > 0:
        raise ConfigError(path, f"must be > 0, got {value}")
    if upper is not None and value > upper:
        raise ConfigError(path, f"must be <= {upper}, got {value}")
    return float(value)


def _grid(value, path, conv):
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(path, "expected a nonempty list")
    out = tuple(conv(v, f"{path}[{j}]") for j, v in enumerate(value))
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ConfigError(path, "grid must be strictly increasing")
    return out


def _section(cls, raw, path, schema):
    if not isinstance(raw, dict):
        raise ConfigError(path, "expected an object")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}", "unknown field")
    kwargs = {}
    for name, value in raw.items():
        kwargs[name] = schema[name](value, f"{path}.{name}")
    return cls(**kwargs)


def _mask64(value, path):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or not 0 <= value < 2 ** 64:
        raise ConfigError(path, "expected an integer in [0, 2**64)")
    return int(value)


def _params(value, path):
    if not isinstance(value, dict):
        raise ConfigError(path, "expected an object")
    for key, v in value.items():
        if isinstance(v, bool) or not isinstance(v, numbers.Real):
            raise ConfigError(f"{path}.{key}", f"expected a number, got {v!r}")
    return dict(value)


def _point(value, path):
    if value is None:
        return None
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(path, "expected a nonempty list of coordinates")
    out = []
    for j, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, numbers.Real) or not 0 <= v < 1:
            raise ConfigError(f"{path}[{j}]", f"expected a coordinate in [0, 1), got {v!r}")
        out.append(float(v))
    return tuple(out)


def _string(value, path):
    if not isinstance(value, str) or not value:
        raise ConfigError(path, "expected a nonempty string")
    return value


_CANDIDATE = {"delta": _real, "M": _int, "N": _int, "P": _int}
_ENTROPY = {
    "decay_steps": _int, "segments": _int, "gamma": lambda v, p: _real(v, p, 0.5),
    "slope_from": lambda v, p: _int(v, p, 0), "slope_to": _int, "sample_size": _int,
    "bound_horizon": _int, "bound_m": _int, "bound_cases": _int, "sample_point": _point,
}
_TOP = {
    "system": _string,
    "params": _params,
    "master_seed": _mask64,
    "seeds": _int,
    "n": lambda v, p: _int(v, p, 2),
    "burn_in": lambda v, p: _int(v, p, 0),
    "delta_grid": lambda v, p: _grid(v, p, _real),
    "m_grid": lambda v, p: _grid(v, p, _int),
    "candidate": lambda v, p: _section(CandidateConfig, v, p, _CANDIDATE),
    "resolution": _int,
    "terms": _int,
    "tau_hi": lambda v, p: _real(v, p, 1.0),
    "tau_lo": lambda v, p: _real(v, p, 1.0),
    "beta_hi": lambda v, p: _real(v, p, 1.0),
    "batch_size": _int,
    "n_jobs": _int,
    "output_dir": _string,
    "entropy": lambda v, p: _section(EntropyConfig, v, p, _ENTROPY),
}


def config_from_dict(raw):
    if not isinstance(raw, dict):
        raise ConfigError("config", "expected a JSON object")
    if "system" not in raw:
        raise ConfigError("config.system", "required field missing")
    cfg = _section(ExperimentConfig, raw, "config", _TOP)
    if cfg.burn_in >= cfg.n:
        raise ConfigError("config.burn_in", "must be smaller than n")
    if cfg.tau_lo >= cfg.beta_hi:
        raise ConfigError("config.tau_lo", "must be smaller than beta_hi")
    if cfg.entropy.slope_from >= cfg.entropy.slope_to:
        raise ConfigError("config.entropy.slope_from", "must be smaller than slope_to")
    if cfg.entropy.slope_to > cfg.entropy.decay_steps:
        raise ConfigError("config.entropy.slope_to", "must not exceed decay_steps")
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    return config_from_dict(raw)
