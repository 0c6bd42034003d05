import json

import pytest

from srbtimes.config import config_from_dict, load_config
from srbtimes.exceptions import ConfigError


def test_defaults():
    cfg = config_from_dict({"system": "cat2"})
    assert cfg.seeds == 100 and cfg.n == 100_000 and cfg.candidate.M == 100
    assert cfg.entropy.sample_point is None


def test_nested_sections():
    cfg = config_from_dict({"system": "catns", "params": {"eps": 0.02},
                            "candidate": {"delta": 0.01},
                            "entropy": {"sample_point": [0, 0, 0]}})
    assert cfg.params == {"eps": 0.02}
    assert cfg.candidate.delta == 0.01 and cfg.candidate.P == 100
    assert cfg.entropy.sample_point == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("raw, path", [
    ({}, "config.system"),
    ({"system": "cat2", "seeds": 0}, "config.seeds"),
    ({"system": "cat2", "resolution": 0}, "config.resolution"),
    ({"system": "cat2", "seeds": 1.5}, "config.seeds"),
    ({"system": "cat2", "seeds": True}, "config.seeds"),
    ({"system": "cat2", "colour": 1}, "config.colour"),
    ({"system": "cat2", "delta_grid": [0.1, 0.01]}, "config.delta_grid"),
    ({"system": "cat2", "delta_grid": [0.1, -1]}, "config.delta_grid[1]"),
    ({"system": "cat2", "n": 100, "burn_in": 100}, "config.burn_in"),
    ({"system": "cat2", "master_seed": 2 ** 64}, "config.master_seed"),
    ({"system": "cat2", "candidate": {"Q": 1}}, "config.candidate.Q"),
    ({"system": "cat2", "entropy": {"sample_point": [1.0, 0]}}, "config.entropy.sample_point[0]"),
    ({"system": "cat2", "tau_lo": 0.2}, "config.tau_lo"),
])
def test_rejects(raw, path):
    with pytest.raises(ConfigError) as info:
        config_from_dict(raw)
    assert info.value.path == path


def test_load(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"system": "lin4", "seeds": 3}))
    assert load_config(path).seeds == 3
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(path)


def test_round_trip():
    cfg = config_from_dict({"system": "cat2", "m_grid": [5, 50]})
    again = config_from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg
