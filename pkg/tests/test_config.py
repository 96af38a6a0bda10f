import pytest

from inkmux.config import Config, config_dict, load_config, parse_config
from inkmux.errors import ConfigError
from inkmux.topology import Explicit


def test_defaults():
    assert load_config() == Config()
    assert parse_config("") == Config()


def test_keys_parse():
    cfg = parse_config("""
# comment
timing.bit_clock_period = 5e-8
timing.pipelined_registration = yes
timing.max_parallel_fires = 2
electrical.drive_window_high = 8.6
thermal.superheat_limit = 300
factorization.strategy = 4,4
""")
    assert cfg.timing.bit_clock_period == 5e-8
    assert cfg.timing.pipelined_registration
    assert cfg.timing.max_parallel_fires == 2
    assert cfg.electrical.drive_window == (7.5, 8.6)
    assert cfg.thermal.superheat_limit == 300.0
    assert cfg.strategy == Explicit((4, 4))
    assert config_dict(cfg)["electrical"]["drive_window"] == [7.5, 8.6]


@pytest.mark.parametrize("text", [
    "timing.bogus = 1",
    "timing.pulse_width = fast",
    "timing.pulse_width = 0",
    "timing.pipelined_registration = maybe",
    "electrical.drive_window_high = 9.5",
    "factorization.strategy = cubic",
    "no equals sign here",
])
def test_bad_config(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")


def test_inline_comments():
    cfg = parse_config("timing.pulse_width = 2e-6   # shorter pulse\n")
    assert cfg.timing.pulse_width == 2e-6
