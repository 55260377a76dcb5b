"""INI configuration parsing: defaults, grammar, collected errors, warnings."""

import pytest

from phasemem.config import ConfigError, RunConfig, parse_config
from phasemem.model import ALL_PAIRS, DIAGONAL_ZZ


def write(tmp_path, text):
    path = tmp_path / "run.ini"
    path.write_text(text)
    return path


def test_empty_file_yields_defaults(tmp_path):
    cfg = parse_config(write(tmp_path, ""))
    assert cfg.mode == "simulate"
    assert cfg.seed == 0
    assert cfg.workers == 1
    assert cfg.out_format == "csv"
    assert cfg.model.n == 10
    assert cfg.model.j_over_delta0 == pytest.approx(0.48)
    assert cfg.simulate.realizations == 10
    assert cfg.scan.grid[0] == pytest.approx(0.02)
    assert cfg.reaction.r0_fm == pytest.approx(1.4)
    assert cfg.reaction.level_density_a is None
    assert cfg.synth.temperature == pytest.approx(0.7)
    assert cfg.warnings == ()


def test_full_file_round_trip(tmp_path):
    cfg = parse_config(write(tmp_path, """
[run]
mode = scan
seed = 11
workers = 4
out = results
format = json

[model]
n = 8
delta0 = 2.0
delta = 0.5
j_over_delta0 = 0.3
topology = all-pairs
coupling = diagonal-zz

[simulate]
realizations = 5
window = 0.5
profile_states = 3

[scan]
grid = 0.1, 0.2, 0.4
realizations = 7
window = 0.3

[reaction]
spectra = a.csv, b.csv
angular = ang.csv
r0_fm = 1.25
fit_window = 2.0:5.0
max_order = 3
level_density_a = 20.5
separation_mev = 7.5
emission_mev = 1.0
gamma_down_mev = 0.8
gamma_cn_kev = 0.05

[synth]
temperature = 0.9
beam = 20
zp = 2
zt = 26
at = 56
direct_fraction = 0.2
angles = 20, 90, 160
e_min = 0.5
e_max = 10
e_step = 0.5
noise = 0.02
amplitude = 5e3
"""))
    assert cfg.mode == "scan"
    assert (cfg.seed, cfg.workers, cfg.out_format) == (11, 4, "json")
    assert str(cfg.out) == "results"
    assert cfg.model.n == 8
    assert cfg.model.delta0 == pytest.approx(2.0)
    assert cfg.model.j_bound == pytest.approx(0.6)  # ratio * delta0
    assert cfg.model.topology == ALL_PAIRS
    assert cfg.model.coupling_op == DIAGONAL_ZZ
    assert cfg.model.master_seed == 11
    assert cfg.simulate.profile_states == 3
    assert cfg.scan.grid == pytest.approx((0.1, 0.2, 0.4))
    assert cfg.reaction.spectra == ("a.csv", "b.csv")
    assert cfg.reaction.fit_window == pytest.approx((2.0, 5.0))
    assert cfg.reaction.level_density_a == pytest.approx(20.5)
    assert cfg.synth.angles == pytest.approx((20.0, 90.0, 160.0))
    assert cfg.synth.amplitude == pytest.approx(5e3)


def test_grid_range_form(tmp_path):
    cfg = parse_config(write(tmp_path, "[scan]\ngrid = 0.1:0.5:5\n"))
    assert cfg.scan.grid == pytest.approx((0.1, 0.2, 0.3, 0.4, 0.5))


def test_fit_window_auto(tmp_path):
    cfg = parse_config(write(tmp_path, "[reaction]\nfit_window = auto\n"))
    assert cfg.reaction.fit_window is None


def test_all_errors_collected_in_one_raise(tmp_path):
    path = write(tmp_path, """
[run]
mode = fly
seed = -3
workers = zero

[model]
n = 99
j_over_delta0 = -0.1

[synth]
temperature = -1
direct_fraction = 1.5
""")
    with pytest.raises(ConfigError) as exc:
        parse_config(path)
    text = str(exc.value)
    for fragment in ("run.mode", "run.seed", "run.workers", "capped",
                     "coupling ratio", "synth.temperature", "synth.direct_fraction"):
        assert fragment in text, fragment
    assert len(exc.value.errors) >= 7


def test_unknown_keys_and_sections_warn(tmp_path):
    cfg = parse_config(write(tmp_path, """
[run]
colour = blue

[quantum]
flux = 7
"""))
    assert any("run.colour" in w for w in cfg.warnings)
    assert any("[quantum]" in w for w in cfg.warnings)


def test_inline_comments_stripped(tmp_path):
    cfg = parse_config(write(tmp_path, "[run]\nseed = 5  # five\n"))
    assert cfg.seed == 5


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        parse_config(tmp_path / "absent.ini")


def test_malformed_ini_is_config_error(tmp_path):
    with pytest.raises(ConfigError, match="cannot parse"):
        parse_config(write(tmp_path, "no section header here\nkey = value\n"))


def test_bad_grid_and_window_grammar(tmp_path):
    path = write(tmp_path, "[scan]\ngrid = 0.1:0.5\n\n[reaction]\nfit_window = 5:2\n")
    with pytest.raises(ConfigError) as exc:
        parse_config(path)
    text = str(exc.value)
    assert "start:stop:count" in text
    assert "empty" in text


def test_empty_synth_grid_rejected(tmp_path):
    path = write(tmp_path, "[synth]\ne_min = 9\ne_max = 3\n")
    with pytest.raises(ConfigError, match="empty energy grid"):
        parse_config(path)


def test_default_runconfig_is_usable():
    cfg = RunConfig()
    assert cfg.model.validate() == []
    assert cfg.mode == "simulate"
