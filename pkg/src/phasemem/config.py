"""Run configuration: a single INI file drives every workbench mode.

The file is plain ``configparser`` INI with flat key-value sections. Every
key has a default, so the empty file is a valid configuration; validation
collects all problems before failing so a bad file is reported once, in
full. Unknown keys and sections are warnings, not errors, to keep configs
forward compatible.

Grammar notes:

* ``scan.grid`` is either a comma list of coupling ratios
  (``0.02, 0.1, 0.48``) or a linear range ``start:stop:count``
  (``0.02:0.5:13``).
* ``reaction.fit_window`` is ``auto`` (lowest third of the spectrum) or an
  explicit ``lo:hi`` window in MeV.
* ``synth.angles`` and ``reaction.spectra`` are comma lists.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import (
    ALL_PAIRS,
    CHAIN,
    DIAGONAL_ZZ,
    TRANSVERSE_XX,
    ModelConfig,
)

MODES = ("simulate", "scan", "analyze", "synth", "report")
FORMATS = ("json", "csv")

_KNOWN_KEYS = {
    "run": {"mode", "seed", "workers", "out", "format"},
    "model": {"n", "delta0", "delta", "j_over_delta0", "topology", "coupling"},
    "simulate": {"realizations", "window", "profile_states"},
    "scan": {"grid", "realizations", "window"},
    "reaction": {
        "spectra", "angular", "r0_fm", "fit_window", "max_order",
        "level_density_a", "separation_mev", "emission_mev",
        "gamma_down_mev", "gamma_cn_kev",
    },
    "synth": {
        "temperature", "beam", "zp", "zt", "at", "direct_fraction",
        "angles", "e_min", "e_max", "e_step", "noise", "amplitude",
    },
}


class ConfigError(ValueError):
    """All validation failures of one configuration file, reported together."""

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "\n".join(f"  - {e}" for e in self.errors)
        super().__init__(f"invalid configuration:\n{lines}")


@dataclass(frozen=True)
class SimulateParams:
    realizations: int = 10
    window: float = 0.25
    profile_states: int = 8


@dataclass(frozen=True)
class ScanParams:
    grid: tuple[float, ...] = (0.02, 0.05, 0.1, 0.2, 0.3, 0.48)
    realizations: int = 10
    window: float = 0.25


@dataclass(frozen=True)
class ReactionParams:
    spectra: tuple[str, ...] = ()
    angular: str | None = None
    r0_fm: float = 1.4
    fit_window: tuple[float, float] | None = None
    max_order: int = 2
    level_density_a: float | None = None  # None: A_t / 8 of the first spectrum
    separation_mev: float = 8.0
    emission_mev: float = 0.0
    gamma_down_mev: float = 1.0
    gamma_cn_kev: float = 0.02


@dataclass(frozen=True)
class SynthParams:
    temperature: float = 0.7
    beam: float = 18.0
    z_p: int = 1
    z_t: int = 78
    a_t: int = 195
    direct_fraction: float = 0.1
    angles: tuple[float, ...] = (30.0, 150.0)
    e_min: float = 1.0
    e_max: float = 12.0
    e_step: float = 0.25
    noise: float = 0.05
    amplitude: float = 1e4


@dataclass(frozen=True)
class RunConfig:
    mode: str = "simulate"
    seed: int = 0
    workers: int = 1
    out: Path = Path("out")
    out_format: str = "csv"
    model: ModelConfig = field(default_factory=lambda: ModelConfig(n=10, j_bound=0.48))
    simulate: SimulateParams = field(default_factory=SimulateParams)
    scan: ScanParams = field(default_factory=ScanParams)
    reaction: ReactionParams = field(default_factory=ReactionParams)
    synth: SynthParams = field(default_factory=SynthParams)
    warnings: tuple[str, ...] = ()


class _Section:
    """Typed key reader for one section that funnels failures into one list."""

    def __init__(self, parser: configparser.ConfigParser, name: str, errors: list[str]):
        self._name = name
        self._errors = errors
        self._raw = dict(parser[name]) if parser.has_section(name) else {}

    def get(self, key, default, cast, describe):
        raw = self._raw.get(key)
        if raw is None or raw.strip() == "":
            return default
        try:
            return cast(raw.strip())
        except (ValueError, TypeError) as exc:
            self._errors.append(f"{self._name}.{key} = {raw!r}: {exc}" if str(exc)
                                else f"{self._name}.{key} = {raw!r}: expected {describe}")
            return default

    def require(self, key, default, cast, describe, check=None):
        value = self.get(key, default, cast, describe)
        if check is not None:
            problem = check(value)
            if problem:
                self._errors.append(f"{self._name}.{key}: {problem}")
        return value


def _parse_choice(allowed, label):
    def cast(raw):
        value = raw.lower()
        if value not in allowed:
            raise ValueError(f"expected one of {', '.join(allowed)} for {label}")
        return value
    return cast


def _parse_float_list(raw: str) -> tuple[float, ...]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a non-empty comma list of numbers")
    return tuple(float(p) for p in parts)


def _parse_str_list(raw: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in raw.split(",") if p.strip())


def _parse_grid(raw: str) -> tuple[float, ...]:
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise ValueError("range form is start:stop:count")
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
        if count < 1:
            raise ValueError("range count must be >= 1")
        return tuple(float(x) for x in np.linspace(start, stop, count))
    return _parse_float_list(raw)


def _parse_window(raw: str) -> tuple[float, float] | None:
    if raw.lower() == "auto":
        return None
    parts = raw.split(":")
    if len(parts) != 2:
        raise ValueError("expected 'auto' or lo:hi in MeV")
    lo, hi = float(parts[0]), float(parts[1])
    if hi <= lo:
        raise ValueError(f"window [{lo:g}, {hi:g}] is empty")
    return (lo, hi)


def _positive(name):
    return lambda v: None if v is None or v > 0 else f"{name} must be positive (got {v})"


def _non_negative(name):
    return lambda v: None if v >= 0 else f"{name} must be >= 0 (got {v})"


def parse_config(path) -> RunConfig:
    """Read and validate one INI file into a :class:`RunConfig`.

    Raises :class:`ConfigError` carrying every problem found; unknown keys
    and sections are collected as warnings on the returned config instead.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError([f"config file not found: {path}"])
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle, source=str(path))
    except (configparser.Error, UnicodeDecodeError) as exc:
        raise ConfigError([f"cannot parse {path}: {exc}"]) from None

    errors: list[str] = []
    warnings: list[str] = []
    for section in parser.sections():
        known = _KNOWN_KEYS.get(section)
        if known is None:
            warnings.append(f"unknown section [{section}] ignored")
            continue
        for key in parser[section]:
            if key not in known:
                warnings.append(f"unknown key {section}.{key} ignored")

    run = _Section(parser, "run", errors)
    mode = run.get("mode", "simulate", _parse_choice(MODES, "mode"), "run mode")
    seed = run.require("seed", 0, int, "an integer", _non_negative("seed"))
    workers = run.require("workers", 1, int, "an integer", _positive("workers"))
    out = run.get("out", Path("out"), Path, "a path")
    out_format = run.get("format", "csv", _parse_choice(FORMATS, "format"), "output format")

    model_sec = _Section(parser, "model", errors)
    model = ModelConfig(
        n=model_sec.get("n", 10, int, "an integer"),
        delta0=model_sec.get("delta0", 1.0, float, "a number"),
        delta=model_sec.get("delta", 1.0, float, "a number"),
        j_bound=0.0,
        topology=model_sec.get("topology", CHAIN,
                               _parse_choice((CHAIN, ALL_PAIRS), "topology"), "topology"),
        coupling_op=model_sec.get("coupling", TRANSVERSE_XX,
                                  _parse_choice((TRANSVERSE_XX, DIAGONAL_ZZ), "coupling"),
                                  "coupling operator"),
        master_seed=seed,
    )
    ratio = model_sec.require("j_over_delta0", 0.48, float, "a number",
                              _non_negative("coupling ratio"))
    model = dataclasses.replace(model, j_bound=ratio * model.delta0)
    for problem in model.validate():
        errors.append(f"model: {problem}")

    sim_sec = _Section(parser, "simulate", errors)
    simulate = SimulateParams(
        realizations=sim_sec.require("realizations", 10, int, "an integer",
                                     _positive("realizations")),
        window=sim_sec.require("window", 0.25, float, "a number",
                               lambda v: None if 0 < v <= 1 else
                               f"window fraction must lie in (0, 1] (got {v})"),
        profile_states=sim_sec.require("profile_states", 8, int, "an integer",
                                       _positive("profile_states")),
    )

    scan_sec = _Section(parser, "scan", errors)
    scan = ScanParams(
        grid=scan_sec.require("grid", ScanParams().grid, _parse_grid,
                              "a comma list or start:stop:count",
                              lambda g: None if all(x >= 0 for x in g)
                              else "grid ratios must be >= 0"),
        realizations=scan_sec.require("realizations", 10, int, "an integer",
                                      _positive("realizations")),
        window=scan_sec.require("window", 0.25, float, "a number",
                                lambda v: None if 0 < v <= 1 else
                                f"window fraction must lie in (0, 1] (got {v})"),
    )

    rx_sec = _Section(parser, "reaction", errors)
    reaction = ReactionParams(
        spectra=rx_sec.get("spectra", (), _parse_str_list, "a comma list of paths"),
        angular=rx_sec.get("angular", None, str, "a path"),
        r0_fm=rx_sec.require("r0_fm", 1.4, float, "a number", _positive("r0_fm")),
        fit_window=rx_sec.get("fit_window", None, _parse_window, "'auto' or lo:hi"),
        max_order=rx_sec.require("max_order", 2, int, "an integer",
                                 _non_negative("max_order")),
        level_density_a=rx_sec.require("level_density_a", None, float, "a number",
                                       _positive("level_density_a")),
        separation_mev=rx_sec.get("separation_mev", 8.0, float, "a number"),
        emission_mev=rx_sec.require("emission_mev", 0.0, float, "a number",
                                    _non_negative("emission energy")),
        gamma_down_mev=rx_sec.require("gamma_down_mev", 1.0, float, "a number",
                                      _positive("gamma_down_mev")),
        gamma_cn_kev=rx_sec.require("gamma_cn_kev", 0.02, float, "a number",
                                    _positive("gamma_cn_kev")),
    )

    synth_sec = _Section(parser, "synth", errors)
    synth = SynthParams(
        temperature=synth_sec.require("temperature", 0.7, float, "a number",
                                      _positive("temperature")),
        beam=synth_sec.require("beam", 18.0, float, "a number", _positive("beam energy")),
        z_p=synth_sec.require("zp", 1, int, "an integer", _positive("Zp")),
        z_t=synth_sec.require("zt", 78, int, "an integer", _positive("Zt")),
        a_t=synth_sec.require("at", 195, int, "an integer", _positive("At")),
        direct_fraction=synth_sec.require("direct_fraction", 0.1, float, "a number",
                                          lambda v: None if 0 <= v < 1 else
                                          f"direct fraction must lie in [0, 1) (got {v})"),
        angles=synth_sec.require("angles", (30.0, 150.0), _parse_float_list,
                                 "a comma list of angles",
                                 lambda a: None if all(0 < x < 180 for x in a)
                                 else "angles must lie strictly inside (0, 180)"),
        e_min=synth_sec.require("e_min", 1.0, float, "a number", _positive("e_min")),
        e_max=synth_sec.require("e_max", 12.0, float, "a number", _positive("e_max")),
        e_step=synth_sec.require("e_step", 0.25, float, "a number", _positive("e_step")),
        noise=synth_sec.require("noise", 0.05, float, "a number", _non_negative("noise")),
        amplitude=synth_sec.require("amplitude", 1e4, float, "a number",
                                    _positive("amplitude")),
    )
    if synth.e_max <= synth.e_min:
        errors.append(f"synth: empty energy grid [{synth.e_min:g}, {synth.e_max:g}]")

    if errors:
        raise ConfigError(errors)
    return RunConfig(
        mode=mode,
        seed=seed,
        workers=workers,
        out=out,
        out_format=out_format,
        model=model,
        simulate=simulate,
        scan=scan,
        reaction=reaction,
        synth=synth,
        warnings=tuple(warnings),
    )
