"""Command-line harness: simulate | scan | analyze | synth | report.

Every mode reads one INI config (all keys defaulted), applies the common
flag overrides, writes its outputs under ``--out`` and drops a
``run_meta.json`` provenance sidecar next to them. Exit codes: 0 success,
1 runtime or data failure, 2 usage or configuration failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import __version__, dataio, mixing
from .config import FORMATS, ConfigError, RunConfig, parse_config
from .dataio import DataFormatError
from .eig import DiagonalizationError, config_digest, diagonalize, save_spectrum
from .model import build_hamiltonian, draw_couplings, register_basis
from .reactions import (
    FitRegimeError,
    asymmetry_report,
    excitation_energy,
    fit_legendre,
    fit_temperature,
    phase_time_proxy,
    scale_spectrum,
    synthesize_spectrum,
    timescale_report,
)
from .scan import ScanError, chaos_scan


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="INI configuration file")
    common.add_argument("--seed", type=int, help="master seed override")
    common.add_argument("--workers", type=int, help="parallel worker processes")
    common.add_argument("--out", metavar="DIR", help="output directory override")
    common.add_argument("--format", choices=FORMATS, dest="out_format",
                        help="table output format override")

    parser = argparse.ArgumentParser(
        prog="phasemem",
        description="qubit-register meltdown simulation and reaction phase-memory analysis",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True, metavar="MODE")
    sub.add_parser("simulate", parents=[common],
                   help="one ensemble at fixed coupling: profiles, widths, spacings")
    sub.add_parser("scan", parents=[common],
                   help="sweep mixing statistics across the coupling border")
    sub.add_parser("analyze", parents=[common],
                   help="scale measured spectra, fit temperature and angular shape")
    sub.add_parser("synth", parents=[common],
                   help="generate synthetic evaporation data with known truth")
    sub.add_parser("report", parents=[common],
                   help="time-scale ratios and effective-dimension estimates")
    return parser


def _effective_config(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(["--seed must be >= 0"])
        cfg = dataclasses.replace(
            cfg, seed=args.seed,
            model=dataclasses.replace(cfg.model, master_seed=args.seed),
        )
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError(["--workers must be >= 1"])
        cfg = dataclasses.replace(cfg, workers=args.workers)
    if args.out is not None:
        cfg = dataclasses.replace(cfg, out=Path(args.out))
    if args.out_format is not None:
        cfg = dataclasses.replace(cfg, out_format=args.out_format)
    return dataclasses.replace(cfg, mode=args.mode)


def _table_name(stem: str, fmt: str) -> str:
    return f"{stem}.{'json' if fmt == 'json' else 'csv'}"


def _central_eigenstates(dim: int, count: int) -> range:
    count = min(count, dim)
    lo = max(0, dim // 2 - count // 2)
    return range(lo, lo + count)


def _cmd_simulate(cfg: RunConfig, args) -> int:
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    fmt = cfg.out_format
    model = cfg.model
    per_real = []
    first = None
    for r in range(cfg.simulate.realizations):
        draw = draw_couplings(model, r)
        basis = register_basis(draw, model)
        spectrum = diagonalize(build_hamiltonian(draw, model))
        _, gammas, prs, spacing = mixing.bulk_mixing_stats(
            spectrum, basis, cfg.simulate.window)
        per_real.append({
            "realization": r,
            "gamma_mean": float(gammas.mean()),
            "pr_mean": float(prs.mean()),
            "r_mean": spacing.mean_ratio,
            "n_states": int(len(gammas)),
        })
        if r == 0:
            first = (spectrum, basis)

    spectrum, basis = first
    states = _central_eigenstates(spectrum.dim, cfg.simulate.profile_states)
    profiles = [mixing.mixing_weights(spectrum, basis, k) for k in states]
    order = np.argsort(basis.energies, kind="stable")
    central_regs = [int(order[k]) for k in _central_eigenstates(
        spectrum.dim, cfg.simulate.profile_states)]
    strengths = [mixing.ldos(spectrum, basis, i) for i in central_regs]

    meta = {"n": model.n, "j_over_delta0": model.j_over_delta0,
            "topology": model.topology, "coupling": model.coupling_op,
            "seed": cfg.seed, "realization": 0}
    dataio.write_mixing_csv(out / _table_name("mixing", fmt), profiles, meta, fmt)
    dataio.write_ldos_csv(out / _table_name("ldos", fmt), strengths, meta, fmt)
    save_spectrum(out / "spectrum.bin", spectrum,
                  config_digest(repr(model) + " realization=0"))

    gms = np.array([row["gamma_mean"] for row in per_real])
    prs = np.array([row["pr_mean"] for row in per_real])
    rms = np.array([row["r_mean"] for row in per_real])
    summary = {
        "model": {"n": model.n, "delta0": model.delta0, "delta": model.delta,
                  "j_over_delta0": model.j_over_delta0, "topology": model.topology,
                  "coupling": model.coupling_op, "seed": cfg.seed},
        "window": cfg.simulate.window,
        "realizations": per_real,
        "aggregate": {
            "gamma_mean": float(gms.mean()),
            "gamma_std": float(gms.std(ddof=1)) if len(gms) > 1 else 0.0,
            "pr_mean": float(prs.mean()),
            "pr_std": float(prs.std(ddof=1)) if len(prs) > 1 else 0.0,
            "r_mean": float(rms.mean()),
            "r_std": float(rms.std(ddof=1)) if len(rms) > 1 else 0.0,
        },
    }
    dataio.write_json(out / "simulate_summary.json", summary)
    _write_meta(cfg, args)
    print(f"simulate: n={model.n} J/delta0={model.j_over_delta0:g} "
          f"R={cfg.simulate.realizations} -> {out}")
    return 0


def _cmd_scan(cfg: RunConfig, args) -> int:
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    fmt = cfg.out_format
    meta = {"n": cfg.model.n, "delta0": cfg.model.delta0, "delta": cfg.model.delta,
            "topology": cfg.model.topology, "coupling": cfg.model.coupling_op,
            "seed": cfg.seed, "window": cfg.scan.window,
            "realizations": cfg.scan.realizations}
    scan_path = out / _table_name("scan", fmt)
    partial: list[dict] = []

    def flush(row: dict) -> None:
        # rewrite after every grid point so an interrupted sweep still leaves data
        partial.append(row)
        rows = [(r["j_over_delta0"], r["gamma_mean"], r["gamma_std"], r["pr_mean"],
                 r["pr_std"], r["r_mean"], r["r_std"], cfg.scan.realizations)
                for r in partial]
        dataio.write_table(scan_path, dataio.SCAN_COLUMNS, rows, meta, fmt)
        print(f"scan: J/delta0={row['j_over_delta0']:g} done "
              f"({len(partial)} of {len(cfg.scan.grid)})", flush=True)

    result = chaos_scan(cfg.model, cfg.scan.grid, cfg.scan.realizations,
                        window=cfg.scan.window, workers=cfg.workers, progress=flush)
    dataio.write_scan_csv(scan_path, result, meta, fmt)
    _write_meta(cfg, args)
    print(f"scan: {len(result)} grid points -> {scan_path}")
    return 0


def _cmd_analyze(cfg: RunConfig, args) -> int:
    rx = cfg.reaction
    if not rx.spectra:
        raise ConfigError(["analyze mode needs reaction.spectra = <csv, ...>"])
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    fmt = cfg.out_format

    report: dict = {"spectra": [], "penetrability_r0_fm": rx.r0_fm}
    first_spec = None
    for path in rx.spectra:
        spec = dataio.read_spectrum_csv(path)
        first_spec = first_spec or spec
        scaled = scale_spectrum(spec, rx.r0_fm)
        stem = f"scaled_{spec.angle_deg:06.1f}deg".replace(".", "p")
        dataio.write_scaled_csv(out / _table_name(stem, fmt), scaled, fmt)
        tfit = fit_temperature(scaled, rx.fit_window)
        report["spectra"].append({
            "source": str(path),
            "angle_deg": spec.angle_deg,
            "n_dropped": scaled.n_dropped,
            "temperature_MeV": tfit.temperature_mev,
            "temperature_err_MeV": tfit.temperature_err_mev,
            "fit_window_MeV": list(tfit.window_mev),
            "chi2_dof": tfit.chi2_dof,
            "n_points": tfit.n_points,
            "weighted": tfit.weighted,
        })

    if rx.angular:
        dist = dataio.read_angular_csv(rx.angular)
        lfit = fit_legendre(dist, rx.max_order)
        asym = asymmetry_report(lfit)
        report["angular"] = {
            "source": str(rx.angular),
            "coefficients": [float(c) for c in lfit.coefficients],
            "covariance": [[float(v) for v in row] for row in lfit.covariance],
            "max_order": lfit.max_order,
            "chi2_dof": lfit.chi2_dof,
            "n_points": lfit.n_points,
            "weighted": lfit.weighted,
            "a1_over_a0": asym.a1_over_a0,
            "a1_over_a0_err": asym.a1_over_a0_err,
            "forward_backward": asym.forward_backward,
            "forward_backward_err": asym.forward_backward_err,
            "phase_time_proxy": phase_time_proxy(lfit),
        }

    level_a = rx.level_density_a if rx.level_density_a is not None else first_spec.a_t / 8.0
    excitation = excitation_energy(first_spec.beam_mev, rx.separation_mev, rx.emission_mev)
    scales = timescale_report(rx.gamma_down_mev, rx.gamma_cn_kev, level_a, excitation)
    report["timescales"] = {
        "gamma_down_MeV": scales.gamma_down_mev,
        "gamma_cn_keV": scales.gamma_cn_kev,
        "time_ratio": scales.time_ratio,
        "level_density_a": scales.level_density_a,
        "excitation_MeV": scales.excitation_mev,
        "n_eff": scales.n_eff,
        "qubit_equiv": scales.qubit_equiv,
    }
    dataio.write_json(out / "report.json", report)
    _write_meta(cfg, args, inputs=list(rx.spectra) + ([rx.angular] if rx.angular else []))
    temps = ", ".join(f"{s['temperature_MeV']:.3f}" for s in report["spectra"])
    print(f"analyze: {len(rx.spectra)} spectra, T = {temps} MeV -> {out / 'report.json'}")
    return 0


def _cmd_synth(cfg: RunConfig, args) -> int:
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    fmt = cfg.out_format
    sp = cfg.synth
    data = synthesize_spectrum(
        sp.temperature, sp.direct_fraction, sp.angles,
        beam_mev=sp.beam, z_p=sp.z_p, z_t=sp.z_t, a_t=sp.a_t,
        r0_fm=cfg.reaction.r0_fm,
        e_min=sp.e_min, e_max=sp.e_max, e_step=sp.e_step,
        noise=sp.noise, amplitude=sp.amplitude, seed=cfg.seed,
    )
    written = []
    for spec in data.spectra:
        stem = f"spectrum_{spec.angle_deg:06.1f}deg".replace(".", "p")
        written.append(dataio.write_spectrum_csv(out / _table_name(stem, fmt), spec, fmt))
    written.append(dataio.write_angular_csv(out / _table_name("angular", fmt),
                                            data.angular, fmt))
    _write_meta(cfg, args)
    print(f"synth: T={sp.temperature:g} MeV f={sp.direct_fraction:g} -> "
          + ", ".join(p.name for p in written))
    return 0


def _cmd_report(cfg: RunConfig, args) -> int:
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    rx = cfg.reaction
    level_a = rx.level_density_a if rx.level_density_a is not None else cfg.synth.a_t / 8.0
    excitation = excitation_energy(cfg.synth.beam, rx.separation_mev, rx.emission_mev)
    scales = timescale_report(rx.gamma_down_mev, rx.gamma_cn_kev, level_a, excitation)
    payload = {
        "gamma_down_MeV": scales.gamma_down_mev,
        "gamma_cn_keV": scales.gamma_cn_kev,
        "time_ratio": scales.time_ratio,
        "level_density_a": scales.level_density_a,
        "excitation_MeV": scales.excitation_mev,
        "n_eff": scales.n_eff,
        "qubit_equiv": scales.qubit_equiv,
    }
    dataio.write_json(out / "timescales.json", payload)
    _write_meta(cfg, args)
    print(f"report: time ratio {scales.time_ratio:g}, "
          f"N_eff ~ 2^{scales.qubit_equiv} -> {out / 'timescales.json'}")
    return 0


def _write_meta(cfg: RunConfig, args, inputs=()) -> None:
    record = dataio.make_record(__version__, cfg.seed, args.config, inputs)
    dataio.write_run_meta(cfg.out, record)


_DISPATCH = {
    "simulate": _cmd_simulate,
    "scan": _cmd_scan,
    "analyze": _cmd_analyze,
    "synth": _cmd_synth,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _effective_config(args)
    except ConfigError as exc:
        print(f"phasemem: {exc}", file=sys.stderr)
        return 2
    for warning in cfg.warnings:
        print(f"phasemem: warning: {warning}", file=sys.stderr)
    try:
        return _DISPATCH[args.mode](cfg, args)
    except ConfigError as exc:
        print(f"phasemem: {exc}", file=sys.stderr)
        return 2
    except (DataFormatError, FitRegimeError, ScanError, DiagonalizationError,
            OSError, ValueError) as exc:
        print(f"phasemem: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
