"""File formats: CSV/JSON tables with comment metadata, hashes, run sidecars.

Table files are plain CSV with a fixed header and ``# key: value`` comment
lines for scalar metadata, so they stay greppable and spreadsheet-friendly.
Floats are written with ``repr``, which round-trips every IEEE double
exactly. Parse errors always name the file and line. The JSON variant of a
table carries the same columns, rows and metadata in one document.

Emitted results never embed wall-clock time; timestamps and provenance
(config hash, input hashes, seed, tool version) live in a ``run_meta.json``
sidecar so identical runs produce byte-identical data files.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .reactions import AngularDistribution, ParticleSpectrum, ScaledSpectrum

SPECTRUM_COLUMNS = ("E_MeV", "yield", "yield_err")
ANGULAR_COLUMNS = ("theta_deg", "dsdo_mb_sr", "err")
SCALED_COLUMNS = ("E_MeV", "intensity", "intensity_err")
SCAN_COLUMNS = ("j_over_delta0", "gamma_mean", "gamma_std", "pr_mean",
                "pr_std", "r_mean", "r_std", "realizations")
MIXING_COLUMNS = ("eigenstate", "eigenvalue", "E_i", "W_i")
LDOS_COLUMNS = ("register_state", "E_i", "eigenvalue", "weight")


class DataFormatError(ValueError):
    """Malformed input data; the message names the file and line."""


@dataclass(frozen=True)
class ResultRecord:
    """Provenance sidecar content for one run."""

    tool_version: str
    seed: int
    config_path: str
    config_sha256: str
    inputs: dict[str, str]
    created_utc: str


def hash_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_table(path, columns, rows, metadata=None, fmt: str = "csv") -> Path:
    """Write one table as CSV with comment metadata, or as a JSON document."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    metadata = metadata or {}
    if fmt == "json":
        doc = {
            "columns": list(columns),
            "metadata": {k: (float(v) if isinstance(v, np.floating) else
                             int(v) if isinstance(v, np.integer) else v)
                         for k, v in metadata.items()},
            "rows": [[_json_cell(v) for v in row] for row in rows],
        }
        write_json(path, doc)
        return path
    if fmt != "csv":
        raise ValueError(f"unknown table format {fmt!r} (expected csv or json)")
    lines = [f"# {key}: {_format_value(value)}" for key, value in metadata.items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _json_cell(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _parse_table(path, expected_columns):
    """Parse comment metadata, header and numeric rows; errors carry line numbers."""
    path = Path(path)
    if not path.is_file():
        raise DataFormatError(f"{path}: file not found")
    metadata: dict[str, str] = {}
    rows: list[tuple[int, list[float]]] = []
    header_seen = False
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, value = body.split(":", 1)
                    metadata[key.strip()] = value.strip()
                continue
            if not header_seen:
                columns = tuple(c.strip() for c in line.split(","))
                if columns != tuple(expected_columns):
                    raise DataFormatError(
                        f"{path}:{lineno}: expected header "
                        f"'{','.join(expected_columns)}', got '{line}'"
                    )
                header_seen = True
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != len(expected_columns):
                raise DataFormatError(
                    f"{path}:{lineno}: expected {len(expected_columns)} fields, "
                    f"got {len(parts)}"
                )
            values = []
            for col, part in zip(expected_columns, parts):
                try:
                    values.append(float(part))
                except ValueError:
                    raise DataFormatError(
                        f"{path}:{lineno}: column {col}: not a number: {part!r}"
                    ) from None
            rows.append((lineno, values))
    if not header_seen:
        raise DataFormatError(f"{path}: no header line found")
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return metadata, rows


def _require_meta(path, metadata, key, cast, label):
    if key not in metadata:
        raise DataFormatError(f"{path}: missing required metadata '# {key}: ...'")
    try:
        return cast(metadata[key])
    except ValueError:
        raise DataFormatError(
            f"{path}: metadata {key} = {metadata[key]!r}: expected {label}"
        ) from None


def read_spectrum_csv(path) -> ParticleSpectrum:
    """Load one emission spectrum; rejects non-monotonic energies by line."""
    path = Path(path)
    metadata, rows = _parse_table(path, SPECTRUM_COLUMNS)
    angle = _require_meta(path, metadata, "angle_deg", float, "a number")
    beam = _require_meta(path, metadata, "beam_MeV", float, "a number")
    z_p = _require_meta(path, metadata, "Zp", int, "an integer")
    z_t = _require_meta(path, metadata, "Zt", int, "an integer")
    a_t = _require_meta(path, metadata, "At", int, "an integer")
    data = np.array([v for _, v in rows])
    for k in range(1, len(rows)):
        if data[k, 0] <= data[k - 1, 0]:
            raise DataFormatError(
                f"{path}:{rows[k][0]}: energies must be strictly increasing "
                f"({data[k, 0]:g} after {data[k - 1, 0]:g})"
            )
    if np.any(data[:, 1] < 0) or np.any(data[:, 2] < 0):
        bad = rows[int(np.argmax((data[:, 1] < 0) | (data[:, 2] < 0)))][0]
        raise DataFormatError(f"{path}:{bad}: yields and errors must be non-negative")
    return ParticleSpectrum(
        angle_deg=angle,
        energies=data[:, 0],
        yields=data[:, 1],
        errors=data[:, 2],
        beam_mev=beam,
        z_p=z_p, z_t=z_t, a_t=a_t,
        reaction=metadata.get("reaction", ""),
    )


def write_spectrum_csv(path, spec: ParticleSpectrum, fmt: str = "csv") -> Path:
    metadata = {
        "angle_deg": spec.angle_deg,
        "beam_MeV": spec.beam_mev,
        "Zp": spec.z_p,
        "Zt": spec.z_t,
        "At": spec.a_t,
    }
    if spec.reaction:
        metadata["reaction"] = spec.reaction
    rows = zip(spec.energies, spec.yields, spec.errors)
    return write_table(path, SPECTRUM_COLUMNS, rows, metadata, fmt)


def read_angular_csv(path) -> AngularDistribution:
    path = Path(path)
    metadata, rows = _parse_table(path, ANGULAR_COLUMNS)
    e_lo = _require_meta(path, metadata, "e_lo_MeV", float, "a number")
    e_hi = _require_meta(path, metadata, "e_hi_MeV", float, "a number")
    data = np.array([v for _, v in rows])
    for k, (lineno, values) in enumerate(rows):
        if not 0 < values[0] < 180:
            raise DataFormatError(
                f"{path}:{lineno}: angle {values[0]:g} outside (0, 180) degrees"
            )
        if values[1] < 0 or values[2] < 0:
            raise DataFormatError(
                f"{path}:{lineno}: cross sections and errors must be non-negative"
            )
    return AngularDistribution(
        thetas_deg=data[:, 0],
        dsdo=data[:, 1],
        errors=data[:, 2],
        e_window_mev=(e_lo, e_hi),
        reaction=metadata.get("reaction", ""),
    )


def write_angular_csv(path, dist: AngularDistribution, fmt: str = "csv") -> Path:
    metadata = {
        "e_lo_MeV": dist.e_window_mev[0],
        "e_hi_MeV": dist.e_window_mev[1],
    }
    if dist.reaction:
        metadata["reaction"] = dist.reaction
    rows = zip(dist.thetas_deg, dist.dsdo, dist.errors)
    return write_table(path, ANGULAR_COLUMNS, rows, metadata, fmt)


def read_scaled_csv(path) -> ScaledSpectrum:
    path = Path(path)
    metadata, rows = _parse_table(path, SCALED_COLUMNS)
    angle = _require_meta(path, metadata, "angle_deg", float, "a number")
    r0 = _require_meta(path, metadata, "r0_fm", float, "a number")
    data = np.array([v for _, v in rows])
    return ScaledSpectrum(
        energies=data[:, 0],
        intensities=data[:, 1],
        errors=data[:, 2],
        angle_deg=angle,
        r0_fm=r0,
        model_id=metadata.get("model", ""),
        n_dropped=int(metadata.get("n_dropped", "0")),
    )


def write_scaled_csv(path, scaled: ScaledSpectrum, fmt: str = "csv") -> Path:
    metadata = {
        "angle_deg": scaled.angle_deg,
        "r0_fm": scaled.r0_fm,
        "model": scaled.model_id,
        "n_dropped": scaled.n_dropped,
    }
    rows = zip(scaled.energies, scaled.intensities, scaled.errors)
    return write_table(path, SCALED_COLUMNS, rows, metadata, fmt)


def write_scan_csv(path, result, metadata=None, fmt: str = "csv") -> Path:
    rows = [
        (result.j_over_delta0[k], result.gamma_mean[k], result.gamma_std[k],
         result.pr_mean[k], result.pr_std[k], result.r_mean[k], result.r_std[k],
         result.realizations)
        for k in range(len(result))
    ]
    return write_table(path, SCAN_COLUMNS, rows, metadata or {}, fmt)


def write_mixing_csv(path, profiles, metadata=None, fmt: str = "csv") -> Path:
    """One row per (eigenstate, register state) pair, eigenstates in order."""
    rows = []
    for profile in profiles:
        for energy, weight in zip(profile.energies, profile.weights):
            rows.append((profile.eigenstate, profile.eigenvalue, energy, weight))
    return write_table(path, MIXING_COLUMNS, rows, metadata or {}, fmt)


def write_ldos_csv(path, strengths, metadata=None, fmt: str = "csv") -> Path:
    """One row per (register state, eigenstate) pair, register states in order."""
    rows = []
    for strength in strengths:
        for eigenvalue, weight in zip(strength.energies, strength.weights):
            rows.append((strength.register_state, strength.register_energy,
                         eigenvalue, weight))
    return write_table(path, LDOS_COLUMNS, rows, metadata or {}, fmt)


def write_run_meta(out_dir, record: ResultRecord) -> Path:
    payload = {
        "tool_version": record.tool_version,
        "seed": record.seed,
        "config_path": record.config_path,
        "config_sha256": record.config_sha256,
        "inputs": record.inputs,
        "created_utc": record.created_utc,
    }
    return write_json(Path(out_dir) / "run_meta.json", payload)


def make_record(version: str, seed: int, config_path, input_paths=()) -> ResultRecord:
    config_path = Path(config_path) if config_path else None
    return ResultRecord(
        tool_version=version,
        seed=seed,
        config_path=str(config_path) if config_path else "",
        config_sha256=hash_file(config_path) if config_path else "",
        inputs={str(p): hash_file(p) for p in input_paths},
        created_utc=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
