"""Ensemble scans of mixing statistics across the coupling border.

Realizations are embarrassingly parallel; the scan farms (grid point,
realization) tasks to worker processes and reduces in fixed (grid index,
realization index) order so the output is byte-identical for any worker
count. BLAS is pinned to one thread inside each task for the same reason:
the result must not depend on how the work was scheduled.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
import multiprocessing

import numpy as np
from threadpoolctl import threadpool_limits

from . import mixing
from .eig import diagonalize
from .model import ModelConfig, build_hamiltonian, draw_couplings, register_basis


@dataclass(frozen=True)
class RealizationStats:
    """Window-averaged statistics of a single disorder realization."""

    j_over_delta0: float
    realization_index: int
    gamma_mean: float
    pr_mean: float
    r_mean: float
    n_states: int


@dataclass(frozen=True)
class ScanResult:
    """Ensemble means over the grid; one entry per J/delta0 value."""

    j_over_delta0: np.ndarray
    gamma_mean: np.ndarray
    gamma_std: np.ndarray
    pr_mean: np.ndarray
    pr_std: np.ndarray
    r_mean: np.ndarray
    r_std: np.ndarray
    realizations: int
    window: float

    def __len__(self) -> int:
        return len(self.j_over_delta0)


class ScanError(RuntimeError):
    """Kernel failure wrapped with grid-point context."""


def realization_stats(config: ModelConfig, realization_index: int,
                      window: float = 0.25,
                      method: str = mixing.GAUSSIAN_EQUIVALENT) -> RealizationStats:
    """Build, diagonalize and reduce one realization to its window averages."""
    with threadpool_limits(limits=1):
        draw = draw_couplings(config, realization_index)
        basis = register_basis(draw, config)
        matrix = build_hamiltonian(draw, config)
        spectrum = diagonalize(matrix)
        _, gammas, prs, spacing = mixing.bulk_mixing_stats(spectrum, basis, window, method)
    return RealizationStats(
        j_over_delta0=config.j_over_delta0,
        realization_index=realization_index,
        gamma_mean=float(gammas.mean()),
        pr_mean=float(prs.mean()),
        r_mean=spacing.mean_ratio,
        n_states=len(gammas),
    )


def _run_task(args) -> RealizationStats:
    config, realization_index, window, method = args
    return realization_stats(config, realization_index, window, method)


def grid_configs(base: ModelConfig, grid) -> list[ModelConfig]:
    """One config per grid point, j_bound = (J/delta0) * delta0."""
    return [replace(base, j_bound=float(j) * base.delta0) for j in grid]


def chaos_scan(base: ModelConfig, grid, realizations: int,
               window: float = 0.25, workers: int = 1,
               method: str = mixing.GAUSSIAN_EQUIVALENT,
               progress=None) -> ScanResult:
    """Scan mixing statistics over a grid of J/delta0 values.

    Runs ``realizations`` independent disorder realizations per grid point
    and averages the window statistics over them. Deterministic for a fixed
    master seed regardless of ``workers``. ``progress``, when given, is
    called with each grid point's aggregated row as soon as it completes,
    in grid order, which is what lets the harness flush partial results.
    """
    grid = [float(j) for j in grid]
    if not grid:
        raise ValueError("empty scan grid")
    if realizations < 1:
        raise ValueError(f"realizations must be >= 1 (got {realizations})")
    configs = grid_configs(base, grid)

    rows = []
    executor = None
    try:
        if workers > 1:
            ctx = multiprocessing.get_context("spawn")
            executor = ProcessPoolExecutor(max_workers=workers, mp_context=ctx)
        for gi, config in enumerate(configs):
            tasks = [(config, ri, window, method) for ri in range(realizations)]
            try:
                if executor is None:
                    stats = [_run_task(t) for t in tasks]
                else:
                    stats = list(executor.map(_run_task, tasks))
            except Exception as exc:
                raise ScanError(
                    f"grid point {gi} (J/delta0 = {grid[gi]:g}) failed: {exc}"
                ) from exc
            row = _reduce_point(grid[gi], stats)
            rows.append(row)
            if progress is not None:
                progress(row)
    finally:
        if executor is not None:
            executor.shutdown()

    return ScanResult(
        j_over_delta0=np.array([r["j_over_delta0"] for r in rows]),
        gamma_mean=np.array([r["gamma_mean"] for r in rows]),
        gamma_std=np.array([r["gamma_std"] for r in rows]),
        pr_mean=np.array([r["pr_mean"] for r in rows]),
        pr_std=np.array([r["pr_std"] for r in rows]),
        r_mean=np.array([r["r_mean"] for r in rows]),
        r_std=np.array([r["r_std"] for r in rows]),
        realizations=realizations,
        window=window,
    )


def _reduce_point(j_over_delta0: float, stats: list[RealizationStats]) -> dict:
    """Ordered reduction of one grid point; keyed so order never varies."""
    stats = sorted(stats, key=lambda s: s.realization_index)
    gammas = np.array([s.gamma_mean for s in stats])
    prs = np.array([s.pr_mean for s in stats])
    rs = np.array([s.r_mean for s in stats])
    return {
        "j_over_delta0": j_over_delta0,
        "gamma_mean": float(gammas.mean()),
        "gamma_std": float(gammas.std(ddof=1)) if len(gammas) > 1 else 0.0,
        "pr_mean": float(prs.mean()),
        "pr_std": float(prs.std(ddof=1)) if len(prs) > 1 else 0.0,
        "r_mean": float(rs.mean()),
        "r_std": float(rs.std(ddof=1)) if len(rs) > 1 else 0.0,
        "realizations": len(stats),
    }
