"""Single runs and 1-2 axis parameter sweeps over a ScenarioConfig."""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import ConfigError, ScenarioConfig
from .integrator import Trajectory, simulate, steady_state


@dataclass
class SweepResult:
    axis_names: tuple[str, ...]
    rows: list[tuple[float, ...]]  # (axis values..., value)

    def grid(self) -> np.ndarray:
        """Values reshaped to (len(axis1), len(axis2)) in row order."""
        first = sorted({r[0] for r in self.rows})
        return np.array([r[-1] for r in self.rows]).reshape(len(first), -1)


def run(cfg: ScenarioConfig, overrides: dict | None = None) -> Trajectory:
    eqset, init = cfg.equations(overrides)
    return simulate(eqset, init, cfg.t_end, cfg.dt)


def sample_indices(cfg: ScenarioConfig) -> tuple[np.ndarray, np.ndarray]:
    """Grid indices and times of the requested time samples."""
    n = int(round(cfg.t_end / cfg.dt))
    if cfg.times is None:
        idx = np.arange(n + 1)
        return idx, idx * cfg.dt
    ts = np.array(cfg.times.values())
    idx = np.rint(ts / cfg.dt).astype(int)
    if np.any(np.abs(idx * cfg.dt - ts) > 1e-9 * max(1.0, cfg.t_end)) or idx.max() > n or idx.min() < 0:
        raise ConfigError("sweep.times must lie on the integrator dt grid within [0, t_end]")
    return idx, ts


def _point(args):
    cfg, overrides = args
    traj = run(cfg, overrides)
    if cfg.output == "steady":
        return [steady_state(traj, cfg.window).value]
    idx, _ = sample_indices(cfg)
    return traj.concurrence()[idx].tolist()


def run_sweep(cfg: ScenarioConfig, jobs: int | None = None) -> SweepResult:
    if not cfg.axes:
        raise ConfigError("sweep needs at least one axis in [sweep].axes")
    names = tuple(a.name for a in cfg.axes)
    combos = list(itertools.product(*(a.values() for a in cfg.axes)))
    tasks = [(cfg, dict(zip(names, c))) for c in combos]
    if cfg.output == "time":
        _, ts = sample_indices(cfg)
    jobs = jobs or os.cpu_count() or 1
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            results = list(pool.map(_point, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_point(t) for t in tasks]
    rows = []
    if cfg.output == "steady":
        for c, r in zip(combos, results):
            rows.append((*c, r[0]))
        return SweepResult(names, rows)
    for c, r in zip(combos, results):
        rows.extend((*c, t, v) for t, v in zip(ts, r))
    return SweepResult(names + ("t",), rows)
