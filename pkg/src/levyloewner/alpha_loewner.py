"""The beta-evolution dh = 2|h|^(2-beta)/h dt - dU, 1 < beta <= 2.

At beta = 2 this is the chordal Loewner flow; for beta < 2 the drift makes
the growing family self-similar of index beta instead of 2, so a stable
driver with matching index alpha = beta produces an evolution whose law is
invariant under z -> a^(1/alpha) z, t -> a t.  Hitting semantics are the same
as in :mod:`levyloewner.loewner`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .drivers import DriverPath
from .engine import evolve_lanes_on_path
from .errors import ConfigError
from .loewner import EvolutionConfig, HittingOutcome, _outcome_from_lane

__all__ = [
    "AlphaEvolutionConfig",
    "evolve_point_beta",
    "closed_form_null_driver",
    "scaled_path",
]


@dataclass(frozen=True)
class AlphaEvolutionConfig(EvolutionConfig):
    """EvolutionConfig plus the drift exponent beta in (1, 2]."""

    beta: float = 2.0

    def __post_init__(self):
        super().__post_init__()
        if not 1.0 < self.beta <= 2.0:
            raise ConfigError(f"beta must lie in (1,2], got {self.beta}")


def evolve_point_beta(z0: complex, path: DriverPath, cfg: AlphaEvolutionConfig) -> HittingOutcome:
    """Track one point under the beta-drift along a sampled driver path.

    Between driver grid points the drift preserves x*y and moves x^2-y^2
    monotonically, which reduces it to a 1-d integration: exact on the axes
    and on every ray at beta = 2, Runge-Kutta with substeps controlled by
    dt_safety elsewhere.  beta = 2 reproduces evolve_point exactly.
    """
    if z0 == 0:
        raise ConfigError("z0 must be nonzero")
    out = evolve_lanes_on_path(
        np.asarray([z0], dtype=complex), path, cfg.horizon,
        hit_tolerance=cfg.hit_tolerance, beta=cfg.beta, dt_safety=cfg.dt_safety,
        record_trajectory=cfg.record_trajectory,
    )
    if cfg.record_trajectory:
        res, traj = out
        return _outcome_from_lane(res, 0, cfg.horizon, traj)
    return _outcome_from_lane(out, 0, cfg.horizon)


def closed_form_null_driver(x: float, beta: float, t: float) -> float:
    """Drift-only solution on the positive real axis: (x^beta + 2 beta t)^(1/beta).

    Oracle for the integrator with U identically zero; beta = 2 recovers
    sqrt(x^2 + 4t).
    """
    if not x > 0:
        raise ConfigError("x must be positive")
    if not 1.0 < beta <= 2.0:
        raise ConfigError(f"beta must lie in (1,2], got {beta}")
    return (x ** beta + 2.0 * beta * t) ** (1.0 / beta)


def scaled_path(path: DriverPath, a: float, alpha: float, new_horizon: float | None = None) -> DriverPath:
    """The rescaled driver t -> a^(-1/alpha) U(a t) on the shrunk grid.

    For an alpha-stable driver this has the same law as U itself, which is
    what makes the index-alpha evolution self-similar.  Jump sizes scale by
    a^(-1/alpha), jump times by 1/a.
    """
    if not a > 0:
        raise ConfigError("a must be positive")
    if not 0 < alpha <= 2:
        raise ConfigError(f"alpha must lie in (0,2], got {alpha}")
    if new_horizon is None:
        new_horizon = path.horizon / a
    if path.horizon < a * new_horizon - 1e-12:
        raise ConfigError(
            f"path horizon {path.horizon} too short for a={a} and new horizon {new_horizon}"
        )
    keep = path.grid <= a * new_horizon * (1.0 + 1e-15)
    grid = path.grid[keep] / a
    values = path.values[keep] * a ** (-1.0 / alpha)
    if grid[-1] < new_horizon:
        grid = np.append(grid, new_horizon)
        values = np.append(values, values[-1])
    jkeep = path.jump_times <= a * new_horizon * (1.0 + 1e-15)
    return DriverPath(
        grid, values,
        path.jump_times[jkeep] / a,
        path.jump_sizes[jkeep] * a ** (-1.0 / alpha),
        seed_tag=f"{path.seed_tag}|scaled(a={a},alpha={alpha})",
        has_brownian=path.has_brownian,
        is_piecewise_constant=path.is_piecewise_constant,
    )
