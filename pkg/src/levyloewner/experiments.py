"""Monte Carlo estimators for the hitting-probability phases, exponents,
overshoot bounds, area fractions, scaling identities, disconnection frequency
and the empirical critical-strength bracket.

Almost-sure statements are estimated through P(zeta <= T); every phase
estimate therefore carries a horizon flag comparing the paired T and 2T
fractions, and the 0.05/0.95 thresholds used by the acceptance suite are
conventions of this artifact at the documented (n, T), not claims of the
underlying theory.

Determinism: every estimator takes a master seed and derives one stream per
(operation, cell, block); worker counts only change scheduling.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .drivers import (
    Brownian,
    CompoundPoisson,
    DriverSpec,
    JumpLaw,
    Stable,
    TruncatedStable,
    sample_driver,
)
from .engine import BLOCK, run_adaptive_mc
from .errors import ConfigError, StatisticalError
from .loewner import EvolutionConfig, connected_components, raster_cluster
from .rng import stream
from .stable_calculus import theta0

__all__ = [
    "PhaseParams",
    "PhaseEstimate",
    "ExponentFit",
    "OvershootReport",
    "ScalingCheckResult",
    "AreaFractionResult",
    "DisconnectionResult",
    "Theta0BracketResult",
    "wilson_ci",
    "ks_two_sample",
    "hitting_probability",
    "phase_scan",
    "slope_near_zero",
    "slope_near_infinity",
    "overshoot_histogram",
    "area_fraction",
    "scaling_check",
    "disconnection_frequency",
    "theta0_bracket",
    "composite_driver_phase",
]


# ---------------------------------------------------------------------------
# statistics helpers
# ---------------------------------------------------------------------------

_Z95 = 1.959963984540054


def wilson_ci(hits: int, n: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n < 1:
        raise ConfigError("n must be at least 1")
    p = hits / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def ks_two_sample(a: np.ndarray, b: np.ndarray, level: float = 0.01):
    """Two-sample Kolmogorov-Smirnov distance against the asymptotic critical
    value at the given level; returns (distance, critical, passed)."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    n, m = a.size, b.size
    if n == 0 or m == 0:
        raise StatisticalError("KS test needs nonempty samples")
    pooled = np.concatenate([a, b])
    fa = np.searchsorted(a, pooled, side="right") / n
    fb = np.searchsorted(b, pooled, side="right") / m
    dist = float(np.max(np.abs(fa - fb)))
    c_level = float(np.sqrt(-np.log(level / 2.0) / 2.0))
    crit = float(c_level * np.sqrt((n + m) / (n * m)))
    return dist, crit, bool(dist < crit)


def _se(p: float, n: int) -> float:
    return float(np.sqrt(max(p * (1.0 - p), 0.0) / n))


# ---------------------------------------------------------------------------
# phase estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseParams:
    """Parameter point of the phase diagram: driver (kappa, alpha, theta),
    evolution exponent beta (2 = Loewner), and the tracked point z."""

    z: complex
    kappa: float = 0.0
    alpha: float = 1.5
    theta: float = 0.0
    beta: float = 2.0

    def driver_spec(self) -> DriverSpec:
        comps: list = []
        if self.kappa > 0:
            comps.append(Brownian(self.kappa))
        if self.theta > 0:
            comps.append(Stable(self.alpha, self.theta))
        if not comps:
            comps.append(Brownian(0.0))  # degenerate U == 0
        return DriverSpec(tuple(comps))


@dataclass(frozen=True)
class PhaseEstimate:
    params: PhaseParams
    n: int
    horizon: float
    seed: int
    hit_fraction: float
    wilson: tuple[float, float]
    hit_fraction_2t: float
    horizon_flag: str  # "stable" | "drifting"
    declared_class: str = "n/a"

    def row(self) -> dict:
        p = self.params
        return {
            "kappa": p.kappa, "alpha": p.alpha, "theta": p.theta, "beta": p.beta,
            "re_z": complex(p.z).real, "im_z": complex(p.z).imag,
            "n": self.n, "T": self.horizon,
            "hit_frac": self.hit_fraction, "ci_lo": self.wilson[0], "ci_hi": self.wilson[1],
            "horizon_flag": self.horizon_flag,
        }


def _flag(frac_t: float, frac_2t: float, n: int) -> str:
    combined = np.sqrt(_se(frac_t, n) ** 2 + _se(frac_2t, n) ** 2)
    return "drifting" if (frac_2t - frac_t) > 2.0 * combined else "stable"


def hitting_probability(params: PhaseParams, n: int, horizon: float, seed: int,
                        cfg: EvolutionConfig | None = None, workers: int = 1,
                        tag=("hitprob",)) -> PhaseEstimate:
    """Estimate P(zeta(z) <= T) from n independent driver paths.

    Censoring at the horizon is reported, never treated as survival-forever:
    the estimate is of P(zeta <= T) and the horizon flag compares against the
    paired 2T fractions as the convergence diagnostic.
    """
    if params.z == 0:
        raise ConfigError("z must be nonzero")
    if n < 100:
        raise ConfigError("n >= 100 required for CI validity")
    if cfg is None:
        cfg = EvolutionConfig(horizon=horizon)
    res = run_adaptive_mc(
        params.driver_spec(), params.z, n, 2.0 * horizon,
        master_seed=seed, tag=tag, hit_tolerance=cfg.hit_tolerance,
        beta=params.beta, dt_safety=cfg.dt_safety, dt_max=cfg.dt_max,
        workers=workers,
    )
    hits_t = int(np.nansum((res.zeta <= horizon).astype(np.int64)))
    hits_2t = int(res.hit.sum())
    frac_t = hits_t / n
    frac_2t = hits_2t / n
    return PhaseEstimate(
        params=params, n=n, horizon=horizon, seed=seed,
        hit_fraction=frac_t, wilson=wilson_ci(hits_t, n),
        hit_fraction_2t=frac_2t, horizon_flag=_flag(frac_t, frac_2t, n),
    )


def phase_scan(grid: dict, z: complex, n: int, horizon: float, seed: int,
               cfg: EvolutionConfig | None = None, workers: int = 1) -> list[PhaseEstimate]:
    """Cartesian sweep over grid axes drawn from {kappa, alpha, theta, beta}.

    Each cell uses its own deterministic stream; cells are independent tasks.
    """
    axes = ("kappa", "alpha", "theta", "beta")
    unknown = set(grid) - set(axes)
    if unknown:
        raise ConfigError(f"unknown grid axes {sorted(unknown)}; allowed {axes}")
    lists = [list(grid.get(k, [None])) for k in axes]
    cells = list(itertools.product(*lists))
    if not cells or all(len(v) == 0 for v in lists):
        raise ConfigError("empty phase grid")
    defaults = dict(kappa=0.0, alpha=1.5, theta=0.0, beta=2.0)

    def cell_params(cell):
        vals = {k: (v if v is not None else defaults[k]) for k, v in zip(axes, cell)}
        return PhaseParams(z=z, **vals)

    def job(i):
        return hitting_probability(cell_params(cells[i]), n, horizon, seed,
                                   cfg=cfg, tag=("phase", i))

    if workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, range(len(cells))))
    return [job(i) for i in range(len(cells))]


# ---------------------------------------------------------------------------
# hitting-exponent fits near zero and near infinity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentFit:
    side: str                     # "near_zero" | "near_infinity"
    x: np.ndarray
    p_hat: np.ndarray
    ci_lo: np.ndarray
    ci_hi: np.ndarray
    slope: float
    slope_se: float
    expected: float

    @property
    def within(self) -> float:
        return abs(self.slope - self.expected)


def _wls_loglog(x: np.ndarray, p: np.ndarray, se: np.ndarray) -> tuple[float, float]:
    lx = np.log(x)
    lp = np.log(p)
    w = (p / se) ** 2  # delta method: Var(log p) = (se/p)^2
    xm = np.average(lx, weights=w)
    ym = np.average(lp, weights=w)
    sxx = np.sum(w * (lx - xm) ** 2)
    slope = float(np.sum(w * (lx - xm) * (lp - ym)) / sxx)
    # WLS slope variance with unit-variance scaling of the declared weights
    se_slope = float(np.sqrt(1.0 / sxx))
    return slope, se_slope


def _exponent_fit(side: str, kappa: float, alpha: float, theta: float,
                  x_grid, n: int, horizon: float, seed: int, expected: float,
                  use_survival: bool, workers: int = 1) -> ExponentFit:
    if not kappa > 4:
        raise ConfigError("exponent fits require kappa > 4")
    if not 0 < alpha < 1:
        raise ConfigError("exponent fits require alpha in (0,1)")
    x_grid = np.asarray(sorted(float(v) for v in x_grid))
    rows = []
    for i, x in enumerate(x_grid):
        est = hitting_probability(PhaseParams(z=x, kappa=kappa, alpha=alpha, theta=theta),
                                  n, horizon, seed, tag=("slope", side, i), workers=workers)
        hits = round(est.hit_fraction * n)
        k = (n - hits) if use_survival else hits
        if k == 0 or k == n:
            continue  # CI touches {0,1}: log undefined, drop
        p = k / n
        lo, hi = wilson_ci(k, n)
        rows.append((x, p, lo, hi))
    if len(rows) < 5:
        raise StatisticalError(
            f"only {len(rows)} usable grid points after dropping saturated estimates; need >= 5"
        )
    xs, ps, los, his = map(np.asarray, zip(*rows))
    ses = np.maximum((his - los) / (2 * _Z95), 1e-12)
    slope, slope_se = _wls_loglog(xs, ps, ses)
    return ExponentFit(side=side, x=xs, p_hat=ps, ci_lo=los, ci_hi=his,
                       slope=slope, slope_se=slope_se, expected=expected)


def slope_near_zero(kappa: float, alpha: float, theta: float, x_grid, n: int,
                    horizon: float, seed: int, workers: int = 1) -> ExponentFit:
    """log-log fit of the survival fraction P(zeta > T) on x in (0,1];
    expected slope 1 - 4/kappa."""
    if max(x_grid) > 1.0:
        raise ConfigError("near-zero grid must lie in (0, 1]")
    return _exponent_fit("near_zero", kappa, alpha, theta, x_grid, n, horizon,
                         seed, expected=1.0 - 4.0 / kappa, use_survival=True,
                         workers=workers)


def slope_near_infinity(kappa: float, alpha: float, theta: float, x_grid, n: int,
                        horizon: float, seed: int, workers: int = 1) -> ExponentFit:
    """log-log fit of the hit fraction on x in [2, inf); expected slope alpha-1."""
    if min(x_grid) < 2.0:
        raise ConfigError("near-infinity grid must lie in [2, inf)")
    return _exponent_fit("near_infinity", kappa, alpha, theta, x_grid, n, horizon,
                         seed, expected=alpha - 1.0, use_survival=False,
                         workers=workers)


# ---------------------------------------------------------------------------
# overshoot distribution of the annulus exit vs analytic envelopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OvershootReport:
    a: float
    b: float
    alpha: float
    n: int
    inner_fraction: float        # exits with |h1| <= a, conditional basis below
    outer_fraction: float
    censored_fraction: float
    atom_inner: float            # mass at +-a among inner exits
    atom_outer: float
    inner_bins: np.ndarray       # columns: lo, hi, density, se, bound
    outer_bins: np.ndarray
    inner_bound: float
    total_probability: float
    all_below_bound: bool


def _annulus_exit_positions(kappa: float, alpha: float, theta: float, x0: float,
                            a: float, b: float, n: int, horizon: float, seed: int,
                            dt_safety: float = 0.1):
    """First exit of the real flow from {a < |x| < b}: per-replica exit side
    and position.  Continuous sub-crossings (drift, Brownian) stop exactly at
    the boundary (atoms); jump sub-crossings record the landed position."""
    if not (b > a > 0 and a < abs(x0) < b):
        raise ConfigError("need b > a > 0 and a < |x0| < b")
    sides = np.zeros(n, dtype=np.int8)  # 0 censored, 1 inner, 2 outer
    positions = np.full(n, np.nan)
    done = 0
    blk = 0
    while done < n:
        m = min(BLOCK, n - done)
        rng = stream(seed, "overshoot", blk, str(a), str(b))
        x = np.full(m, float(x0))
        t = np.zeros(m)
        side = np.zeros(m, dtype=np.int8)
        pos = np.full(m, np.nan)
        active = np.ones(m, dtype=bool)
        while active.any():
            ax = np.abs(x)
            d = np.minimum(ax - a, b - ax)
            tau = ax * np.maximum(b - ax, 1e-12) / 2.0  # drift time to reach b
            if kappa > 0:
                tau = np.minimum(tau, d * d / kappa)
            if theta > 0:
                tau = np.minimum(tau, d ** alpha / theta)
            dt = np.clip(dt_safety * tau, 1e-9 * (b - a) ** 2, horizon)
            dt = np.minimum(dt, horizon - t)
            dt[~active] = 0.0

            # drift: |x| grows, may cross b continuously -> atom at sign(x)*b
            mask = active & (dt > 0)
            xm = np.where(mask, np.sign(x) * np.sqrt(x * x + 4.0 * dt), x)
            crossed = mask & (np.abs(xm) >= b)
            pos[crossed] = np.sign(x[crossed]) * b
            side[crossed] = 2
            active &= ~crossed
            x = np.where(active, xm, x)

            if kappa > 0:
                db = np.sqrt(kappa * dt) * rng.standard_normal(m)
                mask = active & (dt > 0)
                xb = np.where(mask, x - db, x)
                inner = mask & ((np.abs(xb) <= a) | (np.sign(xb) != np.sign(x)))
                outer = mask & ~inner & (np.abs(xb) >= b)
                pos[inner] = np.sign(x[inner]) * a
                side[inner] = 1
                pos[outer] = np.sign(x[outer]) * b
                side[outer] = 2
                active &= ~(inner | outer)
                x = np.where(active, xb, x)

            if theta > 0:
                from .drivers import standard_stable_sample

                ds = (theta * dt) ** (1.0 / alpha) * standard_stable_sample(alpha, rng, m)
                mask = active & (dt > 0)
                xs = np.where(mask, x - ds, x)
                inner = mask & (np.abs(xs) <= a)
                outer = mask & ~inner & (np.abs(xs) >= b)
                pos[inner] = xs[inner]
                side[inner] = 1
                pos[outer] = xs[outer]
                side[outer] = 2
                active &= ~(inner | outer)
                x = np.where(active, xs, x)

            t = t + dt
            active &= t < horizon * (1 - 1e-12)
        sides[done:done + m] = side
        positions[done:done + m] = pos
        done += m
        blk += 1
    return sides, positions


def overshoot_histogram(kappa: float, alpha: float, theta: float, a: float, b: float,
                        z: float, n: int, horizon: float, seed: int,
                        bins: int = 6) -> OvershootReport:
    """Empirical check of the exit-overshoot density bounds.

    The conditional density of the continuous part of the inner (resp. outer)
    exit distribution is compared bin-wise on |x| < a/3 (resp. |x| > 2b)
    against the analytic envelopes

        3 * 2^(3+4 alpha) / a      and      2^(3+4 alpha) (2b)^alpha alpha / |x|^(1+alpha)

    with three standard errors of slack.  Atom mass at +-a / +-b (continuous
    creeping) is separated out.
    """
    if n < 10_000:
        raise ConfigError("overshoot histograms need n >= 1e4")
    if not theta > 0:
        raise ConfigError("the overshoot check needs a jump component (theta > 0)")
    sides, pos = _annulus_exit_positions(kappa, alpha, theta, float(z), a, b, n, horizon, seed)
    n_inner = int((sides == 1).sum())
    n_outer = int((sides == 2).sum())
    n_cens = int((sides == 0).sum())
    if n_inner == 0 or n_outer == 0:
        raise StatisticalError("no exits observed on one side within the horizon")

    inner_pos = pos[sides == 1]
    outer_pos = pos[sides == 2]
    atom_inner = float(np.mean(np.abs(np.abs(inner_pos) - a) < 1e-12)) if n_inner else 0.0
    atom_outer = float(np.mean(np.abs(np.abs(outer_pos) - b) < 1e-12)) if n_outer else 0.0

    inner_bound = 3.0 * 2.0 ** (3.0 + 4.0 * alpha) / a

    def bin_table(samples, n_cond, edges, bound_at):
        rows = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            k = int(((samples > lo) & (samples <= hi)).sum())
            width = hi - lo
            dens = k / (n_cond * width)
            se = np.sqrt(max(k, 1)) / (n_cond * width)
            rows.append((lo, hi, dens, se, bound_at(lo, hi)))
        return np.asarray(rows)

    edges_in = np.linspace(-a / 3.0, a / 3.0, bins + 1)
    inner_bins = bin_table(inner_pos, n_inner, edges_in, lambda lo, hi: inner_bound)

    def outer_bound(lo, hi):
        xmin = min(abs(lo), abs(hi))  # envelope decreases in |x|
        return 2.0 ** (3.0 + 4.0 * alpha) * (2.0 * b) ** alpha * alpha / xmin ** (1.0 + alpha)

    half = max(2, bins // 2)
    pos_edges = np.geomspace(2.0 * b, 8.0 * b, half + 1)
    rows = []
    for side_sign in (-1.0, 1.0):
        edges = np.sort(side_sign * pos_edges)
        rows.append(bin_table(outer_pos, n_outer, edges, outer_bound))
    outer_bins = np.vstack(rows)

    ok = bool(np.all(inner_bins[:, 2] <= inner_bins[:, 4] + 3.0 * inner_bins[:, 3])
              and np.all(outer_bins[:, 2] <= outer_bins[:, 4] + 3.0 * outer_bins[:, 3]))

    return OvershootReport(
        a=a, b=b, alpha=alpha, n=n,
        inner_fraction=n_inner / n, outer_fraction=n_outer / n,
        censored_fraction=n_cens / n,
        atom_inner=atom_inner, atom_outer=atom_outer,
        inner_bins=inner_bins, outer_bins=outer_bins,
        inner_bound=inner_bound,
        total_probability=(n_inner + n_outer + n_cens) / n,
        all_below_bound=ok,
    )


# ---------------------------------------------------------------------------
# cluster area fractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AreaFractionResult:
    r_list: tuple[float, ...]
    cells_across_min_r: int
    horizon: float
    n_replicas: int
    fractions: np.ndarray     # shape (len(r_list),): replica means
    se: np.ndarray


def area_fraction(kappa: float, alpha: float, theta: float, r_list, resolution: int,
                  horizon: float, n_replicas: int, seed: int,
                  path_dt: float = 5e-3, workers: int = 1) -> AreaFractionResult:
    """Fraction of the half-disk B(0,r) covered by the cluster at time T.

    Raster-based: one shared window raster per replica at the resolution of
    the smallest radius; finite T stands proxy for the full cluster and must
    be reported alongside (trend checks, not limits).
    """
    r_list = tuple(sorted(float(r) for r in r_list))
    if not r_list or r_list[0] <= 0:
        raise ConfigError("r_list must be positive ascending")
    if resolution < 32:
        raise ConfigError("resolution too coarse: need >= 32 cells across the smallest r")
    cell = 2.0 * r_list[0] / resolution
    rmax = r_list[-1]
    nx = int(np.ceil(2.0 * rmax / cell))
    ny = int(np.ceil(rmax / cell))
    params = PhaseParams(z=1.0, kappa=kappa, alpha=alpha, theta=theta)
    spec = params.driver_spec()
    cfg = EvolutionConfig(horizon=horizon)

    def job(rep):
        path = sample_driver(spec, horizon, seed, replica=rep, dt=path_dt)
        raster = raster_cluster((-rmax, rmax, 0.0, rmax), (nx, ny), path, cfg)
        gx, gy = np.meshgrid(raster.xs, raster.ys)
        rr = np.hypot(gx, gy)
        hit = raster.cells_hit_by(horizon)
        return [float(hit[rr <= r].mean()) for r in r_list]

    if workers > 1 and n_replicas > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_rep = list(pool.map(job, range(n_replicas)))
    else:
        per_rep = [job(rep) for rep in range(n_replicas)]
    arr = np.asarray(per_rep)
    return AreaFractionResult(
        r_list=r_list, cells_across_min_r=resolution, horizon=horizon,
        n_replicas=n_replicas, fractions=arr.mean(axis=0),
        se=arr.std(axis=0, ddof=1) / np.sqrt(n_replicas) if n_replicas > 1 else np.zeros(len(r_list)),
    )


# ---------------------------------------------------------------------------
# space-time scaling identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingCheckResult:
    statistic: str
    a: float
    theta_tilde: float
    ks_distance: float
    ks_critical: float
    passed: bool
    n: int


def scaling_check(kappa: float, alpha: float, theta: float, a: float, statistic: str,
                  z: complex, horizon: float, n: int, seed: int,
                  theta_tilde: float | None = None, exit_radius: float | None = None,
                  workers: int = 1) -> ScalingCheckResult:
    """KS comparison of a summary statistic under the space-time rescaled
    evolution against the theta-rescaled driver.

    Sample A evolves z/sqrt(a) under theta to horizon T/a and rescales the
    statistic by sqrt(a) (resp. a for times); sample B evolves z under
    theta_tilde = a^(alpha/2-1) theta to horizon T.  Passing theta_tilde
    explicitly (e.g. = theta) gives the negative control.
    """
    if statistic not in ("hit_indicator", "im_h", "exit_time"):
        raise ConfigError("statistic must be hit_indicator, im_h or exit_time")
    if n < 500:
        raise ConfigError("scaling checks need n >= 500")
    if theta_tilde is None:
        theta_tilde = a ** (alpha / 2.0 - 1.0) * theta if theta > 0 else 0.0
    z = complex(z)
    sq = np.sqrt(a)
    rho = exit_radius if exit_radius is not None else 4.0 * abs(z)
    delta = 1e-4 * (1.0 + abs(z))

    spec_a = PhaseParams(z=z, kappa=kappa, alpha=alpha, theta=theta).driver_spec()
    spec_b = PhaseParams(z=z, kappa=kappa, alpha=alpha, theta=theta_tilde).driver_spec()
    res_a = run_adaptive_mc(spec_a, z / sq, n, horizon / a, master_seed=seed,
                            tag=("scale", "A", statistic), hit_tolerance=delta / sq,
                            exit_radius=rho / sq, workers=workers)
    res_b = run_adaptive_mc(spec_b, z, n, horizon, master_seed=seed,
                            tag=("scale", "B", statistic), hit_tolerance=delta,
                            exit_radius=rho, workers=workers)

    if statistic == "hit_indicator":
        sa = res_a.hit.astype(float)
        sb = res_b.hit.astype(float)
    elif statistic == "im_h":
        sa = sq * np.where(res_a.hit, 0.0, res_a.y)
        sb = np.where(res_b.hit, 0.0, res_b.y)
    else:
        sa = a * np.where(np.isnan(res_a.exit_time), horizon / a, res_a.exit_time)
        sb = np.where(np.isnan(res_b.exit_time), horizon, res_b.exit_time)

    dist, crit, passed = ks_two_sample(sa, sb)
    return ScalingCheckResult(statistic=statistic, a=a, theta_tilde=theta_tilde,
                              ks_distance=dist, ks_critical=crit, passed=passed, n=n)


# ---------------------------------------------------------------------------
# cluster disconnection frequency
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DisconnectionResult:
    t: float
    n: int
    fraction: float
    wilson: tuple[float, float]
    component_counts: np.ndarray


def disconnection_frequency(spec: DriverSpec, t: float, n: int, seed: int,
                            window=None, resolution=None, path_dt: float = 2e-3,
                            workers: int = 1) -> DisconnectionResult:
    """Fraction of replicas whose cluster raster at time t has >= 2 connected
    components (8-neighbor, no merging through the real axis)."""
    if window is None or resolution is None:
        raise ConfigError("disconnection_frequency needs an explicit window and resolution")
    cfg = EvolutionConfig(horizon=t)

    def job(rep):
        path = sample_driver(spec, t, seed, replica=rep,
                             dt=(t if spec.is_piecewise_constant else path_dt))
        raster = raster_cluster(window, resolution, path, cfg)
        return connected_components(raster, t)

    if workers > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = np.asarray(list(pool.map(job, range(n))))
    else:
        counts = np.asarray([job(rep) for rep in range(n)])
    k = int((counts >= 2).sum())
    return DisconnectionResult(t=t, n=n, fraction=k / n, wilson=wilson_ci(k, n),
                               component_counts=counts)


# ---------------------------------------------------------------------------
# critical-strength bracket
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Theta0BracketResult:
    alpha: float
    theta_grid: tuple[float, ...]
    estimates: tuple[PhaseEstimate, ...]
    theta_lo: float
    theta_hi: float
    analytic: float
    widened: bool   # non-monotone crossing encountered; bracket was widened

    @property
    def contains_analytic(self) -> bool:
        return self.theta_lo <= self.analytic <= self.theta_hi


def theta0_bracket(alpha: float, theta_grid, z: complex, n: int, horizon: float,
                   seed: int, hit_tolerance: float = 1e-5,
                   workers: int = 1) -> Theta0BracketResult:
    """Locate the theta interval where the critical evolution's hit fraction
    crosses 1/2, alongside the analytic threshold.

    beta = alpha is enforced (the self-similar coupling).  The crossing is
    treated as an interval, never a point: at the threshold itself the theory
    gives survival on the line, so the empirical crossing sits at or above
    the analytic value and tightens only logarithmically in T.
    """
    if not 1 < alpha < 2:
        raise ConfigError(f"theta0 bracket requires alpha in (1,2), got {alpha}")
    thetas = tuple(sorted(float(v) for v in theta_grid))
    if len(thetas) < 2:
        raise ConfigError("theta grid needs at least two points")
    cfg = EvolutionConfig(horizon=horizon, hit_tolerance=hit_tolerance)
    ests = []
    for i, th in enumerate(thetas):
        params = PhaseParams(z=z, kappa=0.0, alpha=alpha, theta=th, beta=alpha)
        ests.append(hitting_probability(params, n, horizon, seed, cfg=cfg,
                                        tag=("theta0", i), workers=workers))
    fr = np.asarray([e.hit_fraction for e in ests])
    above = fr >= 0.5
    if not above.any() or above.all():
        raise StatisticalError("hit fractions do not cross 1/2 on the given grid")
    first_above = int(np.argmax(above))
    last_below = int(np.max(np.where(~above)[0]))
    widened = last_below > first_above  # noisy, non-monotone crossing
    lo = thetas[max(first_above - 1, 0)]
    hi = thetas[min(last_below + 1, len(thetas) - 1)]
    return Theta0BracketResult(alpha=alpha, theta_grid=thetas, estimates=tuple(ests),
                               theta_lo=lo, theta_hi=hi, analytic=theta0(alpha),
                               widened=widened)


# ---------------------------------------------------------------------------
# composite recurrent/transient drivers
# ---------------------------------------------------------------------------

def composite_driver_phase(alpha: float, kappa: float, cutoff: float,
                           cpp_rate: float, cpp_law: JumpLaw, declared_class: str,
                           z_list, n: int, horizon: float, seed: int,
                           theta: float = 1.0, workers: int = 1) -> list[PhaseEstimate]:
    """Phase estimates for U = sqrt(kappa) B + theta^(1/alpha) S^cutoff + CPP.

    declared_class is user metadata echoed into the estimates (never
    inferred); pass z_list as a geometric sequence toward 0 to expose the
    transient driver's z -> 0 limit."""
    comps = []
    if kappa > 0:
        comps.append(Brownian(kappa))
    comps.append(TruncatedStable(alpha, theta, cutoff))
    comps.append(CompoundPoisson(cpp_rate, cpp_law, declared_class))
    spec = DriverSpec(tuple(comps))
    out = []
    for i, z in enumerate(z_list):
        z = complex(z)
        if z == 0:
            raise ConfigError("z must be nonzero")
        res = run_adaptive_mc(spec, z, n, 2.0 * horizon, master_seed=seed,
                              tag=("cor", i), workers=workers)
        hits_t = int(np.nansum((res.zeta <= horizon).astype(np.int64)))
        hits_2t = int(res.hit.sum())
        params = PhaseParams(z=z, kappa=kappa, alpha=alpha, theta=theta)
        out.append(PhaseEstimate(
            params=params, n=n, horizon=horizon, seed=seed,
            hit_fraction=hits_t / n, wilson=wilson_ci(hits_t, n),
            hit_fraction_2t=hits_2t / n, horizon_flag=_flag(hits_t / n, hits_2t / n, n),
            declared_class=declared_class,
        ))
    return out
