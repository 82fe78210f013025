"""Experiment harness: concentration CDFs, correlation sweeps, loading sweeps.

Each runner returns an :class:`ExperimentResult` whose metadata echoes the
full configuration, so a result (or the CSV written from it) can be
re-produced bit-identically. CSV output is deterministic: float columns are
rendered with shortest round-trip ``repr`` and the metadata comments never
include wall-clock information.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .asymptotic import gamma_common_r, gamma_uncorrelated, solve_fixed_point
from .channel import CorrelationProfile, build_correlation, sample_channel, trial_rng
from .linalg import herm_eig
from .loading import eta_threshold, objective_f, optimal_x_exact, optimal_x_high_snr, optimal_x_low_snr
from .precoding import compute_metrics

__all__ = [
    "ExperimentResult",
    "DEFAULT_CDF_N",
    "DEFAULT_CDF_ALPHAS",
    "empirical_cdf",
    "run_cdf_experiment",
    "run_correlation_sweep",
    "run_loading_sweep",
    "brute_force_optimal_x",
    "write_csv",
]

# Antenna counts and loading fractions used by the demo CDF study; the
# runner itself takes whatever single (N, K) the config specifies.
DEFAULT_CDF_N = (16, 64, 256)
DEFAULT_CDF_ALPHAS = (0.25, 0.5, 0.75)


@dataclass
class ExperimentResult:
    """Named columns plus the metadata needed to reproduce them."""

    name: str
    columns: dict
    metadata: dict = field(default_factory=dict)
    wall_seconds: float = 0.0

    def __post_init__(self):
        lengths = {key: len(col) for key, col in self.columns.items()}
        if len(set(lengths.values())) > 1:
            raise ValueError(f"columns must have equal length, got {lengths}")


def empirical_cdf(samples):
    """Sorted sample values with plotting positions ``i/(n+1)``.

    The positions stay strictly inside (0, 1), avoiding degenerate endpoint
    levels.
    """
    values = np.sort(np.asarray(samples, dtype=float))
    n = values.size
    if n == 0:
        raise ValueError("need at least one sample")
    levels = np.arange(1, n + 1) / (n + 1.0)
    return values, levels


def run_cdf_experiment(config):
    """Pool instantaneous SLNR/SINR over users and trials against the limit.

    Requires the identity profile (the deterministic reference is the
    uncorrelated closed form). Emits both empirical CDFs on a shared level
    grid plus the asymptotic value as a constant series; as N grows at fixed
    K/N, both CDFs tighten around that constant.
    """
    if config.profile.kind != "identity":
        raise ValueError("CDF experiment is defined for the identity profile")
    start = time.perf_counter()
    eta = config.eta
    gamma = gamma_uncorrelated(config.N / config.K, eta)
    slnr_pool = []
    sinr_pool = []
    for trial in range(config.trials):
        realization = sample_channel(config, trial)
        metrics = compute_metrics(realization.H, eta)
        slnr_pool.append(metrics.slnr)
        sinr_pool.append(metrics.sinr)
    slnr_sorted, levels = empirical_cdf(np.concatenate(slnr_pool))
    sinr_sorted, _ = empirical_cdf(np.concatenate(sinr_pool))
    columns = {
        "cdf_level": levels,
        "slnr": slnr_sorted,
        "sinr": sinr_sorted,
        "gamma_asymptotic": np.full(levels.size, gamma),
    }
    metadata = _config_metadata(config)
    return ExperimentResult(
        name="cdf",
        columns=columns,
        metadata=metadata,
        wall_seconds=time.perf_counter() - start,
    )


def run_correlation_sweep(
    N, alpha, snr_db, rho_grid, trials_for_random_theta=20, seed=0, tol=1e-12
):
    """Asymptotic SLNR versus correlation coefficient for three phase schemes.

    For each ``rho``: the evenly spaced phases (full fixed-point solve), the
    random phases (per-user gammas averaged over users; additionally
    averaged over ``trials_for_random_theta`` independent phase draws, with
    the single-draw average reported in its own column), and the common
    phase (scalar fixed point over the shared eigenvalues, which do not
    depend on the phase itself). The uncorrelated value rides along as the
    reference line.
    """
    start = time.perf_counter()
    K = int(round(alpha * N))
    eta = 10.0 ** (-snr_db / 10.0)
    rho_grid = np.asarray(rho_grid, dtype=float)
    ref = gamma_uncorrelated(N / K, eta)

    even_col = np.empty(rho_grid.size)
    random_avg_col = np.empty(rho_grid.size)
    random_single_col = np.empty(rho_grid.size)
    common_col = np.empty(rho_grid.size)

    for i, rho in enumerate(rho_grid):
        even_profile = CorrelationProfile(kind="exp-even", N=N, K=K, rho=rho)
        R_even = [build_correlation(even_profile, k) for k in range(K)]
        even_col[i] = float(np.mean(solve_fixed_point(R_even, eta, tol=tol).gamma))

        random_profile = CorrelationProfile(kind="exp-random", N=N, K=K, rho=rho)
        draw_means = np.empty(trials_for_random_theta)
        for draw in range(trials_for_random_theta):
            rng = trial_rng(seed, draw)
            R_rand = [build_correlation(random_profile, k, rng) for k in range(K)]
            draw_means[draw] = float(np.mean(solve_fixed_point(R_rand, eta, tol=tol).gamma))
        random_avg_col[i] = float(np.mean(draw_means))
        random_single_col[i] = draw_means[0]

        common_profile = CorrelationProfile(kind="exp-common", N=N, K=K, rho=rho, theta=0.0)
        lam = herm_eig(build_correlation(common_profile, 0)).eigenvalues
        common_col[i] = gamma_common_r(lam, K, eta, tol=tol)

    columns = {
        "rho": rho_grid.copy(),
        "gamma_exp_even": even_col,
        "gamma_exp_random_avg": random_avg_col,
        "gamma_exp_random_single_draw": random_single_col,
        "gamma_exp_common": common_col,
        "gamma_uncorrelated": np.full(rho_grid.size, ref),
    }
    metadata = {
        "n": N,
        "k": K,
        "alpha": alpha,
        "snr_db": snr_db,
        "theta_draws": trials_for_random_theta,
        "seed": seed,
        "tol": tol,
    }
    return ExperimentResult(
        name="correlation",
        columns=columns,
        metadata=metadata,
        wall_seconds=time.perf_counter() - start,
    )


def brute_force_optimal_x(eta, lo=1.0, hi=1.5, step=1e-4):
    """Grid-search maximizer of the per-antenna rate; the independent oracle.

    Exhaustively evaluates the objective on ``[lo, hi]`` at the given step
    and returns the best grid point, with no derivative information.
    """
    grid = lo + step * np.arange(int(round((hi - lo) / step)) + 1)
    values = objective_f(grid, eta)
    return float(grid[int(np.argmax(values))])


def run_loading_sweep(snr_db_grid, tol=1e-10, brute_step=1e-4):
    """Optimal loading fraction versus SNR, with oracle and approximations.

    Emits the exact optimizer, the brute-force grid search, and both
    closed-form approximations (each only below the threshold ``eta_o``,
    NaN elsewhere). The ``clamped`` column flags SNR points where the
    optimum sits at the ``x = 1`` boundary.
    """
    start = time.perf_counter()
    snr_db_grid = np.asarray(snr_db_grid, dtype=float)
    eta_o = eta_threshold()

    etas = 10.0 ** (-snr_db_grid / 10.0)
    x_exact = np.empty(snr_db_grid.size)
    clamped = np.empty(snr_db_grid.size)
    alpha_brute = np.empty(snr_db_grid.size)
    alpha_low = np.full(snr_db_grid.size, np.nan)
    alpha_high = np.full(snr_db_grid.size, np.nan)

    for i, eta in enumerate(etas):
        sol = optimal_x_exact(eta, tol=tol)
        x_exact[i] = sol.x_star
        clamped[i] = 1.0 if sol.method == "clamped-at-one" else 0.0
        alpha_brute[i] = 1.0 / brute_force_optimal_x(eta, step=brute_step)
        if eta < eta_o:
            alpha_low[i] = 1.0 / optimal_x_low_snr(eta)
            alpha_high[i] = 1.0 / optimal_x_high_snr(eta)

    columns = {
        "snr_db": snr_db_grid.copy(),
        "eta": etas,
        "alpha_exact": 1.0 / x_exact,
        "alpha_brute_force": alpha_brute,
        "alpha_low_snr_approx": alpha_low,
        "alpha_high_snr_approx": alpha_high,
        "x_exact": x_exact,
        "clamped": clamped,
    }
    metadata = {
        "snr_db_min": float(snr_db_grid.min()),
        "snr_db_max": float(snr_db_grid.max()),
        "points": int(snr_db_grid.size),
        "tol": tol,
        "brute_step": brute_step,
    }
    return ExperimentResult(
        name="loading",
        columns=columns,
        metadata=metadata,
        wall_seconds=time.perf_counter() - start,
    )


def _config_metadata(config):
    return {
        "n": config.N,
        "k": config.K,
        "snr_db": config.snr_db,
        "profile": config.profile.kind,
        "rho": config.profile.rho,
        "theta": config.profile.theta,
        "trials": config.trials,
        "seed": config.seed,
    }


def _format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(result, path):
    """Write an :class:`ExperimentResult` as CSV.

    Layout: ``#``-prefixed metadata comment lines (experiment name, package
    version, then the config echo in insertion order), one header row, one
    data row per sample. Identical results produce byte-identical files.
    """
    names = list(result.columns)
    cols = [np.asarray(result.columns[name]) for name in names]
    lines = [f"# experiment = {result.name}", f"# version = {__version__}"]
    for key, value in result.metadata.items():
        lines.append(f"# {key} = {_format_value(value)}")
    lines.append(",".join(names))
    for row in zip(*cols):
        lines.append(",".join(_format_value(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
