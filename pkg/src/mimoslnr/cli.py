"""Command-line front end.

Subcommands: ``asymptotic``, ``metrics``, ``loading``, ``sweep-cdf``,
``sweep-correlation``, ``sweep-loading``, ``selftest``. Parameters resolve
in three layers: built-in defaults, then a ``key = value`` config file
(``--config``), then explicit flags. Every run echoes the fully resolved
configuration. Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

import argparse
import math
import sys

import numpy as np

from .asymptotic import (
    FixedPointError,
    check_common_r_bound,
    gamma_uncorrelated,
    solve_fixed_point,
)
from .channel import PROFILE_KINDS, SystemConfig, build_correlation, sample_channel, trial_rng
from .experiments import (
    run_cdf_experiment,
    run_correlation_sweep,
    run_loading_sweep,
    brute_force_optimal_x,
    write_csv,
)
from .linalg import EigConvergenceError, NotPsdError, psd_sqrt
from .loading import (
    BracketError,
    dfdx,
    eta_threshold,
    lambert_w0,
    optimal_x_exact,
    optimal_x_high_snr,
    optimal_x_low_snr,
)
from .precoding import compute_metrics, slnr_instantaneous, slnr_leave_one_out

__all__ = ["main", "console_main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

_NUMERICAL_ERRORS = (FixedPointError, BracketError, NotPsdError, EigConvergenceError)

# Defaults for every resolvable key; flags and config files override these.
_DEFAULTS = {
    "n": 64,
    "k": 32,
    "snr_db": 20.0,
    "profile": "identity",
    "rho": 0.0,
    "theta": 0.0,
    "trials": 100,
    "seed": 0,
    "tol": 1e-12,
    "rate_units": "nats",
    "out": None,
    "rho_grid": "0.0:0.9:10",
    "snr_grid": "0.0:40.0:81",
    "theta_draws": 20,
}

_KEY_TYPES = {
    "n": int,
    "k": int,
    "snr_db": float,
    "profile": str,
    "rho": float,
    "theta": float,
    "trials": int,
    "seed": int,
    "tol": float,
    "rate_units": str,
    "out": str,
    "rho_grid": str,
    "snr_grid": str,
    "theta_draws": int,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; remap to the documented 1.
    def error(self, message):
        raise UsageError(message)


def _add_flags(sub):
    sub.add_argument("--config", default=None, help="key = value config file")
    sub.add_argument("--n", type=int, default=None, help="antenna count N")
    sub.add_argument("--k", type=int, default=None, help="user count K")
    sub.add_argument("--snr-db", dest="snr_db", type=float, default=None, help="SNR in dB")
    sub.add_argument("--profile", choices=PROFILE_KINDS, default=None)
    sub.add_argument("--rho", type=float, default=None, help="correlation coefficient in [0,1)")
    sub.add_argument("--theta", type=float, default=None, help="common phase in radians")
    sub.add_argument("--trials", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--out", default=None, help="output CSV path (sweep commands)")
    sub.add_argument("--tol", type=float, default=None, help="solver tolerance")
    sub.add_argument(
        "--rate-units", dest="rate_units", choices=("nats", "bits"), default=None
    )
    sub.add_argument("--rho-grid", dest="rho_grid", default=None, help="rho grid lo:hi:count")
    sub.add_argument("--snr-grid", dest="snr_grid", default=None, help="SNR grid lo:hi:count")
    sub.add_argument(
        "--theta-draws", dest="theta_draws", type=int, default=None,
        help="independent theta draws for exp-random averaging",
    )


def _build_parser():
    parser = _Parser(prog="mimoslnr", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("asymptotic", "print the deterministic per-user SLNR for a profile"),
        ("metrics", "sample one channel and print per-user SLNR/SINR"),
        ("loading", "print the optimal user loading for a given SNR"),
        ("sweep-cdf", "write SLNR/SINR CDF samples against the asymptotic value"),
        ("sweep-correlation", "write asymptotic SLNR versus rho for three theta schemes"),
        ("sweep-loading", "write optimal loading versus SNR with approximations"),
        ("selftest", "run quick oracle cross-checks; nonzero exit on failure"),
    ]:
        sub = commands.add_parser(name, help=help_text)
        _add_flags(sub)
    return parser


def _parse_config_file(path):
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in _DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value
    return values


def _coerce(key, value):
    try:
        return _KEY_TYPES[key](value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid value for {key!r}: {value!r}") from exc


def _resolve(args):
    resolved = dict(_DEFAULTS)
    if args.config:
        for key, value in _parse_config_file(args.config).items():
            resolved[key] = _coerce(key, value)
    for key in _DEFAULTS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
    _validate(resolved)
    return resolved


def _validate(resolved):
    if resolved["n"] < 1:
        raise UsageError(f"n must be >= 1, got {resolved['n']}")
    if resolved["k"] < 1:
        raise UsageError(f"k must be >= 1, got {resolved['k']}")
    if not 0.0 <= resolved["rho"] < 1.0:
        raise UsageError(f"rho must lie in [0, 1), got {resolved['rho']}")
    if resolved["trials"] < 1:
        raise UsageError(f"trials must be >= 1, got {resolved['trials']}")
    if resolved["seed"] < 0:
        raise UsageError(f"seed must be nonnegative, got {resolved['seed']}")
    if resolved["tol"] <= 0.0:
        raise UsageError(f"tol must be positive, got {resolved['tol']}")
    if resolved["profile"] not in PROFILE_KINDS:
        raise UsageError(f"profile must be one of {PROFILE_KINDS}, got {resolved['profile']}")
    if resolved["rate_units"] not in ("nats", "bits"):
        raise UsageError(f"rate_units must be nats or bits, got {resolved['rate_units']}")
    if resolved["theta_draws"] < 1:
        raise UsageError(f"theta_draws must be >= 1, got {resolved['theta_draws']}")


def _parse_grid(text, key):
    try:
        lo_s, hi_s, count_s = text.split(":")
        lo, hi, count = float(lo_s), float(hi_s), int(count_s)
    except ValueError as exc:
        raise UsageError(f"invalid value for {key!r}: {text!r} (expected lo:hi:count)") from exc
    if count < 1:
        raise UsageError(f"invalid value for {key!r}: count must be >= 1")
    return np.linspace(lo, hi, count)


def _echo(resolved):
    print("# resolved configuration")
    for key in sorted(resolved):
        value = resolved[key]
        if value is None:
            continue
        print(f"# {key} = {value}")


def _system_config(resolved):
    try:
        return SystemConfig.make(
            N=resolved["n"],
            K=resolved["k"],
            snr_db=resolved["snr_db"],
            kind=resolved["profile"],
            rho=resolved["rho"],
            theta=resolved["theta"],
            trials=resolved["trials"],
            seed=resolved["seed"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _rate(value, units):
    return value if units == "nats" else value / math.log(2.0)


def _cmd_asymptotic(resolved):
    config = _system_config(resolved)
    rng = trial_rng(config.seed, 0)
    R = [build_correlation(config.profile, k, rng) for k in range(config.K)]
    solution = solve_fixed_point(R, config.eta, tol=resolved["tol"])
    print(f"# converged in {solution.iterations} iterations, residual {solution.residual:.3e}")
    print("user,gamma")
    for k, g in enumerate(solution.gamma):
        print(f"{k},{g:.6f}")
    return EXIT_OK


def _cmd_metrics(resolved):
    config = _system_config(resolved)
    realization = sample_channel(config, 0)
    metrics = compute_metrics(realization.H, config.eta)
    print("user,slnr,sinr,power_sq")
    for k in range(config.K):
        print(f"{k},{metrics.slnr[k]:.6f},{metrics.sinr[k]:.6f},{metrics.power_sq[k]:.6f}")
    return EXIT_OK


def _cmd_loading(resolved):
    eta = 10.0 ** (-resolved["snr_db"] / 10.0)
    units = resolved["rate_units"]
    solution = optimal_x_exact(eta, tol=min(resolved["tol"], 1e-10))
    eta_o = eta_threshold()
    print(f"snr_db = {resolved['snr_db']}")
    print(f"eta = {eta!r}")
    print(f"x_star = {solution.x_star:.6f}")
    print(f"alpha_star = {solution.alpha_star:.6f}")
    print(f"method = {solution.method}")
    print(f"objective_{units} = {_rate(solution.objective, units):.6f}")
    if eta < eta_o:
        print(f"x_low_snr_approx = {optimal_x_low_snr(eta):.6f}")
        print(f"x_high_snr_approx = {optimal_x_high_snr(eta):.6f}")
    else:
        print("x_low_snr_approx = n/a (eta above threshold)")
        print("x_high_snr_approx = n/a (eta above threshold)")
    return EXIT_OK


def _require_out(resolved):
    if not resolved["out"]:
        raise UsageError("missing required key 'out' (CSV output path)")
    return resolved["out"]


def _merge_resolved(result, resolved):
    # Every CSV carries the full resolved configuration; experiment-specific
    # entries written by the runner take precedence over the echo.
    for key in sorted(resolved):
        if key in ("out",) or resolved[key] is None:
            continue
        result.metadata.setdefault(key, resolved[key])
    return result


def _cmd_sweep_cdf(resolved):
    out = _require_out(resolved)
    config = _system_config(resolved)
    result = run_cdf_experiment(config)
    write_csv(_merge_resolved(result, resolved), out)
    print(f"# wrote {out} ({len(result.columns['cdf_level'])} rows)")
    return EXIT_OK


def _cmd_sweep_correlation(resolved):
    out = _require_out(resolved)
    rho_grid = _parse_grid(resolved["rho_grid"], "rho_grid")
    if np.any(rho_grid < 0.0) or np.any(rho_grid >= 1.0):
        raise UsageError("rho_grid values must lie in [0, 1)")
    alpha = resolved["k"] / resolved["n"]
    result = run_correlation_sweep(
        N=resolved["n"],
        alpha=alpha,
        snr_db=resolved["snr_db"],
        rho_grid=rho_grid,
        trials_for_random_theta=resolved["theta_draws"],
        seed=resolved["seed"],
        tol=resolved["tol"],
    )
    write_csv(_merge_resolved(result, resolved), out)
    print(f"# wrote {out} ({rho_grid.size} rows)")
    return EXIT_OK


def _cmd_sweep_loading(resolved):
    out = _require_out(resolved)
    snr_grid = _parse_grid(resolved["snr_grid"], "snr_grid")
    result = run_loading_sweep(snr_grid)
    write_csv(_merge_resolved(result, resolved), out)
    print(f"# wrote {out} ({snr_grid.size} rows)")
    return EXIT_OK


def _selftest_checks():
    rng = np.random.default_rng(20260810)

    def closed_form_vs_fixed_point():
        for x, snr_db in [(1.0, 0.0), (2.0, 10.0), (4.0, 25.0)]:
            eta = 10.0 ** (-snr_db / 10.0)
            K = 8
            N = int(x * K)
            R = [np.eye(N, dtype=complex)] * K
            gamma = solve_fixed_point(R, eta).gamma
            ref = gamma_uncorrelated(x, eta)
            assert np.max(np.abs(gamma - ref)) <= 1e-10 * ref

    def threshold_residual():
        eta_o = eta_threshold()
        assert abs(dfdx(1.0, eta_o)) < 1e-12

    def lambert_residuals():
        for z in [0.0, 0.5, 1.0, math.e, 50.0, -0.25, -1.0 / math.e + 1e-9]:
            w = lambert_w0(z)
            assert abs(w * math.exp(w) - z) <= 1e-12 * max(1.0, abs(z))

    def psd_sqrt_roundtrip():
        A = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
        R = A @ A.conj().T
        S = psd_sqrt(R)
        assert np.linalg.norm(S @ S - R) <= 1e-9 * np.linalg.norm(R)

    def slnr_route_equivalence():
        H = (rng.standard_normal((16, 8)) + 1j * rng.standard_normal((16, 8))) / np.sqrt(2)
        fast = slnr_instantaneous(H, 0.01)
        slow = slnr_leave_one_out(H, 0.01)
        assert np.max(np.abs(fast - slow) / slow) <= 1e-8

    def even_theta_sum_identity():
        from .channel import CorrelationProfile, sum_correlations

        profile = CorrelationProfile(kind="exp-even", N=8, K=8, rho=0.5)
        total = sum_correlations([build_correlation(profile, k) for k in range(8)])
        assert np.max(np.abs(total - 8.0 * np.eye(8))) <= 1e-9

    def exact_vs_brute_force():
        for eta in [0.01, 0.05, 0.2]:
            x_exact = optimal_x_exact(eta).x_star
            x_brute = brute_force_optimal_x(eta)
            assert abs(x_exact - x_brute) <= 1e-3

    def common_r_bound():
        for _ in range(50):
            lam = rng.dirichlet(np.ones(16)) * 16
            check = check_common_r_bound(lam, K=8, eta=0.05)
            assert check.holds

    return [
        ("closed-form vs fixed point", closed_form_vs_fixed_point),
        ("threshold derivative residual", threshold_residual),
        ("lambert-w residuals", lambert_residuals),
        ("psd sqrt roundtrip", psd_sqrt_roundtrip),
        ("slnr route equivalence", slnr_route_equivalence),
        ("even-theta sum identity", even_theta_sum_identity),
        ("exact vs brute force", exact_vs_brute_force),
        ("common-R upper bound", common_r_bound),
    ]


def _cmd_selftest(resolved):
    failures = 0
    for name, check in _selftest_checks():
        try:
            check()
        except Exception as exc:  # report every failing check, keep going
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"ok   {name}")
    if failures:
        print(f"selftest: {failures} check(s) failed")
        return EXIT_NUMERICAL
    print("selftest: all checks passed")
    return EXIT_OK


_COMMANDS = {
    "asymptotic": _cmd_asymptotic,
    "metrics": _cmd_metrics,
    "loading": _cmd_loading,
    "sweep-cdf": _cmd_sweep_cdf,
    "sweep-correlation": _cmd_sweep_correlation,
    "sweep-loading": _cmd_sweep_loading,
    "selftest": _cmd_selftest,
}


def main(argv=None):
    """Entry point; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        resolved = _resolve(args)
        _echo(resolved)
        return _COMMANDS[args.command](resolved)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
