"""Antenna-correlation profiles and correlated Rayleigh channel sampling.

A user's channel column is ``h_k = R_k^(1/2) h_w`` with ``h_w`` drawn i.i.d.
circular complex Gaussian, unit variance per entry. Correlation matrices
follow the exponential model for a uniform linear array,

    R_k[m, n] = rho^|m-n| * exp(1j * (m - n) * theta_k),

which is Hermitian with a unit diagonal, so ``trace(R_k) == N`` holds by
construction for every profile kind.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import hermitian_part, psd_sqrt

__all__ = [
    "PROFILE_KINDS",
    "CorrelationProfile",
    "SystemConfig",
    "ChannelRealization",
    "build_correlation",
    "sum_correlations",
    "sample_channel",
    "trial_rng",
]

# theta assignment schemes for the exponential model:
#   exp-even    theta_k = 2*pi*k/K
#   exp-random  theta_k uniform on [0, 2*pi), drawn from the caller's rng
#   exp-common  one fixed theta shared by every user
PROFILE_KINDS = ("identity", "exp-even", "exp-random", "exp-common")


@dataclass(frozen=True)
class CorrelationProfile:
    """Per-user correlation-matrix generator parameters."""

    kind: str
    N: int
    K: int
    rho: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"profile kind must be one of {PROFILE_KINDS}, got {self.kind!r}")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho!r}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")


@dataclass(frozen=True)
class SystemConfig:
    """One experiment's worth of system parameters.

    ``snr_db`` fixes the inverse SNR ``eta = 10**(-snr_db/10)``; the total
    transmit power is normalized to 1 so ``eta`` equals the noise power.
    """

    N: int
    K: int
    snr_db: float
    profile: CorrelationProfile
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.N < 1 or self.K < 1:
            raise ValueError(f"N and K must be >= 1, got N={self.N}, K={self.K}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed}")
        if (self.profile.N, self.profile.K) != (self.N, self.K):
            raise ValueError(
                f"profile dimensions ({self.profile.N}, {self.profile.K}) do not match "
                f"config dimensions ({self.N}, {self.K})"
            )

    @property
    def eta(self):
        """Inverse SNR (noise power over transmit power)."""
        return 10.0 ** (-self.snr_db / 10.0)

    @classmethod
    def make(cls, N, K, snr_db, kind="identity", rho=0.0, theta=0.0, trials=1, seed=0):
        """Build a config and its matching profile in one call."""
        profile = CorrelationProfile(kind=kind, N=N, K=K, rho=rho, theta=theta)
        return cls(N=N, K=K, snr_db=snr_db, profile=profile, trials=trials, seed=seed)


@dataclass
class ChannelRealization:
    """One sampled channel: columns of ``H`` are the per-user vectors."""

    H: np.ndarray
    R: list = field(repr=False)
    Rsqrt: list = field(repr=False)
    seed_used: int = 0
    trial: int = 0


def build_correlation(profile, k, rng=None):
    """Correlation matrix for user ``k`` under the given profile.

    ``rng`` is consulted only by the ``exp-random`` kind, which draws the
    user's phase uniformly from ``[0, 2*pi)``.
    """
    if not 0 <= k < profile.K:
        raise ValueError(f"user index {k} out of range for K={profile.K}")
    N = profile.N
    if profile.kind == "identity" or profile.rho == 0.0:
        return np.eye(N, dtype=complex)
    if profile.kind == "exp-even":
        theta = 2.0 * np.pi * k / profile.K
    elif profile.kind == "exp-common":
        theta = profile.theta
    else:  # exp-random
        if rng is None:
            raise ValueError("exp-random profile needs an rng to draw theta")
        theta = rng.uniform(0.0, 2.0 * np.pi)
    d = np.subtract.outer(np.arange(N), np.arange(N))
    R = profile.rho ** np.abs(d) * np.exp(1j * d * theta)
    return hermitian_part(R)


def sum_correlations(mats):
    """Entrywise sum of same-sized correlation matrices."""
    mats = [np.asarray(M, dtype=complex) for M in mats]
    if not mats:
        raise ValueError("need at least one matrix to sum")
    shape = mats[0].shape
    for i, M in enumerate(mats):
        if M.shape != shape:
            raise ValueError(f"matrix {i} has shape {M.shape}, expected {shape}")
    return np.sum(mats, axis=0)


def trial_rng(seed, trial):
    """Independent random stream for one trial.

    The stream is a pure function of ``(seed, trial)`` (numpy's SeedSequence
    mixes both through its hash), so trials can run in any order or in
    parallel and still reproduce bit-identically.
    """
    return np.random.default_rng(np.random.SeedSequence((int(seed), int(trial))))


def sample_channel(config, trial):
    """Draw the channel realization for one trial of ``config``.

    Deterministic for fixed ``(config.seed, trial)``. For the ``exp-random``
    profile the per-user phases are drawn first (so the correlation matrices
    belong to this realization), then the white channel matrix.
    """
    if not 0 <= trial < config.trials:
        raise ValueError(f"trial {trial} out of range for trials={config.trials}")
    N, K = config.N, config.K
    rng = trial_rng(config.seed, trial)
    profile = config.profile

    if profile.kind == "identity" or profile.rho == 0.0:
        eye = np.eye(N, dtype=complex)
        R = [eye] * K
        Rsqrt = R
    elif profile.kind == "exp-common":
        R0 = build_correlation(profile, 0)
        R = [R0] * K
        Rsqrt = [psd_sqrt(R0)] * K
    else:
        R = [build_correlation(profile, k, rng) for k in range(K)]
        Rsqrt = [psd_sqrt(Rk) for Rk in R]

    # CN(0, 1) entries: independent real/imaginary parts of variance 1/2.
    Hw = (rng.standard_normal((N, K)) + 1j * rng.standard_normal((N, K))) / np.sqrt(2.0)
    if profile.kind == "identity" or profile.rho == 0.0:
        H = Hw
    else:
        H = np.column_stack([Rsqrt[k] @ Hw[:, k] for k in range(K)])
    return ChannelRealization(H=H, R=R, Rsqrt=Rsqrt, seed_used=config.seed, trial=trial)
