"""Regularized zero-forcing precoding and per-user SLNR/SINR metrics.

The precoder is ``F = (H H* + beta I)^{-1} H`` with per-user powers chosen
so every user gets an equal share of the total transmit power. With the
regularization fixed at ``beta = K * eta`` (transmit power normalized to 1)
the per-user SLNR collapses to the quadratic form

    SLNR_k = q_k / (1 - q_k),     q_k = h_k* (H H* + K eta I)^{-1} h_k,

which this module uses as the default O(N^3 + K N^2) route. The direct
leave-one-out evaluation is kept alongside as an independent oracle.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import shifted_gram_solve

__all__ = [
    "PrecodedSystem",
    "MetricsPerUser",
    "DegenerateUserError",
    "default_beta",
    "rzf_precode",
    "power_control",
    "slnr_instantaneous",
    "slnr_leave_one_out",
    "slnr_ratio",
    "sinr_instantaneous",
    "build_precoded_system",
    "compute_metrics",
]

# q_k < 1 analytically but can round to 1; keep the ratio finite.
_Q_CLAMP = 1.0 - 1e-12


class DegenerateUserError(ValueError):
    """A user's precoding column has zero norm (only possible for h_k = 0)."""


@dataclass
class PrecodedSystem:
    """Precoder, power scalars, and the parameters they were built from."""

    F: np.ndarray
    p: np.ndarray
    beta: float
    eta: float
    ptx: float = 1.0


@dataclass
class MetricsPerUser:
    """Per-user instantaneous metrics for one channel realization."""

    slnr: np.ndarray
    sinr: np.ndarray
    power_sq: np.ndarray


def default_beta(K, eta):
    """Regularization that balances interference suppression against noise."""
    return K * eta


def rzf_precode(H, beta):
    """Columns ``f_k = (H H* + beta I)^{-1} h_k`` for every user."""
    return shifted_gram_solve(H, beta, H)


def power_control(H, F, ptx=1.0):
    """Equal per-user power split: ``p_k = sqrt(ptx / (K ||f_k||^2))``.

    Guarantees ``sum_k p_k^2 ||f_k||^2 == ptx`` with each user contributing
    ``ptx / K``.
    """
    H = np.asarray(H, dtype=complex)
    F = np.asarray(F, dtype=complex)
    if H.shape != F.shape:
        raise ValueError(f"F has shape {F.shape}, expected {H.shape} to match H")
    if ptx <= 0:
        raise ValueError(f"ptx must be positive, got {ptx!r}")
    K = F.shape[1]
    norms_sq = np.sum(np.abs(F) ** 2, axis=0)
    if np.any(norms_sq == 0.0):
        bad = int(np.flatnonzero(norms_sq == 0.0)[0])
        raise DegenerateUserError(f"user {bad} has a zero precoding column")
    return np.sqrt(ptx / (K * norms_sq))


def slnr_instantaneous(H, eta):
    """Per-user SLNR of the RZF precoder at regularization ``K * eta``.

    Evaluates the leave-one-out quadratic form through the shared-Gram
    identity ``SLNR_k = q_k / (1 - q_k)``: one factorization of
    ``H H* + K eta I`` serves all K users.
    """
    H = np.asarray(H, dtype=complex)
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta!r}")
    K = H.shape[1]
    X = shifted_gram_solve(H, K * eta, H)
    q = np.sum(H.conj() * X, axis=0).real
    q = np.clip(q, 0.0, _Q_CLAMP)
    return q / (1.0 - q)


def slnr_leave_one_out(H, eta):
    """SLNR by K explicit leave-one-out solves; the slow oracle route.

    Computes ``h_k* (sum_{i != k} h_i h_i* + K eta I)^{-1} h_k`` directly
    for every user.
    """
    H = np.asarray(H, dtype=complex)
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta!r}")
    K = H.shape[1]
    out = np.empty(K)
    for k in range(K):
        Hk = np.delete(H, k, axis=1)
        hk = H[:, k]
        x = shifted_gram_solve(Hk, K * eta, hk)
        out[k] = np.vdot(hk, x).real
    return out


def _cross_gram(H, F):
    """G[k, i] = h_k* f_i."""
    return H.conj().T @ F


def slnr_ratio(H, F, p, eta, ptx=1.0):
    """Per-user SLNR as a plain leakage ratio for any precoder.

    ``|h_k* f_k p_k|^2 / (sum_{i != k} |h_i* f_k p_k|^2 + sigma^2)`` with
    ``sigma^2 = eta * ptx``; the leakage runs over user k's own beam.
    """
    G = _cross_gram(np.asarray(H, dtype=complex), np.asarray(F, dtype=complex))
    p = np.asarray(p, dtype=float)
    sigma_sq = eta * ptx
    sig = np.abs(np.diag(G)) ** 2 * p**2
    # Column k of |G|^2 holds |h_i* f_k|^2 over all i; drop the i = k term.
    leak_cols = np.sum(np.abs(G) ** 2, axis=0) - np.abs(np.diag(G)) ** 2
    return sig / (p**2 * leak_cols + sigma_sq)


def sinr_instantaneous(H, F, p, eta, ptx=1.0):
    """Per-user SINR: interference received from the other users' beams.

    ``|h_k* f_k p_k|^2 / (sum_{i != k} |h_k* f_i p_i|^2 + sigma^2)``. Note
    the index order ``h_k* f_i``, transposed relative to the SLNR leakage.
    """
    G = _cross_gram(np.asarray(H, dtype=complex), np.asarray(F, dtype=complex))
    p = np.asarray(p, dtype=float)
    sigma_sq = eta * ptx
    sig = np.abs(np.diag(G)) ** 2 * p**2
    # Row k of |G p|^2 holds |h_k* f_i p_i|^2 over all i; drop the i = k term.
    weighted = np.abs(G) ** 2 * p**2
    interference = np.sum(weighted, axis=1) - np.diag(weighted)
    return sig / (interference + sigma_sq)


def build_precoded_system(H, eta, ptx=1.0, beta=None):
    """RZF precoder plus equal-share power control for one realization."""
    H = np.asarray(H, dtype=complex)
    if beta is None:
        beta = default_beta(H.shape[1], eta)
    F = rzf_precode(H, beta)
    p = power_control(H, F, ptx)
    return PrecodedSystem(F=F, p=p, beta=float(beta), eta=float(eta), ptx=float(ptx))


def compute_metrics(H, eta, ptx=1.0):
    """SLNR, SINR, and squared power scalars for one channel realization."""
    sys = build_precoded_system(H, eta, ptx)
    slnr = slnr_instantaneous(H, eta)
    sinr = sinr_instantaneous(H, sys.F, sys.p, eta, ptx)
    return MetricsPerUser(slnr=slnr, sinr=sinr, power_sq=sys.p**2)
