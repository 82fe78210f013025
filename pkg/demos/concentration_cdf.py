"""How fast do instantaneous SLNR and SINR harden around their limit?

Samples correlated-free (identity profile) channels at a fixed loading
K/N = 1/2 and SNR = 20 dB, then pools the per-user SLNR and SINR over all
trials. As the array grows from 16 to 256 antennas both empirical
distributions visibly tighten around the deterministic value, and the SINR
does so despite being defined through received interference rather than
leakage. Writes one CSV of CDF samples per array size (pipe into any
plotting tool: x = slnr/sinr columns, y = cdf_level).
"""

import os

import numpy as np

from mimoslnr import SystemConfig, gamma_uncorrelated, run_cdf_experiment, write_csv

OUT_DIR = os.environ.get("MIMOSLNR_DEMO_OUT", "demo_output")
SNR_DB = 20.0
ALPHA = 0.5
TRIALS = 100
SEED = 2026

os.makedirs(OUT_DIR, exist_ok=True)

gamma = gamma_uncorrelated(1.0 / ALPHA, 10.0 ** (-SNR_DB / 10.0))
print(f"deterministic SLNR at x = {1/ALPHA:g}, SNR = {SNR_DB:g} dB: gamma = {gamma:.4f}")
print(f"{'N':>5} {'K':>5} {'slnr q25':>10} {'median':>10} {'q75':>10} {'IQR':>8} {'sinr med':>10}")

for N in (16, 64, 256):
    K = int(ALPHA * N)
    config = SystemConfig.make(N=N, K=K, snr_db=SNR_DB, trials=TRIALS, seed=SEED)
    result = run_cdf_experiment(config)
    slnr = result.columns["slnr"]
    sinr = result.columns["sinr"]
    q25, q50, q75 = np.percentile(slnr, [25, 50, 75])
    print(f"{N:>5} {K:>5} {q25:>10.3f} {q50:>10.3f} {q75:>10.3f} {q75 - q25:>8.3f} "
          f"{np.median(sinr):>10.3f}")
    path = os.path.join(OUT_DIR, f"cdf_n{N}.csv")
    write_csv(result, path)
    print(f"      wrote {path} ({result.wall_seconds:.1f}s)")

print("\nBoth CDFs pinch toward gamma as N grows; the interquartile range")
print("shrinks roughly with 1/sqrt(N) while the median stays on the limit.")
