#!/usr/bin/env python3
"""Desk-scale Monte Carlo sweeps: the four headline curves as CSV files.

Runs reduced-trial versions of the four standard sweeps (rate vs SNR,
feedback bits, pilot length, block length) and writes one CSV each to
demos/out/. At 1000 trials per point these reproduce the full evaluation;
pass --full to run at that scale (several minutes).

The CSVs feed the figure renderer in frontend/ :
  node frontend/dist/render.js render --csv demos/out/rate_vs_snr_db.csv \
      --x snr_db --out rate_vs_snr.svg
"""

import os
import sys
import time

from sensecs import TrialConfig, run_sweep

trials = 1000 if "--full" in sys.argv else 60
workers = min(2, os.cpu_count() or 1)
base = TrialConfig(seed=2024)

sweeps = [
    ("snr_db", [0.0, 5.0, 10.0, 15.0, 20.0]),
    ("feedback_bits", [2, 4, 6, 8, 10, 12, 14, 16]),
    ("pilot_len", [4, 8, 16, 32, 64, 100, 150]),
    ("block_len", [50, 100, 200, 400, 800, 1600]),
]

os.makedirs("demos/out", exist_ok=True)
for variable, values in sweeps:
    start = time.perf_counter()
    result = run_sweep(base, variable, values, trials=trials, workers=workers, keep_samples=False)
    path = f"demos/out/rate_vs_{variable}.csv"
    result.write_csv(path)
    elapsed = time.perf_counter() - start
    print(f"{variable}: {len(values)} points x {trials} trials in {elapsed:.0f}s -> {path}")
    for i, value in enumerate(result.values):
        row = "  ".join(
            f"{scheme.split('_')[0][:4]}{scheme.split('_')[1][:4]}={result.means[i, j]:.3f}"
            for j, scheme in enumerate(
                ("proposed_finite", "proposed_perfect", "benchmark_finite", "benchmark_perfect", "upper_bound")
            )
        )
        print(f"  {variable}={value:g}: {row}")
