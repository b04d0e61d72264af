"""Throughput of the compiled and numpy Monte Carlo kernels.

    python benchmarks/bench_mc_kernel.py [--trials N] [--repeat K]

Both backends draw the same counter-based random stream, so the failure
counts printed for each configuration must agree exactly.
"""
import argparse
import time

from cvftsim import kernels, montecarlo
from cvftsim.ftcode import optimize_R
from cvftsim.gkp import NoiseKind, NoiseModel, noise_variances

CASES = [(1, 13.0, "independent"), (11, 13.0, "independent"), (101, 16.0, "independent"), (11, 13.0, "joint")]


def bench(cfg, backend, repeat):
    best, est = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        est = montecarlo.estimate_pe(cfg, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, est


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = [b for b in ("compiled", "python") if b in kernels.BACKENDS]
    if "compiled" not in backends:
        print("compiled kernel not built; only the numpy backend is timed")
    print(f"{'n':>4} {'dB':>5} {'mode':>12} {'backend':>9} {'s':>8} {'Mqubit/s':>9} {'failures':>9}")
    for n, db, mode in CASES:
        noise = noise_variances(NoiseModel.from_db(NoiseKind.GATE_NOISE, db))
        R = 1.0 if n == 1 else optimize_R(n, NoiseKind.GATE_NOISE, db).R
        cfg = montecarlo.TrialConfig(n, R, noise.sigma_x, noise.sigma_p, args.trials, seed=1, mode=mode)
        counts = set()
        for backend in backends:
            dt, est = bench(cfg, backend, args.repeat)
            counts.add(est.failures)
            rate = args.trials * n / dt / 1e6
            print(f"{n:>4} {db:>5.1f} {mode:>12} {backend:>9} {dt:>8.3f} {rate:>9.2f} {est.failures:>9}")
        if len(counts) > 1:
            raise SystemExit(f"backend mismatch for n={n}: {sorted(counts)}")


if __name__ == "__main__":
    main()
