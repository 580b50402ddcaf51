#!/usr/bin/env python3
"""Time the hot kernels on the compiled core vs the pure-Python twin.

Run:  python benchmarks/bench_backends.py [--quick]
Both backends compute bit-identical results; this script reports how
much wall time the compiled core saves on each kernel and on a full
learning game.
"""

import argparse
import time

import numpy as np

from cakegame.adversarial import center_heavy_example, random_mild_density
from cakegame.backend import available_backends
from cakegame.stackelberg import _merged_segments
from cakegame.valuations import uniform_density


def timeit(fn, min_time=0.2):
    fn()  # warm up
    n = 0
    t0 = time.perf_counter()
    while True:
        fn()
        n += 1
        dt = time.perf_counter() - t0
        if dt >= min_time:
            return dt / n


def bench_kernels(quick=False):
    backends = available_backends()
    if "c" not in backends:
        print("compiled backend not built; nothing to compare")
        return

    dA = uniform_density()
    dB = center_heavy_example()
    grid_n = 200 if quick else 1000
    grid = np.unique(np.concatenate(
        [np.linspace(0.0, 1.0, grid_n + 1), dA.breaks, dB.breaks]))
    fa = backends["python"].cdf_many(dA.breaks, dA.vals, dA.cum, grid)
    fb = backends["python"].cdf_many(dB.breaks, dB.vals, dB.cum, grid)

    pts, va_seg, vb_seg = _merged_segments(random_mild_density(1),
                                           random_mild_density(2))
    efa = backends["python"].cdf_many(*(lambda d: (d.breaks, d.vals, d.cum))(
        random_mild_density(1)), pts)
    efb = backends["python"].cdf_many(*(lambda d: (d.breaks, d.vals, d.cum))(
        random_mild_density(2)), pts)

    rng = np.random.default_rng(0)
    dp_n = 500 if quick else 3000
    cell_va = rng.uniform(0, 0.01, dp_n)
    cell_iv = rng.integers(0, 2, dp_n).astype(np.uint8)
    max_a = (int(cell_iv.sum()) - 1) // 2

    xs = rng.uniform(0, 1, 10000)
    cuts = tuple(sorted(rng.uniform(0, 1, 4)))

    cases = [
        ("cdf_many (10k points)",
         lambda k: k.cdf_many(dB.breaks, dB.vals, dB.cum, xs)),
        ("alternating_values x1000",
         lambda k: [k.alternating_values(dB.breaks, dB.vals, dB.cum, cuts)
                    for _ in range(1000)]),
        (f"bruteforce_scan (k=2, {len(grid)} pts)",
         lambda k: k.bruteforce_scan(fa, fb, 1.0, dB.total_mass, 2)),
        (f"constrained_scan (k=2, {len(grid)} pts)",
         lambda k: k.constrained_scan(fa, fb, 1.0, dB.total_mass, 2, 0.5)),
        ("exact_scan (k=4)",
         lambda k: k.exact_scan(pts, efa, efb, va_seg, vb_seg, 1.0, 1.0, 4)),
        (f"interval_dp ({dp_n} cells, k=4)",
         lambda k: k.interval_dp(cell_va, cell_iv, 4, max_a)),
    ]

    print(f"{'kernel':<38} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for name, call in cases:
        t_py = timeit(lambda: call(backends["python"]))
        t_c = timeit(lambda: call(backends["c"]))
        print(f"{name:<38} {t_py * 1e3:>10.2f}ms {t_c * 1e3:>10.2f}ms "
              f"{t_py / t_c:>8.1f}x")


def bench_game(quick=False):
    import cakegame.backend as backend_mod
    import cakegame.engine as engine_mod
    import cakegame.stackelberg as st_mod
    import cakegame.valuations as val_mod
    from cakegame.alice_strategies import KCutMyopicAlice
    from cakegame.bob_strategies import MyopicBob
    from cakegame.engine import run_game

    backends = available_backends()
    if "c" not in backends:
        return
    T = 10 ** 4 if quick else 10 ** 5
    k = 4
    vB = random_mild_density(7)
    u = uniform_density()
    times = {}
    for name in ("python", "c"):
        mod = backends[name]
        for m in (backend_mod, engine_mod, st_mod, val_mod):
            m.kernels = mod
        t0 = time.perf_counter()
        run_game(KCutMyopicAlice(T, k), MyopicBob(vB), u, vB, T, k)
        times[name] = time.perf_counter() - t0
    for m in (backend_mod, engine_mod, st_mod, val_mod):
        m.kernels = backends["c"]
    print(f"\n{'full k-cut learning game':<38} "
          f"{times['python'] * 1e3:>10.2f}ms {times['c'] * 1e3:>10.2f}ms "
          f"{times['python'] / times['c']:>8.1f}x")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    bench_kernels(args.quick)
    bench_game(args.quick)
