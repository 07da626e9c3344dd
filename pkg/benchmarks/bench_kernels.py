"""Compare the compiled kernels against the pure-numpy fallback.

Both backends are imported side by side, so one run gives a direct
speedup table. An optional end-to-end timing runs `log_likelihood`
twice through subprocesses, once with SSPP_PURE_PYTHON=1.

    python3 benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

import numpy as np

from sspp._kernels import pykernels

try:
    from sspp._kernels import _core
except ImportError:
    _core = None


def timeit(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_add_disc(mod, n_cells, n_discs, rng):
    mx = np.linspace(0.5 / n_cells, 1 - 0.5 / n_cells, n_cells)
    wx = np.full(n_cells, 1.0 / n_cells)
    centers = rng.random((n_discs, 2))
    r = 0.1

    # the grid is square, so the y axis reuses mx/wx
    def run():
        covered = np.zeros((n_cells, n_cells), dtype=np.uint8)
        for cx, cy in centers:
            i0 = int(np.searchsorted(mx, cx - r))
            i1 = int(np.searchsorted(mx, cx + r, side="right"))
            j0 = int(np.searchsorted(mx, cy - r))
            j1 = int(np.searchsorted(mx, cy + r, side="right"))
            mod.add_disc(covered, mx, mx, wx, wx, cx, cy, r, i0, i1, j0, j1)

    return timeit(run)


def bench_scan(mod, n_points, n_queries, rng):
    xs, ys = rng.random(n_points), rng.random(n_points)
    qs = rng.random((n_queries, 2))

    def run():
        for qx, qy in qs:
            mod.count_within(xs, ys, qx, qy, 0.1)
            mod.min_dist(xs, ys, qx, qy)

    return timeit(run)


def bench_end_to_end():
    script = (
        "import time, numpy as np\n"
        "from sspp.geometry import Window\n"
        "from sspp.model import ModelParams, PointSequence\n"
        "from sspp.inference import log_likelihood\n"
        "from sspp import _kernels\n"
        "rng = np.random.default_rng(0)\n"
        "w = Window(0, 0, 25, 25)\n"
        "seq = PointSequence(rng.uniform(0, 25, (150, 2)), w)\n"
        "params = ModelParams(0.3, 2.0, w)\n"
        "log_likelihood(seq, params)\n"
        "t0 = time.perf_counter()\n"
        "for _ in range(5): log_likelihood(seq, params)\n"
        "print(_kernels.BACKEND, (time.perf_counter() - t0) / 5)\n"
    )
    out = []
    for env_extra in ({}, {"SSPP_PURE_PYTHON": "1"}):
        env = dict(os.environ, **env_extra)
        res = subprocess.run([sys.executable, "-c", script], env=env,
                             capture_output=True, text=True, check=True)
        backend, secs = res.stdout.split()
        out.append((backend, float(secs)))
    return out


def main():
    rng = np.random.default_rng(42)
    rows = []
    for label, fn, args in [
        ("add_disc 200x200 grid, 100 discs", bench_add_disc, (200, 100, rng)),
        ("add_disc 500x500 grid, 100 discs", bench_add_disc, (500, 100, rng)),
        ("count/min_dist 200 pts, 2000 queries", bench_scan, (200, 2000, rng)),
    ]:
        py = fn(pykernels, *args)
        if _core is not None:
            cy = fn(_core, *args)
            rows.append((label, py, cy, py / cy))
        else:
            rows.append((label, py, None, None))

    print(f"{'benchmark':<42}{'python':>10}{'cython':>10}{'speedup':>9}")
    for label, py, cy, ratio in rows:
        cy_s = f"{cy * 1e3:8.2f}ms" if cy is not None else "     n/a"
        ratio_s = f"{ratio:7.1f}x" if ratio is not None else "     n/a"
        print(f"{label:<42}{py * 1e3:8.2f}ms{cy_s}{ratio_s}")

    print("\nend-to-end log_likelihood (150 points, 25 m window):")
    for backend, secs in bench_end_to_end():
        print(f"  {backend:<8}{secs * 1e3:8.2f} ms/call")


if __name__ == "__main__":
    main()
