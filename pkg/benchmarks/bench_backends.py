"""Benchmark the compiled kernels against the pure-Python fallback.

Run:  python benchmarks/bench_backends.py
"""

import time

import numpy as np

from cusplevy import billiard as B
from cusplevy.backend import get_kernels


def time_op(fn, min_seconds=0.3):
    n = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(n):
            fn()
        dt = time.perf_counter() - t0
        if dt >= min_seconds:
            return dt / n
        n = max(n + 1, int(n * min_seconds / max(dt, 1e-9)))


def main():
    geom = B.build_cusp_table(3.0, 1.0, 1.0)
    kc = get_kernels("compiled")
    kp = get_kernels("python")
    gc = geom.kernel_geom()
    gp = kp.BilliardGeom(geom.beta, geom.s_max, geom.arc_radius, geom.arc_center_x,
                         geom.arc_half_angle, geom.wall_len, geom.arc_len,
                         geom.graze_tol, geom.table_h, geom.table_cum)

    rows = []

    n_ret = {"compiled": 20_000, "python": 400}
    for name, kern, g in (("compiled", kc, gc), ("python", kp, gp)):
        out = np.empty(n_ret[name], dtype=np.int64)

        def run(kern=kern, g=g, out=out, n=n_ret[name]):
            kern.trace_returns(g, 2, 0.05, 1.3, n, 10**7, out)

        per = time_op(run) / n_ret[name]
        rows.append((f"billiard first returns ({name})", per * 1e6, "us/return"))

    n_map = {"compiled": 2_000_000, "python": 40_000}
    for name, kern in (("compiled", kc), ("python", kp)):
        xs = np.empty(n_map[name])

        def run(kern=kern, xs=xs, n=n_map[name]):
            kern.imap_trace(0, 1.5, 0.0, 0.3, n, xs)

        per = time_op(run) / n_map[name]
        rows.append((f"interval map steps ({name})", per * 1e9, "ns/step"))

    print(f"{'operation':44s} {'rate':>12s}")
    for label, value, unit in rows:
        print(f"{label:44s} {value:12.2f} {unit}")
    by_kind = {}
    for label, value, _ in rows:
        kind = label.split(" (")[0]
        by_kind.setdefault(kind, []).append(value)
    print()
    for kind, (fast, slow) in by_kind.items():
        print(f"{kind}: compiled is {slow / fast:.0f}x faster")


if __name__ == "__main__":
    main()
