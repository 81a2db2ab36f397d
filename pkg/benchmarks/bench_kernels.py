"""Compare the compiled and numpy remap kernels on solver-shaped workloads.

Run:  python3 benchmarks/bench_kernels.py
"""
import time

import numpy as np

from slsv.kernels import _ref

try:
    from slsv.kernels import _core
except ImportError:
    _core = None

#: (label, L lines, N cells, K dofs) -- shapes of the production sweeps
CASES = [
    ("vp 160^2 k=2 sweep", 480, 160, 3),
    ("vp 256^2 k=2 sweep", 768, 256, 3),
    ("transport 320^2 k=2 sweep", 960, 320, 3),
    ("1d ladder k=3 line", 1, 320, 4),
]


def bench(fn, *args, repeat=30):
    fn(*args)  # warmup
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def main():
    rng = np.random.default_rng(0)
    print(f"{'case':<28} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for label, L, N, K in CASES:
        U = rng.normal(size=(L, N, K))
        m = rng.integers(-N, N, size=L)
        BL = rng.normal(size=(L, K, K))
        BR = rng.normal(size=(L, K, K))
        t_py = bench(_ref.shift_remap, U, m, BL, BR, True)
        if _core is None:
            print(f"{label:<28} {t_py * 1e3:9.3f}ms {'-':>10} {'-':>8}")
            continue
        t_c = bench(_core.shift_remap, U, m, BL, BR, True)
        out_a = _ref.shift_remap(U, m, BL, BR, True)
        out_b = _core.shift_remap(U, m, BL, BR, True)
        assert np.abs(out_a - out_b).max() < 1e-12
        print(f"{label:<28} {t_py * 1e3:9.3f}ms {t_c * 1e3:9.3f}ms "
              f"{t_py / t_c:7.2f}x")

    print()
    modal = rng.normal(size=(320, 4))
    x = rng.uniform(-50, 50, size=4 * 320 + 1)
    t_py = bench(_ref.cumulative_eval, modal, x, 0.0, 0.02, True)
    line = f"{'cumulative_eval 320 cells':<28} {t_py * 1e3:9.3f}ms"
    if _core is not None:
        t_c = bench(_core.cumulative_eval, modal, x, 0.0, 0.02, True)
        line += f" {t_c * 1e3:9.3f}ms {t_py / t_c:7.2f}x"
    print(line)


if __name__ == "__main__":
    main()
