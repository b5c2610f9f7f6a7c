"""Benchmark the compiled root-solver kernel against the numpy fallback.

The solver is the hot inner loop of curve tracking (one batched solve per
grid refinement sweep), so both backends are timed on batched solves across
the degrees the package actually tracks.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from rootreg.kernels import available_backends


def bench(solver, coeffs, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        roots, iters, ok = solver(coeffs, 1e-12, 300)
        best = min(best, time.perf_counter() - t0)
    assert ok.all()
    return best


def main():
    rng = np.random.default_rng(42)
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'degree':>6} {'batch':>7} " + " ".join(f"{name:>14}" for name in backends)
          + f" {'speedup':>9}")
    for n in (2, 3, 4, 5, 8):
        for m in (256, 4096):
            coeffs = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
            times = {}
            for name, solver in backends.items():
                times[name] = bench(solver, coeffs.copy())
            row = f"{n:>6} {m:>7} "
            row += " ".join(f"{times[name] * 1e6 / m:>12.2f}us" for name in backends)
            if "compiled" in times and "python" in times:
                row += f" {times['python'] / times['compiled']:>8.1f}x"
            print(row)
    # end-to-end: a full tracked family per backend
    import os
    import subprocess
    import sys

    print("\nend-to-end curve tracking (Z^5 family, grid 2049):")
    for env_flag, label in (("", "selected"), ("1", "forced python")):
        code = (
            "import time, numpy as np\n"
            "from rootreg.tracking import family_random_trig, track_curve\n"
            "import rootreg.kernels as K\n"
            "fam = family_random_trig(5, 7)\n"
            "t0 = time.perf_counter()\n"
            "track_curve(fam, initial_grid=2049)\n"
            "print(f'  {K.BACKEND:>8}: {time.perf_counter() - t0:.3f}s')\n"
        )
        env = dict(os.environ)
        if env_flag:
            env["ROOTREG_PURE_PYTHON"] = env_flag
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


if __name__ == "__main__":
    main()
