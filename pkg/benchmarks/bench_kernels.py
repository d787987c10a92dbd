"""Compare the compiled partition kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Each row times one kernel call on both backends and reports the speed-up.
Results are also checked for equality, so a mismatch aborts the run.
"""

import argparse
import sys
import timeit

from freechi import _pykernels as py

try:
    from freechi import _ckernels as c
except ImportError:
    sys.exit("compiled extension not built; run `pip install --no-build-isolation -e .` first")


def cases():
    colors = [1, 2, 1, 1, 2, 2, 1, 2, 1, 2, 2, 1]
    return [
        ("enumerate NC(12)", lambda k: sum(1 for _ in k.iter_nc_labels(12))),
        ("Kreweras profile NC(10)", lambda k: k.nc_kreweras_profile(10)),
        ("coloured profile, 12 letters", lambda k: k.colored_nc_profile(colors)),
        ("coloured profile + join filter", lambda k: k.colored_nc_profile(colors, [2] * 6)),
        ("coloured profile + forbidden", lambda k: k.colored_nc_profile(colors, [2] * 6, [0b11, 0b1100, 0b110000])),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'kernel':34s} {'python (s)':>11s} {'compiled (s)':>13s} {'speed-up':>9s}")
    for name, fn in cases():
        if fn(py) != fn(c):
            sys.exit(f"backends disagree on {name}")
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: fn(c), number=1, repeat=args.repeat))
        print(f"{name:34s} {tp:11.4f} {tc:13.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
