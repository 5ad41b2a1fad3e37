"""Compare the gmpy2 and pure-Python (Fraction) rational backends.

Each workload runs in a fresh interpreter, since the backend is chosen at
import time from QTLIFT_PURE_PYTHON.  Usage: python benchmarks/bench_backends.py [--repeat R]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "torus_mul_zeta4": """
from qtlift.qtorus import TorusContext, random_element
T = TorusContext(2, 4, {(1, 2): "z"})
xs = [random_element(T, rng, max_terms=4, bound=3) for _ in range(200)]
for a, b in zip(xs, xs[1:]):
    a * b
""",
    "ie_bracket_q2": """
from qtlift.interlace import IEContext, random_ie
from qtlift.qtorus import TorusContext
from qtlift.dergroup import DerivationSpec
T = TorusContext(2, 1, {(1, 2): "2"})
ctx = IEContext(T, 3, [DerivationSpec.degree(T, [int(i == k) for i in range(2)]) for k in range(2)])
es = [random_ie(ctx, rng) for _ in range(100)]
for a, b in zip(es, es[1:]):
    ctx.bracket(a, b)
""",
    "lift_word_q2": """
from qtlift.interlace import IEContext
from qtlift.qtorus import TorusContext
from qtlift.dergroup import DerivationSpec
from qtlift.glwords import random_elementary_word
from qtlift.lift import lift_int_word, special_verify
T = TorusContext(2, 1, {(1, 2): "2"})
ctx = IEContext(T, 2, [DerivationSpec.degree(T, [int(i == k) for i in range(2)]) for k in range(2)])
w = random_elementary_word(T, 2, rng, length=4)
f, _ = lift_int_word(ctx, w, samples=20, rng=rng)
special_verify(f, samples=50, rng=rng)
""",
}

RUNNER = """
import random, time
rng = random.Random(0)
t0 = time.perf_counter()
{body}
print(time.perf_counter() - t0)
"""


def time_workload(body: str, pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["QTLIFT_PURE_PYTHON"] = "1"
    else:
        env.pop("QTLIFT_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", RUNNER.format(body=body)], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--json", action="store_true")
    args = p.parse_args(argv)
    rows = {}
    for name, body in WORKLOADS.items():
        g = min(time_workload(body, False) for _ in range(args.repeat))
        f = min(time_workload(body, True) for _ in range(args.repeat))
        rows[name] = {"gmpy2": round(g, 4), "fraction": round(f, 4), "speedup": round(f / g, 2)}
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'workload':20s} {'gmpy2 s':>9s} {'Fraction s':>11s} {'speedup':>8s}")
        for name, r in rows.items():
            print(f"{name:20s} {r['gmpy2']:9.3f} {r['fraction']:11.3f} {r['speedup']:7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
