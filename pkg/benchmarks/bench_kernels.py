"""Compare the compiled and pure-Python kernels on coset enumeration and word tracing.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import statistics
import time

from l2rank import kernels
from l2rank.presentations import parse_presentation

def coxeter_symmetric(n):
    """Coxeter presentation of S_n on the adjacent transpositions s1..s(n-1)."""
    gens = [f"s{i}" for i in range(1, n)]
    rels = [f"{g}^2" for g in gens]
    rels += [f"({gens[i]}*{gens[i + 1]})^3" for i in range(n - 2)]
    rels += [f"({gens[i]}*{gens[j]})^2" for i in range(n - 1) for j in range(i + 2, n - 1)]
    return f"< {', '.join(gens)} | {', '.join(rels)} >"


ENUMERATION_CASES = {
    # name: (presentation, subgroup words, expected index)
    "A5 regular": ("< a, b | a^2, b^3, (a*b)^5 >", [], 60),
    "PSL(2,7) regular": ("< a, b | a^2, b^3, (a*b)^7, (a*b*a*b^-1)^4 >", [], 168),
    "S7 regular": (coxeter_symmetric(7), [], 5040),
    "S8 on S7": (coxeter_symmetric(8), [f"s{i}" for i in range(1, 7)], 8),
    "S8 regular": (coxeter_symmetric(8), [], 40320),
}


def timed(fn, repeat):
    times = []
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times), result


def bench_enumeration(impl, text, sub, repeat):
    p = parse_presentation(text)
    rels = [r.codes() for r in p.relators]
    subs = [p.word(w).codes() for w in sub]
    return timed(lambda: impl.enumerate_cosets(2 * p.rank, rels, subs, 200_000), repeat)


def bench_trace(impl, repeat, nwords=2000, length=200):
    p = parse_presentation(ENUMERATION_CASES["PSL(2,7) regular"][0])
    _, action, _ = kernels.enumerate_cosets(4, [r.codes() for r in p.relators], [], 1000)
    rng = random.Random(1)
    words = [[rng.randrange(4) for _ in range(length)] for _ in range(nwords)]
    n = len(action[0])

    def run():
        return sum(impl.trace(action, w, k % n) for k, w in enumerate(words))

    return timed(run, repeat)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python backend is timed")
    print(f"{'case':28s} " + " ".join(f"{b:>12s}" for b in backends) + "   speedup")
    for name, (text, sub, expected) in ENUMERATION_CASES.items():
        row = {}
        for b, impl in backends.items():
            t, (closed, action, defined) = bench_enumeration(impl, text, sub, args.repeat)
            if expected:
                assert closed and len(action[0]) == expected, (b, name)
            row[b] = t
        print(_line(name, row))
    row = {b: bench_trace(impl, args.repeat)[0] for b, impl in backends.items()}
    print(_line("trace 2000 words x 200", row))


def _line(name, row):
    cells = " ".join(f"{t * 1e3:10.2f}ms" for t in row.values())
    speed = f"{row['python'] / row['cython']:8.1f}x" if "cython" in row else ""
    return f"{name:28s} {cells} {speed}"


if __name__ == "__main__":
    main()
