"""Timing comparison of the compiled kernels against the pure fallback.

Runs the two hot paths on identical inputs: reachable-state closure on
dense graphs, and Monte Carlo propagation batches.  Results from the two
backends are asserted equal before any timing is reported, so a speedup
never hides a divergence.

Usage: python benchmarks/bench_kernels.py [--trials N] [--repeat K]
"""

import argparse
import importlib
import statistics
import time

from pzf.dynamics import trial_stream
from pzf.graphs import complete, cycle, sun, tadpole4


def load_backends():
    backends = {}
    for name, module in (("pure", "pzf._pykernels"),
                         ("compiled", "pzf._kernels")):
        try:
            backends[name] = importlib.import_module(module)
        except ImportError:
            print(f"note: {module} not importable; skipping {name}")
    return backends


def timed(fn, repeat):
    best = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best.append(time.perf_counter() - t0)
    return out, min(best), statistics.mean(best)


def bench_closure(backends, repeat):
    cases = (("complete(16)", complete(16)),
             ("sun(7)", sun(7)),
             ("cycle(20)", cycle(20)))
    rows = []
    for label, g in cases:
        results = {}
        for name, impl in backends.items():
            kg = impl.make_kernel_graph(g.adjacency_masks())
            out, best, _ = timed(
                lambda: impl.reachable_closure(kg, 1, 1 << g.n), repeat)
            results[name] = (set(out), best)
        states = {name: r[0] for name, r in results.items()}
        first = next(iter(states.values()))
        assert all(s == first for s in states.values()), label
        rows.append((f"closure {label} ({len(first)} states)",
                     {name: r[1] for name, r in results.items()}))
    return rows


def bench_propagate(backends, trials, repeat):
    cases = (("complete(10)", complete(10)),
             ("sun(6)", sun(6)),
             ("tadpole4(5)", tadpole4(5)))
    rows = []
    for label, g in cases:
        results = {}
        for name, impl in backends.items():
            kg = impl.make_kernel_graph(g.adjacency_masks())

            def run():
                total = 0
                for trial in range(trials):
                    total += impl.propagate(kg, 1, trial_stream(0, trial))
                return total

            out, best, _ = timed(run, repeat)
            results[name] = (out, best)
        totals = {name: r[0] for name, r in results.items()}
        first = next(iter(totals.values()))
        assert all(t == first for t in totals.values()), label
        rows.append((f"propagate {label} x{trials}",
                     {name: r[1] for name, r in results.items()}))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=2000,
                        help="Monte Carlo batch size per measurement")
    parser.add_argument("--repeat", type=int, default=3,
                        help="repetitions; the best time is reported")
    args = parser.parse_args()

    backends = load_backends()
    if not backends:
        raise SystemExit("no kernel backend importable")
    rows = bench_closure(backends, args.repeat)
    rows += bench_propagate(backends, args.trials, args.repeat)

    names = list(backends)
    header = ["workload"] + [f"{n} (s)" for n in names]
    if len(names) == 2:
        header.append("speedup")
    width = max(len(r[0]) for r in rows)
    print()
    print("  ".join([header[0].ljust(width)] + header[1:]))
    for label, times in rows:
        cells = [label.ljust(width)]
        cells += [f"{times[n]:12.6f}" for n in names]
        if len(names) == 2:
            cells.append(f"{times[names[0]] / times[names[1]]:8.2f}x")
        print("  ".join(cells))


if __name__ == "__main__":
    main()
