"""Compare the compiled and pure-Python RDFS round kernels.

Run with ``python3 benchmarks/bench_kernels.py [--repeats N]``. Both kernels
are driven through the same saturation loop, so the difference measured is
the hot join loop alone. Results are checked for equality before timing.
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from onconet.ontology import load_seed
from onconet.ontology import vocab as V
from onconet.rdf import IRI, Graph
from onconet.reasoner import kernel, saturate


def synthetic(n_classes: int, n_individuals: int, n_props: int, seed: int = 7) -> Graph:
    """A class tree plus typed individuals linked by properties with domains and ranges."""
    rng = random.Random(seed)
    ns = "http://bench.example/"
    classes = [IRI(f"{ns}C{i}") for i in range(n_classes)]
    props = [IRI(f"{ns}p{i}") for i in range(n_props)]
    people = [IRI(f"{ns}x{i}") for i in range(n_individuals)]
    g = Graph()
    for i in range(1, n_classes):
        g.add(classes[i], V.subClassOf, classes[rng.randrange(i)])
    for i, p in enumerate(props):
        g.add(p, V.domain, rng.choice(classes))
        g.add(p, V.range_, rng.choice(classes))
        if i:
            g.add(p, V.subPropertyOf, props[rng.randrange(i)])
    for x in people:
        g.add(x, V.type_, rng.choice(classes))
        for _ in range(3):
            g.add(x, rng.choice(props), rng.choice(people))
    return g


def _time(graph: Graph, round_fn, repeats: int) -> tuple[float, float]:
    """Median (kernel seconds, total saturation seconds) over ``repeats`` runs."""
    kernel_samples, total_samples = [], []
    for _ in range(repeats):
        spent = [0.0]

        def timed(*args):
            start = time.perf_counter()
            out = round_fn(*args)
            spent[0] += time.perf_counter() - start
            return out

        start = time.perf_counter()
        saturate(graph, round_fn=timed)
        total_samples.append(time.perf_counter() - start)
        kernel_samples.append(spent[0])
    return statistics.median(kernel_samples), statistics.median(total_samples)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)
    if kernel.compiled_round is None:
        print("compiled kernel not built; run `pip install --no-build-isolation -e .` first")
        return 1
    cases = [
        ("seed", load_seed()),
        ("synthetic-1k", synthetic(40, 300, 8)),
        ("synthetic-5k", synthetic(80, 1200, 12)),
        ("synthetic-12k", synthetic(120, 3000, 20)),
    ]
    print("kernel = time inside the round function; total = whole saturation")
    print(f"{'graph':<15}{'asserted':>9}{'inferred':>9}{'py kernel':>11}{'cy kernel':>11}{'speedup':>9}{'py total':>10}{'cy total':>10}")
    for name, g in cases:
        a = saturate(g, round_fn=kernel.python_round)
        b = saturate(g, round_fn=kernel.compiled_round)
        if set(a.graph) != set(b.graph):
            raise SystemExit(f"{name}: kernels disagree")
        py_k, py_t = _time(g, kernel.python_round, args.repeats)
        cy_k, cy_t = _time(g, kernel.compiled_round, args.repeats)
        print(
            f"{name:<15}{len(g):>9}{len(a.inferred):>9}{py_k * 1000:>9.1f}ms{cy_k * 1000:>9.1f}ms"
            f"{py_k / cy_k:>8.2f}x{py_t * 1000:>8.0f}ms{cy_t * 1000:>8.0f}ms"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
