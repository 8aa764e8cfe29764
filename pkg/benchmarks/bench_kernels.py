"""Compare the compiled and pure-Python kernels on representative workloads.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import timeit

from fpcert import freegroup as fg, kernels, trees


def _substitution_workload():
    # basis images of a long product in Aut(F_5), applied to a long word
    f = fg.evaluate('(r(1,2) conj(4,"x1 x3",-1; 5,"x1 x3",1) s(2,3))^6', 5)
    rng = random.Random(0)
    word = tuple(rng.choice((1, -1)) * rng.randint(1, 5) for _ in range(400))
    return f.images, word


def _helly_workload():
    # the largest 7-vertex trees by subtree count
    ts = sorted(trees.all_trees(7), key=lambda t: -len(trees.subtree_masks(t)))[:3]
    return [trees.subtree_masks(t) for t in ts]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    images, word = _substitution_workload()
    helly = _helly_workload()
    rows = []
    for name, mod in sorted(kernels.backends().items()):
        cases = {
            "reduce_word": lambda m=mod: m.reduce_word(word + tuple(-a for a in reversed(word))),
            "substitute": lambda m=mod: m.substitute(word, images),
            "compose_images": lambda m=mod: m.compose_images(images, images),
            "helly_scan": lambda m=mod: [m.helly_scan(ms, 4) for ms in helly],
        }
        for case, fn in cases.items():
            best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            rows.append((case, name, best))

    print(f"{'kernel':<16}{'backend':<10}{'best (ms)':>12}")
    for case, name, best in sorted(rows):
        print(f"{case:<16}{name:<10}{best * 1000:>12.3f}")
    by = {(c, n): t for c, n, t in rows}
    if "compiled" in kernels.backends():
        print()
        for case in sorted({c for c, _, _ in rows}):
            print(f"{case:<16}speedup x{by[(case, 'python')] / by[(case, 'compiled')]:.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
