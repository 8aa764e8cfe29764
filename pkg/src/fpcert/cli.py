"""Command-line front end: ``certify <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import certifier, coxeter, euclid, kernels, trees
from .registry import builtin_claims


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summarize(entries, stream):
    for e in entries:
        conv = e.convention or "-"
        print(f"{e.id:>5}  {e.status:<13} {conv:<4} {e.millis:>7} ms", file=stream)


def _run(claims, args) -> int:
    entries = certifier.run_claims(claims, cap=args.cap, jobs=args.jobs)
    _emit(certifier.report_json(entries), args.out)
    _summarize(entries, sys.stderr if not args.out else sys.stdout)
    return 1 if any(e.status == certifier.REFUTED for e in entries) else 0


def cmd_builtin_claims(args) -> int:
    return _run(builtin_claims(), args)


def cmd_verify(args) -> int:
    try:
        claims = certifier.load_claims(args.file)
    except (OSError, ValueError) as exc:
        print(f"certify: cannot read claims: {exc}", file=sys.stderr)
        return 2
    return _run(claims, args)


def cmd_classify(args) -> int:
    try:
        with open(args.file) as fh:
            data = json.load(fh)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            m = coxeter.CoxeterMatrix.from_json(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"certify: bad Coxeter matrix: {exc}", file=sys.stderr)
        return 2
    res = coxeter.classify(m)
    oracle = coxeter.numeric_finiteness_oracle(m)
    out = {
        "rank": m.rank,
        "label": str(res),
        "finite": res.finite,
        "components": [
            {"generators": [v + 1 for v in comp], "type": label} for comp, label in res.components
        ],
        "numeric_oracle": oracle.verdict,
        "resolved_exactly": oracle.resolved_exactly,
        "warnings": [str(w.message) for w in caught],
    }
    if m.rank <= coxeter.MAX_SPHERICITY_RANK:
        sph = coxeter.sphericity(m)
        out["sphericity"] = "full" if sph.full else sph.level
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def cmd_helly_fuzz(args) -> int:
    seeded = [euclid.pairwise_only_counterexample()] if args.negative_control else []
    if seeded and args.dim != 2:
        print("certify: the negative control lives in dimension 2", file=sys.stderr)
        return 2
    stats = euclid.helly_harness(
        args.dim, args.trials, args.seed, helly_number=args.helly_number, seed_families=seeded
    )
    print(json.dumps(stats.to_json(), indent=2, sort_keys=True))
    if args.helly_number is None or args.helly_number > args.dim:
        return 1 if stats.violations else 0
    # weakened hypothesis: success means a violation was found
    return 0 if stats.violations else 1


def cmd_tree_exhaustive(args) -> int:
    if args.max_vertices > trees.MAX_VERTICES:
        print(f"certify: at most {trees.MAX_VERTICES} vertices", file=sys.stderr)
        return 2
    summary = trees.tree_exhaustive(args.max_vertices, args.helly_vertices, args.max_family)
    if args.triangle:
        tri = trees.triangle_exhaustive(min(args.max_vertices, 8), seed=args.seed)
        summary["triangle"] = {
            "trees": tri.trees, "partitions": tri.partitions, "failures": tri.failures,
        }
        summary["failures"] += tri.failures
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 1 if summary["failures"] else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="certify",
        description="Exact checks of Coxeter, free-group, matrix and Helly computations.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({kernels.BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    def claim_opts(sp):
        sp.add_argument("--cap", type=int, default=None,
                        help=f"closure/order cap (default {certifier.DEFAULT_CAP})")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes")

    sp = sub.add_parser("paper-claims", help="run the built-in claims")
    claim_opts(sp)
    sp.set_defaults(func=cmd_builtin_claims)

    sp = sub.add_parser("verify", help="run claims from a JSON file")
    sp.add_argument("file")
    claim_opts(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("classify", help="classify a Coxeter matrix file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("helly-fuzz", help="randomized Helly harness on rational polytopes")
    sp.add_argument("--dim", type=int, required=True, choices=(1, 2, 3))
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--helly-number", type=int, default=None,
                    help="subfamily size in the hypothesis (default dim + 1)")
    sp.add_argument("--negative-control", action="store_true",
                    help="also test the pairwise-only counterexample (dim 2)")
    sp.set_defaults(func=cmd_helly_fuzz)

    sp = sub.add_parser("tree-exhaustive", help="fixed points and subtree Helly on small trees")
    sp.add_argument("--max-vertices", type=int, default=9)
    sp.add_argument("--helly-vertices", type=int, default=7)
    sp.add_argument("--max-family", type=int, default=4)
    sp.add_argument("--triangle", action="store_true", help="also run the triangle harness")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_tree_exhaustive)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
