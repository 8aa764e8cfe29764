"""Exact rational H-polytopes and a randomized Helly harness.

Feasibility uses Fourier-Motzkin elimination on integer-scaled rows.
Chernikov's rule (a row derived from more than ``k + 1`` originals after
``k`` eliminations is redundant) keeps the row count small, and a feasible
system is back-substituted into an exact rational witness point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

MAX_DIM = 4
MAX_HALFSPACES = 64


class ScaleError(ValueError):
    """Input beyond the supported dimension or constraint count."""


@dataclass(frozen=True)
class Halfspace:
    """``{x : a . x <= b}``."""

    a: tuple
    b: Fraction

    def __post_init__(self):
        a = tuple(Fraction(v) for v in self.a)
        if not any(a):
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", Fraction(self.b))

    @property
    def dim(self) -> int:
        return len(self.a)

    def contains(self, x) -> bool:
        return sum(ai * Fraction(xi) for ai, xi in zip(self.a, x)) <= self.b

    def __str__(self):
        terms = " + ".join(f"{c}*x{i}" for i, c in enumerate(self.a, 1) if c)
        return f"{terms} <= {self.b}"


@dataclass(frozen=True)
class Polytope:
    dim: int
    halfspaces: tuple

    def __post_init__(self):
        hs = tuple(self.halfspaces)
        if any(h.dim != self.dim for h in hs):
            raise ValueError("halfspace dimension mismatch")
        object.__setattr__(self, "halfspaces", hs)

    def contains(self, x) -> bool:
        return all(h.contains(x) for h in self.halfspaces)

    def intersect(self, *others: Polytope) -> Polytope:
        hs = list(self.halfspaces)
        for o in others:
            if o.dim != self.dim:
                raise ValueError("dimension mismatch")
            hs.extend(o.halfspaces)
        return Polytope(self.dim, tuple(hs))

    @classmethod
    def box(cls, lo, hi) -> Polytope:
        d = len(lo)
        hs = []
        for i in range(d):
            e = [0] * d
            e[i] = 1
            hs.append(Halfspace(tuple(e), hi[i]))
            e[i] = -1
            hs.append(Halfspace(tuple(e), -Fraction(lo[i])))
        return cls(d, tuple(hs))


@dataclass(frozen=True)
class Empty:
    def __bool__(self):
        return False


@dataclass(frozen=True)
class Witness:
    point: tuple


# -- integer Fourier-Motzkin -------------------------------------------------


def _integer_row(h: Halfspace):
    den = 1
    for v in (*h.a, h.b):
        den = den * v.denominator // gcd(den, v.denominator)
    a = tuple(int(v * den) for v in h.a)
    return _normalize(a, int(h.b * den))


def _normalize(a, b):
    g = 0
    for v in a:
        g = gcd(g, v)
    g = gcd(g, b) if g else abs(b) or 1
    if g > 1:
        a = tuple(v // g for v in a)
        b //= g
    return a, b


def _dedupe(rows):
    """Drop rows implied by a parallel row that is no looser and whose
    history is a subset; a looser row with a smaller history must survive
    or Chernikov pruning downstream would lose information."""
    groups = {}
    for a, b, hist in rows:
        g = 0
        for v in a:
            g = gcd(g, v)
        groups.setdefault(tuple(v // g for v in a), []).append((Fraction(b, g), hist, (a, b)))
    out = []
    for members in groups.values():
        members.sort(key=lambda m: (m[0], m[1].bit_count()))
        kept = []
        for bound, hist, row in members:
            if any(kh & ~hist == 0 for _, kh in kept):
                continue
            kept.append((bound, hist))
            out.append((*row, hist))
    return out


def _eliminate(rows, k, eliminated):
    pos, neg, out = [], [], []
    for r in rows:
        c = r[0][k]
        (pos if c > 0 else neg if c < 0 else out).append(r)
    limit = eliminated + 1
    for ap, bp, hp in pos:
        cp = ap[k]
        for an, bn, hn in neg:
            hist = hp | hn
            if hist.bit_count() > limit:
                continue
            cn = -an[k]
            a = tuple(cn * x + cp * y for x, y in zip(ap, an))
            b = cn * bp + cp * bn
            a, b = _normalize(a, b)
            if not any(a):
                if b < 0:
                    return None
                continue
            out.append((a, b, hist))
    return _dedupe(out)


def _pair_count(rows, k):
    pos = sum(1 for r in rows if r[0][k] > 0)
    return pos * (len(rows) - pos - sum(1 for r in rows if r[0][k] == 0))


def feasible_point(p: Polytope):
    """An exact point of ``p``, or ``None`` when ``p`` is empty."""
    d = p.dim
    if d < 1 or d > MAX_DIM:
        raise ScaleError(f"dimension {d} outside 1..{MAX_DIM}")
    if len(p.halfspaces) > MAX_HALFSPACES:
        raise ScaleError(f"{len(p.halfspaces)} halfspaces exceed {MAX_HALFSPACES}")
    rows = [(*_integer_row(h), 1 << i) for i, h in enumerate(p.halfspaces)]
    stages = []  # (variable eliminated, rows before eliminating it)
    remaining = list(range(d))
    for step in range(1, d):
        k = min(remaining, key=lambda v: _pair_count(rows, v))
        remaining.remove(k)
        stages.append((k, rows))
        rows = _eliminate(rows, k, step)
        if rows is None:
            return None
    # the last variable needs no elimination: its bounds either cross or not
    stages.append((remaining[0], rows))
    # back-substitute in reverse elimination order; when variable k is
    # chosen, every other variable still in its rows is already fixed
    x = [Fraction(0)] * d
    for pos, (k, stage_rows) in enumerate(reversed(stages)):
        lo = hi = None
        for a, b, _ in stage_rows:
            c = a[k]
            if c == 0:
                continue
            rest = b - sum(a[j] * x[j] for j in range(d) if j != k and a[j])
            bound = Fraction(rest, c)
            if c > 0:
                hi = bound if hi is None or bound < hi else hi
            else:
                lo = bound if lo is None or bound > lo else lo
        if lo is not None and hi is not None and lo > hi:
            if pos == 0:
                return None
            raise AssertionError("elimination produced an inconsistent bound")
        v = Fraction(0)
        if lo is not None and v < lo:
            v = lo
        if hi is not None and v > hi:
            v = hi
        x[k] = v
    point = tuple(x)
    if not p.contains(point):
        raise AssertionError("back-substituted point violates a constraint")
    return point


def polytope_empty(p: Polytope):
    """``Empty()`` or ``Witness(point)``; the witness satisfies every halfspace exactly."""
    pt = feasible_point(p)
    return Empty() if pt is None else Witness(pt)


def intersection_point(polys):
    polys = list(polys)
    return feasible_point(polys[0].intersect(*polys[1:]))


# -- Helly harness -----------------------------------------------------------


@dataclass
class HellyStats:
    dim: int
    trials: int
    seed: int
    helly_number: int
    families: int = 0
    hypothesis_satisfied: int = 0
    violations: int = 0
    anchor_shortcuts: int = 0
    first_violation: list | None = None

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "trials": self.trials,
            "seed": self.seed,
            "helly_number": self.helly_number,
            "families": self.families,
            "hypothesis_satisfied": self.hypothesis_satisfied,
            "violations": self.violations,
            "anchor_shortcuts": self.anchor_shortcuts,
            "first_violation": self.first_violation,
        }


def _random_normal(rng, d):
    while True:
        a = [rng.randint(-3, 3) for _ in range(d)]
        if any(a):
            return a


def random_family(rng: random.Random, d: int):
    """Polytopes each containing a chosen subset of ``d + 2`` shared anchors.

    Returns ``(family, anchors, memberships)``.  Half the time polytope
    ``i`` holds every anchor but the ``i``-th, so that each ``d + 1`` of the
    polytopes share an anchor while the whole family shares none.
    """
    anchors = [tuple(rng.randint(-4, 4) for _ in range(d)) for _ in range(d + 2)]
    if rng.random() < 0.5:
        memberships = [[j for j in range(d + 2) if j != i] for i in range(d + 2)]
    else:
        m = rng.randint(d + 1, d + 3)
        memberships = [sorted(rng.sample(range(d + 2), rng.randint(1, d + 1))) for _ in range(m)]
    family = []
    for held in memberships:
        hs = []
        for _ in range(rng.randint(d + 1, d + 3)):
            a = _random_normal(rng, d)
            b = max(sum(x * y for x, y in zip(a, anchors[j])) for j in held)
            hs.append(Halfspace(tuple(a), b + rng.choice((0, 0, 1, Fraction(1, 2)))))
        family.append(Polytope(d, tuple(hs)))
    return family, anchors, memberships


def check_family(family, helly_number: int, anchors=(), memberships=None):
    """Test one family: ``(hypothesis_holds, full_nonempty, shortcuts)``.

    ``memberships[i]`` lists anchors known to lie in polytope ``i``; a
    subfamily sharing one is nonempty without running elimination.
    """
    shortcuts = 0

    def nonempty(idx):
        nonlocal shortcuts
        if memberships is not None:
            common = set(memberships[idx[0]])
            for i in idx[1:]:
                common &= set(memberships[i])
            for j in sorted(common):
                if all(family[i].contains(anchors[j]) for i in idx):
                    shortcuts += 1
                    return True
        return intersection_point([family[i] for i in idx]) is not None

    n = len(family)
    k = min(helly_number, n)
    hypothesis = all(nonempty(c) for c in combinations(range(n), k))
    full = nonempty(tuple(range(n))) if hypothesis else None
    return hypothesis, full, shortcuts


def pairwise_only_counterexample():
    """Three halfplanes ``x >= 0``, ``y >= 0``, ``x + y <= -1`` in the plane.

    Any two meet, all three do not.
    """
    return [
        Polytope(2, (Halfspace((-1, 0), 0),)),
        Polytope(2, (Halfspace((0, -1), 0),)),
        Polytope(2, (Halfspace((1, 1), -1),)),
    ]


def _describe_family(family):
    return [[str(h) for h in p.halfspaces] for p in family]


def helly_harness(
    d: int,
    trials: int,
    seed: int,
    helly_number: int | None = None,
    seed_families=(),
) -> HellyStats:
    """Random families in dimension ``d``; count families where every
    ``helly_number``-subfamily meets but the whole family does not.

    ``helly_number`` defaults to ``d + 1``; ``seed_families`` are tested
    before the random ones.
    """
    if d not in (1, 2, 3):
        raise ValueError("harness dimension must be 1, 2 or 3")
    h = d + 1 if helly_number is None else helly_number
    stats = HellyStats(d, trials, seed, h)

    def record(family, anchors=(), memberships=None):
        hyp, full, shortcuts = check_family(family, h, anchors, memberships)
        stats.families += 1
        stats.anchor_shortcuts += shortcuts
        if hyp:
            stats.hypothesis_satisfied += 1
            if not full:
                stats.violations += 1
                if stats.first_violation is None:
                    stats.first_violation = _describe_family(family)

    for fam in seed_families:
        record(list(fam))
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        family, anchors, memberships = random_family(rng, d)
        record(family, anchors, memberships)
    return stats
