"""Coxeter matrices: Schläfli matrices, finite-type recognition, sphericity.

Finiteness is decided by matching each connected component of the Coxeter
graph against the catalogue of finite types.  A floating-point test of
positive definiteness of the Schläfli matrix is kept as an independent
cross-check; near-singular cases are settled exactly in Q(sqrt2, sqrt3,
sqrt5) whenever every entry lies in {1, ..., 6, inf}.

In every file format an entry of 0 stands for infinity.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

INF = 0
MAX_SPHERICITY_RANK = 12
MINOR_TOL = 1e-9

POSITIVE_DEFINITE = "positive-definite"
NOT_POSITIVE_DEFINITE = "not"
INDETERMINATE = "indeterminate"

EXACT_ENTRIES = frozenset({1, 2, 3, 4, 5, 6, INF})


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric Coxeter matrix; ``entries[i][j] == 0`` encodes infinity.

    A diagonal of 2s is accepted and rewritten to 1s with a warning;
    ``normalized`` records that it happened.
    """

    entries: tuple
    normalized: bool = field(default=False, compare=False)

    def __post_init__(self):
        rows = [list(int(x) for x in row) for row in self.entries]
        k = len(rows)
        if k < 1 or any(len(r) != k for r in rows):
            raise ValueError("Coxeter matrix must be square and nonempty")
        fixed = False
        for i in range(k):
            if rows[i][i] == 2:
                rows[i][i] = 1
                fixed = True
            elif rows[i][i] != 1:
                raise ValueError(f"diagonal entry m[{i}][{i}] must be 1")
        for i in range(k):
            for j in range(i + 1, k):
                a, b = rows[i][j], rows[j][i]
                if a != b:
                    raise ValueError(f"matrix not symmetric at ({i},{j})")
                if a != INF and a < 2:
                    raise ValueError(f"off-diagonal entry ({i},{j}) must be >= 2 or 0 (inf)")
        if fixed:
            warnings.warn("Coxeter matrix had m_ii = 2; normalised to 1", stacklevel=3)
        object.__setattr__(self, "entries", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "normalized", self.normalized or fixed)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def m(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def submatrix(self, idx) -> CoxeterMatrix:
        idx = list(idx)
        return CoxeterMatrix(tuple(tuple(self.entries[i][j] for j in idx) for i in idx))

    def permuted(self, perm) -> CoxeterMatrix:
        """Simultaneous row/column permutation: new ``(i, j)`` is old ``(perm[i], perm[j])``."""
        return self.submatrix(perm)

    @classmethod
    def from_edges(cls, rank: int, edges: dict) -> CoxeterMatrix:
        """Build from ``{(i, j): m_ij}`` (0-based); unlisted pairs commute."""
        rows = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
        for (i, j), v in edges.items():
            rows[i][j] = rows[j][i] = v
        return cls(tuple(map(tuple, rows)))

    @classmethod
    def path(cls, labels) -> CoxeterMatrix:
        """Path graph whose consecutive edges carry ``labels``."""
        labels = list(labels)
        return cls.from_edges(len(labels) + 1, {(i, i + 1): m for i, m in enumerate(labels)})

    @classmethod
    def cycle(cls, k: int, label: int = 3) -> CoxeterMatrix:
        if k < 3:
            raise ValueError("a cycle needs at least 3 vertices")
        return cls.from_edges(k, {(i, (i + 1) % k): label for i in range(k)})

    def to_json(self) -> dict:
        return {"rank": self.rank, "m": [list(r) for r in self.entries]}

    @classmethod
    def from_json(cls, data) -> CoxeterMatrix:
        if isinstance(data, str):
            data = json.loads(data)
        m = cls(tuple(tuple(r) for r in data["m"]))
        if "rank" in data and data["rank"] != m.rank:
            raise ValueError(f"rank {data['rank']} does not match a {m.rank}x{m.rank} matrix")
        return m


@dataclass(frozen=True)
class CoxeterGraph:
    vertices: tuple
    edges: dict  # (i, j) with i < j -> label (0 for infinity)

    def neighbours(self, v):
        return [b if a == v else a for (a, b) in self.edges if v in (a, b)]


def coxeter_graph(m: CoxeterMatrix) -> CoxeterGraph:
    edges = {}
    for i in range(m.rank):
        for j in range(i + 1, m.rank):
            x = m.m(i, j)
            if x == INF or x >= 3:
                edges[(i, j)] = x
    return CoxeterGraph(tuple(range(m.rank)), edges)


# -- exact arithmetic in Q(sqrt2, sqrt3, sqrt5) -------------------------------

# the field is built as a tower: level k adjoins sqrt(_RADICANDS[k-1]) to
# level k - 1, and an element at level k is a pair (a, b) meaning
# a + b sqrt(d) with a, b at level k - 1; level 0 is Fraction
_RADICANDS = (2, 3, 5)
_TOP = len(_RADICANDS)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _zero(k):
    z = Fraction(0)
    for _ in range(k):
        z = (z, z)
    return z


def _add(x, y, k):
    if k == 0:
        return x + y
    return (_add(x[0], y[0], k - 1), _add(x[1], y[1], k - 1))


def _neg(x, k):
    if k == 0:
        return -x
    return (_neg(x[0], k - 1), _neg(x[1], k - 1))


def _scale(x, c, k):
    if k == 0:
        return x * c
    return (_scale(x[0], c, k - 1), _scale(x[1], c, k - 1))


def _mul(x, y, k):
    if k == 0:
        return x * y
    a, b = x
    c, e = y
    d = _RADICANDS[k - 1]
    return (
        _add(_mul(a, c, k - 1), _scale(_mul(b, e, k - 1), d, k - 1), k - 1),
        _add(_mul(a, e, k - 1), _mul(b, c, k - 1), k - 1),
    )


def _norm(x, k):
    """``a^2 - d b^2`` at level ``k - 1``; zero only when ``x`` is zero."""
    a, b = x
    d = _RADICANDS[k - 1]
    return _add(_mul(a, a, k - 1), _neg(_scale(_mul(b, b, k - 1), d, k - 1), k - 1), k - 1)


def _inv(x, k):
    if k == 0:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x
    ni = _inv(_norm(x, k), k - 1)
    return (_mul(x[0], ni, k - 1), _neg(_mul(x[1], ni, k - 1), k - 1))


def _sgn(x, k) -> int:
    if k == 0:
        return _sign(x)
    sa, sb = _sgn(x[0], k - 1), _sgn(x[1], k - 1)
    if sb == 0 or sa == sb:
        return sa or sb
    if sa == 0:
        return sb
    # opposite signs: compare a^2 with d b^2
    return sa * _sgn(_norm(x, k), k - 1)


def _float(x, k) -> float:
    if k == 0:
        return float(x)
    return _float(x[0], k - 1) + _float(x[1], k - 1) * math.sqrt(_RADICANDS[k - 1])


@dataclass(frozen=True)
class Surd:
    """Exact element of Q(sqrt2, sqrt3, sqrt5)."""

    v: tuple

    @classmethod
    def rational(cls, x) -> Surd:
        v = Fraction(x)
        for k in range(_TOP):
            v = (v, _zero(k))
        return cls(v)

    @classmethod
    def root(cls, d: int, coef=1) -> Surd:
        """``coef * sqrt(d)`` for ``d`` one of the adjoined radicands."""
        level = _RADICANDS.index(d) + 1
        v = (_zero(level - 1), _scale(_one_at(level - 1), Fraction(coef), level - 1))
        for k in range(level, _TOP):
            v = (v, _zero(k))
        return cls(v)

    def __add__(self, o):
        return Surd(_add(self.v, o.v, _TOP))

    def __sub__(self, o):
        return Surd(_add(self.v, _neg(o.v, _TOP), _TOP))

    def __neg__(self):
        return Surd(_neg(self.v, _TOP))

    def __mul__(self, o):
        return Surd(_mul(self.v, o.v, _TOP))

    def __truediv__(self, o):
        return self * o.inverse()

    def inverse(self):
        return Surd(_inv(self.v, _TOP))

    def sign(self) -> int:
        return _sgn(self.v, _TOP)

    def is_zero(self) -> bool:
        return self.v == _zero(_TOP)

    def __float__(self):
        return _float(self.v, _TOP)


def _one_at(k):
    v = Fraction(1)
    for j in range(k):
        v = (v, _zero(j))
    return v


_HALF = Fraction(1, 2)
# -cos(pi / m) for the entries with a closed form in the tower
_EXACT_COS = {
    1: Surd.rational(1),
    2: Surd.rational(0),
    3: Surd.rational(-_HALF),
    4: Surd.root(2, -_HALF),
    5: Surd.rational(Fraction(-1, 4)) + Surd.root(5, Fraction(-1, 4)),
    6: Surd.root(3, -_HALF),
    INF: Surd.rational(-1),
}


@dataclass(frozen=True)
class SchlafliMatrix:
    """``c_ij = -cos(pi / m_ij)`` (``-1`` for infinity), as floats and, when
    every entry has a closed form, exactly."""

    numeric: np.ndarray = field(compare=False)
    exact: tuple | None = None

    @property
    def rank(self) -> int:
        return self.numeric.shape[0]


def _neg_cos(m: int) -> float:
    if m == INF:
        return -1.0
    return -math.cos(math.pi / m)


def schlafli_matrix(m: CoxeterMatrix) -> SchlafliMatrix:
    k = m.rank
    num = np.array([[_neg_cos(m.m(i, j)) for j in range(k)] for i in range(k)])
    exact = None
    if all(x in EXACT_ENTRIES for row in m.entries for x in row):
        exact = tuple(tuple(_EXACT_COS[m.m(i, j)] for j in range(k)) for i in range(k))
    return SchlafliMatrix(num, exact)


def exact_pivots(rows) -> list[Surd]:
    """Pivots of Gaussian elimination without row swaps.

    The k-th leading principal minor is the product of the first k
    pivots.  Elimination stops after the first zero pivot, since every
    later minor is then undefined for positive-definiteness purposes.
    """
    a = [list(r) for r in rows]
    n = len(a)
    pivots = []
    for k in range(n):
        piv = a[k][k]
        pivots.append(piv)
        if piv.is_zero():
            break
        inv = piv.inverse()
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f.is_zero():
                continue
            for j in range(k, n):
                a[i][j] = a[i][j] - f * a[k][j]
    return pivots


@dataclass(frozen=True)
class NumericVerdict:
    verdict: str
    minors: tuple
    resolved_exactly: bool = False


def numeric_finiteness_oracle(m: CoxeterMatrix, tol: float = MINOR_TOL) -> NumericVerdict:
    """Positive-definiteness of the Schläfli matrix via leading principal minors."""
    s = schlafli_matrix(m)
    minors = tuple(float(np.linalg.det(s.numeric[:k, :k])) for k in range(1, m.rank + 1))
    for d in minors:
        if d > tol:
            continue
        if d < -tol:
            return NumericVerdict(NOT_POSITIVE_DEFINITE, minors)
        if s.exact is None:
            return NumericVerdict(INDETERMINATE, minors)
        pivots = exact_pivots(s.exact)
        ok = len(pivots) == m.rank and all(p.sign() > 0 for p in pivots)
        return NumericVerdict(
            POSITIVE_DEFINITE if ok else NOT_POSITIVE_DEFINITE, minors, True
        )
    return NumericVerdict(POSITIVE_DEFINITE, minors)


# -- finite-type catalogue ---------------------------------------------------


@dataclass(frozen=True)
class ClassificationResult:
    components: tuple  # of (vertex tuple, label); label "Infinite" if not finite

    @property
    def finite(self) -> bool:
        return all(label != "Infinite" for _, label in self.components)

    @property
    def labels(self) -> tuple:
        return tuple(label for _, label in self.components)

    def __str__(self):
        if not self.finite:
            return "Infinite"
        return " x ".join(self.labels)


def _components(g: CoxeterGraph):
    seen = set()
    out = []
    for v in g.vertices:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in g.neighbours(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(tuple(sorted(comp)))
    return out


def _label_component(comp, g: CoxeterGraph) -> str:
    k = len(comp)
    edges = {e: lab for e, lab in g.edges.items() if e[0] in comp}
    if k == 1:
        return "A1"
    if any(lab == INF for lab in edges.values()):
        return "Infinite"
    if k == 2:
        (lab,) = edges.values()
        return {3: "A2", 4: "B2"}.get(lab, f"I2({lab})")
    if len(edges) != k - 1:
        return "Infinite"  # contains a cycle
    deg = {v: 0 for v in comp}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    if max(deg.values()) > 3:
        return "Infinite"
    branch = [v for v in comp if deg[v] == 3]
    heavy = {e: lab for e, lab in edges.items() if lab > 3}
    if len(branch) > 1:
        return "Infinite"
    if branch:
        if heavy:
            return "Infinite"
        c = branch[0]
        arms = []
        for start in g.neighbours(c):
            length, prev, cur = 1, c, start
            while deg[cur] == 2:
                nxt = next(y for y in g.neighbours(cur) if y != prev)
                prev, cur = cur, nxt
                length += 1
            arms.append(length)
        arms = tuple(sorted(arms))
        if arms[:2] == (1, 1):
            return f"D{k}"
        return {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}.get(arms, "Infinite")
    # a path: walk it from one end
    end = next(v for v in comp if deg[v] == 1)
    order, prev = [end], None
    while len(order) < k:
        cur = order[-1]
        nxt = next(y for y in g.neighbours(cur) if y != prev)
        prev = cur
        order.append(nxt)
    labels = [edges[tuple(sorted((order[i], order[i + 1])))] for i in range(k - 1)]
    if not heavy:
        return f"A{k}"
    if len(heavy) > 1:
        return "Infinite"
    (pos,) = [i for i, lab in enumerate(labels) if lab > 3]
    lab = labels[pos]
    at_end = pos in (0, k - 2)
    if lab == 4 and at_end:
        return f"B{k}"
    if lab == 4 and k == 4 and pos == 1:
        return "F4"
    if lab == 5 and at_end and k in (3, 4):
        return f"H{k}"
    return "Infinite"


def classify(m: CoxeterMatrix) -> ClassificationResult:
    g = coxeter_graph(m)
    return ClassificationResult(tuple((c, _label_component(c, g)) for c in _components(g)))


def is_finite(m: CoxeterMatrix) -> bool:
    return classify(m).finite


@dataclass(frozen=True)
class Sphericity:
    """Largest ``level`` such that every ``level + 1`` generators span a finite
    group; ``full`` when the whole group is finite (then ``level = rank - 1``)."""

    level: int
    full: bool

    def describe(self):
        return "full rank" if self.full else self.level


def sphericity(m: CoxeterMatrix) -> Sphericity:
    k = m.rank
    if k > MAX_SPHERICITY_RANK:
        raise ValueError(f"rank {k} exceeds the sphericity limit {MAX_SPHERICITY_RANK}")
    if is_finite(m):
        return Sphericity(k - 1, True)
    for size in range(2, k):
        if not all(is_finite(m.submatrix(s)) for s in combinations(range(k), size)):
            return Sphericity(size - 2, False)
    return Sphericity(k - 2, False)
