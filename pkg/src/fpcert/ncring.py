"""Matrices over the free associative ring Z<x_1, ..., x_k>.

An identity between such matrices that holds here holds after
substituting elements of *any* associative ring with identity, so one
symbolic check certifies a statement for every ring at once.
"""

from __future__ import annotations

import re
from itertools import product as _cartesian

from fpcert import exprs

_VAR = re.compile(r"[A-Za-z][0-9]*")


def _monomial_order(m):
    return (len(m), m)


class NcPoly:
    """Noncommutative polynomial with integer coefficients.

    ``terms`` maps monomials (tuples of variable names, ``()`` for 1) to
    nonzero ints.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            if c:
                clean[tuple(mono)] = clean.get(tuple(mono), 0) + int(c)
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def const(cls, c: int) -> NcPoly:
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> NcPoly:
        if not _VAR.fullmatch(name):
            raise ValueError(f"bad indeterminate name {name!r}")
        return cls({(name,): 1})

    @classmethod
    def parse(cls, text: str) -> NcPoly:
        """Parse integer combinations of juxtaposed names, e.g. ``2rs - sr + 1``."""
        s = text.replace(" ", "")
        if not re.fullmatch(r"([+-]?[^+-]+)+", s):
            raise exprs.ExpressionError(f"bad polynomial {text!r}")
        terms: dict[tuple, int] = {}
        for m in re.finditer(r"([+-]?)([^+-]+)", s):
            sign = -1 if m.group(1) == "-" else 1
            body = m.group(2)
            cm = re.match(r"\d+", body)
            coef = int(cm.group()) if cm else 1
            rest = body[cm.end():] if cm else body
            names = _VAR.findall(rest)
            if "".join(names) != rest:
                raise exprs.ExpressionError(f"bad polynomial term {body!r}")
            mono = tuple(names)
            terms[mono] = terms.get(mono, 0) + sign * coef
        return cls(terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(): 1}

    def variables(self) -> set[str]:
        return {v for m in self.terms for v in m}

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return NcPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.terms or not other.terms:
            return _ZERO
        if self.is_one():
            return other
        if other.is_one():
            return self
        out: dict[tuple, int] = {}
        for (m1, c1), (m2, c2) in _cartesian(self.terms.items(), other.terms.items()):
            m = m1 + m2
            out[m] = out.get(m, 0) + c1 * c2
        return NcPoly(out)

    def __rmul__(self, other):
        return _coerce(other) * self

    def __eq__(self, other):
        if isinstance(other, int):
            other = NcPoly.const(other)
        return isinstance(other, NcPoly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_monomial_order):
            c = self.terms[m]
            body = "".join(m)
            mag = abs(c)
            coef = str(mag) if (mag != 1 or not body) else ""
            parts.append(("-" if c < 0 else "+") + coef + body)
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    def __repr__(self):
        return f"NcPoly({str(self)!r})"


_ZERO = NcPoly()
_ONE = NcPoly.const(1)


def _coerce(x) -> NcPoly:
    if isinstance(x, NcPoly):
        return x
    if isinstance(x, int):
        return NcPoly.const(x)
    if isinstance(x, str):
        return NcPoly.parse(x)
    raise TypeError(f"cannot use {type(x).__name__} as a ring element")


def nc_normalize(tree) -> NcPoly:
    """Normal form of an expression tree.

    Leaves are ints (constants) and strings (indeterminates).  Inner nodes
    are tuples ``("+", a, b, ...)``, ``("*", a, b, ...)`` (factor order
    kept), ``("-", a)`` for negation and ``("-", a, b)`` for subtraction.
    """
    if isinstance(tree, NcPoly):
        return tree
    if isinstance(tree, bool):
        raise TypeError("booleans are not ring elements")
    if isinstance(tree, int):
        return NcPoly.const(tree)
    if isinstance(tree, str):
        return NcPoly.var(tree)
    op, *args = tree
    vals = [nc_normalize(a) for a in args]
    if op == "+":
        out = _ZERO
        for v in vals:
            out = out + v
        return out
    if op == "*":
        out = _ONE
        for v in vals:
            out = out * v
        return out
    if op == "-" and len(vals) == 1:
        return -vals[0]
    if op == "-" and len(vals) == 2:
        return vals[0] - vals[1]
    raise ValueError(f"bad expression node {tree!r}")


# -- matrices ----------------------------------------------------------------


class RingMatrix:
    """Square matrix over ``NcPoly``, optionally paired with a known inverse."""

    __slots__ = ("n", "rows", "_inv", "_hash")

    def __init__(self, rows, inverse: RingMatrix | None = None):
        rows = tuple(tuple(_coerce(x) for x in row) for row in rows)
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        self.n = n
        self.rows = rows
        self._inv = None
        self._hash = None
        if inverse is not None:
            self._link(inverse)

    def _link(self, inv: RingMatrix):
        if inv.n != self.n:
            raise ValueError("inverse size mismatch")
        self._inv = inv
        inv._inv = self

    @property
    def has_inverse(self) -> bool:
        return self._inv is not None

    def inverse(self) -> RingMatrix:
        if self._inv is None:
            raise ValueError("no inverse expression is known for this matrix")
        return self._inv

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        return mat_mul(self, other)

    __mul__ = __matmul__

    def __eq__(self, other):
        return isinstance(other, RingMatrix) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def key(self):
        return self.rows

    def is_identity(self) -> bool:
        return all(
            (x.is_one() if i == j else x.is_zero())
            for i, row in enumerate(self.rows)
            for j, x in enumerate(row)
        )

    def describe(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.rows]

    def __repr__(self):
        return "RingMatrix(" + repr(self.describe()) + ")"


def _product(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    n = a.n
    bt = list(zip(*b.rows))
    rows = []
    for i in range(n):
        ra = a.rows[i]
        row = []
        for j in range(n):
            acc = _ZERO
            for x, y in zip(ra, bt[j]):
                if x.terms and y.terms:
                    acc = acc + x * y
            row.append(acc)
        rows.append(row)
    return RingMatrix(rows)


def mat_mul(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    if a.n != b.n:
        raise ValueError("size mismatch")
    out = _product(a, b)
    if a.has_inverse and b.has_inverse:
        out._link(_product(b.inverse(), a.inverse()))
    return out


def commutator(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    """``a b a^-1 b^-1``, using the tracked inverses."""
    return mat_mul(mat_mul(a, b), mat_mul(a.inverse(), b.inverse()))


def _raw(n, entries, fill=0):
    rows = [[fill] * n for _ in range(n)]
    for (i, j), x in entries.items():
        rows[i][j] = x
    return rows


def identity(n: int) -> RingMatrix:
    rows = _raw(n, {(k, k): 1 for k in range(n)})
    m = RingMatrix(rows)
    m._link(m)
    return m


def elementary(i: int, j: int, r, n: int) -> RingMatrix:
    """``e_ij(r)``: 1s on the diagonal, ``r`` at (i, j) (1-based)."""
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise ValueError(f"elementary matrix needs 1 <= i != j <= n, got ({i},{j}) n={n}")
    r = _coerce(r)
    diag = {(k, k): 1 for k in range(n)}

    def build(x):
        e = dict(diag)
        e[(i - 1, j - 1)] = x
        return RingMatrix(_raw(n, e))

    return RingMatrix(build(r).rows, inverse=build(-r))


def sign_diag(signs) -> RingMatrix:
    signs = [int(s) for s in signs]
    if not signs or any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be a nonempty sequence of +1/-1")
    m = RingMatrix(_raw(len(signs), {(k, k): s for k, s in enumerate(signs)}))
    m._link(m)
    return m


def scalar(c: int, n: int) -> RingMatrix:
    """``c I_n``; only ``c = +-1`` carries an inverse."""
    m = RingMatrix(_raw(n, {(k, k): c for k in range(n)}))
    if c in (1, -1):
        m._link(m)
    return m


def _perm_map(perm, n):
    """Normalise a cycle (tuple of 1-based points) or a dict to a full map."""
    if isinstance(perm, dict):
        mapping = {int(k): int(v) for k, v in perm.items()}
    else:
        cyc = [int(x) for x in perm]
        if len(set(cyc)) != len(cyc):
            raise ValueError(f"repeated point in cycle {perm!r}")
        mapping = {a: b for a, b in zip(cyc, cyc[1:] + cyc[:1])}
    full = {k: mapping.get(k, k) for k in range(1, n + 1)}
    if sorted(full.values()) != list(range(1, n + 1)) or set(mapping) - set(full):
        raise ValueError(f"{perm!r} is not a permutation of 1..{n}")
    return full


def permutation(perm, n: int) -> RingMatrix:
    """Matrix sending ``e_j`` to ``e_perm(j)``; ``perm`` is a cycle or dict."""
    full = _perm_map(perm, n)
    fwd = RingMatrix(_raw(n, {(full[j] - 1, j - 1): 1 for j in full}))
    back = RingMatrix(_raw(n, {(j - 1, full[j] - 1): 1 for j in full}))
    fwd._link(back)
    return fwd


class AugmentedMatrix:
    """Block matrix ``[[M, v], [0, 1]]`` encoding the pair ``(v, M)``.

    Products follow the semidirect law ``(v, M)(w, N) = (v + M w, M N)``.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix: RingMatrix):
        last = matrix.rows[-1]
        if any(not x.is_zero() for x in last[:-1]) or not last[-1].is_one():
            raise ValueError("last row of an augmented matrix must be (0, ..., 0, 1)")
        self.matrix = matrix

    @classmethod
    def from_blocks(cls, linear: RingMatrix, translation) -> AugmentedMatrix:
        n = linear.n
        v = [_coerce(x) for x in translation]
        if len(v) != n:
            raise ValueError("translation length must match the linear part")
        rows = [list(linear.rows[i]) + [v[i]] for i in range(n)]
        rows.append([0] * n + [1])
        m = RingMatrix(rows)
        if linear.has_inverse:
            li = linear.inverse()
            # (v, M)^-1 = (-M^-1 v, M^-1)
            w = [
                -sum((li.rows[i][k] * v[k] for k in range(n)), _ZERO) for i in range(n)
            ]
            inv_rows = [list(li.rows[i]) + [w[i]] for i in range(n)]
            inv_rows.append([0] * n + [1])
            m._link(RingMatrix(inv_rows))
        return cls(m)

    @property
    def dim(self) -> int:
        return self.matrix.n - 1

    @property
    def linear(self) -> RingMatrix:
        n = self.dim
        return RingMatrix([row[:n] for row in self.matrix.rows[:n]])

    @property
    def translation(self) -> tuple:
        return tuple(row[-1] for row in self.matrix.rows[:-1])

    def __mul__(self, other: AugmentedMatrix) -> AugmentedMatrix:
        return AugmentedMatrix(mat_mul(self.matrix, other.matrix))

    def inverse(self) -> AugmentedMatrix:
        return AugmentedMatrix(self.matrix.inverse())

    def __eq__(self, other):
        return isinstance(other, AugmentedMatrix) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def key(self):
        return self.matrix.rows


# -- expression syntax -------------------------------------------------------


def _parse_cycle(text: str):
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    pts = [p for p in re.split(r"[\s,]+", t) if p]
    try:
        return tuple(int(p) for p in pts)
    except ValueError:
        raise exprs.ExpressionError(f"bad cycle {text!r}") from None


class MatrixAlgebra(exprs.Algebra):
    """Atoms ``E(i,j,poly,n) I(n) Dg(s1,...,sn) P(cycle,n) neg(n)`` and ``id``."""

    def __init__(self, size: int | None = None):
        self.size = size

    def _check(self, m):
        if self.size is not None and m.n != self.size:
            raise exprs.ExpressionError(f"matrix of size {m.n}, expected {self.size}")
        return m

    def atom(self, name, args):
        if args is None:
            if name == "id" and self.size:
                return identity(self.size)
            raise exprs.ExpressionError(f"unknown name {name!r}")
        a = exprs.split_args(args)
        try:
            if name == "E" and len(a) == 4:
                return self._check(elementary(int(a[0]), int(a[1]), NcPoly.parse(a[2]), int(a[3])))
            if name == "I" and len(a) == 1:
                return self._check(identity(int(a[0])))
            if name == "Dg":
                return self._check(sign_diag(int(s) for s in a))
            if name == "P" and len(a) == 2:
                return self._check(permutation(_parse_cycle(a[0]), int(a[1])))
            if name == "neg" and len(a) == 1:
                return self._check(scalar(-1, int(a[0])))
        except exprs.ExpressionError:
            raise
        except ValueError as exc:
            raise exprs.ExpressionError(f"{name}({args}): {exc}") from None
        raise exprs.ExpressionError(f"unknown matrix atom {name}({args})")

    def identity(self):
        if self.size is None:
            raise exprs.ExpressionError("matrix size unknown; pass size")
        return identity(self.size)

    def mul(self, f, g):
        return mat_mul(f, g)

    def inverse(self, f):
        try:
            return f.inverse()
        except ValueError as exc:
            raise exprs.ExpressionError(str(exc)) from None


def evaluate(text: str, size: int | None = None, convention: str = "rtl", defs=None) -> RingMatrix:
    return exprs.evaluate(text, MatrixAlgebra(size), convention, defs)
