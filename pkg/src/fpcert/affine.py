"""Signed permutations plus rational translations acting on Q^n.

This is the standard action of Z^n x| ((Z/2)^n x| S_n) on Euclidean
space, used as a concrete model: compositions, exact fixed-point sets and
orthogonal projections onto them.  Arithmetic is exact throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from fpcert import _linalg, exprs


@dataclass(frozen=True)
class SignedPermutation:
    """Linear map sending ``e_j`` to ``signs[perm[j]] * e_perm[j]`` (0-based).

    Equivalently ``(L x)_i = signs[i] * x[perm^-1(i)]``.
    """

    perm: tuple
    signs: tuple

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)) or len(self.signs) != n:
            raise ValueError("not a signed permutation")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> SignedPermutation:
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def transposition(cls, i: int, j: int, n: int) -> SignedPermutation:
        p = list(range(n))
        p[i - 1], p[j - 1] = j - 1, i - 1
        return cls(tuple(p), (1,) * n)

    @classmethod
    def sign_flip(cls, i: int, n: int) -> SignedPermutation:
        s = [1] * n
        s[i - 1] = -1
        return cls(tuple(range(n)), tuple(s))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, x):
        out = [None] * self.n
        for j, xj in enumerate(x):
            out[self.perm[j]] = self.signs[self.perm[j]] * xj
        return tuple(out)

    def __mul__(self, other: SignedPermutation) -> SignedPermutation:
        # (self o other)(e_j) = self(s'_{p'j} e_{p'j})
        n = self.n
        perm = tuple(self.perm[other.perm[j]] for j in range(n))
        signs = [0] * n
        for j in range(n):
            k = other.perm[j]
            signs[self.perm[k]] = self.signs[self.perm[k]] * other.signs[k]
        return SignedPermutation(perm, tuple(signs))

    def inverse(self) -> SignedPermutation:
        n = self.n
        perm = [0] * n
        signs = [0] * n
        for j in range(n):
            perm[self.perm[j]] = j
            signs[j] = self.signs[self.perm[j]]
        return SignedPermutation(tuple(perm), tuple(signs))

    def matrix(self):
        rows = [[0] * self.n for _ in range(self.n)]
        for j in range(self.n):
            rows[self.perm[j]][j] = self.signs[self.perm[j]]
        return rows


@dataclass(frozen=True)
class AffineIsometry:
    """``x -> L x + t``: the linear part acts first, then the translation."""

    linear: SignedPermutation
    translation: tuple

    def __post_init__(self):
        t = tuple(Fraction(v) for v in self.translation)
        if len(t) != self.linear.n:
            raise ValueError("translation dimension mismatch")
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls, n: int) -> AffineIsometry:
        return cls(SignedPermutation.identity(n), (0,) * n)

    @classmethod
    def translate(cls, v) -> AffineIsometry:
        return cls(SignedPermutation.identity(len(v)), tuple(v))

    @classmethod
    def of(cls, linear: SignedPermutation) -> AffineIsometry:
        return cls(linear, (0,) * linear.n)

    @property
    def n(self) -> int:
        return self.linear.n

    def __call__(self, x):
        lx = self.linear(tuple(Fraction(v) for v in x))
        return tuple(a + b for a, b in zip(lx, self.translation))

    def __mul__(self, other: AffineIsometry) -> AffineIsometry:
        return compose_affine(self, other)

    def inverse(self) -> AffineIsometry:
        li = self.linear.inverse()
        return AffineIsometry(li, tuple(-v for v in li(self.translation)))

    def is_identity(self) -> bool:
        return self == AffineIsometry.identity(self.n)

    def key(self):
        return (self.linear.perm, self.linear.signs, self.translation)

    def describe(self) -> dict:
        return {
            "perm": [p + 1 for p in self.linear.perm],
            "signs": list(self.linear.signs),
            "translation": [str(v) for v in self.translation],
        }


def compose_affine(g: AffineIsometry, h: AffineIsometry) -> AffineIsometry:
    """``g o h``: ``(L, t)(L', t') = (L L', t + L t')``."""
    if g.n != h.n:
        raise ValueError("dimension mismatch")
    lt = g.linear(h.translation)
    return AffineIsometry(g.linear * h.linear, tuple(a + b for a, b in zip(g.translation, lt)))


@dataclass(frozen=True)
class AffineFixedSet:
    """Affine subspace ``point + span(basis)``; ``point is None`` means empty."""

    dim: int
    point: tuple | None
    basis: tuple = ()

    @property
    def empty(self) -> bool:
        return self.point is None

    def __contains__(self, p) -> bool:
        if self.point is None:
            return False
        diff = [Fraction(a) - b for a, b in zip(p, self.point)]
        if not self.basis:
            return all(d == 0 for d in diff)
        cols = list(zip(*self.basis))
        return _linalg.solve(cols, diff) is not None

    def describe(self):
        if self.point is None:
            return "empty"
        return {
            "point": [str(v) for v in self.point],
            "basis": [[str(v) for v in b] for b in self.basis],
        }


def fixed_set(gens) -> AffineFixedSet:
    """Common fixed points of ``gens``: solve ``(L_g - I) x = -t_g`` jointly."""
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one isometry")
    n = gens[0].n
    a, b = [], []
    for g in gens:
        if g.n != n:
            raise ValueError("dimension mismatch")
        m = g.linear.matrix()
        for i in range(n):
            a.append([m[i][j] - (1 if i == j else 0) for j in range(n)])
            b.append(-g.translation[i])
    sol = _linalg.solve(a, b)
    if sol is None:
        return AffineFixedSet(n, None)
    point, basis = sol
    return AffineFixedSet(n, point, tuple(basis))


def project_point(p, target: AffineFixedSet):
    """Exact orthogonal projection of ``p`` onto a nonempty affine subspace."""
    if target.point is None:
        raise ValueError("cannot project onto the empty set")
    q = target.point
    diff = [Fraction(a) - b for a, b in zip(p, q)]
    basis = target.basis
    if not basis:
        return tuple(q)
    gram = [[_linalg.dot(u, v) for v in basis] for u in basis]
    rhs = [_linalg.dot(u, diff) for u in basis]
    coeffs, _ = _linalg.solve(gram, rhs)
    return tuple(
        qi + sum((c * u[i] for c, u in zip(coeffs, basis)), Fraction(0))
        for i, qi in enumerate(q)
    )


# -- expression syntax -------------------------------------------------------


class AffineAlgebra(exprs.Algebra):
    """Atoms ``t(v1,...,vn)``, ``sg(i)``, ``p(i,j)`` and ``id`` in dimension ``dim``."""

    def __init__(self, dim: int):
        self.dim = dim

    def atom(self, name, args):
        n = self.dim
        if args is None:
            if name == "id":
                return AffineIsometry.identity(n)
            raise exprs.ExpressionError(f"unknown name {name!r}")
        a = exprs.split_args(args)
        try:
            if name == "t":
                if len(a) != n:
                    raise exprs.ExpressionError(f"t() needs {n} coordinates, got {args!r}")
                return AffineIsometry.translate([Fraction(v) for v in a])
            if name == "sg" and len(a) == 1:
                i = int(a[0])
                _check_index(i, n)
                return AffineIsometry.of(SignedPermutation.sign_flip(i, n))
            if name == "p" and len(a) == 2:
                i, j = int(a[0]), int(a[1])
                _check_index(i, n)
                _check_index(j, n)
                if i == j:
                    raise exprs.ExpressionError("p(i,j) needs i != j")
                return AffineIsometry.of(SignedPermutation.transposition(i, j, n))
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, exprs.ExpressionError):
                raise
            raise exprs.ExpressionError(f"{name}({args}): {exc}") from None
        raise exprs.ExpressionError(f"unknown affine atom {name}({args})")

    def identity(self):
        return AffineIsometry.identity(self.dim)

    def mul(self, f, g):
        return compose_affine(f, g)

    def inverse(self, f):
        return f.inverse()


def _check_index(i, n):
    if not 1 <= i <= n:
        raise exprs.ExpressionError(f"index {i} outside 1..{n}")


def evaluate(text: str, dim: int, convention: str = "rtl", defs=None) -> AffineIsometry:
    return exprs.evaluate(text, AffineAlgebra(dim), convention, defs)
