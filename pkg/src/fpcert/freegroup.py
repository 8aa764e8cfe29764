"""Exact computation in Aut(F_n).

Words are stored freely reduced as tuples of nonzero ints (``+i`` for
``a_i``, ``-i`` for its inverse).  An automorphism keeps the basis images
of itself *and* of its inverse; inverses are only ever known because every
automorphism is built from generators whose inverses are explicit.
Composition follows function notation: ``f * g`` is ``f o g``, so ``g``
acts first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from fpcert import exprs, kernels

_LETTER = re.compile(r"\s*([ax])(\d+)\s*(?:\^\s*([+-]?\d+))?\s*")


class FreeWord:
    """A freely reduced word in the basis ``a_1, ..., a_n``."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        self.letters = kernels.reduce_word(tuple(int(a) for a in letters))
        if any(a == 0 for a in self.letters):
            raise ValueError("letter 0 is not a generator")

    @classmethod
    def parse(cls, text: str) -> FreeWord:
        """Parse ``"x1 x3^-1"`` (``a`` may be used in place of ``x``)."""
        text = text.strip()
        if text in ("", "1", "e"):
            return cls()
        letters = []
        pos = 0
        while pos < len(text):
            m = _LETTER.match(text, pos)
            if not m or m.end() == pos:
                raise exprs.ExpressionError(f"bad word {text!r}")
            gen = int(m.group(2))
            if gen < 1:
                raise exprs.ExpressionError(f"bad generator index in {text!r}")
            power = int(m.group(3)) if m.group(3) else 1
            letters.extend([gen if power > 0 else -gen] * abs(power))
            pos = m.end()
        return cls(letters)

    def inverse(self) -> FreeWord:
        return FreeWord(-a for a in reversed(self.letters))

    def __mul__(self, other: FreeWord) -> FreeWord:
        return FreeWord(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def max_index(self) -> int:
        return max((abs(a) for a in self.letters), default=0)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in self.letters)

    def __repr__(self):
        return f"FreeWord({str(self)!r})"


def _word(w) -> FreeWord:
    if isinstance(w, FreeWord):
        return w
    if isinstance(w, str):
        return FreeWord.parse(w)
    return FreeWord(w)


# -- generator symbols -------------------------------------------------------


@dataclass(frozen=True)
class RightMultiply:
    """rho_ij: a_i -> a_i a_j."""

    i: int
    j: int

    def indices(self):
        return (self.i, self.j)

    def images(self, rank, inverse=False):
        out = _basis(rank)
        out[self.i - 1] = (self.i, -self.j if inverse else self.j)
        return out

    def __str__(self):
        return f"r({self.i},{self.j})"


@dataclass(frozen=True)
class LeftMultiply:
    """lambda_ij: a_i -> a_j a_i."""

    i: int
    j: int

    def indices(self):
        return (self.i, self.j)

    def images(self, rank, inverse=False):
        out = _basis(rank)
        out[self.i - 1] = (-self.j if inverse else self.j, self.i)
        return out

    def __str__(self):
        return f"l({self.i},{self.j})"


@dataclass(frozen=True)
class Invert:
    i: int

    def indices(self):
        return (self.i,)

    def images(self, rank, inverse=False):
        out = _basis(rank)
        out[self.i - 1] = (-self.i,)
        return out

    def __str__(self):
        return f"e({self.i})"


@dataclass(frozen=True)
class Swap:
    i: int
    j: int

    def indices(self):
        return (self.i, self.j)

    def images(self, rank, inverse=False):
        out = _basis(rank)
        out[self.i - 1], out[self.j - 1] = (self.j,), (self.i,)
        return out

    def __str__(self):
        return f"s({self.i},{self.j})"


@dataclass(frozen=True)
class RightMultiplyWord:
    """rho_{i,w}: a_i -> a_i w, where w avoids a_i."""

    i: int
    word: FreeWord

    def indices(self):
        return (self.i,)

    def check(self):
        if any(abs(a) == self.i for a in self.word.letters):
            raise ValueError(f"word {self.word} must not involve x{self.i}")

    def images(self, rank, inverse=False):
        self.check()
        w = self.word.inverse() if inverse else self.word
        out = _basis(rank)
        out[self.i - 1] = kernels.reduce_word((self.i,) + w.letters)
        return out

    def __str__(self):
        return f'rw({self.i},"{self.word}")'


@dataclass(frozen=True)
class WordConjugator:
    """Simultaneous right multiplications x_k -> x_k w_k^{sign_k}.

    The words may not involve any of the modified generators, which makes
    the inverse the same map with every sign flipped.
    """

    pairs: tuple  # of (index, FreeWord, sign)

    def indices(self):
        return tuple(k for k, _, _ in self.pairs)

    def check(self):
        ks = [k for k, _, _ in self.pairs]
        if len(set(ks)) != len(ks):
            raise ValueError("conjugator indices must be distinct")
        for _, w, sign in self.pairs:
            if sign not in (1, -1):
                raise ValueError("conjugator signs must be +1 or -1")
            if any(abs(a) in ks for a in w.letters):
                raise ValueError(f"word {w} involves a modified generator")

    def images(self, rank, inverse=False):
        self.check()
        out = _basis(rank)
        for k, w, sign in self.pairs:
            s = -sign if inverse else sign
            piece = w if s > 0 else w.inverse()
            out[k - 1] = kernels.reduce_word((k,) + piece.letters)
        return out

    def __str__(self):
        body = "; ".join(f'{k},"{w}",{s}' for k, w, s in self.pairs)
        return f"conj({body})"


GeneratorSymbol = RightMultiply | LeftMultiply | Invert | Swap | RightMultiplyWord | WordConjugator


def _basis(rank):
    return [(i,) for i in range(1, rank + 1)]


# -- automorphisms -----------------------------------------------------------


class FreeAutomorphism:
    """An automorphism of F_rank given by basis images, with its inverse."""

    __slots__ = ("rank", "images", "inv", "label")

    def __init__(self, rank, images, inv, label="?"):
        self.rank = rank
        self.images = tuple(tuple(w) for w in images)
        self.inv = tuple(tuple(w) for w in inv)
        self.label = label

    def __mul__(self, other: FreeAutomorphism) -> FreeAutomorphism:
        return compose(self, other)

    def __call__(self, w) -> FreeWord:
        return apply(self, w)

    def inverse(self) -> FreeAutomorphism:
        return FreeAutomorphism(self.rank, self.inv, self.images, f"({self.label})^-1")

    def is_identity(self) -> bool:
        return all(w == (i,) for i, w in enumerate(self.images, 1))

    def total_length(self) -> int:
        return sum(len(w) for w in self.images)

    def key(self):
        return self.images

    def __eq__(self, other):
        return (
            isinstance(other, FreeAutomorphism)
            and self.rank == other.rank
            and self.images == other.images
        )

    def __hash__(self):
        return hash(self.images)

    def describe(self) -> dict:
        return {f"x{i}": str(FreeWord(w)) for i, w in enumerate(self.images, 1)}

    def __repr__(self):
        body = ", ".join(f"x{i} -> {FreeWord(w)}" for i, w in enumerate(self.images, 1))
        return f"<{self.label}: {body}>"


def identity(rank: int) -> FreeAutomorphism:
    b = _basis(rank)
    return FreeAutomorphism(rank, b, b, "id")


def make_generator(sym, rank: int) -> FreeAutomorphism:
    if rank < 1:
        raise ValueError("rank must be positive")
    idx = sym.indices()
    if any(not 1 <= k <= rank for k in idx):
        raise ValueError(f"{sym} has an index outside 1..{rank}")
    if len(set(idx)) != len(idx):
        raise ValueError(f"{sym} needs distinct indices")
    words = [w for _, w, _ in sym.pairs] if isinstance(sym, WordConjugator) else []
    if isinstance(sym, RightMultiplyWord):
        words = [sym.word]
    if any(w.max_index() > rank for w in words):
        raise ValueError(f"{sym} uses a generator outside 1..{rank}")
    return FreeAutomorphism(
        rank, sym.images(rank), sym.images(rank, inverse=True), str(sym)
    )


def apply(f: FreeAutomorphism, w) -> FreeWord:
    w = _word(w)
    if w.max_index() > f.rank:
        raise ValueError("word uses generators outside the automorphism's rank")
    return FreeWord(kernels.substitute(w.letters, f.images))


def compose(*fs: FreeAutomorphism) -> FreeAutomorphism:
    """``compose(f, g, ...)`` is ``f o g o ...``: the last argument acts first."""
    if not fs:
        raise ValueError("compose needs at least one automorphism")
    acc = fs[-1]
    for f in reversed(fs[:-1]):
        if f.rank != acc.rank:
            raise ValueError("rank mismatch")
        acc = FreeAutomorphism(
            f.rank,
            kernels.compose_images(f.images, acc.images),
            kernels.compose_images(acc.inv, f.inv),
            _join(f.label, acc.label),
        )
    return acc


def _join(a, b):
    # labels are for reporting only; keep them bounded inside long closures
    if len(a) + len(b) > 120:
        return "..."
    return f"{a} {b}"


def equal(f: FreeAutomorphism, g: FreeAutomorphism) -> bool:
    if f.rank != g.rank:
        raise ValueError("rank mismatch")
    return f.images == g.images


def order_bounded(f: FreeAutomorphism, cap: int) -> int | None:
    """Smallest ``k <= cap`` with ``f^k = id``, or ``None`` past the cap.

    Gives up early once the total length of the basis images exceeds
    ``10 * cap``; a finite-order automorphism never gets that long.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    power = f
    for k in range(1, cap + 1):
        if power.is_identity():
            return k
        if power.total_length() > 10 * cap:
            return None
        power = compose(f, power)
    return None


# -- expression syntax -------------------------------------------------------


def _ints(args, n):
    parts = exprs.split_args(args)
    if len(parts) != n:
        raise exprs.ExpressionError(f"expected {n} integer arguments, got {args!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise exprs.ExpressionError(f"non-integer argument in {args!r}") from None


def parse_symbol(name: str, args: str | None):
    if args is None:
        raise exprs.ExpressionError(f"unknown name {name!r}")
    if name == "r":
        return RightMultiply(*_ints(args, 2))
    if name == "l":
        return LeftMultiply(*_ints(args, 2))
    if name == "e":
        return Invert(*_ints(args, 1))
    if name == "s":
        return Swap(*_ints(args, 2))
    if name == "rw":
        parts = exprs.split_args(args)
        if len(parts) != 2:
            raise exprs.ExpressionError(f"rw takes (index, \"word\"), got {args!r}")
        return RightMultiplyWord(int(parts[0]), FreeWord.parse(exprs.unquote(parts[1])))
    if name == "conj":
        pairs = []
        for chunk in exprs.split_args(args, ";"):
            parts = exprs.split_args(chunk)
            if len(parts) != 3:
                raise exprs.ExpressionError(f"conj triple must be i,\"w\",sign: {chunk!r}")
            pairs.append(
                (int(parts[0]), FreeWord.parse(exprs.unquote(parts[1])), int(parts[2]))
            )
        return WordConjugator(tuple(pairs))
    raise exprs.ExpressionError(f"unknown free-group generator {name!r}")


class FreeGroupAlgebra(exprs.Algebra):
    """Expression atoms ``r l e s rw conj`` and ``id`` over Aut(F_rank)."""

    def __init__(self, rank: int):
        self.rank = rank

    def atom(self, name, args):
        if name == "id" and args is None:
            return identity(self.rank)
        try:
            return make_generator(parse_symbol(name, args), self.rank)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, exprs.ExpressionError):
                raise
            raise exprs.ExpressionError(f"{name}({args}): {exc}") from None

    def identity(self):
        return identity(self.rank)

    def mul(self, f, g):
        return compose(f, g)

    def inverse(self, f):
        return f.inverse()


def evaluate(text: str, rank: int, convention: str = "rtl", defs=None) -> FreeAutomorphism:
    return exprs.evaluate(text, FreeGroupAlgebra(rank), convention, defs)
