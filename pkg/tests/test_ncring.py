from __future__ import annotations

from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpcert import ncring
from fpcert.ncring import AugmentedMatrix, NcPoly, RingMatrix

VARS = ("r", "s", "x")

monomials = st.lists(st.sampled_from(VARS), max_size=3).map(tuple)
polys = st.dictionaries(monomials, st.integers(-3, 3), max_size=4).map(NcPoly)


def at_matrices(p: NcPoly, values: dict):
    """Substitute integer matrices for the indeterminates (a ring homomorphism)."""
    n = next(iter(values.values())).shape[0]
    out = np.zeros((n, n), dtype=object)
    for mono, c in p.terms.items():
        term = np.eye(n, dtype=object)
        for v in mono:
            term = term @ values[v]
        out = out + c * term
    return out


@pytest.fixture(scope="module")
def values():
    rng = np.random.default_rng(7)
    return {v: rng.integers(-3, 4, size=(2, 2)).astype(object) for v in VARS}


# -- polynomials -------------------------------------------------------------


def test_normalize_examples():
    assert ncring.nc_normalize(("*", ("+", "x", "y"), "z")) == NcPoly.parse("xz + yz")
    comm = ncring.nc_normalize(("-", ("*", "x", "y"), ("*", "y", "x")))
    assert len(comm.terms) == 2 and not comm.is_zero()
    assert ncring.nc_normalize(("+", ("*", "x", 1), 0)) == NcPoly.var("x")


@pytest.mark.parametrize(
    "text, terms",
    [
        ("r+s", {("r",): 1, ("s",): 1}),
        ("2rs - sr + 1", {("r", "s"): 2, ("s", "r"): -1, (): 1}),
        ("-x", {("x",): -1}),
        ("r1r2", {("r1", "r2"): 1}),
        ("x - x", {}),
    ],
)
def test_parse(text, terms):
    assert NcPoly.parse(text).terms == terms


@pytest.mark.parametrize("bad", ["", "r++s", "2*r", "r^2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        NcPoly.parse(bad)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a - a == NcPoly()
    assert a * NcPoly.const(1) == a


@settings(max_examples=50)
@given(polys, polys)
def test_product_matches_matrix_substitution(a, b):
    rng = np.random.default_rng(11)
    vals = {v: rng.integers(-3, 4, size=(3, 3)).astype(object) for v in VARS}
    assert (at_matrices(a * b, vals) == at_matrices(a, vals) @ at_matrices(b, vals)).all()
    assert (at_matrices(a + b, vals) == at_matrices(a, vals) + at_matrices(b, vals)).all()


def test_noncommutative():
    assert NcPoly.parse("rs") != NcPoly.parse("sr")


# -- matrices ----------------------------------------------------------------


def E(i, j, r, n=4):
    return ncring.elementary(i, j, r, n)


def test_builders():
    e = E(1, 3, "x", 3)
    assert e[0, 2] == NcPoly.var("x")
    assert all(e[k, k] == NcPoly.const(1) for k in range(3))
    assert sum(not e[i, j].is_zero() for i in range(3) for j in range(3)) == 4
    d = ncring.sign_diag([-1, 1])
    assert d.describe() == [["-1", "0"], ["0", "1"]]
    assert ncring.permutation((1, 2), 2).describe() == [["0", "1"], ["1", "0"]]


def test_five_factor_identity():
    m = ncring.evaluate("E(1,2,1,2) E(2,1,-1,2) E(1,2,2,2) E(2,1,-1,2) E(1,2,1,2)")
    assert m == ncring.sign_diag([-1, -1])


def test_examples_from_commutator_laws():
    assert ncring.mat_mul(E(1, 2, "r"), E(1, 2, "s")) == E(1, 2, "r+s")
    assert ncring.commutator(E(1, 2, "r"), E(2, 3, "s")) == E(1, 3, "rs")
    assert ncring.commutator(E(1, 2, "r"), E(3, 4, "s")) == ncring.identity(4)
    a = E(2, 4, "x")
    assert ncring.commutator(a, a).is_identity()
    assert ncring.mat_mul(a, ncring.identity(4)) == a


@pytest.mark.parametrize("i,j,k", list(permutations(range(1, 5), 3)))
def test_commutator_chain_every_index(i, j, k):
    assert ncring.commutator(E(i, j, "r"), E(j, k, "s")) == E(i, k, "rs")


def test_commutator_needs_inverse():
    two = ncring.scalar(2, 2)
    with pytest.raises(ValueError):
        ncring.commutator(two, ncring.identity(2))


def test_tracked_inverses():
    for m in (E(1, 4, "2rs - x"), ncring.permutation((1, 3, 4), 4), ncring.sign_diag([1, -1, -1, 1])):
        assert ncring.mat_mul(m, m.inverse()).is_identity()
        assert ncring.mat_mul(m.inverse(), m).is_identity()


@settings(max_examples=30)
@given(polys, polys, polys)
def test_matrix_product_associative(a, b, c):
    x = RingMatrix([[a, b], [0, 1]])
    y = RingMatrix([[1, c], [b, a]])
    z = RingMatrix([[c, 0], [a, b]])
    assert ncring.mat_mul(ncring.mat_mul(x, y), z) == ncring.mat_mul(x, ncring.mat_mul(y, z))


# -- semidirect blocks -------------------------------------------------------


@settings(max_examples=30)
@given(st.lists(polys, min_size=2, max_size=2), st.lists(polys, min_size=2, max_size=2))
def test_block_product_follows_semidirect_law(v, w):
    m = E(1, 2, "x", 2)
    n = ncring.permutation((1, 2), 2)
    a = AugmentedMatrix.from_blocks(m, v)
    b = AugmentedMatrix.from_blocks(n, w)
    ab = a * b
    assert ab.linear == ncring.mat_mul(m, n)
    expected = [v[i] + sum((m[i, k] * w[k] for k in range(2)), NcPoly()) for i in range(2)]
    assert list(ab.translation) == expected
    assert (a * a.inverse()).matrix.is_identity()


def test_augmented_rejects_bad_last_row():
    with pytest.raises(ValueError):
        AugmentedMatrix(RingMatrix([[1, 0], [1, 1]]))


@pytest.mark.parametrize(
    "expr, size",
    [("E(1,1,x,3)", 3), ("E(1,4,x,3)", 3), ("P((1,2),2)", 3), ("Dg(1,2)", 2),
     ("neg(2) neg(3)", None), ("frob(2)", 2)],
)
def test_bad_matrix_expressions(expr, size):
    with pytest.raises(ValueError):
        ncring.evaluate(expr, size)
