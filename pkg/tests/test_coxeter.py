from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpcert import coxeter as cx
from fpcert.coxeter import INF, CoxeterMatrix, Surd

import oracles

path = CoxeterMatrix.path


def random_matrix(rng, rank, entries=(2, 3, 4, 5, 6, INF)):
    pairs = combinations(range(rank), 2)
    return CoxeterMatrix.from_edges(rank, {p: rng.choice(entries) for p in pairs})


matrices = st.builds(
    lambda seed, rank: random_matrix(random.Random(seed), rank),
    st.integers(0, 10**9),
    st.integers(1, 6),
)


# -- construction ------------------------------------------------------------


def test_validation():
    with pytest.raises(ValueError):
        CoxeterMatrix(((1, 3), (4, 1)))  # asymmetric
    with pytest.raises(ValueError):
        CoxeterMatrix(((1, 1), (1, 1)))  # off-diagonal 1
    with pytest.raises(ValueError):
        CoxeterMatrix(((3, 2), (2, 1)))  # bad diagonal


def test_diagonal_two_is_normalized_with_warning():
    with pytest.warns(UserWarning):
        m = CoxeterMatrix(((2, 3), (3, 2)))
    assert m.entries == ((1, 3), (3, 1))
    assert m.normalized


def test_json_roundtrip():
    m = path([4, 3, INF])
    assert CoxeterMatrix.from_json(m.to_json()) == m


# -- Schlafli matrix ---------------------------------------------------------


@pytest.mark.parametrize(
    "m, off",
    [(CoxeterMatrix(((1,),)), None), (path([3]), -0.5), (path([INF]), -1.0)],
)
def test_schlafli_examples(m, off):
    s = cx.schlafli_matrix(m).numeric
    assert s[0, 0] == 1.0
    if off is not None:
        assert s[0, 1] == pytest.approx(off, abs=1e-15)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6, INF])
def test_exact_cosines(k):
    want = -1.0 if k == INF else -math.cos(math.pi / k)
    assert float(cx._EXACT_COS[k]) == pytest.approx(want, abs=1e-15)


# -- exact surds -------------------------------------------------------------

radicals = st.tuples(
    st.fractions(max_denominator=6, min_value=-4, max_value=4),
    st.sampled_from((2, 3, 5)),
    st.fractions(max_denominator=6, min_value=-4, max_value=4),
).map(lambda t: Surd.rational(t[0]) + Surd.root(t[1], t[2]))
surds = st.lists(radicals, min_size=1, max_size=3).map(
    lambda xs: xs[0] if len(xs) == 1 else xs[0] * xs[1] + (xs[2] if len(xs) > 2 else xs[0])
)


@given(surds, surds, surds)
def test_surd_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if not a.is_zero():
        assert (a * a.inverse()) == Surd.rational(1)


@given(surds)
def test_surd_sign_matches_float(a):
    f = float(a)
    if abs(f) > 1e-9:
        assert a.sign() == (1 if f > 0 else -1)
    else:
        assert (a.sign() == 0) == a.is_zero()


def test_surd_cancellation_is_exact():
    # (1 + sqrt5)^2 - 2 sqrt5 - 6 = 0
    x = Surd.rational(1) + Surd.root(5)
    assert (x * x - Surd.root(5, 2) - Surd.rational(6)).is_zero()
    assert (Surd.root(2) * Surd.root(3) - Surd.root(2) * Surd.root(3)).is_zero()
    assert (Surd.root(2) - Surd.root(3)).sign() == -1


# -- classification ----------------------------------------------------------


@pytest.mark.parametrize(
    "m, label",
    [
        (path([3, 3]), "A3"),
        (path([4, 3]), "B3"),
        (path([3, 4, 3]), "F4"),
        (path([5, 3, 3]), "H4"),
        (path([3, 5]), "H3"),
        (path([6]), "I2(6)"),
        (path([3, 3, 3, 3]), "A5"),
        (CoxeterMatrix.from_edges(4, {(0, 1): 3, (0, 2): 3, (0, 3): 3}), "D4"),
        (CoxeterMatrix.from_edges(8, {(0, 1): 3, (1, 2): 3, (2, 3): 3, (3, 4): 3, (4, 5): 3,
                                      (5, 6): 3, (2, 7): 3}), "E8"),
        (path([4, 3, 4]), "Infinite"),
        (path([3, 6]), "Infinite"),
        (CoxeterMatrix.cycle(3), "Infinite"),
        (path([INF]), "Infinite"),
        (path([2, 2]), "A1 x A1 x A1"),
    ],
)
def test_catalogue(m, label):
    assert str(cx.classify(m)) == label


@pytest.mark.parametrize("k", [3, 4, 5, 6, 7])
def test_cycle_is_infinite_but_proper_paths_are_type_a(k):
    m = CoxeterMatrix.cycle(k)
    assert not cx.is_finite(m)
    for size in range(1, k):
        for sub in combinations(range(k), size):
            res = cx.classify(m.submatrix(sub))
            assert res.finite and all(lab.startswith("A") for lab in res.labels)


def test_oracle_examples():
    assert cx.numeric_finiteness_oracle(path([3, 3])).verdict == cx.POSITIVE_DEFINITE
    v = cx.numeric_finiteness_oracle(path([4, 3, 4]))
    assert v.verdict == cx.NOT_POSITIVE_DEFINITE and v.resolved_exactly
    assert abs(v.minors[-1]) < 1e-9
    v = cx.numeric_finiteness_oracle(path([INF]))
    assert v.verdict == cx.NOT_POSITIVE_DEFINITE


def test_oracle_without_exact_field():
    # entry 7 has no closed form here; a clearly indefinite matrix is still decided
    m = CoxeterMatrix.from_edges(3, {(0, 1): 7, (1, 2): 7, (0, 2): 7})
    assert cx.numeric_finiteness_oracle(m).verdict == cx.NOT_POSITIVE_DEFINITE
    assert str(cx.classify(path([7]))) == "I2(7)"


@pytest.mark.parametrize(
    "m, level, full",
    [
        (path([4, 3, 3, 4]), 3, False),
        (CoxeterMatrix.cycle(5), 3, False),
        (path([3]), 1, True),
        (path([INF]), 0, False),
        (path([4, 4]), 1, False),
    ],
)
def test_sphericity_examples(m, level, full):
    s = cx.sphericity(m)
    assert (s.level, s.full) == (level, full)


@settings(max_examples=80, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_classification_invariant_under_relabelling(m, rnd):
    perm = list(range(m.rank))
    rnd.shuffle(perm)
    a, b = cx.classify(m), cx.classify(m.permuted(perm))
    assert sorted(a.labels) == sorted(b.labels)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_classify_agrees_with_oracle(m):
    v = cx.numeric_finiteness_oracle(m)
    assert v.verdict != cx.INDETERMINATE
    assert (v.verdict == cx.POSITIVE_DEFINITE) == cx.is_finite(m)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_parabolic_subgroups_of_finite_groups_are_finite(m):
    if not cx.is_finite(m):
        return
    for size in range(1, m.rank):
        for sub in combinations(range(m.rank), size):
            assert cx.is_finite(m.submatrix(sub))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_sphericity_definition(m):
    s = cx.sphericity(m)
    k = m.rank
    if s.full:
        assert cx.is_finite(m)
        return
    for sub in combinations(range(k), s.level + 1):
        assert cx.is_finite(m.submatrix(sub))
    if s.level + 2 <= k:
        assert any(not cx.is_finite(m.submatrix(sub)) for sub in combinations(range(k), s.level + 2))


def _crystallographic(rank):
    pairs = list(combinations(range(rank), 2))
    for vals in product((2, 3, 4, 6, INF), repeat=len(pairs)):
        yield CoxeterMatrix.from_edges(rank, dict(zip(pairs, vals)))


def _group_order(res):
    return math.prod(oracles.finite_type_order(lab) for lab in res.labels)


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_against_weyl_group_enumeration(rank):
    for m in _crystallographic(rank):
        res = cx.classify(m)
        order = oracles.weyl_group_order([list(r) for r in m.entries], cap=2000)
        assert res.finite == (order is not None), m.entries
        if order is not None:
            assert order == _group_order(res)


def test_against_weyl_group_enumeration_rank_four():
    rng = random.Random(2024)
    for _ in range(120):
        m = random_matrix(rng, 4, (2, 2, 3, 4, 6, INF))
        res = cx.classify(m)
        order = oracles.weyl_group_order([list(r) for r in m.entries], cap=1200)
        assert res.finite == (order is not None), m.entries
        if order is not None:
            assert order == _group_order(res)


def test_graph_edges():
    g = cx.coxeter_graph(path([3, 2, INF]).permuted([0, 1, 2, 3]))
    assert g.edges == {(0, 1): 3, (2, 3): INF}


def test_numeric_schlafli_is_symmetric():
    m = random_matrix(random.Random(1), 6)
    s = cx.schlafli_matrix(m).numeric
    assert np.array_equal(s, s.T)
    assert all(Fraction(1) == Fraction(s[i, i]) for i in range(6))
