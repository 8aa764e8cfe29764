from __future__ import annotations

import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st
from networkx.algorithms.isomorphism import GraphMatcher

from fpcert import kernels, trees
from fpcert.trees import CommonVertex, HypothesisFails, Tree, TreeAutomorphism


def as_graph(t: Tree):
    g = nx.Graph()
    g.add_nodes_from(range(t.n))
    g.add_edges_from(t.edges)
    return g


def small_trees(max_n):
    for n in range(1, max_n + 1):
        yield from trees.all_trees(n)


def random_tree(seed, n):
    rng = random.Random(seed)
    return Tree(n, tuple((v, rng.randrange(v)) for v in range(1, n)))


tree_strategy = st.builds(random_tree, st.integers(0, 10**6), st.integers(1, 9))


# -- construction ------------------------------------------------------------


@pytest.mark.parametrize(
    "n, edges",
    [(0, ()), (3, ((0, 1),)), (3, ((0, 1), (0, 1))), (3, ((0, 1), (1, 1))),
     (4, ((0, 1), (1, 2), (2, 0)))],
)
def test_not_a_tree(n, edges):
    with pytest.raises(ValueError):
        Tree(n, edges)


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (4, 2), (6, 6), (8, 23), (9, 47)])
def test_tree_counts(n, count):
    assert sum(1 for _ in trees.all_trees(n)) == count


def test_subdivision():
    s = Tree.path(3).subdivision()
    assert s.n == 5 and trees.is_subtree(s, {0, 3, 1})


# -- automorphisms -----------------------------------------------------------


@pytest.mark.parametrize("t, count", [(Tree.path(3), 2), (Tree.star(3), 6), (Tree.path(2), 2),
                                      (Tree.path(1), 1), (Tree.star(4), 24)])
def test_automorphism_counts(t, count):
    assert len(trees.automorphism_group(t)) == count


def test_edge_swap_inverts_the_edge():
    (swap,) = [g for g in trees.automorphism_group(Tree.path(2)) if not g.is_identity()]
    fs = trees.fixed_set_tree(Tree.path(2), [swap])
    assert not fs.vertices and fs.edges == {(0, 1)}


@pytest.mark.parametrize("t", list(small_trees(8)), ids=lambda t: str(t.edges))
def test_automorphisms_match_graph_matcher(t):
    ours = {g.perm for g in trees.automorphism_group(t)}
    g = as_graph(t)
    theirs = {tuple(m[v] for v in range(t.n)) for m in GraphMatcher(g, g).isomorphisms_iter()}
    assert ours == theirs


# -- fixed sets --------------------------------------------------------------


def test_end_swap_fixes_the_middle():
    swap = TreeAutomorphism((2, 1, 0))
    fs = trees.fixed_set_tree(Tree.path(3), [swap])
    assert fs.vertices == {1} and not fs.edges


def test_non_automorphism_rejected():
    with pytest.raises(ValueError):
        trees.fixed_set_tree(Tree.path(3), [TreeAutomorphism((1, 0, 2))])


@settings(max_examples=60, deadline=None)
@given(tree_strategy, st.data())
def test_generator_fixed_set_matches_closure(t, data):
    auts = trees.automorphism_group(t)
    gens = data.draw(st.lists(st.sampled_from(auts), min_size=1, max_size=3))
    closure = trees.span(gens, t.n)
    fs = trees.fixed_set_tree(t, gens)
    assert fs.vertices == {v for v in range(t.n) if all(g[v] == v for g in closure)}
    assert not fs.empty


@settings(max_examples=40, deadline=None)
@given(tree_strategy)
def test_fixed_subtree_is_connected(t):
    auts = trees.automorphism_group(t)
    fixed = trees.fixed_subtree(t, auts)
    assert trees.is_subtree(t.subdivision(), fixed)


@pytest.mark.parametrize("n", range(1, 8))
def test_every_subgroup_fixes_a_point(n):
    sweep = trees.SubgroupSweep()
    for t in trees.all_trees(n):
        trees.check_all_subgroups(t, sweep)
    assert sweep.failures == 0


def test_subgroup_lattice_of_s3():
    group = trees.FiniteGroup(trees.automorphism_group(Tree.star(3)))
    # trivial, three of order 2, one of order 3, the whole group
    assert sorted(bin(m).count("1") for m in group.subgroup_lattice()) == [1, 2, 2, 2, 3, 6]


# -- subtree Helly -----------------------------------------------------------


def test_star_subtrees_share_the_center():
    t = Tree.star(3)
    assert trees.subtree_helly(t, [{0, 1}, {0, 2}, {0, 3}]) == CommonVertex(0)


def test_disjoint_leaves_fail_the_hypothesis():
    assert trees.subtree_helly(Tree.star(3), [{1}, {2}]) == HypothesisFails((0, 1))


def test_non_subtree_rejected():
    with pytest.raises(ValueError):
        trees.subtree_helly(Tree.star(3), [{1, 2}])


@pytest.mark.parametrize("t", list(small_trees(7)), ids=lambda t: str(t.edges))
def test_subtree_masks_match_brute_force(t):
    g = as_graph(t)
    brute = set()
    for k in range(1, t.n + 1):
        for s in combinations(range(t.n), k):
            if nx.is_connected(g.subgraph(s)):
                brute.add(sum(1 << v for v in s))
    assert set(trees.subtree_masks(t)) == brute


def brute_helly_scan(masks, max_size):
    families = failures = 0
    for k in range(1, max_size + 1):
        for fam in combinations(masks, k):
            if all(a & b for a, b in combinations(fam, 2)):
                families += 1
                common = -1
                for m in fam:
                    common &= m
                failures += common == 0
    return families, failures


@pytest.mark.parametrize("backend", sorted(kernels.backends()))
@pytest.mark.parametrize("t", [Tree.path(4), Tree.star(3), random_tree(1, 5)], ids=str)
def test_helly_scan_matches_brute_force(backend, t):
    scan = kernels.backends()[backend].helly_scan
    masks = trees.subtree_masks(t)
    fams, fails, first = scan(masks, 3)
    assert (fams, fails) == brute_helly_scan(masks, 3)
    assert first is None


@pytest.mark.parametrize("backend", sorted(kernels.backends()))
def test_helly_scan_reports_failures_on_non_subtrees(backend):
    # three arcs of a triangle meet pairwise, never jointly
    scan = kernels.backends()[backend].helly_scan
    masks = [0b011, 0b110, 0b101]
    fams, fails, first = scan(masks, 3)
    assert (fams, fails) == brute_helly_scan(masks, 3)
    assert fails == 1 and sorted(first) == [0, 1, 2]


def test_helly_exhaustive_small():
    sweep = trees.helly_exhaustive(max_vertices=6, max_family=4)
    assert sweep.failures == 0
    assert sweep.families == 87666


# -- triangle harness --------------------------------------------------------


def test_triangle_harness_small():
    sweep = trees.triangle_exhaustive(max_vertices=6, seed=1)
    assert sweep.failures == 0 and sweep.partitions > 0


def test_generating_set_generates():
    t = Tree.star(4)
    auts = trees.automorphism_group(t)
    gens = trees.generating_set(auts)
    assert len(trees.span(gens, t.n)) == len(auts)
    assert len(gens) <= 3
