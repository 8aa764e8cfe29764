"""Finite trees: automorphism groups, fixed points, subtree Helly checks.

A finite group acting on a tree fixes a vertex or inverts an edge; here
that is checked exhaustively on small trees, for every subgroup where the
subgroup lattice is small enough and for every cyclic subgroup otherwise.
Edge midpoints are formal objects: an edge fixed setwise and inverted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product

import networkx as nx

from . import kernels

MAX_VERTICES = 10
# Above this group order only cyclic subgroups and the whole group are checked.
LATTICE_LIMIT = 128


@dataclass(frozen=True)
class Tree:
    n: int
    edges: tuple

    def __post_init__(self):
        edges = tuple(sorted(tuple(sorted(e)) for e in self.edges))
        if self.n < 1:
            raise ValueError("a tree needs at least one vertex")
        if len(edges) != self.n - 1 or len(set(edges)) != len(edges):
            raise ValueError("a tree on n vertices has n - 1 distinct edges")
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                raise ValueError(f"bad edge {(u, v)}")
        object.__setattr__(self, "edges", edges)
        adj = self.adjacency()
        seen, stack = {0}, [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != self.n:
            raise ValueError("edges do not connect the vertices")

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    @classmethod
    def path(cls, n: int) -> Tree:
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def star(cls, leaves: int) -> Tree:
        return cls(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))

    @classmethod
    def from_networkx(cls, g) -> Tree:
        mapping = {v: i for i, v in enumerate(sorted(g.nodes))}
        return cls(len(mapping), tuple((mapping[u], mapping[v]) for u, v in g.edges))

    def subdivision(self) -> Tree:
        """Barycentric subdivision: edge ``k`` becomes vertex ``n + k``."""
        edges = []
        for k, (u, v) in enumerate(self.edges):
            edges += [(u, self.n + k), (v, self.n + k)]
        return Tree(2 * self.n - 1, tuple(edges))


def all_trees(n: int):
    """Every tree on ``n`` vertices up to isomorphism."""
    if n == 1:
        yield Tree(1, ())
        return
    for g in nx.nonisomorphic_trees(n):
        yield Tree.from_networkx(g)


@dataclass(frozen=True)
class TreeAutomorphism:
    perm: tuple

    def __call__(self, v: int) -> int:
        return self.perm[v]

    def __mul__(self, other: TreeAutomorphism) -> TreeAutomorphism:
        return TreeAutomorphism(tuple(self.perm[i] for i in other.perm))

    def inverse(self) -> TreeAutomorphism:
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return TreeAutomorphism(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def key(self):
        return self.perm

    def preserves(self, t: Tree) -> bool:
        edges = set(t.edges)
        return len(self.perm) == t.n and all(
            tuple(sorted((self.perm[u], self.perm[v]))) in edges for u, v in t.edges
        )

    def maps_edge(self, e) -> tuple:
        return tuple(sorted((self.perm[e[0]], self.perm[e[1]])))


def centers(t: Tree) -> list[int]:
    adj = t.adjacency()
    deg = [len(a) for a in adj]
    layer = [v for v in range(t.n) if deg[v] <= 1]
    left = t.n
    while left > 2:
        left -= len(layer)
        nxt = []
        for v in layer:
            for w in adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def _rooted_codes(adj, roots):
    """Canonical code of every vertex's subtree, rooted at ``roots``."""
    parent = {r: None for r in roots}
    order = list(roots)
    for v in order:
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    code = {}
    for v in reversed(order):
        kids = sorted(code[w] for w in adj[v] if parent.get(w) == v)
        code[v] = "(" + "".join(kids) + ")"
    return parent, order, code


def automorphism_group(t: Tree) -> list[TreeAutomorphism]:
    """Every automorphism, found by matching canonical subtree codes.

    Rooting at the centre (or both ends of the central edge) makes the
    search free of dead ends: a vertex can only go to a child of its
    parent's image carrying the same code.
    """
    if t.n > MAX_VERTICES:
        raise ValueError(f"trees above {MAX_VERTICES} vertices are out of scope")
    adj = t.adjacency()
    roots = centers(t)
    parent, order, code = _rooted_codes(adj, roots)
    children = {v: [w for w in adj[v] if parent.get(w) == v] for v in range(t.n)}
    root_maps = [dict(zip(roots, roots))]
    if len(roots) == 2 and code[roots[0]] == code[roots[1]]:
        root_maps.append({roots[0]: roots[1], roots[1]: roots[0]})
    rest = [v for v in order if v not in roots]
    out = []

    def extend(i, image, used):
        if i == len(rest):
            out.append(TreeAutomorphism(tuple(image[v] for v in range(t.n))))
            return
        v = rest[i]
        for w in children[image[parent[v]]]:
            if w not in used and code[w] == code[v]:
                image[v] = w
                used.add(w)
                extend(i + 1, image, used)
                used.discard(w)
                del image[v]

    for rm in root_maps:
        extend(0, dict(rm), set(rm.values()))
    return sorted(out, key=lambda g: g.perm)


@dataclass(frozen=True)
class TreeFixedSet:
    vertices: frozenset
    edges: frozenset  # inverted edges: midpoint fixed, endpoints swapped

    @property
    def empty(self) -> bool:
        return not self.vertices and not self.edges

    def to_json(self) -> dict:
        return {"vertices": sorted(self.vertices), "edges": sorted(map(list, self.edges))}


def fixed_set_tree(t: Tree, gens) -> TreeFixedSet:
    """Points of ``t`` fixed by the group generated by ``gens``.

    A point is fixed by a group iff it is fixed by each generator, so no
    closure is needed.
    """
    gens = list(gens)
    for g in gens:
        if not g.preserves(t):
            raise ValueError("generator is not an automorphism of the tree")
    verts = frozenset(v for v in range(t.n) if all(g(v) == v for g in gens))
    edges = frozenset(
        e for e in t.edges
        if all(g.maps_edge(e) == e for g in gens) and any(g(e[0]) == e[1] for g in gens)
    )
    return TreeFixedSet(verts, edges)


def fixed_subtree(t: Tree, gens) -> frozenset:
    """Fixed set inside the barycentric subdivision, as subdivision vertices."""
    fs = fixed_set_tree(t, gens)
    mids = {t.n + k for k, e in enumerate(t.edges) if all(g.maps_edge(e) == e for g in gens)}
    return frozenset(fs.vertices) | frozenset(mids)


# -- subgroups ---------------------------------------------------------------


class FiniteGroup:
    """A permutation group held as an indexed element list with a product table."""

    def __init__(self, elements):
        self.elements = list(elements)
        self.index = {g.perm: i for i, g in enumerate(self.elements)}
        self.identity = next(i for i, g in enumerate(self.elements) if g.is_identity())
        self._table = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def table(self):
        if self._table is None:
            els, idx = self.elements, self.index
            self._table = [[idx[(a * b).perm] for b in els] for a in els]
        return self._table

    def closure(self, gens) -> int:
        """Subgroup generated by element indices ``gens``, as a bitmask."""
        tab = self.table()
        mask = 1 << self.identity
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                row = tab[x]
                for g in gens:
                    y = row[g]
                    if not mask >> y & 1:
                        mask |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return mask

    def cyclic_subgroups(self) -> list[int]:
        subs = set()
        for i, g in enumerate(self.elements):
            mask, x = 1 << self.identity, g
            while not x.is_identity():
                mask |= 1 << self.index[x.perm]
                x = x * g
            subs.add(mask)
        return sorted(subs)

    def subgroup_lattice(self) -> list[int]:
        """All subgroups, as joins of cyclic subgroups."""
        cyclic = self.cyclic_subgroups()
        gens_of = {c: [_lowest_generator(self, c)] for c in cyclic}
        found = dict(gens_of)
        queue = list(cyclic)
        while queue:
            h = queue.pop()
            for c in cyclic:
                if c & ~h == 0:
                    continue
                gens = found[h] + gens_of[c]
                j = self.closure(gens)
                if j not in found:
                    found[j] = gens
                    queue.append(j)
        return sorted(found)

    def members(self, mask: int) -> list[TreeAutomorphism]:
        return [g for i, g in enumerate(self.elements) if mask >> i & 1]


def _lowest_generator(group: FiniteGroup, mask: int) -> int:
    """An element generating the cyclic subgroup ``mask``."""
    for g in range(group.order):
        if mask >> g & 1 and group.closure([g]) == mask:
            return g
    raise ValueError("not a cyclic subgroup")


@dataclass
class SubgroupSweep:
    trees: int = 0
    subgroups: int = 0
    lattice_complete: int = 0
    cyclic_only: int = 0
    failures: int = 0
    first_failure: dict | None = None


def cyclic_generators(elements) -> list[TreeAutomorphism]:
    """One generator per cyclic subgroup, without a product table."""
    seen = set()
    out = []
    for g in elements:
        powers, x = {g.perm}, g
        while not x.is_identity():
            x = x * g
            powers.add(x.perm)
        key = frozenset(powers)
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def check_all_subgroups(t: Tree, sweep: SubgroupSweep | None = None) -> SubgroupSweep:
    """Fixed sets of the subgroups of Aut(t): the whole lattice when the group
    is small, otherwise every cyclic subgroup and the whole group.  A
    subgroup fixes everything the whole group fixes, so a nonempty fixed
    set for Aut(t) covers every subgroup in either case."""
    sweep = sweep or SubgroupSweep()
    elements = automorphism_group(t)
    if len(elements) <= LATTICE_LIMIT:
        group = FiniteGroup(elements)
        families = [group.members(mask) for mask in group.subgroup_lattice()]
        sweep.lattice_complete += 1
    else:
        families = [[g] for g in cyclic_generators(elements)] + [elements]
        sweep.cyclic_only += 1
    sweep.trees += 1
    for members in families:
        sweep.subgroups += 1
        if fixed_set_tree(t, members).empty:
            sweep.failures += 1
            if sweep.first_failure is None:
                sweep.first_failure = {
                    "edges": list(map(list, t.edges)),
                    "subgroup": [list(g.perm) for g in members],
                }
    return sweep


# -- subtree Helly -----------------------------------------------------------


@dataclass(frozen=True)
class CommonVertex:
    vertex: int


@dataclass(frozen=True)
class HypothesisFails:
    pair: tuple


@dataclass(frozen=True)
class NoCommonVertex:
    """Pairwise-meeting subtrees with empty total intersection (never expected)."""

    family: tuple


def is_subtree(t: Tree, verts) -> bool:
    verts = set(verts)
    if not verts or not verts <= set(range(t.n)):
        return False
    adj = t.adjacency()
    start = min(verts)
    seen, stack = {start}, [start]
    while stack:
        for w in adj[stack.pop()]:
            if w in verts and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == verts


def subtree_helly(t: Tree, subtrees):
    """Common vertex of pairwise-meeting subtrees, or a disjoint pair."""
    sets = [frozenset(s) for s in subtrees]
    for s in sets:
        if not is_subtree(t, s):
            raise ValueError(f"{sorted(s)} does not induce a subtree")
    for i, j in combinations(range(len(sets)), 2):
        if not sets[i] & sets[j]:
            return HypothesisFails((i, j))
    common = frozenset(range(t.n))
    for s in sets:
        common &= s
    if not common:
        return NoCommonVertex(tuple(tuple(sorted(s)) for s in sets))
    return CommonVertex(min(common))


def subtree_masks(t: Tree) -> list[int]:
    """Every connected vertex subset, as a bitmask (sorted)."""
    adj = t.adjacency()
    nbr = [sum(1 << w for w in adj[v]) for v in range(t.n)]
    found = set()
    # grow connected sets from their smallest vertex
    for root in range(t.n):
        allowed = ~((1 << root) - 1)
        stack = [1 << root]
        local = {1 << root}
        while stack:
            s = stack.pop()
            border = 0
            x = s
            while x:
                low = x & -x
                border |= nbr[low.bit_length() - 1]
                x ^= low
            border &= allowed & ~s
            while border:
                low = border & -border
                border ^= low
                ns = s | low
                if ns not in local:
                    local.add(ns)
                    stack.append(ns)
        found |= local
    return sorted(found)


@dataclass
class HellySweep:
    trees: int = 0
    subtrees: int = 0
    families: int = 0
    failures: int = 0
    first_failure: dict | None = None


def helly_exhaustive(max_vertices: int = 7, max_family: int = 4, scan=None) -> HellySweep:
    """Every pairwise-meeting family of at most ``max_family`` subtrees of
    every tree on at most ``max_vertices`` vertices must share a vertex."""
    scan = scan or kernels.helly_scan
    out = HellySweep()
    for n in range(1, max_vertices + 1):
        for t in all_trees(n):
            masks = subtree_masks(t)
            fams, fails, first = scan(masks, max_family)
            out.trees += 1
            out.subtrees += len(masks)
            out.families += fams
            out.failures += fails
            if fails and out.first_failure is None:
                out.first_failure = {
                    "edges": list(map(list, t.edges)),
                    "family": [masks[i] for i in first],
                }
    return out


# -- triangle criterion ------------------------------------------------------


@dataclass
class TriangleSweep:
    trees: int = 0
    partitions: int = 0
    failures: int = 0
    first_failure: dict | None = None


def span(gens, n: int) -> set:
    """Permutations generated by ``gens`` (as tuples), by breadth-first search."""
    one = tuple(range(n))
    seen, frontier = {one}, [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[i] for i in g.perm)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def generating_set(elements) -> list[TreeAutomorphism]:
    """A small generating set: greedily add elements outside the span."""
    elements = list(elements)
    n = len(elements[0].perm)
    gens, current = [], {tuple(range(n))}
    for g in elements:
        if len(current) == len(elements):
            break
        if g.perm not in current:
            gens.append(g)
            current = span(gens, n)
    return gens


def _fixes(g: TreeAutomorphism, t: Tree, point: int) -> bool:
    if point < t.n:
        return g(point) == point
    e = t.edges[point - t.n]
    return g.maps_edge(e) == e


def triangle_check(t: Tree, parts) -> bool:
    """Fixed subtrees of the ``<A_i>`` in the subdivision must meet pairwise
    (each ``<A_i, A_j>`` is finite); subtree Helly then gives a point that
    every element of every ``A_i`` fixes, which is checked directly."""
    sub = t.subdivision()
    fixed = [fixed_subtree(t, part) if part else frozenset(range(sub.n)) for part in parts]
    if any(not fixed[i] & fixed[j] for i, j in combinations(range(3), 2)):
        return False
    res = subtree_helly(sub, fixed)
    if not isinstance(res, CommonVertex):
        return False
    return all(_fixes(g, t, res.vertex) for part in parts for g in part)


def triangle_exhaustive(max_vertices: int = 8, random_partitions: int = 4, seed: int = 0) -> TriangleSweep:
    """For every tree: every 3-colouring of a small generating set of
    Aut(t), plus seeded random 3-partitions of all of Aut(t)."""
    out = TriangleSweep()
    for n in range(1, max_vertices + 1):
        for t in all_trees(n):
            elements = automorphism_group(t)
            gens = generating_set(elements)
            rng = random.Random(f"{seed}:{t.edges}")
            partitions = []
            for colours in product(range(3), repeat=len(gens)):
                partitions.append([[g for g, c in zip(gens, colours) if c == k] for k in range(3)])
            for _ in range(random_partitions):
                parts = [[], [], []]
                for g in elements:
                    parts[rng.randrange(3)].append(g)
                partitions.append(parts)
            out.trees += 1
            for parts in partitions:
                out.partitions += 1
                if not triangle_check(t, parts):
                    out.failures += 1
                    if out.first_failure is None:
                        out.first_failure = {"edges": list(map(list, t.edges))}
    return out


def tree_exhaustive(max_vertices: int = 9, helly_vertices: int = 7, max_family: int = 4) -> dict:
    subs = SubgroupSweep()
    for n in range(1, max_vertices + 1):
        for t in all_trees(n):
            check_all_subgroups(t, subs)
    helly = helly_exhaustive(helly_vertices, max_family)
    return {
        "trees": subs.trees,
        "subgroups": subs.subgroups,
        "lattice_complete": subs.lattice_complete,
        "cyclic_only": subs.cyclic_only,
        "failures": subs.failures + helly.failures,
        "subgroup_failures": subs.failures,
        "helly": {
            "trees": helly.trees,
            "subtrees": helly.subtrees,
            "families": helly.families,
            "failures": helly.failures,
        },
        "kernel_backend": kernels.BACKEND,
    }
