"""Built-in claims: the finite computations behind the fixed-point arguments.

Each claim's ``anchor`` is the formula or statement it checks.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .certifier import Claim
from .coxeter import CoxeterMatrix


def c_tilde(n: int) -> CoxeterMatrix:
    """Rank ``n + 1`` path labelled ``4, 3, ..., 3, 4`` (affine type C~_n)."""
    if n < 2:
        raise ValueError("need n >= 2")
    return CoxeterMatrix.path([4] + [3] * (n - 2) + [4])


def _m(matrix: CoxeterMatrix):
    return [list(r) for r in matrix.entries]


def signed_permutation_assignment(n: int) -> dict:
    """``s1 -> (translate e1) o sigma_1``, ``s_{i+1} -> (i,i+1)``, ``s_{n+1} -> sigma_n``."""
    t = ",".join(["1"] + ["0"] * (n - 1))
    out = {"s1": f"t({t}) sg(1)"}
    for i in range(1, n):
        out[f"s{i + 1}"] = f"p({i},{i + 1})"
    out[f"s{n + 1}"] = f"sg({n})"
    return out


def nielsen_cycle(n: int) -> list[str]:
    """``rho21^-1 rho31 (23), (34), ..., (n-1,n), (2,n)`` in Aut(F_n)."""
    return ["r(2,1)^-1 r(3,1) s(2,3)"] + [f"s({i},{i + 1})" for i in range(3, n)] + [f"s(2,{n})"]


def word_conjugator(w: str) -> str:
    return f'conj(4,"{w}",-1; 5,"{w}",1)'


def _elementary_law_pairs(n: int):
    pairs = []
    for i, j in permutations(range(1, n + 1), 2):
        pairs.append([f"E({i},{j},r+s,{n})", f"E({i},{j},r,{n}) E({i},{j},s,{n})"])
    for i, j, k in permutations(range(1, n + 1), 3):
        pairs.append(
            [f"E({i},{j},r,{n}) E({j},{k},s,{n}) E({i},{j},r,{n})^-1 E({j},{k},s,{n})^-1",
             f"E({i},{k},rs,{n})"]
        )
    for i, j in permutations(range(1, n + 1), 2):
        for k, l in permutations(range(1, n + 1), 2):
            if j != k and i != l:
                pairs.append(
                    [f"E({i},{j},r,{n}) E({k},{l},s,{n}) E({i},{j},r,{n})^-1 E({k},{l},s,{n})^-1",
                     f"I({n})"]
                )
    return pairs


def _alpha_assignment(n: int, shift: int) -> dict:
    """Images in GL_{n+1}: ``a1 sigma1`` and the Coxeter generators, times ``-I``.

    ``shift`` places the sign flip for ``sigma_i`` at position ``i + shift``.
    """
    size = n + 1

    def flip(i):
        signs = ["1"] * size
        signs[i + shift - 1] = "-1"
        return f"Dg({','.join(signs)})"

    out = {"s1": f"E(1,2,x,{size}) neg({size}) {flip(1)}"}
    for i in range(1, n):
        out[f"s{i + 1}"] = f"neg({size}) P(({i + 1},{i + 2}),{size})"
    out[f"s{n + 1}"] = f"neg({size}) {flip(n)}"
    return out


def _augmented_assignment(n: int) -> dict:
    size = n + 1
    first = ",".join(["-1"] + ["1"] * n)
    last = ",".join(["1"] * (n - 1) + ["-1", "1"])
    out = {"s1": f"E(1,{size},x,{size}) Dg({first})"}
    for i in range(1, n):
        out[f"s{i + 1}"] = f"P(({i},{i + 1}),{size})"
    out[f"s{n + 1}"] = f"Dg({last})"
    return out


def _pairs_of(elems):
    return [list(p) for p in combinations(elems, 2)]


def builtin_claims() -> list[Claim]:
    claims = [
        Claim(
            "C1", "identity", "matrix-ring",
            {"size": 4, "pairs": _elementary_law_pairs(4)},
            anchor="e_ij(r+s) = e_ij(r)e_ij(s); [e_ij(r), e_jk(s)] = e_ik(rs); "
            "[e_ij(r), e_kl(s)] = I for j != k, i != l",
        ),
        Claim(
            "C2", "identity", "matrix-ring",
            {"size": 2, "pairs": [[
                "E(1,2,1,2) E(2,1,-1,2) E(1,2,2,2) E(2,1,-1,2) E(1,2,1,2)", "Dg(-1,-1)",
            ]]},
            anchor="e12(1) e21(-1) e12(2) e21(-1) e12(1) = diag(-1,-1)",
        ),
        Claim(
            "C3", "relation", "affine",
            {"cases": [
                {"dim": n, "coxeter": _m(c_tilde(n)), "assignment": signed_permutation_assignment(n)}
                for n in (2, 3, 4)
            ]},
            anchor="s1 -> a1 sigma1, s_{i+1} -> (i,i+1), s_{n+1} -> sigma_n respects the "
            "Coxeter relators of the 4,3,...,3,4 path, n = 2,3,4",
        ),
        Claim(
            "C4", "relation", "matrix-ring",
            {"size": 5, "coxeter": _m(c_tilde(4)), "variants": [
                {"name": "sign-at-i", "assignment": _alpha_assignment(4, 0)},
                {"name": "sign-at-i+1", "assignment": _alpha_assignment(4, 1)},
            ]},
            anchor="a_i -> e_{1,i+1}(x), sigma_i -> -I eps_i, (i,i+1) -> -I (i,i+1) "
            "over Z<x>, n = 5",
        ),
        Claim(
            "C5", "relation", "matrix-ring",
            {"cases": [
                {"size": n + 1, "coxeter": _m(c_tilde(n)), "assignment": _augmented_assignment(n)}
                for n in (3, 4)
            ]},
            anchor="S_x = {(x, sigma1), (12), ..., (n-1,n), sigma_n} in R^n x| E'_n(R) "
            "respects the 4,3,...,3,4 path relators, n = 3,4",
        ),
        Claim(
            "C6", "order", "free-group",
            {"cases": [_successive_pairs(n) for n in (4, 5, 6)]},
            anchor="successive products in {rho21^-1 rho31 (23), (34), ..., (n-1,n), (2,n)} "
            "have order 3, cyclically, n = 4,5,6",
        ),
        Claim(
            "C7", "identity", "free-group",
            {"rank": 4, "defs": {"T": "r(3,2)^-1 r(4,2)"}, "pairs": [
                [f"T^-{p} r(1,3) T^{p}", f"r(1,3) r(1,2)^{p}"] for p in range(1, 5)
            ]},
            anchor="T^-p rho13 T^p = rho13 rho12^p with T = rho32^-1 rho42, p = 1..4",
        ),
        Claim(
            "C8", "identity", "free-group",
            {"rank": 2, "pairs": [["r(1,2) l(1,2)", "l(1,2) r(1,2)"]]},
            anchor="rho12 lambda12 = lambda12 rho12",
        ),
        Claim(
            "C9", "identity", "free-group",
            {"rank": 2, "cases": [
                {"pairs": [["(r(1,2) e(2))^2", "id"]]},
                {"kind": "finiteness", "sets": [["r(1,2) e(2)", "e(1) e(2) s(1,2)"]],
                 "expected": [6]},
                {"kind": "finiteness", "sets": [["r(1,2) e(2)", "e(2)"]],
                 "expected": "exceeds_cap"},
            ]},
            cap=1000,
            anchor="(rho12 eps2)^2 = 1; <rho12 eps2, eps1 eps2 (12)> finite; "
            "<rho12 eps2, eps2> infinite dihedral",
        ),
        Claim(
            "C10", "identity", "free-group",
            {"rank": 5, "cases": [
                {"defs": {"T": word_conjugator(w)}, "pairs": [
                    [f"T^-{p} r(2,4) T^{p}", f'r(2,4) rw(2,"{w}")^{p}'] for p in range(1, 4)
                ]}
                for w in ("x1", "x3", "x1 x3", "x1 x3^-1")
            ]},
            anchor="T^-p rho24 T^p = rho24 rho_{2,w}^p, T: x4 -> x4 w^-1, x5 -> x5 w, "
            "w in {x1, x3, x1x3, x1x3^-1}, p = 1..3",
        ),
        Claim(
            "C11", "finiteness", "free-group",
            {"cases": [
                case for n in (4, 5) for case in (
                    {"rank": n, "sets": _pairs_of(_cor_set(n))},
                    {"rank": n, "sets": _pairs_of(_cor_set1())},
                )
            ]},
            anchor="any 2 elements of {eps2 rho12, eps1 (23), eps1 eps2 (12), (i,i+1), eps_n} "
            "or {eps2 rho12, eps3, eps1 (23), eps1 eps2 (12)} generate a finite group, n = 4,5",
        ),
        Claim(
            "C12", "finiteness", "free-group",
            {"defs": {"T": word_conjugator("x1 x3")}, "cases": [
                {"rank": n, "sets": [list(c) for c in combinations(_conjugator_set(n), n - 4)]}
                for n in (5, 6)
            ]},
            anchor="any n-4 elements of {T(45), (56), ..., (n-1,n), (2,n), (4,n)} generate a "
            "finite group, w = x1 x3, n = 5,6",
        ),
        Claim(
            "C13", "classification", "coxeter",
            {"cases": [
                {"matrix": _m(c_tilde(n)), "expected": "Infinite", "sphericity": n - 1}
                for n in (2, 3, 4)
            ] + [
                {"matrix": _m(CoxeterMatrix.cycle(n - 1)), "expected": "Infinite",
                 "sphericity": n - 3}
                for n in (4, 5, 6)
            ] + [
                {"matrix": _m(CoxeterMatrix.path([4] + [3] * (n - 2))), "expected": f"B{n}",
                 "sphericity": "full"}
                for n in (2, 3, 4)
            ]},
            anchor="4,3,...,3,4 path is infinite with every n-subset finite; the (n-1)-cycle "
            "is infinite with every (n-2)-subset of type A",
        ),
        Claim(
            "C14", "relation", "free-group",
            {"cases": [
                {"rank": n, "coxeter": _m(CoxeterMatrix.cycle(n - 1)),
                 "assignment": {f"s{i}": e for i, e in enumerate(nielsen_cycle(n), 1)}}
                for n in (4, 5, 6)
            ]},
            anchor="s_i -> i-th element of {rho21^-1 rho31 (23), (34), ..., (2,n)} respects "
            "the Coxeter relators of the (n-1)-cycle, n = 4,5,6",
        ),
    ]
    return claims


def _successive_pairs(n: int) -> dict:
    s = nielsen_cycle(n)
    k = len(s)
    defs = {f"S{i}": e for i, e in enumerate(s, 1)}
    elems = [f"S{i} S{i % k + 1}" for i in range(1, k + 1)]
    return {"rank": n, "defs": defs, "elements": elems, "expected": 3}


def _cor_set(n: int) -> list[str]:
    return (
        ["e(2) r(1,2)", "e(1) s(2,3)", "e(1) e(2) s(1,2)"]
        + [f"s({i},{i + 1})" for i in range(3, n)]
        + [f"e({n})"]
    )


def _cor_set1() -> list[str]:
    return ["e(2) r(1,2)", "e(3)", "e(1) s(2,3)", "e(1) e(2) s(1,2)"]


def _conjugator_set(n: int) -> list[str]:
    return ["T s(4,5)"] + [f"s({i},{i + 1})" for i in range(5, n)] + [f"s(2,{n})", f"s(4,{n})"]
