from __future__ import annotations

import numpy as np
import pytest

from fpcert import certifier as cf, freegroup as fg
from fpcert.registry import builtin_claims, c_tilde, nielsen_cycle, word_conjugator

import oracles


@pytest.fixture(scope="module")
def report():
    return {e.id: e for e in cf.run_claims(builtin_claims())}


def abelianized(f: fg.FreeAutomorphism):
    """Action on Z^n = F_n / [F_n, F_n]; column i is the exponent sum of the image of x_i."""
    m = np.zeros((f.rank, f.rank), dtype=np.int64)
    for i, w in enumerate(f.images):
        for a in w:
            m[abs(a) - 1, i] += 1 if a > 0 else -1
    return m


def test_every_claim_verifies(report):
    assert {e.status for e in report.values()} == {cf.VERIFIED}


def test_recorded_conventions(report):
    assert report["C11"].convention == "ltr"
    assert report["C11"].witness["retried_from"] == {"convention": "rtl",
                                                     "status": cf.EXCEEDED}
    assert report["C13"].convention is None
    others = {e.convention for k, e in report.items() if k not in ("C11", "C13")}
    assert others == {"rtl"}


def test_frozen_witnesses(report):
    assert report["C1"].witness == {"pairs": 120}
    assert report["C4"].witness == {"variants": {"sign-at-i": cf.REFUTED,
                                                 "sign-at-i+1": cf.VERIFIED}}
    assert [c["relators"] for c in report["C3"].witness["cases"]] == [6, 10, 15]
    assert report["C9"].witness["cases"][1:] == [{"orders": [6]}, {"orders": ["exceeds_cap"]}]
    assert [c["orders"] for c in report["C12"].witness["cases"]] == [[2, 2, 2], [6, 4, 6, 6, 6, 6]]
    assert [c["orders"] for c in report["C11"].witness["cases"]] == [
        [8, 6, 4, 4, 12, 12, 4, 4, 4, 8],
        [4, 8, 6, 8, 4, 12],
        [8, 6, 4, 4, 4, 12, 12, 4, 4, 4, 4, 4, 6, 4, 8],
        [4, 8, 6, 8, 4, 12],
    ]


def _cases(claim_id):
    claim = next(c for c in builtin_claims() if c.id == claim_id)
    base = {k: v for k, v in claim.payload.items() if k != "cases"}
    return [dict(base, **case) for case in claim.payload["cases"]]


@pytest.mark.parametrize("claim_id, convention", [("C11", "ltr"), ("C12", "rtl")])
def test_finite_orders_match_integer_representation(report, claim_id, convention):
    # finite subgroups of Aut(F_n) embed in GL_n(Z), so the abelianized
    # group has the same order
    got = [c["orders"] for c in report[claim_id].witness["cases"]]
    want = []
    for case in _cases(claim_id):
        defs = case.get("defs", {})
        orders = []
        for group in case["sets"]:
            mats = [abelianized(fg.evaluate(t, case["rank"], convention, defs)) for t in group]
            orders.append(oracles.matrix_group_order(mats, cap=10_000))
        want.append(orders)
    assert got == want


def test_c9_pair_matches_integer_representation():
    mats = [abelianized(fg.evaluate(t, 2)) for t in ("r(1,2) e(2)", "e(1) e(2) s(1,2)")]
    assert oracles.matrix_group_order(mats) == 6


def test_helpers():
    assert c_tilde(3).entries[0][1] == 4 and c_tilde(3).entries[2][3] == 4
    assert nielsen_cycle(4) == ["r(2,1)^-1 r(3,1) s(2,3)", "s(3,4)", "s(2,4)"]
    assert word_conjugator("x1") == 'conj(4,"x1",-1; 5,"x1",1)'
    with pytest.raises(ValueError):
        c_tilde(1)


def test_anchor_round_trip():
    for c in builtin_claims():
        assert cf.Claim.from_json(c.to_json()) == c
