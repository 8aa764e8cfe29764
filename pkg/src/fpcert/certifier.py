"""Claims engine: homomorphism checks, subgroup closures and the claim runner.

A claim is a JSON-able record ``{id, kind, engine, payload, cap}``.  The
payload vocabulary, shared by built-in and file-supplied claims:

``identity``      ``{"pairs": [[lhs, rhs], ...]}``
``relation``      ``{"coxeter": matrix}`` or ``{"presentation": {...}}``
                  together with ``{"assignment": {generator: expr}}``
``order``         ``{"elements": [...], "expected": k}``
``finiteness``    ``{"sets": [[...], ...], "expected": "finite" |
                  "exceeds_cap" | [k1, k2, ...]}``
``classification`` (engine ``coxeter``) ``{"matrix": m, "expected": label,
                  "sphericity": k | "full"}``

Any payload may carry ``"defs"`` (named sub-expressions), engine sizes
(``"rank"`` for free groups, ``"size"`` for matrices, ``"dim"`` for affine
maps), ``"cases"`` (all must hold; a case may override ``kind``) and
``"variants"`` (at least one must hold; each variant's status is recorded).

A claim that does not verify under the default ``rtl`` reading is re-run
under ``ltr``; the entry records the convention that verified.
"""

from __future__ import annotations

import json
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from . import affine, coxeter, exprs, freegroup, ncring

DEFAULT_CAP = 200_000
# Free-group closures give up once an element's basis images exceed this many
# letters in total; infinite subgroups of Aut(F_n) show up as word growth.
FREE_LENGTH_GUARD = 2000

VERIFIED = "verified"
REFUTED = "refuted"
EXCEEDED = "exceeded_cap"
INDETERMINATE = "indeterminate"
STATUSES = (VERIFIED, REFUTED, EXCEEDED, INDETERMINATE)

KINDS = ("identity", "relation", "order", "finiteness", "classification")
ENGINES = ("free-group", "matrix-ring", "affine", "coxeter")


class ClaimInputError(ValueError):
    """A claim whose payload cannot be evaluated at all."""


# -- presentations -----------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """Generators and relators; relators are product expressions in the generator names."""

    generators: tuple
    relators: tuple
    coxeter: coxeter.CoxeterMatrix | None = None

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ClaimInputError("duplicate generator names")
        for g in self.generators:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", g):
                raise ClaimInputError(f"bad generator name {g!r}")

    @classmethod
    def from_coxeter(cls, m: coxeter.CoxeterMatrix, names=None) -> Presentation:
        names = tuple(names or (f"s{i}" for i in range(1, m.rank + 1)))
        if len(names) != m.rank:
            raise ClaimInputError("need one name per Coxeter generator")
        rels = [f"{s}^2" for s in names]
        for i, j in combinations(range(m.rank), 2):
            if m.m(i, j) != coxeter.INF:
                rels.append(f"({names[i]} {names[j]})^{m.m(i, j)}")
        return cls(names, tuple(rels), m)

    @classmethod
    def from_json(cls, data) -> Presentation:
        return cls(tuple(data["generators"]), tuple(data["relators"]))


@dataclass(frozen=True)
class HomomorphismAssignment:
    engine: str
    mapping: dict
    size: int | None = None
    defs: dict = field(default_factory=dict)


def make_algebra(engine: str, size: int | None) -> exprs.Algebra:
    if engine == "free-group":
        if not size:
            raise ClaimInputError("free-group claims need a rank")
        return freegroup.FreeGroupAlgebra(size)
    if engine == "matrix-ring":
        return ncring.MatrixAlgebra(size)
    if engine == "affine":
        if not size:
            raise ClaimInputError("affine claims need a dimension")
        return affine.AffineAlgebra(size)
    raise ClaimInputError(f"unknown engine {engine!r}")


@dataclass(frozen=True)
class Outcome:
    status: str
    witness: object = None


class _Evaluator:
    def __init__(self, engine, size, convention, defs=None):
        self.algebra = make_algebra(engine, size)
        self.convention = convention
        self.defs = dict(defs or {})
        self._cache = {}

    def __call__(self, text):
        if text not in self._cache:
            try:
                self._cache[text] = exprs.evaluate(
                    text, self.algebra, self.convention, self.defs
                )
            except exprs.ExpressionError as exc:
                raise ClaimInputError(str(exc)) from None
        return self._cache[text]


def verify_homomorphism(
    p: Presentation, a: HomomorphismAssignment, convention: str = "rtl"
) -> Outcome:
    """Evaluate every relator on the assigned images.

    Refutation names the first relator that is not the identity.
    """
    missing = [g for g in p.generators if g not in a.mapping]
    if missing:
        raise ClaimInputError(f"unassigned generators {missing}")
    defs = dict(a.defs)
    defs.update(a.mapping)
    ev = _Evaluator(a.engine, a.size, convention, defs)
    for g in p.generators:
        x = ev(g)
        if hasattr(x, "has_inverse") and not x.has_inverse:
            raise ClaimInputError(f"image of {g} carries no inverse")
    for rel in p.relators:
        if not ev(rel).is_identity():
            return Outcome(REFUTED, {"relator": rel})
    return Outcome(VERIFIED, {"relators": len(p.relators)})


# -- closures ----------------------------------------------------------------


@dataclass(frozen=True)
class GroupOrder:
    order: int


@dataclass(frozen=True)
class ExceedsCap:
    cap: int
    reason: str = "elements"


def _too_long(x, max_length):
    return max_length is not None and hasattr(x, "total_length") and x.total_length() > max_length


def subgroup_closure(elems, cap: int = DEFAULT_CAP, max_length: int | None = None):
    """Order of the subgroup generated by ``elems``, by breadth-first search.

    Returns ``GroupOrder(k)`` or ``ExceedsCap``.  ``max_length`` bounds the
    total image length of free-group automorphisms.
    """
    elems = list(elems)
    if not elems:
        raise ValueError("closure needs at least one generator")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    steps = []
    for g in elems:
        steps.extend((g, g.inverse()))
    one = elems[0] * elems[0].inverse()
    seen = {one.key()}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in steps:
                y = x * g
                k = y.key()
                if k in seen:
                    continue
                if _too_long(y, max_length):
                    return ExceedsCap(cap, "length")
                seen.add(k)
                if len(seen) > cap:
                    return ExceedsCap(cap)
                nxt.append(y)
        frontier = nxt
    return GroupOrder(len(seen))


def element_order(x, cap: int) -> int | None:
    """Smallest ``k <= cap`` with ``x^k = 1``, else ``None``."""
    if isinstance(x, freegroup.FreeAutomorphism):
        return freegroup.order_bounded(x, cap)
    power = x
    for k in range(1, cap + 1):
        if power.is_identity():
            return k
        power = power * x
    return None


# -- claims and reports ------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    id: str
    kind: str
    engine: str
    payload: dict
    cap: int | None = None
    anchor: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ClaimInputError(f"{self.id}: unknown kind {self.kind!r}")
        if self.engine not in ENGINES:
            raise ClaimInputError(f"{self.id}: unknown engine {self.engine!r}")

    @classmethod
    def from_json(cls, data: dict) -> Claim:
        try:
            return cls(
                id=str(data["id"]),
                kind=data["kind"],
                engine=data["engine"],
                payload=data.get("payload", {}),
                cap=data.get("cap"),
                anchor=data.get("anchor", ""),
            )
        except KeyError as exc:
            raise ClaimInputError(f"claim is missing field {exc}") from None

    def to_json(self) -> dict:
        out = {"id": self.id, "kind": self.kind, "engine": self.engine, "payload": self.payload}
        if self.cap is not None:
            out["cap"] = self.cap
        if self.anchor:
            out["anchor"] = self.anchor
        return out


@dataclass(frozen=True)
class ReportEntry:
    id: str
    status: str
    witness: object
    convention: str | None
    millis: int

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "witness": self.witness,
            "convention": self.convention,
            "millis": self.millis,
        }


def natural_key(claim_id: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", claim_id)]


def report_json(entries, timing: bool = True) -> str:
    rows = [e.to_json() for e in sorted(entries, key=lambda e: natural_key(e.id))]
    if not timing:
        for r in rows:
            r.pop("millis")
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


def _size(engine, payload):
    return payload.get({"free-group": "rank", "matrix-ring": "size", "affine": "dim"}.get(engine, ""))


def _check_identity(payload, ev, cap):
    pairs = payload.get("pairs")
    if not pairs:
        raise ClaimInputError("identity claim needs pairs")
    for i, (lhs, rhs) in enumerate(pairs):
        if ev(lhs).key() != ev(rhs).key():
            return Outcome(REFUTED, {"pair": i, "lhs": lhs, "rhs": rhs})
    return Outcome(VERIFIED, {"pairs": len(pairs)})


def _check_order(payload, ev, cap):
    elements = payload.get("elements")
    expected = payload.get("expected")
    if not elements or expected is None:
        raise ClaimInputError("order claim needs elements and expected")
    targets = expected if isinstance(expected, list) else [expected] * len(elements)
    orders = []
    for text, want in zip(elements, targets):
        k = element_order(ev(text), cap)
        if k is None:
            if want == "exceeds_cap":
                orders.append("exceeds_cap")
                continue
            return Outcome(EXCEEDED, {"element": text, "cap": cap, "orders": orders})
        orders.append(k)
        if k != want:
            return Outcome(REFUTED, {"element": text, "order": k, "expected": want})
    return Outcome(VERIFIED, {"orders": orders})


def _check_finiteness(payload, ev, cap, engine):
    sets = payload.get("sets")
    expected = payload.get("expected", "finite")
    if not sets:
        raise ClaimInputError("finiteness claim needs sets")
    guard = FREE_LENGTH_GUARD if engine == "free-group" else None
    guard = payload.get("max_length", guard)
    orders = []
    for i, group in enumerate(sets):
        res = subgroup_closure([ev(t) for t in group], cap, guard)
        got = res.order if isinstance(res, GroupOrder) else "exceeds_cap"
        orders.append(got)
        want = expected[i] if isinstance(expected, list) else expected
        if want == "exceeds_cap":
            if got != "exceeds_cap":
                return Outcome(REFUTED, {"set": group, "order": got})
        elif got == "exceeds_cap":
            return Outcome(EXCEEDED, {"set": group, "cap": cap, "orders": orders})
        elif want != "finite" and got != want:
            return Outcome(REFUTED, {"set": group, "order": got, "expected": want})
    return Outcome(VERIFIED, {"orders": orders})


def _check_relation(payload, convention, engine):
    if "coxeter" in payload:
        m = coxeter.CoxeterMatrix.from_json({"m": payload["coxeter"]})
        pres = Presentation.from_coxeter(m, payload.get("generators"))
    elif "presentation" in payload:
        pres = Presentation.from_json(payload["presentation"])
    else:
        raise ClaimInputError("relation claim needs coxeter or presentation")
    assignment = HomomorphismAssignment(
        engine, payload.get("assignment", {}), _size(engine, payload), payload.get("defs", {})
    )
    out = verify_homomorphism(pres, assignment, convention)
    if engine == "affine" and out.status == VERIFIED:
        out = Outcome(VERIFIED, dict(out.witness, semidirect="linear-then-translate"))
    return out


def _check_classification(payload):
    if "matrix" not in payload:
        raise ClaimInputError("classification claim needs a matrix")
    m = coxeter.CoxeterMatrix.from_json({"m": payload["matrix"]})
    label = str(coxeter.classify(m))
    witness = {"label": label}
    if "expected" in payload and payload["expected"] != label:
        return Outcome(REFUTED, dict(witness, expected=payload["expected"]))
    if "sphericity" in payload:
        sph = coxeter.sphericity(m)
        got = "full" if sph.full else sph.level
        witness["sphericity"] = got
        if got != payload["sphericity"]:
            return Outcome(REFUTED, dict(witness, expected_sphericity=payload["sphericity"]))
    return Outcome(VERIFIED, witness)


def _worst(outcomes):
    for status in (REFUTED, EXCEEDED, INDETERMINATE):
        for i, o in enumerate(outcomes):
            if o.status == status:
                return i, o
    return None, None


def _run_payload(kind, engine, payload, cap, convention) -> Outcome:
    if "cases" in payload:
        base = {k: v for k, v in payload.items() if k != "cases"}
        outs = []
        for case in payload["cases"]:
            sub = dict(base, **case)
            outs.append(_run_payload(sub.pop("kind", kind), engine, sub, cap, convention))
        i, bad = _worst(outs)
        if bad is not None:
            return Outcome(bad.status, {"case": i, "detail": bad.witness})
        return Outcome(VERIFIED, {"cases": [o.witness for o in outs]})
    if "variants" in payload:
        base = {k: v for k, v in payload.items() if k != "variants"}
        results = {}
        outs = []
        for var in payload["variants"]:
            sub = dict(base, **var)
            name = sub.pop("name", str(len(outs)))
            o = _run_payload(sub.pop("kind", kind), engine, sub, cap, convention)
            outs.append(o)
            results[name] = o.status
        if any(o.status == VERIFIED for o in outs):
            return Outcome(VERIFIED, {"variants": results})
        _, bad = _worst(outs)
        return Outcome(bad.status, {"variants": results})

    if kind == "classification":
        return _check_classification(payload)
    if engine == "coxeter":
        raise ClaimInputError(f"kind {kind!r} is not available for the coxeter engine")
    if kind == "relation":
        return _check_relation(payload, convention, engine)
    ev = _Evaluator(engine, _size(engine, payload), convention, payload.get("defs"))
    if kind == "identity":
        return _check_identity(payload, ev, cap)
    if kind == "order":
        return _check_order(payload, ev, cap)
    if kind == "finiteness":
        return _check_finiteness(payload, ev, cap, engine)
    raise ClaimInputError(f"unknown kind {kind!r}")


def effective_cap(claim: Claim, cap: int | None) -> int:
    run_cap = DEFAULT_CAP if cap is None else cap
    return min(claim.cap, run_cap) if claim.cap else run_cap


def run_claim(claim: Claim, cap: int | None = None) -> ReportEntry:
    """Run one claim, retrying under ``ltr`` when ``rtl`` does not verify."""
    start = time.perf_counter()
    limit = effective_cap(claim, cap)
    conventions = [None] if claim.engine == "coxeter" else list(exprs.CONVENTIONS)
    tried = []
    try:
        for conv in conventions:
            out = _run_payload(claim.kind, claim.engine, claim.payload, limit, conv or "rtl")
            tried.append((conv, out))
            if out.status == VERIFIED:
                break
    except (ClaimInputError, exprs.ExpressionError, ValueError, KeyError, TypeError) as exc:
        out = Outcome(INDETERMINATE, {"input_error": str(exc)})
        tried = [(None, out)]
    conv, out = tried[-1]
    if out.status != VERIFIED:
        # neither reading verified: report the default reading, unless any
        # reading ran out of cap, which is not a refutation
        exceeded = [t for t in tried if t[1].status == EXCEEDED]
        conv, out = exceeded[0] if exceeded else tried[0]
    elif len(tried) > 1:
        first_conv, first = tried[0]
        out = Outcome(VERIFIED, dict(out.witness, retried_from={
            "convention": first_conv, "status": first.status}))
    millis = int((time.perf_counter() - start) * 1000)
    return ReportEntry(claim.id, out.status, out.witness, conv, millis)


def _run_claim_args(args):
    return run_claim(*args)


def run_claims(claims, cap: int | None = None, jobs: int = 1) -> list[ReportEntry]:
    """Run every claim; entries come back sorted by id."""
    claims = list(claims)
    ids = [c.id for c in claims]
    if len(set(ids)) != len(ids):
        raise ClaimInputError("claim ids must be unique")
    if jobs > 1 and len(claims) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_run_claim_args, [(c, cap) for c in claims]))
    else:
        entries = [run_claim(c, cap) for c in claims]
    return sorted(entries, key=lambda e: natural_key(e.id))


def load_claims(path) -> list[Claim]:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise ClaimInputError("claims file must hold a JSON array")
    return [Claim.from_json(d) for d in data]
