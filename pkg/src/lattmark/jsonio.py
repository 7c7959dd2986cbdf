"""JSON (de)serialization for every file format the CLI reads and writes.

All payloads carry a schema version field "v": 1.  Dumps are byte-
deterministic: keys sorted, members sorted, rationals in lowest terms as
[numerator, denominator].
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .antimatroids import AntimatroidFamily, PathPoset, ReductionBundle
from .augment import AugmentStep, ExtendableMarket, derive_sets
from .constraints import ComplementJoinConstraint, JoinConstraint
from .errors import InputError
from .markets import (
    ChoiceSpec,
    TriggerRule,
    IfElse,
    Matching,
    MatchingMarket,
    PreferenceList,
    Regular,
    Triggered,
)
from .orders import Lattice, Poset, lattice_from_tables, poset_from_pairs, set_key
from .rotations import RealizedBase, Rotation, RotationPoset

VERSION = 1


def dumps(payload: Mapping[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_json(path: str | Path, payload: Mapping[str, Any]) -> None:
    Path(path).write_text(dumps(payload), encoding="utf-8")


def read_json(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def _need(data: Mapping, key: str, where: str):
    if key not in data:
        raise InputError(f"{where}: missing field {key!r}")
    return data[key]


def _sorted_sets(sets) -> list[list[str]]:
    return [sorted(s) for s in sorted(sets, key=set_key)]


# ---------------------------------------------------------------- lattices


def lattice_to_json(lat: Lattice) -> dict:
    els = list(lat.elements)
    return {
        "v": VERSION,
        "elements": els,
        "leq": sorted([x, y] for (x, y) in lat.poset.relation if x != y),
    }


def lattice_from_json(data: Mapping) -> Lattice:
    els = _need(data, "elements", "lattice")
    if "join" in data or "meet" in data:
        return lattice_from_tables(els, _need(data, "join", "lattice"), _need(data, "meet", "lattice"))
    pairs = [(x, y) for x, y in _need(data, "leq", "lattice")]
    from .orders import lattice_from_order

    return lattice_from_order(poset_from_pairs(els, pairs, close=True))


def poset_to_json(poset: Poset) -> dict:
    return {
        "v": VERSION,
        "elements": list(poset.elements),
        "leq": sorted([x, y] for (x, y) in poset.relation if x != y),
    }


# ----------------------------------------------------------------- markets


def _spec_to_json(spec: ChoiceSpec) -> dict:
    if isinstance(spec, PreferenceList):
        return {"kind": "preference_list", "list": [sorted(e) for e in spec.entries]}
    if isinstance(spec, Triggered):
        return {
            "kind": "triggered",
            "watch": sorted(spec.watch),
            "trigger": spec.trigger,
            "alpha": _sorted_sets(spec.rule.alpha_groups),
            "f_rho": {r: sorted(fs) for r, fs in spec.rule.blocks},
        }
    if isinstance(spec, IfElse):
        return {"kind": "if_else", "priority": spec.priority, "else_set": sorted(spec.else_set)}
    if isinstance(spec, Regular):
        return {
            "kind": "regular",
            "tiers": [sorted(t) for t in spec.tiers],
            "aux_pairs": [list(p) for p in spec.aux_pairs],
        }
    raise InputError(f"unknown spec type {type(spec).__name__}")


def _spec_from_json(data: Mapping) -> ChoiceSpec:
    kind = _need(data, "kind", "choice spec")
    if kind == "preference_list":
        return PreferenceList(tuple(frozenset(e) for e in _need(data, "list", kind)))
    if kind == "triggered":
        rule = TriggerRule(
            alpha_groups=tuple(frozenset(g) for g in _need(data, "alpha", kind)),
            blocks=tuple(sorted((r, frozenset(fs)) for r, fs in _need(data, "f_rho", kind).items())),
        )
        return Triggered(frozenset(_need(data, "watch", kind)), _need(data, "trigger", kind), rule)
    if kind == "if_else":
        return IfElse(_need(data, "priority", kind), frozenset(_need(data, "else_set", kind)))
    if kind == "regular":
        return Regular(
            tuple(frozenset(t) for t in _need(data, "tiers", kind)),
            tuple((a, b) for a, b in _need(data, "aux_pairs", kind)),
        )
    raise InputError(f"unknown choice kind {kind!r}")


def market_to_json(market: MatchingMarket) -> dict:
    return {
        "v": VERSION,
        "firms": list(market.firms),
        "workers": list(market.workers),
        "choice": {a: _spec_to_json(s) for a, s in sorted(market.choice.items())},
    }


def market_from_json(data: Mapping) -> MatchingMarket:
    return MatchingMarket(
        tuple(_need(data, "firms", "market")),
        tuple(_need(data, "workers", "market")),
        {a: _spec_from_json(s) for a, s in _need(data, "choice", "market").items()},
    )


def matching_to_json(mu: Matching) -> dict:
    return {"pairs": [list(p) for p in sorted(mu.pairs)]}


def matching_from_json(data: Mapping) -> Matching:
    return Matching(frozenset((f, w) for f, w in _need(data, "pairs", "matching")))


def matchings_to_json(ms) -> dict:
    return {"v": VERSION, "matchings": [matching_to_json(m) for m in ms]}


# --------------------------------------------------------------- rotations


def rotation_poset_to_json(rp: RotationPoset) -> dict:
    return {
        "v": VERSION,
        "rotations": [
            {"id": rid, "plus": [list(p) for p in sorted(rot.plus)], "minus": [list(p) for p in sorted(rot.minus)]}
            for rid, rot in sorted(rp.rotations.items())
        ],
        "leq": sorted([a, b] for (a, b) in rp.poset.relation if a != b),
        "worker_optimal": matching_to_json(rp.worker_optimal),
    }


def rotation_poset_from_json(data: Mapping) -> RotationPoset:
    rots = {}
    for r in _need(data, "rotations", "rotation poset"):
        rots[r["id"]] = Rotation(
            r["id"],
            frozenset((f, w) for f, w in r["plus"]),
            frozenset((f, w) for f, w in r["minus"]),
        )
    ids = tuple(sorted(rots))
    rel = frozenset((a, b) for a, b in data.get("leq", [])) | frozenset((i, i) for i in ids)
    return RotationPoset(Poset(ids, rel), rots, matching_from_json(_need(data, "worker_optimal", "rotation poset")))


def realized_base_to_json(base: RealizedBase) -> dict:
    return {
        "v": VERSION,
        "market": market_to_json(base.market),
        "phi": dict(sorted(base.rotation_of.items())),
        "rotation_poset": rotation_poset_to_json(base.rotation_poset),
    }


def realized_base_from_json(data: Mapping) -> RealizedBase:
    return RealizedBase(
        market_from_json(_need(data, "market", "realized base")),
        dict(_need(data, "phi", "realized base")),
        rotation_poset_from_json(_need(data, "rotation_poset", "realized base")),
    )


# ------------------------------------------------------------- constraints


def constraint_to_json(jc: JoinConstraint) -> dict:
    return {"alpha": _sorted_sets(jc.alpha_groups), "beta": sorted(jc.beta_ids)}


def constraint_from_json(data: Mapping) -> JoinConstraint:
    return JoinConstraint.make(_need(data, "alpha", "constraint"), _need(data, "beta", "constraint"))


def complement_to_json(cjc: ComplementJoinConstraint) -> dict:
    return {"beta_c": sorted(cjc.beta_c_ids), "alpha_c": _sorted_sets(cjc.alpha_c_groups)}


def complement_from_json(data: Mapping) -> ComplementJoinConstraint:
    return ComplementJoinConstraint.make(_need(data, "beta_c", "complement"), _need(data, "alpha_c", "complement"))


# ----------------------------------------------------------------- bundles


def extendable_to_json(em: ExtendableMarket) -> dict:
    return {
        "v": VERSION,
        "market": market_to_json(em.market),
        "base": realized_base_to_json(em.base),
        "copy_map": dict(sorted(em.copy_map.items())),
        "aux_workers": sorted(em.aux_workers),
        "aux_firms": sorted(em.aux_firms),
        "a_f": {f: [list(p) for p in pairs] for f, pairs in sorted(em.a_f.items())},
        "augment_count": em.augment_count,
        "steps": [
            {
                "constraint": constraint_to_json(s.constraint.constraint),
                "w0": s.w0,
                "f0": s.f0,
                "copies": list(s.copies),
            }
            for s in em.steps
        ],
    }


def extendable_from_json(data: Mapping) -> ExtendableMarket:
    base = realized_base_from_json(_need(data, "base", "bundle"))
    steps = []
    for s in data.get("steps", []):
        rjc = derive_sets(constraint_from_json(s["constraint"]), base.rotation_poset)
        steps.append(AugmentStep(rjc, s["w0"], s["f0"], tuple(s["copies"])))
    return ExtendableMarket(
        market=market_from_json(_need(data, "market", "bundle")),
        base=base,
        copy_map=dict(_need(data, "copy_map", "bundle")),
        aux_workers=frozenset(data.get("aux_workers", [])),
        aux_firms=frozenset(data.get("aux_firms", [])),
        a_f={f: tuple((a, b) for a, b in pairs) for f, pairs in _need(data, "a_f", "bundle").items()},
        augment_count=int(data.get("augment_count", len(steps))),
        steps=tuple(steps),
    )


def pair_costs_to_json(pair_costs: Mapping) -> list:
    return [
        [f, w, v.numerator, v.denominator]
        for (f, w), v in sorted(pair_costs.items())
    ]


def pair_costs_from_json(rows) -> dict:
    return {(f, w): Fraction(num, den) for f, w, num, den in rows}


def reduction_to_json(bundle: ReductionBundle, cost_scale: int = 1) -> dict:
    out = {
        "v": VERSION,
        "extension": extendable_to_json(bundle.extendable),
        "pair_costs": pair_costs_to_json(bundle.pair_costs),
        "ground": list(bundle.ground),
    }
    if cost_scale != 1:
        out["cost_scale"] = cost_scale
    return out


def reduction_from_json(data: Mapping) -> ReductionBundle:
    return ReductionBundle(
        extendable_from_json(_need(data, "extension", "reduction bundle")),
        pair_costs_from_json(data.get("pair_costs", [])),
        tuple(_need(data, "ground", "reduction bundle")),
    )


# ------------------------------------------------------------- antimatroids


def antimatroid_to_json(fam: AntimatroidFamily) -> dict:
    return {"v": VERSION, "ground": list(fam.ground), "feasible": [sorted(g) for g in fam.feasible]}


def path_poset_to_json(pp: PathPoset) -> dict:
    return {
        "v": VERSION,
        "ground": list(pp.ground),
        "paths": [{"set": sorted(s), "endpoint": e} for s, e in pp.paths],
    }


def antimatroid_from_json(data: Mapping) -> AntimatroidFamily | PathPoset:
    ground = _need(data, "ground", "antimatroid")
    if "feasible" in data:
        return AntimatroidFamily.of(ground, [frozenset(g) for g in data["feasible"]])
    if "paths" in data:
        return PathPoset.of(ground, [(frozenset(p["set"]), p["endpoint"]) for p in data["paths"]])
    raise InputError("antimatroid: need either 'feasible' or 'paths'")


def graph_from_json(data: Mapping) -> tuple[list[str], list[tuple[str, str]]]:
    return list(_need(data, "vertices", "graph")), [(u, v) for u, v in _need(data, "edges", "graph")]


def costs_from_json(data: Mapping):
    """Returns ('ground', dict) or ('pairs', dict) depending on the payload."""
    if "ground" in data:
        return "ground", {k: int(v) for k, v in data["ground"].items()}
    if "pairs" in data:
        return "pairs", pair_costs_from_json(data["pairs"])
    raise InputError("costs: need either 'ground' or 'pairs'")
