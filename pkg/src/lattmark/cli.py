"""Command line interface.

Every command validates its inputs, emits a machine-readable run report to
stdout, and exits 0 on success, 2 on a validation failure, 3 on an exceeded
search bound, and 4 on an internal invariant breach.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from itertools import permutations
from pathlib import Path

from . import jsonio
from .antimatroids import (
    AntimatroidFamily,
    PathPoset,
    compute_path_poset,
    min_cost_stable,
    reduce_to_matching,
    validate_antimatroid,
)
from .augment import synthesize_from_lattice, verify_extension, project_to_base
from .dot import antimatroid_dot, poset_dot, rotation_poset_dot
from .errors import InputError, LattmarkError
from .markets import enumerate_stable, stable_lattice
from .orders import check_order_isomorphism
from .rotations import antichain_base, extract_rotations, matching_to_rotations


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]


class Report:
    def __init__(self, command: str, inputs: list[str]):
        self.payload = {
            "command": command,
            "inputs": {p: _digest(p) for p in inputs},
            "checks": [],
            "outputs": [],
            "outcome": "ok",
        }
        self.start = time.monotonic()

    def check(self, name: str, ok: bool, witness=None):
        entry = {"name": name, "ok": bool(ok)}
        if not ok and witness is not None:
            entry["witness"] = witness
        self.payload["checks"].append(entry)
        if not ok:
            self.payload["outcome"] = "failed"

    def wrote(self, path: str):
        self.payload["outputs"].append(str(path))

    def emit(self, extra: dict | None = None) -> int:
        self.payload["elapsed_s"] = round(time.monotonic() - self.start, 3)
        if extra:
            self.payload.update(extra)
        print(json.dumps(self.payload, sort_keys=True, indent=2, default=str))
        return 0 if self.payload["outcome"] == "ok" else 4


def _load_market_or_bundle(path: str):
    data = jsonio.read_json(path)
    if "extension" in data:
        bundle = jsonio.reduction_from_json(data)
        return bundle.extendable.market, bundle.extendable, bundle
    if "base" in data:
        em = jsonio.extendable_from_json(data)
        return em.market, em, None
    return jsonio.market_from_json(data), None, None


def cmd_synthesize(args) -> int:
    report = Report("synthesize", [args.lattice])
    lattice = jsonio.lattice_from_json(jsonio.read_json(args.lattice))
    result = synthesize_from_lattice(lattice)
    em = result.extendable
    ext_report = verify_extension(em.base, em, result.order_constraints + result.lattice_constraints)
    for c in ext_report.checks:
        report.check(c.name, c.ok, c.witness)
    jsonio.write_json(args.out, jsonio.extendable_to_json(em))
    report.wrote(args.out)
    iso_table = {x: jsonio.matching_to_json(mu) for x, mu in sorted(result.iso.items())}
    extra = {"agents": em.agent_count(), "iso": iso_table}
    if args.iso:
        jsonio.write_json(args.iso, {"v": 1, "iso": iso_table})
        report.wrote(args.iso)
    return report.emit(extra)


def cmd_verify(args) -> int:
    report = Report("verify", [args.market, args.lattice])
    market, em, _ = _load_market_or_bundle(args.market)
    lattice = jsonio.lattice_from_json(jsonio.read_json(args.lattice))
    worker_order = em.worker_order() if em is not None else None
    lat, ms = stable_lattice(market, worker_order=worker_order, **_bound_kwargs(args))
    report.check("counts-match", len(ms) == len(lattice.elements),
                 {"stable": len(ms), "lattice": len(lattice.elements)})
    if em is not None:
        rp = em.base.rotation_poset
        from .orders import canonical_partial_rep

        rep = canonical_partial_rep(lattice)
        by_rep = {matching_to_rotations(rp, project_to_base(em, mu)): i for i, mu in enumerate(ms)}
        mapping = {}
        ok = len(ms) == len(lattice.elements)
        for x in lattice.elements:
            reachable = all(j in em.base.rotation_of for j in rep[x])
            target = frozenset(em.base.rotation_of[j] for j in rep[x]) if reachable else None
            if target not in by_rep:
                ok = False
                break
            mapping[x] = lat.elements[by_rep[target]]
        if ok:
            ok, witness = check_order_isomorphism(mapping, lattice.poset, lat.elements, lat.poset)
            report.check("order-isomorphism", ok, witness)
        else:
            report.check("order-isomorphism", False, "no representation-based mapping")
    else:
        if len(lattice.elements) > 8:
            raise InputError("plain-market verification searches over permutations; 8 elements max")
        found = False
        if len(ms) == len(lattice.elements):
            for perm in permutations(range(len(ms))):
                mapping = {x: lat.elements[perm[i]] for i, x in enumerate(lattice.elements)}
                ok, _ = check_order_isomorphism(mapping, lattice.poset, lat.elements, lat.poset)
                if ok:
                    found = True
                    break
        report.check("order-isomorphism", found)
    return report.emit()


def _bound_kwargs(args) -> dict:
    return {} if args.bound_nodes is None else {"node_bound": args.bound_nodes}


def cmd_enumerate(args) -> int:
    report = Report("enumerate", [args.market])
    market, em, _ = _load_market_or_bundle(args.market)
    worker_order = em.worker_order() if em is not None else None
    ms = enumerate_stable(market, worker_order=worker_order, **_bound_kwargs(args))
    payload = jsonio.matchings_to_json(ms)
    if args.out:
        jsonio.write_json(args.out, payload)
        report.wrote(args.out)
    return report.emit({"count": len(ms)} if args.out else {"count": len(ms), "matchings": payload["matchings"]})


def cmd_rotations(args) -> int:
    report = Report("rotations", [args.market])
    market, em, _ = _load_market_or_bundle(args.market)
    worker_order = em.worker_order() if em is not None else None
    rp = extract_rotations(market, worker_order=worker_order,
                           node_bound=args.bound_nodes)
    payload = jsonio.rotation_poset_to_json(rp)
    if args.out:
        jsonio.write_json(args.out, payload)
        report.wrote(args.out)
    if args.dot:
        Path(args.dot).write_text(rotation_poset_dot(rp), encoding="utf-8")
        report.wrote(args.dot)
    return report.emit({"rotations": payload["rotations"], "leq": payload["leq"]})


def cmd_reduce(args) -> int:
    report = Report("reduce", [args.antimatroid, args.costs])
    payload = jsonio.antimatroid_from_json(jsonio.read_json(args.antimatroid))
    if isinstance(payload, AntimatroidFamily):
        ok, witness = validate_antimatroid(payload)
        report.check("antimatroid-axioms", ok, witness)
        if not ok:
            raise InputError(f"not an antimatroid: {witness}")
        pp = compute_path_poset(payload)
    else:
        pp = payload
    if len(pp.ground) > args.bound_elements:
        from .errors import EnumerationBoundExceeded

        raise EnumerationBoundExceeded(len(pp.ground), args.bound_elements)
    kind, costs = jsonio.costs_from_json(jsonio.read_json(args.costs))
    if kind != "ground":
        raise InputError("reduce expects ground costs")
    scale = 1
    if args.integer_costs:
        # pre-scale so every transferred pair cost is integral
        from math import lcm

        base = antichain_base(list(pp.ground))
        sizes = [len(rot.minus) for rot in base.rotation_poset.rotations.values()]
        scale = lcm(*sizes) if sizes else 1
        costs = {x: c * scale for x, c in costs.items()}
    bundle = reduce_to_matching(pp, costs)
    jsonio.write_json(args.out, jsonio.reduction_to_json(bundle, cost_scale=scale))
    report.wrote(args.out)
    return report.emit({
        "agents": bundle.extendable.agent_count(),
        "ground": list(bundle.ground),
        "cost_scale": scale,
    })


def cmd_solve(args) -> int:
    inputs = [args.bundle] + ([args.costs] if args.costs else [])
    report = Report("solve", inputs)
    market, em, reduction = _load_market_or_bundle(args.bundle)
    if args.costs:
        kind, costs = jsonio.costs_from_json(jsonio.read_json(args.costs))
        if kind == "ground":
            if reduction is None:
                raise InputError("ground costs require a reduction bundle")
            from .antimatroids import transfer_costs

            pair_costs = transfer_costs(reduction.extendable.base, costs)
        else:
            pair_costs = costs
    elif reduction is not None:
        pair_costs = reduction.pair_costs
    else:
        raise InputError("no costs given and the input is not a reduction bundle")
    worker_order = em.worker_order() if em is not None else None
    mu, value = min_cost_stable(market, pair_costs, sense=args.sense, worker_order=worker_order,
                                **_bound_kwargs(args))
    extra = {
        "value": [value.numerator, value.denominator],
        "matching": jsonio.matching_to_json(mu),
    }
    if reduction is not None:
        extra["recovered_set"] = sorted(reduction.recover(mu))
    return report.emit(extra)


def cmd_export_dot(args) -> int:
    report = Report("export-dot", [args.input])
    data = jsonio.read_json(args.input)
    if "rotations" in data:
        text = rotation_poset_dot(jsonio.rotation_poset_from_json(data))
    elif "feasible" in data or "paths" in data:
        payload = jsonio.antimatroid_from_json(data)
        if isinstance(payload, PathPoset):
            from .antimatroids import family_from_path_poset

            payload = family_from_path_poset(payload)
        text = antimatroid_dot(payload)
    elif "elements" in data:
        lat = jsonio.lattice_from_json(data)
        text = poset_dot(lat.poset)
    else:
        raise InputError("cannot infer a diagram from this payload")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        report.wrote(args.out)
        return report.emit()
    print(text, end="")
    return 0


def cmd_selftest(args) -> int:
    from . import selftest

    return selftest.run(quick=args.quick, seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lattmark",
        description="Realize finite lattices as stable-matching markets; "
        "reduce antimatroid optimization to minimum-cost stable matching.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="lattice file -> market bundle with verified isomorphism")
    p.add_argument("lattice")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--iso", help="also write the element -> matching table")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", help="check a market (or bundle) against a lattice")
    p.add_argument("market")
    p.add_argument("lattice")
    p.add_argument("--bound-nodes", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list all stable matchings")
    p.add_argument("market")
    p.add_argument("-o", "--out")
    p.add_argument("--bound-nodes", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("rotations", help="extract the rotation poset of a one-to-one market")
    p.add_argument("market")
    p.add_argument("-o", "--out")
    p.add_argument("--dot")
    p.add_argument("--bound-nodes", type=int, default=None)
    p.set_defaults(func=cmd_rotations)

    p = sub.add_parser("reduce", help="antimatroid + ground costs -> reduction bundle")
    p.add_argument("antimatroid")
    p.add_argument("costs")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--bound-elements", type=int, default=20)
    p.add_argument("--integer-costs", action="store_true",
                   help="pre-scale ground costs so pair costs are integers")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="optimize pair costs over stable matchings")
    p.add_argument("bundle")
    p.add_argument("costs", nargs="?")
    p.add_argument("--sense", choices=["min", "max"], default="min")
    p.add_argument("--bound-nodes", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("export-dot", help="Hasse diagram of a lattice/rotation/antimatroid file")
    p.add_argument("input")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("selftest", help="run the built-in fixture checks")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LattmarkError as exc:
        print(json.dumps({"outcome": "error", "error": str(exc), "kind": type(exc).__name__}))
        return getattr(exc, "exit_code", 2)
    except FileNotFoundError as exc:
        print(json.dumps({"outcome": "error", "error": str(exc), "kind": "FileNotFound"}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
