"""Built-in fixture checks behind the `lattmark selftest` command."""

from __future__ import annotations

import random
import time

from .antimatroids import (
    compute_path_poset,
    filter_by_complements,
    antimatroid_constraints,
    independent_set_antimatroid,
    min_cost_feasible,
    min_cost_stable,
    reduce_to_matching,
    validate_antimatroid,
)
from .augment import synthesize_from_lattice, verify_extension
from .constraints import constraints_from_lattice, filter_lower_sets
from .fixtures import (
    four_element_antimatroid,
    hexagon_lattice,
    pentagon_lattice,
    seven_pair_market,
    seven_pair_rotations,
    seven_pair_stable_matchings,
)
from .generators import random_graph
from .markets import deferred_acceptance, enumerate_stable
from .orders import canonical_partial_rep, join_irreducibles, lower_sets
from .rotations import extract_rotations


def run(quick: bool = False, seed: int = 7) -> int:
    failures = 0

    def check(name: str, ok: bool):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures += 1

    t0 = time.monotonic()

    lat = hexagon_lattice()
    rep = canonical_partial_rep(lat)
    check(
        "hexagon partial representation table",
        rep == {
            "a": frozenset(),
            "b": frozenset({"b"}),
            "c": frozenset({"c"}),
            "d": frozenset({"c", "d"}),
            "e": frozenset({"c", "e"}),
            "f": frozenset({"b", "c", "d", "e"}),
        },
    )
    _, xj_poset = join_irreducibles(lat)
    family = lower_sets(xj_poset)
    filtered = filter_lower_sets(family, constraints_from_lattice(lat))
    check("hexagon constraint filtering", set(filtered) == set(rep.values()))

    market = seven_pair_market()
    stables = enumerate_stable(market)
    expected = seven_pair_stable_matchings()
    check("seven-pair market has its ten stable matchings",
          {m.key() for m in stables} == {m.key() for m in expected.values()})
    check("seven-pair firm-proposing optimum",
          deferred_acceptance(market, "firms") == expected["mu10"])
    check("seven-pair worker-proposing optimum",
          deferred_acceptance(market, "workers") == expected["mu1"])
    rp = extract_rotations(market)
    got = {(rot.plus, rot.minus) for rot in rp.rotations.values()}
    check("seven-pair rotations", got == set(seven_pair_rotations().values()))

    fam = four_element_antimatroid()
    ok, _ = validate_antimatroid(fam)
    check("four-element antimatroid axioms", ok)
    pp = compute_path_poset(fam)
    filtered_sets = filter_by_complements(fam.ground, antimatroid_constraints(pp))
    check("four-element antimatroid constraint filtering", set(filtered_sets) == set(fam.feasible))

    result = synthesize_from_lattice(pentagon_lattice())
    em = result.extendable
    report = verify_extension(em.base, em, result.order_constraints + result.lattice_constraints)
    check("pentagon synthesis verifies", report.ok)

    if not quick:
        result = synthesize_from_lattice(lat)
        em = result.extendable
        report = verify_extension(em.base, em, result.order_constraints + result.lattice_constraints)
        check("hexagon synthesis verifies", report.ok)

        vertices, edges = random_graph(3, random.Random(seed), p=0.9)
        gadget, weights = independent_set_antimatroid(vertices, edges)
        costs = {x: -w for x, w in weights.items()}
        bundle = reduce_to_matching(compute_path_poset(gadget), costs)
        _, best = min_cost_stable(bundle.market(), bundle.pair_costs,
                                  worker_order=bundle.extendable.worker_order())
        _, want = min_cost_feasible(gadget, costs)
        check("independent-set reduction optimum agrees", best == want)

    print(f"{'OK' if failures == 0 else 'FAILED'}  ({time.monotonic() - t0:.1f}s)")
    return 0 if failures == 0 else 4
