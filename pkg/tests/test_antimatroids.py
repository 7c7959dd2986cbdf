from __future__ import annotations

import random
from fractions import Fraction

import pytest

from lattmark import (
    AntimatroidFamily,
    antichain_base,
    antimatroid_constraints,
    compute_path_poset,
    endpoints,
    enumerate_stable,
    family_from_path_poset,
    independent_set_antimatroid,
    min_cost_feasible,
    min_cost_stable,
    reduce_to_matching,
    satisfies_complement,
    transfer_costs,
    validate_antimatroid,
)
from lattmark.antimatroids import filter_by_complements, pair_cost
from lattmark.errors import InputError
from lattmark.generators import random_antimatroid, random_graph

from oracles import brute_force_satisfying_subsets, independence_number


class TestValidation:
    def test_fixture_is_valid(self, quad_antimatroid):
        assert validate_antimatroid(quad_antimatroid) == (True, None)

    def test_missing_ground_set(self):
        fam = AntimatroidFamily.of(["a", "b"], [[], ["a"]])
        ok, witness = validate_antimatroid(fam)
        assert not ok and witness[0] == "ground-not-feasible"

    def test_union_closure_violation(self):
        fam = AntimatroidFamily.of(["a", "b"], [[], ["a"], ["b"]])
        ok, witness = validate_antimatroid(fam)
        assert not ok and witness[0] == "not-union-closed"

    def test_accessibility_violation(self):
        fam = AntimatroidFamily.of(["a", "b"], [[], ["a", "b"]])
        ok, witness = validate_antimatroid(fam)
        assert not ok and witness[0] == "not-accessible"


class TestPaths:
    def test_fixture_endpoints(self, quad_antimatroid):
        assert endpoints(quad_antimatroid, {"a", "c", "d"}) == frozenset({"d"})
        assert endpoints(quad_antimatroid, {"a", "c"}) == frozenset({"c"})
        assert endpoints(quad_antimatroid, set()) == frozenset()

    def test_fixture_paths(self, quad_antimatroid):
        pp = compute_path_poset(quad_antimatroid)
        got = {(s, e) for s, e in pp.paths}
        assert got == {
            (frozenset({"a"}), "a"),
            (frozenset({"b"}), "b"),
            (frozenset({"a", "c"}), "c"),
            (frozenset({"a", "c", "d"}), "d"),
        }

    def test_single_element_free_antimatroid(self):
        fam = AntimatroidFamily.of(["x"], [[], ["x"]])
        pp = compute_path_poset(fam)
        assert pp.paths == ((frozenset({"x"}), "x"),)
        assert family_from_path_poset(pp) == fam

    def test_path_definitions_agree_on_random_instances(self):
        rng = random.Random(13)
        for _ in range(500):
            fam = random_antimatroid(rng.randint(1, 6), rng)
            assert validate_antimatroid(fam) == (True, None)
            compute_path_poset(fam)  # internally cross-checks both definitions

    def test_family_round_trip(self, quad_antimatroid):
        pp = compute_path_poset(quad_antimatroid)
        assert family_from_path_poset(pp) == quad_antimatroid

    def test_feasible_sets_are_unions_of_their_path_subsets(self, quad_antimatroid):
        pp = compute_path_poset(quad_antimatroid)
        for g in quad_antimatroid.feasible:
            union = frozenset()
            for s in pp.subpaths(g):
                union |= s
            assert union == g


class TestConstraints:
    def test_fixture_filtering(self, quad_antimatroid):
        pp = compute_path_poset(quad_antimatroid)
        cs = antimatroid_constraints(pp)
        assert len(cs) == len(quad_antimatroid.ground)
        got = filter_by_complements(quad_antimatroid.ground, cs)
        assert set(got) == set(quad_antimatroid.feasible)
        # independent brute force over all 16 subsets
        feasible = set(quad_antimatroid.feasible)
        want = brute_force_satisfying_subsets(
            quad_antimatroid.ground, lambda t: t in feasible
        )
        assert sorted(got, key=sorted) == sorted(want, key=sorted)

    def test_complement_semantics_on_fixture(self, quad_antimatroid):
        pp = compute_path_poset(quad_antimatroid)
        (c_d,) = [c for c in antimatroid_constraints(pp) if c.beta_c_ids == frozenset({"d"})]
        assert satisfies_complement({"a", "c", "d"}, c_d)
        assert not satisfies_complement({"d"}, c_d)

    def test_element_in_no_path_is_everywhere_excluded(self):
        from lattmark.antimatroids import PathPoset

        pp = PathPoset.of(["x", "y"], [(frozenset({"x"}), "x")])
        cs = antimatroid_constraints(pp)
        got = filter_by_complements(pp.ground, cs)
        assert all("y" not in t for t in got)

    def test_random_instances_filter_back_to_family(self):
        rng = random.Random(31)
        for _ in range(60):
            fam = random_antimatroid(rng.randint(1, 6), rng)
            cs = antimatroid_constraints(compute_path_poset(fam))
            got = filter_by_complements(fam.ground, cs)
            assert set(got) == set(fam.feasible)


class TestIndependentSetGadget:
    def test_triangle(self):
        fam, weights = independent_set_antimatroid(["u", "v", "x"], [("u", "v"), ("v", "x"), ("u", "x")])
        assert validate_antimatroid(fam) == (True, None)
        _, value = min_cost_feasible(fam, weights, sense="max")
        assert value == 1

    def test_edgeless_graph(self):
        fam, weights = independent_set_antimatroid(["u", "v", "x"], [])
        _, value = min_cost_feasible(fam, weights, sense="max")
        assert value == 3

    def test_three_path(self):
        fam, weights = independent_set_antimatroid(["u", "v", "x"], [("u", "v"), ("v", "x")])
        _, value = min_cost_feasible(fam, weights, sense="max")
        assert value == 2

    def test_matches_independence_number_on_random_graphs(self):
        rng = random.Random(19)
        for _ in range(40):
            n = rng.randint(1, 6)
            vertices, edges = random_graph(n, rng)
            fam, weights = independent_set_antimatroid(vertices, edges)
            _, value = min_cost_feasible(fam, weights, sense="max")
            assert value == independence_number(vertices, edges)


class TestCosts:
    def test_uniform_negative_cost_selects_ground(self, quad_antimatroid):
        best, value = min_cost_feasible(quad_antimatroid, {x: -1 for x in quad_antimatroid.ground})
        assert best == quad_antimatroid.ground_set and value == -4

    def test_uniform_positive_cost_selects_empty(self, quad_antimatroid):
        best, value = min_cost_feasible(quad_antimatroid, {x: 1 for x in quad_antimatroid.ground})
        assert best == frozenset() and value == 0

    def test_transfer_splits_evenly(self):
        base = antichain_base(["x"])
        costs = transfer_costs(base, {"x": 6})
        rot = base.rotation_poset.rotations["x"]
        assert costs == {pair: Fraction(3) for pair in rot.minus}

    def test_transfer_keeps_exact_rationals(self):
        base = antichain_base(["x"])
        costs = transfer_costs(base, {"x": 1})
        assert set(costs.values()) == {Fraction(1, 2)}

    def test_zero_costs_vanish(self):
        base = antichain_base(["x", "y"])
        assert transfer_costs(base, {}) == {}


class TestReduction:
    def test_fixture_reduction_bijects(self, quad_antimatroid):
        pp = compute_path_poset(quad_antimatroid)
        bundle = reduce_to_matching(pp, {x: -1 for x in quad_antimatroid.ground})
        ms = enumerate_stable(bundle.market(), worker_order=bundle.extendable.worker_order())
        assert len(ms) == len(quad_antimatroid.feasible)
        recovered = {bundle.recover(mu) for mu in ms}
        assert recovered == set(quad_antimatroid.feasible)

    def test_single_element_reduction(self):
        fam = AntimatroidFamily.of(["x"], [[], ["x"]])
        bundle = reduce_to_matching(compute_path_poset(fam), {"x": 5})
        ms = enumerate_stable(bundle.market(), worker_order=bundle.extendable.worker_order())
        assert {bundle.recover(mu) for mu in ms} == {frozenset(), frozenset({"x"})}

    def test_cost_identity_on_every_stable_matching(self, quad_antimatroid):
        rng = random.Random(3)
        pp = compute_path_poset(quad_antimatroid)
        costs = {x: rng.randint(-5, 5) for x in quad_antimatroid.ground}
        bundle = reduce_to_matching(pp, costs)
        for mu in enumerate_stable(bundle.market(), worker_order=bundle.extendable.worker_order()):
            recovered = bundle.recover(mu)
            assert pair_cost(bundle.pair_costs, mu) == sum(costs[x] for x in recovered)

    def test_firm_optimal_matching_costs_nothing(self, quad_antimatroid):
        from lattmark import deferred_acceptance

        pp = compute_path_poset(quad_antimatroid)
        bundle = reduce_to_matching(pp, {x: 7 for x in quad_antimatroid.ground})
        top = deferred_acceptance(bundle.market(), "firms")
        assert pair_cost(bundle.pair_costs, top) == 0

    def test_three_path_reduction_value(self):
        fam, weights = independent_set_antimatroid(["u", "v", "x"], [("u", "v"), ("v", "x")])
        costs = {x: -w for x, w in weights.items()}
        bundle = reduce_to_matching(compute_path_poset(fam), costs)
        _, value = min_cost_stable(
            bundle.market(), bundle.pair_costs, worker_order=bundle.extendable.worker_order()
        )
        assert value == -2

    def test_min_and_max_senses_agree_with_feasible_side(self, quad_antimatroid):
        rng = random.Random(8)
        pp = compute_path_poset(quad_antimatroid)
        costs = {x: rng.randint(-4, 4) for x in quad_antimatroid.ground}
        bundle = reduce_to_matching(pp, costs)
        for sense in ("min", "max"):
            _, got = min_cost_stable(
                bundle.market(), bundle.pair_costs, sense=sense,
                worker_order=bundle.extendable.worker_order(),
            )
            _, want = min_cost_feasible(quad_antimatroid, costs, sense=sense)
            assert got == want

    def test_bad_sense_rejected(self, quad_antimatroid):
        with pytest.raises(InputError):
            min_cost_feasible(quad_antimatroid, {}, sense="upward")

    def test_random_antimatroid_reductions_agree(self):
        rng = random.Random(55)
        for _ in range(6):
            fam = random_antimatroid(rng.randint(1, 4), rng)
            costs = {x: rng.randint(-4, 4) for x in fam.ground}
            bundle = reduce_to_matching(compute_path_poset(fam), costs)
            ms = enumerate_stable(
                bundle.market(), worker_order=bundle.extendable.worker_order()
            )
            assert {bundle.recover(mu) for mu in ms} == set(fam.feasible)
            _, got = min_cost_stable(
                bundle.market(), bundle.pair_costs,
                worker_order=bundle.extendable.worker_order(),
            )
            _, want = min_cost_feasible(fam, costs)
            assert got == want


class TestGadgetInputValidation:
    def test_duplicate_vertices_rejected(self):
        with pytest.raises(InputError):
            independent_set_antimatroid(["u", "u"], [])

    def test_self_loop_rejected(self):
        with pytest.raises(InputError):
            independent_set_antimatroid(["u", "v"], [("u", "u")])

    def test_unknown_endpoint_rejected(self):
        with pytest.raises(InputError):
            independent_set_antimatroid(["u"], [("u", "zz")])
