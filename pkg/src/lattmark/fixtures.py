"""Built-in desk-scale fixtures used by the selftest command and the tests.

hexagon_lattice: the 6-element non-distributive lattice whose join
irreducibles form a 3-chain-plus-isolated-point poset.  seven_pair_market:
a 7-firm / 7-worker one-to-one market realizing that poset as its rotation
poset, with ten stable matchings.  four_element_antimatroid: a feasible
family on {a, b, c, d} whose paths are {a}, {b}, {a,c}, {a,c,d}.
"""

from __future__ import annotations

from .antimatroids import AntimatroidFamily
from .markets import Matching, MatchingMarket, PreferenceList
from .orders import Lattice, lattice_from_order, poset_from_pairs


def _lattice_from_covers(elements, covers) -> Lattice:
    return lattice_from_order(poset_from_pairs(elements, covers, close=True))


def hexagon_lattice() -> Lattice:
    """Elements a..f: a bottom, f top, b isolated between them, c below d and e."""
    return _lattice_from_covers(
        ["a", "b", "c", "d", "e", "f"],
        [("a", "b"), ("a", "c"), ("c", "d"), ("c", "e"), ("b", "f"), ("d", "f"), ("e", "f")],
    )


def pentagon_lattice() -> Lattice:
    return _lattice_from_covers(
        ["bot", "p", "q1", "q2", "top"],
        [("bot", "p"), ("bot", "q1"), ("q1", "q2"), ("p", "top"), ("q2", "top")],
    )


def diamond_lattice() -> Lattice:
    return _lattice_from_covers(
        ["bot", "p", "q", "r", "top"],
        [("bot", "p"), ("bot", "q"), ("bot", "r"), ("p", "top"), ("q", "top"), ("r", "top")],
    )


def boolean_lattice(atoms: int) -> Lattice:
    names = {}
    for mask in range(1 << atoms):
        members = tuple(sorted(f"a{i + 1}" for i in range(atoms) if mask >> i & 1))
        names[mask] = "{" + ",".join(members) + "}"
    pairs = [
        (names[s], names[t])
        for s in range(1 << atoms)
        for t in range(1 << atoms)
        if s & t == s
    ]
    return lattice_from_order(poset_from_pairs(sorted(names.values()), pairs, close=True))


def seven_pair_market() -> MatchingMarket:
    choice = {
        "f1": PreferenceList.of("w5", "w1"),
        "f2": PreferenceList.of("w7", "w4", "w2"),
        "f3": PreferenceList.of("w2", "w3"),
        "f4": PreferenceList.of("w6", "w3", "w4"),
        "f5": PreferenceList.of("w1", "w5"),
        "f6": PreferenceList.of("w3", "w6"),
        "f7": PreferenceList.of("w4", "w7"),
        "w1": PreferenceList.of("f1", "f5"),
        "w2": PreferenceList.of("f2", "f3"),
        "w3": PreferenceList.of("f3", "f4", "f6"),
        "w4": PreferenceList.of("f4", "f2", "f7"),
        "w5": PreferenceList.of("f5", "f1"),
        "w6": PreferenceList.of("f6", "f4"),
        "w7": PreferenceList.of("f7", "f2"),
    }
    firms = tuple(f"f{i}" for i in range(1, 8))
    workers = tuple(f"w{i}" for i in range(1, 8))
    return MatchingMarket(firms, workers, choice)


def _mu(*pairs) -> Matching:
    return Matching(frozenset(pairs))


def seven_pair_stable_matchings() -> dict[str, Matching]:
    """The ten stable matchings of seven_pair_market, keyed mu1..mu10."""
    return {
        "mu1": _mu(("f1", "w1"), ("f2", "w2"), ("f3", "w3"), ("f4", "w4"), ("f5", "w5"), ("f6", "w6"), ("f7", "w7")),
        "mu2": _mu(("f1", "w5"), ("f2", "w2"), ("f3", "w3"), ("f4", "w4"), ("f5", "w1"), ("f6", "w6"), ("f7", "w7")),
        "mu3": _mu(("f1", "w1"), ("f2", "w4"), ("f3", "w2"), ("f4", "w3"), ("f5", "w5"), ("f6", "w6"), ("f7", "w7")),
        "mu4": _mu(("f1", "w5"), ("f2", "w4"), ("f3", "w2"), ("f4", "w3"), ("f5", "w1"), ("f6", "w6"), ("f7", "w7")),
        "mu5": _mu(("f1", "w1"), ("f2", "w4"), ("f3", "w2"), ("f4", "w6"), ("f5", "w5"), ("f6", "w3"), ("f7", "w7")),
        "mu6": _mu(("f1", "w1"), ("f2", "w7"), ("f3", "w2"), ("f4", "w3"), ("f5", "w5"), ("f6", "w6"), ("f7", "w4")),
        "mu7": _mu(("f1", "w5"), ("f2", "w4"), ("f3", "w2"), ("f4", "w6"), ("f5", "w1"), ("f6", "w3"), ("f7", "w7")),
        "mu8": _mu(("f1", "w5"), ("f2", "w7"), ("f3", "w2"), ("f4", "w3"), ("f5", "w1"), ("f6", "w6"), ("f7", "w4")),
        "mu9": _mu(("f1", "w1"), ("f2", "w7"), ("f3", "w2"), ("f4", "w6"), ("f5", "w5"), ("f6", "w3"), ("f7", "w4")),
        "mu10": _mu(("f1", "w5"), ("f2", "w7"), ("f3", "w2"), ("f4", "w6"), ("f5", "w1"), ("f6", "w3"), ("f7", "w4")),
    }


def seven_pair_rotations() -> dict[str, tuple[frozenset, frozenset]]:
    """The four rotations of seven_pair_market as (plus, minus) pair sets."""
    return {
        "rot1": (
            frozenset({("f2", "w4"), ("f3", "w2"), ("f4", "w3")}),
            frozenset({("f2", "w2"), ("f3", "w3"), ("f4", "w4")}),
        ),
        "rot2": (
            frozenset({("f1", "w5"), ("f5", "w1")}),
            frozenset({("f1", "w1"), ("f5", "w5")}),
        ),
        "rot3": (
            frozenset({("f4", "w6"), ("f6", "w3")}),
            frozenset({("f4", "w3"), ("f6", "w6")}),
        ),
        "rot4": (
            frozenset({("f2", "w7"), ("f7", "w4")}),
            frozenset({("f2", "w4"), ("f7", "w7")}),
        ),
    }


def four_element_antimatroid() -> AntimatroidFamily:
    return AntimatroidFamily.of(
        ["a", "b", "c", "d"],
        [
            [],
            ["a"],
            ["b"],
            ["a", "b"],
            ["a", "c"],
            ["a", "b", "c"],
            ["a", "c", "d"],
            ["a", "b", "c", "d"],
        ],
    )
