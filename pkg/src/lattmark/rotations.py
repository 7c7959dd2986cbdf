"""Rotation structure of one-to-one markets and the antichain gadget bank.

A rotation is the minimal difference between a stable matching and an
immediate successor.  For one-to-one markets the lower closed sets of the
rotation poset represent the whole stable matching lattice; the gadget bank
realizes any trivially ordered set as such a rotation poset, two firms and
two workers per element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateId,
    InputError,
    NonLatticeStructure,
    NotLowerClosed,
    NotRepresentable,
)
from .markets import (
    FirmOrder,
    Matching,
    MatchingMarket,
    PreferenceList,
    firm_order_compare,
    enumerate_stable,
)
from .orders import Poset, lattice_from_order, lower_sets, set_key

Pair = tuple[str, str]


@dataclass(frozen=True)
class Rotation:
    id: str
    plus: frozenset[Pair]
    minus: frozenset[Pair]

    def __post_init__(self):
        if not self.plus or not self.minus:
            raise InputError(f"rotation {self.id!r} must have nonempty plus and minus sets")
        if self.plus & self.minus:
            raise InputError(f"rotation {self.id!r} has overlapping plus and minus sets")

    def firms_minus(self) -> frozenset[str]:
        return frozenset(f for f, _ in self.minus)

    def workers_plus(self) -> frozenset[str]:
        return frozenset(w for _, w in self.plus)


@dataclass(frozen=True, eq=False)
class RotationPoset:
    poset: Poset
    rotations: Mapping[str, Rotation]
    worker_optimal: Matching

    def __eq__(self, other):
        return (
            isinstance(other, RotationPoset)
            and self.poset == other.poset
            and dict(self.rotations) == dict(other.rotations)
            and self.worker_optimal == other.worker_optimal
        )

    def ids(self) -> tuple[str, ...]:
        return self.poset.elements


@dataclass(frozen=True, eq=False)
class RealizedBase:
    """A one-to-one market realizing a poset: rotation_of maps poset elements onto
    rotation ids, order-isomorphically."""

    market: MatchingMarket
    rotation_of: Mapping[str, str]
    rotation_poset: RotationPoset

    def __eq__(self, other):
        return (
            isinstance(other, RealizedBase)
            and self.market == other.market
            and dict(self.rotation_of) == dict(other.rotation_of)
            and self.rotation_poset == other.rotation_poset
        )


def gadget_agents(element: str) -> tuple[str, str, str, str]:
    """Firm and worker ids of the 4-agent swap gadget for one element."""
    return (f"{element}.f1", f"{element}.f2", f"{element}.w1", f"{element}.w2")


def antichain_base(ids: Sequence[str]) -> RealizedBase:
    """One swap gadget per id: two stable matchings each, one rotation each,
    rotations mutually incomparable, rotation ids equal to the input ids."""
    ids = list(ids)
    if not ids:
        raise InputError("antichain_base requires a nonempty id list")
    if len(set(ids)) != len(ids):
        raise DuplicateId(sorted(i for i in ids if ids.count(i) > 1)[0])
    return _gadget_bank(ids)


def _gadget_bank(ids: Sequence[str]) -> RealizedBase:
    firms: list[str] = []
    workers: list[str] = []
    choice: dict[str, PreferenceList] = {}
    rotations: dict[str, Rotation] = {}
    mu_w_pairs: set[Pair] = set()
    for i in ids:
        f1, f2, w1, w2 = gadget_agents(i)
        firms += [f1, f2]
        workers += [w1, w2]
        choice[f1] = PreferenceList.of(w2, w1)
        choice[f2] = PreferenceList.of(w1, w2)
        choice[w1] = PreferenceList.of(f1, f2)
        choice[w2] = PreferenceList.of(f2, f1)
        rotations[i] = Rotation(
            id=i,
            plus=frozenset({(f1, w2), (f2, w1)}),
            minus=frozenset({(f1, w1), (f2, w2)}),
        )
        mu_w_pairs |= {(f1, w1), (f2, w2)}
    market = MatchingMarket(tuple(sorted(firms)), tuple(sorted(workers)), choice)
    poset = Poset(tuple(sorted(ids)), frozenset((i, i) for i in ids))
    rp = RotationPoset(poset, rotations, Matching(frozenset(mu_w_pairs)))
    return RealizedBase(market, {i: i for i in ids}, rp)


def extract_rotations(market: MatchingMarket, node_bound: int | None = None, worker_order=None) -> RotationPoset:
    """Recover the rotation poset of a one-to-one market by enumeration.

    Rotations are read off the covering pairs of the comparison order over
    stable matchings; the order over rotations is derived from occurrence
    sets (one rotation sits below another when it occurs wherever the
    other does).
    """
    kwargs = {} if node_bound is None else {"node_bound": node_bound}
    ms = enumerate_stable(market, worker_order=worker_order, **kwargs)
    for mu in ms:
        if any(len(mu.workers_of(f)) > 1 for f in market.firms) or any(
            len(mu.firms_of(w)) > 1 for w in market.workers
        ):
            raise InputError("extract_rotations requires a one-to-one market")

    n = len(ms)
    geq = [[False] * n for _ in range(n)]  # geq[i][j]: ms[i] >= ms[j]
    for i in range(n):
        geq[i][i] = True
        for j in range(i + 1, n):
            cmp = firm_order_compare(market, ms[i], ms[j])
            if cmp is FirmOrder.GEQ:
                geq[i][j] = True
            elif cmp is FirmOrder.LEQ:
                geq[j][i] = True

    found: dict[tuple, tuple[frozenset[Pair], frozenset[Pair]]] = {}
    cover_edges: list[tuple[int, int, tuple]] = []
    for i in range(n):
        for j in range(n):
            if i == j or not geq[j][i]:
                continue
            # j covers i when nothing sits strictly between them
            if any(k not in (i, j) and geq[j][k] and geq[k][i] for k in range(n)):
                continue
            plus = ms[j].pairs - ms[i].pairs
            minus = ms[i].pairs - ms[j].pairs
            key = (tuple(sorted(plus)), tuple(sorted(minus)))
            found[key] = (plus, minus)
            cover_edges.append((i, j, key))

    ordered = sorted(found, key=lambda key: (key[1], key[0]))
    names = {key: f"r{k + 1}" for k, key in enumerate(ordered)}
    rotations = {names[key]: Rotation(names[key], plus, minus) for key, (plus, minus) in found.items()}

    bottoms = [i for i in range(n) if all(geq[j][i] for j in range(n))]
    if len(bottoms) != 1:
        raise NonLatticeStructure("no unique minimum stable matching")

    # occurrence sets: propagate along covers from the bottom; in a
    # distributive lattice the result is path-independent
    occ_of: dict[int, frozenset[str]] = {bottoms[0]: frozenset()}
    pending = list(cover_edges)
    while pending:
        progressed = False
        remaining = []
        for i, j, key in pending:
            if i not in occ_of:
                remaining.append((i, j, key))
                continue
            progressed = True
            candidate = occ_of[i] | {names[key]}
            if j in occ_of:
                if occ_of[j] != candidate:
                    raise NonLatticeStructure("occurrence sets depend on the chain taken")
            else:
                occ_of[j] = candidate
        if not progressed and remaining:
            raise NonLatticeStructure("stable matchings are not connected by covers from the minimum")
        pending = remaining
    if len(occ_of) != n:
        raise NonLatticeStructure("stable matchings are not connected by covers from the minimum")

    occ = {rid: frozenset(i for i in range(n) if rid in occ_of[i]) for rid in rotations}
    rel = set()
    ids = sorted(rotations)
    for a in ids:
        for b in ids:
            if occ[b] <= occ[a]:
                rel.add((a, b))  # a occurs wherever b does: a below b
    for a in ids:
        for b in ids:
            if a != b and (a, b) in rel and (b, a) in rel:
                raise NonLatticeStructure(f"rotations {a} and {b} have identical occurrence sets")
    poset = Poset(tuple(ids), frozenset(rel))
    rp = RotationPoset(poset, rotations, ms[bottoms[0]])

    # the lattice structure must actually exist; covering-pair extraction
    # already assumed it
    lattice_from_order(Poset(
        tuple(f"s{i}" for i in range(n)),
        frozenset((f"s{i}", f"s{j}") for i in range(n) for j in range(n) if geq[j][i]),
    ))
    for mu in ms:
        matching_to_rotations(rp, mu)  # raises NotRepresentable on mismatch
    return rp


def matching_to_rotations(rp: RotationPoset, mu: Matching) -> frozenset[str]:
    """The unique lower closed rotation set that rebuilds mu from the
    worker-optimal matching; verified by reconstruction.

    Rotations touching one firm form a chain; walking each firm's chain from
    its worker-optimal partner to its partner in mu yields the occurred
    prefix, and the union over firms is the representation.
    """
    chains: dict[str, list[str]] = {}
    for rid, rot in rp.rotations.items():
        for f in {f for f, _ in rot.minus} | {f for f, _ in rot.plus}:
            chains.setdefault(f, []).append(rid)

    occurred: set[str] = set()
    for f, chain in sorted(chains.items()):
        below = {rid: sum(1 for o in chain if rp.poset.leq(o, rid)) for rid in chain}
        if sorted(below.values()) != list(range(1, len(chain) + 1)):
            raise NotRepresentable(f"rotations moving firm {f!r} are not totally ordered")
        chain.sort(key=below.__getitem__)
        current = rp.worker_optimal.workers_of(f)
        target = mu.workers_of(f)
        if current == target:
            continue
        prefix = None
        for i, rid in enumerate(chain):
            rot = rp.rotations[rid]
            current = (current - {w for ff, w in rot.minus if ff == f}) | {
                w for ff, w in rot.plus if ff == f
            }
            if current == target:
                prefix = chain[: i + 1]
                break
        if prefix is None:
            raise NotRepresentable(f"firm {f!r} holds {sorted(target)}, reachable by no rotation prefix")
        occurred.update(prefix)

    r = frozenset(occurred)
    try:
        rebuilt = rotations_to_matching(rp, r)
    except NotLowerClosed as exc:
        raise NotRepresentable(f"derived rotation set {sorted(r)} is not lower closed: {exc}") from exc
    if rebuilt.pairs != mu.pairs:
        raise NotRepresentable(
            f"rotation set {sorted(r)} rebuilds {sorted(rebuilt.pairs)}, not {sorted(mu.pairs)}"
        )
    return r


def rotations_to_matching(rp: RotationPoset, rotation_ids: Iterable[str]) -> Matching:
    """Apply a lower closed rotation set to the worker-optimal matching."""
    r = frozenset(rotation_ids)
    for rid in sorted(r):
        if not rp.poset.has(rid):
            raise NotLowerClosed(rid, "<unknown rotation>")
        for below in rp.poset.down_set(rid):
            if below not in r:
                raise NotLowerClosed(rid, below)
    plus: set[Pair] = set()
    minus: set[Pair] = set()
    for rid in r:
        plus |= rp.rotations[rid].plus
        minus |= rp.rotations[rid].minus
    return Matching(frozenset((rp.worker_optimal.pairs | plus) - minus))


def lower_rotation_sets(rp: RotationPoset) -> list[frozenset[str]]:
    return sorted(lower_sets(rp.poset), key=set_key)
