"""Matching markets under path-independent choice functions.

Four data-driven choice-function families are supported: explicit preference
lists, triggered choice (a watch set plus a trigger firm gated by a boolean
function of the offer), if-else choice (a priority worker, else a fallback
set), and regular choice (ordered disjoint tiers plus conditional auxiliary
additions).  On top of them: stability checking, deferred acceptance, the
firm-side comparison order over stable matchings, and an exhaustive
stable-matching enumeration oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    InputError,
    NonConvergence,
    NonLatticeStructure,
    NotALattice,
    SearchBoundExceeded,
    SpecError,
    UnknownPartnerId,
)
from .orders import Lattice, Poset, lattice_from_order, set_key

DEFAULT_NODE_BOUND = 10 ** 9


@dataclass(frozen=True)
class PreferenceList:
    """Strictly ordered acceptable partner sets, best first; chooses the first
    entry fully contained in the offer."""

    entries: tuple[frozenset[str], ...]

    def __post_init__(self):
        if any(not e for e in self.entries):
            raise SpecError("preference list entries must be nonempty (omit the empty set)")
        if len(set(self.entries)) != len(self.entries):
            raise SpecError("preference list entries must be pairwise distinct")

    @staticmethod
    def of(*entries) -> "PreferenceList":
        return PreferenceList(tuple(frozenset([e]) if isinstance(e, str) else frozenset(e) for e in entries))


@dataclass(frozen=True)
class TriggerRule:
    """Trigger condition: a CNF over rotation ids, fired against the rotations
    whose firm block is disjoint from the offered set."""

    alpha_groups: tuple[frozenset[str], ...]
    blocks: tuple[tuple[str, frozenset[str]], ...]

    def __post_init__(self):
        arg_ids = set().union(*self.alpha_groups) if self.alpha_groups else set()
        block_ids = {r for r, _ in self.blocks}
        if not arg_ids <= block_ids:
            raise SpecError(f"trigger rule alpha arguments {sorted(arg_ids - block_ids)} lack firm blocks")

    @cached_property
    def block_map(self) -> dict[str, frozenset[str]]:
        return dict(self.blocks)

    @cached_property
    def watch_all(self) -> frozenset[str]:
        out: set[str] = set()
        for _, fs in self.blocks:
            out |= fs
        return frozenset(out)

    def fires(self, offered: frozenset[str]) -> bool:
        hidden = {r for r, fs in self.blocks if not (fs & offered)}
        return all(bool(g & hidden) for g in self.alpha_groups)


@dataclass(frozen=True)
class Triggered:
    watch: frozenset[str]
    trigger: str
    rule: TriggerRule


@dataclass(frozen=True)
class IfElse:
    priority: str
    else_set: frozenset[str]


@dataclass(frozen=True)
class Regular:
    """Ordered disjoint tiers; the best nonempty tier intersection is chosen,
    then auxiliary workers whose anchor tier is not beaten are added."""

    tiers: tuple[frozenset[str], ...]
    aux_pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        seen: set[str] = set()
        for t in self.tiers:
            if t & seen:
                raise SpecError(f"regular tiers overlap on {sorted(t & seen)}")
            seen |= t
        seconds = [s for _, s in self.aux_pairs]
        if len(set(seconds)) != len(seconds):
            raise SpecError("each auxiliary worker may appear in at most one aux pair")
        for anchor, _ in self.aux_pairs:
            if anchor not in seen:
                raise SpecError(f"aux pair anchor {anchor!r} lies in no tier")

    @cached_property
    def tier_index(self) -> dict[str, int]:
        return {m: i for i, t in enumerate(self.tiers) for m in t}


ChoiceSpec = PreferenceList | Triggered | IfElse | Regular

EMPTY_LIST = PreferenceList(())


def choose(spec: ChoiceSpec, offered: Iterable[str]) -> frozenset[str]:
    """Evaluate a choice function; always returns a subset of the offer."""
    t = frozenset(offered)
    if isinstance(spec, PreferenceList):
        for entry in spec.entries:
            if entry <= t:
                return entry
        return frozenset()
    if isinstance(spec, Triggered):
        selected = t & spec.watch
        if spec.trigger in t and spec.rule.fires(t):
            selected |= {spec.trigger}
        return selected
    if isinstance(spec, IfElse):
        if spec.priority in t:
            return frozenset([spec.priority])
        return t & spec.else_set
    if isinstance(spec, Regular):
        selected: frozenset[str] = frozenset()
        hit_index = None
        for i, tier in enumerate(spec.tiers):
            hit = t & tier
            if hit:
                selected = hit
                hit_index = i
                break
        for anchor, aux in spec.aux_pairs:
            if aux in t and (hit_index is None or hit_index >= spec.tier_index[anchor]):
                selected |= {aux}
        return selected
    raise SpecError(f"unknown choice spec {type(spec).__name__}")


def spec_universe(spec: ChoiceSpec) -> frozenset[str]:
    """Partners that can ever appear in the spec's output or influence it."""
    if isinstance(spec, PreferenceList):
        out: set[str] = set()
        for e in spec.entries:
            out |= e
        return frozenset(out)
    if isinstance(spec, Triggered):
        return spec.watch | {spec.trigger}
    if isinstance(spec, IfElse):
        return spec.else_set | {spec.priority}
    if isinstance(spec, Regular):
        out = set()
        for t in spec.tiers:
            out |= t
        out |= {s for _, s in spec.aux_pairs}
        return frozenset(out)
    raise SpecError(f"unknown choice spec {type(spec).__name__}")


@dataclass(frozen=True, eq=False)
class MatchingMarket:
    firms: tuple[str, ...]
    workers: tuple[str, ...]
    choice: Mapping[str, ChoiceSpec] = field(repr=False)

    def __post_init__(self):
        fs, ws = set(self.firms), set(self.workers)
        if len(fs) != len(self.firms) or len(ws) != len(self.workers) or fs & ws:
            raise SpecError("agent ids must be unique and sides disjoint")
        for agent, spec in self.choice.items():
            if agent in fs:
                allowed = ws
            elif agent in ws:
                allowed = fs
            else:
                raise SpecError(f"choice entry for undeclared agent {agent!r}")
            bad = spec_universe(spec) - allowed
            if bad:
                raise SpecError(f"spec of {agent!r} references non-partners {sorted(bad)}")

    def __eq__(self, other):
        return (
            isinstance(other, MatchingMarket)
            and self.firms == other.firms
            and self.workers == other.workers
            and dict(self.choice) == dict(other.choice)
        )

    @cached_property
    def firm_set(self) -> frozenset[str]:
        return frozenset(self.firms)

    @cached_property
    def worker_set(self) -> frozenset[str]:
        return frozenset(self.workers)

    def spec(self, agent: str) -> ChoiceSpec:
        return self.choice.get(agent, EMPTY_LIST)

    def choose(self, agent: str, offered: Iterable[str]) -> frozenset[str]:
        t = frozenset(offered)
        opposite = self.worker_set if agent in self.firm_set else self.firm_set
        if agent not in self.firm_set and agent not in self.worker_set:
            raise UnknownPartnerId(agent, agent)
        bad = t - opposite
        if bad:
            raise UnknownPartnerId(agent, sorted(bad)[0])
        return choose(self.spec(agent), t)

    def acceptable(self, agent: str) -> frozenset[str]:
        return spec_universe(self.spec(agent))


@dataclass(frozen=True)
class Matching:
    pairs: frozenset[tuple[str, str]]

    @staticmethod
    def of(pairs: Iterable[tuple[str, str]]) -> "Matching":
        return Matching(frozenset((f, w) for f, w in pairs))

    @cached_property
    def by_firm(self) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {}
        for f, w in self.pairs:
            out.setdefault(f, set()).add(w)
        return {f: frozenset(ws) for f, ws in out.items()}

    @cached_property
    def by_worker(self) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {}
        for f, w in self.pairs:
            out.setdefault(w, set()).add(f)
        return {w: frozenset(fs) for w, fs in out.items()}

    def workers_of(self, firm: str) -> frozenset[str]:
        return self.by_firm.get(firm, frozenset())

    def firms_of(self, worker: str) -> frozenset[str]:
        return self.by_worker.get(worker, frozenset())

    def key(self) -> tuple:
        return tuple(sorted(self.pairs))


def _validate_matching(market: MatchingMarket, mu: Matching) -> None:
    for f, w in mu.pairs:
        if f not in market.firm_set:
            raise UnknownPartnerId(f, f)
        if w not in market.worker_set:
            raise UnknownPartnerId(w, w)


def is_individually_rational(market: MatchingMarket, mu: Matching) -> tuple[bool, str | None]:
    """Every agent keeps exactly its assigned partners when offered them."""
    _validate_matching(market, mu)
    for f, ws in sorted(mu.by_firm.items()):
        if choose(market.spec(f), ws) != ws:
            return False, f
    for w, fs in sorted(mu.by_worker.items()):
        if choose(market.spec(w), fs) != fs:
            return False, w
    return True, None


def blocking_pairs(market: MatchingMarket, mu: Matching) -> list[tuple[str, str]]:
    """All pairs outside the matching where each side demands the other.

    Only pairs the worker finds acceptable can block (a worker never demands
    a firm outside its spec's universe), so the scan is restricted to those.
    """
    _validate_matching(market, mu)
    out = []
    for w in market.workers:
        w_spec = market.spec(w)
        held = mu.firms_of(w)
        for f in sorted(spec_universe(w_spec)):
            if (f, w) in mu.pairs:
                continue
            if f not in choose(w_spec, held | {f}):
                continue
            if w in choose(market.spec(f), mu.workers_of(f) | {w}):
                out.append((f, w))
    return sorted(out)


def is_stable(market: MatchingMarket, mu: Matching) -> bool:
    ok, _ = is_individually_rational(market, mu)
    return ok and not blocking_pairs(market, mu)


def deferred_acceptance(market: MatchingMarket, proposing: str = "firms", round_cap: int | None = None) -> Matching:
    """Cumulative-offer deferred acceptance.

    Each round every proposer offers its choice from the partners that have
    not rejected it; each receiver holds its choice from the offers received
    and permanently rejects the rest.  Stops when a round produces no new
    rejection.  With path-independent choice functions the result is the
    proposer-optimal stable matching.
    """
    if proposing == "firms":
        proposers, receivers = market.firms, market.workers
    elif proposing == "workers":
        proposers, receivers = market.workers, market.firms
    else:
        raise InputError(f"proposing side must be 'firms' or 'workers', not {proposing!r}")
    if round_cap is None:
        round_cap = 4 * len(market.firms) * len(market.workers) + 4
    opposite = frozenset(receivers)
    rejected: dict[str, set[str]] = {p: set() for p in proposers}
    offers: dict[str, frozenset[str]] = {}
    for _ in range(round_cap):
        for p in proposers:
            offers[p] = choose(market.spec(p), opposite - rejected[p])
        received: dict[str, set[str]] = {r: set() for r in receivers}
        for p in proposers:
            for r in offers[p]:
                received[r].add(p)
        changed = False
        for r in receivers:
            held = choose(market.spec(r), received[r])
            for p in received[r] - held:
                rejected[p].add(r)
                changed = True
        if not changed:
            pairs = set()
            for p in proposers:
                for r in offers[p]:
                    pairs.add((p, r) if proposing == "firms" else (r, p))
            return Matching(frozenset(pairs))
    raise NonConvergence(round_cap)


class FirmOrder(Enum):
    GEQ = "geq"
    LEQ = "leq"
    EQ = "eq"
    INCOMPARABLE = "incomparable"


def firm_order_compare(market: MatchingMarket, mu1: Matching, mu2: Matching) -> FirmOrder:
    """Firm-side comparison: mu1 >= mu2 iff every firm picks its mu1 partners
    out of the union of its partners under both matchings."""
    if mu1.pairs == mu2.pairs:
        return FirmOrder.EQ
    geq = True
    leq = True
    for f in market.firms:
        a, b = mu1.workers_of(f), mu2.workers_of(f)
        if a == b:
            continue
        chosen = choose(market.spec(f), a | b)
        if chosen != a:
            geq = False
        if chosen != b:
            leq = False
        if not geq and not leq:
            return FirmOrder.INCOMPARABLE
    # distinct matchings cannot compare equal: some firm has a != b, and the
    # chosen set matches at most one of them
    return FirmOrder.GEQ if geq else FirmOrder.LEQ


def _subsets(items: Sequence[str]):
    n = len(items)
    for mask in range(1 << n):
        yield frozenset(items[i] for i in range(n) if mask >> i & 1)


class _Dead(Exception):
    pass


def enumerate_stable(
    market: MatchingMarket,
    node_bound: int = DEFAULT_NODE_BOUND,
    worker_order: Sequence[str] | None = None,
) -> list[Matching]:
    """Exhaustive, exact enumeration of all stable matchings.

    Backtracking over workers: each worker's candidate partner sets are its
    individually rational sets further restricted to lie, in its own
    preference, between its deferred-acceptance worst and best outcomes
    (opposition of interests makes this sound).  Firm-side individual
    rationality is pruned incrementally (substitutability makes a violation
    permanent), pairs are checked for blocking as soon as a firm's offer pool
    is complete, and full stability is re-verified at every leaf.

    Assumes path-independent choice functions, like deferred acceptance; the
    two deferred-acceptance anchors are stability-checked up front as a
    guard.  worker_order only affects search performance, never the result;
    the output is canonically sorted.
    """
    mu_f = deferred_acceptance(market, "firms")
    worker_optimal = deferred_acceptance(market, "workers")
    for anchor in (mu_f, worker_optimal):
        if not is_stable(market, anchor):
            raise NonConvergence(
                0, "deferred acceptance produced an unstable matching; "
                "choice functions are not path-independent"
            )

    if worker_order is None:
        order = sorted(market.workers)
    else:
        order = list(worker_order)
        if sorted(order) != sorted(market.workers):
            raise InputError("worker_order must be a permutation of the market's workers")

    specs = {a: market.spec(a) for a in (*market.firms, *market.workers)}
    acceptable = {w: frozenset(spec_universe(specs[w])) for w in market.workers}
    interested: dict[str, list[str]] = {f: [] for f in market.firms}
    for w in market.workers:
        for f in acceptable[w]:
            interested[f].append(w)
    rem_any = {f: len(interested[f]) for f in market.firms}
    rem_reg = {f: sum(1 for w in interested[f] if not isinstance(specs[w], Triggered)) for f in market.firms}

    def keep(w: str, cand: frozenset[str]) -> bool:
        sp = specs[w]
        if choose(sp, cand) != cand:
            return False
        best = worker_optimal.firms_of(w)
        worst = mu_f.firms_of(w)
        return choose(sp, cand | best) == best and choose(sp, worst | cand) == cand

    static_cands: dict[str, list[frozenset[str]]] = {}
    for w in order:
        sp = specs[w]
        if isinstance(sp, PreferenceList):
            opts = set(sp.entries) | {frozenset()}
            static_cands[w] = sorted((s for s in opts if keep(w, s)), key=set_key)

    # Structural fact about if-else firms whose fallback workers all list the
    # firm first: a stable matching matches either all of them or none of
    # them to it.  (All there is fine.  One there, one away: if the priority
    # worker is held the firm keeps only it, breaking the first one's
    # individual rationality; otherwise the firm demands the away worker,
    # which demands the firm back as its first choice, a blocking pair.)
    ifelse_groups: list[tuple[str, frozenset[str]]] = []
    member_groups: dict[str, list[int]] = {}
    for f in market.firms:
        f_spec = specs[f]
        if isinstance(f_spec, IfElse) and f_spec.else_set:
            members = f_spec.else_set
            if all(
                isinstance(specs[e], PreferenceList)
                and specs[e].entries
                and specs[e].entries[0] == frozenset([f])
                for e in members
            ):
                for e in members:
                    member_groups.setdefault(e, []).append(len(ifelse_groups))
                ifelse_groups.append((f, members))
    group_at = [0] * len(ifelse_groups)
    group_away = [0] * len(ifelse_groups)

    hold: dict[str, set[str]] = {f: set() for f in market.firms}
    assigned: dict[str, frozenset[str]] = {}
    results: list[Matching] = []
    nodes = 0

    def triggered_forced(w: str, sp: Triggered) -> list[frozenset[str]]:
        # Sound only once every firm in the universe has its full regular
        # offer pool: the mutual-demand set is then the only assignment that
        # can survive individual rationality plus blocking checks.
        cand = set()
        for f in sorted(sp.watch):
            if w in choose(specs[f], frozenset(hold[f]) | {w}):
                cand.add(f)
        t = sp.trigger
        with_trigger = frozenset(cand | {t})
        if t in choose(sp, with_trigger) and w in choose(specs[t], frozenset(hold[t]) | {w}):
            cand.add(t)
        c = frozenset(cand)
        return [c] if keep(w, c) else []

    def triggered_full(w: str, sp: Triggered) -> list[frozenset[str]]:
        out = []
        watch = sorted(sp.watch)
        if len(watch) > 24:
            raise SearchBoundExceeded(1 << len(watch), node_bound)
        for s in _subsets(watch):
            if keep(w, s):
                out.append(s)
            st = s | {sp.trigger}
            if keep(w, st):
                out.append(st)
        return sorted(set(out), key=set_key)

    def settled(f: str) -> bool:
        # A firm's demand for an auxiliary worker is fixed for the rest of a
        # live branch once its offer pool is complete, or once it holds some
        # regular worker: a later arrival could only alter the tier winner by
        # displacing that worker, killing the branch at that point.
        f_spec = specs[f]
        if not isinstance(f_spec, (Regular, IfElse)):
            return False
        if rem_reg[f] == 0:
            return True
        return any(not isinstance(specs[w2], Triggered) for w2 in hold[f])

    def candidates(w: str) -> list[frozenset[str]]:
        sp = specs[w]
        if isinstance(sp, PreferenceList):
            return static_cands[w]
        if isinstance(sp, Triggered):
            if all(settled(f) for f in acceptable[w]):
                return triggered_forced(w, sp)
            return triggered_full(w, sp)
        universe = sorted(acceptable[w])
        if len(universe) > 16:
            raise SearchBoundExceeded(1 << len(universe), node_bound)
        return sorted((s for s in _subsets(universe) if keep(w, s)), key=set_key)

    def place(w: str, cand: frozenset[str]) -> None:
        assigned[w] = cand
        for f in cand:
            hold[f].add(w)
        newly_final = []
        is_reg = not isinstance(specs[w], Triggered)
        for f in acceptable[w]:
            rem_any[f] -= 1
            if is_reg:
                rem_reg[f] -= 1
            if rem_any[f] == 0:
                newly_final.append(f)
        dead = False
        for gi in member_groups.get(w, ()):
            if ifelse_groups[gi][0] in cand:
                group_at[gi] += 1
            else:
                group_away[gi] += 1
            if group_at[gi] and group_away[gi]:
                dead = True
        if dead:
            raise _Dead
        for f in cand:
            cur = frozenset(hold[f])
            if choose(specs[f], cur) != cur:
                raise _Dead
        for f in newly_final:
            pool = frozenset(hold[f])
            f_spec = specs[f]
            for w2 in interested[f]:
                if f in assigned[w2]:
                    continue
                if f in choose(specs[w2], assigned[w2] | {f}) and w2 in choose(f_spec, pool | {w2}):
                    raise _Dead

    def unplace(w: str, cand: frozenset[str]) -> None:
        del assigned[w]
        for f in cand:
            hold[f].discard(w)
        is_reg = not isinstance(specs[w], Triggered)
        for f in acceptable[w]:
            rem_any[f] += 1
            if is_reg:
                rem_reg[f] += 1
        for gi in member_groups.get(w, ()):
            if ifelse_groups[gi][0] in cand:
                group_at[gi] -= 1
            else:
                group_away[gi] -= 1

    def recurse(i: int) -> None:
        nonlocal nodes
        if i == len(order):
            mu = Matching(frozenset((f, w) for w, fs in assigned.items() for f in fs))
            if is_stable(market, mu):
                results.append(mu)
            return
        w = order[i]
        for cand in candidates(w):
            nodes += 1
            if nodes > node_bound:
                raise SearchBoundExceeded(nodes, node_bound)
            try:
                place(w, cand)
            except _Dead:
                unplace(w, cand)
                continue
            try:
                recurse(i + 1)
            finally:
                unplace(w, cand)

    recurse(0)
    return sorted(results, key=Matching.key)


def stable_lattice(
    market: MatchingMarket,
    node_bound: int = DEFAULT_NODE_BOUND,
    worker_order: Sequence[str] | None = None,
) -> tuple[Lattice, list[Matching]]:
    """Enumerate the stable matchings and organize them as a lattice.

    Returns the lattice over synthetic ids m000, m001, ... aligned with the
    returned canonical matching list.  Raises NonLatticeStructure if the
    comparison order fails to produce joins and meets.
    """
    ms = enumerate_stable(market, node_bound=node_bound, worker_order=worker_order)
    width = max(3, len(str(max(len(ms) - 1, 0))))
    ids = tuple(f"m{i:0{width}d}" for i in range(len(ms)))
    pairs = set()
    for i in range(len(ms)):
        pairs.add((ids[i], ids[i]))
        for j in range(i + 1, len(ms)):
            cmp = firm_order_compare(market, ms[i], ms[j])
            if cmp is FirmOrder.LEQ:
                pairs.add((ids[i], ids[j]))
            elif cmp is FirmOrder.GEQ:
                pairs.add((ids[j], ids[i]))
    poset = Poset(ids, frozenset(pairs))
    try:
        lat = lattice_from_order(poset)
    except NotALattice as exc:
        raise NonLatticeStructure(str(exc)) from exc
    return lat, ms


def check_path_independence(
    spec: ChoiceSpec,
    universe: Iterable[str] | None = None,
    exhaustive_limit: int = 16,
    samples: int = 512,
    seed: int = 0,
) -> tuple[bool, tuple | None]:
    """Verify substitutability and consistency over the relevant universe.

    Exhaustive when the universe has at most exhaustive_limit members (the
    one-element-removal forms of both properties, which imply the general
    ones by induction); deterministic random sampling otherwise.
    """
    u = sorted(spec_universe(spec) if universe is None else universe)
    n = len(u)

    def check_one(s: frozenset[str], chosen: frozenset[str], lookup) -> tuple | None:
        for y in sorted(s - chosen):
            if lookup(s - {y}) != chosen:
                return ("consistency", tuple(sorted(s)), y)
        for x in sorted(chosen):
            for y in sorted(s - {x}):
                if x not in lookup(s - {y}):
                    return ("substitutability", tuple(sorted(s)), (x, y))
        return None

    if n <= exhaustive_limit:
        members = list(u)
        table: dict[frozenset[str], frozenset[str]] = {}
        for s in _subsets(members):
            table[s] = choose(spec, s)
        for s, chosen in table.items():
            witness = check_one(s, chosen, table.__getitem__)
            if witness:
                return False, witness
        return True, None

    rng = random.Random(seed)
    for _ in range(samples):
        s = frozenset(x for x in u if rng.random() < 0.5)
        witness = check_one(s, choose(spec, s), lambda t: choose(spec, t))
        if witness:
            return False, witness
    return True, None
