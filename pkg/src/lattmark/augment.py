"""Join-constraint augmentation of one-to-one base markets.

One augmentation enforces one join constraint on the base market's stable
matchings: it adds an auxiliary worker watching the constraint's alpha-side
firms, an auxiliary firm arbitrating between that worker and fresh copies of
the beta-side workers, and rewires the regular firms' choice functions so
that exactly the stable matchings violating the constraint disappear.
Iterating over a constraint set and starting from a gadget-bank base yields
the full lattice synthesis pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .constraints import JoinConstraint, constraints_from_lattice, eval_join_constraint
from .errors import (
    ArgumentsNotAntichain,
    InputError,
    IsomorphismFailure,
    OverlappingRotationAgents,
    ProjectionNotStable,
    SpecError,
    UnknownElementId,
)
from .markets import (
    FirmOrder,
    TriggerRule,
    IfElse,
    Matching,
    MatchingMarket,
    PreferenceList,
    Regular,
    Triggered,
    firm_order_compare,
    deferred_acceptance,
    enumerate_stable,
    is_stable,
)
from .orders import Lattice, canonical_partial_rep, join_irreducibles
from .rotations import RealizedBase, RotationPoset, _gadget_bank, antichain_base, matching_to_rotations


@dataclass(frozen=True)
class RotationJoinConstraint:
    """A join constraint over rotation ids, with the agent sets it touches."""

    constraint: JoinConstraint
    pi_alpha: frozenset[str]
    pi_beta: frozenset[str]
    f_rho: Mapping[str, frozenset[str]]
    w_rho: Mapping[str, frozenset[str]]

    @property
    def f_alpha(self) -> frozenset[str]:
        out: set[str] = set()
        for fs in self.f_rho.values():
            out |= fs
        return frozenset(out)

    @property
    def w_beta(self) -> frozenset[str]:
        out: set[str] = set()
        for ws in self.w_rho.values():
            out |= ws
        return frozenset(out)


def derive_sets(jc: JoinConstraint, rp: RotationPoset) -> RotationJoinConstraint:
    """Resolve a constraint's rotation ids into firm/worker sets and validate."""
    known = set(rp.ids())
    for rid in sorted(jc.alpha_ids | jc.beta_ids):
        if rid not in known:
            raise UnknownElementId(rid)
    alpha_ids = sorted(jc.alpha_ids)
    for i, a in enumerate(alpha_ids):
        for b in alpha_ids[i + 1:]:
            if rp.poset.lt(a, b) or rp.poset.lt(b, a):
                raise ArgumentsNotAntichain(a, b)
    f_rho = {rid: rp.rotations[rid].firms_minus() for rid in alpha_ids}
    w_rho = {rid: rp.rotations[rid].workers_plus() for rid in sorted(jc.beta_ids)}
    for groups in (f_rho, w_rho):
        taken: dict[str, str] = {}
        for rid in sorted(groups):
            for agent in sorted(groups[rid]):
                if agent in taken:
                    raise OverlappingRotationAgents(taken[agent], rid, {agent})
                taken[agent] = rid
    return RotationJoinConstraint(jc, frozenset(alpha_ids), frozenset(jc.beta_ids), f_rho, w_rho)


@dataclass(frozen=True)
class AugmentStep:
    constraint: RotationJoinConstraint
    w0: str
    f0: str
    copies: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class ExtendableMarket:
    """A base market plus the bookkeeping needed to keep augmenting it."""

    market: MatchingMarket
    base: RealizedBase
    copy_map: Mapping[str, str]
    aux_workers: frozenset[str]
    aux_firms: frozenset[str]
    a_f: Mapping[str, tuple[tuple[str, str], ...]]
    augment_count: int
    steps: tuple[AugmentStep, ...]

    def __eq__(self, other):
        return (
            isinstance(other, ExtendableMarket)
            and self.market == other.market
            and self.base == other.base
            and dict(self.copy_map) == dict(other.copy_map)
            and self.aux_workers == other.aux_workers
            and self.aux_firms == other.aux_firms
            and dict(self.a_f) == dict(other.a_f)
            and self.steps == other.steps
        )

    def copy_classes(self) -> dict[str, tuple[str, ...]]:
        classes: dict[str, list[str]] = {w: [] for w in self.base.market.workers}
        for member, base_worker in self.copy_map.items():
            classes[base_worker].append(member)
        return {w: tuple(sorted(ms)) for w, ms in classes.items()}

    def worker_order(self) -> list[str]:
        """Search order for enumeration: base workers, then each step's copies
        directly followed by its auxiliary worker, so that inconsistent
        branches die inside each step's segment.  Performance hint only."""
        order = sorted(self.base.market.workers)
        for step in self.steps:
            order += sorted(step.copies)
            order.append(step.w0)
        return order

    def agent_count(self) -> int:
        return len(self.market.firms) + len(self.market.workers)


def _singleton_entries(spec, agent: str) -> list[str]:
    if not isinstance(spec, PreferenceList) or any(len(e) != 1 for e in spec.entries):
        raise SpecError(f"agent {agent!r} of the base market must have a one-to-one preference list")
    return [next(iter(e)) for e in spec.entries]


def extendable_from_base(base: RealizedBase) -> ExtendableMarket:
    """View a one-to-one base as an extendable market of itself: every firm's
    list becomes a regular choice function over singleton copy classes."""
    m = base.market
    choice: dict = {}
    for w in m.workers:
        _singleton_entries(m.spec(w), w)
        choice[w] = m.spec(w)
    for f in m.firms:
        entries = _singleton_entries(m.spec(f), f)
        choice[f] = Regular(tuple(frozenset([w]) for w in entries), ())
    market = MatchingMarket(m.firms, m.workers, choice)
    return ExtendableMarket(
        market=market,
        base=base,
        copy_map={w: w for w in m.workers},
        aux_workers=frozenset(),
        aux_firms=frozenset(),
        a_f={f: () for f in m.firms},
        augment_count=0,
        steps=(),
    )


def augment(em: ExtendableMarket, rjc: RotationJoinConstraint) -> ExtendableMarket:
    """Apply one join-constraint augmentation, returning the grown market."""
    base_market = em.base.market
    rp = em.base.rotation_poset
    k = em.augment_count + 1
    w0, f0 = f"w0#{k}", f"f0#{k}"

    copies: dict[str, str] = {wj: f"{wj}#{k}" for wj in sorted(rjc.w_beta)}
    copy_specs: dict[str, PreferenceList] = {}
    for wj, wc in copies.items():
        entries = _singleton_entries(base_market.spec(wj), wj)
        candidates = set()
        for rid in rjc.pi_beta:
            for f, w in rp.rotations[rid].plus:
                if w == wj:
                    candidates.add(f)
        missing = candidates - set(entries)
        if missing:
            raise SpecError(f"plus-side firms {sorted(missing)} absent from base list of {wj!r}")
        fj_index = max(entries.index(f) for f in candidates)
        copy_specs[wc] = PreferenceList.of(f0, *entries[fj_index:])

    rule = TriggerRule(
        alpha_groups=rjc.constraint.alpha_groups,
        blocks=tuple(sorted((rid, rjc.f_rho[rid]) for rid in rjc.pi_alpha)),
    )
    a_f = {f: em.a_f.get(f, ()) for f in base_market.firms}
    for rid in sorted(rjc.pi_alpha):
        for f, w in sorted(rp.rotations[rid].minus):
            a_f[f] = a_f[f] + ((w, w0),)

    copy_map = dict(em.copy_map)
    for wj, wc in copies.items():
        copy_map[wc] = wj
    classes: dict[str, set[str]] = {w: set() for w in base_market.workers}
    for member, base_worker in copy_map.items():
        classes[base_worker].add(member)

    choice: dict = dict(em.market.choice)
    for f in base_market.firms:
        entries = _singleton_entries(base_market.spec(f), f)
        tiers = tuple(frozenset(classes[w]) for w in entries)
        choice[f] = Regular(tiers, a_f[f])
    choice[w0] = Triggered(watch=rjc.f_alpha, trigger=f0, rule=rule)
    choice[f0] = IfElse(priority=w0, else_set=frozenset(copies.values()))
    for wc, spec in copy_specs.items():
        choice[wc] = spec

    market = MatchingMarket(
        firms=tuple(sorted((*em.market.firms, f0))),
        workers=tuple(sorted((*em.market.workers, w0, *copies.values()))),
        choice=choice,
    )
    step = AugmentStep(rjc, w0, f0, tuple(sorted(copies.values())))
    return ExtendableMarket(
        market=market,
        base=em.base,
        copy_map=copy_map,
        aux_workers=em.aux_workers | {w0},
        aux_firms=em.aux_firms | {f0},
        a_f=a_f,
        augment_count=k,
        steps=em.steps + (step,),
    )


def project_once(em_before: ExtendableMarket, em_after: ExtendableMarket, mu: Matching) -> Matching:
    """Project a matching of the augmented market one step back: drop the new
    auxiliary pair endpoints, fold the new copies onto their base workers."""
    if len(em_after.steps) != len(em_before.steps) + 1:
        raise InputError("em_after must be em_before plus exactly one augmentation")
    step = em_after.steps[-1]
    new_copies = set(step.copies)
    pairs = set()
    for f, w in mu.pairs:
        if f == step.f0 or w == step.w0:
            continue
        if w in new_copies:
            w = em_after.copy_map[w]
        pairs.add((f, w))
    return Matching(frozenset(pairs))


def project_to_base(em: ExtendableMarket, mu: Matching, check: bool = True) -> Matching:
    """Project all the way to the base market: base firms only, copies folded
    onto base workers, auxiliary agents dropped."""
    base_market = em.base.market
    base_firms = base_market.firm_set
    pairs = set()
    for f, w in mu.pairs:
        if f in base_firms and w in em.copy_map:
            pairs.add((f, em.copy_map[w]))
    out = Matching(frozenset(pairs))
    if check and not is_stable(base_market, out):
        raise ProjectionNotStable(f"projected pairs {sorted(out.pairs)}")
    return out


def omega_extend(base: RealizedBase, constraints: Iterable[JoinConstraint]) -> ExtendableMarket:
    """Fold augment over the constraints, in the given order."""
    em = extendable_from_base(base)
    for jc in constraints:
        em = augment(em, derive_sets(jc, base.rotation_poset))
    return em


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    witness: object = None


@dataclass(frozen=True)
class ExtensionReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


def verify_extension(
    base: RealizedBase,
    em: ExtendableMarket,
    constraints: Iterable[JoinConstraint],
) -> ExtensionReport:
    """Check, by enumeration, that the extension's stable matchings project
    exactly onto the base stable matchings satisfying every constraint, that
    the projection preserves order, and that both base extremes survive."""
    cs = tuple(constraints)
    rp = base.rotation_poset
    checks: list[Check] = []

    extended = enumerate_stable(em.market, worker_order=em.worker_order())
    projected = []
    proj_ok = True
    witness = None
    for mu in extended:
        try:
            projected.append(project_to_base(em, mu, check=True))
        except ProjectionNotStable as exc:
            proj_ok = False
            witness = str(exc)
            projected.append(project_to_base(em, mu, check=False))
    checks.append(Check("projections-stable-in-base", proj_ok, witness))

    base_stables = enumerate_stable(base.market)
    expected = [
        mu for mu in base_stables
        if all(eval_join_constraint(jc, matching_to_rotations(rp, mu))[2] for jc in cs)
    ]
    image = sorted({m.key() for m in projected})
    want = sorted({m.key() for m in expected})
    checks.append(Check(
        "image-equals-constrained-base",
        image == want,
        None if image == want else {"image": image, "expected": want},
    ))

    embed_ok = True
    embed_witness = None
    for i in range(len(extended)):
        for j in range(len(extended)):
            if i == j:
                continue
            up = firm_order_compare(em.market, extended[i], extended[j])
            down = firm_order_compare(base.market, projected[i], projected[j])
            if up != down:
                embed_ok = False
                embed_witness = (extended[i].key(), extended[j].key(), up.value, down.value)
                break
        if not embed_ok:
            break
    checks.append(Check("projection-order-embedding", embed_ok, embed_witness))

    top = deferred_acceptance(base.market, "firms")
    bottom = deferred_acceptance(base.market, "workers")
    extremes_ok = top.key() in image and bottom.key() in image
    checks.append(Check("base-extremes-in-image", extremes_ok, None if extremes_ok else (top.key(), bottom.key())))
    return ExtensionReport(tuple(checks))


@dataclass(frozen=True)
class SynthesisResult:
    extendable: ExtendableMarket
    iso: Mapping[str, Matching]
    order_constraints: tuple[JoinConstraint, ...]
    lattice_constraints: tuple[JoinConstraint, ...]

    def market(self) -> MatchingMarket:
        return self.extendable.market


def synthesize_from_lattice(lattice: Lattice, verify: bool = True) -> SynthesisResult:
    """Build a market whose stable matching lattice is order-isomorphic to the
    given lattice.

    Pipeline: take the join-irreducible poset, realize its elements as an
    antichain of gadget rotations, enforce each covering relation p below q
    as the constraint "q occurring forces p", then enforce the lattice's own
    join constraints, transported onto rotation ids.  The isomorphism is
    recovered by matching each element's representation set against the
    enumerated stable matchings.
    """
    xj, xj_poset = join_irreducibles(lattice)
    rep_of = canonical_partial_rep(lattice)
    base = antichain_base(xj) if xj else _gadget_bank([])

    def transport(jc: JoinConstraint) -> JoinConstraint:
        return JoinConstraint.make(
            [{base.rotation_of[z] for z in g} for g in jc.alpha_groups],
            {base.rotation_of[z] for z in jc.beta_ids},
        )

    order_cs = tuple(sorted(
        (JoinConstraint.make([{q}], {p}) for p, q in xj_poset.covers),
        key=JoinConstraint.key,
    ))
    lattice_cs = constraints_from_lattice(lattice)
    em = omega_extend(base, [transport(c) for c in (*order_cs, *lattice_cs)])

    stables = enumerate_stable(em.market, worker_order=em.worker_order())
    if len(stables) != len(lattice.elements):
        raise IsomorphismFailure(
            f"{len(stables)} stable matchings for {len(lattice.elements)} lattice elements"
        )
    rp = base.rotation_poset
    by_rep: dict[frozenset[str], Matching] = {}
    for mu in stables:
        rep = matching_to_rotations(rp, project_to_base(em, mu))
        if rep in by_rep:
            raise IsomorphismFailure(f"two stable matchings share the representation {sorted(rep)}")
        by_rep[rep] = mu

    iso: dict[str, Matching] = {}
    for x in lattice.elements:
        target = frozenset(base.rotation_of[j] for j in rep_of[x])
        if target not in by_rep:
            raise IsomorphismFailure(f"element {x!r} has no stable matching for {sorted(target)}")
        iso[x] = by_rep[target]

    if verify:
        for x in lattice.elements:
            for y in lattice.elements:
                if x == y:
                    continue
                cmp = firm_order_compare(em.market, iso[x], iso[y])
                want_leq = lattice.leq(x, y)
                want_geq = lattice.leq(y, x)
                got_leq = cmp is FirmOrder.LEQ
                got_geq = cmp is FirmOrder.GEQ
                if (want_leq, want_geq) != (got_leq, got_geq):
                    raise IsomorphismFailure(f"order mismatch on ({x!r}, {y!r})")
    return SynthesisResult(em, iso, order_cs, lattice_cs)
