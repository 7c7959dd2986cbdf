"""Independent oracles used to freeze expected values.

Everything here recomputes results from first definitions with plain loops,
deliberately avoiding the library's own algorithms: bound scans instead of
join tables, recursive counting instead of enumeration, rank-table stability
instead of choice-function machinery.
"""

from __future__ import annotations

from itertools import combinations, product


def least_upper_bound(elements, leq, x, y):
    """Scan for the unique minimum of the upper bound set; None if absent."""
    ubs = [z for z in elements if leq(x, z) and leq(y, z)]
    least = [u for u in ubs if all(leq(u, v) for v in ubs)]
    return least[0] if len(least) == 1 else None


def greatest_lower_bound(elements, leq, x, y):
    lbs = [z for z in elements if leq(z, x) and leq(z, y)]
    greatest = [u for u in lbs if all(leq(v, u) for v in lbs)]
    return greatest[0] if len(greatest) == 1 else None


def count_lower_sets(elements, leq):
    """count(P) = count(P minus a maximal m) + count(P minus the down-set of m)."""
    elements = list(elements)
    if not elements:
        return 1
    m = next(e for e in elements if not any(leq(e, z) and e != z for z in elements))
    without_m = [e for e in elements if e != m]
    without_down = [e for e in elements if not leq(e, m)]
    return count_lower_sets(without_m, leq) + count_lower_sets(without_down, leq)


def join_irreducibles_by_definition(lattice):
    """Elements not expressible as the join of any subset excluding them."""
    els = lattice.elements
    out = []
    for a in els:
        rest = [e for e in els if e != a]
        reducible = False
        for k in range(len(rest) + 1):
            for combo in combinations(rest, k):
                if lattice.join_all(combo) == a:
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            out.append(a)
    return tuple(out)


def one_to_one_stable_matchings(firm_lists, worker_lists):
    """All stable matchings of a market given by singleton preference lists.

    Classic definition: rank tables, individual rationality is list
    membership, blocking means both strictly prefer each other to their
    current assignment (or are unmatched).
    """
    firm_rank = {f: {w: i for i, w in enumerate(ws)} for f, ws in firm_lists.items()}
    worker_rank = {w: {f: i for i, f in enumerate(fs)} for w, fs in worker_lists.items()}
    workers = sorted(worker_lists)
    options = [[None] + list(worker_lists[w]) for w in workers]
    stable = []
    for assignment in product(*options):
        match_of_firm = {}
        ok = True
        for w, f in zip(workers, assignment):
            if f is None:
                continue
            if w not in firm_rank.get(f, {}):
                ok = False
                break
            if f in match_of_firm:
                ok = False
                break
            match_of_firm[f] = w
        if not ok:
            continue
        match_of_worker = {w: f for w, f in zip(workers, assignment) if f is not None}

        def prefers_firm(f, w):
            cur = match_of_firm.get(f)
            return cur is None or firm_rank[f][w] < firm_rank[f][cur]

        def prefers_worker(w, f):
            cur = match_of_worker.get(w)
            return cur is None or worker_rank[w][f] < worker_rank[w][cur]

        blocked = any(
            w in firm_rank.get(f, {})
            and match_of_worker.get(w) != f
            and prefers_firm(f, w)
            and prefers_worker(w, f)
            for f in firm_lists
            for w in firm_rank[f]
        )
        if not blocked:
            stable.append(frozenset((f, w) for w, f in match_of_worker.items()))
    return sorted(set(stable), key=sorted)


def independence_number(vertices, edges):
    best = 0
    edge_set = {frozenset(e) for e in edges}
    for k in range(len(vertices), -1, -1):
        for combo in combinations(vertices, k):
            if not any(frozenset((u, v)) in edge_set for u, v in combinations(combo, 2)):
                return k
    return best


def brute_force_satisfying_subsets(universe, predicate):
    out = []
    universe = sorted(universe)
    for mask in range(1 << len(universe)):
        t = frozenset(universe[i] for i in range(len(universe)) if mask >> i & 1)
        if predicate(t):
            out.append(t)
    return out


def reference_stable_matchings(market, node_budget=3_000_000):
    """Reference enumeration kept deliberately naive.

    Every worker ranges over all its individually rational partner sets (no
    preference-interval restriction, no forced assignments, no structural
    rules); the only pruning is firm-side individual rationality, whose
    permanence under growth is immediate from substitutability.  Leaves are
    kept when stable.  Exponential; raises ValueError past the node budget.
    """
    from lattmark.markets import Matching, choose, is_stable, spec_universe

    workers = sorted(market.workers)
    options = []
    for w in workers:
        spec = market.spec(w)
        universe = sorted(spec_universe(spec))
        options.append([
            s
            for s in brute_force_satisfying_subsets(universe, lambda t: True)
            if choose(spec, s) == s
        ])

    hold = {f: set() for f in market.firms}
    out = []
    nodes = 0

    def recurse(i):
        nonlocal nodes
        if i == len(workers):
            mu = Matching(frozenset((f, w2) for w2 in assigned for f in assigned[w2]))
            if is_stable(market, mu):
                out.append(mu)
            return
        w = workers[i]
        for s in options[i]:
            nodes += 1
            if nodes > node_budget:
                raise ValueError(f"explored {nodes} nodes, over the reference budget")
            for f in s:
                hold[f].add(w)
            assigned[w] = s
            if all(choose(market.spec(f), frozenset(hold[f])) == frozenset(hold[f]) for f in s):
                recurse(i + 1)
            del assigned[w]
            for f in s:
                hold[f].discard(w)

    assigned = {}
    recurse(0)
    return sorted(out, key=lambda m: tuple(sorted(m.pairs)))
