"""Brute-force bounded oracles.

These re-derive decider verdicts by enumerating delta-walks and searching
candidate shadowing points by direct per-candidate simulation (never the
image-then-intersect transition law).  Walk prefixes are deduplicated only
when their directly simulated candidate data proves their continuations
identical, so the oracle stays an independent computation path while
remaining tractable.

Each oracle reports whether its horizon was large enough to certify
agreement with the exact decider (shortest refuting walks cannot be longer
than the number of distinct explored search states plus one).
"""

from collections import deque
from dataclasses import dataclass

from .core import iter_mask, orbit_set
from .deciders import NotSurjectiveError, delta_graph, orbit_timeline
from .verdicts import BudgetError, Verdict


ORACLE_PROPERTIES = ("shadowing", "h-shadowing", "weak1", "slimit-condition2",
                     "inverse", "weak2")

DEFAULT_BUDGET = 2_000_000


@dataclass
class OracleResult:
    verdict: Verdict
    horizon: int
    certified: bool  # horizon >= states + 1, so the bounded answer is exact
    states: int


def oracle(system, tp, prop, horizon, budget=DEFAULT_BUDGET):
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    fn = {
        "shadowing": _oracle_shadowing,
        "h-shadowing": _oracle_h_shadowing,
        "weak1": _oracle_weak1,
        "slimit-condition2": _oracle_slimit,
        "inverse": _oracle_inverse,
        "weak2": _oracle_weak2,
    }.get(prop)
    if fn is None:
        raise ValueError("no bounded oracle for property %r" % prop)
    return fn(system, tp, horizon, budget)


def _bfs(system, tp, horizon, budget, init, extend):
    """Shared walk enumeration: states carry directly simulated candidate
    data; extend(state, x2) returns (new_state_or_None, key) where None
    means the walk dies at x2.  Returns (counterexample walk or None,
    number of distinct keys)."""
    seen = {}
    depth = {}
    queue = deque()
    for x in range(system.n):
        st, key = init(x)
        if st is None:
            return [x], 1
        if key not in seen:
            seen[key] = None
            depth[key] = 0
            queue.append((st, key))
    dg = delta_graph(system, tp.delta)
    while queue:
        st, key = queue.popleft()
        if len(seen) > budget:
            raise BudgetError("oracle state budget exceeded")
        if depth[key] >= horizon:
            continue
        for x2 in dg.succ[key[0]]:
            st2, key2 = extend(st, x2)
            if st2 is None:
                walk = [x2]
                k = key
                while k is not None:
                    walk.append(k[0])
                    k = seen[k]
                walk.reverse()
                return walk, len(seen)
            if key2 not in seen:
                seen[key2] = key
                depth[key2] = depth[key] + 1
                queue.append((st2, key2))
    return None, len(seen)


def _oracle_shadowing(system, tp, horizon, budget):
    d = system.space.dist

    def init(x):
        alive = tuple(p for p in range(system.n) if d[p][x] < tp.eps)
        key = (x, frozenset(alive))
        return (alive or None), key

    def extend(alive, x2):
        nxt = tuple(sorted({system.fmap[p] for p in alive
                            if d[system.fmap[p]][x2] < tp.eps}))
        key = (x2, frozenset(nxt))
        return (nxt or None), key

    walk, states = _bfs(system, tp, horizon, budget, init, extend)
    certified = horizon >= states + 1
    if walk is not None:
        v = Verdict(False, counterexample={"walk": walk, "kind": "shadowing"},
                    states_explored=states)
    else:
        v = Verdict(True, witness={"rule": "bounded-walk-enumeration"},
                    states_explored=states)
    return OracleResult(v, horizon, certified, states)


def _oracle_h_shadowing(system, tp, horizon, budget):
    d = system.space.dist
    # alive = positions f^m(y) of candidates meeting the strict-eps
    # constraint at every index <= m; extending the walk to x2 needs some
    # candidate whose next exact position equals x2
    def init(x):
        alive = tuple(p for p in range(system.n) if d[p][x] < tp.eps)
        return alive, (x, frozenset(alive))

    def extend(alive, x2):
        if not any(system.fmap[p] == x2 for p in alive):
            return None, None
        nxt = tuple(sorted({system.fmap[p] for p in alive
                            if d[system.fmap[p]][x2] < tp.eps}))
        return nxt, (x2, frozenset(nxt))

    walk, states = _bfs(system, tp, horizon, budget, init, extend)
    certified = horizon >= states + 1
    if walk is not None:
        v = Verdict(False, counterexample={"walk": walk, "kind": "h-shadowing"},
                    states_explored=states)
    else:
        v = Verdict(True, witness={"rule": "bounded-walk-enumeration"},
                    states_explored=states)
    return OracleResult(v, horizon, certified, states)


def _oracle_weak1(system, tp, horizon, budget):
    d = system.space.dist
    orbs = [list(iter_mask(orbit_set(system, z))) for z in range(system.n)]

    def near_orbit(z, p):
        return min(d[p][o] for o in orbs[z]) < tp.eps

    def init(x):
        alive = tuple(z for z in range(system.n) if near_orbit(z, x))
        return (alive or None), (x, frozenset(alive))

    def extend(alive, x2):
        nxt = tuple(z for z in alive if near_orbit(z, x2))
        return (nxt or None), (x2, frozenset(nxt))

    walk, states = _bfs(system, tp, horizon, budget, init, extend)
    certified = horizon >= states + 1
    if walk is not None:
        v = Verdict(False, counterexample={"walk": walk, "kind": "weak1"},
                    states_explored=states)
    else:
        v = Verdict(True, witness={"rule": "bounded-walk-enumeration"},
                    states_explored=states)
    return OracleResult(v, horizon, certified, states)


def _oracle_slimit(system, tp, horizon, budget):
    """Prefixes are enumerated like the shadowing oracle; at every prefix
    the adversary may switch to an exact tail, which we extend until the
    directly simulated (tail node, candidate positions) pair repeats, so a
    missing merge is genuine and not a truncation artifact."""
    d = system.space.dist

    def tail_bad(x, alive):
        """alive: tuple of candidate positions after the prefix.  Returns
        the exact tail (node list) on failure, None if some candidate
        merges."""
        poss = set(alive)
        tail = []
        seen = set()
        while True:
            if x in poss:
                return None
            key = (x, frozenset(poss))
            if key in seen:
                return tail
            seen.add(key)
            x = system.fmap[x]
            poss = {system.fmap[p] for p in poss if d[system.fmap[p]][x] < tp.eps}
            tail.append(x)
            if not poss:
                return tail

    seen = {}
    depth = {}
    queue = deque()
    tail_states = 0
    for x in range(system.n):
        alive = tuple(p for p in range(system.n) if d[p][x] < tp.eps)
        key = (x, frozenset(alive))
        if key not in seen:
            seen[key] = None
            depth[key] = 0
            queue.append((alive, key))
    dg = delta_graph(system, tp.delta)
    bad = None
    while queue and bad is None:
        alive, key = queue.popleft()
        if len(seen) > budget:
            raise BudgetError("oracle state budget exceeded")
        t = tail_bad(key[0], alive)
        tail_states += 1
        if t is not None:
            walk = []
            k = key
            while k is not None:
                walk.append(k[0])
                k = seen[k]
            walk.reverse()
            bad = {"walk": walk + t, "switch": len(walk) - 1}
            break
        if depth[key] >= horizon:
            continue
        for x2 in dg.succ[key[0]]:
            nxt = tuple(sorted({system.fmap[p] for p in alive
                                if d[system.fmap[p]][x2] < tp.eps}))
            key2 = (x2, frozenset(nxt))
            if not nxt:
                walk = [x2]
                k = key
                while k is not None:
                    walk.append(k[0])
                    k = seen[k]
                walk.reverse()
                bad = {"walk": walk, "switch": len(walk) - 1}
                break
            if key2 not in seen:
                seen[key2] = key
                depth[key2] = depth[key] + 1
                queue.append((nxt, key2))
    states = len(seen)
    certified = horizon >= states + 1
    if bad is not None:
        bad["kind"] = "slimit-condition2"
        v = Verdict(False, counterexample=bad, states_explored=states)
    else:
        v = Verdict(True, witness={"rule": "bounded-walk-enumeration"},
                    states_explored=states)
    return OracleResult(v, horizon, certified, states)


def _oracle_inverse(system, tp, horizon, budget):
    """Direct for-all-methods-exists-y check: a method assigns each start
    its own walk, so the property fails exactly when every start admits a
    straying walk; that is decided by forward reachability per start."""
    if not system.is_surjective():
        raise NotSurjectiveError(
            "inverse shadowing is defined for surjective systems only")
    n = system.n
    d = system.space.dist
    dg = delta_graph(system, tp.delta)
    total_states = 0
    worst_uncertified = False
    for x in range(n):
        pts, nxt = orbit_timeline(system, x)
        good_y = None
        bad_walks = {}
        for y in range(n):
            if d[y][pts[0]] >= tp.eps:
                bad_walks[y] = [y]
                continue
            prev = {(y, 0): None}
            q = deque([((y, 0), 0)])
            stray = None
            while q:
                (w, t), dep = q.popleft()
                total_states += 1
                if total_states > budget:
                    raise BudgetError("oracle state budget exceeded")
                if dep >= horizon:
                    worst_uncertified = True
                    continue
                for w2 in dg.succ[w]:
                    st2 = (w2, nxt[t])
                    if st2 in prev:
                        continue
                    prev[st2] = (w, t)
                    if d[w2][pts[nxt[t]]] >= tp.eps:
                        walk = []
                        c = st2
                        while c is not None:
                            walk.append(c[0])
                            c = prev[c]
                        walk.reverse()
                        stray = walk
                        q.clear()
                        break
                    q.append((st2, dep + 1))
            if stray is None:
                good_y = y
                break
            bad_walks[y] = stray
        if good_y is None:
            v = Verdict(False, counterexample={"x": x, "bad_walks": bad_walks,
                                               "kind": "inverse"},
                        states_explored=total_states)
            return OracleResult(v, horizon, not worst_uncertified, total_states)
    v = Verdict(True, witness={"rule": "per-start-forward-search"},
                states_explored=total_states)
    return OracleResult(v, horizon, not worst_uncertified, total_states)


def _oracle_weak2(system, tp, horizon, budget):
    """Enumerates lasso walks (so the visited set is that of a genuine
    infinite walk) and searches a z whose orbit stays inside the
    eps-neighborhood of the visited set."""
    n = system.n
    d = system.space.dist
    dg = delta_graph(system, tp.delta)
    orbs = [list(iter_mask(orbit_set(system, z))) for z in range(n)]
    checked = set()
    states = 0
    # BFS over walks up to horizon, keyed by (node, visited set); BFS keeps
    # the first discovery shortest so the depth bound is meaningful
    stack = deque((x, frozenset([x]), (x,)) for x in range(n))
    seen = set((x, frozenset([x])) for x in range(n))
    while stack:
        x, vis, walk = stack.popleft()
        states += 1
        if states > budget:
            raise BudgetError("oracle state budget exceeded")
        # lasso test: can the walk continue forever inside vis covering it?
        if vis not in checked:
            adj = {i: [j for j in dg.succ[i] if j in vis] for i in vis}
            if _lasso_closable(adj, vis, x):
                checked.add(vis)
                ok = False
                for z in range(n):
                    if all(min(d[o][v] for v in vis) < tp.eps for o in orbs[z]):
                        ok = True
                        break
                if not ok:
                    v = Verdict(False, counterexample={
                        "walk": list(walk), "visited": sum(1 << i for i in vis),
                        "kind": "weak2-lasso"}, states_explored=states)
                    return OracleResult(v, horizon, True, states)
        if len(walk) <= horizon:
            for x2 in dg.succ[x]:
                vis2 = vis | {x2}
                key = (x2, vis2)
                if key not in seen:
                    seen.add(key)
                    stack.append((x2, vis2, walk + (x2,)))
    certified = horizon >= n * n + n + 1
    v = Verdict(True, witness={"rule": "lasso-enumeration"}, states_explored=states)
    return OracleResult(v, horizon, certified, states)


def _lasso_closable(adj, vis, end):
    """True iff from `end` the walk can continue forever inside vis while
    having already covered vis: end must reach a cycle within vis."""
    reach = {end}
    q = deque([end])
    while q:
        a = q.popleft()
        for b in adj[a]:
            if b not in reach:
                reach.add(b)
                q.append(b)
    # Kahn peeling: a cycle exists in the reachable subgraph iff the
    # topological removal gets stuck
    indeg = {a: 0 for a in reach}
    for a in reach:
        for b in adj[a]:
            if b in reach:
                indeg[b] += 1
    q = deque(a for a in reach if indeg[a] == 0)
    removed = 0
    while q:
        a = q.popleft()
        removed += 1
        for b in adj[a]:
            if b in reach:
                indeg[b] -= 1
                if indeg[b] == 0:
                    q.append(b)
    return removed < len(reach)


def certified_horizon_hint(system):
    """A horizon that certainly certifies all subset-state oracles."""
    return system.n * (1 << system.n) + 2
