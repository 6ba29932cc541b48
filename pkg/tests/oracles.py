"""Brute-force references on small graphs, written with integer bitmasks.

Nothing here touches the package: these are the independent routes the
implementation is compared against.
"""

import itertools
import random


def bits(cells):
    m = 0
    for c in cells:
        m |= 1 << c
    return m


def cells_of(mask):
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def succ_masks(n, dyn):
    s = [0] * n
    for a, b in dyn:
        s[a] |= 1 << b
    return s


def img(succ, mask):
    out = 0
    for v in cells_of(mask):
        out |= succ[v]
    return out


def strict_reach(succ):
    """reach[v] = cells reachable from v by a path of length >= 1."""
    n = len(succ)
    reach = list(succ)
    changed = True
    while changed:
        changed = False
        for v in range(n):
            new = reach[v] | img(succ, reach[v])
            if new != reach[v]:
                reach[v] = new
                changed = True
    return reach


def has_cycle_through(succ, v, max_len):
    """v lies on a cycle of length <= max_len (explicit path enumeration)."""
    frontier = 1 << v
    for _ in range(max_len):
        frontier = img(succ, frontier)
        if frontier >> v & 1:
            return True
    return False


def cyclic(succ):
    n = len(succ)
    return bits(v for v in range(n) if has_cycle_through(succ, v, n))


def sccs(succ):
    """Partition by pairwise mutual reachability, blocks ordered by minimum."""
    n = len(succ)
    r = strict_reach(succ)
    blocks, seen = [], 0
    for v in range(n):
        if seen >> v & 1:
            continue
        block = [w for w in range(n) if w == v or (r[v] >> w & 1 and r[w] >> v & 1)]
        seen |= bits(block)
        blocks.append(block)
    return blocks


def iterated_images(succ):
    n = len(succ)
    levels = [(1 << n) - 1]
    while True:
        nxt = img(succ, levels[-1])
        if nxt == levels[-1]:
            return levels
        levels.append(nxt)


def forward_closure(succ, mask):
    out = mask
    while True:
        new = out | img(succ, out)
        if new == out:
            return out
        out = new


def absorbing(succ, e, horizon):
    """Literal quantifier: every cell has n0 with F^k(v) inside e for n0 <= k <= horizon."""
    for v in range(len(succ)):
        orbit = [1 << v]
        for _ in range(horizon):
            orbit.append(img(succ, orbit[-1]))
        if not any(all(o & ~e == 0 for o in orbit[n0:]) for n0 in range(horizon + 1)):
            return False
    return True


def omega_limit(succ, v):
    """Cells reached from v at path lengths n..2n, i.e. at arbitrarily large lengths."""
    n = len(succ)
    frontier = 1 << v
    out = 0
    for k in range(1, 2 * n + 1):
        frontier = img(succ, frontier)
        if k >= n:
            out |= frontier
    return out


def inv(succ, a):
    """Cells of a on a bi-infinite path inside a: they can reach, and be reached
    from, a cycle that stays inside a."""
    n = len(succ)
    sub = [succ[v] & a if a >> v & 1 else 0 for v in range(n)]
    pred = [0] * n
    for v in range(n):
        for w in cells_of(sub[v]):
            pred[w] |= 1 << v
    fwd = strict_reach(sub)
    bwd = strict_reach(pred)
    cyc_a = bits(v for v in range(n) if fwd[v] >> v & 1)
    out = 0
    for v in cells_of(a):
        ahead = (fwd[v] | 1 << v) & cyc_a
        behind = (bwd[v] | 1 << v) & cyc_a
        if ahead and behind:
            out |= 1 << v
    return out


def adj_masks(n, adj):
    s = [0] * n
    for a, b in adj:
        s[a] |= 1 << b
        s[b] |= 1 << a
    return s


def closure(adjm, mask):
    out = mask
    for v in cells_of(mask):
        out |= adjm[v]
    return out


def components(adjm, mask):
    """Adjacency components inside mask, ordered by minimum cell."""
    comps, left = [], mask
    while left:
        v = cells_of(left)[0]
        comp = 1 << v
        while True:
            grow = closure(adjm, comp) & mask
            if grow == comp:
                break
            comp = grow
        comps.append(comp)
        left &= ~comp
    return comps


def basins(succ, adjm):
    """Cell -> component id, or frozenset of reachable component ids."""
    n = len(succ)
    comps = components(adjm, cyclic(succ))
    reach = strict_reach(succ)
    out = {}
    for v in range(n):
        own = [i for i, c in enumerate(comps) if c >> v & 1]
        if own:
            out[v] = own[0]
            continue
        hit = frozenset(i for i, c in enumerate(comps) if reach[v] & c)
        out[v] = next(iter(hit)) if len(hit) == 1 else hit
    return comps, out


def random_dyn(rng, n):
    dyn = []
    for v in range(n):
        k = min(n, 1 + int(rng.expovariate(1.2)))
        for w in rng.sample(range(n), k):
            dyn.append((v, w))
    return dyn


def random_adj(rng, n, p=0.35):
    return [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]


def random_graphs(count, max_n=7, seed=20261016):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_n)
        yield n, random_dyn(rng, n), random_adj(rng, n)


def all_small_graphs(max_n=4):
    """Every total multivalued map on up to ``max_n`` cells.

    Adjacency relations are assigned round-robin so that every pattern on
    ``n`` cells is paired with many maps.
    """
    for n in range(1, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        n_patterns = 1 << len(pairs)
        subsets = range(1, 1 << n)
        for idx, choice in enumerate(itertools.product(subsets, repeat=n)):
            dyn = [(v, w) for v, m in enumerate(choice) for w in cells_of(m)]
            pattern = (idx * 7 + n) % n_patterns
            adj = [p for i, p in enumerate(pairs) if pattern >> i & 1]
            yield n, dyn, adj
