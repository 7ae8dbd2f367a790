"""Exact combinatorial search engines on bitset graphs.

All routines are deterministic: vertex order breaks every tie, so repeated
runs (and any parallel variant) must produce identical answers.  Budgets are
node counts; exhausting one raises BudgetExhausted rather than returning a
possibly-wrong answer.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "BudgetExhausted",
    "masks_from_edges",
    "complement_masks",
    "is_independent",
    "bits",
    "max_clique",
    "maximal_independent_sets",
    "max_weight_independent_set",
    "greedy_clique",
    "CoverSearcher",
]

DEFAULT_BUDGET = 20_000_000


class BudgetExhausted(Exception):
    """Search node budget ran out before the question was settled."""

    def __init__(self, nodes):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes


def bits(mask):
    """Yield set bit positions in increasing order."""
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def masks_from_edges(n, edges):
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return tuple(adj)


def complement_masks(adj):
    n = len(adj)
    full = (1 << n) - 1
    return tuple((full & ~adj[v]) & ~(1 << v) for v in range(n))


def is_independent(adj, mask):
    m = mask
    while m:
        b = m & -m
        v = b.bit_length() - 1
        if adj[v] & mask:
            return False
        m ^= b
    return True


def greedy_clique(adj, inside):
    """A maximal clique inside the given vertex mask, grown greedily."""
    clique = 0
    common = inside
    while common:
        b = common & -common
        v = b.bit_length() - 1
        clique |= b
        common &= adj[v]
    return clique


class _Counter:
    __slots__ = ("nodes", "budget")

    def __init__(self, budget):
        self.nodes = 0
        self.budget = budget

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted(self.nodes)


def max_clique(adj, budget=DEFAULT_BUDGET):
    """Exact maximum clique via branch and bound with greedy coloring bounds.

    Returns (size, mask, nodes).  The independence number of a graph is the
    clique number of its complement.
    """
    n = len(adj)
    counter = _Counter(budget)
    best = [0, 0]

    def color_order(p):
        order = []
        bound = []
        u = p
        color = 0
        while u:
            color += 1
            q = u
            while q:
                b = q & -q
                v = b.bit_length() - 1
                order.append(v)
                bound.append(color)
                q &= ~adj[v]
                q ^= b
                u ^= b
        return order, bound

    def expand(r_size, r_mask, p):
        counter.tick()
        order, bound = color_order(p)
        for i in range(len(order) - 1, -1, -1):
            if r_size + bound[i] <= best[0]:
                return
            v = order[i]
            bv = 1 << v
            if r_size + 1 + _popcount(p & adj[v]) > best[0]:
                sub = p & adj[v]
                if r_size + 1 > best[0]:
                    best[0] = r_size + 1
                    best[1] = r_mask | bv
                if sub:
                    expand(r_size + 1, r_mask | bv, sub)
            elif r_size + 1 > best[0]:
                best[0] = r_size + 1
                best[1] = r_mask | bv
            p ^= bv
        return

    full = (1 << n) - 1
    if full:
        expand(0, 0, full)
    return best[0], best[1], counter.nodes


def _popcount(x):
    return x.bit_count()


def maximal_independent_sets(adj, within=None, min_size=0, limit=2_000_000):
    """Maximal independent sets of the subgraph induced on `within`.

    Bron-Kerbosch with pivoting on the complement graph, as masks in
    deterministic (sorted) order.  `min_size` prunes branches that cannot
    reach the requested size; sets below it are dropped from the output.
    Raises BudgetExhausted past `limit` recorded sets.
    """
    n = len(adj)
    if within is None:
        within = (1 << n) - 1
    comp = tuple(c & within for c in complement_masks(adj))
    out = []

    def bk(r, rsize, p, x):
        if rsize + _popcount(p) < min_size:
            return
        if not p and not x:
            if rsize >= min_size:
                out.append(r)
                if len(out) > limit:
                    raise BudgetExhausted(len(out))
            return
        pivot_pool = p | x
        best_u, best_cnt = -1, -1
        pool = pivot_pool
        while pool:
            bb = pool & -pool
            w = bb.bit_length() - 1
            c = _popcount(p & comp[w])
            if c > best_cnt:
                best_u, best_cnt = w, c
            pool ^= bb
        cand = p & ~comp[best_u]
        while cand:
            bb = cand & -cand
            v = bb.bit_length() - 1
            bk(r | bb, rsize + 1, p & comp[v], x & comp[v])
            p ^= bb
            x |= bb
            cand ^= bb

    if within:
        bk(0, 0, within, 0)
    out.sort()
    return out


def max_weight_independent_set(adj, weights, budget=DEFAULT_BUDGET):
    """Exact maximum-weight independent set for nonnegative Fraction weights.

    Returns (weight, mask, nodes).  Used as the pricing oracle in the
    fractional-coloring column generation and to verify dual certificates.
    """
    n = len(adj)
    counter = _Counter(budget)
    zero = Fraction(0)
    order = sorted(range(n), key=lambda v: (-weights[v], v))
    best = [zero, 0]

    def total(mask):
        t = zero
        m = mask
        while m:
            b = m & -m
            t += weights[b.bit_length() - 1]
            m ^= b
        return t

    def expand(cur, cur_mask, cand):
        counter.tick()
        if cur > best[0]:
            best[0], best[1] = cur, cur_mask
        if not cand:
            return
        if cur + total(cand) <= best[0]:
            return
        for v in order:
            bv = 1 << v
            if cand & bv:
                expand(cur + weights[v], cur_mask | bv, cand & ~adj[v] & ~bv)
                cand &= ~bv
                if cur + total(cand) <= best[0]:
                    return

    expand(zero, 0, (1 << n) - 1)
    return best[0], best[1], counter.nodes


class CoverSearcher:
    """Decide whether a vertex set can be covered by t independent sets.

    Pigeonhole branching: some piece must cover at least ceil(|U|/t) of the
    uncovered set U, and that piece extends to a maximal independent set of
    the induced subgraph G[U] of at least that size.  Candidates are
    enumerated per node with a size-pruned Bron-Kerbosch, largest first.
    The rule is complete and collapses the search on graphs whose large
    independent sets are scarce.  Failed (U, t) states are memoized.
    """

    def __init__(self, adj, budget=DEFAULT_BUDGET, mis_limit=2_000_000):
        self.adj = adj
        self.n = len(adj)
        self.full = (1 << self.n) - 1
        self.mis_limit = mis_limit
        self.counter = _Counter(budget)
        self.dead = set()

    def nodes(self):
        return self.counter.nodes

    def cover(self, uncovered, t):
        """A list of <= t independent-set masks covering `uncovered`, or None."""
        if not uncovered:
            return []
        if t <= 0:
            return None
        self.counter.tick()
        if t == 1:
            return [uncovered] if is_independent(self.adj, uncovered) else None
        key = (uncovered, t)
        if key in self.dead:
            return None
        size = _popcount(uncovered)
        if _popcount(greedy_clique(self.adj, uncovered)) > t:
            self.dead.add(key)
            return None
        threshold = -(-size // t)  # ceil
        cand = maximal_independent_sets(
            self.adj, within=uncovered, min_size=threshold, limit=self.mis_limit
        )
        cand.sort(key=lambda m: (-_popcount(m), m))
        for piece in cand:
            rest = self.cover(uncovered & ~piece, t - 1)
            if rest is not None:
                return [piece] + rest
        self.dead.add(key)
        return None

    def min_cover(self, target):
        """(chromatic number of induced subgraph, cover pieces)."""
        if not target:
            return 0, []
        lb = _popcount(greedy_clique(self.adj, target))
        t = max(lb, 1)
        while True:
            got = self.cover(target, t)
            if got is not None:
                return t, got
            t += 1
