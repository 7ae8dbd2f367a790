"""Finite graphs with exact certificates for the three cover-lemma properties.

A level graph is admissible for a target n when (1) it cannot be partitioned
into n independent sets, (2) its fractional chromatic number is at most 4
(equivalent, by LP duality, to every nonnegative weighting having an
independent set carrying a quarter of the total weight), and (3) it carries a
family H(x) of independent sets with x in H(x) and every vertex covered by at
least a quarter of the family.  Everything here is verified with exact
rational arithmetic; randomized generation is seeded and retried, never
trusted.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .magnitude import Magnitude
from .search import (
    BudgetExhausted,
    CoverSearcher,
    bits,
    complement_masks,
    is_independent,
    masks_from_edges,
    max_clique,
    max_weight_independent_set,
    maximal_independent_sets,
)
from .simplex import simplex_max

__all__ = [
    "Graph",
    "SymbolicGraph",
    "CapEmbedding",
    "CoverFamily",
    "PartitionCheck",
    "WeightCheck",
    "CoverFamilyCheck",
    "GraphCertificate",
    "CapGenerationError",
    "CoverFamilyError",
    "single_edge",
    "cycle_graph",
    "complete_graph",
    "explicit_graph",
    "generate_kneser_graph",
    "generate_cap_graph",
    "check_partition_property",
    "check_weight_property",
    "check_cover_family",
    "build_cover_family",
    "certify",
]

DEFAULT_BUDGET = 20_000_000
KNESER_MATERIALIZATION_CAP = 100_000


class CapGenerationError(Exception):
    pass


class CoverFamilyError(Exception):
    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


@dataclass(frozen=True)
class CapEmbedding:
    """Unit-norm points on a sphere, with the exact rational cap threshold."""

    dimension: int
    points: tuple[tuple[float, ...], ...]
    epsilon: Fraction
    epsilon_error_bound: Fraction


@dataclass(frozen=True)
class Graph:
    """Materialized undirected graph; adjacency is symmetric and irreflexive."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    provenance: str = "explicit"
    embedding: CapEmbedding | None = field(default=None, compare=False)
    adj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("graphs need at least one vertex")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < v < self.vertex_count):
                raise ValueError(f"bad edge ({u}, {v})")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        object.__setattr__(
            self, "adj", masks_from_edges(self.vertex_count, self.edges)
        )

    @property
    def full_mask(self):
        return (1 << self.vertex_count) - 1

    def has_edge(self, u, v):
        return bool(self.adj[u] >> v & 1)

    def digest(self):
        payload = json.dumps(
            {"n": self.vertex_count, "edges": self.edges}, separators=(",", ":")
        )
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class SymbolicGraph:
    """Size-only stand-in for a graph too large to materialize."""

    provenance: str
    size: Magnitude


def single_edge():
    return Graph(2, ((0, 1),), "explicit")


def cycle_graph(n):
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph(n, tuple(sorted((i, (i + 1) % n)) for i in range(n)), "explicit")


def complete_graph(n):
    return Graph(n, tuple(itertools.combinations(range(n), 2)), "explicit")


def explicit_graph(vertex_count, edges):
    return Graph(vertex_count, tuple(tuple(sorted(e)) for e in edges), "explicit")


# ---------------------------------------------------------------------------
# Kneser graphs
# ---------------------------------------------------------------------------


def kneser_vertices(m, k):
    return tuple(itertools.combinations(range(m), k))


def generate_kneser_graph(m, k, materialization_cap=KNESER_MATERIALIZATION_CAP):
    """K(m, k): k-subsets of an m-set, adjacent iff disjoint.

    Above the materialization cap only the exact size is returned.
    """
    if k < 1 or m < 2 * k:
        raise ValueError("kneser graphs need m >= 2k >= 2")
    count = math.comb(m, k)
    provenance = f"kneser({m},{k})"
    if count > materialization_cap:
        return SymbolicGraph(provenance, Magnitude.from_int(count))
    verts = kneser_vertices(m, k)
    edges = []
    for i in range(count):
        a = set(verts[i])
        for j in range(i + 1, count):
            if not a & set(verts[j]):
                edges.append((i, j))
    return Graph(count, tuple(edges), provenance)


def _kneser_params(provenance):
    if not provenance.startswith("kneser(") or not provenance.endswith(")"):
        return None
    m, k = provenance[len("kneser(") : -1].split(",")
    return int(m), int(k)


# ---------------------------------------------------------------------------
# Cap graphs on spheres
# ---------------------------------------------------------------------------


def _sqrt_bounds(x: Fraction, bits_=48):
    """Certified rational [lo, hi] with lo <= sqrt(x) <= hi."""
    if x < 0:
        raise ValueError("negative radicand")
    n, d = x.numerator, x.denominator
    s = math.isqrt((n * d) << (2 * bits_))
    scale = d << bits_
    return Fraction(s, scale), Fraction(s + 1, scale)


def rational_half_inv_sqrt(d):
    """Exact rational approximation of 1/(2*sqrt(d)) with its error bound."""
    r = math.isqrt(d << 80)  # floor(sqrt(d) * 2^40)
    eps = Fraction(1 << 40, 2 * r)
    return eps, Fraction(1, 1 << 39)


def _poly_cap_integral(k, a, b):
    """Exact integral of (1-t^2)^k over [a, b] for integer k >= 0."""
    total = Fraction(0)
    for i in range(k + 1):
        coef = Fraction(math.comb(k, i) * (-1) ** i, 2 * i + 1)
        total += coef * (b ** (2 * i + 1) - a ** (2 * i + 1))
    return total


def cap_measure_exceeds_quarter(d, eps: Fraction):
    """Certified test of sigma^d({y : x.y >= eps}) > 1/4.

    The surface measure of the cap is the integral of (1-t^2)^((d-2)/2) over
    [eps, 1], normalized over [-1, 1].  Even d gives exact polynomial
    integrals; d = 1 reduces to eps^2 < 1/2; odd d >= 3 uses monotone Riemann
    bounds with certified rational square roots, refined until decisive.
    """
    if not 0 < eps < 1:
        raise ValueError("cap threshold must lie in (0, 1)")
    if d == 1:
        # arccos(eps)/pi > 1/4 iff eps < cos(pi/4).
        return 2 * eps * eps < 1
    if d % 2 == 0:
        k = (d - 2) // 2
        cap = _poly_cap_integral(k, eps, Fraction(1))
        half = _poly_cap_integral(k, Fraction(0), Fraction(1))
        return 2 * cap > half

    power = d - 2  # odd

    def value_bounds(t):
        radicand = (1 - t * t) ** power
        return _sqrt_bounds(radicand)

    pieces = 32
    while pieces <= 4096:
        def riemann(a, b):
            lo = Fraction(0)
            hi = Fraction(0)
            width = (b - a) / pieces
            for i in range(pieces):
                left = a + i * width
                right = left + width
                # integrand decreases on [0, 1]
                lo += value_bounds(right)[0] * width
                hi += value_bounds(left)[1] * width
            return lo, hi

        cap_lo, cap_hi = riemann(eps, Fraction(1))
        half_lo, half_hi = riemann(Fraction(0), Fraction(1))
        if 2 * cap_lo > half_hi:
            return True
        if 2 * cap_hi < half_lo:
            return False
        pieces *= 2
    raise ArithmeticError(f"cap measure too close to 1/4 at d={d}, eps={eps}")


def select_cap_dimension(target_n, search_cap=64):
    """Smallest d >= target_n whose cap at 1/(2*sqrt(d)) has measure > 1/4."""
    for d in range(target_n, target_n + search_cap + 1):
        eps, _ = rational_half_inv_sqrt(d)
        if cap_measure_exceeds_quarter(d, eps):
            return d
    raise CapGenerationError(
        f"no dimension in [{target_n}, {target_n + search_cap}] has certified "
        "cap measure above 1/4"
    )


def _random_unit_points(dim, count, rng):
    pts = []
    for _ in range(count):
        while True:
            coords = [rng.gauss(0.0, 1.0) for _ in range(dim + 1)]
            norm = math.sqrt(sum(c * c for c in coords))
            if norm > 1e-6:
                break
        pts.append(tuple(c / norm for c in coords))
    return tuple(pts)


def generate_cap_graph(target_n, point_count, seed, search_cap=64, max_attempts=50):
    """Random sphere-cap graph: points on S^d, adjacent iff |x-y| >= 2 - eps^2.

    Every adjacency decision is an exact rational comparison (floats are read
    as the dyadic rationals they are).  A pair landing exactly on the
    threshold is a tie: the attempt is discarded and the seed perturbed.
    """
    if point_count < 2:
        raise ValueError("need at least two points")
    d = select_cap_dimension(target_n, search_cap)
    eps, err = rational_half_inv_sqrt(d)
    threshold_sq = (2 - eps * eps) ** 2
    norm_tol = Fraction(1, 10**9)

    for attempt in range(max_attempts):
        rng = random.Random(seed * 1_000_003 + attempt)
        pts = _random_unit_points(d, point_count, rng)
        exact = [tuple(Fraction(c) for c in p) for p in pts]
        if any(abs(sum(c * c for c in p) - 1) > norm_tol for p in exact):
            continue
        edges = []
        ambiguous = False
        for i in range(point_count):
            for j in range(i + 1, point_count):
                dist_sq = sum((a - b) ** 2 for a, b in zip(exact[i], exact[j]))
                if dist_sq == threshold_sq:
                    ambiguous = True
                    break
                if dist_sq > threshold_sq:
                    edges.append((i, j))
            if ambiguous:
                break
        if ambiguous:
            continue
        emb = CapEmbedding(d, pts, eps, err)
        graph = Graph(point_count, tuple(edges), "cap", embedding=emb)
        fam = cap_cover_family(graph)
        if all(_family_sets_independent(graph, fam)):
            return graph
    raise CapGenerationError(
        f"no unambiguous embedding after {max_attempts} attempts (seed {seed})"
    )


def cap_cover_family(graph):
    """The candidate family H(x) = C(x) intersected with the point set."""
    if graph.embedding is None:
        raise ValueError("cap cover family needs an embedding")
    emb = graph.embedding
    exact = [tuple(Fraction(c) for c in p) for p in emb.points]
    sets = []
    for x in range(graph.vertex_count):
        members = frozenset(
            y
            for y in range(graph.vertex_count)
            if sum(a * b for a, b in zip(exact[x], exact[y])) >= emb.epsilon
        )
        sets.append(members)
    return CoverFamily(tuple(sets))


def _family_sets_independent(graph, fam):
    for s in fam.sets:
        mask = 0
        for v in s:
            mask |= 1 << v
        yield is_independent(graph.adj, mask)


# ---------------------------------------------------------------------------
# Property checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverFamily:
    """One vertex subset H(x) per vertex x."""

    sets: tuple[frozenset, ...]


@dataclass(frozen=True)
class PartitionCheck:
    status: str  # "pass" | "fail" | "indeterminate"
    n: int
    partition: tuple[tuple[int, ...], ...] | None
    nodes: int
    digest: str | None

    @property
    def passed(self):
        return self.status == "pass"


@dataclass(frozen=True)
class WeightCheck:
    status: str
    chi_f: Fraction | None
    primal: tuple[tuple[Fraction, frozenset], ...] | None
    dual: tuple[Fraction, ...] | None
    method: str

    @property
    def passed(self):
        return self.status == "pass"


@dataclass(frozen=True)
class CoverFamilyCheck:
    status: str
    family: CoverFamily | None
    min_coverage: int | None
    violation: str | None

    @property
    def passed(self):
        return self.status == "pass"


@dataclass(frozen=True)
class GraphCertificate:
    n_target: int
    partition: PartitionCheck
    weight: WeightCheck
    cover: CoverFamilyCheck

    @property
    def status(self):
        statuses = (self.partition.status, self.weight.status, self.cover.status)
        if "indeterminate" in statuses:
            return "indeterminate"
        return "pass" if all(s == "pass" for s in statuses) else "fail"

    @property
    def passing(self):
        return self.status == "pass"


def _require_materialized(g):
    if isinstance(g, SymbolicGraph):
        raise ValueError("operation needs a materialized graph")


def _search_digest(g, n, nodes):
    payload = json.dumps(
        {
            "graph": g.digest(),
            "n": n,
            "algorithm": "pigeonhole-maximal-IS-cover",
            "nodes": nodes,
        },
        separators=(",", ":"),
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def check_partition_property(g, n, budget=DEFAULT_BUDGET):
    """Pass iff no partition of g into n independent sets exists."""
    _require_materialized(g)
    if n < 1:
        raise ValueError("n must be positive")
    searcher = CoverSearcher(g.adj, budget=budget)
    try:
        cover = searcher.cover(g.full_mask, n)
    except BudgetExhausted:
        return PartitionCheck("indeterminate", n, None, searcher.nodes(), None)
    if cover is None:
        return PartitionCheck(
            "pass", n, None, searcher.nodes(), _search_digest(g, n, searcher.nodes())
        )
    return PartitionCheck("fail", n, _cover_to_partition(g, cover), searcher.nodes(), None)


def _cover_to_partition(g, cover):
    parts = [[] for _ in cover]
    for v in range(g.vertex_count):
        for i, piece in enumerate(cover):
            if piece >> v & 1:
                parts[i].append(v)
                break
    return tuple(tuple(p) for p in parts if p)


def _verify_automorphism(g, perm):
    for u, v in g.edges:
        a, b = perm[u], perm[v]
        if not g.has_edge(a, b):
            return False
    return True


def _find_automorphism_to(g, target):
    """Backtracking search for an automorphism mapping vertex 0 to target."""
    n = g.vertex_count
    degs = [g.adj[v].bit_count() for v in range(n)]
    if degs[0] != degs[target]:
        return None
    perm = [-1] * n
    used = [False] * n
    perm[0] = target
    used[target] = True

    def extend(v):
        if v == n:
            return _verify_automorphism(g, perm)
        for c in range(n):
            if used[c] or degs[c] != degs[v]:
                continue
            ok = True
            for u in range(v):
                if g.has_edge(u, v) != g.has_edge(perm[u], c):
                    ok = False
                    break
            if ok:
                perm[v] = c
                used[c] = True
                if extend(v + 1):
                    return True
                used[c] = False
                perm[v] = -1
        return False

    if extend(1):
        return tuple(perm)
    return None


def verify_vertex_transitive(g, vertex_cap=16):
    """Exhaustively verified vertex transitivity; None = not attempted."""
    if g.vertex_count > vertex_cap:
        return None
    autos = []
    for target in range(g.vertex_count):
        perm = _find_automorphism_to(g, target)
        if perm is None:
            return False
        autos.append(perm)
    return autos


def _independence_number(g, budget):
    comp = complement_masks(g.adj)
    size, mask, nodes = max_clique(comp, budget)
    return size, mask


def _mask_to_frozenset(mask):
    return frozenset(bits(mask))


def _verify_weight_certificate(g, chi_f, primal, dual, budget):
    """Exact feasibility and optimality checks for both certificates."""
    n = g.vertex_count
    coverage = [Fraction(0)] * n
    total = Fraction(0)
    for w, members in primal:
        if w < 0:
            return False
        mask = 0
        for v in members:
            mask |= 1 << v
        if not is_independent(g.adj, mask):
            return False
        total += w
        for v in members:
            coverage[v] += w
    if total != chi_f or any(c < 1 for c in coverage):
        return False
    if any(w < 0 for w in dual):
        return False
    wg = sum(dual, Fraction(0))
    if len(set(dual)) == 1:
        # uniform weights: the optimum is weight * independence number
        alpha, _ = _independence_number(g, budget)
        best = dual[0] * alpha
    else:
        best, _, _ = max_weight_independent_set(g.adj, list(dual), budget)
    return best * chi_f == wg


def _chi_f_transitive(g, method, budget):
    alpha, alpha_mask = _independence_number(g, budget)
    chi_f = Fraction(g.vertex_count, alpha)
    dual = tuple(Fraction(1) for _ in range(g.vertex_count))
    params = _kneser_params(g.provenance)
    primal = None
    if params is not None:
        m, k = params
        verts = kneser_vertices(m, k)
        stars = []
        for e in range(m):
            members = frozenset(i for i, s in enumerate(verts) if e in s)
            stars.append((Fraction(1, k), members))
        primal = tuple(stars)
    else:
        autos = verify_vertex_transitive(g)
        if autos and isinstance(autos, list):
            base = list(bits(alpha_mask))
            images = {frozenset(perm[v] for v in base) for perm in autos}
            weight = Fraction(chi_f, len(images))
            candidate = tuple((weight, img) for img in sorted(images, key=sorted))
            cov = [Fraction(0)] * g.vertex_count
            for w, img in candidate:
                for v in img:
                    cov[v] += w
            if all(c >= 1 for c in cov):
                primal = candidate
    if primal is None:
        _, primal, _ = _chi_f_lp(g, budget)
    if not _verify_weight_certificate(g, chi_f, primal, dual, budget):
        raise ArithmeticError("transitive fractional-coloring certificate failed")
    return chi_f, primal, dual, method


def _chi_f_lp(g, budget):
    """Exact fractional chromatic number by LP over independent sets.

    Solves the dual program max 1.y s.t. y(H) <= 1 over independent sets H,
    with lazy column generation priced by exact max-weight independent set.
    The optimal y is the worst-case weight vector; the constraint prices give
    the fractional coloring.
    """
    n = g.vertex_count
    try:
        pool = maximal_independent_sets(g.adj, limit=4000)
        complete = True
    except BudgetExhausted:
        complete = False
        pool = []
        covered = 0
        for v in range(n):
            if not covered >> v & 1:
                grown = 1 << v
                for u in range(n):
                    if not grown >> u & 1 and not g.adj[u] & grown:
                        grown |= 1 << u
                pool.append(grown)
                covered |= grown
        pool = sorted(set(pool))
    while True:
        rows = [[1 if m >> v & 1 else 0 for v in range(n)] for m in pool]
        res = simplex_max(rows, [1] * len(pool), [1] * n)
        if complete:
            break
        best, mask, _ = max_weight_independent_set(g.adj, res.y, budget)
        if best > 1:
            pool.append(mask)
            continue
        break
    chi_f = res.objective
    primal = tuple(
        (res.duals[i], _mask_to_frozenset(pool[i]))
        for i in range(len(pool))
        if res.duals[i] > 0
    )
    dual = tuple(res.y)
    return chi_f, primal, dual


def check_weight_property(g, budget=DEFAULT_BUDGET):
    """Exact fractional chromatic number; passes iff chi_f <= 4.

    Property (2) quantifies over all nonnegative weight vectors; by LP
    duality it holds exactly when chi_f <= 4, so the certificate is a primal
    fractional coloring plus the worst-case weight vector.
    """
    _require_materialized(g)
    try:
        if _kneser_params(g.provenance) is not None:
            chi_f, primal, dual, method = _chi_f_transitive(g, "vertex_transitive", budget)
        else:
            autos = verify_vertex_transitive(g)
            if autos:
                chi_f, primal, dual, method = _chi_f_transitive(
                    g, "vertex_transitive", budget
                )
            else:
                chi_f, primal, dual = _chi_f_lp(g, budget)
                method = "lp"
                if not _verify_weight_certificate(g, chi_f, primal, dual, budget):
                    raise ArithmeticError("LP fractional-coloring certificate failed")
    except BudgetExhausted:
        return WeightCheck("indeterminate", None, None, None, "exhausted")
    status = "pass" if chi_f <= 4 else "fail"
    return WeightCheck(status, chi_f, primal, dual, method)


def check_cover_family(g, fam):
    """Verify membership, independence, and quarter coverage; first violation wins."""
    _require_materialized(g)
    n = g.vertex_count
    if len(fam.sets) != n:
        return CoverFamilyCheck("fail", fam, None, "family not indexed by all vertices")
    for x in range(n):
        if x not in fam.sets[x]:
            return CoverFamilyCheck("fail", fam, None, f"x not in H(x) for x={x}")
    for x in range(n):
        mask = 0
        for v in fam.sets[x]:
            mask |= 1 << v
        if not is_independent(g.adj, mask):
            return CoverFamilyCheck("fail", fam, None, f"H({x}) is not independent")
    coverage = [0] * n
    for x in range(n):
        for a in fam.sets[x]:
            coverage[a] += 1
    min_cov = min(coverage)
    for a in range(n):
        if 4 * coverage[a] < n:
            return CoverFamilyCheck(
                "fail", fam, min_cov, f"coverage {coverage[a]} < |G|/4 at vertex {a}"
            )
    return CoverFamilyCheck("pass", fam, min_cov, None)


def _capacitated_assignment(verts, m, caps):
    """Assign each set a representative element it contains, within caps.

    Kuhn-style augmenting paths over the bipartite sets/elements graph;
    deterministic because sets and elements are visited in index order.
    """
    rep = [-1] * len(verts)
    load = [0] * m
    assigned = [[] for _ in range(m)]

    def augment(i, visited):
        for e in verts[i]:
            if e in visited:
                continue
            visited.add(e)
            if load[e] < caps[e]:
                rep[i] = e
                load[e] += 1
                assigned[e].append(i)
                return True
            for j in list(assigned[e]):
                assigned[e].remove(j)
                load[e] -= 1
                rep[j] = -1
                if augment(j, visited):
                    rep[i] = e
                    load[e] += 1
                    assigned[e].append(i)
                    return True
                rep[j] = e
                load[e] += 1
                assigned[e].append(j)
        return False

    for i in range(len(verts)):
        if not augment(i, set()):
            raise AssertionError("balanced representative assignment infeasible")
    return rep, load


def star_balanced_family(g):
    """Kneser family H(x) = all k-sets through a balanced representative of x.

    Element loads are fixed in advance to differ by at most one (the first
    n mod m elements carry the extra unit) and realized by exact bipartite
    matching, so the family is deterministic and maximally balanced.
    """
    params = _kneser_params(g.provenance)
    if params is None:
        raise ValueError("star_balanced needs kneser provenance")
    m, k = params
    verts = kneser_vertices(m, k)
    base, extra = divmod(len(verts), m)
    caps = [base + (1 if e < extra else 0) for e in range(m)]
    reps, loads = _capacitated_assignment(verts, m, caps)
    sets = tuple(
        frozenset(i for i, s in enumerate(verts) if reps[x] in s)
        for x in range(len(verts))
    )
    return CoverFamily(sets), loads


def _randomized_family(g, seed, retries):
    rng = random.Random(seed)
    n = g.vertex_count
    best = None
    best_cov = -1
    for _ in range(retries):
        sets = []
        for x in range(n):
            grown = 1 << x
            order = list(range(n))
            rng.shuffle(order)
            for u in order:
                if not grown >> u & 1 and not g.adj[u] & grown:
                    grown |= 1 << u
            sets.append(_mask_to_frozenset(grown))
        fam = CoverFamily(tuple(sets))
        res = check_cover_family(g, fam)
        if res.passed:
            return fam
        if res.min_coverage is not None and res.min_coverage > best_cov:
            best_cov = res.min_coverage
            best = fam
    raise CoverFamilyError(
        f"randomized cover family failed after {retries} attempts",
        stats={"best_min_coverage": best_cov, "required": Fraction(n, 4)},
    )


def build_cover_family(g, strategy, seed=0, retries=32):
    """Build a family for the quarter-coverage property and verify it."""
    _require_materialized(g)
    if strategy == "caps":
        if g.provenance != "cap" or g.embedding is None:
            raise ValueError("caps strategy needs cap provenance")
        fam = cap_cover_family(g)
    elif strategy == "star_balanced":
        fam, _ = star_balanced_family(g)
    elif strategy == "randomized":
        fam = _randomized_family(g, seed, retries)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    res = check_cover_family(g, fam)
    if not res.passed:
        raise CoverFamilyError(
            f"{strategy} family fails verification: {res.violation}",
            stats={"min_coverage": res.min_coverage},
        )
    return fam


def default_family_strategy(g):
    if g.provenance == "cap" and g.embedding is not None:
        return "caps"
    if _kneser_params(g.provenance) is not None:
        return "star_balanced"
    return "randomized"


def certify(g, n_target, seed=0, budget=DEFAULT_BUDGET):
    """Bundle the three property checks into one certificate."""
    _require_materialized(g)
    part = check_partition_property(g, n_target, budget)
    weight = check_weight_property(g, budget)
    try:
        fam = build_cover_family(g, default_family_strategy(g), seed=seed)
        cover = check_cover_family(g, fam)
    except CoverFamilyError as exc:
        cover = CoverFamilyCheck("fail", None, exc.stats.get("best_min_coverage"), str(exc))
    return GraphCertificate(n_target, part, weight, cover)
