"""Graph certification tests.

Brute-force oracles (exhaustive coloring enumeration, exhaustive independent
set enumeration, direct counting) are written independently of the search
code and the expected values below are frozen from those oracles.
"""

import itertools
import math
import random
from fractions import Fraction

import pytest

from drlab.graphs import (
    CoverFamily,
    CoverFamilyError,
    build_cover_family,
    cap_cover_family,
    cap_measure_exceeds_quarter,
    certify,
    check_cover_family,
    check_partition_property,
    check_weight_property,
    complete_graph,
    cycle_graph,
    explicit_graph,
    generate_cap_graph,
    generate_kneser_graph,
    rational_half_inv_sqrt,
    select_cap_dimension,
    single_edge,
    star_balanced_family,
    _chi_f_lp,
)
from drlab.graphs import Graph, SymbolicGraph
from drlab.search import bits


# --- oracles ---------------------------------------------------------------


def brute_force_partitionable(g, n):
    """Exhaustively try all n-colorings."""
    for assignment in itertools.product(range(n), repeat=g.vertex_count):
        if all(assignment[u] != assignment[v] for u, v in g.edges):
            return True
    return False


def all_independent_sets(g):
    out = []
    for r in range(g.vertex_count + 1):
        for comb in itertools.combinations(range(g.vertex_count), r):
            if all(not g.has_edge(u, v) for u, v in itertools.combinations(comb, 2)):
                out.append(frozenset(comb))
    return out


def brute_max_weight(g, weights):
    best = Fraction(0)
    for s in all_independent_sets(g):
        w = sum((weights[v] for v in s), Fraction(0))
        best = max(best, w)
    return best


# --- kneser generation -----------------------------------------------------


def test_kneser_2_1_is_single_edge():
    g = generate_kneser_graph(2, 1)
    assert g.vertex_count == 2
    assert g.edges == ((0, 1),)


def test_kneser_5_2_is_petersen_sized():
    # oracle: count disjoint pairs of 2-subsets of a 5-set directly
    pairs = list(itertools.combinations(range(5), 2))
    disjoint = sum(
        1
        for a, b in itertools.combinations(pairs, 2)
        if not set(a) & set(b)
    )
    assert disjoint == 15
    g = generate_kneser_graph(5, 2)
    assert g.vertex_count == 10
    assert len(g.edges) == 15


def test_kneser_9_3_size():
    g = generate_kneser_graph(9, 3)
    assert g.vertex_count == math.comb(9, 3) == 84


def test_kneser_materialization_cap_symbolic():
    g = generate_kneser_graph(501, 167)
    assert isinstance(g, SymbolicGraph)
    assert g.size.exact() == math.comb(501, 167)


# --- partition property ----------------------------------------------------


def test_partition_c5_n2_pass():
    g = cycle_graph(5)
    assert not brute_force_partitionable(g, 2)
    res = check_partition_property(g, 2)
    assert res.status == "pass"
    assert res.digest


def test_partition_single_edge_n1_pass():
    res = check_partition_property(single_edge(), 1)
    assert res.status == "pass"


def test_partition_c4_n2_fail_with_partition():
    g = cycle_graph(4)
    assert brute_force_partitionable(g, 2)
    res = check_partition_property(g, 2)
    assert res.status == "fail"
    assert res.partition == ((0, 2), (1, 3))
    for part in res.partition:
        assert all(not g.has_edge(u, v) for u, v in itertools.combinations(part, 2))


def test_partition_kneser93_n4_pass():
    g = generate_kneser_graph(9, 3)
    res = check_partition_property(g, 4)
    assert res.status == "pass"


def test_partition_budget_indeterminate():
    g = generate_kneser_graph(9, 3)
    res = check_partition_property(g, 4, budget=10)
    assert res.status == "indeterminate"


# --- weight property (fractional chromatic number) ---------------------------


def test_chi_f_c5():
    res = check_weight_property(cycle_graph(5))
    assert res.chi_f == Fraction(5, 2)
    assert res.status == "pass"
    # cross-check against the LP over all independent sets
    chi_lp, _, _ = _chi_f_lp(cycle_graph(5), 10**6)
    assert chi_lp == Fraction(5, 2)


def test_chi_f_k5_fails():
    res = check_weight_property(complete_graph(5))
    assert res.chi_f == Fraction(5)
    assert res.status == "fail"
    # dual weight certificate: max w(H) = w(G)/chi_f
    g = complete_graph(5)
    assert brute_max_weight(g, list(res.dual)) * res.chi_f == sum(res.dual)


def test_chi_f_kneser93():
    g = generate_kneser_graph(9, 3)
    res = check_weight_property(g)
    assert res.chi_f == Fraction(3)
    assert res.status == "pass"
    assert res.method == "vertex_transitive"


def test_primal_certificate_feasible_c5():
    res = check_weight_property(cycle_graph(5))
    coverage = {v: Fraction(0) for v in range(5)}
    total = Fraction(0)
    for w, members in res.primal:
        total += w
        for v in members:
            coverage[v] += w
    assert total == res.chi_f
    assert all(c >= 1 for c in coverage.values())


def test_dual_certificate_exhaustive_small():
    # exhaustive check on graphs with <= 12 vertices
    for g in (cycle_graph(5), cycle_graph(7), complete_graph(4), single_edge()):
        res = check_weight_property(g)
        w = list(res.dual)
        wg = sum(w)
        assert brute_max_weight(g, w) * res.chi_f == wg


def test_weight_property_brute_force_agreement_small_graphs():
    # Sampled weight vectors: some independent set attains a quarter of the
    # total weight iff chi_f <= 4, exercised on all graphs with <= 8 vertices
    # from a seeded random family.
    rng = random.Random(99)
    for trial in range(25):
        n = rng.randrange(2, 9)
        edges = [
            (u, v)
            for u, v in itertools.combinations(range(n), 2)
            if rng.random() < 0.5
        ]
        g = explicit_graph(n, edges)
        res = check_weight_property(g)
        iss = all_independent_sets(g)
        for _ in range(10):
            w = [Fraction(rng.randrange(0, 20), rng.randrange(1, 7)) for _ in range(n)]
            if all(x == 0 for x in w):
                continue  # w = 0 satisfies the property vacuously; excluded
            total = sum(w)
            attained = any(4 * sum((w[v] for v in s), Fraction(0)) >= total for s in iss)
            if res.chi_f <= 4:
                assert attained
        if res.chi_f > 4:
            # the returned dual weights are the refuting vector
            w = list(res.dual)
            total = sum(w)
            assert all(4 * sum((w[v] for v in s), Fraction(0)) < total for s in iss)


# --- cover families ----------------------------------------------------------


def test_cover_family_c5_distance_two_passes():
    g = cycle_graph(5)
    fam = CoverFamily(tuple(frozenset({x, (x + 2) % 5}) for x in range(5)))
    res = check_cover_family(g, fam)
    assert res.passed
    assert res.min_coverage == 2


def test_cover_family_single_edge_selfset_passes():
    g = single_edge()
    fam = CoverFamily((frozenset({0}), frozenset({1})))
    res = check_cover_family(g, fam)
    assert res.passed
    assert res.min_coverage == 1


def test_cover_family_c5_singletons_fail():
    g = cycle_graph(5)
    fam = CoverFamily(tuple(frozenset({x}) for x in range(5)))
    res = check_cover_family(g, fam)
    assert not res.passed
    assert "coverage" in res.violation


def test_star_balanced_family_kneser93():
    g = generate_kneser_graph(9, 3)
    fam, loads = star_balanced_family(g)
    assert sum(loads) == 84
    assert sorted(loads, reverse=True) == [10, 10, 10, 9, 9, 9, 9, 9, 9]
    res = check_cover_family(g, fam)
    assert res.passed
    assert res.min_coverage >= 27 >= 21


def test_single_edge_families():
    g = generate_kneser_graph(2, 1)
    fam, _ = star_balanced_family(g)
    assert fam.sets == (frozenset({0}), frozenset({1}))
    g2 = single_edge()
    fam2 = build_cover_family(g2, "randomized", seed=1)
    assert fam2.sets == (frozenset({0}), frozenset({1}))


def test_randomized_family_c5():
    fam = build_cover_family(cycle_graph(5), "randomized", seed=3)
    res = check_cover_family(cycle_graph(5), fam)
    assert res.passed
    assert res.min_coverage == 2


# --- cap graphs ---------------------------------------------------------------


def test_cap_adjacency_rule_dimension_one():
    # eps = 1/2 at dimension 1; (1,0) vs (-1,0) has distance 2 >= 2 - 1/4,
    # (1,0) vs (0,1) has distance sqrt(2) < 7/4.
    eps, err = rational_half_inv_sqrt(1)
    assert eps == Fraction(1, 2)
    thr_sq = (2 - eps * eps) ** 2
    d1 = sum((a - b) ** 2 for a, b in zip((1, 0), (-1, 0)))
    d2 = sum((a - b) ** 2 for a, b in zip((1, 0), (0, 1)))
    assert Fraction(d1) > thr_sq
    assert Fraction(d2) < thr_sq


def test_cap_measure_certification():
    # d=1: measure 1/3 > 1/4 (closed form); even d exact; odd d certified.
    for d in (1, 2, 3, 4, 5, 8):
        eps, _ = rational_half_inv_sqrt(d)
        assert cap_measure_exceeds_quarter(d, eps)
    # a fat cap threshold near 1 has tiny measure
    assert not cap_measure_exceeds_quarter(2, Fraction(9, 10))
    assert select_cap_dimension(1) == 1
    assert select_cap_dimension(3) == 3


def test_generate_cap_graph_caps_are_independent():
    g = generate_cap_graph(target_n=1, point_count=14, seed=11)
    assert g.provenance == "cap"
    emb = g.embedding
    assert emb is not None
    q = [tuple(Fraction(c) for c in p) for p in emb.points]
    # derived oracle: y, z in C(x) implies dist(y,z) <= 2 sqrt(1-eps^2) < 2-eps^2
    thr_sq = (2 - emb.epsilon**2) ** 2
    for x in range(g.vertex_count):
        cap = [
            y
            for y in range(g.vertex_count)
            if sum(a * b for a, b in zip(q[x], q[y])) >= emb.epsilon
        ]
        for y, z in itertools.combinations(cap, 2):
            dist_sq = sum((a - b) ** 2 for a, b in zip(q[y], q[z]))
            assert dist_sq < thr_sq
            assert not g.has_edge(y, z)


def test_cap_family_matches_embedding():
    g = generate_cap_graph(target_n=1, point_count=10, seed=5)
    fam = cap_cover_family(g)
    for x in range(g.vertex_count):
        assert x in fam.sets[x]


# --- certify -------------------------------------------------------------------


def test_certify_single_edge_n1():
    cert = certify(single_edge(), 1)
    assert cert.passing
    assert cert.partition.status == "pass"
    assert cert.weight.chi_f == Fraction(2)


def test_certify_kneser93_n4():
    cert = certify(generate_kneser_graph(9, 3), 4)
    assert cert.passing
    assert cert.weight.chi_f == Fraction(3)
    assert cert.cover.min_coverage >= 21


def test_certify_c5_n3_fails_with_partition():
    cert = certify(cycle_graph(5), 3)
    assert not cert.passing
    assert cert.partition.status == "fail"
    parts = cert.partition.partition
    assert len(parts) <= 3
    assert sorted(v for p in parts for v in p) == list(range(5))


def test_certify_deterministic():
    a = certify(cycle_graph(5), 2, seed=7)
    b = certify(cycle_graph(5), 2, seed=7)
    assert a == b


def test_size_bound_for_passing_certificates():
    # |V| >= (4/3) * n_target for every passing certificate
    cases = [(single_edge(), 1), (generate_kneser_graph(9, 3), 4), (cycle_graph(5), 2)]
    for g, n in cases:
        cert = certify(g, n)
        if cert.passing:
            assert 3 * g.vertex_count >= 4 * n
