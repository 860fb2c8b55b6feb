import random

import networkx as nx
import pytest

from conftest import random_descriptor
from dcsparse.harness.generate import laminar17_instance, gen_instance, path3_instance
from dcsparse.intersection import (CertificateError, brute_force_dual, brute_force_max_common,
                                   dual_certificate, greedy_maximal, is_common_independent,
                                   max_common_independent)
from dcsparse.matroids import MatroidView, Partition


def test_empty_ground():
    m = MatroidView(Partition([[0, 1]], [1]))
    assert max_common_independent(m, m, frozenset()) == frozenset()
    cert = dual_certificate(m, m, frozenset())
    assert (cert.c1, cert.c2, cert.value) == (frozenset(), frozenset(), 0)
    assert greedy_maximal(m, m, []) == frozenset()


def test_laminar17_against_uniform():
    m1, m2 = laminar17_instance().views()
    S = max_common_independent(m1, m2)
    assert len(S) == 4 == len(brute_force_max_common(m1, m2))
    assert is_common_independent(m1, m2, S)


def test_random_pairs_match_enumeration():
    rng = random.Random(17)
    for _ in range(120):
        n = rng.randint(1, 10)
        m1 = MatroidView(random_descriptor(rng, n))
        m2 = MatroidView(random_descriptor(rng, n))
        ground = frozenset(e for e in range(n) if rng.random() < 0.8)
        want = brute_force_max_common(m1, m2, ground)
        got = max_common_independent(m1, m2, ground)
        assert len(got) == len(want)
        assert is_common_independent(m1, m2, got)
        assert max_common_independent(m1, m2, ground, canonical=True) == want
        cert = dual_certificate(m1, m2, ground)
        oracle = brute_force_dual(m1, m2, ground)
        assert cert.value == oracle.value == len(got)
        assert cert.c1 == oracle.c1
        assert cert.c1 | cert.c2 == ground and not cert.c1 & cert.c2
        assert m1.rank(cert.c1) + m2.rank(cert.c2) == len(got)


def test_identical_partition_matroids():
    m = MatroidView(Partition([[0, 1, 2], [3, 4]], [2, 1]))
    assert len(max_common_independent(m, m)) == 3
    cert = dual_certificate(m, m)
    assert cert.value == 3
    assert m.rank(frozenset(range(5))) + m.rank(frozenset()) == 3


def test_greedy_worst_case_on_three_edge_path():
    m1, m2 = path3_instance().views()
    assert len(max_common_independent(m1, m2)) == 2
    assert greedy_maximal(m1, m2, [1, 0, 2]) == frozenset({1})


def test_greedy_is_maximal_and_half_optimal():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 12)
        m1 = MatroidView(random_descriptor(rng, n))
        m2 = MatroidView(random_descriptor(rng, n))
        order = list(range(n))
        rng.shuffle(order)
        G = greedy_maximal(m1, m2, order)
        mu = len(max_common_independent(m1, m2))
        assert 2 * len(G) >= mu
        assert all(not is_common_independent(m1, m2, G | {e}) for e in set(range(n)) - G)


@pytest.mark.parametrize("seed", range(5))
def test_regular_bipartite_matches_hopcroft_karp(seed):
    inst = gen_instance("partition-bipartite", {"left": 7, "degree": 3}, seed)
    edges = inst.metadata["edges"]
    G = nx.Graph()
    G.add_nodes_from((("a", u) for u in range(7)))
    G.add_edges_from((("a", u), ("b", w)) for u, w in edges)
    matching = nx.bipartite.hopcroft_karp_matching(G, top_nodes=[("a", u) for u in range(7)])
    m1, m2 = inst.views()
    assert len(max_common_independent(m1, m2)) == len(matching) // 2


def test_oracles_are_gated():
    m = MatroidView(Partition([list(range(19))], [1]))
    with pytest.raises(ValueError, match="gated"):
        brute_force_max_common(m, m)
    with pytest.raises(ValueError, match="gated"):
        brute_force_dual(m, m)


def test_certificate_error_is_a_runtime_error():
    assert issubclass(CertificateError, RuntimeError)
