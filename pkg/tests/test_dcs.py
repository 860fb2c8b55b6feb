import logging
import random
from fractions import Fraction

import pytest

from dcsparse.dcs import (DcsParams, InvariantError, build_dcs, check_dcs, choose_params,
                          potential)
from dcsparse.harness.generate import laminar17_instance, gen_instance
from dcsparse.intersection import max_common_independent
from dcsparse.matroids import DomainError, MatroidView, Partition, Uniform


@pytest.mark.parametrize("eps,expected", [(1, (15, 22)), (Fraction(1, 2), (26, 33)),
                                          (Fraction(1, 4), (48, 55))])
def test_choose_params(eps, expected):
    p = choose_params(eps)
    assert (p.beta_minus, p.beta) == expected
    assert p.certified
    assert p.beta >= p.beta_minus + 7


def test_choose_params_rejects_nonpositive_epsilon():
    with pytest.raises(DomainError):
        choose_params(0)
    with pytest.raises(DomainError):
        choose_params(Fraction(-1, 3))


def test_params_need_a_gap_of_seven():
    with pytest.raises(DomainError):
        DcsParams(10, 5)


def test_nonpositive_beta_minus_warns(caplog):
    with caplog.at_level(logging.WARNING):
        DcsParams(7, 0)
    assert "vacuous" in caplog.text


def test_empty_subset_violates_lower_condition_everywhere():
    m1, m2 = laminar17_instance().views()
    v = check_dcs(frozenset(), m1, m2, DcsParams(9, 2))
    assert not v.ok
    assert [e for e, _ in v.under] == list(range(17))


def test_empty_ground():
    m1, m2 = laminar17_instance().views()
    state = build_dcs(m1, m2, choose_params(1), ground=frozenset())
    assert state.v_prime == frozenset() and state.step_count == 0 and state.phi == 0


def test_laminar17_against_uniform():
    m1, m2 = laminar17_instance().views()
    p = choose_params(Fraction(1, 4))
    mu = len(max_common_independent(m1, m2))
    state = build_dcs(m1, m2, p, mu=mu, debug=True)
    assert check_dcs(state.v_prime, m1, m2, p).ok
    assert len(state.v_prime) <= p.beta * mu


def _edcs_violations(edges, H, beta, beta_minus):
    def deg(side, x):
        return sum(1 for j in H if edges[j][side] == x)

    out = []
    for i, (u, w) in enumerate(edges):
        s = deg(0, u) + deg(1, w)
        if (i in H and s > beta) or (i not in H and s < beta_minus):
            out.append(i)
    return out


def _raw_bipartite(edges):
    left = sorted({u for u, _ in edges})
    right = sorted({w for _, w in edges})
    m1 = MatroidView(Partition([[i for i, e in enumerate(edges) if e[0] == u] for u in left],
                               [1] * len(left)))
    m2 = MatroidView(Partition([[i for i, e in enumerate(edges) if e[1] == w] for w in right],
                               [1] * len(right)))
    return m1, m2


def test_four_cycle_gives_an_edcs():
    edges = [(0, 0), (0, 1), (1, 1), (1, 0)]
    m1, m2 = _raw_bipartite(edges)
    p = DcsParams(9, 2)
    state = build_dcs(m1, m2, p)
    assert check_dcs(state.v_prime, m1, m2, p).ok
    assert _edcs_violations(edges, state.v_prime, 9, 2) == []


def test_check_dcs_agrees_with_degree_checker():
    rng = random.Random(3)
    p = DcsParams(9, 2)
    for _ in range(40):
        edges = [(rng.randrange(3), rng.randrange(3)) for _ in range(rng.randint(3, 16))]
        m1, m2 = _raw_bipartite(edges)
        H = frozenset(i for i in range(len(edges)) if rng.random() < 0.5)
        v = check_dcs(H, m1, m2, p)
        flagged = sorted([e for e, _ in v.over] + [e for e, _ in v.under])
        assert flagged == _edcs_violations(edges, H, 9, 2)


def test_potential_examples():
    m = MatroidView(Uniform(3, 3))
    p = DcsParams(12, 5)
    single = build_dcs(m, m, p, ground=frozenset({0}))
    assert single.v_prime == {0}
    assert potential(single) == (2 * 12 - 7) - 2
    empty = build_dcs(m, m, p, ground=frozenset())
    assert potential(empty) == 0


def test_tracked_potential_matches_recomputation():
    inst = gen_instance("partition-bipartite", {"left": 3, "edges": 120}, 4)
    m1, m2 = inst.views()
    state = build_dcs(m1, m2, DcsParams(12, 5), debug=True)
    assert state.step_count >= len(state.v_prime) > 0
    assert state.phi == potential(state)
    assert state.min_phi_gain >= 1


def test_construction_bounds_on_dense_instances():
    for seed in range(4):
        inst = gen_instance("partition-bipartite", {"left": 4, "edges": 200}, seed)
        m1, m2 = inst.views()
        mu = len(max_common_independent(m1, m2))
        for eps in (1, Fraction(1, 4)):
            p = choose_params(eps)
            state = build_dcs(m1, m2, p, mu=mu)
            assert check_dcs(state.v_prime, m1, m2, p).ok
            assert len(state.v_prime) <= p.beta * mu
            assert state.step_count <= 2 * p.beta ** 2 * mu
            assert state.phi <= (2 * p.beta - 7) * p.beta * mu
            sparse = len(max_common_independent(m1, m2, state.v_prime))
            assert mu <= (Fraction(3, 2) + p.epsilon) * sparse


def test_invariant_error_type():
    assert issubclass(InvariantError, RuntimeError)
