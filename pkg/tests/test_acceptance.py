"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also repeated in the terminal summary.
"""

import contextlib
import itertools
import random
import time
from fractions import Fraction

from conftest import ACCEPTANCE_LINES, FAMILIES, random_descriptor
from dcsparse.dcs import DcsParams, build_dcs, check_dcs, choose_params
from dcsparse.decomposition import (brute_force_decompose, brute_force_densest, decompose,
                                    densest_subset, modification_violations)
from dcsparse.harness.generate import (bipartite_instance, laminar17, gen_instance,
                                       path3_instance)
from dcsparse.instance import Instance
from dcsparse.intersection import (brute_force_dual, brute_force_max_common, dual_certificate,
                                   greedy_maximal, is_common_independent, max_common_independent)
from dcsparse.matroids import MatroidView
from dcsparse.protocols import StreamConfig, one_way_run, ratio, stream_order, stream_run

QUARTER = Fraction(1, 4)
TOY = DcsParams(12, 5)


@contextlib.contextmanager
def criterion(number: int, title: str, limit: float | None = None):
    """Record a pass/fail line for the criterion; the body fills ``detail``."""
    detail: dict = {}
    start = time.perf_counter()
    ok = False
    try:
        yield detail
        ok = True
    finally:
        seconds = time.perf_counter() - start
        if limit is not None and seconds >= limit:
            ok = False
            detail["over_time_limit"] = f"{limit}s"
        facts = " ".join(f"{k}={v}" for k, v in detail.items())
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {title} ({seconds:.1f}s) {facts}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert ok, line


def _subset(rng, ground, keep=0.6):
    return frozenset(e for e in sorted(ground) if rng.random() < keep)


def test_criterion_1_laminar_fixture():
    with criterion(1, "laminar17 decomposition", limit=1.0) as detail:
        d = decompose(MatroidView(laminar17()))
        got = [(sorted(L.elements), L.density) for L in d.layers]
        detail["layers"] = ";".join(f"{len(e)}@{rho}" for e, rho in got)
        assert got == [(list(range(10)), 5), (list(range(10, 14)), 4),
                       (list(range(14, 17)), 3), ([], 0)]


def test_criterion_2_rank_axioms():
    rng = random.Random(2)
    with criterion(2, "rank axioms", limit=10.0) as detail:
        for family in FAMILIES:
            checks = 0
            while checks < 1000:
                n = rng.randint(4, 20)
                m = MatroidView(random_descriptor(rng, n, family))
                for _ in range(50):
                    X, Y = _subset(rng, m.ground, 0.5), _subset(rng, m.ground, 0.5)
                    rx, ry = m.rank(X), m.rank(Y)
                    assert 0 <= rx <= len(X)
                    assert m.rank(X | Y) >= max(rx, ry), (family, X, Y)
                    assert rx + ry >= m.rank(X | Y) + m.rank(X & Y), (family, X, Y)
                    for e in m.ground - X:
                        assert m.rank(X | {e}) - rx in (0, 1), (family, X, e)
                    checks += 1
            detail[family] = checks


def _random_instance(rng, n):
    return Instance(n, random_descriptor(rng, n), random_descriptor(rng, n))


def test_criterion_3_oracle_equivalence():
    rng = random.Random(3)
    with criterion(3, "oracle equivalence", limit=300.0) as detail:
        count = 0
        for _ in range(200):
            n = rng.randint(1, 12)
            inst = _random_instance(rng, n)
            m1, m2 = inst.views()
            for m in (m1, m2):
                view = m.restrict(_subset(rng, m.ground))
                assert densest_subset(view) == brute_force_densest(view)
                assert decompose(view, inst.k).layers == brute_force_decompose(view, inst.k).layers
            ground = _subset(rng, m1.ground, 0.85)
            assert (max_common_independent(m1, m2, ground, canonical=True)
                    == brute_force_max_common(m1, m2, ground))
            got, want = dual_certificate(m1, m2, ground), brute_force_dual(m1, m2, ground)
            assert (got.c1, got.c2, got.value) == (want.c1, want.c2, want.value)
            count += 1
        detail["instances"] = count


def test_criterion_4_modification_lemmas():
    rng = random.Random(4)
    with criterion(4, "insertion and deletion properties", limit=300.0) as detail:
        inserted = deleted = 0
        while inserted < 500 or deleted < 500:
            n = rng.randint(2, 12)
            m = MatroidView(random_descriptor(rng, n))
            v_prime = _subset(rng, m.ground, rng.random())
            insert = inserted < 500 and (deleted >= 500 or rng.random() < 0.5)
            pool = sorted(m.ground - v_prime) if insert else sorted(v_prime)
            if not pool:
                continue
            u = rng.choice(pool)
            bad = modification_violations(m, v_prime, u)
            assert not bad, (m.descriptor.to_dict(), sorted(v_prime), u, bad)
            if insert:
                inserted += 1
            else:
                deleted += 1
        detail.update(insertions=inserted, deletions=deleted)


def _dcs_instances(count):
    rng = random.Random(5)
    seed = 0
    out = []
    while len(out) < count:
        seed += 1
        left = rng.randint(3, 8)
        size = {"left": left, "right": rng.randint(3, 8), "edges": rng.randint(150, 400)}
        if rng.random() < 0.3:
            size["hub"] = 0.3
        inst = gen_instance("partition-bipartite", size, seed)
        m1, m2 = inst.views()
        mu = len(max_common_independent(m1, m2))
        if 3 <= mu <= 8:
            out.append((inst, m1, m2, mu))
    return out


def test_criterion_5_dcs_construction():
    with criterion(5, "DCS construction") as detail:
        instances = _dcs_instances(100)
        for eps in (Fraction(1), Fraction(1, 2), QUARTER):
            p = choose_params(eps)
            worst = Fraction(0)
            for inst, m1, m2, mu in instances:
                state = build_dcs(m1, m2, p, mu=mu)
                assert check_dcs(state.v_prime, m1, m2, p).ok
                assert len(state.v_prime) <= p.beta * mu
                assert state.step_count <= 2 * p.beta ** 2 * mu
                trace = state.phi_trace
                assert all(b - a >= 1 for a, b in zip(trace, trace[1:]))
                sparse = len(max_common_independent(m1, m2, state.v_prime))
                assert mu <= (Fraction(3, 2) + eps) * sparse
                worst = max(worst, Fraction(mu, sparse))
            detail[f"worst_ratio@eps={eps}"] = worst
        detail["instances"] = len(instances)


def _six_cycle():
    return bipartite_instance([(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)], {})


def test_criterion_6_one_way_communication():
    p = choose_params(QUARTER)
    bound = Fraction(7, 4)
    with criterion(6, "one-way communication", limit=600.0) as detail:
        exhaustive = [_six_cycle(),
                      gen_instance("partition-bipartite", {"left": 3, "edges": 12}, 1),
                      gen_instance("laminar", {"n": 12, "max_cap": 2}, 1),
                      gen_instance("graphic", {"vertices": 5, "edges": 11}, 1),
                      gen_instance("partition-bipartite", {"left": 2, "edges": 16}, 6)]
        runs, worst = 0, Fraction(0)
        for inst in exhaustive:
            m1, m2 = inst.views()
            mu = len(max_common_independent(m1, m2))
            for bits in itertools.product((0, 1), repeat=inst.n):
                v_a = frozenset(e for e in range(inst.n) if bits[e])
                t = one_way_run(m1, m2, v_a, params=p, mu=mu)
                assert t.ratio <= bound and t.message_size <= p.beta * mu, (inst.metadata, v_a)
                worst = max(worst, t.ratio)
                runs += 1
        detail["exhaustive_runs"] = runs
        rng = random.Random(6)
        # low rank and large Alice sides, so density sums actually reach beta_minus
        sampled = [gen_instance("partition-bipartite", {"left": 1, "right": 3, "edges": 60}, 0),
                   gen_instance("partition-bipartite", {"left": 2, "edges": 60}, 0),
                   gen_instance("partition-bipartite", {"left": 2, "edges": 60}, 1),
                   gen_instance("partition-bipartite", {"left": 3, "edges": 60, "hub": 0.5}, 9),
                   gen_instance("laminar", {"n": 60, "max_cap": 1, "blocks": 3}, 4)]
        runs = sparsified = 0
        for inst in sampled:
            m1, m2 = inst.views()
            mu = len(max_common_independent(m1, m2))
            for _ in range(25):
                v_a = _subset(rng, range(inst.n), rng.uniform(0.5, 1.0))
                t = one_way_run(m1, m2, v_a, params=p, mu=mu)
                assert t.ratio <= bound and t.message_size <= p.beta * mu, (inst.metadata, v_a)
                worst = max(worst, t.ratio)
                sparsified += t.message_size < len(v_a)
                runs += 1
        detail.update(random_runs=runs, message_smaller_than_alice=sparsified, worst_ratio=worst)


STREAM_TOY_INSTANCES = [
    ("partition-bipartite", {"left": 4, "pendants": 1, "edges": 200}, 1),
    ("partition-bipartite", {"left": 2, "pendants": 1, "edges": 1000}, 1),
    ("partition-bipartite", {"left": 4, "pendants": 1, "edges": 2000}, 1),
    ("laminar", {"n": 2000, "max_cap": 2, "depth": 2, "blocks": 5}, 2),
    ("laminar", {"n": 2000, "max_cap": 1, "depth": 2, "blocks": 5}, 2),
]


def test_criterion_7_streaming_toy_parameters():
    with criterion(7, "streaming with beta=12 beta_minus=5", limit=1800.0) as detail:
        for index, (family, size, seed) in enumerate(STREAM_TOY_INSTANCES):
            inst = gen_instance(family, size, seed)
            m1, m2 = inst.views()
            mu = len(max_common_independent(m1, m2))
            ours, greedy, fallbacks = [], [], 0
            for s in range(100):
                r = stream_run(m1, m2, StreamConfig(Fraction(1), TOY, s, mu=mu, verify_density=True))
                assert r.bounded_density_violations == 0, (family, size, s)
                assert is_common_independent(m1, m2, r.output)
                ours.append(r.ratio)
                fallbacks += r.fallback_triggered
                greedy.append(ratio(mu, len(greedy_maximal(m1, m2, stream_order(inst.n, s)))))
            mean, base = sum(ours) / 100, sum(greedy) / 100
            detail[f"instance{index}"] = (f"{family}/n{inst.n}:mean {float(mean):.4f} "
                                          f"greedy {float(base):.4f} fallback {fallbacks}")
            assert mean < 2 and mean < base, (family, size, mean, base)


def test_criterion_8_streaming_certified_parameters():
    with criterion(8, "streaming with certified parameters") as detail:
        small = [gen_instance("partition-bipartite", {"left": 4, "edges": 40}, 0),
                 gen_instance("partition-bipartite", {"left": 8, "pendants": 1, "edges": 500}, 3),
                 gen_instance("laminar", {"n": 300}, 1),
                 gen_instance("graphic", {"vertices": 8, "edges": 60}, 2)]
        fallback_runs = 0
        for inst in small:
            m1, m2 = inst.views()
            mu = len(max_common_independent(m1, m2))
            for s in range(10):
                r = stream_run(m1, m2, StreamConfig.certified(QUARTER, s, mu=mu))
                assert r.fallback_triggered and r.ratio == 1, (inst.metadata, s)
                fallback_runs += 1
        detail["fallback_runs"] = fallback_runs
        # large enough that the first interval length is positive
        inst = gen_instance("partition-bipartite", {"left": 2, "edges": 60000}, 0)
        m1, m2 = inst.views()
        consumed = []
        for s in range(3):
            r = stream_run(m1, m2, StreamConfig.certified(QUARTER, s, verify_density=True))
            assert not r.fallback_triggered
            assert r.phase1_elements_consumed <= QUARTER * inst.n
            assert r.bounded_density_violations == 0
            consumed.append(r.phase1_elements_consumed)
        detail["large_n"] = inst.n
        detail["phase1_consumed"] = ",".join(map(str, consumed))
        detail["limit"] = int(QUARTER * inst.n)


def test_criterion_9_greedy_baseline():
    with criterion(9, "greedy baseline") as detail:
        m1, m2 = path3_instance().views()
        g = greedy_maximal(m1, m2, [1, 0, 2])
        assert ratio(len(max_common_independent(m1, m2)), len(g)) == 2
        rng = random.Random(9)
        runs, worst = 0, Fraction(0)
        for _ in range(500):
            n = rng.randint(1, 30)
            inst = _random_instance(rng, n)
            m1, m2 = inst.views()
            mu = len(max_common_independent(m1, m2))
            order = list(range(n))
            rng.shuffle(order)
            r = ratio(mu, len(greedy_maximal(m1, m2, order)))
            assert r <= 2
            worst = max(worst, r)
            runs += 1
        detail.update(path3_ratio=2, random_runs=runs, worst_random=worst)
