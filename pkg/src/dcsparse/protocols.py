"""One-way communication and random-order streaming built on DCS.

In the one-way protocol Alice sends a DCS of her part and Bob solves the
intersection exactly on the message plus his own elements.  The streaming
algorithm keeps a bounded-density subset during an early phase, then
collects the elements that are still underfull, and finally solves exactly on
what it stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .dcs import DcsParams, build_dcs, choose_params
from .decomposition import Decomposer, decompose
from .intersection import is_common_independent, max_common_independent
from .matroids import MatroidView

THREE_HALVES = Fraction(3, 2)


def ratio(mu: int, size: int):
    """``mu / size`` as a fraction; ``0 / 0`` counts as 1 and ``mu / 0`` as inf."""
    if size == 0:
        return Fraction(1) if mu == 0 else math.inf
    return Fraction(mu, size)


def format_ratio(r) -> str:
    return "inf" if not isinstance(r, Fraction) else str(r)


# ---------------------------------------------------------------------------
# one-way communication
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommunicationTranscript:
    v_a: frozenset
    v_b: frozenset
    message: frozenset
    output: frozenset
    params: DcsParams
    mu: Optional[int] = None

    @property
    def message_size(self) -> int:
        return len(self.message)

    @property
    def ratio(self) -> Optional[Fraction]:
        return None if self.mu is None else ratio(self.mu, len(self.output))

    def summary(self) -> str:
        parts = [f"|V_A|={len(self.v_a)}", f"|V_B|={len(self.v_b)}",
                 f"message={self.message_size}", f"output={len(self.output)}"]
        if self.mu is not None:
            parts += [f"mu={self.mu}", f"ratio={format_ratio(self.ratio)}"]
        return " ".join(parts)


def one_way_run(m1: MatroidView, m2: MatroidView, v_a: Iterable[int], epsilon=None,
                params: Optional[DcsParams] = None, ground: Optional[Iterable[int]] = None,
                mu: Optional[int] = None, compute_mu: bool = True) -> CommunicationTranscript:
    """Alice holds ``v_a``, Bob holds the rest of ``ground``."""
    if params is None:
        params = choose_params(epsilon)
    ground = m1.ground & m2.ground if ground is None else frozenset(ground)
    v_a = frozenset(v_a)
    v_b = ground - v_a
    message = build_dcs(m1, m2, params, ground=v_a).v_prime
    output = max_common_independent(m1, m2, message | v_b)
    if mu is None and compute_mu:
        mu = len(max_common_independent(m1, m2, ground))
    return CommunicationTranscript(v_a, v_b, message, output, params, mu)


# ---------------------------------------------------------------------------
# random-order streaming
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StreamConfig:
    epsilon: Fraction
    params: DcsParams
    seed: int = 0
    order: Optional[Sequence[int]] = None
    enforce_cap: bool = False
    # optional fixed optimum whose survival in the late stream is reported
    reference_optimum: Optional[frozenset] = None
    mu: Optional[int] = None
    # recheck bounded density from fresh decompositions after every change
    verify_density: bool = False

    @classmethod
    def certified(cls, epsilon, seed: int = 0, **kw) -> "StreamConfig":
        eps = Fraction(epsilon)
        return cls(eps, choose_params(eps), seed, **kw)


@dataclass
class StreamReport:
    seed: int
    n: int
    output: frozenset
    mu_exact: int
    stored_peak: int
    underfull_collected: int
    phase1_elements_consumed: int
    fallback_triggered: bool
    stop_guess: Optional[int]
    intervals: int
    v_prime: frozenset
    x: frozenset
    insertions: int = 0
    deletions: int = 0
    cap: Optional[int] = None
    cap_hit: bool = False
    discarded: int = 0
    max_member_sum: Fraction = Fraction(0)
    bounded_density_violations: int = 0
    late_opt_fraction: Optional[Fraction] = None
    decomposition_misses: int = 0
    decomposition_seconds: float = 0.0
    alphas: list = field(default_factory=list)

    @property
    def output_size(self) -> int:
        return len(self.output)

    @property
    def ratio(self) -> Fraction:
        return ratio(self.mu_exact, len(self.output))

    def line(self) -> str:
        return (f"seed={self.seed} ratio={format_ratio(self.ratio)} output={self.output_size} "
                f"mu={self.mu_exact} peak={self.stored_peak} fallback={int(self.fallback_triggered)}")


def guess_count(k: int) -> int:
    """Rounded ``log2 k`` used in the interval lengths."""
    return math.ceil(math.log2(max(k, 2)))


def interval_lengths(n: int, k: int, epsilon: Fraction, beta: int) -> list[int]:
    L = guess_count(k)
    return [math.floor(epsilon * n / (L * (2 ** (i + 2) * beta * beta + 1))) for i in range(L + 1)]


def stream_order(n: int, seed: int) -> list[int]:
    return [int(e) for e in np.random.default_rng(seed).permutation(n)]


def _fresh_max_member_sum(m1: MatroidView, m2: MatroidView, v_prime: frozenset) -> Fraction:
    """Largest density sum over members, from decompositions built without any cache.

    A member's associated density is simply its layer's density.
    """
    d1 = decompose(m1.restrict(v_prime), m1.full_rank())
    d2 = decompose(m2.restrict(v_prime), m2.full_rank())
    i1, i2 = d1.layer_index(), d2.layer_index()
    return max(d1.layers[i1[v]].density + d2.layers[i2[v]].density for v in v_prime)


def stream_run(m1: MatroidView, m2: MatroidView, cfg: StreamConfig) -> StreamReport:
    """Run the two-phase streaming algorithm over one ordering of the ground set."""
    ground = m1.ground & m2.ground
    n = len(ground)
    if cfg.order is not None:
        order = list(cfg.order)
        if sorted(order) != sorted(ground):
            raise ValueError("explicit order must be a permutation of the ground set")
    else:
        elems = sorted(ground)
        order = [elems[i] for i in stream_order(n, cfg.seed)]
    p = cfg.params
    beta, beta_minus = p.beta, p.beta_minus
    k = max(m1.full_rank(), m2.full_rank())
    alphas = interval_lengths(n, k, cfg.epsilon, beta)
    dec1, dec2 = Decomposer(m1), Decomposer(m2)

    def sums_over(v, elements):
        l1, l2 = dec1.lookup(v), dec2.lookup(v)
        return {e: l1(e) + l2(e) for e in elements}

    def sum_of(v, e):
        return dec1.lookup(v)(e) + dec2.lookup(v)(e)

    v_prime: frozenset = frozenset()
    pos = 0
    peak = 0
    intervals = 0
    insertions = deletions = 0
    max_member = Fraction(0)
    violations = 0
    stopped = False
    fallback = False
    stop_guess = None

    for i, alpha in enumerate(alphas):
        if alpha == 0:
            fallback = True
            break
        for _ in range(2 ** (i + 2) * beta * beta + 1):
            found = False
            for _ in range(alpha):
                if pos >= n:
                    break
                v = order[pos]
                pos += 1
                peak = max(peak, len(v_prime) + 1)
                if sum_of(v_prime, v) < beta_minus:
                    v_prime = v_prime | {v}
                    insertions += 1
                    found = True
                    while True:
                        sums = sums_over(v_prime, sorted(v_prime))
                        over = next((e for e, s in sums.items() if s > beta), None)
                        if over is None:
                            break
                        v_prime = v_prime - {over}
                        deletions += 1
                    if cfg.verify_density and v_prime:
                        top = _fresh_max_member_sum(m1, m2, v_prime)
                        max_member = max(max_member, top)
                        violations += top > beta
                    peak = max(peak, len(v_prime))
            intervals += 1
            if not found:
                stopped = True
                break
            if pos >= n:
                break
        if stopped or pos >= n:
            stop_guess = i
            break

    consumed = pos
    remaining = order[pos:]
    cap = None
    cap_hit = False
    discarded = 0
    if fallback:
        x = frozenset(remaining)
        peak = max(peak, len(v_prime) + len(x))
    else:
        if cfg.enforce_cap and stop_guess is not None:
            # underfull budget for the guess where the early phase stopped
            a = alphas[stop_guess]
            cap = len(v_prime) + math.ceil(4 * math.log(max(n, 2)) * n / a)
        lookup1, lookup2 = dec1.lookup(v_prime), dec2.lookup(v_prime)
        collected = []
        for idx, v in enumerate(remaining):
            if lookup1(v) + lookup2(v) < beta_minus:
                if cap is not None and len(v_prime) + len(collected) >= cap:
                    cap_hit = True
                    discarded = len(remaining) - idx
                    break
                collected.append(v)
                peak = max(peak, len(v_prime) + len(collected))
        x = frozenset(collected)

    output = max_common_independent(m1, m2, v_prime | x)
    if not is_common_independent(m1, m2, output):
        raise RuntimeError("stream output is not commonly independent")
    mu = cfg.mu if cfg.mu is not None else len(max_common_independent(m1, m2, ground))
    late_fraction = None
    if cfg.reference_optimum:
        late = frozenset(remaining)
        late_fraction = Fraction(len(cfg.reference_optimum & late), len(cfg.reference_optimum))
    return StreamReport(
        seed=cfg.seed, n=n, output=output, mu_exact=mu, stored_peak=peak,
        underfull_collected=len(x) if not fallback else 0,
        phase1_elements_consumed=consumed, fallback_triggered=fallback,
        stop_guess=stop_guess, intervals=intervals, v_prime=v_prime, x=x,
        insertions=insertions, deletions=deletions, cap=cap, cap_hit=cap_hit,
        discarded=discarded, max_member_sum=max_member,
        bounded_density_violations=violations, late_opt_fraction=late_fraction,
        decomposition_misses=dec1.misses + dec2.misses,
        decomposition_seconds=dec1.seconds + dec2.seconds, alphas=alphas)


@dataclass(frozen=True)
class UnderfullVerdict:
    ok: bool
    mu_all: int
    mu_sparse: int
    # members above beta, and underfull non-members missing from X
    dense_members: tuple
    missed_underfull: tuple


def underfull_ratio_check(v_prime: Iterable[int], x: Iterable[int], m1: MatroidView,
                          m2: MatroidView, epsilon, params: Optional[DcsParams] = None,
                          ground: Optional[Iterable[int]] = None) -> UnderfullVerdict:
    """Check ``mu(V) <= (3/2 + epsilon) * mu(V' | X)`` along with its hypotheses."""
    eps = Fraction(epsilon)
    p = params if params is not None else choose_params(eps)
    ground = m1.ground & m2.ground if ground is None else frozenset(ground)
    v_prime, x = frozenset(v_prime), frozenset(x)
    dec1, dec2 = Decomposer(m1), Decomposer(m2)
    l1, l2 = dec1.lookup(v_prime), dec2.lookup(v_prime)
    dense = tuple(v for v in sorted(v_prime) if l1(v) + l2(v) > p.beta)
    missed = tuple(v for v in sorted(ground - v_prime - x) if l1(v) + l2(v) < p.beta_minus)
    mu_all = len(max_common_independent(m1, m2, ground))
    mu_sparse = len(max_common_independent(m1, m2, v_prime | x))
    holds = mu_all <= (THREE_HALVES + eps) * mu_sparse
    return UnderfullVerdict(holds and not dense and not missed, mu_all, mu_sparse, dense, missed)
