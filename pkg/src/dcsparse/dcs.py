"""Density-constrained subsets: checking and local-search construction.

A subset ``V'`` is a ``(beta, beta_minus)``-DCS when every member has
associated-density sum at most ``beta`` and every non-member has sum at least
``beta_minus``.  :func:`build_dcs` reaches one from the empty set by single
deletions and insertions, always deleting first.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .decomposition import Decomposer, Decomposition, associated_densities, decompose
from .matroids import DomainError, MatroidView

log = logging.getLogger(__name__)


class InvariantError(RuntimeError):
    """An internal guarantee of the local search failed (an implementation bug)."""


@dataclass(frozen=True)
class DcsParams:
    beta: int
    beta_minus: int
    epsilon: Optional[Fraction] = None

    def __post_init__(self):
        if self.beta < self.beta_minus + 7:
            raise DomainError(
                f"beta={self.beta} must be at least beta_minus + 7 = {self.beta_minus + 7}")
        if self.beta_minus <= 0:
            log.warning("beta_minus=%d makes the lower density condition vacuous", self.beta_minus)

    @property
    def certified(self) -> bool:
        """Whether the parameters carry the ``3/2 + epsilon`` guarantee."""
        if self.epsilon is None or self.epsilon <= 0:
            return False
        return (self.beta_minus - 4) * (1 + self.epsilon) >= self.beta

    def to_dict(self) -> dict:
        eps = None if self.epsilon is None else f"{self.epsilon.numerator}/{self.epsilon.denominator}"
        return {"beta": self.beta, "beta_minus": self.beta_minus, "epsilon": eps}


def choose_params(epsilon) -> DcsParams:
    """Smallest integer parameters with ``beta = beta_minus + 7`` that meet
    ``(beta_minus - 4)(1 + epsilon) >= beta``."""
    eps = Fraction(epsilon)
    if eps <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    beta_minus = math.ceil(Fraction(11) / eps + 4)
    return DcsParams(beta_minus + 7, beta_minus, eps)


@dataclass(frozen=True)
class DcsVerdict:
    ok: bool
    # (element, density sum) pairs, ascending by element
    over: tuple
    under: tuple

    def lines(self) -> list[str]:
        out = [f"member {v} has density sum {s} above beta" for v, s in self.over]
        out += [f"non-member {v} has density sum {s} below beta_minus" for v, s in self.under]
        return out


def density_sums(m1: MatroidView, m2: MatroidView, d1: Decomposition, d2: Decomposition,
                 elements: Iterable[int]) -> dict:
    elements = list(elements)
    t1 = associated_densities(m1, d1, elements)
    t2 = associated_densities(m2, d2, elements)
    return {v: t1[v] + t2[v] for v in elements}


def check_dcs(v_prime: Iterable[int], m1: MatroidView, m2: MatroidView, p: DcsParams,
              ground: Optional[Iterable[int]] = None) -> DcsVerdict:
    v_prime = frozenset(v_prime)
    ground = m1.ground if ground is None else frozenset(ground)
    k = m1.full_rank()
    d1 = decompose(m1.restrict(v_prime), k)
    d2 = decompose(m2.restrict(v_prime), m2.full_rank())
    sums = density_sums(m1, m2, d1, d2, ground | v_prime)
    over = tuple((v, sums[v]) for v in sorted(v_prime) if sums[v] > p.beta)
    under = tuple((v, sums[v]) for v in sorted(ground - v_prime) if sums[v] < p.beta_minus)
    return DcsVerdict(not over and not under, over, under)


def potential_of(p: DcsParams, size: int, d1: Decomposition, d2: Decomposition) -> Fraction:
    return (2 * p.beta - 7) * size - d1.squared_sum() - d2.squared_sum()


@dataclass
class DcsState:
    v_prime: frozenset
    params: DcsParams
    decomp1: Decomposition
    decomp2: Decomposition
    phi: Fraction
    step_count: int = 0
    insertions: int = 0
    deletions: int = 0
    budget: Optional[int] = None
    budget_warnings: int = 0
    # smallest potential increase seen over all steps (None before any step)
    min_phi_gain: Optional[Fraction] = None
    phi_trace: list = field(default_factory=list, repr=False)


def potential(state: DcsState) -> Fraction:
    """Potential recomputed from the state's decompositions."""
    return potential_of(state.params, len(state.v_prime), state.decomp1, state.decomp2)


def build_dcs(m1: MatroidView, m2: MatroidView, p: DcsParams,
              ground: Optional[Iterable[int]] = None, mu: Optional[int] = None,
              debug: bool = False, start: Iterable[int] = ()) -> DcsState:
    """Local search for a ``(beta, beta_minus)``-DCS of ``ground``.

    Each round deletes the lowest-id member whose density sum exceeds
    ``beta``; only when there is none does it insert the lowest-id non-member
    whose sum is below ``beta_minus``.  Every step must raise the potential by
    at least 1.  With ``mu`` given, exceeding ``2 * beta**2 * mu`` steps raises
    :class:`InvariantError`; without it the rank is used as the bound and
    overruns are only counted.
    """
    ground = m1.ground if ground is None else frozenset(ground)
    k1, k2 = m1.full_rank(), m2.full_rank()
    dec1, dec2 = Decomposer(m1, k1), Decomposer(m2, k2)
    v = frozenset(start)
    d1, d2 = dec1(v), dec2(v)
    phi = potential_of(p, len(v), d1, d2)
    bound = mu if mu is not None else min(k1, k2)
    state = DcsState(v, p, d1, d2, phi, budget=2 * p.beta * p.beta * bound)
    state.phi_trace.append(phi)
    scan = sorted(ground | v)
    while True:
        sums = density_sums(m1, m2, d1, d2, scan)
        over = next((e for e in scan if e in v and sums[e] > p.beta), None)
        if over is not None:
            new_v = v - {over}
            state.deletions += 1
        else:
            under = next((e for e in scan if e not in v and e in ground
                          and sums[e] < p.beta_minus), None)
            if under is None:
                break
            new_v = v | {under}
            state.insertions += 1
        nd1, nd2 = dec1(new_v), dec2(new_v)
        size_delta = len(new_v) - len(v)
        gain = ((2 * p.beta - 7) * size_delta
                - (nd1.squared_sum() - d1.squared_sum())
                - (nd2.squared_sum() - d2.squared_sum()))
        if gain < 1:
            raise InvariantError(f"potential rose by only {gain} at step {state.step_count + 1}")
        phi += gain
        if debug:
            fresh = potential_of(p, len(new_v), decompose(m1.restrict(new_v), k1),
                                 decompose(m2.restrict(new_v), k2))
            if fresh != phi:
                raise InvariantError(f"tracked potential {phi} differs from recomputed {fresh}")
        v, d1, d2 = new_v, nd1, nd2
        state.step_count += 1
        state.min_phi_gain = gain if state.min_phi_gain is None else min(state.min_phi_gain, gain)
        state.phi_trace.append(phi)
        if state.step_count > state.budget:
            if mu is not None:
                raise InvariantError(
                    f"local search exceeded the step budget {state.budget}")
            state.budget_warnings += 1
    state.v_prime, state.decomp1, state.decomp2, state.phi = v, d1, d2, phi
    return state
