"""Exact matroid intersection with min-max certificates.

The solver grows a common independent set ``S`` greedily and then by
shortest augmenting paths in the exchange graph.  When no path exists, the
elements reachable from the sources give a partition ``(c1, c2)`` with
``rank1(c1) + rank2(c2) = |S|``, which proves optimality.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .matroids import MatroidView

PRIMAL_LIMIT = 18
DUAL_LIMIT = 16


class CertificateError(RuntimeError):
    """The extracted partition does not certify the primal value."""


@dataclass(frozen=True)
class DualCertificate:
    c1: frozenset
    c2: frozenset
    value: int


def _views(m1: MatroidView, m2: MatroidView, ground: Optional[Iterable[int]]):
    if ground is None:
        ground = m1.ground & m2.ground
    ground = frozenset(ground)
    return m1.restrict(ground), m2.restrict(ground), ground


def _augmenting_path(a: MatroidView, b: MatroidView, S: frozenset,
                     ground: frozenset) -> tuple[Optional[list], frozenset]:
    """Shortest source-to-sink path, or ``(None, reachable)``."""
    circ1 = a.circuit_oracle(S)
    circ2 = b.circuit_oracle(S)
    outside = sorted(ground - S)
    c1 = {x: circ1(x) for x in outside}
    c2 = {x: circ2(x) for x in outside}
    # y in S -> x outside when S - y + x is independent in the first matroid
    into: dict[int, list] = {y: [] for y in S}
    for x in outside:
        if c1[x] is not None:
            for y in c1[x]:
                if y != x:
                    into[y].append(x)
    sources = [x for x in outside if c1[x] is None]
    prev: dict[int, Optional[int]] = {x: None for x in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        if u in S:
            nxt = into[u]
        else:
            if c2[u] is None:
                path = [u]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1], frozenset()
            nxt = sorted(y for y in c2[u] if y != u)
        for w in nxt:
            if w not in prev:
                prev[w] = u
                queue.append(w)
    return None, frozenset(prev)


def _solve(m1: MatroidView, m2: MatroidView, ground: Optional[Iterable[int]]):
    a, b, ground = _views(m1, m2, ground)
    S: frozenset = frozenset()
    for e in sorted(ground):
        T = S | {e}
        if a.is_independent(T) and b.is_independent(T):
            S = T
    while True:
        path, reach = _augmenting_path(a, b, S, ground)
        if path is None:
            break
        before = len(S)
        S = S.symmetric_difference(path)
        assert len(S) == before + 1, "augmentation must grow the set by one"
    if not (a.is_independent(S) and b.is_independent(S)):
        raise CertificateError("solver produced a set that is not commonly independent")
    return a, b, ground, S, reach


def max_common_independent(m1: MatroidView, m2: MatroidView,
                           ground: Optional[Iterable[int]] = None,
                           canonical: bool = False) -> frozenset:
    """A maximum common independent set of ``m1|ground`` and ``m2|ground``.

    With ``canonical=True`` the lexicographically first optimum (by sorted
    ids) is returned; this costs one extra solve per element.
    """
    a, b, ground, S, _ = _solve(m1, m2, ground)
    if not canonical:
        return S
    mu = len(S)
    chosen: frozenset = frozenset()
    for e in sorted(ground):
        if len(chosen) == mu:
            break
        T = chosen | {e}
        if not (a.is_independent(T) and b.is_independent(T)):
            continue
        rest = ground - T
        ca, cb = a.contract(T), b.contract(T)
        if len(T) + len(_solve(ca, cb, rest)[3]) == mu:
            chosen = T
    return chosen


def dual_certificate(m1: MatroidView, m2: MatroidView,
                     ground: Optional[Iterable[int]] = None) -> DualCertificate:
    """Partition ``(c1, c2)`` of ``ground`` with ``rank1(c1) + rank2(c2) = mu``.

    ``c2`` is the set reachable from the sources in the final exchange graph.
    """
    a, b, ground, S, reach = _solve(m1, m2, ground)
    c2 = reach
    c1 = ground - c2
    value = a.rank(c1) + b.rank(c2)
    if value != len(S):
        raise CertificateError(
            f"certificate value {value} differs from primal size {len(S)}")
    return DualCertificate(c1, c2, value)


def greedy_maximal(m1: MatroidView, m2: MatroidView, order: Sequence[int]) -> frozenset:
    """Keep each element of ``order`` that leaves the set commonly independent."""
    S: frozenset = frozenset()
    for e in order:
        T = S | {e}
        if m1.is_independent(T) and m2.is_independent(T):
            S = T
    return S


def is_common_independent(m1: MatroidView, m2: MatroidView, S: Iterable[int]) -> bool:
    S = frozenset(S)
    return m1.is_independent(S) and m2.is_independent(S)


# ---------------------------------------------------------------------------
# exhaustive oracles
# ---------------------------------------------------------------------------


def brute_force_max_common(m1: MatroidView, m2: MatroidView,
                           ground: Optional[Iterable[int]] = None) -> frozenset:
    """Lexicographically first maximum common independent set, by enumeration."""
    a, b, ground = _views(m1, m2, ground)
    if len(ground) > PRIMAL_LIMIT:
        raise ValueError(f"exhaustive intersection is gated at {PRIMAL_LIMIT} elements")
    elems = sorted(ground)
    for size in range(len(elems), -1, -1):
        # combinations come out in lexicographic order
        for combo in itertools.combinations(elems, size):
            T = frozenset(combo)
            if a.is_independent(T) and b.is_independent(T):
                return T
    return frozenset()


def brute_force_dual(m1: MatroidView, m2: MatroidView,
                     ground: Optional[Iterable[int]] = None) -> DualCertificate:
    """Minimum of ``rank1(c1) + rank2(ground - c1)`` over all ``c1``; among
    minimisers the largest ``c1`` (their union) is returned."""
    a, b, ground = _views(m1, m2, ground)
    if len(ground) > DUAL_LIMIT:
        raise ValueError(f"exhaustive dual search is gated at {DUAL_LIMIT} elements")
    elems = sorted(ground)
    best = None
    c1: frozenset = frozenset()
    for size in range(len(elems) + 1):
        for combo in itertools.combinations(elems, size):
            U = frozenset(combo)
            val = a.rank(U) + b.rank(ground - U)
            if best is None or val < best:
                best, c1 = val, U
            elif val == best:
                c1 = c1 | U
    return DualCertificate(c1, ground - c1, best if best is not None else 0)
