"""Densest subsets and the greedy density-based decomposition.

A decomposition of ``V'`` in ``M|V'`` peels off, one layer at a time, the
largest densest subset of what is left after contracting the earlier layers.
Densities are exact :class:`~fractions.Fraction` values.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .matroids import DomainError, MatroidView
from .sfm import BRUTE_FORCE_LIMIT, minimize_submodular

Density = Union[Fraction, float]

ZERO = Fraction(0)


def density(size: int, rank: int) -> Density:
    """``size / rank`` with ``0`` for the empty set and ``inf`` for loops."""
    if size == 0:
        return ZERO
    if rank == 0:
        return math.inf
    return Fraction(size, rank)


def rank_ratio_minimizer(view: MatroidView, rho: Fraction,
                         method: str = "auto") -> tuple[frozenset, Fraction]:
    """Maximal minimiser of ``rho * rank(U) - |U|`` over ``U <= view.ground``."""
    tree = view.laminar
    if tree is not None and method == "auto":
        base = frozenset(view.base)
        W, val = tree.max_minimizer(view.ground | base, base, rho)
        b = len(base)
        return W - base, val + b - rho * b

    def f(U):
        return rho * view.rank(U) - len(U)

    return minimize_submodular(f, view.ground, method=method)


def densest_subset(view: MatroidView, method: str = "auto") -> tuple[frozenset, Density]:
    """Largest subset of maximum density, found by Dinkelbach iteration.

    Starting from the density of the whole ground set, repeatedly take the
    maximal minimiser of ``rho * rank(U) - |U|``; a negative minimum means a
    denser set exists and ``rho`` moves up to its density.
    """
    ground = view.ground
    if not ground:
        return frozenset(), ZERO
    r = view.rank(ground)
    if r == 0:
        raise DomainError(f"element {min(ground)} is a loop in this view")
    rho = Fraction(len(ground), r)
    while True:
        U, val = rank_ratio_minimizer(view, rho, method)
        if val >= 0:
            return U, rho
        ru = view.rank(U)
        if ru == 0:
            raise DomainError(f"element {min(U)} is a loop in this view")
        rho = Fraction(len(U), ru)


@dataclass(frozen=True)
class Layer:
    elements: frozenset
    density: Fraction
    rank: int


@dataclass(frozen=True)
class Decomposition:
    """Layers ``U_1..U_k`` of ``view.ground`` (trailing layers may be empty)."""

    layers: tuple
    view: MatroidView
    prefix_ranks: tuple = field(repr=False)

    @property
    def ground(self) -> frozenset:
        return self.view.ground

    @property
    def k(self) -> int:
        return len(self.layers)

    def nonempty(self) -> list:
        return [L for L in self.layers if L.elements]

    def layer_index(self) -> dict:
        return {e: j for j, L in enumerate(self.layers) for e in L.elements}

    def prefix(self, j: int) -> frozenset:
        """Union of the first ``j`` layers."""
        return frozenset().union(*(L.elements for L in self.layers[:j]))

    def squared_sum(self) -> Fraction:
        """``sum_j rank_j * density_j**2``."""
        return sum((L.rank * L.density * L.density for L in self.layers), ZERO)

    def lines(self) -> list[str]:
        out = []
        for j, L in enumerate(self.layers, start=1):
            d = L.density
            out.append(f"layer={j} density={d.numerator}/{d.denominator} rank={L.rank} "
                       f"elements={sorted(L.elements)}")
        return out


def decompose(view: MatroidView, k: Optional[int] = None, method: str = "auto") -> Decomposition:
    """Greedy density-based decomposition of ``view.ground``.

    ``view`` is normally ``M`` restricted to ``V'``; ``k`` defaults to the rank
    of the whole universe and fixes the number of layers.
    """
    if k is None:
        k = view.descriptor.rank(frozenset(range(view.descriptor.n)))
    layers = []
    prefix_ranks = []
    current = view
    total = 0
    for _ in range(k):
        if not current.ground:
            layers.append(Layer(frozenset(), ZERO, 0))
            prefix_ranks.append(total)
            continue
        U, rho = densest_subset(current, method)
        r = current.rank(U)
        # loop-free input and greedy contraction never leave a rank-0 remainder
        assert r > 0, "nonempty layer with rank 0"
        layers.append(Layer(U, rho, r))
        total += r
        prefix_ranks.append(total)
        current = current.contract(U)
    if current.ground:
        raise ValueError(f"k={k} layers do not exhaust the ground set; k is below the rank")
    return Decomposition(tuple(layers), view, tuple(prefix_ranks))


# ---------------------------------------------------------------------------
# associated densities
# ---------------------------------------------------------------------------


class DensityLookup:
    """Associated densities of single elements relative to one decomposition.

    Members of ``V'`` take their layer's density; others take the density of
    the first layer whose prefix spans them in ``m_full``, or 0.  Spans are
    nested, so the generic path binary-searches the prefixes.  For a laminar
    matroid an outside element is spanned by a prefix exactly when that
    prefix saturates one of its ancestor constraints, so the first saturating
    layer of every node is computed once up front.
    """

    def __init__(self, m_full: MatroidView, d: Decomposition):
        self.m_full = m_full
        self.decomposition = d
        self.index = d.layer_index()
        self._tree = m_full.laminar if not m_full.base else None
        if self._tree is not None:
            self._saturation()
        else:
            acc: frozenset = frozenset()
            self._prefixes = []
            for j, L in enumerate(d.layers):
                if L.elements:
                    acc = acc | L.elements
                    self._prefixes.append((j, acc, d.prefix_ranks[j]))

    def _saturation(self) -> None:
        tree, d = self._tree, self.decomposition
        m = len(tree.sets)
        never = len(d.layers)
        self._never = never
        sat = [never] * m
        root_sat = never
        direct = [0] * m
        direct_free = 0
        for j, L in enumerate(d.layers):
            if not L.elements:
                continue
            for e in L.elements:
                dn = tree.deepest[e]
                if dn < 0:
                    direct_free += 1
                else:
                    direct[dn] += 1
            cnt = direct[:]
            free = direct_free
            for i in tree.order:
                c = min(cnt[i], tree.caps[i])
                if c >= tree.caps[i] and sat[i] == never:
                    sat[i] = j
                p = tree.parent[i]
                if p < 0:
                    free += c
                else:
                    cnt[p] += c
            if tree.top_cap is not None and free >= tree.top_cap and root_sat == never:
                root_sat = j
        self._sat = sat
        self._root_sat = root_sat

    def first_layer(self, v: int) -> Optional[int]:
        """Index of the layer giving ``v`` its density, ``None`` if unspanned."""
        j = self.index.get(v)
        if j is not None:
            return j
        tree = self._tree
        if tree is not None:
            best = self._root_sat
            dn = tree.deepest[v]
            sat, parent = self._sat, tree.parent
            while dn >= 0:
                if sat[dn] < best:
                    best = sat[dn]
                dn = parent[dn]
            return None if best == self._never else best
        prefixes = self._prefixes
        lo, hi = 0, len(prefixes)
        while lo < hi:
            mid = (lo + hi) // 2
            _, P, r = prefixes[mid]
            if self.m_full.rank(P | {v}) == r:
                hi = mid
            else:
                lo = mid + 1
        return prefixes[lo][0] if lo < len(prefixes) else None

    def __call__(self, v: int) -> Fraction:
        j = self.first_layer(v)
        return ZERO if j is None else self.decomposition.layers[j].density


def associated_densities(m_full: MatroidView, d: Decomposition,
                         elements: Optional[Iterable[int]] = None) -> dict:
    """Associated density of every element (default: all of ``m_full.ground``)."""
    lookup = DensityLookup(m_full, d)
    if elements is None:
        elements = m_full.ground
    return {v: lookup(v) for v in elements}


def generic_associated_densities(m_full: MatroidView, d: Decomposition,
                                 elements: Optional[Iterable[int]] = None) -> dict:
    """Same table by direct span tests on every prefix (test oracle)."""
    if elements is None:
        elements = m_full.ground
    out = {}
    for v in elements:
        val = ZERO
        for j in range(1, d.k + 1):
            if not d.layers[j - 1].elements:
                break
            P = d.prefix(j)
            if v in P or m_full.rank(P | {v}) == d.prefix_ranks[j - 1]:
                val = d.layers[j - 1].density
                break
        out[v] = val
    return out


class Decomposer:
    """Decompositions of subsets of one matroid, cached by subset content.

    Keeps ``calls``/``misses``/``seconds`` counters so callers can see how
    much time goes into recomputation.
    """

    def __init__(self, m_full: MatroidView, k: Optional[int] = None, cache_size: int = 256):
        self.m_full = m_full
        self.k = m_full.full_rank() if k is None else k
        self.cache_size = cache_size
        self._cache: OrderedDict = OrderedDict()
        self._lookups: dict = {}
        self.calls = 0
        self.misses = 0
        self.seconds = 0.0

    def __call__(self, v_prime: Iterable[int]) -> Decomposition:
        key = frozenset(v_prime)
        self.calls += 1
        hit = self._cache.get(key)
        if hit is not None:
            self._cache.move_to_end(key)
            return hit
        self.misses += 1
        start = time.perf_counter()
        d = decompose(self.m_full.restrict(key), self.k)
        self.seconds += time.perf_counter() - start
        self._cache[key] = d
        if len(self._cache) > self.cache_size:
            self._cache.popitem(last=False)
        return d

    def lookup(self, v_prime: Iterable[int]) -> DensityLookup:
        key = frozenset(v_prime)
        d = self(key)
        hit = self._lookups.get(key)
        if hit is None or hit.decomposition is not d:
            hit = DensityLookup(self.m_full, d)
            self._lookups[key] = hit
            if len(self._lookups) > self.cache_size:
                self._lookups.pop(next(iter(self._lookups)))
        return hit

    def densities(self, v_prime: Iterable[int], elements: Optional[Iterable[int]] = None) -> dict:
        lookup = self.lookup(v_prime)
        if elements is None:
            elements = self.m_full.ground
        return {v: lookup(v) for v in elements}


# ---------------------------------------------------------------------------
# exhaustive oracles and modification checks
# ---------------------------------------------------------------------------


def brute_force_densest(view: MatroidView) -> tuple[frozenset, Density]:
    """Enumerate all subsets; ties in density go to the larger set."""
    ground = sorted(view.ground)
    if len(ground) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"exhaustive densest search is gated at {BRUTE_FORCE_LIMIT} elements")
    best, best_d = frozenset(), ZERO
    for size in range(1, len(ground) + 1):
        for combo in itertools.combinations(ground, size):
            U = frozenset(combo)
            dU = density(len(U), view.rank(U))
            if dU > best_d or (dU == best_d and len(U) > len(best)):
                best, best_d = U, dU
    return best, best_d


def brute_force_decompose(view: MatroidView, k: Optional[int] = None) -> Decomposition:
    if k is None:
        k = view.descriptor.rank(frozenset(range(view.descriptor.n)))
    layers, prefix_ranks = [], []
    current, total = view, 0
    for _ in range(k):
        U, rho = brute_force_densest(current)
        r = current.rank(U)
        layers.append(Layer(U, rho if U else ZERO, r))
        total += r
        prefix_ranks.append(total)
        current = current.contract(U)
    return Decomposition(tuple(layers), view, tuple(prefix_ranks))


def modification_violations(m_full: MatroidView, v_prime: Iterable[int], u: int,
                            k: Optional[int] = None) -> list[str]:
    """Check the insertion/deletion monotonicity properties for toggling ``u``.

    If ``u`` is outside ``V'`` it is inserted, otherwise deleted.  Returns a
    list of human-readable violations (empty when every clause holds).
    """
    v_prime = frozenset(v_prime)
    inserting = u not in v_prime
    v_new = v_prime | {u} if inserting else v_prime - {u}
    k = m_full.full_rank() if k is None else k
    d_old = decompose(m_full.restrict(v_prime), k)
    d_new = decompose(m_full.restrict(v_new), k)
    old = associated_densities(m_full, d_old)
    new = associated_densities(m_full, d_new)
    out = []
    ru = old[u]
    sign = 1 if inserting else -1
    for j, L in enumerate(d_old.layers):
        for v in L.elements:
            if sign * (new[v] - L.density) < 0:
                out.append(f"(i) v={v} layer {j + 1}: {L.density} -> {new[v]}")
    for v in m_full.ground:
        if sign * (new[v] - old[v]) < 0:
            out.append(f"(ii) v={v}: {old[v]} -> {new[v]}")
    shift = sign * (new[u] - ru)
    if not 0 <= shift <= 1:
        out.append(f"(iii) u={u}: {ru} -> {new[u]}")
    for v in v_prime - {u}:
        if inserting:
            outside = old[v] < ru or old[v] > ru + 1
        else:
            outside = old[v] > ru or old[v] < ru - 1
        if outside and old[v] != new[v]:
            out.append(f"(iv) v={v}: {old[v]} -> {new[v]} with u at {ru}")
    return out
