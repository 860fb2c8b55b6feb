"""Matroid rank oracles over a dense element universe ``0..n-1``.

Element sets are plain ``frozenset`` objects of ints; anything that needs a
canonical order (output, memo keys printed to disk) sorts them.

Descriptors (:class:`Uniform`, :class:`Partition`, :class:`Laminar`,
:class:`Graphic`, :class:`Transversal`, :class:`Truncated`) are immutable
rank oracles for a whole universe.  :class:`MatroidView` layers restriction,
contraction and truncation on top of a descriptor.

Uniform, partition and laminar matroids, and truncations of them, all share a
:class:`LaminarTree` form that supports fast rank, fundamental circuits and an
exact minimiser of ``rho * rank(W) - |W|``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence

__all__ = [
    "DomainError",
    "ValidationError",
    "LaminarTree",
    "MatroidDescriptor",
    "Uniform",
    "Partition",
    "Laminar",
    "Graphic",
    "Transversal",
    "Truncated",
    "MatroidView",
    "descriptor_from_dict",
    "validate_descriptor",
]

RANK_CACHE_SIZE = 1 << 16


class DomainError(ValueError):
    """A set argument contains elements outside the view's ground set."""


class ValidationError(ValueError):
    """An instance or descriptor violates a structural invariant."""


# ---------------------------------------------------------------------------
# laminar trees
# ---------------------------------------------------------------------------


class LaminarTree:
    """Nested capacity constraints ``|I & N| <= cap(N)`` plus an optional
    global cap on ``|I|``.

    Nodes are stored so that ``order`` lists children before parents.
    ``deepest[e]`` is the smallest node containing ``e`` (``-1`` when only the
    global cap applies).
    """

    def __init__(self, n: int, nodes: Iterable[tuple[Iterable[int], int]],
                 top_cap: Optional[int] = None, prune: bool = True):
        merged: dict[frozenset, int] = {}
        for elements, cap in nodes:
            key = frozenset(elements)
            if not key:
                continue
            merged[key] = min(cap, merged.get(key, cap))
        # a node whose cap can never bind is dropped
        items = [(s, c) for s, c in merged.items() if c < len(s) or not prune]
        items.sort(key=lambda sc: (-len(sc[0]), min(sc[0])))

        self.n = n
        self.top_cap = top_cap
        self.sets = [s for s, _ in items]
        self.caps = [c for _, c in items]
        self.parent = [-1] * len(items)
        deepest = [-1] * n
        for i, s in enumerate(self.sets):
            it = iter(s)
            first = next(it)
            if not 0 <= first < n:
                raise ValidationError(f"laminar node contains element {first} outside 0..{n - 1}")
            par = deepest[first]
            for e in it:
                if not 0 <= e < n:
                    raise ValidationError(f"laminar node contains element {e} outside 0..{n - 1}")
                if deepest[e] != par:
                    raise ValidationError(
                        f"laminar nodes cross: elements {first} and {e} of node "
                        f"{sorted(s)} sit in different enclosing nodes")
            self.parent[i] = par
            for e in s:
                deepest[e] = i
        self.deepest = deepest
        # items sorted by decreasing size, so reversing puts children first
        self.order = list(range(len(items) - 1, -1, -1))
        # euler intervals for "is element under node" queries
        children: list[list[int]] = [[] for _ in items]
        roots = []
        for i, p in enumerate(self.parent):
            (children[p] if p >= 0 else roots).append(i)
        self.children = children
        self.tin = [0] * len(items)
        self.tout = [0] * len(items)
        clock = 0
        stack = [(r, False) for r in reversed(roots)]
        while stack:
            node, done = stack.pop()
            if done:
                self.tout[node] = clock - 1
                continue
            self.tin[node] = clock
            clock += 1
            stack.append((node, True))
            stack.extend((c, False) for c in reversed(children[node]))

    def with_top_cap(self, cap: int) -> "LaminarTree":
        new = object.__new__(LaminarTree)
        new.__dict__.update(self.__dict__)
        new.top_cap = cap if self.top_cap is None else min(cap, self.top_cap)
        return new

    def _under(self, node: int, e: int) -> bool:
        d = self.deepest[e]
        return d >= 0 and self.tin[node] <= self.tin[d] <= self.tout[node]

    def rank(self, X: Iterable[int]) -> int:
        cnt = [0] * len(self.sets)
        free = 0
        deepest = self.deepest
        for e in X:
            d = deepest[e]
            if d < 0:
                free += 1
            else:
                cnt[d] += 1
        caps, parent = self.caps, self.parent
        for i in self.order:
            c = cnt[i] if cnt[i] < caps[i] else caps[i]
            p = parent[i]
            if p < 0:
                free += c
            else:
                cnt[p] += c
        if self.top_cap is not None and free > self.top_cap:
            return self.top_cap
        return free

    def circuit_oracle(self, S: Iterable[int]) -> Callable[[int], Optional[frozenset]]:
        """Fundamental circuits with respect to an independent set ``S``."""
        S = frozenset(S)
        cnt = [0] * len(self.sets)
        for e in S:
            d = self.deepest[e]
            while d >= 0:
                cnt[d] += 1
                d = self.parent[d]
        root_tight = self.top_cap is not None and len(S) >= self.top_cap

        def circuit(x: int) -> Optional[frozenset]:
            d = self.deepest[x]
            while d >= 0:
                if cnt[d] >= self.caps[d]:
                    return frozenset(y for y in S if self._under(d, y)) | {x}
                d = self.parent[d]
            if root_tight:
                return S | {x}
            return None

        return circuit

    def max_minimizer(self, present: Iterable[int], forced: Iterable[int],
                      rho: Fraction) -> tuple[frozenset, Fraction]:
        """Largest ``W`` with ``forced <= W <= present`` minimising
        ``rho * rank(W) - |W|``; returns ``(W, value)``.

        Uses ``rank(W) = min over antichains D of sum(cap) + |W - union(D)|``
        so the minimum splits into an independent choice per tree node.
        """
        present = frozenset(present)
        forced = frozenset(forced)
        m = len(self.sets)
        size = [0] * m
        open_val = [Fraction(0)] * m
        free_size = 0
        free_val = Fraction(0)
        gain = rho - 1
        take_optional = gain <= 0
        for e in present:
            if e in forced:
                cost = gain
            elif take_optional:
                cost = gain
            else:
                cost = 0
            d = self.deepest[e]
            if d < 0:
                free_size += 1
                free_val += cost
            else:
                size[d] += 1
                open_val[d] += cost
        cut = [False] * m
        val = [Fraction(0)] * m
        for i in self.order:
            cut_val = rho * self.caps[i] - size[i]
            if cut_val <= open_val[i]:
                val[i] = cut_val
                cut[i] = True
            else:
                val[i] = open_val[i]
            p = self.parent[i]
            if p < 0:
                free_size += size[i]
                free_val += val[i]
            else:
                size[p] += size[i]
                open_val[p] += val[i]
        if self.top_cap is not None:
            root_cut = rho * self.top_cap - free_size
            if root_cut <= free_val:
                return present, root_cut
        covered = [False] * m
        for i in reversed(self.order):
            p = self.parent[i]
            covered[i] = cut[i] or (p >= 0 and covered[p])
        chosen = frozenset(
            e for e in present
            if e in forced or take_optional
            or (self.deepest[e] >= 0 and covered[self.deepest[e]]))
        return chosen, free_val


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


class MatroidDescriptor:
    """Base class: an immutable rank oracle on the universe ``0..n-1``."""

    kind = "abstract"
    n: int

    def __init__(self):
        self._cached_rank = lru_cache(maxsize=RANK_CACHE_SIZE)(self._rank)

    def rank(self, X: Iterable[int]) -> int:
        if not isinstance(X, frozenset):
            X = frozenset(X)
        return self._cached_rank(X)

    def _rank(self, X: frozenset) -> int:
        raise NotImplementedError

    def laminar_tree(self) -> Optional[LaminarTree]:
        return None

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()})"


class Uniform(MatroidDescriptor):
    kind = "uniform"

    def __init__(self, n: int, r: int):
        super().__init__()
        self.n = n
        self.r = r

    def _rank(self, X):
        return min(len(X), self.r)

    def laminar_tree(self):
        return LaminarTree(self.n, [], top_cap=self.r)

    def to_dict(self):
        return {"type": "uniform", "n": self.n, "r": self.r}


class Partition(MatroidDescriptor):
    kind = "partition"

    def __init__(self, blocks: Sequence[Iterable[int]], capacities: Sequence[int]):
        super().__init__()
        self.blocks = tuple(tuple(sorted(b)) for b in blocks)
        self.capacities = tuple(capacities)
        self.n = sum(len(b) for b in self.blocks)
        self.block_of = {}
        for i, b in enumerate(self.blocks):
            for e in b:
                self.block_of[e] = i

    def _rank(self, X):
        counts: dict[int, int] = {}
        for e in X:
            b = self.block_of[e]
            counts[b] = counts.get(b, 0) + 1
        return sum(min(c, self.capacities[b]) for b, c in counts.items())

    def laminar_tree(self):
        return LaminarTree(self.n, zip(self.blocks, self.capacities))

    def to_dict(self):
        return {"type": "partition", "blocks": [list(b) for b in self.blocks],
                "capacities": list(self.capacities)}


class Laminar(MatroidDescriptor):
    """Nested-or-disjoint capacity constraints; elements outside every node
    are unconstrained."""

    kind = "laminar"

    def __init__(self, n: int, nodes: Sequence[tuple[Iterable[int], int]]):
        super().__init__()
        self.n = n
        self.nodes = tuple((tuple(sorted(s)), int(c)) for s, c in nodes)
        # nodes whose caps never bind must still be laminar
        LaminarTree(n, self.nodes, prune=False)
        self._tree = LaminarTree(n, self.nodes)

    def _rank(self, X):
        return self._tree.rank(X)

    def laminar_tree(self):
        return self._tree

    def to_dict(self):
        return {"type": "laminar",
                "nodes": [{"elements": list(s), "capacity": c} for s, c in self.nodes]}


class Graphic(MatroidDescriptor):
    """Cycle matroid: element ``i`` is the edge ``edges[i]``."""

    kind = "graphic"

    def __init__(self, vertex_count: int, edges: Sequence[tuple[int, int]]):
        super().__init__()
        self.vertex_count = vertex_count
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        self.n = len(self.edges)

    def _rank(self, X):
        parent: dict[int, int] = {}

        def find(a):
            root = a
            while parent.get(root, root) != root:
                root = parent[root]
            while a != root:
                parent[a], a = root, parent.get(a, a)
            return root

        r = 0
        for e in X:
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                r += 1
        return r

    def to_dict(self):
        return {"type": "graphic", "vertex_count": self.vertex_count,
                "edges": [list(e) for e in self.edges]}


class Transversal(MatroidDescriptor):
    """Element ``i`` may be matched to any right vertex in ``adjacency[i]``."""

    kind = "transversal"

    def __init__(self, adjacency: Sequence[Iterable[int]]):
        super().__init__()
        self.adjacency = tuple(tuple(sorted(a)) for a in adjacency)
        self.n = len(self.adjacency)

    def _rank(self, X):
        match_right: dict[int, int] = {}

        def augment(e, seen):
            for w in self.adjacency[e]:
                if w in seen:
                    continue
                seen.add(w)
                if w not in match_right or augment(match_right[w], seen):
                    match_right[w] = e
                    return True
            return False

        return sum(1 for e in sorted(X) if augment(e, set()))

    def to_dict(self):
        return {"type": "transversal", "adjacency": [list(a) for a in self.adjacency]}


class Truncated(MatroidDescriptor):
    kind = "truncated"

    def __init__(self, inner: MatroidDescriptor, r: int):
        super().__init__()
        if isinstance(inner, Truncated):
            r = min(r, inner.r)
            inner = inner.inner
        self.inner = inner
        self.r = r
        self.n = inner.n

    def _rank(self, X):
        return min(self.inner.rank(X), self.r)

    def laminar_tree(self):
        tree = self.inner.laminar_tree()
        return None if tree is None else tree.with_top_cap(self.r)

    def to_dict(self):
        return {"type": "truncated", "inner": self.inner.to_dict(), "r": self.r}


def descriptor_from_dict(data: dict, n: Optional[int] = None) -> MatroidDescriptor:
    """Build a descriptor from its JSON form.  ``n`` is required for laminar
    descriptors (whose nodes need not mention every element)."""
    kind = data.get("type")
    if kind == "uniform":
        return Uniform(int(data["n"]), int(data["r"]))
    if kind == "partition":
        return Partition(data["blocks"], [int(c) for c in data["capacities"]])
    if kind == "laminar":
        size = data.get("n", n)
        if size is None:
            raise ValidationError("laminar descriptor needs the universe size n")
        nodes = [(node["elements"], int(node["capacity"])) for node in data["nodes"]]
        return Laminar(int(size), nodes)
    if kind == "graphic":
        return Graphic(int(data["vertex_count"]), [tuple(e) for e in data["edges"]])
    if kind == "transversal":
        return Transversal(data["adjacency"])
    if kind == "truncated":
        return Truncated(descriptor_from_dict(data["inner"], n), int(data["r"]))
    raise ValidationError(f"unknown matroid descriptor type {kind!r}")


def validate_descriptor(desc: MatroidDescriptor, n: int) -> None:
    """Raise :class:`ValidationError` naming the first offending element."""
    if isinstance(desc, Uniform):
        if n > 0 and desc.r < 1:
            raise ValidationError(f"uniform rank {desc.r} makes element 0 a loop")
    elif isinstance(desc, Partition):
        if len(desc.blocks) != len(desc.capacities):
            raise ValidationError("partition: blocks and capacities differ in length")
        seen: set[int] = set()
        for b, cap in zip(desc.blocks, desc.capacities):
            for e in b:
                if not 0 <= e < n:
                    raise ValidationError(f"partition: element {e} outside 0..{n - 1}")
                if e in seen:
                    raise ValidationError(f"partition: element {e} appears in two blocks")
                seen.add(e)
            if b and cap < 1:
                raise ValidationError(f"partition: capacity {cap} makes element {b[0]} a loop")
        missing = set(range(n)) - seen
        if missing:
            raise ValidationError(f"partition: element {min(missing)} is in no block")
    elif isinstance(desc, Laminar):
        LaminarTree(n, desc.nodes, prune=False)
        for s, cap in desc.nodes:
            if s and cap < 1:
                raise ValidationError(f"laminar: capacity {cap} makes element {s[0]} a loop")
    elif isinstance(desc, Graphic):
        for i, (u, v) in enumerate(desc.edges):
            if u == v:
                raise ValidationError(f"graphic: element {i} is a self-loop at vertex {u}")
            if not (0 <= u < desc.vertex_count and 0 <= v < desc.vertex_count):
                raise ValidationError(f"graphic: element {i} has an endpoint outside the vertex range")
    elif isinstance(desc, Transversal):
        for i, adj in enumerate(desc.adjacency):
            if not adj:
                raise ValidationError(f"transversal: element {i} has no neighbours (loop)")
    elif isinstance(desc, Truncated):
        validate_descriptor(desc.inner, n)
        if n > 0 and desc.r < 1:
            raise ValidationError(f"truncation to rank {desc.r} makes element 0 a loop")
    if desc.n != n:
        raise ValidationError(f"{desc.kind} descriptor covers {desc.n} elements, instance has n={n}")
    for v in range(n):
        if desc.rank(frozenset((v,))) != 1:
            raise ValidationError(f"{desc.kind}: element {v} is a loop")


# ---------------------------------------------------------------------------
# views
# ---------------------------------------------------------------------------


def _as_set(X) -> frozenset:
    return X if isinstance(X, frozenset) else frozenset(X)


class MatroidView:
    """A descriptor restricted to ``ground`` and contracted by ``contracted``.

    ``base`` is a basis of the contracted set, chosen greedily in id order;
    ranks are ``rank_desc(X | base) - |base|``.  Views are immutable and can
    be shared between threads; the rank memo lives on the descriptor.
    """

    __slots__ = ("descriptor", "ground", "contracted", "base", "_tree")

    def __init__(self, descriptor: MatroidDescriptor, ground: Optional[Iterable[int]] = None,
                 contracted: Iterable[int] = (), base: Sequence[int] = ()):
        self.descriptor = descriptor
        self.ground = frozenset(range(descriptor.n)) if ground is None else _as_set(ground)
        self.contracted = _as_set(contracted)
        self.base = tuple(base)
        self._tree = descriptor.laminar_tree()

    def __repr__(self):
        return (f"MatroidView({self.descriptor.kind}, |ground|={len(self.ground)}, "
                f"|contracted|={len(self.contracted)})")

    @property
    def laminar(self) -> Optional[LaminarTree]:
        return self._tree

    def _check(self, X: frozenset) -> None:
        if not X <= self.ground:
            bad = min(X - self.ground)
            raise DomainError(f"element {bad} is not in the view's ground set")

    def rank(self, X: Iterable[int]) -> int:
        X = _as_set(X)
        self._check(X)
        if not self.base:
            return self.descriptor.rank(X)
        return self.descriptor.rank(X.union(self.base)) - len(self.base)

    def full_rank(self) -> int:
        return self.rank(self.ground)

    def is_independent(self, X: Iterable[int]) -> bool:
        X = _as_set(X)
        return self.rank(X) == len(X)

    def span(self, X: Iterable[int]) -> frozenset:
        X = _as_set(X)
        r = self.rank(X)
        return X | frozenset(v for v in self.ground - X if self.rank(X | {v}) == r)

    def restrict(self, S: Iterable[int]) -> "MatroidView":
        S = _as_set(S)
        self._check(S)
        return MatroidView(self.descriptor, S, self.contracted, self.base)

    def contract(self, A: Iterable[int]) -> "MatroidView":
        A = _as_set(A)
        self._check(A)
        base = list(self.base)
        held = frozenset(base)
        r = len(base)
        for e in sorted(A):
            if self.descriptor.rank(held | {e}) > r:
                held = held | {e}
                base.append(e)
                r += 1
        return MatroidView(self.descriptor, self.ground - A, self.contracted | A, base)

    def truncate(self, r: int) -> "MatroidView":
        if r < 0:
            raise ValueError("truncation rank must be nonnegative")
        desc = Truncated(self.descriptor, r + len(self.base))
        return MatroidView(desc, self.ground, self.contracted, self.base)

    def circuit_oracle(self, S: Iterable[int]) -> Callable[[int], Optional[frozenset]]:
        """For independent ``S``, map ``x`` outside ``S`` to its fundamental
        circuit in ``S + x`` (``None`` when ``S + x`` is independent)."""
        S = _as_set(S)
        if self._tree is not None:
            inner = self._tree.circuit_oracle(S.union(self.base))
            base = frozenset(self.base)

            def circuit(x):
                c = inner(x)
                return None if c is None else c - base

            return circuit
        size = len(S)

        def generic(x):
            if self.rank(S | {x}) > size:
                return None
            return frozenset(y for y in S if self.rank((S - {y}) | {x}) == size) | {x}

        return generic
