"""Deterministic instance generators.

Every generator draws from ``numpy.random.default_rng(seed)`` only, so the
same family, size and seed always produce byte-identical instance files.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..instance import Instance
from ..matroids import Graphic, Laminar, Partition, Transversal, Uniform


class GenerationError(ValueError):
    """The size specification cannot produce a valid instance."""


def _blocks_from_labels(labels, count):
    blocks = [[] for _ in range(count)]
    for i, lab in enumerate(labels):
        blocks[lab].append(i)
    return [b for b in blocks if b]


def bipartite_instance(edges, metadata, capacity: int = 1) -> Instance:
    """Two partition matroids whose common independent sets are
    ``capacity``-matchings of the bipartite multigraph ``edges``."""
    edges = [(int(u), int(w)) for u, w in edges]
    if not edges:
        raise GenerationError("bipartite instance needs at least one edge")
    left = max(u for u, _ in edges) + 1
    right = max(w for _, w in edges) + 1
    b1 = _blocks_from_labels([u for u, _ in edges], left)
    b2 = _blocks_from_labels([w for _, w in edges], right)
    m1 = Partition(b1, [min(capacity, len(b)) for b in b1])
    m2 = Partition(b2, [min(capacity, len(b)) for b in b2])
    meta = dict(metadata)
    meta["edges"] = [list(e) for e in edges]
    return Instance(len(edges), m1, m2, meta)


def partition_bipartite(rng, spec: dict, meta: dict) -> Instance:
    """Random bipartite multigraph.

    ``degree`` builds a ``degree``-regular graph on ``left = right`` vertices
    as a union of random perfect matchings.  Otherwise ``edges`` endpoints are
    drawn uniformly; a ``hub`` fraction of them is sent to right vertex 0.
    With ``pendants`` set, right vertex 0 receives every edge except one
    private edge ``(u, u)`` for each left vertex ``u >= 1``, so an arbitrary
    early hub edge usually costs a maximal matching one edge.
    """
    left = int(spec.get("left", 8))
    right = int(spec.get("right", left))
    if left < 1 or right < 1:
        raise GenerationError("left and right vertex counts must be positive")
    if spec.get("pendants"):
        m = int(spec.get("edges", 4 * left))
        if m < left:
            raise GenerationError("pendant graphs need at least one edge per left vertex")
        hub_edges = [(int(u), 0) for u in rng.integers(0, left, size=m - (left - 1))]
        hub_edges[0] = (0, 0)
        edges = hub_edges + [(u, u) for u in range(1, left)]
        perm = rng.permutation(len(edges))
        edges = [edges[i] for i in perm]
    elif "degree" in spec:
        d = int(spec["degree"])
        if d < 1 or left != right:
            raise GenerationError("regular graphs need degree >= 1 and left == right")
        edges = []
        for _ in range(d):
            perm = rng.permutation(right)
            edges += [(u, int(perm[u])) for u in range(left)]
    else:
        m = int(spec.get("edges", 4 * left))
        hub = float(spec.get("hub", 0.0))
        us = rng.integers(0, left, size=m)
        ws = rng.integers(0, right, size=m)
        to_hub = rng.random(size=m) < hub
        ws = np.where(to_hub, 0, ws)
        edges = list(zip(us.tolist(), ws.tolist()))
    return bipartite_instance(edges, meta, int(spec.get("capacity", 1)))


def _random_laminar_nodes(rng, elements: list, max_cap: int, depth: int) -> list:
    """Split ``elements`` recursively into random contiguous groups."""
    nodes = []
    if depth == 0 or len(elements) < 2:
        return nodes
    parts = int(rng.integers(2, min(4, len(elements)) + 1))
    cuts = sorted(rng.choice(np.arange(1, len(elements)), size=parts - 1, replace=False).tolist())
    bounds = [0] + cuts + [len(elements)]
    for a, b in zip(bounds, bounds[1:]):
        group = elements[a:b]
        if len(group) >= 2:
            cap = int(rng.integers(1, min(max_cap, len(group) - 1) + 1))
            nodes.append((group, cap))
        nodes += _random_laminar_nodes(rng, group, max_cap, depth - 1)
    return nodes


def laminar_family(rng, spec: dict, meta: dict) -> Instance:
    """Random laminar matroid against a random partition matroid."""
    n = int(spec.get("n", 30))
    if n < 1:
        raise GenerationError("n must be positive")
    max_cap = int(spec.get("max_cap", 3))
    if max_cap < 1:
        raise GenerationError("laminar capacities below 1 would create loops")
    depth = int(spec.get("depth", 3))
    perm = rng.permutation(n).tolist()
    nodes = _random_laminar_nodes(rng, perm, max_cap, depth)
    top = spec.get("top_cap")
    if top is not None:
        nodes.append((list(range(n)), int(top)))
    m1 = Laminar(n, nodes)
    blocks = int(spec.get("blocks", max(1, n // 4)))
    labels = rng.integers(0, blocks, size=n).tolist()
    b2 = _blocks_from_labels(labels, blocks)
    caps = [int(rng.integers(1, min(max_cap, len(b)) + 1)) for b in b2]
    return Instance(n, m1, Partition(b2, caps), meta)


def graphic_family(rng, spec: dict, meta: dict) -> Instance:
    """Random multigraph's cycle matroid against a colouring partition matroid."""
    vertices = int(spec.get("vertices", 6))
    m = int(spec.get("edges", 2 * vertices))
    colors = int(spec.get("colors", max(1, vertices - 1)))
    if vertices < 2:
        raise GenerationError("graphic instances need at least two vertices")
    us = rng.integers(0, vertices, size=m)
    shift = rng.integers(1, vertices, size=m)
    ws = (us + shift) % vertices
    edges = list(zip(us.tolist(), ws.tolist()))
    labels = rng.integers(0, colors, size=m).tolist()
    blocks = _blocks_from_labels(labels, colors)
    return Instance(m, Graphic(vertices, edges), Partition(blocks, [1] * len(blocks)), meta)


def _adjacency(rng, n, right, degree):
    return [sorted(set(rng.integers(0, right, size=degree).tolist())) for _ in range(n)]


def transversal_family(rng, spec: dict, meta: dict) -> Instance:
    n = int(spec.get("n", 10))
    right = int(spec.get("right", 5))
    degree = int(spec.get("degree", 2))
    if right < 1 or degree < 1:
        raise GenerationError("transversal instances need right >= 1 and degree >= 1")
    return Instance(n, Transversal(_adjacency(rng, n, right, degree)),
                    Transversal(_adjacency(rng, n, right, degree)), meta)


def mixed_family(rng, spec: dict, meta: dict) -> Instance:
    """Laminar constraints over the edges of a random graph, against its cycle matroid."""
    vertices = int(spec.get("vertices", 6))
    m = int(spec.get("edges", 2 * vertices))
    if vertices < 2:
        raise GenerationError("mixed instances need at least two vertices")
    us = rng.integers(0, vertices, size=m)
    ws = (us + rng.integers(1, vertices, size=m)) % vertices
    edges = list(zip(us.tolist(), ws.tolist()))
    nodes = _random_laminar_nodes(rng, rng.permutation(m).tolist(), int(spec.get("max_cap", 2)),
                                  int(spec.get("depth", 2)))
    return Instance(m, Laminar(m, nodes), Graphic(vertices, edges), meta)


LAMINAR17_NODES = [(range(10), 2), (range(14), 3), ((15, 16), 1), (range(17), 4)]


def laminar17() -> Laminar:
    """The 17-element laminar matroid with nested caps 2, 3, 4 and a pair capped at 1."""
    return Laminar(17, LAMINAR17_NODES)


def laminar17_instance() -> Instance:
    return Instance(17, laminar17(), Uniform(17, 4), {"family": "laminar17"})


def path3_instance() -> Instance:
    """Path a0-b0-a1-b1 as two partition matroids; element 1 is the middle edge."""
    return bipartite_instance([(0, 0), (1, 0), (1, 1)], {"family": "path3"})


FAMILIES: dict[str, Callable] = {
    "partition-bipartite": partition_bipartite,
    "laminar": laminar_family,
    "graphic": graphic_family,
    "transversal": transversal_family,
    "mixed": mixed_family,
}

FIXTURES = {"laminar17": laminar17_instance, "path3": path3_instance}


def gen_instance(family: str, size: dict | None = None, seed: int = 0) -> Instance:
    """Generate an instance of ``family`` from a size spec and a seed."""
    size = dict(size or {})
    if family in FIXTURES:
        return FIXTURES[family]()
    try:
        make = FAMILIES[family]
    except KeyError:
        raise GenerationError(
            f"unknown family {family!r}; choose from {sorted(FAMILIES) + sorted(FIXTURES)}") from None
    rng = np.random.default_rng(seed)
    meta = {"family": family, "seed": seed, "size": size}
    return make(rng, size, meta)
