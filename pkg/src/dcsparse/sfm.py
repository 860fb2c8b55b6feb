"""Exact submodular function minimisation.

Two routes, both returning the *maximal* minimiser:

* :func:`brute_force_minimize` enumerates every subset (gated at 18 elements).
* :func:`min_norm_point_minimize` runs the Fujishige-Wolfe minimum-norm-point
  method over the base polytope in exact rational arithmetic.  With ``x*``
  the minimum-norm base, ``{e : x*_e <= 0}`` is the maximal minimiser.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable, Iterable, Sequence

SetFunction = Callable[[frozenset], Fraction]

BRUTE_FORCE_LIMIT = 18
AUTO_BRUTE_FORCE = 10


class SubmodularityError(ArithmeticError):
    """Raised in debug mode when a supplied function is not submodular."""


def brute_force_minimize(f: SetFunction, ground: Iterable[int]) -> tuple[frozenset, Fraction]:
    ground = sorted(ground)
    if len(ground) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"exhaustive minimisation is gated at {BRUTE_FORCE_LIMIT} elements")
    best_val = None
    best: frozenset = frozenset()
    for size in range(len(ground) + 1):
        for combo in itertools.combinations(ground, size):
            U = frozenset(combo)
            val = f(U)
            if best_val is None or val < best_val:
                best_val, best = val, U
            elif val == best_val:
                # minimisers of a submodular function are closed under union
                best = best | U
    return best, f(best)


def _greedy_vertex(f: SetFunction, order: Sequence[int], index: dict) -> list:
    x = [Fraction(0)] * len(order)
    prefix: set = set()
    prev = f(frozenset())
    for e in order:
        prefix.add(e)
        cur = f(frozenset(prefix))
        x[index[e]] = cur - prev
        prev = cur
    return x


def _dot(a, b):
    return sum(p * q for p, q in zip(a, b))


def _affine_minimizer(points: list[list]) -> list:
    """Barycentric coefficients of the min-norm point of the affine hull."""
    m = len(points)
    # [[P P^T, 1], [1^T, 0]] [alpha; mu] = [0; 1]
    size = m + 1
    A = [[Fraction(0)] * (size + 1) for _ in range(size)]
    for i in range(m):
        for j in range(i, m):
            g = _dot(points[i], points[j])
            A[i][j] = g
            A[j][i] = g
        A[i][m] = Fraction(1)
        A[m][i] = Fraction(1)
    A[m][size] = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if A[r][col] != 0), None)
        if pivot is None:
            raise ArithmeticError("affinely dependent point set in min-norm-point iteration")
        A[col], A[pivot] = A[pivot], A[col]
        pv = A[col][col]
        row = [v / pv for v in A[col]]
        A[col] = row
        for r in range(size):
            if r != col and A[r][col] != 0:
                factor = A[r][col]
                A[r] = [a - factor * b for a, b in zip(A[r], row)]
    return [A[i][size] for i in range(m)]


def _combine(coeffs, points):
    n = len(points[0])
    out = [Fraction(0)] * n
    for c, p in zip(coeffs, points):
        if c:
            for i in range(n):
                out[i] += c * p[i]
    return out


def min_norm_point_minimize(f: SetFunction, ground: Iterable[int],
                            max_iter: int = 100_000) -> tuple[frozenset, Fraction]:
    ground = sorted(ground)
    if not ground:
        return frozenset(), Fraction(0)
    index = {e: i for i, e in enumerate(ground)}
    x = _greedy_vertex(f, ground, index)
    points = [x]
    lam = [Fraction(1)]
    for _ in range(max_iter):
        order = sorted(ground, key=lambda e: (x[index[e]], e))
        q = _greedy_vertex(f, order, index)
        if _dot(x, x) <= _dot(x, q) or q in points:
            break
        points.append(q)
        lam.append(Fraction(0))
        while True:
            alpha = _affine_minimizer(points)
            if all(a >= 0 for a in alpha):
                keep = [i for i, a in enumerate(alpha) if a > 0]
                points = [points[i] for i in keep]
                lam = [alpha[i] for i in keep]
                x = _combine(lam, points)
                break
            theta = min(l / (l - a) for l, a in zip(lam, alpha) if a < 0)
            lam = [(1 - theta) * l + theta * a for l, a in zip(lam, alpha)]
            keep = [i for i, l in enumerate(lam) if l > 0]
            points = [points[i] for i in keep]
            lam = [lam[i] for i in keep]
            x = _combine(lam, points)
    else:
        raise RuntimeError("min-norm-point iteration did not converge")
    minimizer = frozenset(e for e in ground if x[index[e]] <= 0)
    return minimizer, f(minimizer)


def check_submodular(f: SetFunction, ground: Iterable[int], trials: int = 200,
                     seed: int = 0) -> None:
    """Spot-check ``f(A+e) - f(A) >= f(B+e) - f(B)`` on random ``A <= B``."""
    ground = sorted(ground)
    rng = random.Random(seed)
    if f(frozenset()) != 0:
        raise SubmodularityError("f(empty) must be 0")
    for _ in range(trials):
        if not ground:
            return
        B = frozenset(e for e in ground if rng.random() < 0.5)
        A = frozenset(e for e in B if rng.random() < 0.5)
        outside = [e for e in ground if e not in B]
        if not outside:
            continue
        e = rng.choice(outside)
        if f(A | {e}) - f(A) < f(B | {e}) - f(B):
            raise SubmodularityError(
                f"diminishing returns fails for A={sorted(A)}, B={sorted(B)}, e={e}")


def minimize_submodular(f: SetFunction, ground: Iterable[int], method: str = "auto",
                        debug: bool = False) -> tuple[frozenset, Fraction]:
    """Maximal minimiser of a submodular ``f`` with ``f(empty) = 0``.

    ``method`` is ``"brute"``, ``"mnp"`` or ``"auto"`` (enumeration for tiny
    grounds, min-norm-point otherwise).
    """
    ground = frozenset(ground)
    if debug:
        check_submodular(f, ground)
    if method == "auto":
        method = "brute" if len(ground) <= AUTO_BRUTE_FORCE else "mnp"
    if method == "brute":
        return brute_force_minimize(f, ground)
    if method == "mnp":
        return min_norm_point_minimize(f, ground)
    raise ValueError(f"unknown minimisation method {method!r}")
