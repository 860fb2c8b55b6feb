"""Exhaustive cross-checks of the fast code paths on one instance.

Each scope compares a production routine with its enumeration oracle on
random subsets and stops at the first disagreement, recording everything
needed to replay it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..decomposition import (brute_force_decompose, brute_force_densest, decompose,
                             densest_subset, modification_violations)
from ..instance import Instance
from ..intersection import (DUAL_LIMIT, PRIMAL_LIMIT, brute_force_dual, brute_force_max_common,
                            dual_certificate, max_common_independent)
from ..matroids import MatroidView
from ..sfm import BRUTE_FORCE_LIMIT

SCOPES = ("ranks", "densest", "decomposition", "intersection", "dual", "lemmas")

LAMINAR17_LAYERS = [(frozenset(range(10)), 5), (frozenset(range(10, 14)), 4),
               (frozenset(range(14, 17)), 3), (frozenset(), 0)]


class OracleGateError(ValueError):
    """The instance is too large for exhaustive enumeration in this scope."""


@dataclass
class OracleReport:
    scope: str
    ok: bool = True
    checks: int = 0
    counterexample: Optional[dict] = None
    notes: list = field(default_factory=list)

    def fail(self, instance: Instance, seed: int, operation: str, **detail) -> None:
        self.ok = False
        self.counterexample = {"instance": instance.to_dict(), "seed": seed,
                               "operation": operation, **detail}

    def line(self) -> str:
        status = "pass" if self.ok else "FAIL"
        return f"scope={self.scope} {status} checks={self.checks}"


def _subset(rng, ground, keep: float = 0.6) -> frozenset:
    return frozenset(e for e in sorted(ground) if rng.random() < keep)


def _gate(instance: Instance, limit: int, scope: str) -> None:
    if instance.n > limit:
        raise OracleGateError(
            f"scope {scope!r} enumerates subsets and is limited to n <= {limit}; "
            f"this instance has n = {instance.n}")


def _check_ranks(inst, views, rng, trials, report, seed):
    n = inst.n
    for which, m in enumerate(views, start=1):
        for _ in range(trials):
            X, Y = _subset(rng, m.ground, 0.5), _subset(rng, m.ground, 0.5)
            rx, ry = m.rank(X), m.rank(Y)
            report.checks += 1
            if not (0 <= rx <= len(X) and m.rank(X | Y) >= max(rx, ry)
                    and rx + ry >= m.rank(X | Y) + m.rank(X & Y)):
                report.fail(inst, seed, f"rank axioms on matroid{which}",
                            X=sorted(X), Y=sorted(Y))
                return
            outside = sorted(m.ground - X)
            if outside:
                e = outside[int(rng.integers(len(outside)))]
                if m.rank(X | {e}) - rx not in (0, 1):
                    report.fail(inst, seed, f"unit increment on matroid{which}",
                                X=sorted(X), element=e)
                    return
        if n <= 8:
            elems = sorted(m.ground)
            for rA in range(n + 1):
                for A in itertools.combinations(elems, rA):
                    A = frozenset(A)
                    c = m.contract(A)
                    rank_a = m.rank(A)
                    for B in itertools.combinations(sorted(m.ground - A), min(2, n - rA)):
                        B = frozenset(B)
                        report.checks += 1
                        if c.rank(B) != m.rank(A | B) - rank_a:
                            report.fail(inst, seed, f"contraction identity on matroid{which}",
                                        A=sorted(A), B=sorted(B))
                            return


def _check_densest(inst, views, rng, trials, report, seed):
    for which, m in enumerate(views, start=1):
        for _ in range(trials):
            S = _subset(rng, m.ground)
            view = m.restrict(S)
            got, want = densest_subset(view), brute_force_densest(view)
            report.checks += 1
            if got != want:
                report.fail(inst, seed, f"densest_subset on matroid{which}", subset=sorted(S),
                            got=[sorted(got[0]), str(got[1])], want=[sorted(want[0]), str(want[1])])
                return


def _check_decomposition(inst, views, rng, trials, report, seed):
    if inst.metadata.get("family") == "laminar17":
        d = decompose(views[0])
        got = [(L.elements, L.density) for L in d.layers]
        report.checks += 1
        if got != LAMINAR17_LAYERS:
            report.fail(inst, seed, "laminar17 decomposition", got=d.lines())
            return
    k = inst.k
    for which, m in enumerate(views, start=1):
        for _ in range(trials):
            S = _subset(rng, m.ground)
            view = m.restrict(S)
            got, want = decompose(view, k), brute_force_decompose(view, k)
            report.checks += 1
            if got.layers != want.layers:
                report.fail(inst, seed, f"decompose on matroid{which}", subset=sorted(S),
                            got=got.lines(), want=want.lines())
                return


def _check_intersection(inst, views, rng, trials, report, seed):
    m1, m2 = views
    for _ in range(trials):
        S = _subset(rng, m1.ground, 0.8)
        got = max_common_independent(m1, m2, S, canonical=True)
        want = brute_force_max_common(m1, m2, S)
        report.checks += 1
        if got != want:
            report.fail(inst, seed, "max_common_independent", subset=sorted(S),
                        got=sorted(got), want=sorted(want))
            return


def _check_dual(inst, views, rng, trials, report, seed):
    m1, m2 = views
    for _ in range(trials):
        S = _subset(rng, m1.ground, 0.8)
        got = dual_certificate(m1, m2, S)
        want = brute_force_dual(m1, m2, S)
        report.checks += 1
        if got.value != want.value or got.c1 != want.c1:
            report.fail(inst, seed, "dual_certificate", subset=sorted(S),
                        got=[sorted(got.c1), got.value], want=[sorted(want.c1), want.value])
            return


def _check_lemmas(inst, views, rng, trials, report, seed):
    k = inst.k
    for which, m in enumerate(views, start=1):
        for _ in range(trials):
            S = _subset(rng, m.ground)
            u = int(rng.integers(inst.n))
            bad = modification_violations(m, S, u, k)
            report.checks += 1
            if bad:
                report.fail(inst, seed, f"modification on matroid{which}", subset=sorted(S),
                            element=u, violations=bad)
                return


_CHECKS = {
    "ranks": (_check_ranks, None),
    "densest": (_check_densest, BRUTE_FORCE_LIMIT),
    "decomposition": (_check_decomposition, BRUTE_FORCE_LIMIT),
    "intersection": (_check_intersection, PRIMAL_LIMIT),
    "dual": (_check_dual, DUAL_LIMIT),
    "lemmas": (_check_lemmas, None),
}


def oracle_check(instance: Instance, scope: str, trials: int = 20, seed: int = 0) -> OracleReport:
    """Run one oracle scope; raises :class:`OracleGateError` above its size gate."""
    if scope not in _CHECKS:
        raise ValueError(f"unknown scope {scope!r}; choose from {', '.join(SCOPES)}")
    check, limit = _CHECKS[scope]
    if limit is not None:
        _gate(instance, limit, scope)
    rng = np.random.default_rng(seed)
    report = OracleReport(scope)
    check(instance, instance.views(), rng, trials, report, seed)
    return report
