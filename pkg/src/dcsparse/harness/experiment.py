"""Experiment plans: fan runs out over instances, epsilons and seeds.

Results go to a line-delimited JSON file.  The first line is a header
record; every run adds one record, failed runs included, and the human
summary table is rendered separately from the same records.
"""

from __future__ import annotations

import json
import os
import time
import traceback
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from ..dcs import DcsParams, build_dcs, check_dcs, choose_params
from ..instance import Instance
from ..intersection import greedy_maximal, max_common_independent
from ..protocols import StreamConfig, format_ratio, one_way_run, ratio, stream_order, stream_run
from .generate import gen_instance

SCHEMA = "dcsparse.result/1"
WORKERS_ENV = "DCSPARSE_WORKERS"
ALGORITHMS = ("exact", "greedy", "dcs", "stream", "communicate")
# algorithms whose outcome does not depend on the seed
SEEDLESS = ("exact", "dcs")


@dataclass
class ExperimentPlan:
    instances: list
    epsilons: list = field(default_factory=lambda: ["1/4"])
    seeds: list = field(default_factory=list)
    algorithms: list = field(default_factory=lambda: ["exact", "greedy"])
    output: str = "results.jsonl"
    beta: Optional[int] = None
    beta_minus: Optional[int] = None

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentPlan":
        seeds = data.get("seeds", [])
        if isinstance(seeds, dict):
            seeds = list(range(int(seeds["start"]), int(seeds["stop"])))
        plan = cls(instances=list(data["instances"]),
                   epsilons=[str(e) for e in data.get("epsilons", ["1/4"])],
                   seeds=[int(s) for s in seeds],
                   algorithms=list(data.get("algorithms", ["exact", "greedy"])),
                   output=data.get("output", "results.jsonl"),
                   beta=data.get("beta"), beta_minus=data.get("beta_minus"))
        unknown = set(plan.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}")
        for e in plan.epsilons:
            plan.params_for(e)
        return plan

    @classmethod
    def load(cls, path) -> "ExperimentPlan":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return {"instances": self.instances, "epsilons": self.epsilons, "seeds": self.seeds,
                "algorithms": self.algorithms, "output": self.output,
                "beta": self.beta, "beta_minus": self.beta_minus}

    def params_for(self, epsilon: str) -> DcsParams:
        eps = Fraction(epsilon)
        if self.beta is not None:
            return DcsParams(int(self.beta), int(self.beta_minus), eps)
        return choose_params(eps)


def _label(spec: dict) -> str:
    if "path" in spec:
        return str(spec["path"])
    size = ",".join(f"{k}={v}" for k, v in sorted(spec.get("size", {}).items()))
    return f"{spec['family']}[{size}]#{spec.get('seed', 0)}"


def _load(spec: dict) -> Instance:
    if "path" in spec:
        return Instance.load(spec["path"])
    return gen_instance(spec["family"], spec.get("size"), int(spec.get("seed", 0)))


_MU_CACHE: dict = {}


def _mu(label: str, inst: Instance) -> int:
    if label not in _MU_CACHE:
        m1, m2 = inst.views()
        _MU_CACHE[label] = len(max_common_independent(m1, m2))
    return _MU_CACHE[label]


def run_task(task: dict) -> dict:
    """Execute one planned run; exceptions become error records."""
    spec, algo, eps, seed = task["instance"], task["algorithm"], task["epsilon"], task["seed"]
    label = _label(spec)
    rec = {"schema": SCHEMA, "kind": "run", "instance": label, "algorithm": algo,
           "epsilon": eps, "seed": seed}
    start = time.perf_counter()
    try:
        inst = _load(spec)
        m1, m2 = inst.views()
        mu = _mu(label, inst)
        p = ExperimentPlan.from_dict(task["plan"]).params_for(eps)
        rec["mu"] = mu
        if algo == "exact":
            size = mu
        elif algo == "greedy":
            size = len(greedy_maximal(m1, m2, stream_order(inst.n, seed)))
            rec["check"] = bool(ratio(mu, size) <= 2)
        elif algo == "dcs":
            state = build_dcs(m1, m2, p, mu=mu)
            size = len(max_common_independent(m1, m2, state.v_prime))
            rec.update(v_prime=len(state.v_prime), steps=state.step_count,
                       check=check_dcs(state.v_prime, m1, m2, p).ok)
        elif algo == "stream":
            r = stream_run(m1, m2, StreamConfig(Fraction(eps), p, seed, mu=mu))
            size = r.output_size
            rec.update(peak=r.stored_peak, fallback=r.fallback_triggered,
                       phase1=r.phase1_elements_consumed, underfull=r.underfull_collected)
        elif algo == "communicate":
            rng = np.random.default_rng(seed)
            v_a = frozenset(e for e in range(inst.n) if rng.random() < 0.5)
            t = one_way_run(m1, m2, v_a, params=p, mu=mu)
            size = len(t.output)
            rec["message"] = t.message_size
        else:
            raise ValueError(f"unknown algorithm {algo!r}")
        rec["size"] = size
        rec["ratio"] = format_ratio(ratio(mu, size))
    except Exception as exc:  # isolate failures per run
        rec["error"] = f"{type(exc).__name__}: {exc}"
        rec["traceback"] = traceback.format_exc()
        rec["replay"] = {"instance": spec, "algorithm": algo, "epsilon": eps, "seed": seed}
    rec["seconds"] = round(time.perf_counter() - start, 4)
    return rec


def plan_tasks(plan: ExperimentPlan) -> list[dict]:
    tasks = []
    for spec in plan.instances:
        for algo in plan.algorithms:
            epsilons = plan.epsilons if algo != "exact" and algo != "greedy" else plan.epsilons[:1]
            for eps in epsilons:
                seeds = plan.seeds[:1] if algo in SEEDLESS else plan.seeds
                for seed in seeds:
                    tasks.append({"instance": spec, "algorithm": algo, "epsilon": eps,
                                  "seed": seed, "plan": plan.to_dict()})
    return tasks


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_experiment(plan: ExperimentPlan, workers: Optional[int] = None) -> list[dict]:
    """Run every planned task and write the results file; returns the run records."""
    workers = worker_count() if workers is None else workers
    tasks = plan_tasks(plan)
    out = Path(plan.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    records = []
    with out.open("w") as fh:
        fh.write(json.dumps({"schema": SCHEMA, "kind": "header", "plan": plan.to_dict(),
                             "runs": len(tasks)}, sort_keys=True) + "\n")
        if workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = pool.map(run_task, tasks)
                for rec in results:
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")
                    records.append(rec)
        else:
            for task in tasks:
                rec = run_task(task)
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
                records.append(rec)
    return records


def summarize(records: list[dict]) -> list[dict]:
    groups: dict = defaultdict(list)
    for rec in records:
        if rec.get("kind") != "run":
            continue
        groups[(rec["instance"], rec["algorithm"], rec["epsilon"])].append(rec)
    rows = []
    for (inst, algo, eps), recs in sorted(groups.items()):
        ok = [r for r in recs if "error" not in r]
        ratios = [Fraction(r["ratio"]) for r in ok if r["ratio"] != "inf"]
        bound = Fraction(3, 2) + Fraction(eps)
        rows.append({
            "instance": inst, "algorithm": algo, "epsilon": eps, "runs": len(recs),
            "errors": len(recs) - len(ok),
            "mean": float(sum(ratios) / len(ratios)) if ratios else None,
            "min": float(min(ratios)) if ratios else None,
            "max": float(max(ratios)) if ratios else None,
            "tail": (sum(1 for r in ratios if r > bound) / len(ratios)) if ratios else None,
            "failed_checks": sum(1 for r in ok if r.get("check") is False),
        })
    return rows


def render_table(rows: list[dict]) -> str:
    head = ["instance", "algorithm", "epsilon", "runs", "errors", "mean", "min", "max", "tail",
            "failed_checks"]

    def cell(v):
        if v is None:
            return "-"
        if isinstance(v, float):
            return f"{v:.4f}"
        return str(v)

    table = [head] + [[cell(r[h]) for h in head] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(head))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in table]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
