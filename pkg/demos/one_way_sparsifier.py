"""Alice sends a density-constrained subset, Bob finishes the job.

On a rank-2 bipartite multigraph with many parallel edges, Alice's side is
far larger than the optimum.  The script shows how much of it survives in the
message and that Bob still recovers a maximum common independent set.
"""

from fractions import Fraction

import numpy as np

from dcsparse.dcs import choose_params
from dcsparse.harness.generate import gen_instance
from dcsparse.intersection import max_common_independent
from dcsparse.protocols import format_ratio, one_way_run


def main(seeds=range(8)):
    inst = gen_instance("partition-bipartite", {"left": 2, "edges": 200}, 0)
    m1, m2 = inst.views()
    mu = len(max_common_independent(m1, m2))
    p = choose_params(Fraction(1, 4))
    print(f"n={inst.n} mu={mu} beta={p.beta} beta_minus={p.beta_minus}")
    print(f"{'seed':>4} {'|V_A|':>6} {'message':>8} {'bound':>6} {'ratio':>6}")
    for seed in seeds:
        rng = np.random.default_rng(seed)
        keep = rng.uniform(0.3, 1.0)
        v_a = frozenset(e for e in range(inst.n) if rng.random() < keep)
        t = one_way_run(m1, m2, v_a, params=p, mu=mu)
        print(f"{seed:>4} {len(v_a):>6} {t.message_size:>8} {p.beta * mu:>6} "
              f"{format_ratio(t.ratio):>6}")


if __name__ == "__main__":
    main()
