"""Walk through the density decomposition of a small laminar matroid.

Seventeen elements: the first ten share a cap of 2, the first fourteen a cap
of 3, elements 15 and 16 a cap of 1, and everything a cap of 4.  The script
prints the layers, then inserts and deletes one element and shows how the
associated densities move.
"""

from dcsparse.decomposition import associated_densities, decompose
from dcsparse.harness.generate import laminar17
from dcsparse.matroids import MatroidView


def show(title, m, subset):
    d = decompose(m.restrict(subset), m.full_rank())
    print(f"-- {title} (|V'|={len(subset)})")
    for line in d.lines():
        print("  ", line)
    return associated_densities(m, d)


def main():
    m = MatroidView(laminar17())
    everything = frozenset(range(17))
    full = show("whole ground set", m, everything)

    # drop one element from the densest layer, then from the sparsest
    for u in (0, 16):
        smaller = everything - {u}
        after = show(f"without element {u}", m, smaller)
        moved = {v: f"{full[v]}->{after[v]}" for v in sorted(everything) if full[v] != after[v]}
        print(f"   densities that changed: {moved or 'none'}")


if __name__ == "__main__":
    main()
