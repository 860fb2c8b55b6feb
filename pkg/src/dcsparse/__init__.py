"""Density-constrained subsets for matroid intersection.

Rank oracles, greedy density decompositions, DCS construction, exact
matroid intersection, and the one-way and random-order streaming protocols
built on them.
"""

__version__ = "0.1.0"
