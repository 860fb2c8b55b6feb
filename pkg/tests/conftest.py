import random

import pytest
from hypothesis import settings

from dcsparse.matroids import (Graphic, Laminar, MatroidView, Partition, Transversal, Truncated,
                               Uniform, ValidationError)

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_laminar(rng: random.Random, n: int, max_cap: int = 3) -> Laminar:
    while True:
        nodes = []
        for _ in range(rng.randint(0, 4)):
            a = rng.randint(0, n - 1)
            b = rng.randint(a, n - 1)
            nodes.append((range(a, b + 1), rng.randint(1, max_cap)))
        try:
            return Laminar(n, nodes)
        except ValidationError:
            continue


def random_partition(rng: random.Random, n: int) -> Partition:
    perm = list(range(n))
    rng.shuffle(perm)
    count = rng.randint(1, n)
    blocks = [perm[i::count] for i in range(count)]
    return Partition(blocks, [rng.randint(1, len(b)) for b in blocks])


def random_graphic(rng: random.Random, n: int, vertices: int = 5) -> Graphic:
    return Graphic(vertices, [tuple(rng.sample(range(vertices), 2)) for _ in range(n)])


def random_transversal(rng: random.Random, n: int, right: int = 5) -> Transversal:
    return Transversal([rng.sample(range(right), rng.randint(1, 2)) for _ in range(n)])


def random_descriptor(rng: random.Random, n: int, kind: str | None = None):
    kind = kind or rng.choice(["uniform", "partition", "laminar", "graphic", "transversal",
                               "truncated"])
    if kind == "uniform":
        return Uniform(n, rng.randint(1, n))
    if kind == "partition":
        return random_partition(rng, n)
    if kind == "laminar":
        return random_laminar(rng, n)
    if kind == "graphic":
        return random_graphic(rng, n)
    if kind == "transversal":
        return random_transversal(rng, n)
    inner = random_descriptor(rng, n, rng.choice(["partition", "laminar", "graphic", "transversal"]))
    return Truncated(inner, rng.randint(1, n))


FAMILIES = ["uniform", "partition", "laminar", "graphic", "transversal", "truncated"]


@pytest.fixture
def rng():
    return random.Random(12345)


def view(desc):
    return MatroidView(desc)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
