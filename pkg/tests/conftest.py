import itertools
import random
from fractions import Fraction

import pytest

from shadowing.core import (FiniteMetricSpace, FiniteMetricSystem,
                            discrete_space, line_space)


def all_systems_up_to(max_n, metrics=("line", "discrete")):
    """Every map on every space with at most max_n points, both metric
    families."""
    out = []
    for n in range(1, max_n + 1):
        for kind in metrics:
            if n == 1 and kind == "discrete":
                continue  # identical to the line space on one point
            space = line_space(n) if kind == "line" else discrete_space(n)
            for fmap in itertools.product(range(n), repeat=n):
                out.append(FiniteMetricSystem(
                    space, fmap, name="%s%d-%s" % (kind, n,
                                                   "".join(map(str, fmap)))))
    return out


def random_corpus(count, max_n, seed=0):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(2, max_n)
        fmap = tuple(rng.randrange(n) for _ in range(n))
        kind = rng.choice(("line", "discrete", "weighted"))
        if kind == "line":
            space = line_space(n)
        elif kind == "discrete":
            space = discrete_space(n)
        else:
            # a random ultrametric-free valid metric: shortest-path closure
            # of random positive edge weights
            w = [[Fraction(0)] * n for _ in range(n)]
            for a in range(n):
                for b in range(a + 1, n):
                    w[a][b] = w[b][a] = Fraction(rng.randint(1, 8), 4)
            for k in range(n):
                for a in range(n):
                    for b in range(n):
                        if w[a][k] + w[k][b] < w[a][b]:
                            w[a][b] = w[a][k] + w[k][b]
            space = FiniteMetricSpace(tuple(str(j) for j in range(n)),
                                      tuple(tuple(r) for r in w))
        out.append(FiniteMetricSystem(space, fmap,
                                      name="r%03d-%s-%d" % (i, kind, n)))
    return out


CRITERION_LINES = []


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_exhaustive():
    return all_systems_up_to(3)


@pytest.fixture(scope="session")
def medium_random():
    return random_corpus(60, 4, seed=11)
