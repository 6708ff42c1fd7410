import random

import pytest
from hypothesis import HealthCheck, settings

from exactmatch.generate import GeneratorSpec, generate
from exactmatch.graph import ColoredWeightedGraph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# a1=0, a2=1, b1=2, b2=3; a1b1 (2, red), a1b2 (1), a2b1 (1), a2b2 (3, red)
C4_EDGES = [(0, 2, 2, "r"), (0, 3, 1, "b"), (1, 2, 1, "b"), (1, 3, 3, "r")]


@pytest.fixture
def c4():
    return ColoredWeightedGraph.from_edges(4, C4_EDGES, bipartition=[0, 0, 1, 1])


def random_bipartite(seed, n, p=0.5, w_max=10, red_p=0.5):
    return generate(GeneratorSpec("random-bipartite-with-planted-pm", n, p, 1, w_max, red_p, seed))


def random_general(seed, n, p=0.5, w_max=10, red_p=0.5):
    return generate(GeneratorSpec("random-general-with-planted-pm", n, p, 1, w_max, red_p, seed))


def random_instances(count, seed, sizes, bipartite=True, **kw):
    rng = random.Random(seed)
    make = random_bipartite if bipartite else random_general
    for i in range(count):
        yield make(seed * 100_003 + i, rng.choice(sizes), **kw)
