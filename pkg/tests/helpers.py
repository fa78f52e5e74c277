"""Shared generators and brute-force oracles for the test suite."""

import itertools
import random
import time
from contextlib import contextmanager

from sandpile_ilp import linalg
from sandpile_ilp.graph import random_graph


def random_instance(seed, max_vertices=7, max_mult=2):
    """A random connected sinked graph and a random nonnegative configuration."""
    rng = random.Random(seed)
    n_vertices = rng.randint(2, max_vertices)
    g = random_graph(rng, n_vertices, max_mult=max_mult,
                     directed=rng.random() < 0.3, edge_prob=0.4)
    c = tuple(rng.randint(0, 2 * d) for d in g.degree_vector())
    return g, c


def box(g):
    """All configurations in [0, σmax]."""
    return itertools.product(*[range(s + 1) for s in g.sigma_max()])


def class_key(g, c):
    """Fractional part of c·Δq^{-1}; equal keys mean firing-equivalent."""
    w = linalg.solve_row(g.reduced_laplacian(), list(c))
    return tuple(v - (v.numerator // v.denominator) for v in w)


def brute_recurrents(g):
    """Recurrent configurations straight from the definition.

    Every class meets the box [0, σmax], so stabilizing ``deg + d`` for all d
    in the box reaches every recurrent configuration.
    """
    from sandpile_ilp.dynamics import stabilize
    found = set()
    for d in box(g):
        found.add(stabilize(g, tuple(s + 1 + x for s, x in zip(g.sigma_max(), d)),
                            policy="fifo").stable)
    return found


# criterion number -> (passed, detail); filled by the acceptance suite
ACCEPTANCE = {}


@contextmanager
def criterion(number, title):
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    start = time.perf_counter()
    info = {}
    try:
        yield info
    except BaseException as exc:
        line = f"criterion {number} FAIL {title}: {type(exc).__name__}: {exc}".splitlines()[0]
        ACCEPTANCE[number] = line
        print(line)
        raise
    elapsed = time.perf_counter() - start
    line = f"criterion {number} PASS {title} ({elapsed:.2f}s{', ' + info['detail'] if 'detail' in info else ''})"
    ACCEPTANCE[number] = line
    print(line)
