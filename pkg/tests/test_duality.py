import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sandpile_ilp import duality, linalg
from sandpile_ilp.errors import DimensionMismatch
from sandpile_ilp.graph import base_family, family, random_graph
from sandpile_ilp.lp import OPTIMAL, simplex_solve

C5 = family("cycle", 5)


def test_c5_certificate():
    cert = duality.certify_identity_relaxation(C5)
    assert cert.verdict == duality.CERTIFIED
    assert cert.primal_objective == cert.dual_objective == 10
    assert cert.to_dict()["primal_obj"] == "10"


def test_dual_lp_solved_independently():
    for g in (C5, family("complete", 4), random_graph(3, 5, directed=True)):
        primal = simplex_solve(duality.identity_relaxation(g))
        dual = simplex_solve(duality.build_dual_of_identity_relaxation(g))
        assert primal.status == dual.status == OPTIMAL
        assert primal.objective == dual.objective
        assert duality.dual_feasible(g, dual.point)


def test_verdicts():
    ok = duality.check_weak_duality(C5, (0, 0, 0, 0), duality.solved_dual_point(C5))
    assert ok.verdict == duality.GAP and ok.primal_objective < ok.dual_objective
    bad = duality.check_weak_duality(C5, (5, 0, 0, 0), duality.solved_dual_point(C5))
    assert bad.verdict == duality.INFEASIBLE and not bad.primal_feasible
    with pytest.raises(DimensionMismatch):
        duality.check_weak_duality(C5, (0, 0), (0,) * 8)


def test_certificate_json_rationals():
    g = family("cycle", 3)
    cert = duality.check_weak_duality(g, (Fraction(1, 3), 0), duality.solved_dual_point(g))
    d = cert.to_dict()
    assert d["primal"] == ["1/3", "0"]
    assert d["dual"] == ["1", "1", "0", "0"]


def _random_pair(rng, g):
    """A random feasible primal point and a random feasible dual point."""
    n = g.n
    L = g.reduced_laplacian()
    inv = linalg.inverse(L)
    b = [Fraction(rng.randint(0, 6 * s), 6) for s in g.sigma_max()]
    x = linalg.vecmat(b, inv)  # x·Δq = b within [0, σmax]
    # y+ = Δq^{-1}(1 + t), y- = -Δq^{-1} t for t >= 0 keeps Δq(y+ + y-) = 1
    t = [Fraction(rng.randint(0, 4), rng.randint(1, 3)) for _ in range(n)]
    ypos = linalg.matvec(inv, [1 + v for v in t])
    yneg = [-v for v in linalg.matvec(inv, t)]
    return x, tuple(ypos) + tuple(yneg)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_weak_duality_random_pairs(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(2, 6), directed=rng.random() < 0.4)
    x, y = _random_pair(rng, g)
    cert = duality.check_weak_duality(g, x, y)
    assert cert.primal_feasible and cert.dual_feasible
    assert cert.primal_objective <= cert.dual_objective


@pytest.mark.parametrize("name, n, r", [("cycle", 3, 2), ("complete", 4, 3),
                                        ("petersen", None, 3), ("complete", 2, 1),
                                        ("cycle", 6, 2)])
def test_cone_identity(name, n, r):
    rep = duality.verify_cone_identity(base_family(name, n), r)
    assert rep.agree
    assert rep.closed_form == (r,) * rep.graph.n
    assert rep.certificate.primal_objective == r * rep.graph.n
