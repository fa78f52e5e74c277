"""Weak-duality certificates for the relaxation of the identity program.

The relaxation is ``max 1·x  s.t.  0 <= x·Δq <= σmax`` with x free.  Its dual,
kept in split form, is::

    min   (σmax | 0)·y
    s.t.  [Δq  Δq]·y = 1        (y as a column of length 2n)
          y[:n] >= 0,  y[n:] <= 0

Any feasible pair satisfies ``1·x <= (σmax | 0)·y``; equality certifies both.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .dynamics import recurrent_rep_dynamics
from .errors import CrossCheckMismatch, DimensionMismatch
from .graph import cone_of_regular
from .lp import EQ, LinearProgram, simplex_solve
from .models import build_identity_model, solve_identity

CERTIFIED, GAP, INFEASIBLE = "certified", "gap", "infeasible"


@dataclass(frozen=True)
class DualCertificate:
    primal_point: tuple
    dual_point: tuple
    primal_objective: Fraction
    dual_objective: Fraction
    verdict: str
    primal_feasible: bool = True
    dual_feasible: bool = True

    def to_dict(self):
        s = lambda v: str(Fraction(v))
        return {"primal": [s(v) for v in self.primal_point],
                "dual": [s(v) for v in self.dual_point],
                "primal_obj": s(self.primal_objective),
                "dual_obj": s(self.dual_objective),
                "verdict": self.verdict}

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)


def build_dual_of_identity_relaxation(g):
    n = g.n
    L = g.reduced_laplacian()
    rows = tuple(tuple(row) + tuple(row) for row in L)
    sigma = g.sigma_max()
    return LinearProgram(
        "min", tuple(sigma) + (0,) * n, rows, (EQ,) * n, (1,) * n,
        lower=(0,) * n + (None,) * n, upper=(None,) * n + (0,) * n,
        names=tuple(f"y+_{v}" for v in g.nonsink) + tuple(f"y-_{v}" for v in g.nonsink))


def identity_relaxation(g):
    """The identity program with integrality dropped."""
    lp = build_identity_model(g)
    n = g.n
    return LinearProgram(lp.sense, lp.objective, lp.rows, lp.relations, lp.rhs,
                         (None,) * n, (None,) * n, (False,) * n, lp.names)


def solved_dual_point(g):
    """``(Δq^{-1}·1, 0)``: feasible for the dual since Δq^{-1} >= 0."""
    y = linalg.solve(g.reduced_laplacian(), [1] * g.n)
    return tuple(y) + (Fraction(0),) * g.n


def primal_feasible(g, x):
    y = linalg.vecmat(list(x), g.reduced_laplacian())
    return all(0 <= a <= s for a, s in zip(y, g.sigma_max()))


def dual_feasible(g, y):
    n = g.n
    L = g.reduced_laplacian()
    pos, neg = list(y[:n]), list(y[n:])
    if any(v < 0 for v in pos) or any(v > 0 for v in neg):
        return False
    lhs = [a + b for a, b in zip(linalg.matvec(L, pos), linalg.matvec(L, neg))]
    return all(v == 1 for v in lhs)


def check_weak_duality(g, primal_x, dual_y):
    """Check a primal/dual pair for the identity relaxation exactly."""
    n = g.n
    if len(primal_x) != n or len(dual_y) != 2 * n:
        raise DimensionMismatch(
            f"expected primal of length {n} and dual of length {2 * n}, "
            f"got {len(primal_x)} and {len(dual_y)}")
    x = tuple(Fraction(v) for v in primal_x)
    y = tuple(Fraction(v) for v in dual_y)
    p_obj = sum(x, Fraction(0))
    d_obj = sum((s * v for s, v in zip(g.sigma_max(), y[:n])), Fraction(0))
    pf, df = primal_feasible(g, x), dual_feasible(g, y)
    if not (pf and df):
        verdict = INFEASIBLE
    elif p_obj == d_obj:
        verdict = CERTIFIED
    else:
        verdict = GAP
    return DualCertificate(x, y, p_obj, d_obj, verdict, pf, df)


def certify_identity_relaxation(g):
    """Solve the relaxation with the simplex and certify it with the solved dual point."""
    sol = simplex_solve(identity_relaxation(g))
    return check_weak_duality(g, sol.point, solved_dual_point(g))


@dataclass(frozen=True)
class ConeIdentityReport:
    graph: object
    r: int
    ones_preimage_ok: bool
    closed_form: tuple
    ilp_point: tuple
    ilp_identity: tuple
    dynamics_identity: tuple
    certificate: DualCertificate

    @property
    def agree(self):
        return (self.ones_preimage_ok and self.certificate.verdict == CERTIFIED
                and self.closed_form == self.ilp_identity == self.dynamics_identity
                and self.ilp_point == self.closed_form)

    def to_dict(self):
        return {"vertices": list(self.graph.nonsink), "r": self.r,
                "laplacian_times_ones_is_ones": self.ones_preimage_ok,
                "closed_form": list(self.closed_form),
                "ilp_point": list(self.ilp_point),
                "ilp_identity": list(self.ilp_identity),
                "dynamics_identity": list(self.dynamics_identity),
                "certificate": self.certificate.to_dict(),
                "agree": self.agree}


def verify_cone_identity(base, r=None, apex="apex"):
    """Check that ``r·1`` is the identity of the cone over an r-regular base.

    Four routes are compared: the closed form, the identity ILP, the dynamics
    construction, and a weak-duality certificate for ``x = r·1``,
    ``y = (1, 0)``.
    """
    g, deg = cone_of_regular(base, apex)
    if r is not None and r != deg:
        raise CrossCheckMismatch(f"base is {deg}-regular, not {r}-regular")
    n = g.n
    ones = linalg.matvec(g.reduced_laplacian(), [1] * n)
    closed = (deg,) * n
    cert = check_weak_duality(g, closed, (1,) * n + (0,) * n)
    x, ident, _ = solve_identity(g)
    dyn = recurrent_rep_dynamics(g, (0,) * n)
    return ConeIdentityReport(g, deg, ones == [1] * n, closed, x, ident, dyn, cert)
