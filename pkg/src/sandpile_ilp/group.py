"""Sandpile group API: identity, representatives, orders, structure, energy.

Routes that can be checked against each other are: the ILP route
(:mod:`sandpile_ilp.models`), the dynamics route
(:mod:`sandpile_ilp.dynamics`) and, for orders, the exact lcm of
denominators of ``c·Δq^{-1}``.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .dynamics import (is_recurrent, oplus, positive_preimage_h,
                       recurrent_firing, stabilize)
from .errors import CrossCheckMismatch, DimensionMismatch, OutOfRange
from .models import group_order, lcm_order, solve_identity, solve_order, solve_recurrent


@dataclass(frozen=True)
class GroupStructure:
    invariant_factors: tuple
    group_order: int


@dataclass(frozen=True)
class GroupElement:
    recurrent: tuple
    order: int


def _check(g, c):
    if len(c) != g.n:
        raise DimensionMismatch(f"vector has length {len(c)}, graph has {g.n} non-sink vertices")


def identity(g):
    """Identity of SP(G, q); the ILP and dynamics routes must agree."""
    _, ilp, _ = solve_identity(g)
    dyn = recurrent_firing(g, (0,) * g.n)[0]
    if ilp != dyn:
        raise CrossCheckMismatch(f"identity: ILP gives {ilp}, dynamics gives {dyn}")
    return ilp


def shift_nonnegative(g, c):
    """Add the least multiple ``t·h·Δq = t·L·1`` making ``c`` nonnegative."""
    _, L = positive_preimage_h(g)
    t = max([0] + [-(x // L) for x in c if x < 0])
    return tuple(x + t * L for x in c)


def recurrent_representative(g, c, check=True):
    """The recurrent configuration equivalent to the chip vector ``c``.

    Negative entries are lifted by :func:`shift_nonnegative`, the result is
    stabilized, and the recurrent program is solved.  With ``check`` the
    dynamics construction must give the same answer.
    """
    _check(g, c)
    base = stabilize(g, shift_nonnegative(g, tuple(c)), policy="bulk").stable
    _, rec, _ = solve_recurrent(g, base)
    if check:
        dyn = recurrent_firing(g, tuple(c))[0]
        if dyn != rec:
            raise CrossCheckMismatch(f"recurrent rep of {tuple(c)}: ILP {rec}, dynamics {dyn}")
    return rec


def inverse(g, c):
    """Recurrent representative of ``-[c]``."""
    return recurrent_representative(g, tuple(-x for x in c))


def order(g, c):
    """Order of ``[c]``: least d with ``d·c`` in the row lattice of Δq."""
    _check(g, c)
    return lcm_order(g, c)


def order_ilp(g, c):
    """Order of ``[c]`` from the order program (branch-and-bound)."""
    _check(g, c)
    return solve_order(g, c)[0]


def order_by_sum(g, c, limit=64):
    """Least k <= limit with the k-fold sandpile sum of rep(c) equal to the
    identity, or None if there is none."""
    r = recurrent_representative(g, c, check=False)
    e = recurrent_firing(g, (0,) * g.n)[0]
    acc = r
    for k in range(1, limit + 1):
        if acc == e:
            return k
        acc = oplus(g, acc, r)
    return None


def generators(g):
    """Recurrent representatives and orders of the classes of the unit vectors."""
    out = []
    for i in range(g.n):
        e = tuple(int(i == j) for j in range(g.n))
        out.append(GroupElement(recurrent_representative(g, e), order(g, e)))
    return out


def group_structure(g):
    factors = [d for d in linalg.invariant_factors(g.reduced_laplacian()) if d != 1]
    return GroupStructure(tuple(factors), group_order(g))


def energy(g, c, convention="column"):
    """``‖Δq^{-1}·c‖²`` with c as a column vector, or ``‖c·Δq^{-1}‖²`` with
    ``convention="row"``.

    For undirected graphs Δq is symmetric and the two agree.  On directed
    graphs only the row form is guaranteed to be minimized by superstables.
    """
    _check(g, c)
    if convention == "column":
        u = linalg.solve(g.reduced_laplacian(), list(c))
    elif convention == "row":
        u = linalg.solve_row(g.reduced_laplacian(), list(c))
    else:
        raise ValueError(f"convention must be 'column' or 'row', got {convention!r}")
    return sum((v * v for v in u), Fraction(0))


def is_superstable(g, c):
    _check(g, c)
    sigma = g.sigma_max()
    if any(x < 0 or x > s for x, s in zip(c, sigma)):
        raise OutOfRange(f"{tuple(c)} is not within [0, σmax] = [0, {sigma}]")
    return is_recurrent(g, tuple(s - x for s, x in zip(sigma, c)))


def superstable_representative(g, c):
    """The superstable configuration equivalent to ``c``: σmax - rep(σmax - s(c))."""
    _check(g, c)
    sigma = g.sigma_max()
    s = stabilize(g, shift_nonnegative(g, tuple(c)), policy="bulk").stable
    r = recurrent_representative(g, tuple(a - b for a, b in zip(sigma, s)))
    return tuple(a - b for a, b in zip(sigma, r))


def equivalent(g, c, d):
    """Firing equivalence: ``(c - d)·Δq^{-1}`` is integral."""
    diff = [a - b for a, b in zip(c, d)]
    return all(v.denominator == 1 for v in linalg.solve_row(g.reduced_laplacian(), diff))
