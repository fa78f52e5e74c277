"""Integer programs for stabilization, recurrent representatives, the
identity and element orders, plus thin solve wrappers.

All four programs have integer variables ``x`` indexed like configurations,
entering the constraints through ``x·Δq``.  Every variable is boxed before
branch-and-bound; the boxes come from ``Δq^{-1} >= 0`` entrywise, so
``a <= x·Δq <= b`` implies ``a·Δq^{-1} <= x <= b·Δq^{-1}``.
"""

from functools import lru_cache
from math import ceil, floor

from . import linalg
from .dynamics import stabilize
from .errors import CrossCheckMismatch, DimensionMismatch
from .lp import EQ, GE, LE, OPTIMAL, LinearProgram, branch_and_bound


@lru_cache(maxsize=None)
def _inverse(g):
    return tuple(tuple(row) for row in linalg.inverse(g.reduced_laplacian()))


def laplacian_inverse(g):
    """Exact ``Δq^{-1}`` (memoized per graph, returned as a fresh list)."""
    return [list(row) for row in _inverse(g)]


@lru_cache(maxsize=None)
def group_order(g):
    """``|det Δq|``, the number of recurrent configurations."""
    return abs(linalg.det(g.reduced_laplacian()))


def _columns(g):
    return linalg.transpose(g.reduced_laplacian())


def _sandwich(g, c, lo_vec, hi_vec, sense, offset_sign, nonnegative=False):
    """Program ``lo <= c + s·x·Δq <= hi`` with ``s = offset_sign``."""
    n = g.n
    cols = _columns(g)
    inv = _inverse(g)
    rows, rels, rhs = [], [], []
    s = offset_sign
    for j in range(n):
        coeffs = [s * a for a in cols[j]]
        rows += [coeffs, coeffs]
        rels += [GE, LE]
        rhs += [lo_vec[j] - c[j], hi_vec[j] - c[j]]
    # s·x·Δq ranges over [lo - c, hi - c]
    a = [s * (lv - cv) for lv, cv in zip(lo_vec, c)]
    b = [s * (hv - cv) for hv, cv in zip(hi_vec, c)]
    if s < 0:
        a, b = b, a
    lower = [ceil(v) for v in linalg.vecmat(a, inv)]
    if nonnegative:
        lower = [max(0, v) for v in lower]
    upper = [floor(v) for v in linalg.vecmat(b, inv)]
    return LinearProgram(sense, (1,) * n, tuple(map(tuple, rows)), tuple(rels), tuple(rhs),
                         tuple(lower), tuple(upper), (True,) * n,
                         tuple(f"x_{v}" for v in g.nonsink))


def _check(g, c):
    if len(c) != g.n:
        raise DimensionMismatch(f"vector has length {len(c)}, graph has {g.n} non-sink vertices")


def build_stabilization_model(g, c, sense="min"):
    """``sense 1·x  s.t.  0 <= c - x·Δq <= σmax``, x >= 0 integral.

    With ``sense="min"`` the optimum is the stabilization odometer.  The
    sign constraint matters: without it, un-firing can reach another stable
    configuration of the class with a smaller total (on C5, ``c = 0`` and
    ``x = -(2,3,3,2)`` give ``(1,1,1,1)``).
    ``sense="max"`` is the sense as literally printed alongside this program;
    its optimum generally differs (see README).
    """
    _check(g, c)
    return _sandwich(g, tuple(c), (0,) * g.n, g.sigma_max(), sense, -1, nonnegative=True)


def build_recurrent_model(g, c):
    """``max 1·x  s.t.  0 <= c + x·Δq <= σmax``, x integral, for stable c >= 0.

    An unstable ``c`` is stabilized first; the program is then stated for
    ``s(c)``.
    """
    _check(g, c)
    c = tuple(c)
    if any(x >= d for x, d in zip(c, g.degree_vector())):
        c = stabilize(g, c, policy="bulk").stable
    return _sandwich(g, c, (0,) * g.n, g.sigma_max(), "max", 1)


def build_identity_model(g):
    return build_recurrent_model(g, (0,) * g.n)


def build_order_model(g, c):
    """``min d  s.t.  x·Δq = d·c``, d >= 1, (d, x) integral.

    Variable 0 is d, variables 1..n are x.  Finite boxes: ``d <= |det Δq|``
    (the order divides the group order) and ``|x_i| <= d_max·ceil|(c·Δq^{-1})_i|``.
    """
    _check(g, c)
    n = g.n
    cols = _columns(g)
    w = linalg.vecmat(list(c), [list(r) for r in _inverse(g)])
    dmax = group_order(g)
    rows = [tuple([-c[j]] + list(cols[j])) for j in range(n)]
    M = [ceil(abs(v)) for v in w]
    lower = (1,) + tuple(-dmax * m for m in M)
    upper = (dmax,) + tuple(dmax * m for m in M)
    return LinearProgram("min", (1,) + (0,) * n, tuple(rows), (EQ,) * n, (0,) * n,
                         lower, upper, (True,) * (n + 1),
                         ("d",) + tuple(f"x_{v}" for v in g.nonsink))


def _ints(v):
    return tuple(int(x) for x in v)


def _solve(lp):
    sol = branch_and_bound(lp)
    if sol.status != OPTIMAL:
        raise CrossCheckMismatch(f"model unexpectedly {sol.status}")
    return sol


def solve_stabilization(g, c, sense="min"):
    """Returns ``(x*, c - x*·Δq, solution)``."""
    sol = _solve(build_stabilization_model(g, c, sense))
    x = _ints(sol.point)
    xL = linalg.vecmat(x, g.reduced_laplacian())
    return x, tuple(a - b for a, b in zip(c, xL)), sol


def solve_recurrent(g, c):
    """Returns ``(x*, c + x*·Δq, solution)`` with x* relative to the given c.

    When c is unstable the program is solved for ``s(c) = c - z·Δq`` and the
    reported firing vector is ``x* - z``.
    """
    c = tuple(c)
    sol = _solve(build_recurrent_model(g, c))
    x = _ints(sol.point)
    if any(v >= d for v, d in zip(c, g.degree_vector())):
        z = stabilize(g, c, policy="bulk").odometer
        x = tuple(a - b for a, b in zip(x, z))
    xL = linalg.vecmat(x, g.reduced_laplacian())
    return x, tuple(a + b for a, b in zip(c, xL)), sol


def solve_identity(g):
    return solve_recurrent(g, (0,) * g.n)


def solve_order(g, c):
    """Returns ``(d, x, solution)``."""
    sol = _solve(build_order_model(g, c))
    pt = _ints(sol.point)
    return pt[0], pt[1:], sol


def lcm_order(g, c):
    """Order of ``[c]`` as the lcm of denominators of ``c·Δq^{-1}``."""
    w = linalg.vecmat(list(c), [list(r) for r in _inverse(g)])
    return linalg.lcm_denominators(w)


def stabilization_box_ok(g, c, x):
    """Whether x satisfies ``0 <= c - x·Δq <= σmax`` exactly."""
    y = linalg.vecmat(x, g.reduced_laplacian())
    return all(0 <= a - b <= s for a, b, s in zip(c, y, g.sigma_max()))

