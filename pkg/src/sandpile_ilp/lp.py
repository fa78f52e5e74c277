"""Exact rational linear programming and depth-first branch-and-bound.

The simplex is a two-phase bounded-variable tableau method with Bland's rule,
so it terminates and is fully deterministic.  Programs and solutions carry
:class:`fractions.Fraction` values; the tableau itself uses ``gmpy2.mpq`` when
available.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import ceil, floor

from .errors import MalformedLP

try:  # exact rationals in C; the tableau spends nearly all its time in them
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

LE, EQ, GE = "<=", "=", ">="
OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """``sense  objective·x  s.t.  rows[i]·x (rel[i]) rhs[i],  lower <= x <= upper``.

    ``None`` in ``lower``/``upper`` means no bound on that side.  Variables
    flagged in ``integer`` must be integral.
    """
    sense: str
    objective: tuple
    rows: tuple = ()
    relations: tuple = ()
    rhs: tuple = ()
    lower: tuple = None
    upper: tuple = None
    integer: tuple = None
    names: tuple = None

    def __post_init__(self):
        n = len(self.objective)
        fr = lambda seq: tuple(None if v is None else Fraction(v) for v in seq)
        object.__setattr__(self, "objective", fr(self.objective))
        object.__setattr__(self, "rows", tuple(fr(r) for r in self.rows))
        object.__setattr__(self, "rhs", fr(self.rhs))
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "lower", fr(self.lower) if self.lower is not None else (Fraction(0),) * n)
        object.__setattr__(self, "upper", fr(self.upper) if self.upper is not None else (None,) * n)
        object.__setattr__(self, "integer", tuple(self.integer) if self.integer is not None else (False,) * n)
        if self.names is None:
            object.__setattr__(self, "names", tuple(f"x{j}" for j in range(n)))
        self.validate()

    @property
    def nvars(self):
        return len(self.objective)

    def validate(self):
        n = self.nvars
        if self.sense not in ("min", "max"):
            raise MalformedLP(f"sense must be 'min' or 'max', got {self.sense!r}")
        if not (len(self.rows) == len(self.relations) == len(self.rhs)):
            raise MalformedLP("rows, relations and rhs differ in length")
        if any(len(r) != n for r in self.rows):
            raise MalformedLP("constraint row length does not match the objective")
        if any(rel not in (LE, EQ, GE) for rel in self.relations):
            raise MalformedLP(f"unknown relation in {self.relations}")
        if any(v is None for v in self.rhs) or any(v is None for r in self.rows for v in r):
            raise MalformedLP("missing coefficient")
        if not (len(self.lower) == len(self.upper) == len(self.integer) == len(self.names) == n):
            raise MalformedLP("bound, integrality or name vectors have the wrong length")

    def value(self, x):
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))

    def is_feasible(self, x, integral=True):
        """Exact feasibility check for a candidate point."""
        if len(x) != self.nvars:
            return False
        for v, lo, hi, isint in zip(x, self.lower, self.upper, self.integer):
            if lo is not None and v < lo or hi is not None and v > hi:
                return False
            if integral and isint and Fraction(v).denominator != 1:
                return False
        for row, rel, b in zip(self.rows, self.relations, self.rhs):
            lhs = sum((a * v for a, v in zip(row, x) if a), Fraction(0))
            if rel == LE and lhs > b or rel == GE and lhs < b or rel == EQ and lhs != b:
                return False
        return True

    def with_bounds(self, lower, upper):
        return replace(self, lower=tuple(lower), upper=tuple(upper))

    def with_rows(self, rows, relations, rhs):
        return replace(self, rows=self.rows + tuple(rows),
                       relations=self.relations + tuple(relations),
                       rhs=self.rhs + tuple(rhs))

    def dump(self):
        """Plain-text audit format with exact ``p/q`` rationals."""
        q = lambda v: "-inf" if v is None else str(v)
        lines = ["sense", self.sense, "obj", " ".join(map(str, self.objective)), "rows"]
        for row, rel, b in zip(self.rows, self.relations, self.rhs):
            lines.append(" ".join(map(str, row)) + f" {rel} {b}")
        lines.append("bounds")
        for name, lo, hi in zip(self.names, self.lower, self.upper):
            lines.append(f"{name} {q(lo)} {'+inf' if hi is None else hi}")
        lines.append("int-flags")
        lines.append(" ".join("1" if f else "0" for f in self.integer))
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        try:
            sections = {}
            key = None
            for ln in lines:
                if ln in ("sense", "obj", "rows", "bounds", "int-flags"):
                    key = ln
                    sections[key] = []
                elif key is None:
                    raise ValueError(f"content before first section: {ln!r}")
                else:
                    sections[key].append(ln)
            sense = sections["sense"][0]
            obj = [Fraction(t) for t in sections["obj"][0].split()] if sections["obj"] else []
            rows, rels, rhs = [], [], []
            for ln in sections["rows"]:
                toks = ln.split()
                rows.append([Fraction(t) for t in toks[:-2]])
                rels.append(toks[-2])
                rhs.append(Fraction(toks[-1]))
            names, lo, hi = [], [], []
            for ln in sections["bounds"]:
                name, a, b = ln.split()
                names.append(name)
                lo.append(None if a == "-inf" else Fraction(a))
                hi.append(None if b == "+inf" else Fraction(b))
            flags = [t == "1" for t in sections["int-flags"][0].split()] if sections["int-flags"] else []
        except (KeyError, IndexError, ValueError, ZeroDivisionError) as exc:
            raise MalformedLP(f"cannot parse LP dump: {exc}") from exc
        return cls(sense, tuple(obj), tuple(map(tuple, rows)), tuple(rels), tuple(rhs),
                   tuple(lo), tuple(hi), tuple(flags), tuple(names))


@dataclass(frozen=True)
class MipSolution:
    status: str
    point: tuple = None
    objective: Fraction = None
    node_count: int = 0
    pivots: int = field(default=0, compare=False)


# -- simplex ----------------------------------------------------------------

class _BoundedSimplex:
    """Primal simplex on ``A x = b, lo <= x <= up`` with a dense tableau.

    Nonbasic columns rest at a finite bound (free ones at zero).  Entering
    and leaving choices follow Bland's smallest-index rule.
    """

    def __init__(self, A, b, lo, up):
        self.m = len(A)
        n = len(lo)
        self.lo = list(lo) + [_Q(0)] * self.m
        self.up = list(up) + [None] * self.m
        x = [l if l is not None else (u if u is not None else _Q(0))
             for l, u in zip(lo, up)]
        T = []
        for i, row in enumerate(A):
            r = b[i] - sum((a * v for a, v in zip(row, x) if a and v), _Q(0))
            s = 1 if r >= 0 else -1
            art = [_Q(0)] * self.m
            art[i] = _Q(1)
            T.append([s * a for a in row] + art)
            x.append(abs(r))
        self.T = T
        self.x = x
        self.ncols = n + self.m
        self.nreal = n
        self.basis = [n + i for i in range(self.m)]
        self.pivots = 0

    def _reduced(self, cost):
        d = list(cost)
        for i, bv in enumerate(self.basis):
            cb = cost[bv]
            if cb:
                for j, a in enumerate(self.T[i]):
                    if a:
                        d[j] -= cb * a
        return d

    def _pivot(self, r, col, d):
        T = self.T
        p = T[r][col]
        if p != 1:
            T[r] = [v / p for v in T[r]]
        prow = T[r]
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(self.m):
            f = T[i][col]
            if i != r and f:
                row = T[i]
                for j in nz:
                    row[j] -= f * prow[j]
        f = d[col]
        if f:
            for j in nz:
                d[j] -= f * prow[j]
        self.basis[r] = col
        self.pivots += 1

    def run(self, cost, ncols):
        """Minimize ``cost`` using columns ``< ncols`` as entering candidates."""
        d = self._reduced(cost)
        lo, up, x = self.lo, self.up, self.x
        while True:
            basic = set(self.basis)
            enter = None
            for j in range(ncols):
                if j in basic or not d[j]:
                    continue
                if d[j] < 0 and (up[j] is None or x[j] < up[j]):
                    enter, delta = j, 1
                    break
                if d[j] > 0 and (lo[j] is None or x[j] > lo[j]):
                    enter, delta = j, -1
                    break
            if enter is None:
                return OPTIMAL
            j = enter
            # step length and the blocking variable (Bland: smallest index on ties)
            best_t, best_key, best_row = None, None, None
            if lo[j] is not None and up[j] is not None:
                best_t, best_key, best_row = up[j] - lo[j], j, None
            for i in range(self.m):
                a = delta * self.T[i][j]
                if not a:
                    continue
                bv = self.basis[i]
                if a > 0:
                    if lo[bv] is None:
                        continue
                    t = (x[bv] - lo[bv]) / a
                else:
                    if up[bv] is None:
                        continue
                    t = (up[bv] - x[bv]) / -a
                if best_t is None or t < best_t or (t == best_t and bv < best_key):
                    best_t, best_key, best_row = t, bv, i
            if best_t is None:
                return UNBOUNDED
            t = best_t
            if t:
                for i in range(self.m):
                    a = self.T[i][j]
                    if a:
                        x[self.basis[i]] -= delta * t * a
                x[j] += delta * t
            if best_row is not None:
                bv = self.basis[best_row]
                # land exactly on the bound that blocked
                x[bv] = lo[bv] if delta * self.T[best_row][j] > 0 else up[bv]
                self._pivot(best_row, j, d)

    def drop_artificials(self):
        """Pivot zero-level artificials out; delete rows that are redundant."""
        n = self.nreal
        i = 0
        while i < self.m:
            if self.basis[i] >= n:
                col = next((j for j in range(n) if self.T[i][j] != 0), None)
                if col is None:
                    del self.T[i]
                    del self.basis[i]
                    self.m -= 1
                    continue
                self._pivot(i, col, [_Q(0)] * self.ncols)
            i += 1
        self.T = [row[:n] for row in self.T]
        self.lo, self.up, self.x = self.lo[:n], self.up[:n], self.x[:n]
        self.ncols = n


class _Relaxation:
    """A program converted once into tableau form; solved per bound vector."""

    def __init__(self, lp):
        self.nx = nx = lp.nvars
        self.nslack = nslack = sum(rel != EQ for rel in lp.relations)
        A, k = [], nx
        for row, rel in zip(lp.rows, lp.relations):
            r = [_Q(v) for v in row] + [_Q(0)] * nslack
            if rel != EQ:
                r[k] = _Q(1 if rel == LE else -1)
                k += 1
            A.append(r)
        self.A = A
        self.b = [_Q(v) for v in lp.rhs]
        sign = 1 if lp.sense == "min" else -1
        self.cost = [_Q(sign * c) for c in lp.objective] + [_Q(0)] * nslack
        self.objective = [_Q(c) for c in lp.objective]

    def solve(self, lower, upper):
        """Returns ``(status, point, objective, pivots)`` with mpq values."""
        if any(l is not None and u is not None and l > u for l, u in zip(lower, upper)):
            return INFEASIBLE, None, None, 0
        n = self.nx + self.nslack
        lo = list(lower) + [_Q(0)] * self.nslack
        up = list(upper) + [None] * self.nslack
        sx = _BoundedSimplex(self.A, self.b, lo, up)
        sx.run([_Q(0)] * n + [_Q(1)] * sx.m, n)
        if any(sx.x[n:]):
            return INFEASIBLE, None, None, sx.pivots
        sx.drop_artificials()
        if sx.run(self.cost, n) == UNBOUNDED:
            return UNBOUNDED, None, None, sx.pivots
        point = sx.x[:self.nx]
        return OPTIMAL, point, sum((c * v for c, v in zip(self.objective, point)), _Q(0)), sx.pivots


def _bounds(seq):
    return [None if v is None else _Q(v) for v in seq]


def _fraction(v):
    return Fraction(int(v.numerator), int(v.denominator))


def simplex_solve(lp):
    """Solve the continuous relaxation of ``lp`` exactly.

    Inequality rows get a nonnegative slack; variable bounds stay implicit.
    Phase 1 minimizes the sum of one artificial per row.
    """
    status, point, obj, pivots = _Relaxation(lp).solve(_bounds(lp.lower), _bounds(lp.upper))
    if status != OPTIMAL:
        return MipSolution(status, node_count=1, pivots=pivots)
    return MipSolution(OPTIMAL, tuple(map(_fraction, point)), _fraction(obj), 1, pivots)


# -- branch and bound -------------------------------------------------------

def branch_and_bound(lp, max_nodes=None):
    """Exact integer optimum by depth-first branch-and-bound.

    Branches on the lowest-index fractional integer variable and explores the
    floor branch first.  A node is pruned when its relaxation bound cannot
    beat the incumbent strictly.  Every integer variable must be boxed.
    """
    for j, isint in enumerate(lp.integer):
        if isint and (lp.lower[j] is None or lp.upper[j] is None):
            raise MalformedLP(f"integer variable {lp.names[j]} is not boxed")
    relax = _Relaxation(lp)
    better = (lambda a, b: a < b) if lp.sense == "min" else (lambda a, b: a > b)
    best = None
    nodes = 0
    stack = [(_bounds(lp.lower), _bounds(lp.upper))]
    while stack:
        lower, upper = stack.pop()
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise RuntimeError(f"branch-and-bound exceeded {max_nodes} nodes")
        status, point, obj, _ = relax.solve(lower, upper)
        if status == INFEASIBLE:
            continue
        if status == UNBOUNDED:
            return MipSolution(UNBOUNDED, node_count=nodes)
        if best is not None and not better(obj, best[1]):
            continue
        j = next((k for k, v in enumerate(point)
                  if lp.integer[k] and v.denominator != 1), None)
        if j is None:
            best = (point, obj)
            continue
        v = point[j]
        up_lower = list(lower)
        up_lower[j] = _Q(ceil(v))
        down_upper = list(upper)
        down_upper[j] = _Q(floor(v))
        stack.append((up_lower, upper))
        stack.append((lower, down_upper))
    if best is None:
        return MipSolution(INFEASIBLE, node_count=nodes)
    return MipSolution(OPTIMAL, tuple(map(_fraction, best[0])), _fraction(best[1]), nodes)


def has_unique_optimum(lp, sol):
    """True if no integral optimal point other than ``sol.point`` exists.

    Fixes the objective at its optimal value and, for each coordinate, asks
    for a point below or above ``sol.point`` in that coordinate.
    """
    fixed = lp.with_rows([lp.objective], [EQ], [sol.objective])
    for j, v in enumerate(sol.point):
        for lo, hi in ((None, v - 1), (v + 1, None)):
            lower = list(fixed.lower)
            upper = list(fixed.upper)
            if lo is not None:
                lower[j] = lo if lower[j] is None else max(lower[j], lo)
            if hi is not None:
                upper[j] = hi if upper[j] is None else min(upper[j], hi)
            if branch_and_bound(fixed.with_bounds(lower, upper)).status == OPTIMAL:
                return False
    return True
