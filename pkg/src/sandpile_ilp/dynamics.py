"""Chip-firing dynamics: toppling, stabilization, the sandpile sum, and the
shift-and-stabilize construction of recurrent representatives.

Configurations are tuples of ints indexed by ``g.nonsink``.  Toppling vertex
``i`` subtracts row ``i`` of the reduced Laplacian, so a stabilization with
odometer ``z`` satisfies ``stable == c - z·Δq``.
"""

import heapq
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from . import linalg
from .errors import DimensionMismatch

POLICIES = ("lowest", "highest", "fifo", "scan", "bulk")
DEFAULT_POLICY = "lowest"


@dataclass(frozen=True)
class StabilizationResult:
    stable: tuple
    odometer: tuple
    avalanche_size: int
    trace: list = field(default=None, compare=False)


@lru_cache(maxsize=None)
def _sparse_rows(g):
    # ((j, -Δq[i][j]) for j != i with Δq[i][j] != 0), i.e. chips sent to j per toppling of i
    L = g.reduced_laplacian()
    return tuple(tuple((j, -a) for j, a in enumerate(row) if a and j != i)
                 for i, row in enumerate(L))


def _check_len(g, c):
    if len(c) != g.n:
        raise DimensionMismatch(f"configuration has length {len(c)}, graph has {g.n} non-sink vertices")


def is_stable(g, c):
    _check_len(g, c)
    return all(x < d for x, d in zip(c, g.degree_vector()))


def stabilize(g, c, policy=DEFAULT_POLICY, trace=False):
    """Topple unstable vertices until the configuration is stable.

    ``policy`` selects the next vertex to topple:

    * ``lowest``: the lowest-index unstable vertex (the default; reproduces the
      step sequence of the C5 avalanche exactly),
    * ``highest``: the highest-index unstable vertex,
    * ``fifo``: vertices in the order they became unstable,
    * ``scan``: sweep indices cyclically, toppling whatever is unstable,
    * ``bulk``: like ``fifo`` but fires ``c_v // deg_v`` times in one go.

    By the abelian property all policies yield the same stable configuration
    and odometer.  With ``trace`` the result carries one line per toppling,
    ``step=<k> vertex=<label> before=<tuple>`` (bulk lines add ``times=<k>``).
    Negative entries are allowed; they simply never topple.
    """
    _check_len(g, c)
    if policy not in POLICIES:
        raise ValueError(f"unknown toppling policy {policy!r}; choose from {POLICIES}")
    deg = g.degree_vector()
    rows = _sparse_rows(g)
    work = list(c)
    odo = [0] * g.n
    lines = [] if trace else None
    step = 0

    def fire(i, times=1):
        nonlocal step
        step += 1
        if lines is not None:
            extra = f" times={times}" if policy == "bulk" else ""
            lines.append(f"step={step} vertex={g.nonsink[i]} before={_fmt(work)}{extra}")
        work[i] -= times * deg[i]
        odo[i] += times
        for j, m in rows[i]:
            work[j] += times * m

    n = g.n
    if policy in ("lowest", "highest"):
        sgn = 1 if policy == "lowest" else -1
        heap = [sgn * i for i in range(n) if work[i] >= deg[i]]
        heapq.heapify(heap)
        queued = {sgn * k for k in heap}
        while heap:
            i = sgn * heapq.heappop(heap)
            queued.discard(i)
            fire(i)
            for j in [i] + [j for j, _ in rows[i]]:
                if work[j] >= deg[j] and j not in queued:
                    queued.add(j)
                    heapq.heappush(heap, sgn * j)
    elif policy in ("fifo", "bulk"):
        queue = deque(i for i in range(n) if work[i] >= deg[i])
        queued = set(queue)
        while queue:
            i = queue.popleft()
            queued.discard(i)
            if work[i] < deg[i]:
                continue
            fire(i, work[i] // deg[i] if policy == "bulk" else 1)
            for j in [i] + [j for j, _ in rows[i]]:
                if work[j] >= deg[j] and j not in queued:
                    queued.add(j)
                    queue.append(j)
    else:
        clean = 0
        i = 0
        while clean < n:
            if work[i] >= deg[i]:
                fire(i)
                clean = 0
            else:
                clean += 1
            i = (i + 1) % n
    return StabilizationResult(tuple(work), tuple(odo), sum(odo), lines)


def _fmt(v):
    return "(" + ",".join(map(str, v)) + ")"


def oplus(g, c, d):
    """Sandpile sum ``s(c + d)``."""
    _check_len(g, d)
    return stabilize(g, tuple(a + b for a, b in zip(c, d)), policy="bulk").stable


@lru_cache(maxsize=None)
def positive_preimage_h(g):
    """Strictly positive integral h with ``h·Δq == L·1``; returns ``(h, L)``.

    Solves ``x·Δq = 1`` exactly and clears denominators.  The inverse of a
    reduced Laplacian is entrywise nonnegative and nonsingular, so every
    entry of x is strictly positive.
    """
    x = linalg.solve_row(g.reduced_laplacian(), [1] * g.n)
    L = linalg.lcm_denominators(x)
    h = tuple(int(v * L) for v in x)
    if min(h) <= 0:
        # unreachable for a valid sinked graph
        raise ArithmeticError(f"row solve of Δq against 1 is not positive: {x}")
    return h, L


def recurrent_firing(g, c):
    """Recurrent representative of ``[c]`` and the firing vector reaching it.

    Returns ``(r, z)`` with ``r == c + z·Δq``.  ``c`` may be any integer
    vector.  Adds ``t·h·Δq = t·L·1`` with the least t >= 1 making every entry
    at least its degree, then stabilizes.
    """
    _check_len(g, c)
    h, L = positive_preimage_h(g)
    deg = g.degree_vector()
    t = max(1, max(-((x - d) // L) for d, x in zip(deg, c)))
    shifted = tuple(x + t * L for x in c)
    res = stabilize(g, shifted, policy="bulk")
    z = tuple(t * hi - o for hi, o in zip(h, res.odometer))
    return res.stable, z


def recurrent_rep_dynamics(g, c):
    """The unique recurrent configuration firing-equivalent to ``c``."""
    return recurrent_firing(g, c)[0]


def is_recurrent(g, c):
    c = tuple(c)
    return is_stable(g, c) and min(c, default=0) >= 0 and recurrent_rep_dynamics(g, c) == c
