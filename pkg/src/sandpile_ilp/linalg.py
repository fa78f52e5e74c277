"""Exact dense linear algebra over the integers and the rationals.

Matrices are plain lists of rows; entries are ``int`` or
:class:`fractions.Fraction`.  Nothing here ever touches a float.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import DimensionMismatch, NotSquare, Singular


def _check_square(A):
    n = len(A)
    if any(len(row) != n for row in A):
        raise NotSquare(f"expected a square matrix, got {n} rows of lengths "
                        f"{sorted({len(r) for r in A})}")
    return n


def identity_matrix(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    if A and len(A[0]) != len(B):
        raise DimensionMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x?")
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col) if a) for col in Bt] for row in A]


def vecmat(x, A):
    """Row vector times matrix: ``x·A``."""
    if len(x) != len(A):
        raise DimensionMismatch(f"vector of length {len(x)} vs {len(A)} matrix rows")
    if not A:
        return []
    out = [0] * len(A[0])
    for xi, row in zip(x, A):
        if xi:
            for j, a in enumerate(row):
                if a:
                    out[j] += xi * a
    return out


def matvec(A, x):
    """Matrix times column vector: ``A·x``."""
    if A and len(A[0]) != len(x):
        raise DimensionMismatch(f"matrix with {len(A[0])} columns vs vector of length {len(x)}")
    return [sum(a * xi for a, xi in zip(row, x) if a) for row in A]


def det(A):
    """Exact determinant of an integer matrix (Bareiss fraction-free elimination)."""
    n = _check_square(A)
    if n == 0:
        return 1
    M = [list(map(int, row)) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def _gauss_jordan(A, B):
    """Solve ``A X = B`` for square nonsingular A; B is a list of rows."""
    n = _check_square(A)
    M = [[Fraction(a) for a in row] + [Fraction(b) for b in brow]
         for row, brow in zip(A, B)]
    width = len(M[0]) if M else 0
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        if p != 1:
            M[col] = [v / p for v in M[col]]
        prow = M[col]
        for r in range(n):
            f = M[r][col]
            if r != col and f != 0:
                row = M[r]
                for j in range(col, width):
                    if prow[j]:
                        row[j] -= f * prow[j]
    return [row[n:] for row in M]


def inverse(A):
    """Exact inverse of a nonsingular integer (or rational) matrix."""
    n = _check_square(A)
    return _gauss_jordan(A, identity_matrix(n))


def solve(A, b):
    """Column solve: the unique x with ``A·x = b``."""
    n = _check_square(A)
    if len(b) != n:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, expected {n}")
    if n == 0:
        return []
    X = _gauss_jordan(A, [[v] for v in b])
    return [row[0] for row in X]


def solve_row(A, b):
    """Row solve: the unique x with ``x·A = b``."""
    return solve(transpose(A), b)


def lcm_denominators(v):
    """Least positive L such that ``L*v`` is integral."""
    out = 1
    for x in v:
        out = lcm(out, Fraction(x).denominator)
    return out


@dataclass(frozen=True)
class SnfResult:
    """``U·A·V = D`` with U, V unimodular and D in Smith form."""
    D: list
    U: list
    V: list

    @property
    def diagonal(self):
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def smith_normal_form(A):
    """Smith normal form with explicit unimodular transforms.

    Pivoting always moves the smallest nonzero absolute value of the active
    block to the corner.  Row operations are mirrored into U and column
    operations into V, so ``U·A·V == D`` holds on return.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        for M in (D, U):
            M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, k):
        for M in (D, V):
            for row in M:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = D[i][j]
                    if v and (best is None or abs(v) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return SnfResult(D, U, V)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
            if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(D[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            # fold the offending row in; the next pass finds a smaller pivot
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return SnfResult(D, U, V)


def invariant_factors(A):
    """Nonzero SNF diagonal entries in divisibility order (ones included)."""
    return [d for d in smith_normal_form(A).diagonal if d]
