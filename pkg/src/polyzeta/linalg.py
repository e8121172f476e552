"""Exact linear algebra over the integers and rationals.

Matrices are plain lists of rows.  Entries are ``int`` or ``Fraction``;
nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def columns(a: Sequence[Sequence]) -> list[tuple]:
    return [tuple(c) for c in zip(*a)]


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return transpose(cols)


def rref(a: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q; returns (R, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the rational null space {x : a x = 0}."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(a[0])
    r, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def det(a: Sequence[Sequence]):
    """Determinant by fraction-free Bareiss elimination (exact)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                if isinstance(num, int) and isinstance(prev, int):
                    m[i][j] = num // prev
                else:
                    m[i][j] = Fraction(num) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """A solution of a x = b over Q, or None when inconsistent."""
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(r, pivots):
        x[pc] = row[n]
    return x


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in r[:n]]


def column_hermite(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Column-style echelon form ``H = A U`` with ``U`` unimodular.

    ``H`` is lower echelon: the nonzero columns come first and each has a
    positive leading entry strictly below the previous one's.  Entries to
    the left of a pivot are reduced modulo that pivot.  Columns of ``U``
    matching the zero columns of ``H`` form a basis of the integer kernel.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    h = [list(map(int, row)) for row in a]
    u = identity(cols)

    def col_op(j: int, k: int, q: int) -> None:
        # column j -= q * column k
        for row in h:
            row[j] -= q * row[k]
        for row in u:
            row[j] -= q * row[k]

    def col_swap(j: int, k: int) -> None:
        for row in h:
            row[j], row[k] = row[k], row[j]
        for row in u:
            row[j], row[k] = row[k], row[j]

    def col_neg(j: int) -> None:
        for row in h:
            row[j] = -row[j]
        for row in u:
            row[j] = -row[j]

    pc = 0
    pivot_rows: list[int] = []
    for r in range(rows):
        if pc >= cols:
            break
        while True:
            nz = [j for j in range(pc, cols) if h[r][j] != 0]
            if not nz:
                break
            k = min(nz, key=lambda j: abs(h[r][j]))
            if k != pc:
                col_swap(pc, k)
            done = True
            for j in range(pc + 1, cols):
                if h[r][j] != 0:
                    col_op(j, pc, h[r][j] // h[r][pc])
                    if h[r][j] != 0:
                        done = False
            if done:
                break
        if h[r][pc] == 0:
            continue
        if h[r][pc] < 0:
            col_neg(pc)
        for j in range(pc):
            col_op(j, pc, h[r][j] // h[r][pc])
        pivot_rows.append(r)
        pc += 1
    return h, u


def integer_kernel(a: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Lattice basis of {x in Z^m : a x = 0}."""
    if not a:
        raise ValueError("empty matrix")
    h, u = column_hermite(a)
    cols = len(a[0])
    zero_cols = [j for j in range(cols) if all(row[j] == 0 for row in h)]
    return [tuple(row[j] for row in u) for j in zero_cols]


def in_integer_span(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Whether v is an integer combination of the given vectors."""
    if not basis:
        return all(x == 0 for x in v)
    a = from_columns(basis)
    h, _ = column_hermite(a)
    # Back-substitute along the echelon pivots.
    rest = list(v)
    ncols = len(basis)
    for j in range(ncols):
        col = [row[j] for row in h]
        lead = next((i for i, x in enumerate(col) if x != 0), None)
        if lead is None:
            break
        if rest[lead] % col[lead] != 0:
            return False
        q = rest[lead] // col[lead]
        rest = [x - q * c for x, c in zip(rest, col)]
    return all(x == 0 for x in rest)
