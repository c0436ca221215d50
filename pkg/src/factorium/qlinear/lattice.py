"""Exact linear algebra over Q and Z for small dense matrices."""

from __future__ import annotations

from fractions import Fraction
import math


def rref(rows):
    """Reduced row echelon form.

    Returns (basis, pivots, transform) where basis[i] = sum_j transform[i][j] * rows[j]
    and every basis row has a leading 1 in column pivots[i].
    """
    A, pivots, T, r = rref_full(rows)
    return A[:r], pivots, T[:r]


def rref_full(rows):
    """As `rref`, but also returns the rows of the transform past the rank

    (they span the rational left kernel of `rows`)."""
    m = len(rows)
    A = [[Fraction(x) for x in r] for r in rows]
    T = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        T[r], T[piv] = T[piv], T[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        T[r] = [x * inv for x in T[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        pivots.append(c)
        r += 1
    return A, pivots, T, r


def reduce_mod(v, basis, pivots):
    """Subtract the rational span of an RREF basis; returns (residual, coefficients)."""
    v = [Fraction(x) for x in v]
    coeffs = []
    for row, c in zip(basis, pivots):
        f = v[c]
        coeffs.append(f)
        if f:
            v = [a - f * b for a, b in zip(v, row)]
    return v, coeffs


def hnf(rows, track: bool = False):
    """Row-style Hermite normal form of an integer matrix.

    Returns (H, U, rank) with U unimodular and U * rows = H.  The first
    `rank` rows of H are the nonzero echelon rows; the remaining rows of U
    span the integer kernel (left null space) of `rows`.
    """
    m = len(rows)
    A = [list(map(int, r)) for r in rows]
    ncols = len(A[0]) if A else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            if piv != r:
                A[r], A[piv] = A[piv], A[r]
                if track:
                    U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if track:
                        U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
            if track:
                U[r] = [-a for a in U[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                if track:
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return A, U, r


def pivot_columns(H, rank):
    cols = []
    for row in H[:rank]:
        cols.append(next(j for j, x in enumerate(row) if x))
    return cols


def solve_in_lattice(v, H, rank):
    """Integer coefficients n with sum n_i H[i] = v, or None."""
    v = list(v)
    coeffs = []
    for row in H[:rank]:
        c = next(j for j, x in enumerate(row) if x)
        if v[c] % row[c]:
            return None
        f = v[c] // row[c]
        coeffs.append(f)
        if f:
            v = [a - f * b for a, b in zip(v, row)]
    if any(v):
        return None
    return coeffs


def common_denominator(vectors) -> int:
    d = 1
    for v in vectors:
        for x in v:
            x = Fraction(x)
            d = d * x.denominator // math.gcd(d, x.denominator)
    return d


def rank(rows) -> int:
    if not rows:
        return 0
    return len(rref(rows)[0])
