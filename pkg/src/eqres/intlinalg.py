"""Exact integer linear algebra: Hermite/Smith normal forms, kernels, ranks.

All matrices are lists of lists of Python ints; nothing here ever goes
through floating point.  Row convention: a lattice is spanned by the rows of
its basis matrix.
"""

from __future__ import annotations

from math import gcd
from typing import Optional, Sequence


def _copy(A):
    return [list(row) for row in A]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return [
        [sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
        for i in range(n)
    ]


def mat_vec(A, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in A]


def int_det(A) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = _copy(A)
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
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def row_hnf(A, with_transform: bool = False):
    """Row-style Hermite normal form.

    Returns H (and optionally a unimodular U with U*A = H).  Pivots are
    positive, entries above a pivot are reduced to [0, pivot), zero rows are
    collected at the bottom.
    """
    H = _copy(A)
    n = len(H)
    m = len(H[0]) if n else 0
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)] \
        if with_transform else None

    def swap(i, j):
        H[i], H[j] = H[j], H[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def addmul(i, j, q):
        # row_i += q * row_j
        Hi, Hj = H[i], H[j]
        for t in range(m):
            Hi[t] += q * Hj[t]
        if U is not None:
            Ui, Uj = U[i], U[j]
            for t in range(n):
                Ui[t] += q * Uj[t]

    def negate(i):
        H[i] = [-x for x in H[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    r = 0
    for col in range(m):
        # gcd elimination below row r in this column
        while True:
            nz = [i for i in range(r, n) if H[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(H[i][col]))
            swap(r, piv)
            if H[r][col] < 0:
                negate(r)
            done = True
            for i in range(r + 1, n):
                if H[i][col] != 0:
                    q = -(H[i][col] // H[r][col])
                    addmul(i, r, q)
                    if H[i][col] != 0:
                        done = False
            if done:
                break
        if r < n and H[r][col] != 0:
            for i in range(r):
                q = -(H[i][col] // H[r][col])
                if q:
                    addmul(i, r, q)
            r += 1
            if r == n:
                break
    if with_transform:
        return H, U
    return H


def hnf_basis(rows):
    """Canonical basis (nonzero HNF rows) of the lattice spanned by rows."""
    H = row_hnf(rows)
    return [row for row in H if any(row)]


def kernel_basis(A):
    """Basis of the integer kernel {x : A x = 0} (x as row vectors)."""
    if not A:
        return []
    m = len(A[0])
    At = [[A[i][j] for i in range(len(A))] for j in range(m)]
    H, U = row_hnf(At, with_transform=True)
    ker = [U[i] for i in range(m) if not any(H[i])]
    return hnf_basis(ker) if ker else []


def smith_normal_form(A):
    """Invariant factors d_1 | d_2 | ... of an integer matrix (nonneg ints)."""
    M = _copy(A)
    n = len(M)
    m = len(M[0]) if n else 0
    diag = []
    top = 0
    left = 0
    while top < n and left < m:
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(top, n):
            for j in range(left, m):
                if M[i][j] != 0 and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        M[top], M[bi] = M[bi], M[top]
        for row in M:
            row[left], row[bj] = row[bj], row[left]
        if M[top][left] < 0:
            M[top] = [-x for x in M[top]]
        piv = M[top][left]
        dirty = False
        for i in range(top + 1, n):
            q = M[i][left] // piv
            if q:
                M[i] = [x - q * y for x, y in zip(M[i], M[top])]
            if M[i][left] != 0:
                dirty = True
        for j in range(left + 1, m):
            q = M[top][j] // piv
            if q:
                for i in range(top, n):
                    M[i][j] -= q * M[i][left]
            if M[top][j] != 0:
                dirty = True
        if dirty:
            continue
        # pivot must divide every remaining entry; if not, fold a bad row in
        bad = None
        for i in range(top + 1, n):
            for j in range(left + 1, m):
                if M[i][j] % piv != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            M[top] = [x + y for x, y in zip(M[top], M[bad])]
            continue
        diag.append(piv)
        top += 1
        left += 1
    return diag


def gfp_rank(A, p: int) -> int:
    """Rank of an integer matrix over the prime field GF(p)."""
    M = [[x % p for x in row] for row in A]
    n = len(M)
    m = len(M[0]) if n else 0
    rank = 0
    col = 0
    for col in range(m):
        piv = next((i for i in range(rank, n) if M[i][col] % p), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][col], -1, p)
        M[rank] = [(x * inv) % p for x in M[rank]]
        for i in range(n):
            if i != rank and M[i][col]:
                f = M[i][col]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[rank])]
        rank += 1
        if rank == n:
            break
    return rank


def solve_combination(values: Sequence[int], target: int) -> Optional[list]:
    """Integer coefficients x with sum(x_i * values_i) = target, or None.

    Solvable iff gcd(values) divides target.
    """
    coeffs = [0] * len(values)
    g = 0
    g_coeffs = [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g = abs(v)
            g_coeffs = [0] * len(values)
            g_coeffs[i] = 1 if v > 0 else -1
            continue
        # extended gcd of g and v
        a, b = g, v
        sa, ta = 1, 0
        sb, tb = 0, 1
        while b:
            q = a // b
            a, b = b, a - q * b
            sa, sb = sb, sa - q * sb
            ta, tb = tb, ta - q * tb
        # a = sa * g + ta * v
        g_coeffs = [sa * c for c in g_coeffs]
        g_coeffs[i] += ta
        g = a
        if g < 0:
            g = -g
            g_coeffs = [-c for c in g_coeffs]
    if g == 0:
        return coeffs if target == 0 else None
    if target % g != 0:
        return None
    f = target // g
    return [f * c for c in g_coeffs]


def gauss_reduce_2d(b1, b2):
    """Lagrange-Gauss reduction of a rank-2 lattice basis in Z^k.

    Returns (v1, v2) with |v1| <= |v2| and v1 a shortest nonzero vector.
    """
    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    u, v = list(b1), list(b2)
    if dot(u, u) > dot(v, v):
        u, v = v, u
    while True:
        uu = dot(u, u)
        if uu == 0:
            raise ValueError("degenerate basis")
        # exact nearest integer to <u,v>/<u,u>
        mu = (2 * dot(u, v) + uu) // (2 * uu)
        v = [vi - mu * ui for vi, ui in zip(v, u)]
        if dot(v, v) < uu:
            u, v = v, u
        else:
            break
    return tuple(u), tuple(v)
