"""Exact integer and rational linear algebra.

Everything here works on plain lists of Python ints or Fractions; floating
point never enters.  Smith normal form is delegated to sympy's domain
matrices, the rest is small enough to do by hand.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

Matrix = list[list[int]]


def _dm(A: Sequence[Sequence[int]]) -> DomainMatrix:
    rows = [[ZZ(int(a)) for a in row] for row in A]
    ncols = len(rows[0]) if rows else 0
    return DomainMatrix(rows, (len(rows), ncols), ZZ)


def _ints(M: DomainMatrix) -> Matrix:
    return [[int(a) for a in row] for row in M.to_list()]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def smith(A: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """Return (d, S, T) with S*A*T diagonal, diagonal entries d (length min(m, n)).

    S and T are unimodular.  Entries of d are non-negative and each divides
    the next; zeros come last.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0 or n == 0:
        return [], identity(m), identity(n)
    D, S, T = smith_normal_decomp(_dm(A))
    Dl = _ints(D)
    S, T = _ints(S), _ints(T)
    d = [Dl[i][i] for i in range(min(m, n))]
    # sympy may leave signs on the diagonal; push them into S
    for i, v in enumerate(d):
        if v < 0:
            d[i] = -v
            S[i] = [-a for a in S[i]]
    return d, S, T


def unimodular_inverse(M: Matrix) -> Matrix:
    inv = _dm(M).to_field().inv()
    out = [[Fraction(int(a.numerator), int(a.denominator)) for a in row] for row in inv.to_list()]
    for row in out:
        for a in row:
            if a.denominator != 1:
                raise ValueError("matrix is not unimodular")
    return [[int(a) for a in row] for row in out]


def hermite_rows(vectors: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot).  Zero rows are dropped, so the result is a basis.
    """
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    n = len(rows[0])
    out: Matrix = []
    col = 0
    while rows and col < n:
        live = [r for r in rows if r[col] != 0]
        if not live:
            col += 1
            continue
        rest = [r for r in rows if r[col] == 0]
        # euclid down the column until a single row remains
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        p = live[0]
        if p[col] < 0:
            p = [-a for a in p]
        for i, r in enumerate(out):
            q = r[col] // p[col]
            if q:
                out[i] = [a - q * b for a, b in zip(r, p)]
        out.append(p)
        rows = rest
        col += 1
    return out


def integer_kernel(A: Sequence[Sequence[int]]) -> Matrix:
    """Saturated basis of ker(A) ∩ ℤⁿ, in Hermite form (one vector per row)."""
    n = len(A[0]) if A else 0
    if n == 0:
        return []
    d, _, T = smith(A)
    r = sum(1 for v in d if v != 0)
    vecs = [[T[i][j] for i in range(n)] for j in range(r, n)]
    basis = hermite_rows(vecs)
    for v in basis:
        g = 0
        for a in v:
            g = gcd(g, a)
        assert g == 1
    return basis


def cokernel_invariants(A: Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    """coker(A: ℤⁿ → ℤᵐ) as (free rank, torsion coefficients > 1)."""
    m = len(A)
    d, _, _ = smith(A)
    nonzero = [v for v in d if v != 0]
    return m - len(nonzero), [v for v in nonzero if v > 1]


def in_integer_image(A: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Decide whether v = A·x has an integer solution x."""
    d, S, _ = smith(A)
    w = matvec(S, v)
    for i, wi in enumerate(w):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if wi != 0:
                return False
        elif wi % di:
            return False
    return True


def solve_rational(A: Sequence[Sequence[int]], b: Sequence) -> list[Fraction] | None:
    """Some rational solution of A x = b, or None.  Free variables are set to 0."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(a) for a in A[i]] + [Fraction(b[i])] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [a * inv for a in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b2 for a, b2 in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = M[i][n]
    return x


def definiteness(A: Sequence[Sequence[int]]) -> tuple[str, int]:
    """Classify a symmetric integer matrix by symmetric elimination over ℚ.

    Returns (kind, rank) with kind one of ``negative_definite``,
    ``negative_semidefinite`` (singular) or ``other``.
    """
    n = len(A)
    M = [[Fraction(-a) for a in row] for row in A]  # test -A for PSD
    live = list(range(n))
    rank = 0
    while live:
        for i in live:
            if M[i][i] < 0:
                return "other", -1
        zero = [i for i in live if M[i][i] == 0]
        for i in zero:
            if any(M[i][j] != 0 for j in live):
                return "other", -1
        live = [i for i in live if M[i][i] != 0]
        if not live:
            break
        # pivot on the largest diagonal for tidier fractions
        p = max(live, key=lambda i: M[i][i])
        live.remove(p)
        piv = M[p][p]
        for i in live:
            f = M[i][p] / piv
            if f:
                for j in live:
                    M[i][j] -= f * M[p][j]
        rank += 1
    if rank == n:
        return "negative_definite", rank
    return "negative_semidefinite", rank


def principal_minors(A: Sequence[Sequence[int]]) -> list[int]:
    """Every principal minor, smallest subsets first (brute-force helper)."""
    from itertools import combinations

    n = len(A)
    out = []
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            sub = _dm([[A[i][j] for j in idx] for i in idx])
            out.append(int(sub.det()))
    return out


def integer_solution(A: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """Some x ∈ ℤⁿ with A x = b, or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    d, S, T = smith(A)
    w = matvec(S, b)
    z = [0] * n
    for i, wi in enumerate(w):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if wi != 0:
                return None
        elif wi % di:
            return None
        else:
            z[i] = wi // di
    return matvec(T, z)
