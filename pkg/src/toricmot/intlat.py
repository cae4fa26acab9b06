"""Exact integer-lattice linear algebra.

Matrices are numpy arrays with ``dtype=object`` holding Python ints, so no
entry can ever overflow. Rows are lattice vectors throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

import numpy as np


def _as_int(x) -> int:
    if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
        raise TypeError(f"non-integer matrix entry {x!r}")
    return int(x)


def as_int_matrix(A, cols: int | None = None) -> np.ndarray:
    """Coerce an array-like of integer rows into an object-dtype matrix.

    Raises:
        TypeError: if an entry is not an integer.
    """
    rows = [[_as_int(x) for x in row] for row in A]
    if not rows:
        if cols is None:
            cols = 0
        return np.zeros((0, cols), dtype=object)
    M = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != M.shape[1]:
            raise ValueError("ragged integer matrix")
        M[i, :] = row
    return M


def _identity(n: int) -> np.ndarray:
    I = np.zeros((n, n), dtype=object)
    for i in range(n):
        I[i, i] = 1
    return I


def hermite_normal_form(A) -> tuple[np.ndarray, np.ndarray]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ A == H``. ``H`` is in
    row echelon form, pivots are positive and entries above a pivot are
    reduced into ``[0, pivot)``. Zero rows sit at the bottom.
    """
    H = as_int_matrix(A).copy()
    m, n = H.shape
    U = _identity(m)
    row = 0
    for col in range(n):
        if row >= m:
            break
        while True:
            nz = [i for i in range(row, m) if H[i, col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(H[i, col]))
            if piv != row:
                H[[row, piv]] = H[[piv, row]]
                U[[row, piv]] = U[[piv, row]]
            clean = True
            for i in range(row + 1, m):
                if H[i, col] != 0:
                    q = H[i, col] // H[row, col]
                    H[i] -= q * H[row]
                    U[i] -= q * U[row]
                    if H[i, col] != 0:
                        clean = False
            if clean:
                break
        if H[row, col] == 0:
            continue
        if H[row, col] < 0:
            H[row] = -H[row]
            U[row] = -U[row]
        for i in range(row):
            q = H[i, col] // H[row, col]
            if q:
                H[i] -= q * H[row]
                U[i] -= q * U[row]
        row += 1
    return H, U


@dataclass(frozen=True)
class SnfResult:
    """Smith normal form ``U @ A @ V == D``; ``diag`` has ``min(m, n)`` entries."""

    diag: tuple[int, ...]
    U: np.ndarray
    V: np.ndarray

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diag if d != 0)


def smith_normal_form(A) -> SnfResult:
    """Smith normal form by row/column reduction with minimal pivots."""
    D = as_int_matrix(A).copy()
    m, n = D.shape
    U, V = _identity(m), _identity(n)
    r = min(m, n)
    for t in range(r):
        while True:
            sub = [(abs(D[i, j]), i, j) for i in range(t, m) for j in range(t, n) if D[i, j] != 0]
            if not sub:
                break
            _, pi, pj = min(sub)
            if pi != t:
                D[[t, pi]] = D[[pi, t]]
                U[[t, pi]] = U[[pi, t]]
            if pj != t:
                D[:, [t, pj]] = D[:, [pj, t]]
                V[:, [t, pj]] = V[:, [pj, t]]
            p = D[t, t]
            for i in range(t + 1, m):
                q = D[i, t] // p
                if q:
                    D[i] -= q * D[t]
                    U[i] -= q * U[t]
            for j in range(t + 1, n):
                q = D[t, j] // p
                if q:
                    D[:, j] -= q * D[:, t]
                    V[:, j] -= q * V[:, t]
            if any(D[i, t] != 0 for i in range(t + 1, m)) or any(D[t, j] != 0 for j in range(t + 1, n)):
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i, j] % p != 0), None)
            if bad is None:
                break
            D[t] += D[bad[0]]
            U[t] += U[bad[0]]
        if t < m and t < n and D[t, t] < 0:
            D[t] = -D[t]
            U[t] = -U[t]
    return SnfResult(tuple(int(D[i, i]) for i in range(r)), U, V)


def lattice_rank(A) -> int:
    """Rank over the rationals of the row set of ``A``."""
    M = as_int_matrix(A)
    if M.size == 0:
        return 0
    H, _ = hermite_normal_form(M)
    return sum(1 for row in H if any(x != 0 for x in row))


def lattice_index(A) -> int:
    """Index of the row lattice of ``A`` inside the saturation of its span."""
    M = as_int_matrix(A)
    if M.size == 0:
        return 1
    return prod(smith_normal_form(M).invariant_factors)


def is_part_of_basis(A) -> bool:
    """Whether the (independent) rows of ``A`` extend to a basis of Z^d."""
    M = as_int_matrix(A)
    if lattice_rank(M) != M.shape[0]:
        raise ValueError("rows are linearly dependent")
    return lattice_index(M) == 1


def integer_kernel(A, n: int | None = None) -> np.ndarray:
    """Basis (as rows) of the saturated lattice ``{x in Z^n : A x = 0}``."""
    M = as_int_matrix(A, n)
    if n is None:
        n = M.shape[1]
    if M.shape[0] == 0:
        return _identity(n)
    H, U = hermite_normal_form(M.T)
    keep = [i for i in range(n) if all(x == 0 for x in H[i])]
    return U[keep] if keep else np.zeros((0, n), dtype=object)


def saturation_basis(A, n: int | None = None) -> np.ndarray:
    """Basis of ``span_Q(rows of A) ∩ Z^n``, in Hermite form."""
    M = as_int_matrix(A, n)
    if n is None:
        n = M.shape[1]
    if lattice_rank(M) == 0:
        return np.zeros((0, n), dtype=object)
    K = integer_kernel(M, n)
    B = integer_kernel(K, n) if K.shape[0] else _identity(n)
    H, _ = hermite_normal_form(B)
    return H[[i for i in range(H.shape[0]) if any(x != 0 for x in H[i])]]


def row_basis(A, n: int | None = None) -> np.ndarray:
    """Hermite basis of the row lattice of ``A`` (zero rows dropped)."""
    M = as_int_matrix(A, n)
    if M.size == 0:
        return np.zeros((0, M.shape[1]), dtype=object)
    H, _ = hermite_normal_form(M)
    return H[[i for i in range(H.shape[0]) if any(x != 0 for x in H[i])]]


def primitive(v) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


# Rational linear algebra, used for vertex and bound computations.

def rational_solve(A, b) -> list[Fraction] | None:
    """Solve a square system exactly; ``None`` when singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def rational_inverse(A) -> list[list[Fraction]] | None:
    n = len(A)
    cols = []
    for k in range(n):
        e = [1 if i == k else 0 for i in range(n)]
        x = rational_solve(A, e)
        if x is None:
            return None
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def coordinates(basis, v) -> list[Fraction] | None:
    """Rational coordinates of ``v`` in the row basis, or ``None`` if outside the span."""
    B = [[Fraction(x) for x in row] for row in basis]
    k = len(B)
    if k == 0:
        return [] if all(x == 0 for x in v) else None
    # normal equations are exact here since B has full row rank
    G = [[sum(a * b for a, b in zip(B[i], B[j])) for j in range(k)] for i in range(k)]
    rhs = [sum(a * Fraction(x) for a, x in zip(B[i], v)) for i in range(k)]
    c = rational_solve(G, rhs)
    if c is None:
        return None
    back = [sum(c[i] * B[i][t] for i in range(k)) for t in range(len(v))]
    if any(back[t] != v[t] for t in range(len(v))):
        return None
    return c
