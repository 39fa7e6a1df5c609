"""Exact Smith normal form over the integers.

Matrices are lists of lists of Python ints, so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def as_int_matrix(A):
    return [[int(x) for x in row] for row in A]


@dataclass
class SmithForm:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    diagonal: list
    U: list
    V: list
    rows: int
    cols: int
    U_inv: list

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A, cols=None) -> SmithForm:
    """Smith normal form of an ``m x n`` integer matrix.

    ``cols`` gives the column count when ``A`` has no rows.
    """
    M = as_int_matrix(A)
    m = len(M)
    n = len(M[0]) if m else (cols or 0)
    U = _identity(m)
    Ui = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        if k:
            M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]
            for row in Ui:
                row[src] -= k * row[dst]

    def add_col(src, dst, k):  # col_dst += k * col_src
        if k:
            for row in M:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if M[i][j] and (pivot is None or abs(M[i][j]) < abs(M[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = M[t][t]
            done = True
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(t, i, -(M[i][t] // p))
                    done = done and M[i][t] == 0
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(t, j, -(M[t][j] // p))
                    done = done and M[t][j] == 0
            if not done:
                continue
            # the pivot must divide the whole remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if t < m and t < n and M[t][t] < 0:
            M[t] = [-a for a in M[t]]
            U[t] = [-a for a in U[t]]
            for row in Ui:
                row[t] = -row[t]
    diagonal = [M[i][i] for i in range(min(m, n))]
    return SmithForm(diagonal, U, V, m, n, Ui)


def invariant_factors(A, cols=None) -> list:
    """Non-trivial invariant factors (entries > 1) in ascending divisibility order."""
    return [d for d in smith_normal_form(A, cols).diagonal if d > 1]


def rank(A, cols=None) -> int:
    return smith_normal_form(A, cols).rank


def kernel_basis(A, cols=None) -> list:
    """A basis of ``{x in Z^n : A x = 0}`` as a list of vectors."""
    S = smith_normal_form(A, cols)
    r = S.rank
    return [[S.V[i][j] for i in range(S.cols)] for j in range(r, S.cols)]


def column_space_basis(generators, dim) -> list:
    """A basis of the lattice spanned by ``generators`` (vectors in ``Z^dim``)."""
    if not generators:
        return []
    S = smith_normal_form(transpose(generators))
    # A = U^-1 D V^-1, so the column space is spanned by d_i times column i of U^-1
    return [[S.U_inv[i][j] * S.diagonal[j] for i in range(dim)] for j in range(S.rank)]


def matmul(A, B):
    if not A:
        return []
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def transpose(A, cols=None):
    if not A:
        return [[] for _ in range(cols or 0)]
    return [list(c) for c in zip(*A)]


def quotient_invariants(basis, generators) -> tuple:
    """Structure of ``L / S`` for a full-rank lattice ``L`` and a sublattice ``S``.

    ``basis`` lists a basis of ``L`` and ``generators`` spans ``S``, both as
    vectors in ``Z^d``. Returns ``(torsion invariant factors, free rank)``.
    """
    d = len(basis)
    if d == 0:
        return [], 0
    # coordinates c of each generator s: B c = s with B the basis as columns
    B = transpose(basis)
    S = smith_normal_form(B)
    if S.rank != d:
        raise ValueError("basis is not of full rank")
    coords = []
    for s in generators:
        y = [sum(u * v for u, v in zip(row, s)) for row in S.U]  # U s
        z = []
        for i in range(d):
            q, rem = divmod(y[i], S.diagonal[i])
            if rem:
                raise ValueError("generator does not lie in the lattice")
            z.append(q)
        coords.append([sum(S.V[i][j] * z[j] for j in range(d)) for i in range(d)])
    if not coords:
        return [], d
    Q = smith_normal_form(transpose(coords))
    factors = [x for x in Q.diagonal if x > 1]
    return factors, d - Q.rank
