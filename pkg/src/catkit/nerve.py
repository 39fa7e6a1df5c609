"""Truncated nerves, normalized chain complexes and integer homology.

An ``n``-simplex of a nerve is a chain ``(m_1, ..., m_n)`` of composable
morphisms ``x_0 -> x_1 -> ... -> x_n``; a 0-simplex is ``(x,)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import snf
from .categories import FinCategory, Functor
from .categorify import covering_transformation, simplicial, tautological
from .config import Limits, resolve
from .errors import SizeLimit, TruncationTooShallow, ValidationError
from .groups import FiniteGroup


@dataclass
class TruncatedSimplicialSet:
    """Simplices up to degree ``k`` with face and degeneracy index tables.

    ``faces[n][i][s]`` is the index of the ``i``-th face of simplex ``s`` in
    degree ``n`` (``n >= 1``); ``degeneracies[n][i][s]`` lands in degree
    ``n + 1`` (``n < k``).
    """

    k: int
    simplices: list
    faces: list
    degeneracies: list

    def count(self, n: int) -> int:
        return len(self.simplices[n])

    def degenerate_mask(self, n: int) -> np.ndarray:
        mask = np.zeros(self.count(n), dtype=bool)
        if n >= 1:
            for table in self.degeneracies[n - 1]:
                mask[np.asarray(table, dtype=np.int64)] = True
        return mask

    def nondegenerate(self, n: int) -> list:
        return [int(i) for i in np.flatnonzero(~self.degenerate_mask(n))]

    def to_json(self) -> dict:
        degrees = []
        for n in range(self.k + 1):
            degrees.append({
                "simplices": [list(s) for s in self.simplices[n]],
                "faces": [list(map(int, t)) for t in self.faces[n]] if n else [],
                "degeneracies": [list(map(int, t)) for t in self.degeneracies[n]] if n < self.k else [],
            })
        return {"truncation": self.k, "degrees": degrees}


def nerve(C: FinCategory, k: int, limits: Optional[Limits] = None) -> TruncatedSimplicialSet:
    if k < 0:
        raise ValueError("truncation degree must be non-negative")
    limits = resolve(limits)
    src, tgt, comp, ids = C.src, C.tgt, C.comp, C.identities
    out_of = [np.flatnonzero(src == x).tolist() for x in range(C.object_count)]
    simplices = [[(x,) for x in range(C.object_count)]]
    total = C.object_count
    if k >= 1:
        simplices.append([(m,) for m in range(C.morphism_count)])
        total += C.morphism_count
    for n in range(2, k + 1):
        nxt = [chain + (m,) for chain in simplices[-1] for m in out_of[tgt[chain[-1]]]]
        total += len(nxt)
        if total > limits.max_candidates:
            raise SizeLimit(f"nerve: {total} chains exceeds bound {limits.max_candidates}")
        simplices.append(nxt)
    index = [{s: i for i, s in enumerate(level)} for level in simplices]

    def vertex(chain, i):
        return int(src[chain[0]]) if i == 0 else int(tgt[chain[i - 1]])

    faces = [[]]
    for n in range(1, k + 1):
        tables = []
        for i in range(n + 1):
            row = []
            for chain in simplices[n]:
                if n == 1:
                    face = (int(tgt[chain[0]]),) if i == 0 else (int(src[chain[0]]),)
                elif i == 0:
                    face = chain[1:]
                elif i == n:
                    face = chain[:-1]
                else:
                    face = chain[: i - 1] + (int(comp[chain[i], chain[i - 1]]),) + chain[i + 1:]
                row.append(index[n - 1][face])
            tables.append(row)
        faces.append(tables)
    degeneracies = []
    for n in range(k):
        tables = []
        for i in range(n + 1):
            row = []
            for chain in simplices[n]:
                if n == 0:
                    new = (int(ids[chain[0]]),)
                else:
                    new = chain[:i] + (int(ids[vertex(chain, i)]),) + chain[i:]
                row.append(index[n + 1][new])
            tables.append(row)
        degeneracies.append(tables)
    return TruncatedSimplicialSet(k, simplices, faces, degeneracies)


def simplicial_identity_violation(X: TruncatedSimplicialSet) -> Optional[str]:
    """First failing simplicial identity within the truncation, or ``None``."""
    F = [[np.asarray(t, dtype=np.int64) for t in level] for level in X.faces]
    S = [[np.asarray(t, dtype=np.int64) for t in level] for level in X.degeneracies]
    for n in range(2, X.k + 1):
        for j in range(n + 1):
            for i in range(j):
                if not np.array_equal(F[n - 1][i][F[n][j]], F[n - 1][j - 1][F[n][i]]):
                    return f"d_{i} d_{j} != d_{j - 1} d_{i} in degree {n}"
    for n in range(X.k):
        idx = np.arange(X.count(n))
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = F[n + 1][i][S[n][j]]
                if i < j:
                    rhs = S[n - 1][j - 1][F[n][i]]
                elif i in (j, j + 1):
                    rhs = idx
                else:
                    rhs = S[n - 1][j][F[n][i - 1]]
                if not np.array_equal(lhs, rhs):
                    return f"d_{i} s_{j} identity fails in degree {n}"
        if n + 1 < X.k:
            for j in range(n + 1):
                for i in range(j + 1):
                    if not np.array_equal(S[n + 1][i][S[n][j]], S[n + 1][j + 1][S[n][i]]):
                        return f"s_{i} s_{j} != s_{j + 1} s_{i} in degree {n}"
    return None


def circle() -> TruncatedSimplicialSet:
    """One vertex and one non-degenerate edge, truncated at degree 2."""
    simplices = [[("v",)], [("s0v",), ("e",)], [("s0s0v",), ("s0e",), ("s1e",)]]
    faces = [[], [[0, 0], [0, 0]], [[0, 1, 0], [0, 1, 1], [0, 0, 1]]]
    degeneracies = [[[0]], [[0, 1], [0, 2]]]
    return TruncatedSimplicialSet(2, simplices, faces, degeneracies)


# --------------------------------------------------------------------------- chains and homology


@dataclass
class ChainComplex:
    """``boundaries[n]`` is the integer matrix of ``C_n -> C_{n-1}`` (``boundaries[0]`` is empty)."""

    ranks: list
    boundaries: list
    basis: list = field(default_factory=list)

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def boundary_squares_vanish(self) -> bool:
        for n in range(2, self.top + 1):
            prod = snf.matmul(self.boundaries[n - 1], self.boundaries[n])
            if any(any(row) for row in prod):
                return False
        return True


def normalized_chains(X: TruncatedSimplicialSet) -> ChainComplex:
    basis = [X.nondegenerate(n) for n in range(X.k + 1)]
    pos = []
    for n in range(X.k + 1):
        p = np.full(X.count(n), -1, dtype=np.int64)
        p[basis[n]] = np.arange(len(basis[n]))
        pos.append(p)
    boundaries = [[]]
    for n in range(1, X.k + 1):
        mat = [[0] * len(basis[n]) for _ in range(len(basis[n - 1]))]
        for col, s in enumerate(basis[n]):
            for i in range(n + 1):
                r = pos[n - 1][X.faces[n][i][s]]
                if r >= 0:
                    mat[r][col] += (-1) ** i
        boundaries.append(mat)
    cx = ChainComplex([len(b) for b in basis], boundaries, basis)
    if not cx.boundary_squares_vanish():
        raise ValidationError("boundary of boundary is not zero")
    return cx


@dataclass(frozen=True)
class HomologyResult:
    degree: int
    free_rank: int
    torsion: list

    def __str__(self):
        from .cohomology import format_abelian

        return f"H_{self.degree} = " + format_abelian(self.torsion, self.free_rank)


def homology(cx: ChainComplex, n: int) -> HomologyResult:
    """``ker d_n / im d_{n+1}`` via Smith normal form."""
    if n < 0 or n > cx.top:
        raise ValueError(f"degree {n} outside 0..{cx.top}")
    if n + 1 > cx.top:
        raise TruncationTooShallow(f"H_{n} needs chains in degree {n + 1}; truncation is {cx.top}")
    rank_n = snf.rank(cx.boundaries[n], cx.ranks[n]) if n > 0 else 0
    out = snf.smith_normal_form(cx.boundaries[n + 1], cx.ranks[n + 1])
    torsion = [d for d in out.diagonal if d > 1]
    free = cx.ranks[n] - rank_n - out.rank
    return HomologyResult(n, free, torsion)


def reduced_homology(cx: ChainComplex, n: int) -> HomologyResult:
    h = homology(cx, n)
    if n == 0 and h.free_rank > 0:
        return HomologyResult(0, h.free_rank - 1, h.torsion)
    return h


# --------------------------------------------------------------------------- maps of nerves


def induced_maps(F: Functor, X: TruncatedSimplicialSet, Y: TruncatedSimplicialSet) -> list:
    """Degreewise index maps ``N(F): X -> Y`` for nerves of ``F``'s source and target."""
    index = [{s: i for i, s in enumerate(level)} for level in Y.simplices]
    maps = [np.array([index[0][(int(F.obj_map[x]),)] for (x,) in X.simplices[0]], dtype=np.int64)]
    for n in range(1, X.k + 1):
        maps.append(np.array([index[n][tuple(int(F.mor_map[m]) for m in s)] for s in X.simplices[n]], dtype=np.int64))
    return maps


def is_simplicial_map(maps: list, X: TruncatedSimplicialSet, Y: TruncatedSimplicialSet) -> bool:
    for n in range(1, X.k + 1):
        for i in range(n + 1):
            if not np.array_equal(np.asarray(Y.faces[n][i])[maps[n]], maps[n - 1][np.asarray(X.faces[n][i])]):
                return False
    for n in range(X.k):
        for i in range(n + 1):
            if not np.array_equal(np.asarray(Y.degeneracies[n][i])[maps[n]], maps[n + 1][np.asarray(X.degeneracies[n][i])]):
                return False
    return True


@dataclass
class BarSpaces:
    EG: TruncatedSimplicialSet
    BG: TruncatedSimplicialSet
    quotient_ok: bool  # EG -> BG is a degreewise surjection whose fibers are free G-orbits


def bar_spaces(G: FiniteGroup, k: int, limits: Optional[Limits] = None) -> BarSpaces:
    S, M = simplicial(G)
    EG = nerve(S, k, limits)
    BG = nerve(tautological(G), k, limits)
    R = covering_transformation(G)
    maps = induced_maps(R, EG, BG)
    ok = is_simplicial_map(maps, EG, BG)
    n = G.order
    # G acts on EG by tensoring with identity morphisms on the right: x -> x a
    for deg in range(k + 1):
        index = {s: i for i, s in enumerate(EG.simplices[deg])}
        fibers: dict = {}
        for i, b in enumerate(maps[deg].tolist()):
            fibers.setdefault(b, set()).add(i)
        if len(fibers) != BG.count(deg):
            ok = False
            break
        for i, s in enumerate(EG.simplices[deg]):
            if deg == 0:
                orbit = {index[(G.mul(s[0], a),)] for a in range(n)}
            else:
                ident = [a * (n + 1) for a in range(n)]
                orbit = {index[tuple(M.tensor(m, ia) for m in s)] for ia in ident}
            if len(orbit) != n or orbit != fibers[int(maps[deg][i])]:
                ok = False
                break
        if not ok:
            break
    return BarSpaces(EG, BG, ok)
