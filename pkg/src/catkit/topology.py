"""Finite topological spaces, their categories of open sets, and covers.

Subsets of the point set ``{0, ..., n-1}`` are stored as int bitsets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .categories import UNDEFINED, FinCategory, Functor, MonoidalStructure
from .config import Limits, check_space, resolve
from .errors import NotATopology, NotContinuous, ValidationError


def to_bits(points) -> int:
    out = 0
    for p in points:
        out |= 1 << int(p)
    return out


def from_bits(bits: int) -> list:
    return [i for i in range(bits.bit_length()) if bits >> i & 1]


def _fmt(bits: int) -> str:
    return "{" + ",".join(map(str, from_bits(bits))) + "}"


@dataclass(frozen=True)
class FiniteSpace:
    point_count: int
    opens: tuple  # sorted bitsets

    @property
    def full(self) -> int:
        return (1 << self.point_count) - 1

    @cached_property
    def index(self) -> dict:
        return {u: i for i, u in enumerate(self.opens)}

    def is_open(self, bits: int) -> bool:
        return bits in self.index

    def to_json(self) -> dict:
        return {"points": self.point_count, "opens": [from_bits(u) for u in self.opens]}


def finite_space(points: int, opens) -> FiniteSpace:
    """Validate and build a space; ``opens`` holds point lists or bitsets."""
    full = (1 << points) - 1
    bits = set()
    for u in opens:
        b = int(u) if isinstance(u, (int, np.integer)) else to_bits(u)
        if b & ~full:
            raise ValidationError(f"open set {_fmt(b)} has points outside 0..{points - 1}")
        bits.add(b)
    if 0 not in bits:
        raise NotATopology("the empty set is not open")
    if full not in bits:
        raise NotATopology("the whole space is not open")
    ordered = sorted(bits, key=lambda b: (bin(b).count("1"), b))
    for u, v in itertools.combinations(ordered, 2):
        if u | v not in bits:
            raise NotATopology(f"union of {_fmt(u)} and {_fmt(v)} is not open")
        if u & v not in bits:
            raise NotATopology(f"intersection of {_fmt(u)} and {_fmt(v)} is not open")
    return FiniteSpace(points, tuple(ordered))


def discrete_space(points: int) -> FiniteSpace:
    return finite_space(points, range(1 << points))


def indiscrete_space(points: int) -> FiniteSpace:
    return finite_space(points, [0, (1 << points) - 1])


def sierpinski() -> FiniteSpace:
    """Points ``a = 0`` and ``b = 1``; the open sets are the empty set, ``{a}`` and both."""
    return finite_space(2, [[], [0], [0, 1]])


def open_set_category(X: FiniteSpace):
    """Thin category of opens under inclusion, monoidal by intersection with unit ``X``."""
    opens = X.opens
    k = len(opens)
    pairs = [(i, j) for i in range(k) for j in range(k) if opens[i] & ~opens[j] == 0]
    index = np.full((k, k), UNDEFINED, dtype=np.int64)
    for m, (i, j) in enumerate(pairs):
        index[i, j] = m
    src = np.array([i for i, _ in pairs], dtype=np.int64)
    tgt = np.array([j for _, j in pairs], dtype=np.int64)
    comp = np.where(tgt[None, :] == src[:, None], index[src[None, :], tgt[:, None]], UNDEFINED)
    names = tuple(_fmt(u) for u in opens)
    C = FinCategory(k, src, tgt, comp, index[np.arange(k), np.arange(k)], names)
    meet = np.array([[X.index[u & v] for v in opens] for u in opens], dtype=np.int64)
    tensor_mor = index[meet[src[:, None], src[None, :]], meet[tgt[:, None], tgt[None, :]]]
    M = MonoidalStructure(C, X.index[X.full], meet, tensor_mor)
    return C, M


def preimage_functor(f, X: FiniteSpace, Y: FiniteSpace) -> Functor:
    """``f^-1``: opens of ``Y`` to opens of ``X``, for a point map ``f: X -> Y``."""
    f = [int(v) for v in f]
    if len(f) != X.point_count or any(not 0 <= v < Y.point_count for v in f):
        raise ValidationError("point map has the wrong length or range")

    def pre(v: int) -> int:
        return to_bits(p for p in range(X.point_count) if v >> f[p] & 1)

    obj = []
    for v in Y.opens:
        u = pre(v)
        if not X.is_open(u):
            raise NotContinuous(f"preimage of open {_fmt(v)} is {_fmt(u)}, which is not open")
        obj.append(X.index[u])
    CX, _ = open_set_category(X)
    CY, _ = open_set_category(Y)
    lookup = {(int(a), int(b)): m for m, (a, b) in enumerate(zip(CX.src, CX.tgt))}
    mor = [lookup[obj[int(a)], obj[int(b)]] for a, b in zip(CY.src, CY.tgt)]
    return Functor(CY, CX, obj, mor)


@dataclass(frozen=True)
class Cover:
    """An indexed family of opens; ``leq[i][j]`` is the index order ``i <= j``."""

    space: FiniteSpace
    opens: tuple
    leq: tuple
    covers: bool  # the opens union to the whole space

    @property
    def size(self) -> int:
        return len(self.opens)


def make_cover(X: FiniteSpace, opens, leq=None, require_union: bool = True) -> Cover:
    """The index order defaults to inclusion of the assigned opens.

    A supplied order must be a partial order that matches inclusion exactly,
    which is what makes the assignment full and faithful.
    """
    bits = tuple(int(u) if isinstance(u, (int, np.integer)) else to_bits(u) for u in opens)
    for b in bits:
        if not X.is_open(b):
            raise NotATopology(f"{_fmt(b)} is not an open set")
    k = len(bits)
    incl = tuple(tuple(bits[i] & ~bits[j] == 0 for j in range(k)) for i in range(k))
    if leq is None:
        leq = incl
    else:
        leq = tuple(tuple(bool(v) for v in row) for row in leq)
        if len(leq) != k or any(len(r) != k for r in leq):
            raise ValidationError("index order has the wrong shape")
        for i in range(k):
            if not leq[i][i]:
                raise ValidationError(f"index order is not reflexive at {i}")
            for j in range(k):
                if i != j and leq[i][j] and leq[j][i]:
                    raise ValidationError(f"index order is not antisymmetric at ({i}, {j})")
                if leq[i][j] != incl[i][j]:
                    raise ValidationError(f"assignment is not full and faithful at ({i}, {j})")
    union = 0
    for b in bits:
        union |= b
    covers = union == X.full
    if require_union and not covers:
        raise ValidationError("the opens do not cover the space")
    return Cover(X, bits, leq, covers)


@dataclass(frozen=True)
class Refinement:
    phi: tuple  # phi[j] indexes the coarser cover
    components: tuple  # (V_j, U_phi(j)) inclusion pairs as bitsets


def refinement(V: Cover, U: Cover, limits: Optional[Limits] = None) -> Optional[Refinement]:
    """Least order-preserving ``phi: J -> I`` with ``V_j`` inside ``U_phi(j)``, or ``None``."""
    if V.space != U.space:
        raise ValidationError("covers live on different spaces")
    limits = resolve(limits)
    options = [[i for i in range(U.size) if V.opens[j] & ~U.opens[i] == 0] for j in range(V.size)]
    check_space(int(np.prod([max(len(o), 1) for o in options], dtype=object)), limits, "refinement")
    phi = [0] * V.size

    def rec(j):
        if j == V.size:
            return True
        for i in options[j]:
            if all(not V.leq[a][j] or U.leq[phi[a]][i] for a in range(j)) and \
                    all(not V.leq[j][a] or U.leq[i][phi[a]] for a in range(j)):
                phi[j] = i
                if rec(j + 1):
                    return True
        return False

    if not rec(0):
        return None
    return Refinement(tuple(phi), tuple((V.opens[j], U.opens[phi[j]]) for j in range(V.size)))
