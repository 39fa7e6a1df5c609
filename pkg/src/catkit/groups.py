"""Finite groups as multiplication tables, homomorphisms and their conjugacy classes.

Elements are dense indices ``0..n-1`` with the identity pinned at ``0``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .config import Limits, check_space, resolve
from .errors import (
    MissingInverse,
    NoIdentityAtZero,
    NotAHomomorphism,
    NotAssociative,
    NotLatinSquare,
    ValidationError,
)


def _frozen(arr):
    arr = np.array(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A validated finite group. Build through :func:`from_table`."""

    table: np.ndarray
    names: Optional[tuple] = None

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroup)
            and self.table.shape == other.table.shape
            and bool(np.array_equal(self.table, other.table))
        )

    def __hash__(self):
        return hash((self.order, self.table.tobytes()))

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmin(self.table, axis=1)  # the unique j with table[i, j] == 0
        inv.setflags(write=False)
        return inv

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    @cached_property
    def conjugation(self) -> np.ndarray:
        """``conjugation[h, x] = h x h^-1``."""
        return _frozen(self.table[self.table, self.inverses[:, None]])

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        for a in range(self.order):
            x, k = a, 1
            while x != 0:
                x = int(self.table[x, a])
                k += 1
            orders[a] = k
        orders.setflags(write=False)
        return orders

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def label(self, i: int) -> str:
        return str(self.names[i]) if self.names else str(i)

    def power(self, a: int, k: int) -> int:
        k %= int(self.element_orders[a])
        x = 0
        for _ in range(k):
            x = int(self.table[x, a])
        return x

    def closure(self, gens: Sequence[int]) -> list:
        """Sorted elements of the subgroup generated by ``gens``."""
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    @cached_property
    def generators(self) -> tuple:
        """A small generating set, chosen greedily by largest element order."""
        by_order = sorted(range(1, self.order), key=lambda a: (-int(self.element_orders[a]), a))
        gens: list = []
        span = {0}
        for a in by_order:
            if len(span) == self.order:
                break
            if a not in span:
                gens.append(a)
                span = set(self.closure(gens))
        return tuple(gens)

    def center(self) -> list:
        return [z for z in range(self.order) if np.array_equal(self.table[z], self.table[:, z])]

    def commutator_subgroup(self) -> list:
        t, inv = self.table, self.inverses
        comms = {int(t[t[a, b], t[inv[a], inv[b]]]) for a in range(self.order) for b in range(self.order)}
        return self.closure(sorted(comms))

    def to_json(self) -> dict:
        out = {"order": self.order, "table": self.table.tolist()}
        if self.names:
            out["names"] = list(self.names)
        return out


def from_table(table, names=None) -> FiniteGroup:
    """Validate a multiplication table and wrap it as a :class:`FiniteGroup`.

    Raises the first violated invariant, naming the offending index or triple.
    """
    try:
        arr = np.array(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"table is not a rectangular integer array: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValidationError(f"table must be a non-empty square array, got shape {arr.shape}")
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        i, j = np.argwhere((arr < 0) | (arr >= n))[0]
        raise ValidationError(f"entry table[{i}][{j}]={arr[i, j]} out of range 0..{n - 1}")
    idx = np.arange(n)
    bad = np.flatnonzero((arr[0] != idx) | (arr[:, 0] != idx))
    if bad.size:
        raise NoIdentityAtZero(f"index 0 is not a two-sided unit at element {bad[0]}")
    for i in range(n):
        if len(set(arr[i].tolist())) != n:
            raise NotLatinSquare(f"row {i} repeats an entry")
        if len(set(arr[:, i].tolist())) != n:
            raise NotLatinSquare(f"column {i} repeats an entry")
    has_inv = (arr == 0).any(axis=1)
    if not has_inv.all():
        raise MissingInverse(f"element {int(np.flatnonzero(~has_inv)[0])} has no right inverse")
    lhs = arr[arr[:, :, None], idx[None, None, :]]  # (ij)k
    rhs = arr[idx[:, None, None], arr[None, :, :]]
    viol = np.argwhere(lhs != rhs)
    if viol.size:
        i, j, k = (int(v) for v in viol[0])
        raise NotAssociative(f"(x{i} x{j}) x{k} != x{i} (x{j} x{k})")
    if names is not None:
        if len(names) != n:
            raise ValidationError(f"{len(names)} names given for a group of order {n}")
        names = tuple(str(s) for s in names)
    return FiniteGroup(_frozen(arr), names)


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A map between finite groups; not necessarily a homomorphism until checked."""

    source: FiniteGroup
    target: FiniteGroup
    map: np.ndarray = field(repr=True)

    def __post_init__(self):
        object.__setattr__(self, "map", _frozen(self.map))

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def key(self) -> tuple:
        return tuple(self.map.tolist())

    def __eq__(self, other):
        return (
            isinstance(other, GroupHom)
            and self.source == other.source
            and self.target == other.target
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"GroupHom({list(self.key())})"

    def is_bijective(self) -> bool:
        return len(set(self.key())) == self.source.order == self.target.order

    def is_injective(self) -> bool:
        return len(set(self.key())) == self.source.order

    def image(self) -> list:
        return sorted(set(self.key()))

    def kernel(self) -> list:
        return [int(x) for x in np.flatnonzero(self.map == 0)]


def check_hom(f: GroupHom) -> bool:
    m = f.map
    if m.shape != (f.source.order,) or m.min() < 0 or m.max() >= f.target.order:
        return False
    if m[0] != 0:
        return False
    return bool(np.array_equal(m[f.source.table], f.target.table[m[:, None], m[None, :]]))


def hom(source: FiniteGroup, target: FiniteGroup, images) -> GroupHom:
    """Build a homomorphism, raising :class:`NotAHomomorphism` if it is not one."""
    images = np.asarray(images, dtype=np.int64)
    if images.shape != (source.order,) or images.min() < 0 or images.max() >= target.order:
        raise NotAHomomorphism(f"map {images.tolist()} has the wrong shape or range")
    f = GroupHom(source, target, images)
    if not check_hom(f):
        raise NotAHomomorphism(f"map {images.tolist()} does not preserve products")
    return f


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order))


def compose(g: GroupHom, f: GroupHom) -> GroupHom:
    """``g o f``."""
    return GroupHom(f.source, g.target, g.map[f.map])


def _extend_from_generators(G, H, gens, imgs):
    """Extend generator images to a full map, or None if inconsistent."""
    img = np.full(G.order, -1, dtype=np.int64)
    img[0] = 0
    frontier = [0]
    tG, tH = G.table, H.table
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, imgs):
                y = tG[x, g]
                v = tH[img[x], h]
                if img[y] < 0:
                    img[y] = v
                    nxt.append(y)
                elif img[y] != v:
                    return None
        frontier = nxt
    return img


def enumerate_homs(G: FiniteGroup, H: FiniteGroup, limits: Optional[Limits] = None) -> list:
    """All homomorphisms ``G -> H`` in lexicographic order of their map arrays.

    Candidates are generator-image tuples (``|H|^k`` for ``k`` generators of
    ``G``); each candidate is extended along the Cayley graph and kept only if
    it is consistent.
    """
    limits = resolve(limits)
    gens = G.generators
    check_space(H.order ** len(gens), limits, "enumerate_homs")
    if not gens:
        return [GroupHom(G, H, np.zeros(G.order, dtype=np.int64))]
    # a generator of order k must go to an element whose order divides k
    g_ord = G.element_orders
    h_ord = H.element_orders
    choices = [[h for h in range(H.order) if g_ord[g] % h_ord[h] == 0] for g in gens]

    def search(first_choices):
        found = []

        def rec(i, imgs):
            if i == len(gens):
                img = _extend_from_generators(G, H, gens, imgs)
                if img is not None:
                    found.append(img)
                return
            pool = first_choices if i == 0 else choices[i]
            for h in pool:
                imgs.append(h)
                rec(i + 1, imgs)
                imgs.pop()

        rec(0, [])
        return found

    workers = max(1, limits.workers)
    if workers == 1:
        maps = search(choices[0])
    else:
        chunks = [choices[0][k::workers] for k in range(workers)]
        with ThreadPoolExecutor(workers) as pool:
            maps = [m for part in pool.map(search, chunks) for m in part]
    homs = [GroupHom(G, H, m) for m in maps]
    homs.sort(key=GroupHom.key)
    return homs


def enumerate_homs_bruteforce(G: FiniteGroup, H: FiniteGroup, limits: Optional[Limits] = None) -> list:
    """Reference enumeration over all ``|H|^|G|`` maps; kept as an oracle."""
    import itertools

    check_space(H.order ** G.order, resolve(limits), "enumerate_homs_bruteforce")
    out = []
    for tail in itertools.product(range(H.order), repeat=G.order - 1):
        f = GroupHom(G, H, (0,) + tail)
        if check_hom(f):
            out.append(f)
    return out


def conjugate_hom(f: GroupHom, h: int) -> GroupHom:
    """``x -> h f(x) h^-1``."""
    return GroupHom(f.source, f.target, f.target.conjugation[h][f.map])


def _classes(homs, H):
    index = {f.key(): i for i, f in enumerate(homs)}
    cls = [-1] * len(homs)
    classes = []
    for i, f in enumerate(homs):  # homs are sorted, so the first member of a class is its least
        if cls[i] >= 0:
            continue
        members = set()
        for h in range(H.order):
            members.add(index[conjugate_hom(f, h).key()])
        for k in members:
            cls[k] = len(classes)
        classes.append([homs[k] for k in sorted(members)])
    return classes


def hom_conjugacy_classes(G: FiniteGroup, H: FiniteGroup, limits: Optional[Limits] = None) -> list:
    """Partition ``Hom(G, H)`` into ``H``-conjugacy classes, ordered by least member."""
    return _classes(enumerate_homs(G, H, limits), H)


@dataclass(frozen=True)
class Automorphisms:
    aut: list
    inner: list
    outer_class_count: int


def automorphisms(G: FiniteGroup, limits: Optional[Limits] = None) -> Automorphisms:
    aut = [f for f in enumerate_homs(G, G, limits) if f.is_bijective()]
    inner_keys = {tuple(G.conjugation[h].tolist()) for h in range(G.order)}
    inner = [f.key() in inner_keys for f in aut]
    # Out(G): orbits of Aut(G) under post-composition with inner automorphisms
    return Automorphisms(aut, inner, len(_classes(aut, G)))


def is_isomorphic_map(f: GroupHom) -> bool:
    return f.is_bijective() and check_hom(f)
