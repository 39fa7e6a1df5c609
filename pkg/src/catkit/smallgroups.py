"""Constructors for small groups and isomorphism labelling up to order 16."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .groups import FiniteGroup, check_hom, from_table, GroupHom


def _from_elements(elements, mul, names=None):
    """Table of a group given as a list of hashable elements, identity first."""
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return from_table(table, names)


def cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return from_table((idx[:, None] + idx[None, :]) % n)


def trivial() -> FiniteGroup:
    return cyclic(1)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Element ``(g, h)`` sits at index ``g * |H| + h``."""
    n, m = G.order, H.order
    g = np.arange(n * m) // m
    h = np.arange(n * m) % m
    table = G.table[g[:, None], g[None, :]] * m + H.table[h[:, None], h[None, :]]
    return from_table(table)


def permutation_group(gens, degree: int) -> FiniteGroup:
    """Closure of permutations (tuples of images) under composition ``(p q)(i) = p(q(i))``."""
    ident = tuple(range(degree))
    elements = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(degree))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        elements.extend(nxt)
        frontier = nxt
    elements = [ident] + sorted(elements[1:])
    return _from_elements(elements, lambda p, q: tuple(p[q[i]] for i in range(degree)))


def symmetric(n: int) -> FiniteGroup:
    elements = sorted(itertools.permutations(range(n)))
    return _from_elements(elements, lambda p, q: tuple(p[q[i]] for i in range(n)))


def alternating(n: int) -> FiniteGroup:
    def even(p):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inv % 2 == 0

    elements = sorted(p for p in itertools.permutations(range(n)) if even(p))
    return _from_elements(elements, lambda p, q: tuple(p[q[i]] for i in range(n)))


def metacyclic(m: int, n: int, r: int, k: int = 0) -> FiniteGroup:
    """``<a, b | a^m, b^n = a^k, b a b^-1 = a^r>`` with elements ``a^i b^j``.

    Requires ``r^n = 1`` and ``r k = k`` modulo ``m``.
    """
    if pow(r, n, m) != 1 % m or (r * k - k) % m:
        raise ValueError(f"inconsistent metacyclic data m={m} n={n} r={r} k={k}")
    elements = [(i, j) for j in range(n) for i in range(m)]

    def mul(x, y):
        i, j = x
        i2, j2 = y
        a = i + pow(r, j, m) * i2
        b = j + j2
        if b >= n:
            b -= n
            a += k
        return (a % m, b)

    return _from_elements(elements, mul)


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the ``n``-gon, order ``2n``."""
    return metacyclic(n, 2, n - 1 if n > 1 else 0)


def dicyclic(n: int) -> FiniteGroup:
    """Order ``4n``; ``dicyclic(2)`` is the quaternion group."""
    return metacyclic(2 * n, 2, 2 * n - 1, n)


def semidirect_cyclic(N: FiniteGroup, auto, n: int) -> FiniteGroup:
    """``N x| Z/n`` where the generator acts by the automorphism array ``auto``."""
    auto = np.asarray(auto)
    powers = [np.arange(N.order)]
    for _ in range(n - 1):
        powers.append(auto[powers[-1]])
    if not np.array_equal(auto[powers[-1]], powers[0]):
        raise ValueError("automorphism order does not divide n")
    elements = [(x, j) for j in range(n) for x in range(N.order)]

    def mul(a, b):
        x, i = a
        y, j = b
        return (int(N.table[x, powers[i][y]]), (i + j) % n)

    return _from_elements(elements, mul)


def _z4z2_auto(images_a, images_b):
    """Z4 x Z2 with generators ``a=(1,0)``, ``b=(0,1)`` and the automorphism fixed by their images."""
    G = direct_product(cyclic(4), cyclic(2))
    a, b = 2, 1  # (1,0) and (0,1) under index g*2+h
    img = np.full(G.order, -1)
    for i in range(4):
        for j in range(2):
            x = G.table[G.power(a, i), G.power(b, j)]
            y = G.table[G.power(images_a, i), G.power(images_b, j)]
            img[x] = y
    return G, img


@lru_cache(maxsize=None)
def library() -> tuple:
    """Named groups of every order up to 16, one per isomorphism class."""
    Z = cyclic
    P = direct_product
    out = [("1", Z(1))]
    for n in range(2, 17):
        out.append((f"Z{n}", Z(n)))
    out += [
        ("Z2xZ2", P(Z(2), Z(2))),
        ("S3", symmetric(3)),
        ("Z4xZ2", P(Z(4), Z(2))),
        ("Z2xZ2xZ2", P(P(Z(2), Z(2)), Z(2))),
        ("D4", dihedral(4)),
        ("Q8", dicyclic(2)),
        ("Z3xZ3", P(Z(3), Z(3))),
        ("D5", dihedral(5)),
        ("Z6xZ2", P(Z(6), Z(2))),
        ("D6", dihedral(6)),
        ("A4", alternating(4)),
        ("Dic3", dicyclic(3)),
        ("D7", dihedral(7)),
        ("Z4xZ4", P(Z(4), Z(4))),
        ("Z8xZ2", P(Z(8), Z(2))),
        ("Z4xZ2xZ2", P(P(Z(4), Z(2)), Z(2))),
        ("Z2xZ2xZ2xZ2", P(P(P(Z(2), Z(2)), Z(2)), Z(2))),
        ("D4xZ2", P(dihedral(4), Z(2))),
        ("Q8xZ2", P(dicyclic(2), Z(2))),
        ("Z4:Z4", metacyclic(4, 4, 3)),
        ("M16", metacyclic(8, 2, 5)),
        ("D8", dihedral(8)),
        ("SD16", metacyclic(8, 2, 3)),
        ("Q16", dicyclic(4)),
    ]
    # (Z4 x Z2) x| Z2 in two inequivalent ways: c a c = a b, and c b c = a^2 b
    G, auto = _z4z2_auto(images_a=3, images_b=1)  # a -> a b
    out.append(("(Z4xZ2):Z2", semidirect_cyclic(G, auto, 2)))
    G, auto = _z4z2_auto(images_a=2, images_b=5)  # b -> a^2 b
    out.append(("Z4oD4", semidirect_cyclic(G, auto, 2)))
    out.sort(key=lambda item: item[1].order)
    return tuple(out)


def fingerprint(G: FiniteGroup) -> tuple:
    orders = G.element_orders
    hist = tuple(sorted(np.unique(orders, return_counts=True)[1].tolist()))
    dist = tuple(sorted(zip(*np.unique(orders, return_counts=True))))
    sq = G.table[np.arange(G.order), np.arange(G.order)]
    return (
        G.order,
        G.is_abelian(),
        tuple((int(a), int(b)) for a, b in dist),
        len(G.center()),
        len(G.commutator_subgroup()),
        len(set(sq.tolist())),
        hist,
    )


def find_isomorphism(G: FiniteGroup, H: FiniteGroup):
    """An isomorphism ``G -> H`` as a :class:`GroupHom`, or ``None``."""
    if G.order != H.order or fingerprint(G) != fingerprint(H):
        return None
    gens = G.generators
    if not gens:
        return GroupHom(G, H, [0])
    g_ord, h_ord = G.element_orders, H.element_orders
    pools = [[h for h in range(H.order) if h_ord[h] == g_ord[g]] for g in gens]
    from .groups import _extend_from_generators

    for imgs in itertools.product(*pools):
        img = _extend_from_generators(G, H, gens, list(imgs))
        if img is None or len(set(img.tolist())) != H.order:
            continue
        f = GroupHom(G, H, img)
        if check_hom(f):
            return f
    return None


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None


def identify(G: FiniteGroup) -> str:
    """Name of ``G`` from :func:`library`, or ``order<n>#?`` when unlisted."""
    for name, H in library():
        if H.order == G.order and is_isomorphic(G, H):
            return name
    return f"order{G.order}#?"


def by_name(name: str) -> FiniteGroup:
    aliases = {"K4": "Z2xZ2", "V4": "Z2xZ2", "Z1": "1", "D3": "S3", "Q": "Q8"}
    key = aliases.get(name, name)
    for label, G in library():
        if label == key:
            return G
    if key.startswith("S") and key[1:].isdigit():
        return symmetric(int(key[1:]))
    if key.startswith("A") and key[1:].isdigit():
        return alternating(int(key[1:]))
    if key.startswith("Z") and key[1:].isdigit():
        return cyclic(int(key[1:]))
    if key.startswith("D") and key[1:].isdigit():
        return dihedral(int(key[1:]))
    raise KeyError(f"unknown group name {name!r}")


def groups_of_order(n: int) -> list:
    return [(name, G) for name, G in library() if G.order == n]
