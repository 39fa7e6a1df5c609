"""Tautological, discrete and simplicial categorification of finite groups.

Morphisms of the simplicial groupoid are indexed by ordered pairs:
``x -> y`` has index ``x * |G| + y``.
"""

from __future__ import annotations

import numpy as np

from .categories import (
    UNDEFINED,
    FinCategory,
    Functor,
    MonoidalStructure,
    NatTransformation,
    compose_functors,
    constant_functor,
    identity_functor,
)
from .errors import NotAHomomorphism
from .groups import FiniteGroup, GroupHom, check_hom

FLAVORS = ("tautological", "discrete", "simplicial")

# tensor tables beyond this group order are computed on demand
DENSE_TENSOR_MAX_ORDER = 16


def tautological(G: FiniteGroup) -> FinCategory:
    """One object; the morphisms are the group elements, composed by multiplication."""
    n = G.order
    names = tuple(G.label(i) for i in range(n))
    return FinCategory(1, np.zeros(n), np.zeros(n), G.table, [0], ("*",), names)


def discrete(G: FiniteGroup):
    """Objects are the elements, only identities; the product is a strict tensor."""
    n = G.order
    comp = np.full((n, n), UNDEFINED, dtype=np.int64)
    comp[np.arange(n), np.arange(n)] = np.arange(n)
    names = tuple(G.label(i) for i in range(n))
    C = FinCategory(n, np.arange(n), np.arange(n), comp, np.arange(n), names)
    return C, MonoidalStructure(C, 0, G.table, G.table)


def simplicial_index(n: int, x: int, y: int) -> int:
    return x * n + y


def simplicial(G: FiniteGroup):
    """Exactly one morphism between each ordered pair of elements."""
    n = G.order
    idx = np.arange(n * n)
    src, tgt = idx // n, idx % n
    # g o f is defined iff tgt(f) == src(g), and then equals src(f) -> tgt(g)
    comp = np.where(tgt[None, :] == src[:, None], src[None, :] * n + tgt[:, None], UNDEFINED)
    names = tuple(G.label(i) for i in range(n))
    C = FinCategory(n, src, tgt, comp, idx[:: n + 1] if n else idx, names)
    T = G.table

    def tensor(f, g):
        return T[f // n, g // n] * n + T[f % n, g % n]

    if n <= DENSE_TENSOR_MAX_ORDER:
        tm = tensor(idx[:, None], idx[None, :])
    else:
        tm = lambda f, g: int(tensor(f, g))  # noqa: E731
    return C, MonoidalStructure(C, 0, T, tm)


def linearized_discrete(G: FiniteGroup, scalars: int):
    """Units of the linearised discrete category with scalars in ``Z/scalars``.

    Each object ``x`` carries the automorphisms ``(x, k)`` standing for the
    scalar ``zeta^k``, zeta a primitive root of unity; ``(x, k)`` has index
    ``x * scalars + k`` and the tensor multiplies scalars.
    """
    n, m = G.order, scalars
    idx = np.arange(n * m)
    obj, k = idx // m, idx % m
    comp = np.where(obj[:, None] == obj[None, :], obj[:, None] * m + (k[:, None] + k[None, :]) % m, UNDEFINED)
    C = FinCategory(n, obj, obj, comp, np.arange(n) * m)
    tm = G.table[obj[:, None], obj[None, :]] * m + (k[:, None] + k[None, :]) % m
    return C, MonoidalStructure(C, 0, G.table, tm)


def lift_hom(f: GroupHom, flavor: str) -> Functor:
    if not check_hom(f):
        raise NotAHomomorphism(f"{list(f.key())} is not a homomorphism")
    G, H = f.source, f.target
    m = f.map
    if flavor == "tautological":
        return Functor(tautological(G), tautological(H), [0], m)
    if flavor == "discrete":
        return Functor(discrete(G)[0], discrete(H)[0], m, m)
    if flavor == "simplicial":
        n = G.order
        idx = np.arange(n * n)
        return Functor(simplicial(G)[0], simplicial(H)[0], m, m[idx // n] * H.order + m[idx % n])
    raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")


def is_strict_monoidal(F: Functor, M: MonoidalStructure, N: MonoidalStructure) -> bool:
    """``F`` strictly preserves unit and tensor on objects and morphisms."""
    if F.obj_map[M.unit] != N.unit:
        return False
    o, m = F.obj_map, F.mor_map
    if not np.array_equal(o[M.tensor_obj], N.tensor_obj[o[:, None], o[None, :]]):
        return False
    return bool(np.array_equal(m[M.tensor_table], N.tensor_table[m[:, None], m[None, :]]))


def contraction_homotopy(G: FiniteGroup, base: int) -> NatTransformation:
    """Natural isomorphism from the collapse onto ``base`` to the identity of the simplicial groupoid."""
    if not 0 <= base < G.order:
        raise ValueError(f"base {base} out of range for a group of order {G.order}")
    S, _ = simplicial(G)
    n = G.order
    return NatTransformation(
        constant_functor(S, S, base),
        identity_functor(S),
        [simplicial_index(n, base, x) for x in range(n)],
    )


def covering_transformation(G: FiniteGroup) -> Functor:
    """The functor ``S_G -> C_G`` sending ``x -> y`` to ``y x^-1``."""
    n = G.order
    idx = np.arange(n * n)
    x, y = idx // n, idx % n
    return Functor(simplicial(G)[0], tautological(G), [0] * n, G.table[y, G.inverses[x]])


def covering_is_natural(f: GroupHom) -> bool:
    """The square ``C_f o R_G == R_H o S_f`` commutes."""
    left = compose_functors(lift_hom(f, "tautological"), covering_transformation(f.source))
    right = compose_functors(covering_transformation(f.target), lift_hom(f, "simplicial"))
    return left.key() == right.key()


def check_biequivariance(G: FiniteGroup) -> bool:
    """``R(I_a (x) m) = a R(m) a^-1`` and ``R(m (x) I_a) = R(m)`` for all ``a`` and ``m``."""
    n = G.order
    _, M = simplicial(G)
    R = covering_transformation(G).mor_map
    ident = np.arange(n) * (n + 1)  # I_a = a -> a
    mors = np.arange(n * n)
    left = np.array([[M.tensor(int(i), int(m)) for m in mors] for i in ident])
    right = np.array([[M.tensor(int(m), int(i)) for m in mors] for i in ident])
    conj = G.conjugation[np.arange(n)[:, None], R[None, :]]
    return bool(np.array_equal(R[left], conj) and np.array_equal(R[right], np.broadcast_to(R, (n, n * n))))
