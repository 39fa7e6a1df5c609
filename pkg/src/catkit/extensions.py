"""Group extensions, bundle categorification, factor sets and weak equivalence.

Products are written multiplicatively throughout: ``f(x, y) = s(x) s(y) s(xy)^-1``
read inside ``N`` through ``j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .categories import UNDEFINED, FinCategory, Functor, MonoidalStructure
from .categorify import discrete
from .config import Limits, check_space, resolve
from .errors import (
    CocycleViolation,
    CompatibilityViolation,
    FiberEscape,
    ImageKernelMismatch,
    NotAHomomorphism,
    NotInjective,
    NotSurjective,
    ValidationError,
)
from .groups import FiniteGroup, GroupHom, automorphisms, check_hom, identity_hom
from .smallgroups import identify, trivial


@dataclass(frozen=True, eq=False)
class GroupExtension:
    """``1 -> N -j-> E -p-> G -> 1``. Build through :func:`build_extension`."""

    N: FiniteGroup
    E: FiniteGroup
    G: FiniteGroup
    j: GroupHom
    p: GroupHom

    @cached_property
    def j_inverse(self) -> np.ndarray:
        """``j_inverse[e]`` is the ``n`` with ``j(n) = e``, or ``-1`` off the kernel."""
        out = np.full(self.E.order, -1, dtype=np.int64)
        out[self.j.map] = np.arange(self.N.order)
        return out

    def fiber(self, x: int) -> list:
        return [int(e) for e in np.flatnonzero(self.p.map == x)]

    def to_json(self) -> dict:
        return {
            "N": self.N.to_json(),
            "E": self.E.to_json(),
            "G": self.G.to_json(),
            "j": self.j.map.tolist(),
            "p": self.p.map.tolist(),
        }


def build_extension(N: FiniteGroup, E: FiniteGroup, G: FiniteGroup, j, p) -> GroupExtension:
    jh = GroupHom(N, E, j)
    ph = GroupHom(E, G, p)
    for name, h in (("j", jh), ("p", ph)):
        if h.map.shape != (h.source.order,) or not check_hom(h):
            raise NotAHomomorphism(f"{name} = {h.map.tolist()} is not a homomorphism")
    if not jh.is_injective():
        raise NotInjective(f"j = {jh.map.tolist()} is not injective")
    if len(ph.image()) != G.order:
        raise NotSurjective(f"p = {ph.map.tolist()} misses elements of G")
    if jh.image() != ph.kernel():
        raise ImageKernelMismatch(f"image(j) = {jh.image()} but kernel(p) = {ph.kernel()}")
    return GroupExtension(N, E, G, jh, ph)


def trivial_extension(G: FiniteGroup, role: str) -> GroupExtension:
    """``role="base"``: ``1 -> G -> G -> 1 -> 1``; ``role="fiber"``: ``1 -> 1 -> G -> G -> 1``."""
    one = trivial()
    if role == "base":
        return build_extension(G, G, one, np.arange(G.order), np.zeros(G.order, dtype=np.int64))
    if role == "fiber":
        return build_extension(one, G, G, [0], np.arange(G.order))
    raise ValueError(f"role must be 'base' or 'fiber', not {role!r}")


# --------------------------------------------------------------------------- bundle categorification


@dataclass(frozen=True, eq=False)
class Bundle:
    category: FinCategory
    monoidal: MonoidalStructure
    fiber_functor: Functor  # to the discrete categorification of G
    pair_index: np.ndarray  # pair_index[e, e'] is the morphism e -> e', or -1


def bundle_categorify(ext: GroupExtension) -> Bundle:
    """Groupoid on ``E`` with one morphism ``e -> e'`` whenever ``p(e) = p(e')``."""
    E, p = ext.E, ext.p.map
    n = E.order
    pairs = [(a, b) for a in range(n) for b in range(n) if p[a] == p[b]]
    index = np.full((n, n), UNDEFINED, dtype=np.int64)
    for k, (a, b) in enumerate(pairs):
        index[a, b] = k
    src = np.array([a for a, _ in pairs], dtype=np.int64)
    tgt = np.array([b for _, b in pairs], dtype=np.int64)
    comp = np.where(tgt[None, :] == src[:, None], index[src[None, :], tgt[:, None]], UNDEFINED)
    names = tuple(E.label(i) for i in range(n))
    C = FinCategory(n, src, tgt, comp, index[np.arange(n), np.arange(n)], names)
    T = E.table
    tm = index[T[src[:, None], src[None, :]], T[tgt[:, None], tgt[None, :]]]
    M = MonoidalStructure(C, 0, T, tm)
    D, _ = discrete(ext.G)
    fib = Functor(C, D, p, p[src])
    return Bundle(C, M, fib, index)


def bundle_covering(ext: GroupExtension, bundle: Optional[Bundle] = None) -> Functor:
    """Fiberwise covering functor ``B_E -> C_N``: ``e -> e'`` goes to the ``n`` with ``j(n) = e' e^-1``."""
    from .categorify import tautological

    bundle = bundle or bundle_categorify(ext)
    C = bundle.category
    E = ext.E
    images = ext.j_inverse[E.table[C.tgt, E.inverses[C.src]]]
    return Functor(C, tautological(ext.N), np.zeros(C.object_count, dtype=np.int64), images)


# --------------------------------------------------------------------------- sections


@dataclass(frozen=True, eq=False)
class Section:
    ext: GroupExtension
    s: np.ndarray

    def key(self) -> tuple:
        return tuple(self.s.tolist())


def make_section(ext: GroupExtension, s) -> Section:
    s = np.array(s, dtype=np.int64)
    s.setflags(write=False)
    if s.shape != (ext.G.order,) or s.min() < 0 or s.max() >= ext.E.order:
        raise ValidationError(f"section {s.tolist()} has the wrong shape or range")
    bad = np.flatnonzero(ext.p.map[s] != np.arange(ext.G.order))
    if bad.size:
        raise ValidationError(f"p(s({bad[0]})) != {bad[0]}")
    if s[0] != 0:
        raise ValidationError("sections must be normalized: s(1) = 1")
    return Section(ext, s)


def canonical_section(ext: GroupExtension) -> Section:
    """Least element of every fiber."""
    return make_section(ext, [ext.fiber(x)[0] for x in range(ext.G.order)])


def all_sections(ext: GroupExtension):
    fibers = [ext.fiber(x) for x in range(1, ext.G.order)]
    for choice in itertools.product(*fibers):
        yield make_section(ext, (0,) + choice)


@dataclass(frozen=True, eq=False)
class SectionFunctor:
    functor: Functor  # D_G -> B_E
    eta: np.ndarray  # eta[x, y]: S(xy) -> S(x) S(y)
    monoidal: bool  # the coherence hexagon commutes for all triples


def section_monoidal_functor(ext: GroupExtension, section: Section, bundle: Optional[Bundle] = None) -> SectionFunctor:
    bundle = bundle or bundle_categorify(ext)
    B, M, idx = bundle.category, bundle.monoidal, bundle.pair_index
    G, E = ext.G, ext.E
    s = section.s
    D, _ = discrete(G)
    S = Functor(D, B, s, B.identities[s])
    g = np.arange(G.order)
    eta = idx[s[G.table], E.table[s[:, None], s[None, :]]]
    if (eta == UNDEFINED).any():
        raise FiberEscape("s(xy) and s(x)s(y) lie in different fibers")
    a, b, c = np.ix_(g, g, g)
    ids = B.identities
    T = G.table
    tm = M.tensor_table
    # S((ab)c) -> S(ab) S(c) -> (S(a) S(b)) S(c)
    top = B.comp[tm[eta[a, b], ids[s[c]]], eta[T[a, b], c]]
    # S(a(bc)) -> S(a) S(bc) -> S(a) (S(b) S(c))
    bottom = B.comp[tm[ids[s[a]], eta[b, c]], eta[a, T[b, c]]]
    return SectionFunctor(S, eta, bool(np.array_equal(top, bottom)))


# --------------------------------------------------------------------------- factor sets


@dataclass(frozen=True, eq=False)
class FactorSet:
    G: FiniteGroup
    N: FiniteGroup
    table: np.ndarray  # |G| x |G| -> N

    def key(self) -> tuple:
        return tuple(self.table.reshape(-1).tolist())

    def is_normalized(self) -> bool:
        return not (self.table[0].any() or self.table[:, 0].any())


@dataclass(frozen=True, eq=False)
class QuasiAction:
    G: FiniteGroup
    N: FiniteGroup
    maps: np.ndarray  # maps[x] is the automorphism L(x) of N as an index array

    def key(self) -> tuple:
        return tuple(self.maps.reshape(-1).tolist())

    def __call__(self, x: int, n: int) -> int:
        return int(self.maps[x, n])


def _arr(a):
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


def make_factor_set(G, N, table) -> FactorSet:
    t = _arr(table)
    if t.shape != (G.order, G.order) or (t.size and (t.min() < 0 or t.max() >= N.order)):
        raise ValidationError("factor set must be a |G| x |G| table of elements of N")
    f = FactorSet(G, N, t)
    if not f.is_normalized():
        raise ValidationError("factor set must be normalized: f(1, x) = f(x, 1) = 1")
    return f


def make_quasi_action(G, N, maps) -> QuasiAction:
    m = _arr(maps)
    if m.shape != (G.order, N.order):
        raise ValidationError("quasi-action must be a |G| x |N| table")
    for x in range(G.order):
        if not GroupHom(N, N, m[x]).is_bijective() or not check_hom(GroupHom(N, N, m[x])):
            raise ValidationError(f"L({x}) is not an automorphism of N")
    if not np.array_equal(m[0], np.arange(N.order)):
        raise ValidationError("L(1) must be the identity")
    return QuasiAction(G, N, m)


def trivial_quasi_action(G, N) -> QuasiAction:
    return QuasiAction(G, N, _arr(np.tile(np.arange(N.order), (G.order, 1))))


def trivial_factor_set(G, N) -> FactorSet:
    return FactorSet(G, N, _arr(np.zeros((G.order, G.order))))


def factor_set(ext: GroupExtension, section: Section, bundle: Optional[Bundle] = None):
    """``f(x, y) = R_E(eta(x, y))`` and ``L(x)(n) = s(x) n s(x)^-1``, both read in ``N``."""
    bundle = bundle or bundle_categorify(ext)
    sf = section_monoidal_functor(ext, section, bundle)
    R = bundle_covering(ext, bundle)
    f = R.mor_map[sf.eta]
    E, s, j = ext.E, section.s, ext.j.map
    conj = ext.j_inverse[E.conjugation[s][:, j]]
    if (conj < 0).any() or (f < 0).any():
        raise FiberEscape("value left the image of j")
    return FactorSet(ext.G, ext.N, _arr(f)), QuasiAction(ext.G, ext.N, _arr(conj))


def factor_set_direct(ext: GroupExtension, section: Section) -> FactorSet:
    """``s(x) s(y) s(xy)^-1`` computed by multiplication in ``E`` alone."""
    E, G, s = ext.E, ext.G, section.s
    prod = E.table[E.table[s[:, None], s[None, :]], E.inverses[s[G.table]]]
    f = ext.j_inverse[prod]
    if (f < 0).any():
        raise FiberEscape("s(x)s(y)s(xy)^-1 is not in the image of j")
    return FactorSet(G, ext.N, _arr(f))


def cocycle_violation(f: FactorSet, L: QuasiAction) -> Optional[tuple]:
    """First ``(a, b, c)`` with ``f(a,b) f(ab,c) != L_a(f(b,c)) f(a,bc)``, or ``None``."""
    G, N = f.G, f.N
    T, F, NT = G.table, f.table, N.table
    g = np.arange(G.order)
    a, b, c = np.ix_(g, g, g)
    lhs = NT[F[a, b], F[T[a, b], c]]
    rhs = NT[L.maps[a, F[b, c]], F[a, T[b, c]]]
    bad = np.argwhere(lhs != rhs)
    return tuple(int(v) for v in bad[0]) if bad.size else None


def check_twisted_cocycle(f: FactorSet, L: QuasiAction) -> bool:
    return cocycle_violation(f, L) is None


def compatibility_violation(f: FactorSet, L: QuasiAction) -> Optional[tuple]:
    """First ``(x, y)`` with ``L(x) L(y) != C_{f(x,y)} L(xy)``, or ``None``."""
    G, N = f.G, f.N
    g = np.arange(G.order)
    lhs = L.maps[g[:, None, None], L.maps[None, :, :]]  # lhs[x, y, n] = L_x(L_y(n))
    rhs = N.conjugation[f.table[:, :, None], L.maps[G.table]]
    bad = np.argwhere((lhs != rhs).any(axis=2))
    return tuple(int(v) for v in bad[0]) if bad.size else None


def transform_pair(f: FactorSet, L: QuasiAction, gamma) -> tuple:
    """The pair obtained by changing the section by ``gamma``: ``s'(x) = gamma(x) s(x)``.

    ``L'(x) = C_{gamma(x)} L(x)`` and ``f'(x,y) = gamma(x) L_x(gamma(y)) f(x,y) gamma(xy)^-1``.
    """
    G, N = f.G, f.N
    gamma = np.asarray(gamma, dtype=np.int64)
    NT = N.table
    L2 = N.conjugation[gamma[:, None], L.maps]
    g = np.arange(G.order)
    x, y = g[:, None], g[None, :]
    f2 = NT[NT[NT[gamma[x], L.maps[x, gamma[y]]], f.table], N.inverses[gamma[G.table]]]
    return FactorSet(G, N, _arr(f2)), QuasiAction(G, N, _arr(L2))


def weak_equivalent(f: FactorSet, L: QuasiAction, f2: FactorSet, L2: QuasiAction,
                    limits: Optional[Limits] = None) -> Optional[np.ndarray]:
    """A normalized ``gamma: G -> N`` relating the two pairs, or ``None``.

    The witness satisfies ``L'(x) = C_{gamma(x)} L(x)`` and
    ``f'(x,y) gamma(xy) = gamma(x) L_x(gamma(y)) f(x,y)``; the left factor
    ``gamma(x) L_x(gamma(y))`` equals ``L'_x(gamma(y)) gamma(x)``. When ``N``
    is abelian and ``L = L'`` this is the usual coboundary relation.
    """
    G, N = f.G, f.N
    if f2.G != G or f2.N != N:
        raise ValidationError("pairs are over different groups")
    check_space(N.order ** max(G.order - 1, 0), resolve(limits), "weak_equivalent")
    # gamma(x) is pinned down up to the center by the quasi-actions
    options = [[0]]
    for x in range(1, G.order):
        want = L2.maps[x]
        opts = [n for n in range(N.order) if np.array_equal(N.conjugation[n][L.maps[x]], want)]
        if not opts:
            return None
        options.append(opts)
    NT = N.table
    g = np.arange(G.order)
    x, y = g[:, None], g[None, :]
    for choice in itertools.product(*options):
        gamma = np.array(choice, dtype=np.int64)
        lhs = NT[f2.table, gamma[G.table]]
        rhs = NT[NT[gamma[x], L.maps[x, gamma[y]]], f.table]
        if np.array_equal(lhs, rhs):
            return gamma
    return None


def crossed_product(N: FiniteGroup, G: FiniteGroup, L: QuasiAction, f: FactorSet) -> GroupExtension:
    """``E = N x G`` with ``(m, x)(n, y) = (m L_x(n) f(x, y), xy)``; ``(n, x)`` has index ``x |N| + n``."""
    bad = cocycle_violation(f, L)
    if bad:
        raise CocycleViolation(f"twisted cocycle law fails at (a, b, c) = {bad}")
    bad = compatibility_violation(f, L)
    if bad:
        raise CompatibilityViolation(f"L(x) L(y) != C_f(x,y) L(xy) at (x, y) = {bad}")
    k = N.order
    e = np.arange(k * G.order)
    n, x = e % k, e // k
    NT = N.table
    nn = NT[NT[n[:, None], L.maps[x[:, None], n[None, :]]], f.table[x[:, None], x[None, :]]]
    table = G.table[x[:, None], x[None, :]] * k + nn
    from .groups import from_table

    E = from_table(table)
    return build_extension(N, E, G, np.arange(k), x)


def canonical_crossed_section(ext: GroupExtension) -> Section:
    """``s(x) = (1, x)`` in a crossed product."""
    return make_section(ext, np.arange(ext.G.order) * ext.N.order)


# --------------------------------------------------------------------------- classification


def _inner_set(N):
    return {tuple(N.conjugation[h].tolist()) for h in range(N.order)}


def valid_pairs(G: FiniteGroup, N: FiniteGroup, limits: Optional[Limits] = None,
                trivial_action: bool = False):
    """All ``(L, f)`` with the twisted cocycle law and compatibility, ``L`` then ``f`` lexicographic."""
    limits = resolve(limits)
    aut = sorted(automorphisms(N, limits).aut, key=GroupHom.key)
    if trivial_action:
        aut = [identity_hom(N)]
    ng, nn = G.order, N.order
    check_space(len(aut) ** max(ng - 1, 0) * nn ** ((ng - 1) ** 2), limits, "classify_extensions")
    T = G.table
    positions = [(x, y) for x in range(1, ng) for y in range(1, ng)]
    pos_of = {p: i for i, p in enumerate(positions)}
    # each cocycle triple is checked once its last-filled entry is assigned
    triples_at = [[] for _ in positions]
    for a in range(1, ng):
        for b in range(1, ng):
            for c in range(1, ng):
                entries = [(a, b), (int(T[a, b]), c), (b, c), (a, int(T[b, c]))]
                idx = [pos_of[e] for e in entries if e in pos_of]
                triples_at[max(idx)].append((a, b, c))
    conj_index = {}
    for h in range(nn):
        conj_index.setdefault(tuple(N.conjugation[h].tolist()), []).append(h)
    NT = N.table
    for choice in itertools.product(aut, repeat=ng - 1):
        maps = np.stack([np.arange(nn)] + [a.map for a in choice]) if ng > 1 else np.arange(nn)[None, :]
        inv = np.argsort(maps, axis=1)
        # f(x, y) must realise L_x L_y L_xy^-1 as an inner automorphism
        options = {}
        ok = True
        for (x, y) in positions:
            target = maps[x][maps[y][inv[T[x, y]]]]
            opts = conj_index.get(tuple(target.tolist()))
            if not opts:
                ok = False
                break
            options[(x, y)] = opts
        if not ok:
            continue
        # normalized entries must give identity compatibility as well
        L = QuasiAction(G, N, _arr(maps))
        F = np.zeros((ng, ng), dtype=np.int64)

        def satisfied(a, b, c):
            return NT[F[a, b], F[T[a, b], c]] == NT[maps[a][F[b, c]], F[a, T[b, c]]]

        def rec(i):
            if i == len(positions):
                yield FactorSet(G, N, _arr(F))
                return
            x, y = positions[i]
            for v in options[(x, y)]:
                F[x, y] = v
                if all(satisfied(*t) for t in triples_at[i]):
                    yield from rec(i + 1)
            F[x, y] = 0

        for f in rec(0):
            yield L, f


@dataclass(frozen=True, eq=False)
class ExtensionClass:
    L: QuasiAction
    f: FactorSet
    middle_group: str
    class_size: int

    def to_json(self) -> dict:
        return {"L": self.L.maps.tolist(), "f": self.f.table.tolist(), "middle_group": self.middle_group}


def _gammas(G, N):
    for tail in itertools.product(range(N.order), repeat=G.order - 1):
        yield np.array((0,) + tail, dtype=np.int64)


def classify_extensions(G: FiniteGroup, N: FiniteGroup, limits: Optional[Limits] = None,
                        trivial_action: bool = False) -> list:
    """Weak-equivalence classes of ``(L, f)`` pairs with their middle groups.

    Classes are orbits of the section-change action; each is represented by
    its least member in enumeration order.
    """
    limits = resolve(limits)
    check_space(N.order ** max(G.order - 1, 0), limits, "classify_extensions orbit")
    seen = set()
    out = []
    gammas = list(_gammas(G, N))
    for L, f in valid_pairs(G, N, limits, trivial_action):
        key = (L.key(), f.key())
        if key in seen:
            continue
        orbit = set()
        for gamma in gammas:
            f2, L2 = transform_pair(f, L, gamma)
            orbit.add((L2.key(), f2.key()))
        seen |= orbit
        E = crossed_product(N, G, L, f).E
        out.append(ExtensionClass(L, f, identify(E), len(orbit)))
    return out
