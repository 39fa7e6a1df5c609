"""Finite categories, functors, natural transformations and monoidal structure data.

A :class:`FinCategory` stores morphisms as dense indices with ``src``/``tgt``
arrays and a composition table ``comp[g, f] = g o f`` that holds ``-1`` where
``tgt(f) != src(g)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Union

import numpy as np

from .config import Limits, check_space, resolve
from .errors import InvalidCategory, NotWellDefined

UNDEFINED = -1


def _frozen(arr):
    arr = np.array(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FinCategory:
    object_count: int
    src: np.ndarray
    tgt: np.ndarray
    comp: np.ndarray
    identities: np.ndarray
    object_names: Optional[tuple] = None
    morphism_names: Optional[tuple] = None

    def __post_init__(self):
        for name in ("src", "tgt", "comp", "identities"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def morphism_count(self) -> int:
        return len(self.src)

    def __repr__(self):
        return f"FinCategory(objects={self.object_count}, morphisms={self.morphism_count})"

    def compose(self, g: int, f: int) -> int:
        """``g o f``; raises if not composable."""
        h = int(self.comp[g, f])
        if h == UNDEFINED:
            raise InvalidCategory(f"morphisms {g} o {f} are not composable")
        return h

    def hom(self, x: int, y: int) -> list:
        return [int(m) for m in np.flatnonzero((self.src == x) & (self.tgt == y))]

    @cached_property
    def composable_pairs(self) -> np.ndarray:
        """Rows ``(g, f)`` with ``tgt(f) == src(g)``."""
        g, f = np.nonzero(self.tgt[None, :] == self.src[:, None])
        return np.stack([g, f], axis=1)

    @cached_property
    def inverses(self) -> np.ndarray:
        """``inverses[m]`` is the two-sided inverse of ``m`` or ``-1``."""
        out = np.full(self.morphism_count, UNDEFINED, dtype=np.int64)
        ids = self.identities
        for m in range(self.morphism_count):
            for k in self.hom(int(self.tgt[m]), int(self.src[m])):
                if self.comp[k, m] == ids[self.src[m]] and self.comp[m, k] == ids[self.tgt[m]]:
                    out[m] = k
                    break
        return out

    def is_identity(self, m: int) -> bool:
        return bool(self.identities[self.src[m]] == m)

    def object_label(self, x: int) -> str:
        return str(self.object_names[x]) if self.object_names else str(x)

    def morphism_label(self, m: int) -> str:
        if self.morphism_names:
            return str(self.morphism_names[m])
        return f"{self.object_label(int(self.src[m]))}->{self.object_label(int(self.tgt[m]))}#{m}"


def category_violation(C: FinCategory) -> Optional[str]:
    """First violated category axiom, or ``None``."""
    n, m = C.object_count, C.morphism_count
    if C.src.shape != (m,) or C.tgt.shape != (m,) or C.comp.shape != (m, m):
        return "shape mismatch between src, tgt and comp"
    if C.identities.shape != (n,):
        return "identities must list one morphism per object"
    if m and (C.src.min() < 0 or C.src.max() >= n or C.tgt.min() < 0 or C.tgt.max() >= n):
        return "src/tgt out of object range"
    for x in range(n):
        i = C.identities[x]
        if not (0 <= i < m) or C.src[i] != x or C.tgt[i] != x:
            return f"identity of object {x} is not an endomorphism of it"
    composable = C.tgt[None, :] == C.src[:, None]
    defined = C.comp != UNDEFINED
    if not np.array_equal(composable, defined):
        g, f = np.argwhere(composable != defined)[0]
        return f"comp[{g}][{f}] defined-ness disagrees with tgt({f}) == src({g})"
    g, f = C.composable_pairs.T
    h = C.comp[g, f]
    if h.size and (h.min() < 0 or h.max() >= m):
        return "composite out of morphism range"
    bad = (C.src[h] != C.src[f]) | (C.tgt[h] != C.tgt[g])
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        return f"comp[{g[k]}][{f[k]}] has the wrong source or target"
    idx = np.arange(m)
    if not np.array_equal(C.comp[C.identities[C.tgt], idx], idx):
        return "left identity law fails"
    if not np.array_equal(C.comp[idx, C.identities[C.src]], idx):
        return "right identity law fails"
    for a, b in C.composable_pairs:
        for c in np.flatnonzero(C.src == C.tgt[a]):
            if C.comp[c, C.comp[a, b]] != C.comp[C.comp[c, a], b]:
                return f"associativity fails at ({c}, {a}, {b})"
    return None


def make_category(object_count, src, tgt, comp, identities, object_names=None, morphism_names=None) -> FinCategory:
    C = FinCategory(object_count, src, tgt, comp, identities, object_names, morphism_names)
    msg = category_violation(C)
    if msg:
        raise InvalidCategory(msg)
    return C


def category_from_relation(n: int, related) -> FinCategory:
    """Thin category on ``range(n)`` with a morphism ``x -> y`` whenever ``related(x, y)``.

    ``related`` must be reflexive and transitive; an equivalence relation gives a groupoid.
    """
    pairs = [(x, y) for x in range(n) for y in range(n) if related(x, y)]
    index = {p: i for i, p in enumerate(pairs)}
    m = len(pairs)
    comp = np.full((m, m), UNDEFINED, dtype=np.int64)
    for (x, y), f in index.items():
        for (y2, z), g in index.items():
            if y2 == y:
                comp[g, f] = index[(x, z)]
    src = [p[0] for p in pairs]
    tgt = [p[1] for p in pairs]
    ids = [index[(x, x)] for x in range(n)]
    return make_category(n, src, tgt, comp, ids)


def is_groupoid(C: FinCategory) -> bool:
    return bool((C.inverses != UNDEFINED).all())


def is_thin(C: FinCategory) -> bool:
    pairs = set(zip(C.src.tolist(), C.tgt.tolist()))
    return len(pairs) == C.morphism_count


# --------------------------------------------------------------------------- functors


@dataclass(frozen=True, eq=False)
class Functor:
    source: FinCategory
    target: FinCategory
    obj_map: np.ndarray
    mor_map: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "obj_map", _frozen(self.obj_map))
        object.__setattr__(self, "mor_map", _frozen(self.mor_map))

    def key(self) -> tuple:
        return (tuple(self.obj_map.tolist()), tuple(self.mor_map.tolist()))

    def __eq__(self, other):
        return (
            isinstance(other, Functor)
            and self.key() == other.key()
            and _same_category(self.source, other.source)
            and _same_category(self.target, other.target)
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Functor(obj={self.obj_map.tolist()}, mor={self.mor_map.tolist()})"


def _same_category(C: FinCategory, D: FinCategory) -> bool:
    return (
        C.object_count == D.object_count
        and np.array_equal(C.src, D.src)
        and np.array_equal(C.tgt, D.tgt)
        and np.array_equal(C.comp, D.comp)
        and np.array_equal(C.identities, D.identities)
    )


def functor_violation(F: Functor) -> Optional[str]:
    C, D = F.source, F.target
    if F.obj_map.shape != (C.object_count,) or F.mor_map.shape != (C.morphism_count,):
        return "map shapes do not match the source category"
    if C.object_count and (F.obj_map.min() < 0 or F.obj_map.max() >= D.object_count):
        return "object map out of range"
    if C.morphism_count and (F.mor_map.min() < 0 or F.mor_map.max() >= D.morphism_count):
        return "morphism map out of range"
    fm = F.mor_map
    bad = (D.src[fm] != F.obj_map[C.src]) | (D.tgt[fm] != F.obj_map[C.tgt])
    if bad.any():
        return f"morphism {int(np.flatnonzero(bad)[0])} is sent to the wrong hom-set"
    bad = fm[C.identities] != D.identities[F.obj_map]
    if bad.any():
        return f"identity of object {int(np.flatnonzero(bad)[0])} not preserved"
    g, f = C.composable_pairs.T
    bad = fm[C.comp[g, f]] != D.comp[fm[g], fm[f]]
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        return f"composition {g[k]} o {f[k]} not preserved"
    return None


def check_functor(F: Functor) -> bool:
    return functor_violation(F) is None


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, np.arange(C.object_count), np.arange(C.morphism_count))


def constant_functor(C: FinCategory, D: FinCategory, obj: int) -> Functor:
    return Functor(C, D, np.full(C.object_count, obj), np.full(C.morphism_count, D.identities[obj]))


def compose_functors(G: Functor, F: Functor) -> Functor:
    """``G o F``."""
    return Functor(F.source, G.target, G.obj_map[F.obj_map], G.mor_map[F.mor_map])


# --------------------------------------------------------------------------- transformations


@dataclass(frozen=True, eq=False)
class NatTransformation:
    source: Functor
    target: Functor
    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "components", _frozen(self.components))

    def __repr__(self):
        return f"NatTransformation({self.components.tolist()})"


def natural_violation(eta: NatTransformation) -> Optional[str]:
    F, G = eta.source, eta.target
    C, D = F.source, F.target
    comps = eta.components
    if comps.shape != (C.object_count,):
        return "one component per source object required"
    if C.object_count and (comps.min() < 0 or comps.max() >= D.morphism_count):
        return "component out of morphism range"
    bad = (D.src[comps] != F.obj_map) | (D.tgt[comps] != G.obj_map)
    if bad.any():
        return f"component at {int(np.flatnonzero(bad)[0])} has the wrong source or target"
    # G(m) o eta_x == eta_y o F(m) for m: x -> y
    lhs = D.comp[G.mor_map, comps[C.src]]
    rhs = D.comp[comps[C.tgt], F.mor_map]
    bad = lhs != rhs
    if bad.any():
        return f"naturality square fails at morphism {int(np.flatnonzero(bad)[0])}"
    return None


def check_natural(eta: NatTransformation) -> bool:
    return natural_violation(eta) is None


def identity_transformation(F: Functor) -> NatTransformation:
    return NatTransformation(F, F, F.target.identities[F.obj_map])


def vertical_compose(theta: NatTransformation, eta: NatTransformation) -> NatTransformation:
    """``theta . eta`` for ``eta: F => G`` and ``theta: G => H``."""
    D = eta.source.target
    return NatTransformation(eta.source, theta.target, D.comp[theta.components, eta.components])


def is_natural_isomorphism(eta: NatTransformation) -> bool:
    D = eta.source.target
    return check_natural(eta) and bool((D.inverses[eta.components] != UNDEFINED).all())


def functors_homotopic(F: Functor, G: Functor, limits: Optional[Limits] = None) -> Optional[NatTransformation]:
    """A natural isomorphism ``F => G`` or ``None``.

    Components are assigned object by object; every morphism whose endpoints
    are both assigned prunes the search through its naturality square.
    """
    C, D = F.source, F.target
    n = C.object_count
    candidates = []
    for x in range(n):
        hom = [m for m in D.hom(int(F.obj_map[x]), int(G.obj_map[x])) if D.inverses[m] != UNDEFINED]
        if not hom:
            return None
        candidates.append(hom)
    space = 1
    for c in candidates:
        space *= len(c)
    check_space(space, resolve(limits), "functors_homotopic")
    # morphisms whose later endpoint is x get checked once x is assigned
    checks = [[] for _ in range(n)]
    for m in range(C.morphism_count):
        checks[max(int(C.src[m]), int(C.tgt[m]))].append(m)
    comps = [-1] * n

    def ok(x):
        for m in checks[x]:
            a, b = int(C.src[m]), int(C.tgt[m])
            if D.comp[G.mor_map[m], comps[a]] != D.comp[comps[b], F.mor_map[m]]:
                return False
        return True

    def rec(x):
        if x == n:
            return True
        for c in candidates[x]:
            comps[x] = c
            if ok(x) and rec(x + 1):
                return True
        comps[x] = -1
        return False

    if rec(0):
        return NatTransformation(F, G, comps)
    return None


# --------------------------------------------------------------------------- monoidal data


TensorTable = Union[np.ndarray, Callable[[int, int], int]]


@dataclass(frozen=True, eq=False)
class MonoidalStructure:
    """Strict-unital monoidal data on ``base``.

    ``tensor_mor`` is either a dense table or a function of two morphism
    indices. ``associator`` maps ``(a, b, c)`` to a morphism
    ``(a b) c -> a (b c)``; ``None`` means strict.
    """

    base: FinCategory
    unit: int
    tensor_obj: np.ndarray
    tensor_mor: TensorTable
    associator: Optional[dict] = None

    def __post_init__(self):
        object.__setattr__(self, "tensor_obj", _frozen(self.tensor_obj))
        if not callable(self.tensor_mor):
            object.__setattr__(self, "tensor_mor", _frozen(self.tensor_mor))

    def tensor(self, f: int, g: int) -> int:
        if callable(self.tensor_mor):
            return int(self.tensor_mor(f, g))
        return int(self.tensor_mor[f, g])

    @cached_property
    def tensor_table(self) -> np.ndarray:
        if not callable(self.tensor_mor):
            return self.tensor_mor
        m = self.base.morphism_count
        return _frozen([[self.tensor_mor(f, g) for g in range(m)] for f in range(m)])

    def assoc(self, a: int, b: int, c: int) -> int:
        if self.associator is None:
            return int(self.base.identities[self.tensor_obj[self.tensor_obj[a, b], c]])
        return int(self.associator[(a, b, c)])

    def with_associator(self, associator: dict) -> "MonoidalStructure":
        return MonoidalStructure(self.base, self.unit, self.tensor_obj, self.tensor_mor, associator)


def monoidal_violation(M: MonoidalStructure) -> Optional[str]:
    """First failing monoidal axiom, or ``None``."""
    C = M.base
    n = C.object_count
    T = M.tensor_obj
    if T.shape != (n, n) or (n and (T.min() < 0 or T.max() >= n)):
        return "tensor_obj must be an object-valued square table"
    if not 0 <= M.unit < n:
        return "unit out of range"
    tm = M.tensor_table
    src, tgt, ids = C.src, C.tgt, C.identities
    if tm.shape != (C.morphism_count,) * 2:
        return "tensor_mor must be a morphism-valued square table"
    if (src[tm] != T[src[:, None], src[None, :]]).any() or (tgt[tm] != T[tgt[:, None], tgt[None, :]]).any():
        return "tensor of morphisms has the wrong source or target"
    if not np.array_equal(tm[ids[:, None], ids[None, :]], ids[T]):
        return "tensor of identities is not an identity"
    pairs = C.composable_pairs
    g, f = pairs.T
    for g2, f2 in pairs:
        # (g o f) (x) (g2 o f2) == (g (x) g2) o (f (x) f2)
        lhs = tm[C.comp[g, f], C.comp[g2, f2]]
        rhs = C.comp[tm[g, g2], tm[f, f2]]
        if (lhs != rhs).any():
            k = int(np.flatnonzero(lhs != rhs)[0])
            return f"tensor is not functorial at ({g[k]},{f[k]}) x ({g2},{f2})"
    idx = np.arange(n)
    if not (np.array_equal(T[M.unit], idx) and np.array_equal(T[:, M.unit], idx)):
        return "unit law fails on objects"
    midx = np.arange(C.morphism_count)
    u = ids[M.unit]
    if not (np.array_equal(tm[u], midx) and np.array_equal(tm[:, u], midx)):
        return "unit law fails on morphisms"
    if M.associator is None:
        lhs = T[T[:, :, None], idx[None, None, :]]
        rhs = T[idx[:, None, None], T[None, :, :]]
        if (lhs != rhs).any():
            a, b, c = np.argwhere(lhs != rhs)[0]
            return f"strict tensor is not associative at ({a}, {b}, {c})"
        lhs = tm[tm[:, :, None], midx[None, None, :]]
        rhs = tm[midx[:, None, None], tm[None, :, :]]
        if (lhs != rhs).any():
            return "strict tensor is not associative on morphisms"
        return None
    return _associator_violation(M)


def _associator_violation(M: MonoidalStructure) -> Optional[str]:
    C, T = M.base, M.tensor_obj
    n = C.object_count
    ids, src, tgt = C.identities, C.src, C.tgt
    A = np.array([[[M.assoc(a, b, c) for c in range(n)] for b in range(n)] for a in range(n)], dtype=np.int64)
    o = np.arange(n)
    a_, b_, c_ = o[:, None, None], o[None, :, None], o[None, None, :]
    bad = (src[A] != T[T[a_, b_], c_]) | (tgt[A] != T[a_, T[b_, c_]])
    if bad.any():
        return f"associator at {tuple(int(v) for v in np.argwhere(bad)[0])} has the wrong source or target"
    bad = C.inverses[A] == UNDEFINED
    if bad.any():
        return f"associator at {tuple(int(v) for v in np.argwhere(bad)[0])} is not invertible"
    bad = A[:, M.unit, :] != ids[T]
    if bad.any():
        return f"triangle identity fails at {tuple(int(v) for v in np.argwhere(bad)[0])}"
    # naturality in all three arguments
    tm = M.tensor_table
    k = np.arange(C.morphism_count)
    f, g, h = k[:, None, None], k[None, :, None], k[None, None, :]
    before = C.comp[A[tgt[f], tgt[g], tgt[h]], tm[tm[f, g], h]]
    after = C.comp[tm[f, tm[g, h]], A[src[f], src[g], src[h]]]
    if (before != after).any():
        return f"associator is not natural at {tuple(int(v) for v in np.argwhere(before != after)[0])}"
    a, b, c, d = np.ix_(o, o, o, o)
    # ((ab)c)d -> (a(bc))d -> a((bc)d) -> a(b(cd))
    p1 = tm[A[a, b, c], ids[d]]
    p2 = A[a, T[b, c], d]
    p3 = tm[ids[a], A[b, c, d]]
    left = C.comp[p3, C.comp[p2, p1]]
    # ((ab)c)d -> (ab)(cd) -> a(b(cd))
    right = C.comp[A[a, b, T[c, d]], A[T[a, b], c, d]]
    if (left != right).any():
        return f"pentagon fails at {tuple(int(v) for v in np.argwhere(left != right)[0])}"
    return None


def check_monoidal(M: MonoidalStructure) -> bool:
    return monoidal_violation(M) is None


@dataclass(frozen=True)
class Pi0:
    class_of: np.ndarray
    class_count: int
    monoid_table: Optional[np.ndarray] = None


def pi0(C: FinCategory, M: Optional[MonoidalStructure] = None) -> Pi0:
    """Isomorphism classes of objects, numbered in order of their least object.

    With monoidal data, also returns the induced multiplication on classes.
    """
    parent = list(range(C.object_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in range(C.morphism_count):
        if C.inverses[m] != UNDEFINED:
            a, b = find(int(C.src[m])), find(int(C.tgt[m]))
            if a != b:
                parent[max(a, b)] = min(a, b)
    roots = {}
    class_of = np.array([roots.setdefault(find(x), len(roots)) for x in range(C.object_count)], dtype=np.int64)
    k = len(roots)
    table = None
    if M is not None:
        table = np.full((k, k), UNDEFINED, dtype=np.int64)
        T = M.tensor_obj
        for a in range(C.object_count):
            for b in range(C.object_count):
                ca, cb, cab = class_of[a], class_of[b], class_of[T[a, b]]
                if table[ca, cb] == UNDEFINED:
                    table[ca, cb] = cab
                elif table[ca, cb] != cab:
                    raise NotWellDefined(f"tensor of objects {a}, {b} does not descend to classes")
    return Pi0(class_of, k, table)


def homotopy_classes(functors: list, limits: Optional[Limits] = None) -> list:
    """Partition parallel functors by natural isomorphism; classes keep input order."""
    classes: list = []
    for F in functors:
        for cls in classes:
            if functors_homotopic(cls[0], F, limits) is not None:
                cls.append(F)
                break
        else:
            classes.append([F])
    return classes


def to_dot(C: FinCategory, name: str = "C", identities: bool = False) -> str:
    """Graphviz rendering: objects as nodes, non-identity morphisms as labelled edges.

    ``identities=True`` also draws identities as self-loops.
    """
    lines = [f"digraph {name} {{"]
    for x in range(C.object_count):
        lines.append(f'  n{x} [label="{C.object_label(x)}"];')
    for m in range(C.morphism_count):
        if C.is_identity(m) and not identities:
            continue
        lines.append(f'  n{C.src[m]} -> n{C.tgt[m]} [label="{C.morphism_label(m)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
