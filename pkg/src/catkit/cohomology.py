"""Group cohomology from the normalized bar complex, and associators as 3-cocycles.

Coefficients are finite abelian groups ``Z/d_1 + ... + Z/d_r`` written
additively, with ``G`` acting through integer matrices on column vectors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import snf
from .categories import check_monoidal
from .categorify import linearized_discrete
from .config import Limits, check_space, resolve
from .errors import ValidationError
from .groups import FiniteGroup

MAX_DEGREE = 3


@dataclass(frozen=True, eq=False)
class CoefficientModule:
    group: FiniteGroup
    orders: tuple
    action: np.ndarray  # shape (|G|, r, r)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def moduli(self) -> np.ndarray:
        return np.array(self.orders, dtype=np.int64)

    def elements(self) -> list:
        return list(itertools.product(*(range(d) for d in self.orders)))

    def act(self, g: int, a) -> np.ndarray:
        return (self.action[g] @ np.asarray(a, dtype=np.int64)) % self.moduli

    def is_trivial_action(self) -> bool:
        return all(np.array_equal(self.action[g] % self.moduli[:, None], np.eye(self.rank, dtype=np.int64) % self.moduli[:, None])
                   for g in range(self.group.order))


def coefficient_module(G: FiniteGroup, orders, action=None) -> CoefficientModule:
    """Validate coefficient data; ``action=None`` means the trivial action."""
    orders = tuple(int(d) for d in orders)
    if any(d < 1 for d in orders):
        raise ValidationError(f"cyclic orders must be positive, got {orders}")
    r = len(orders)
    if action is None:
        action = np.broadcast_to(np.eye(r, dtype=np.int64), (G.order, r, r)).copy()
    action = np.array(action, dtype=np.int64).reshape(G.order, r, r)
    mod = np.array(orders, dtype=np.int64)
    for g in range(G.order):
        # each matrix must send d_j e_j into the relation lattice
        if ((action[g] * mod[None, :]) % mod[:, None]).any():
            raise ValidationError(f"action of element {g} is not well defined on the coefficients")
    ident = np.eye(r, dtype=np.int64)
    if ((action[0] - ident) % mod[:, None]).any():
        raise ValidationError("identity element must act trivially")
    for x in range(G.order):
        for y in range(G.order):
            if ((action[G.mul(x, y)] - action[x] @ action[y]) % mod[:, None]).any():
                raise ValidationError(f"action is not multiplicative at ({x}, {y})")
    M = CoefficientModule(G, orders, action)
    elems = np.array(M.elements(), dtype=np.int64).reshape(-1, r)
    for g in range(G.order):
        images = {tuple(row) for row in ((elems @ action[g].T) % mod)}
        if len(images) != M.size:
            raise ValidationError(f"action of element {g} is not bijective")
    return M


def trivial_module(G: FiniteGroup, orders) -> CoefficientModule:
    return coefficient_module(G, orders)


@dataclass(frozen=True, eq=False)
class Cochain:
    """Values on all of ``G^n``; shape ``(|G|,) * n + (r,)``."""

    degree: int
    module: CoefficientModule
    values: np.ndarray

    @property
    def group(self) -> FiniteGroup:
        return self.module.group

    def __getitem__(self, args) -> tuple:
        if not isinstance(args, tuple):
            args = (args,)
        return tuple(int(v) for v in self.values[args])

    def key(self) -> tuple:
        return tuple(self.values.reshape(-1).tolist())

    def is_zero(self) -> bool:
        return not self.values.any()

    def is_normalized(self) -> bool:
        for axis in range(self.degree):
            if np.take(self.values, 0, axis=axis).any():
                return False
        return True


def _shape(M, n):
    return (M.group.order,) * n + (M.rank,)


def zero_cochain(n: int, M: CoefficientModule) -> Cochain:
    return Cochain(n, M, np.zeros(_shape(M, n), dtype=np.int64))


def normalized_tuples(G: FiniteGroup, n: int) -> list:
    return list(itertools.product(range(1, G.order), repeat=n))


def cochain_from_coords(n: int, M: CoefficientModule, coords) -> Cochain:
    """Normalized cochain from its values on non-identity tuples, flattened tuple-major."""
    vals = np.zeros(_shape(M, n), dtype=np.int64)
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, M.rank)
    for t, v in zip(normalized_tuples(M.group, n), coords):
        vals[t] = v
    return Cochain(n, M, vals % M.moduli)


def cochain_coords(c: Cochain) -> list:
    return [int(x) for t in normalized_tuples(c.group, c.degree) for x in c.values[t]]


def random_cochain(n: int, M: CoefficientModule, rng: np.random.Generator) -> Cochain:
    k = len(normalized_tuples(M.group, n))
    coords = (rng.integers(0, 1 << 30, size=(k, M.rank)) % M.moduli) if k else np.zeros((0, M.rank))
    return cochain_from_coords(n, M, coords)


def _raw_coboundary(values: np.ndarray, n: int, M: CoefficientModule) -> np.ndarray:
    """Integer-lifted coboundary of a value table, without reduction."""
    G = M.group
    N = G.order
    T = G.table
    grid = np.indices((N,) * (n + 1)).reshape(n + 1, -1)
    out = np.zeros((grid.shape[1], M.rank), dtype=np.int64)
    # g_1 . c(g_2, ..., g_{n+1})
    inner = values[tuple(grid[1:])] if n else np.broadcast_to(values, (grid.shape[1], M.rank))
    out += np.einsum("kij,kj->ki", M.action[grid[0]], inner)
    for i in range(n):
        args = list(grid[:i]) + [T[grid[i], grid[i + 1]]] + list(grid[i + 2:])
        out += (-1) ** (i + 1) * values[tuple(args)]
    last = values[tuple(grid[:n])] if n else np.broadcast_to(values, (grid.shape[1], M.rank))
    out += (-1) ** (n + 1) * last
    return out.reshape(_shape(M, n + 1))


def coboundary(c: Cochain, max_degree: int = MAX_DEGREE) -> Cochain:
    """``(dc)(g_1..g_{n+1}) = g_1 c(g_2..) + sum (-1)^i c(.., g_i g_{i+1}, ..) + (-1)^{n+1} c(g_1..g_n)``."""
    if c.degree > max_degree:
        raise ValueError(f"coboundary of degree {c.degree} exceeds the cap {max_degree}")
    M = c.module
    return Cochain(c.degree + 1, M, _raw_coboundary(c.values, c.degree, M) % M.moduli)


def coboundary_matrix(n: int, M: CoefficientModule) -> list:
    """Integer matrix of the lifted coboundary on normalized coordinates, ``C^n -> C^{n+1}``."""
    G = M.group
    cols = []
    src = normalized_tuples(G, n)
    dst = normalized_tuples(G, n + 1)
    for t in src:
        for i in range(M.rank):
            vals = np.zeros(_shape(M, n), dtype=np.int64)
            vals[t + (i,)] = 1
            d = _raw_coboundary(vals, n, M)
            cols.append([int(x) for s in dst for x in d[s]])
    return snf.transpose(cols, len(dst) * M.rank)


@dataclass(frozen=True)
class CohomologyResult:
    degree: int
    invariant_factors: list
    cocycle_count: int
    coboundary_count: int

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    def __str__(self):
        return f"H^{self.degree} = " + format_abelian(self.invariant_factors)


def format_abelian(factors, free_rank: int = 0) -> str:
    parts = (["Z" if free_rank == 1 else f"Z^{free_rank}"] if free_rank else []) + [f"Z/{d}" for d in factors]
    return " ⊕ ".join(parts) if parts else "0"


def cohomology_group(n: int, G: FiniteGroup, M: CoefficientModule, method: str = "snf",
                     limits: Optional[Limits] = None, max_degree: int = MAX_DEGREE) -> CohomologyResult:
    """``H^n(G, M)``; ``method`` is ``"snf"`` (lattices) or ``"brute"`` (enumeration)."""
    if M.group is not G and M.group != G:
        raise ValidationError("coefficient module is over a different group")
    if not 0 <= n <= max_degree:
        raise ValueError(f"degree {n} outside 0..{max_degree}")
    if method == "snf":
        return _cohomology_snf(n, M)
    if method == "brute":
        return _cohomology_brute(n, M, limits)
    raise ValueError(f"unknown method {method!r}")


def _relations(k: int, M: CoefficientModule) -> list:
    return list(M.orders) * len(normalized_tuples(M.group, k))


def _cohomology_snf(n: int, M: CoefficientModule) -> CohomologyResult:
    if len(set(M.orders)) == 1:
        return _cohomology_uniform(n, M)
    return _cohomology_lattice(n, M)


def _cohomology_uniform(n: int, M: CoefficientModule) -> CohomologyResult:
    """All cyclic factors of one order ``k``: diagonalise ``d_n`` and read cocycles off mod ``k``."""
    k = M.orders[0]
    a = len(normalized_tuples(M.group, n)) * M.rank
    if a == 0:
        return CohomologyResult(n, [], 1, 1)
    b = len(normalized_tuples(M.group, n + 1)) * M.rank
    # U d^T V = S, so d x = 0 mod k  iff  S^T y = 0 mod k  with  x = U^T y
    S = snf.smith_normal_form(snf.transpose(coboundary_matrix(n, M), a), b)
    diag = S.diagonal + [0] * (a - len(S.diagonal))
    g = [math.gcd(s, k) for s in diag]
    basis = [[(k // g[i]) if j == i else 0 for j in range(a)] for i in range(a)]
    bounds = [[k if j == i else 0 for j in range(a)] for i in range(a)]
    if n > 0:
        prev = coboundary_matrix(n - 1, M)
        Ut = snf.transpose(S.U_inv, a)
        bounds += snf.transpose(snf.matmul(Ut, prev), a)
    factors, free = snf.quotient_invariants(basis, bounds)
    assert free == 0
    z_count = math.prod(g)
    return CohomologyResult(n, factors, z_count, z_count // math.prod(factors))


def _cohomology_lattice(n: int, M: CoefficientModule) -> CohomologyResult:
    """General coefficients: cocycles as the lattice ``{x : d x in relations}``."""
    a = len(normalized_tuples(M.group, n)) * M.rank
    rel_n = _relations(n, M)
    rel_next = _relations(n + 1, M)
    if a == 0:
        return CohomologyResult(n, [], 1, 1)
    d = coboundary_matrix(n, M)
    b = len(rel_next)
    # cocycle lattice: x with d x in the relation lattice of C^{n+1}
    if b:
        stacked = [row + [-(rel_next[i] if j == i else 0) for j in range(b)] for i, row in enumerate(d)]
        kernel = snf.kernel_basis(stacked, a + b)
        gens = [v[:a] for v in kernel]
    else:
        gens = [[int(i == j) for j in range(a)] for i in range(a)]
    cocycles = snf.column_space_basis(gens, a)
    bounds = [[rel_n[i] if j == i else 0 for j in range(a)] for i in range(a)]
    if n > 0:
        bounds += snf.transpose(coboundary_matrix(n - 1, M), a)
    factors, free = snf.quotient_invariants(cocycles, bounds)
    assert free == 0
    det = abs(_det(cocycles))
    z_count = math.prod(rel_n) // det
    h = math.prod(factors)
    return CohomologyResult(n, factors, z_count, z_count // h)


def _det(vectors) -> int:
    S = snf.smith_normal_form(vectors)
    return math.prod(S.diagonal)


def _all_cochains(n: int, M: CoefficientModule, limits):
    k = len(normalized_tuples(M.group, n))
    check_space(M.size ** k, resolve(limits), f"enumerating {n}-cochains")
    elems = M.elements()
    for combo in itertools.product(elems, repeat=k):
        yield cochain_from_coords(n, M, [x for v in combo for x in v])


def cocycles(n: int, M: CoefficientModule, limits: Optional[Limits] = None) -> list:
    return [c for c in _all_cochains(n, M, limits) if coboundary(c).is_zero()]


def coboundaries(n: int, M: CoefficientModule, limits: Optional[Limits] = None) -> set:
    """Keys of all normalized ``n``-coboundaries."""
    if n == 0:
        return {zero_cochain(0, M).key()}
    return {coboundary(c).key() for c in _all_cochains(n - 1, M, limits)}


def _cohomology_brute(n: int, M: CoefficientModule, limits) -> CohomologyResult:
    Z = cocycles(n, M, limits)
    B = coboundaries(n, M, limits)
    h = len(Z) // len(B)
    factors = []
    mods = M.moduli
    by_prime = {}
    for p in _prime_factors(h):
        sizes = [1]
        k = 1
        while sizes[-1] < _p_part(h, p):
            k *= p
            killed = sum(1 for z in Z if Cochain(n, M, (k * z.values) % mods).key() in B)
            sizes.append(killed // len(B))
        # number of cyclic p-factors of order >= p^i is log_p(sizes[i] / sizes[i-1])
        counts = [round(math.log(sizes[i] // sizes[i - 1], p)) for i in range(1, len(sizes))]
        parts = []
        for i, c in enumerate(counts):
            nxt = counts[i + 1] if i + 1 < len(counts) else 0
            parts += [p ** (i + 1)] * (c - nxt)
        by_prime[p] = sorted(parts, reverse=True)
    width = max((len(v) for v in by_prime.values()), default=0)
    for j in range(width):
        factors.append(math.prod(v[j] for v in by_prime.values() if j < len(v)))
    return CohomologyResult(n, sorted(factors), len(Z), len(B))


def _prime_factors(n: int) -> list:
    out, p = [], 2
    while n > 1:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


# --------------------------------------------------------------------------- associators


@dataclass(frozen=True)
class AssociatorReport:
    cochains_checked: int
    pentagon_valid: list  # cochains passing check_monoidal, in enumeration order
    cocycles: list  # cochains with zero coboundary
    matches_cocycles: bool
    class_count: int


def associator_structure(c: Cochain):
    """Monoidal structure on the linearised discrete category with associator ``c``."""
    G = c.group
    m = c.module.orders[0]
    _, M = linearized_discrete(G, m)
    T = G.table
    n = G.order
    assoc = {
        (a, b, d): int(T[T[a, b], d]) * m + int(c.values[a, b, d, 0])
        for a in range(n) for b in range(n) for d in range(n)
    }
    return M.with_associator(assoc)


def associators(G: FiniteGroup, order: int, limits: Optional[Limits] = None) -> AssociatorReport:
    """Normalized 3-cochains with values in ``Z/order`` whose associator satisfies the pentagon."""
    M = trivial_module(G, [order])
    valid, cyc = [], []
    total = 0
    for c in _all_cochains(3, M, limits):
        total += 1
        if check_monoidal(associator_structure(c)):
            valid.append(c)
        if coboundary(c).is_zero():
            cyc.append(c)
    same = [c.key() for c in valid] == [c.key() for c in cyc]
    B = coboundaries(3, M, limits)
    seen, classes = set(), 0
    for c in valid:
        if c.key() in seen:
            continue
        classes += 1
        for b in B:
            seen.add(tuple(((np.array(c.key()) + np.array(b)) % order).tolist()))
    return AssociatorReport(total, valid, cyc, same, classes)
