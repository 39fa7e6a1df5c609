import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catkit.categories import check_functor, check_monoidal, functor_violation
from catkit.categorify import discrete, is_strict_monoidal, simplicial
from catkit.cohomology import cohomology_group, trivial_module
from catkit.errors import (
    CocycleViolation,
    CompatibilityViolation,
    ImageKernelMismatch,
    NotAHomomorphism,
    NotInjective,
    NotSurjective,
    SizeLimit,
    ValidationError,
)
from catkit.config import Limits
from catkit.extensions import (
    all_sections,
    build_extension,
    bundle_categorify,
    bundle_covering,
    canonical_crossed_section,
    check_twisted_cocycle,
    classify_extensions,
    compatibility_violation,
    crossed_product,
    factor_set,
    factor_set_direct,
    make_factor_set,
    make_quasi_action,
    make_section,
    section_monoidal_functor,
    transform_pair,
    trivial_extension,
    trivial_factor_set,
    trivial_quasi_action,
    valid_pairs,
    weak_equivalent,
)
from catkit.smallgroups import cyclic, identify, is_isomorphic, library

from conftest import group

Z2, Z3, Z4, K4 = (group(n) for n in ("Z2", "Z3", "Z4", "Z2xZ2"))


def z4_over_z2():
    return build_extension(Z2, Z4, Z2, [0, 2], [0, 1, 0, 1])


def k4_over_z2():
    # K4 elements are pairs (a, b) indexed a + 2b; j hits the first factor, p reads the second
    pairs = [(a, b) for b in range(2) for a in range(2)]
    assert all(K4.mul(pairs.index(u), pairs.index(v)) == pairs.index(((u[0] + v[0]) % 2, (u[1] + v[1]) % 2))
               for u in pairs for v in pairs)
    return build_extension(Z2, K4, Z2, [0, 1], [b for _, b in pairs])


def s3_over_z2(S3):
    """``Z3 -> S3 -> Z2`` with ``j`` onto the rotations and ``p`` the sign."""
    rot = [e for e in range(6) if S3.element_orders[e] in (1, 3)]
    r = next(e for e in rot if e)
    j = [0, r, S3.mul(r, r)]
    p = [0 if e in rot else 1 for e in range(6)]
    return build_extension(Z3, S3, Z2, j, p)


def extensions_up_to(order):
    """One extension per (N, L, f) class for every library ``G, N`` with ``|G| |N| <= order``."""
    out = []
    for (gn, G), (nn, N) in itertools.product(library(), repeat=2):
        if G.order * N.order > order or G.order == 1 and N.order == 1:
            continue
        for c in classify_extensions(G, N):
            out.append(crossed_product(N, G, c.L, c.f))
    return out


# --------------------------------------------------------------------------- build_extension


def test_valid_examples(s3_oracle):
    assert z4_over_z2().E.order == 4
    assert k4_over_z2().E.order == 4
    assert s3_over_z2(s3_oracle).N.order == 3


def test_wrong_kernel_generator():
    with pytest.raises((NotAHomomorphism, ImageKernelMismatch)):
        build_extension(Z2, Z4, Z2, [0, 1], [0, 1, 0, 1])


def test_exactness_failures():
    with pytest.raises(NotInjective):
        build_extension(Z2, Z4, Z2, [0, 0], [0, 1, 0, 1])
    with pytest.raises(NotSurjective):
        build_extension(Z2, Z4, Z2, [0, 2], [0, 0, 0, 0])
    with pytest.raises(ImageKernelMismatch):
        # j onto {0, 2} but p kills a different subgroup of K4
        build_extension(Z2, K4, Z2, [0, 1], [0, 1, 0, 1])


# --------------------------------------------------------------------------- bundles


def _same(C, D):
    return (C.object_count == D.object_count
            and all(np.array_equal(getattr(C, a), getattr(D, a)) for a in ("src", "tgt", "comp", "identities")))


@pytest.mark.parametrize("name", ["1", "Z2", "Z3", "S3"])
def test_trivial_extensions_restrict_bundle(name):
    G = group(name)
    base = bundle_categorify(trivial_extension(G, "base"))
    fiber = bundle_categorify(trivial_extension(G, "fiber"))
    S, SM = simplicial(G)
    D, DM = discrete(G)
    assert _same(base.category, S)
    assert np.array_equal(base.monoidal.tensor_table, SM.tensor_table)
    assert _same(fiber.category, D)
    assert np.array_equal(fiber.monoidal.tensor_table, DM.tensor_table)
    if G.order == 1:
        assert base.category.morphism_count == 1


def test_bad_role():
    with pytest.raises(ValueError):
        trivial_extension(Z2, "total")


def test_bundle_z4_counts():
    B = bundle_categorify(z4_over_z2())
    assert B.category.object_count == 4
    assert B.category.morphism_count == 8


@pytest.mark.parametrize("make", [z4_over_z2, k4_over_z2])
def test_bundle_is_monoidal_and_fibered(make):
    ext = make()
    B = bundle_categorify(ext)
    assert check_monoidal(B.monoidal)
    assert check_functor(B.fiber_functor)
    _, DM = discrete(ext.G)
    assert is_strict_monoidal(B.fiber_functor, B.monoidal, DM)
    assert functor_violation(bundle_covering(ext, B)) is None


# --------------------------------------------------------------------------- sections and factor sets


def test_section_validation():
    ext = z4_over_z2()
    with pytest.raises(ValidationError):
        make_section(ext, [0, 2])  # p(2) = 0
    with pytest.raises(ValidationError):
        make_section(ext, [2, 1])  # not normalized
    assert len(list(all_sections(ext))) == 2


def test_eta_examples():
    sf = section_monoidal_functor(k4_over_z2(), make_section(k4_over_z2(), [0, 2]))
    B = bundle_categorify(k4_over_z2())
    assert all(B.category.identities[B.category.src[m]] == m for m in sf.eta.reshape(-1))
    ext = z4_over_z2()
    B = bundle_categorify(ext)
    sf = section_monoidal_functor(ext, make_section(ext, [0, 1]), B)
    m = sf.eta[1, 1]
    assert (B.category.src[m], B.category.tgt[m]) == (0, 2)
    assert sf.monoidal


def test_factor_set_examples(s3_oracle):
    ext = z4_over_z2()
    f, L = factor_set(ext, make_section(ext, [0, 1]))
    assert f.table.tolist() == [[0, 0], [0, 1]]
    assert np.array_equal(L.maps, trivial_quasi_action(Z2, Z2).maps)

    ext = k4_over_z2()
    f, _ = factor_set(ext, make_section(ext, [0, 2]))
    assert not f.table.any()

    ext = s3_over_z2(s3_oracle)
    t = next(e for e in range(6) if ext.p.map[e] == 1)
    f, L = factor_set(ext, make_section(ext, [0, t]))
    assert not f.table.any()
    assert L.maps[1].tolist() == [0, 2, 1]


def test_unique_nontrivial_normalized_cocycle_on_z2():
    L = trivial_quasi_action(Z2, Z2)
    good = make_factor_set(Z2, Z2, [[0, 0], [0, 1]])
    assert check_twisted_cocycle(good, L)
    assert check_twisted_cocycle(trivial_factor_set(Z2, Z2), L)
    # perturb one entry away from the normalized rows: (1, 0) -> 1
    from catkit.extensions import FactorSet

    bad = FactorSet(Z2, Z2, np.array([[0, 0], [1, 1]]))
    assert not check_twisted_cocycle(bad, L)


def test_factor_set_validation():
    with pytest.raises(ValidationError):
        make_factor_set(Z2, Z2, [[0, 1], [0, 1]])
    with pytest.raises(ValidationError):
        make_quasi_action(Z2, Z3, [[0, 1, 2], [0, 1, 1]])
    with pytest.raises(ValidationError):
        make_quasi_action(Z2, Z3, [[0, 2, 1], [0, 2, 1]])


def test_homomorphic_action_with_trivial_factor_set():
    for name in ("Z3", "Z4", "Z5"):
        N = group(name)
        inv = N.inverses
        L = make_quasi_action(Z2, N, [np.arange(N.order), inv])
        assert check_twisted_cocycle(trivial_factor_set(Z2, N), L)


# --------------------------------------------------------------------------- weak equivalence


def test_weak_equivalence_examples():
    ext = z4_over_z2()
    f, L = factor_set(ext, make_section(ext, [0, 1]))
    f2, L2 = factor_set(ext, make_section(ext, [0, 3]))
    assert weak_equivalent(f, L, f, L).tolist() == [0, 0]
    assert f.key() == f2.key()
    assert weak_equivalent(f, L, f2, L2) is not None
    # the witness read off the sections, j(gamma(x)) = s'(x) s(x)^-1, also works
    g2, M2 = transform_pair(f, L, [0, 1])
    assert (g2.key(), M2.key()) == (f2.key(), L2.key())
    split, Ls = factor_set(k4_over_z2(), make_section(k4_over_z2(), [0, 2]))
    assert weak_equivalent(split, Ls, f, L) is None


def test_weak_equivalent_size_limit():
    f, L = trivial_factor_set(Z4, Z4), trivial_quasi_action(Z4, Z4)
    with pytest.raises(SizeLimit):
        weak_equivalent(f, L, f, L, Limits(max_candidates=10))


@pytest.mark.parametrize("G,N", [("Z2", "Z2"), ("Z2", "Z3"), ("Z3", "Z2"), ("Z2", "Z4"), ("Z2", "Z2xZ2")])
def test_weak_equivalence_is_an_equivalence_relation(G, N):
    G, N = group(G), group(N)
    pairs = list(valid_pairs(G, N))
    rel = np.array([[weak_equivalent(f, L, f2, L2) is not None for (L2, f2) in pairs] for (L, f) in pairs])
    assert rel.diagonal().all()
    assert (rel == rel.T).all()
    r = rel.astype(int)
    assert ((r @ r > 0) <= rel).all()
    # the witness relation agrees with the orbit partition used by classification
    assert len({tuple(row) for row in rel.tolist()}) == len(classify_extensions(G, N))


# --------------------------------------------------------------------------- crossed products


def test_crossed_product_examples(s3_oracle):
    L = trivial_quasi_action(Z2, Z2)
    assert identify(crossed_product(Z2, Z2, L, make_factor_set(Z2, Z2, [[0, 0], [0, 1]])).E) == "Z4"
    assert is_isomorphic(crossed_product(Z2, Z2, L, trivial_factor_set(Z2, Z2)).E, K4)
    inv = make_quasi_action(Z2, Z3, [[0, 1, 2], [0, 2, 1]])
    assert is_isomorphic(crossed_product(Z3, Z2, inv, trivial_factor_set(Z2, Z3)).E, s3_oracle)


def test_crossed_product_rejects_bad_data():
    from catkit.extensions import FactorSet

    L = trivial_quasi_action(Z3, Z3)
    bad = FactorSet(Z3, Z3, np.array([[0, 0, 0], [0, 1, 0], [0, 0, 0]]))
    with pytest.raises(CocycleViolation, match=r"\(a, b, c\)"):
        crossed_product(Z3, Z3, L, bad)
    # order-2 automorphism of Z3 as an action of Z3: L(1) L(1) != L(2)
    Lbad = make_quasi_action(Z3, Z3, [[0, 1, 2], [0, 2, 1], [0, 1, 2]])
    f = trivial_factor_set(Z3, Z3)
    assert compatibility_violation(f, Lbad) is not None
    with pytest.raises((CompatibilityViolation, CocycleViolation)):
        crossed_product(Z3, Z3, Lbad, f)


@pytest.mark.parametrize("G", ["Z2", "Z3", "Z4", "Z2xZ2"])
@pytest.mark.parametrize("N", ["Z2", "Z3", "Z2xZ2"])
def test_schreier_round_trip(G, N):
    G, N = group(G), group(N)
    for L, f in valid_pairs(G, N):
        ext = crossed_product(N, G, L, f)
        f2, L2 = factor_set(ext, canonical_crossed_section(ext))
        assert f2.key() == f.key() and L2.key() == L.key()


# --------------------------------------------------------------------------- properties over small extensions


@pytest.fixture(scope="module")
def small_extensions():
    return extensions_up_to(8)


def test_every_section_gives_a_twisted_cocycle(small_extensions):
    for ext in small_extensions:
        B = bundle_categorify(ext)
        for s in all_sections(ext):
            f, L = factor_set(ext, s, B)
            assert check_twisted_cocycle(f, L)
            assert compatibility_violation(f, L) is None
            assert f.key() == factor_set_direct(ext, s).key()
            assert section_monoidal_functor(ext, s, B).monoidal


def test_sections_are_weakly_equivalent(small_extensions):
    for ext in small_extensions:
        pairs = [factor_set(ext, s) for s in all_sections(ext)]
        f0, L0 = pairs[0]
        assert all(weak_equivalent(f0, L0, f, L) is not None for f, L in pairs)


def test_round_trip_from_any_section(small_extensions):
    for ext in small_extensions[:40]:
        for s in all_sections(ext):
            f, L = factor_set(ext, s)
            back = crossed_product(ext.N, ext.G, L, f)
            f2, L2 = factor_set(back, canonical_crossed_section(back))
            assert (f2.key(), L2.key()) == (f.key(), L.key())
            assert is_isomorphic(back.E, ext.E)


@given(st.data())
def test_isomorphism_invariance(data):
    """Relabel ``E`` by an automorphism fixing ``j`` and ``p``; the factor set of the image section is unchanged."""
    ext = crossed_product(Z2, Z4, trivial_quasi_action(Z4, Z2),
                          make_factor_set(Z4, Z2, [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 1], [0, 1, 1, 1]]))
    # automorphisms of E fixing N pointwise and inducing the identity on G: (n, x) -> (n + c(x), x), c a hom
    c = data.draw(st.sampled_from([[0, 0, 0, 0], [0, 1, 0, 1]]))
    k = ext.N.order
    phi = np.array([(e // k) * k + (e % k + c[e // k]) % k for e in range(ext.E.order)])
    assert all(phi[ext.E.mul(a, b)] == ext.E.mul(phi[a], phi[b]) for a in range(8) for b in range(8))
    s = data.draw(st.sampled_from(list(all_sections(ext))))
    f, L = factor_set(ext, s)
    f2, L2 = factor_set(ext, make_section(ext, phi[s.s]))
    assert f.key() == f2.key() and L.key() == L2.key()


@given(st.sampled_from(["Z2", "Z3", "Z4"]), st.sampled_from(["Z2", "Z3"]), st.data())
def test_transform_pair_preserves_validity(G, N, data):
    G, N = group(G), group(N)
    pairs = list(valid_pairs(G, N))
    L, f = data.draw(st.sampled_from(pairs))
    gamma = [0] + data.draw(st.lists(st.integers(0, N.order - 1), min_size=G.order - 1, max_size=G.order - 1))
    f2, L2 = transform_pair(f, L, gamma)
    assert f2.is_normalized()
    assert check_twisted_cocycle(f2, L2)
    assert compatibility_violation(f2, L2) is None
    assert weak_equivalent(f, L, f2, L2) is not None


# --------------------------------------------------------------------------- classification


@pytest.mark.parametrize("G,N,trivial,expected", [
    ("Z2", "Z2", False, ["Z2xZ2", "Z4"]),
    ("Z2", "Z3", False, ["S3", "Z6"]),
    ("Z3", "Z3", True, ["Z3xZ3", "Z9", "Z9"]),
    ("Z3", "Z2", False, ["Z6"]),
    ("Z2", "Z4", False, ["D4", "Q8", "Z4xZ2", "Z8"]),
])
def test_classification(G, N, trivial, expected):
    classes = classify_extensions(group(G), group(N), trivial_action=trivial)
    assert sorted(c.middle_group for c in classes) == expected


@pytest.mark.parametrize("G,N", [("Z2", "Z2"), ("Z3", "Z3"), ("Z2", "Z4"), ("Z4", "Z2"), ("Z2", "Z2xZ2"),
                                 ("Z2xZ2", "Z2"), ("Z3", "Z2"), ("Z2", "Z3")])
def test_trivial_action_classes_count_h2(G, N):
    G, N = group(G), group(N)
    from catkit.io import abelian_invariants

    h2 = cohomology_group(2, G, trivial_module(G, abelian_invariants(N))).order
    assert len(classify_extensions(G, N, trivial_action=True)) == h2


def test_classification_is_deterministic():
    a = [c.to_json() for c in classify_extensions(Z2, Z4)]
    b = [c.to_json() for c in classify_extensions(Z2, Z4, Limits(workers=4))]
    assert a == b


def test_classification_size_limit():
    with pytest.raises(SizeLimit):
        classify_extensions(cyclic(6), cyclic(6), Limits(max_candidates=1000))
