import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catkit.categories import check_monoidal
from catkit.cohomology import (
    associator_structure,
    associators,
    coboundary,
    cochain_from_coords,
    coefficient_module,
    cohomology_group,
    format_abelian,
    normalized_tuples,
    random_cochain,
    trivial_module,
    zero_cochain,
)
from catkit.config import Limits
from catkit.errors import SizeLimit, ValidationError
from catkit.extensions import FactorSet, QuasiAction, check_twisted_cocycle
from catkit.smallgroups import cyclic

from conftest import group, small_groups


def _cyclic_oracle(n, m, k, u):
    """Order of H^n(Z/m, Z/k) where the generator acts by multiplication by ``u``.

    Uses the periodic resolution: odd degrees give ker(N)/im(g-1) and
    positive even degrees ker(g-1)/im(N), with N = 1 + g + ... + g^(m-1).
    """
    norm = sum(pow(u, i, k) for i in range(m)) % k
    ker_n = sum(1 for a in range(k) if norm * a % k == 0)
    im_n = len({norm * a % k for a in range(k)})
    ker_g = sum(1 for a in range(k) if (u - 1) * a % k == 0)
    im_g = len({(u - 1) * a % k for a in range(k)})
    if n == 0:
        return ker_g
    return ker_n // im_g if n % 2 else ker_g // im_n


def _power_action(m, k, u):
    return [[[pow(u, x, k)]] for x in range(m)]


@pytest.mark.parametrize(
    "n, G, k, expected",
    [(2, "Z2", 2, [2]), (2, "Z3", 3, [3]), (2, "Z3", 2, []), (3, "Z2", 2, [2]), (2, "K4", 2, [2, 2, 2]), (1, "S3", 2, [2])],
)
def test_cohomology_examples_both_paths(n, G, k, expected):
    M = trivial_module(group(G), [k])
    for method in ("snf", "brute"):
        assert cohomology_group(n, group(G), M, method).invariant_factors == expected


@pytest.mark.parametrize(
    "n, G, k, expected",
    # universal coefficients from H_1(S3) = Z/2, H_2(S3) = 0, H_3(S3) = Z/6
    [(2, "S3", 3, []), (2, "S3", 2, [2]), (3, "S3", 3, [3]), (3, "S3", 2, [2]), (2, "Q8", 2, [2, 2]), (2, "D4", 2, [2, 2, 2])],
)
def test_cohomology_linear_algebra_only(n, G, k, expected):
    assert cohomology_group(n, group(G), trivial_module(group(G), [k])).invariant_factors == expected


@pytest.mark.parametrize("m, k, u", [(2, 2, 1), (2, 4, 1), (2, 4, 3), (2, 3, 2), (3, 3, 1), (4, 2, 1), (4, 4, 3), (4, 5, 2), (3, 7, 2), (2, 6, 5)])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_cyclic_groups_against_periodic_resolution(m, k, u, n):
    G = cyclic(m)
    M = coefficient_module(G, [k], _power_action(m, k, u))
    r = cohomology_group(n, G, M)
    assert r.order == _cyclic_oracle(n, m, k, u)


coeff_cases = st.sampled_from([[2], [3], [4], [2, 2]])


@given(small_groups(["Z2", "Z3", "Z4", "K4"]), coeff_cases, st.integers(0, 3))
def test_snf_and_brute_agree(G, orders, n):
    M = trivial_module(G, orders)
    try:
        brute = cohomology_group(n, G, M, "brute", Limits(max_candidates=20_000))
    except SizeLimit:
        return
    lin = cohomology_group(n, G, M, "snf")
    assert lin.invariant_factors == brute.invariant_factors
    assert (lin.cocycle_count, lin.coboundary_count) == (brute.cocycle_count, brute.coboundary_count)
    assert brute.cocycle_count == brute.coboundary_count * brute.order


def test_nontrivial_action_brute_agrees():
    G = group("Z2")
    M = coefficient_module(G, [4], _power_action(2, 4, 3))
    for n in range(4):
        assert cohomology_group(n, G, M, "snf").invariant_factors == cohomology_group(n, G, M, "brute").invariant_factors


@given(small_groups(["Z2", "Z3", "Z4", "K4", "S3"]), coeff_cases, st.integers(0, 2), st.integers(0, 2**32 - 1))
def test_d_squared_is_zero(G, orders, n, seed):
    M = trivial_module(G, orders)
    c = random_cochain(n, M, np.random.default_rng(seed))
    dc = coboundary(c)
    assert dc.is_normalized()
    assert coboundary(dc).is_zero()


@given(st.integers(0, 2**32 - 1))
def test_d_squared_is_zero_with_action(seed):
    G = cyclic(4)
    M = coefficient_module(G, [5], _power_action(4, 5, 2))
    rng = np.random.default_rng(seed)
    for n in range(3):
        assert coboundary(coboundary(random_cochain(n, M, rng))).is_zero()


def test_coboundary_examples():
    M = trivial_module(group("Z4"), [2])
    assert coboundary(zero_cochain(1, M)).is_zero()
    M = trivial_module(group("Z2"), [2])
    gamma = cochain_from_coords(1, M, [1])
    # (d gamma)(1, 1) = gamma(1) - gamma(0) + gamma(1) = 0 mod 2
    assert coboundary(gamma)[1, 1] == (0,)


@pytest.mark.parametrize("k, u", [(3, 1), (3, 2), (4, 1), (4, 3)])
def test_twisted_cocycle_agrees_with_coboundary(k, u):
    G, N = cyclic(2), cyclic(k)
    M = coefficient_module(G, [k], _power_action(2, k, u))
    L = QuasiAction(G, N, np.array([[pow(u, x, k) * n % k for n in range(k)] for x in range(2)]))
    for coords in itertools.product(range(k), repeat=len(normalized_tuples(G, 2))):
        c = cochain_from_coords(2, M, coords)
        f = FactorSet(G, N, c.values[..., 0])
        assert check_twisted_cocycle(f, L) == coboundary(c).is_zero()


def test_coefficient_validation():
    G = group("Z2")
    with pytest.raises(ValidationError):
        coefficient_module(G, [0])
    with pytest.raises(ValidationError):
        coefficient_module(G, [4], [[[1]], [[2]]])  # multiplication by 2 is not invertible
    with pytest.raises(ValidationError):
        coefficient_module(group("Z3"), [3], [[[1]], [[2]], [[2]]])  # not multiplicative
    with pytest.raises(ValidationError):
        coefficient_module(G, [4, 2], [np.eye(2, dtype=int).tolist(), [[1, 1], [0, 1]]])  # 2 e_2 -> (2, 0)


def test_format():
    assert format_abelian([], 0) == "0"
    assert format_abelian([2, 4], 1) == "Z ⊕ Z/2 ⊕ Z/4"
    assert str(cohomology_group(2, group("Z2"), trivial_module(group("Z2"), [2]))) == "H^2 = Z/2"


@pytest.mark.parametrize("G, k, valid, classes", [("Z2", 2, 2, 2), ("Z2", 3, 1, 1), ("Z3", 2, 4, 1), ("Z2", 4, 2, 2)])
def test_associator_counts(G, k, valid, classes):
    rep = associators(group(G), k)
    assert len(rep.pentagon_valid) == valid and rep.class_count == classes
    assert rep.matches_cocycles
    assert rep.pentagon_valid[0].is_zero()
    assert len(rep.cocycles) == valid


@given(st.integers(0, 2**32 - 1))
def test_pentagon_iff_cocycle_random(seed):
    G = group("Z3")
    M = trivial_module(G, [3])
    rng = np.random.default_rng(seed)
    c = random_cochain(3, M, rng)
    # bias towards cocycles so both outcomes are exercised
    if rng.integers(2):
        c = coboundary(random_cochain(2, M, rng))
    assert check_monoidal(associator_structure(c)) == coboundary(c).is_zero()


def test_brute_force_size_limit():
    M = trivial_module(group("S3"), [2])
    with pytest.raises(SizeLimit):
        cohomology_group(3, group("S3"), M, "brute", Limits(max_candidates=1000))


@pytest.mark.parametrize("G,k,n", [("Z4", 2, 2), ("S3", 2, 2), ("Z3", 3, 3), ("Z2xZ2", 2, 3), ("Z6", 6, 2), ("Q8", 4, 2)])
def test_uniform_and_lattice_paths_agree(G, k, n):
    from catkit.cohomology import _cohomology_lattice, _cohomology_uniform

    M = trivial_module(group(G), [k, k] if G == "Z2xZ2" else [k])
    a, b = _cohomology_uniform(n, M), _cohomology_lattice(n, M)
    assert (list(a.invariant_factors), a.cocycle_count, a.coboundary_count) == \
        (list(b.invariant_factors), b.cocycle_count, b.coboundary_count)
