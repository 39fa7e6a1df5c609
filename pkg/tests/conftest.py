import itertools
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from catkit import smallgroups
from catkit.groups import from_table

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")

SMALL = ["1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "S3"]
TINY = ["1", "Z2", "Z3", "Z4", "Z2xZ2"]


def group(name):
    return smallgroups.by_name(name)


def small_groups(names=SMALL):
    return st.sampled_from(names).map(group)


def relabel(G, perm):
    """The same group with element ``i`` renamed ``perm[i]`` (``perm[0]`` must be 0)."""
    perm = np.asarray(perm)
    inv = np.argsort(perm)
    return from_table(perm[G.table[inv[:, None], inv[None, :]]])


@st.composite
def relabelled(draw, names=SMALL):
    G = draw(small_groups(names))
    rest = draw(st.permutations(list(range(1, G.order))))
    return G, relabel(G, [0] + list(rest))


def permutation_table(perms):
    """Multiplication table of a list of permutation tuples under composition ``(a*b)(i) = a(b(i))``."""
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(a[b[i]] for i in range(len(a)))] for b in perms] for a in perms]


@pytest.fixture
def s3_oracle():
    perms = sorted(itertools.permutations(range(3)))
    return from_table(permutation_table(perms))


def data(name):
    return os.path.join(DATA, name)


def cli_suite():
    """One invocation per subcommand and emit format, with the expected exit code."""
    d = data
    runs = [
        (["group-info", "--group", d("s3.json")], 0),
        (["homs", "--source", "Z2xZ2", "--target", "S3"], 0),
        (["homs", "--source", "Z2", "--target", "Z4", "--brute"], 0),
        (["hom-classes", "--source", "Z2", "--target", "S3"], 0),
        (["aut", "--group", "S3"], 0),
        (["aut", "--group", "Z3"], 0),
        (["categorify", "--flavor", "simplicial", "--group", d("z3.json"), "--emit", "dot"], 0),
        (["categorify", "--flavor", "discrete", "--group", "S3"], 0),
        (["categorify", "--flavor", "tautological", "--group", "Z4"], 0),
        (["covering", "--group", "S3"], 0),
        (["bundle", "--extension", d("z4_over_z2.json")], 0),
        (["bundle", "--extension", d("k4_over_z2.json"), "--emit", "dot"], 0),
        (["factor-set", "--extension", d("z4_over_z2.json"), "--section", "0,3"], 0),
        (["check-cocycle", "--pair", d("z2_nontrivial_pair.json")], 0),
        (["check-cocycle", "--pair", d("bad_pair.json")], 1),
        (["weak-equiv", "--pair", d("z2_split_pair.json"), "--other", d("z2_nontrivial_pair.json")], 0),
        (["crossed-product", "--pair", d("s3_pair.json")], 0),
        (["classify-ext", "--base", d("z2.json"), "--fiber", d("z2.json")], 0),
        (["classify-ext", "--base", "Z2", "--fiber", "Z3"], 0),
        (["classify-ext", "--base", "Z3", "--fiber", "Z3", "--trivial-action"], 0),
        (["cohomology", "--n", "2", "--group", d("z2.json"), "--coeff", d("z2.json")], 0),
        (["cohomology", "--n", "3", "--group", "Z2", "--coeff", "Z2", "--method", "both"], 0),
        (["cohomology", "--n", "2", "--group", "Z2", "--coeff", d("z3_sign.json")], 0),
        (["associators", "--group", "Z2"], 0),
        (["nerve", "--group", "Z2", "--k", "3"], 0),
        (["nerve", "--space", d("sierpinski.json"), "--k", "2"], 0),
        (["homology", "--group", "S3", "--k", "3", "--n", "1"], 0),
        (["homology", "--group", "Z2", "--flavor", "simplicial", "--k", "3", "--reduced"], 0),
        (["bar", "--group", "Z3", "--k", "3"], 0),
        (["open-cat", "--space", d("sierpinski.json")], 0),
        (["open-cat", "--space", d("discrete2.json"), "--emit", "dot"], 0),
        (["open-cat", "--space", d("discrete2.json"), "--target", d("sierpinski.json"), "--map", "0,0"], 0),
        (["refine", "--space", d("sierpinski.json"), "--fine", "[[0],[0,1]]", "--coarse", "[[0,1]]"], 0),
    ]
    json_runs = [(argv + ["--emit", "json"], code) for argv, code in runs if "--emit" not in argv]
    return runs + json_runs
