"""Categorification of finite groups, group extensions and finite spaces."""

from .categories import (
    FinCategory,
    Functor,
    MonoidalStructure,
    NatTransformation,
    check_functor,
    check_monoidal,
    check_natural,
    functors_homotopic,
    make_category,
    pi0,
)
from .categorify import covering_transformation, discrete, lift_hom, simplicial, tautological
from .cohomology import coboundary, coefficient_module, cohomology_group, trivial_module
from .config import Limits
from .errors import CatkitError, SizeLimit, ValidationError
from .extensions import (
    bundle_categorify,
    check_twisted_cocycle,
    classify_extensions,
    crossed_product,
    factor_set,
    weak_equivalent,
)
from .groups import FiniteGroup, GroupHom, automorphisms, enumerate_homs, from_table, hom_conjugacy_classes
from .nerve import bar_spaces, homology, normalized_chains
from .smallgroups import by_name, identify
from .topology import finite_space, open_set_category, preimage_functor, refinement

__all__ = [name for name in dir() if not name.startswith("_")]
