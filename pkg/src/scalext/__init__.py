"""Exact computations with small DG-categories: hulls of twisted complexes,
extension of scalars along finite field extensions, Galois descent and
certified generation levels."""

__version__ = "0.1.0"

from .basechange import (
    BaseChangeCategory,
    BaseChangeHull,
    ModuleStructure,
    adjunction_check,
    descend,
    galois_act,
    hom_subcomplex,
    p_lower,
    p_star,
    projection_formula_check,
    star_condition_check,
)
from .catalog import build_example
from .complexes import ChainMap, CochainComplex, cohomology, solve_null_homotopy
from .dg import DgFunctor, FiniteDgCategory, IsoWitness, Morphism, validate_dg_category
from .dimension import (
    Exhausted,
    GenerationWitness,
    SearchBudget,
    dimension_upper_bound,
    galois_transport_witness,
    search_generation,
    verify_generation_witness,
)
from .fields import GF, QQ, automorphism_group, make_extension
from .pretr import PretriangulatedHull, TwistedComplex
