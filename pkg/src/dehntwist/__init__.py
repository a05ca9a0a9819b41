"""Exact computations with A-infinity bimodules over GF(2).

Builds twist complexes of sphere objects, verifies their defining
identities mechanically, and extracts homology and long exact sequences.
"""

from .category import (
    AInftyCategory,
    AInftyFunctor,
    CategoryError,
    ParseError,
    check_ainfty,
    identity_functor,
    load_category,
    parse_category,
)
from .f2 import ChainComplex, F2Matrix, GradedMap, GradedSpace, Homology, homology
from .modules import (
    OneSidedModule,
    abstract_twist,
    iterated_twist_oracle,
    yoneda_left,
    yoneda_right,
)
from .bimodule import (
    Bimodule,
    BimodulePreMorphism,
    cone,
    diagonal,
    differential_of,
    graph_bimodule,
    product_bimodule,
    restriction_nontriviality,
    shift,
)
from .homcomplex import CappedHomComplex, hom_complex, identity_class_is_nonzero
from .twistcomplex import (
    TwistTower,
    check_evaluation_closedness,
    index_tuples,
    rearrange_cone,
    structure_census,
)
from .sequences import build_D, les_of_cone_at_pair, les_of_cone_hom_into, open_sequence

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
