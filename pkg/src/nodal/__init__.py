"""Exact classification toolkit for complete real nodal orders.

The package models the four maximal scalar local series rings over the
reals, standard hereditary orders and their normalizers, semi-simple
algebra embeddings with their elementary decompositions, the chain-based
classification data with exact equivalence testing and enumeration, and
the assembly of each datum into a concrete truncated order together with
an independent nodality verification.  All arithmetic is exact rational.
"""

from .scalars import DIVISION_TAGS, DIMENSION, ORDER_TAGS, RESIDUE_TAG, DivisionScalar
from .series import DEFAULT_TRUNCATION, TLaurent, series, square_class
from .hereditary import (
    CoefficientAuto,
    HereditaryOrder,
    InnerAuto,
    MonomialForm,
    RotationAuto,
    TruncationError,
    induced_map,
    mat_equal,
    mat_inverse,
    mat_mul,
    minimal_period,
    monomial_matrix,
    normal_form,
)
from .semisimple import (
    AlgebraHom,
    ElementaryComponent,
    MultiplicityProfile,
    SSAlgebra,
    are_similar,
    conjugate_hom,
    decompose,
    is_homomorphism,
    is_nodal_embedding,
    multiplicities,
    reassemble,
    regular_embed,
    regular_embedding_of,
    scalar_action_embedding,
)
from .tuples import (
    ClassTuple,
    EquivWitness,
    TupleError,
    basify,
    canonical_form,
    canonical_key,
    compose_witness,
    enumerate_tuples,
    equivalent,
    invert_witness,
    transport,
    validate,
    validation_errors,
)
from .assembly import (
    AssembledOrder,
    NodalityReport,
    assemble,
    build,
    dimension_profile,
    is_commutative,
    radical_finite,
    structure_constants,
    verify_assembly,
    verify_nodal,
)

__version__ = "0.1.0"
