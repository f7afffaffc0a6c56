"""Finite groupoids acting partially on commutative algebras spanned by idempotents.

Builds and validates groupoids and partial actions, orthogonalizes and
globalizes them, decides the Galois and strongly Galois properties and
tabulates the three Galois correspondences.
"""

from .action import PartialAction, build_action, check_equivalence, predicates, restrict, validate_action
from .algebra import QQ, BaseRing, IdempotentAlgebra, PartitionSubalgebra, bracket_parse, bracket_render
from .catalog import CATALOG, non_galois_global, not_strongly_galois, random_action, s8_example
from .constructions import globalize, orthogonalize, standard_restriction, verify_globalization
from .correspondence import (
    is_strongly_galois,
    render_table,
    run_global_correspondence,
    run_orthogonal_correspondence,
    run_strong_correspondence,
    sim_classes,
)
from .errors import GroupoidGaloisError, PreconditionError, TheoremViolation
from .galois import invariants, is_alpha_strong, is_galois, separability_witness, stabilizer
from .groupoid import (
    FiniteGroupoid,
    Subgroupoid,
    coarse_groupoid,
    connected_decomposition,
    enumerate_wide_subgroupoids,
    product,
    validate_groupoid,
)

__version__ = "0.1.0"
