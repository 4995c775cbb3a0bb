"""Group actions, perspective projection and orbit equivalence for 4 x n point configurations."""
from .consistency import (
    AutomorphismGroup,
    FiniteStructure,
    RepresentationMap,
    acts_freely,
    automorphisms,
    involutions,
    is_representation,
    pairwise_consistent,
    theorem_report,
    union_pair,
)
from .equivalence import EquivalenceDecision, Status, degeneracy_check, recover_transform, relation_axioms_suite
from .exceptions import (
    DegenerateViewError,
    FocalPlaneError,
    InvalidInputError,
    SamplerFailure,
    SizeLimitError,
    StereoShapeError,
)
from .group_action import (
    FullTransform,
    ProperWitness,
    RestrictedTransform,
    act,
    assert_free_restricted,
    nonproper_witness,
    paper_example_report,
    scalar_stabilizer_check,
)
from .linalg_core import Tolerances, in_M, in_M_tilde, numerical_rank, random_config
from .projection import compatible_d, iota, verify_intertwining

__version__ = "0.1.0"
