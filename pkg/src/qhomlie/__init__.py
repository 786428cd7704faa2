"""Exact computations with quadratic Hom-Lie algebras over the rationals.

Everything is exact (``fractions.Fraction``); linear maps act on column
vectors, so column ``j`` of a matrix is the image of basis vector ``j``.
"""
from .algebra import (
    AlgebraError,
    Check,
    CheckReport,
    HomLieAlgebra,
    StructureTensor,
    Witness,
    adjoint_matrix,
    bracket_eval,
    center,
    check_quadratic_homlie,
    derived_subalgebra,
    equivariance_check,
    hom_jacobi_check,
    hom_jacobi_defect,
    ideal_closure,
    invariance_check,
    is_derivation,
    is_ideal,
    is_in_oB,
    is_nilpotent,
    jacobi_check,
    jacobi_defect,
    lie_algebra,
    lower_central_series,
    quotient,
    self_adjoint_check,
    transport,
)
from .constructions import (
    ConstructionError,
    Prop11Data,
    Prop12Data,
    abelian_quadratic,
    direct_sum,
    example_nilpotent_prop12,
    example_sl2,
    example_toy_prop12,
    extend_prop11,
    extend_prop12,
    sl2_bracket,
    sl2_rho,
    validate_prop11,
    validate_prop12,
)
from .documents import DocumentError, load_algebra, load_shipped, parse, save_algebra, serialize
from .lieification import (
    CoboundaryResult,
    CocycleData,
    LieificationError,
    RecoveryMap,
    center_triviality_consequences,
    cocycle_theta,
    is_coboundary,
    is_cocycle,
    lieify,
    nilpotency_step,
    nilpotency_transfer_check,
    recover_h,
)
from .linalg import Mat, Rat, Subspace, complement, image, kernel, orthogonal_complement, rref_solve, witt_split
from .structure import (
    DecompositionResult,
    FittingResult,
    StraightenResult,
    StructureError,
    check_isometric_isomorphism,
    decompose_thm22,
    fitting,
    is_simple_thmA,
    killing_form,
    maximal_proper_ideal_containing,
    straighten,
)

__version__ = "0.1.0"
