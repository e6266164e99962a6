"""K-theory invariants, classification verdicts and certified symbolic
unitaries for Leavitt path algebras of finite directed graphs."""

from .errors import InputError, VerificationError
from .graph import (
    Graph,
    VertexClassification,
    bk_matrix,
    classify_vertices,
    condition_L,
    disjoint_union,
    graph_from_json,
    graph_to_json,
    hereditary_saturated_closure,
    incidence_matrix,
    is_purely_infinite_simple,
    is_simple,
    matrix_algebra_size,
    rose,
    source_eliminate,
)
from .invariants import (
    AbstractRing,
    ClassificationVerdict,
    ExtReport,
    GROUND_FIELD,
    LpaInvariants,
    Simplicity,
    canonical_representative,
    classify,
    compute_invariants,
    ext_group,
    simplicity_of,
)
from .kconstruct import (
    EdgeVector,
    K1Class,
    UnitaryBundle,
    boundary_class,
    build_U,
    build_V,
    build_W,
    check_kernel_vector,
    cohn_lift,
    gamma,
    index_set,
    pairing_element,
    q_ideal_coordinates,
    s_star,
    verify_aux_identity,
)
from .lpa import (
    AlgebraElement,
    Context,
    GFElem,
    HomData,
    LpaMatrix,
    Monomial,
    apply_hom,
    boxplus,
    diagonal_basis_element,
    dl_coordinates,
    edge,
    ghost,
    identity_endomorphism,
    involution,
    is_in_DC,
    is_in_DL,
    lambda_map,
    multiply,
    parse_expression,
    path_element,
    q_idempotent,
    quotient_to_leavitt,
    render_element,
    twisted_endomorphism,
    unit,
    vertex,
    verify_homomorphism,
    zero,
)
from .zlinalg import (
    Cokernel,
    FgAbGroup,
    IntMatrix,
    IsoNo,
    IsoUnknown,
    IsoYes,
    PointedAbGroup,
    SmithDecomposition,
    apply_witness,
    check_witness,
    cokernel,
    det,
    ext1,
    hom_group,
    invariant_factors,
    is_automorphism,
    kernel_basis,
    pointed_isomorphic,
    smith,
)

__version__ = "0.1.0"
