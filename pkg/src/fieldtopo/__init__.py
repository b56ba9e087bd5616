"""Topological invariants of vector fields and necessary-condition checks
for control dynamics: Gauss-map degrees, equilibrium indices, simplicial
homology, and the classical feedback-stabilization obstructions built on
them."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    DegreeUndecidedError,
    DomainError,
    FieldTopoError,
    LyapunovHypothesisError,
    MeshError,
    NonHyperbolicError,
    NonManifoldError,
    ParseError,
    RegularityError,
    ScenarioError,
    TubeRadiusError,
    VanishingFieldError,
)
from .fieldlang import (  # noqa: F401
    Expr,
    FieldSpec,
    ScalarSpec,
    evaluate_field,
    gradient,
    jacobian,
    parse_feedback,
    parse_field,
    parse_scalar,
    to_source,
)
from .mesh import (  # noqa: F401
    OrientationReport,
    SimplicialMesh,
    builtin_klein_bottle,
    builtin_projective_plane,
    export_mesh,
    import_mesh,
    orient_mesh,
    refine_mesh,
)
from .spheres import build_sphere_mesh  # noqa: F401
from .levelset import extract_level_set  # noqa: F401
from .tubes import tubular_neighborhood_mesh  # noqa: F401
from .homology import (  # noqa: F401
    ChainComplex,
    HomologyGroup,
    chain_complex_of,
    euler_characteristic,
    homology_groups,
    smith_normal_form,
)
from .degree import (  # noqa: F401
    DegreeConfig,
    DegreeResult,
    Equilibrium,
    degree,
    find_equilibria,
    gauss_map,
    hyperbolic_index,
    mod2_degree,
    topological_index,
)
from .conditions import (  # noqa: F401
    ClosedCurve,
    ConditionReport,
    ControlNeighborhood,
    CycleConfig,
    brockett_surjectivity_check,
    classify_homotopy_class,
    closed_loop_index_check,
    flat_torus_index_check,
    hemisphere_test,
    isotopy_check,
    locate_limit_cycle,
    poincare_hopf_check,
    preimage_count_check,
)
from .scenarios import (  # noqa: F401
    BUILTIN_SCENARIOS,
    RunReport,
    list_scenarios,
    run_scenario,
    validate_scenario,
)
