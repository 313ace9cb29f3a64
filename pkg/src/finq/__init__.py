"""Exact computation with finite lattices, quantales and tight endomaps."""

from .errors import (
    BottomNotAbsorbed,
    BudgetExceeded,
    CoincidenceFailed,
    CycleDetected,
    FinqError,
    NotADuality,
    NotALattice,
    NotANucleus,
    NotAssociative,
    NotAssociativeRelation,
    NotBounded,
    NotDistinctAtoms,
    NotDistributive,
    NotDualizing,
    NotInjective,
    NotMeetPreserving,
    NotMonotone,
    NotSerreDualityOnQuotient,
    NotSerreGC,
    NotSupPreserving,
    NotTight,
    NotWeaklySymmetric,
    ParseError,
    ValidationFailed,
)
from .diamonds import (
    ClosureReport,
    MnTightReport,
    NegationReport,
    PositivityReport,
    check_negation_formulas,
    closures_vs_sublattices,
    count_tight_mn,
    f_gen,
    pentagon_diamond_check,
    positivity_suite_mn,
    sup_endomap_images_mn,
    tight_count_formula,
    tight_images_mn,
    tight_profile_mn,
)
from .formats import (
    dumps_report,
    endomap_from_dict,
    endomap_to_dict,
    lattice_from_dict,
    lattice_to_dict,
    load_json,
    quantale_from_dict,
    quantale_to_dict,
    relation_from_dict,
    semigroup_from_dict,
)
from .lattice import (
    EndoMap,
    FiniteLattice,
    LatticeMap,
    boolean,
    build_lattice,
    chain,
    enumerate_sup_endomaps,
    identity_map,
    is_distributive,
    is_meet_preserving,
    is_order_isomorphism,
    is_sup_preserving,
    join_of,
    left_adjoint,
    m_lattice,
    meet_of,
    n5,
    product,
    right_adjoint,
    standard_lattice,
)
from .nuclei import (
    BinaryRelation,
    FiniteSemigroup,
    Nucleus,
    NucleusReport,
    QuotientQuantale,
    RelationGaloisReport,
    RepresentationReport,
    cyclic_group,
    is_nucleus,
    left_zero_semigroup,
    lift_serre,
    phase_quantale,
    powerset_quantale,
    quotient_quantale,
    relation_galois,
    represent_frobenius,
    representable_flags,
    serre_gc_quotient,
)
from .quantale import (
    ContinuityReport,
    FrobeniusStructure,
    Quantale,
    SerrePairReport,
    UnitReport,
    check_frobenius,
    check_quantale,
    check_strongly_continuous,
    chu,
    dual_mult,
    dual_mult_table,
    element_flags,
    find_unit,
    frobenius_from_dualizing,
    is_positive_element,
    is_positive_quantale,
    residual_left,
    residual_right,
    trivial_quantale,
)
from .raney import (
    BulletStructure,
    IsoReport,
    TightQuantale,
    a_map,
    bullet_quantale,
    c_map,
    cotight_closure,
    decompose_tight,
    is_cotight,
    is_tight,
    meet_closure,
    raney_inf,
    raney_sup,
    star,
    tensor_map,
    tight_interior,
    tight_quantale,
)

__version__ = "0.1.0"
