"""Exact/numeric cluster-algebra engine for the sine-Gordon and reduced
sine-Gordon Y-system families: quiver builders, seed mutation over pluggable
semifields, scheduled runs, and theorem-level verification."""

from .laurent import DivisionByZero, LaurentPoly, NonExactDivision
from .quiver import (
    DomainError,
    DynkinType,
    InvalidVertex,
    LabeledQuiver,
    VertexId,
    build_rsg_quiver,
    build_sg_quiver,
    canonical_form,
    dynkin_type,
    mutate_matrix,
)
from .semifield import (
    NUMERIC,
    NonPositiveValue,
    Sign,
    TRIVIAL,
    TROPICAL,
    TropicalMonomial,
    classify_sign,
    trop_add,
    trop_mul,
)
from .seed_engine import (
    AdjacencyViolation,
    MissingSymbolicRun,
    MutationSchedule,
    ParityError,
    PermutationMaps,
    Seed,
    Trajectory,
    label_g,
    make_schedule,
    mutate_seed,
    run,
    scheduled_run,
)
from .ysystem import (
    InsufficientLength,
    VerificationReport,
    YSystemFamily,
    check_periodicity,
    check_t_relations,
    check_y_relations,
    dilog_sums,
    quiver_period_report,
    rogers_L,
    tropical_report,
)
from .mutclass import (
    ClassSearchResult,
    ReductionScript,
    coxeter_crosscheck,
    expected_dynkin,
    find_dynkin,
)

__all__ = [name for name in dir() if not name.startswith("_")]
