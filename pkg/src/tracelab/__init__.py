"""tracelab: numerics and symbolic calculus for power-weighted function
spaces on the half-space.

Layers:

* ``grid`` / ``lp``      -- periodized grids, dyadic frequency decompositions,
                            spectral multipliers;
* ``norms``              -- weighted Lebesgue/Sobolev/dyadic-block/Bessel
                            norms and the Hardy quotient;
* ``traceext``           -- boundary traces of normal derivatives and their
                            right-inverse extension operators;
* ``boundary``           -- normal boundary-operator systems, their right
                            inverse, and the extended ladder system;
* ``calculus``/``grammar`` -- the exact-rational rule engine with citations
                            and its query grammar;
* ``bank``/``suites``/``cli`` -- deterministic test banks, named verification
                            suites, reports, and the ``tracelab`` CLI.
"""

from .bank import BankConfig, BankMember, dilate, generate_bank, translate_axis0, write_bank
from .boundary import (
    BoundaryOperator,
    ExtendedSystem,
    NormalSystem,
    apply_boundary_operator,
    build_normal_system,
    ext_boundary,
    extended_system,
    kernel_equiv_check,
    load_system_json,
)
from .calculus import (
    INF,
    BCSignature,
    DescriptorError,
    DomainKind,
    Family,
    ParamSet,
    QueryResult,
    RuleCitation,
    SpaceDescriptor,
    density_class,
    embeds,
    fubini_split,
    interpolate,
    trace_space,
    trace_vector_space,
    validate_fields,
    validate_params,
)
from .grammar import QueryParseError, run_query
from .grid import (
    GridFunction,
    PeriodizedGrid,
    evaluate_at_x0,
    read_gridfunction,
    spectral_tail_fraction,
    write_gridfunction,
)
from .lp import (
    LpGenerator,
    LpSystem,
    SpectralMultiplier,
    SpectralTailError,
    apply_multiplier,
    bessel_multiplier,
    boundary_restrict,
    build_generator,
    build_lp_system,
    derivative_multiplier,
    lp_block,
    max_block_count,
)
from .norms import (
    HardyHypothesisError,
    NormResult,
    WeightSpec,
    bessel_norm,
    besov_norm,
    hardy_ratio,
    lp_norm,
    norm_rows_to_csv,
    reflection_extend,
    sobolev_norm,
    triebel_norm,
)
from .suites import SUITE_NAMES, SuiteReport, default_config, emit_report, run_suite
from .traceext import (
    EtaFamily,
    boundary_preserving_mollify,
    build_eta_family,
    ext0,
    ext_m,
    ext_vector,
    indicator_multiply,
    trace,
    trace_m,
)

__version__ = "0.1.0"
