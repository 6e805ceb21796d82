"""Replication codes for continuous-variable modes.

Build stabilizer codes that replicate one bosonic mode across causally
scattered regions, synthesize and rewrite the encoding/decoding circuits,
simulate them on Gaussian states at finite squeezing, and check the whole
story numerically — correctability, the chain-complex structure behind the
generators, and the closed-form recovery fidelities.
"""

from .codes import (
    EdgeBasis,
    ErasurePattern,
    FIVE_MODE_ERASURES,
    StabilizerCode,
    build_five_mode_code,
    build_general_code,
    check_correctable,
    directed_triangle,
    edge_basis,
    erasure_for_vertex,
    format_generator_matrix,
    nullifier_variances,
    star_vector,
    symplectic_product,
    triangle_vector,
)
from .gaussian import (
    DegenerateMeasurementError,
    GaussianState,
    MeasurementRecord,
    SymplecticMap,
    beam_splitter,
    beam_splitter_pm,
    coherent,
    discard,
    displace,
    feedforward_displace,
    fidelity_with_coherent,
    fourier,
    homodyne,
    inverse_fourier,
    omega,
    phase_shift,
    qnd,
    squeeze,
    squeeze_by_factor,
    symplectic_eigenvalues,
    tensor,
    two_mode_squeeze,
    vacuum,
)
from .homology import (
    ChainComplex,
    SubspacePair,
    boundary_matrix,
    build_homological_code,
    butterfly_matrix,
    chain_complex,
    decompose,
    rowspaces_equal,
    verify_correctability_homological,
)
from .replication import (
    BUILTIN_CONFIGURATIONS,
    CausalDiamond,
    Configuration,
    SpacetimePoint,
    ValidationReport,
    Violation,
    builtin_configuration,
    causal_graph,
    causal_leq,
    configuration_from_json,
    diamonds_related,
    find_chain,
    load_configuration,
    select_code,
    validate,
)
from .tolerances import TOL, Tolerances
from .circuits import (
    ERASED_MODES,
    ERASURE_TAGS,
    IDEAL_RECOVERY_WIRE,
    OPTICAL_RECOVERY_WIRE,
    SURVIVOR_MODES,
    BeamSplitterPM,
    Circuit,
    CircuitParseError,
    Discard,
    Displace,
    FeedforwardDisplace,
    Fourier,
    InverseFourier,
    Measure,
    PhaseShift,
    Pi,
    PointTransform,
    Qnd,
    RewriteError,
    RunResult,
    SqueezeFactor,
    Swap,
    SweepResult,
    SweepRow,
    SweepSpec,
    SynthesisError,
    TwoModeSqueeze,
    UnreachableTargetError,
    closed_form_fidelity,
    decoder_matrix,
    erase,
    fidelity_sweep,
    ideal_decoder,
    ideal_encoded_state,
    ideal_encoder,
    op_map,
    optical_decoder,
    optical_encoded_state,
    optical_encoder,
    parse,
    recovery_fidelity,
    rewrite,
    rule_ids,
    run,
    serialize,
    symplectic_of,
    synthesize,
    threshold_squeezing,
)

__version__ = "0.1.0"
