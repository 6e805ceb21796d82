"""Circuit IR, interpreter, synthesis, rewriting, and code recovery lines."""

from .interpreter import RunResult, op_map, run, symplectic_of
from .ir import (
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
    SqueezeFactor,
    Swap,
    TwoModeSqueeze,
    parse,
    serialize,
)
from .recovery import (
    ERASED_MODES,
    ERASURE_TAGS,
    IDEAL_RECOVERY_WIRE,
    OPTICAL_RECOVERY_WIRE,
    REFERENCE_PIVOT_ROWS,
    SURVIVOR_MODES,
    SweepResult,
    SweepRow,
    SweepSpec,
    UnreachableTargetError,
    closed_form_fidelity,
    decoder_matrix,
    erase,
    fidelity_sweep,
    ideal_decoder,
    ideal_encoded_state,
    ideal_encoder,
    optical_decoder,
    optical_encoded_state,
    optical_encoder,
    recovery_fidelity,
    threshold_squeezing,
)
from .rewrite import RewriteError, rewrite, rule_ids
from .synthesis import SynthesisError, synthesize

__all__ = [
    "BeamSplitterPM",
    "Circuit",
    "CircuitParseError",
    "Discard",
    "Displace",
    "ERASED_MODES",
    "ERASURE_TAGS",
    "FeedforwardDisplace",
    "Fourier",
    "IDEAL_RECOVERY_WIRE",
    "InverseFourier",
    "Measure",
    "OPTICAL_RECOVERY_WIRE",
    "PhaseShift",
    "Pi",
    "PointTransform",
    "Qnd",
    "REFERENCE_PIVOT_ROWS",
    "RewriteError",
    "RunResult",
    "SURVIVOR_MODES",
    "SqueezeFactor",
    "Swap",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "SynthesisError",
    "TwoModeSqueeze",
    "UnreachableTargetError",
    "closed_form_fidelity",
    "decoder_matrix",
    "erase",
    "fidelity_sweep",
    "ideal_decoder",
    "ideal_encoded_state",
    "ideal_encoder",
    "op_map",
    "optical_decoder",
    "optical_encoded_state",
    "optical_encoder",
    "parse",
    "recovery_fidelity",
    "rewrite",
    "rule_ids",
    "run",
    "serialize",
    "symplectic_of",
    "synthesize",
    "threshold_squeezing",
]
