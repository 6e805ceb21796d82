"""Encoders, erasure-specific decoders, and recovery fidelities.

The five-mode code replicates one input mode across the register so that
losing any one of four specific mode subsets still leaves enough to rebuild
it.  This module carries both register preparations:

* the *ideal* encoder — QND couplings acting on four finitely x-squeezed
  ancillas, the textbook form of the code;

* the *optical* encoder — two two-mode squeezers and two balanced beam
  splitters (plus one fixed squeezer on mode 5), a beam-splitter-native
  preparation of the same code whose four nullifier variances are all
  exactly 2 e^{-2r}.

For each supported erasure (named E1..E4) there are two decoders:

* ``ideal_decoder`` — the unitary on the survivors whose position action is
  the classic recovery matrix for that erasure (``decoder_matrix``); these
  are the synthesis targets.

* ``optical_decoder`` — a calibrated recovery line for the *optical*
  encoding, whose output fidelity against the original coherent input
  matches the closed forms

      F1 = 1
      F2 = F3 = 1 / (1 + 2 e^{-2r})
      F4 = 1 / (1 + e^{-2r})

  at every squeezing r and input amplitude.

Calibration notes.  The optical decoder gains are fixed by requiring the
output quadratures to equal the input's plus a noise term built only from
nullifiers, with minimal total noise given the gate layout; that forces the
sqrt-2 gains below.  E2 and E3 are measurement-free: every candidate
homodyne port on their survivor sets stays correlated with the output at
finite squeezing, so measuring one would make the result outcome-dependent.
E4 is the opposite case — after its couplings, the natural port carries
exactly the unsqueezed source quadrature, uncorrelated with the recovered
output — so it ends with a homodyne plus classical feedforward, and its
conditional output state is the same for every outcome.  A consequence
worth knowing when reading the numbers: the E4 measured variance is
cosh(2r)/2, so sampling that port is never degenerate.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, isfinite, log, nan

import numpy as np

from ..gaussian import (
    GaussianState,
    coherent,
    fidelity_with_coherent,
    squeeze,
    tensor,
    vacuum,
)
from .interpreter import RunResult, run, symplectic_of
from .ir import (
    BeamSplitterPM,
    Circuit,
    Discard,
    FeedforwardDisplace,
    Fourier,
    Measure,
    Pi,
    PointTransform,
    Qnd,
    SqueezeFactor,
    TwoModeSqueeze,
)

__all__ = [
    "ERASURE_TAGS",
    "ERASED_MODES",
    "SURVIVOR_MODES",
    "IDEAL_RECOVERY_WIRE",
    "OPTICAL_RECOVERY_WIRE",
    "ideal_encoder",
    "optical_encoder",
    "ideal_encoded_state",
    "optical_encoded_state",
    "erase",
    "ideal_decoder",
    "optical_decoder",
    "decoder_matrix",
    "closed_form_fidelity",
    "recovery_fidelity",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "fidelity_sweep",
    "threshold_squeezing",
    "UnreachableTargetError",
]

ERASURE_TAGS = ("E1", "E2", "E3", "E4")

ERASED_MODES = {
    "E1": (3, 4, 5),
    "E2": (2, 3),
    "E3": (2, 4),
    "E4": (1, 5),
}

SURVIVOR_MODES = {
    "E1": (1, 2),
    "E2": (1, 4, 5),
    "E3": (1, 3, 5),
    "E4": (2, 3, 4),
}

# Which surviving wire holds the recovered input after each decoder.
IDEAL_RECOVERY_WIRE = {"E1": 2, "E2": 1, "E3": 1, "E4": 4}
OPTICAL_RECOVERY_WIRE = {"E1": 2, "E2": 5, "E3": 3, "E4": 4}

_SQRT2 = float(np.sqrt(2.0))


def _check_tag(tag: str) -> None:
    if tag not in ERASURE_TAGS:
        raise ValueError(f"unknown erasure tag {tag!r}; valid: {', '.join(ERASURE_TAGS)}")


def ideal_encoder() -> Circuit:
    """QND-coupling encoder: wire 1 is the input, wires 2-5 the ancillas.

    On position eigenstates it sends |x; y, y, z, z> (the ancilla pattern
    produced by the couplings from squeezed inputs) to the code pattern
    |x+y, y-x, y-z, z+y, z>.
    """
    return Circuit(
        (1, 2, 3, 4, 5),
        (
            Fourier(2),
            Fourier(5),
            Qnd(5, 4, 1.0),
            Qnd(2, 3, 1.0),
            Qnd(2, 4, 1.0),
            Qnd(1, 2, -1.0),
            Qnd(3, 1, 1.0),
            Qnd(5, 3, -1.0),
        ),
    )


def optical_encoder(r: float) -> Circuit:
    """Beam-splitter-native encoder: wire 1 the input, wires 2-5 vacuum.

    Two two-mode squeezers make the y and z resource pairs, the beam
    splitters fold them onto the input, and the final fixed squeezer puts
    mode 5 on the code's scale.  All four nullifier variances come out
    exactly 2 e^{-2r}.
    """
    if not isfinite(r):
        raise ValueError("squeezing parameter must be finite")
    return Circuit(
        (1, 2, 3, 4, 5),
        (
            TwoModeSqueeze(2, 4, r),
            TwoModeSqueeze(3, 5, r),
            BeamSplitterPM(1, 2),
            Pi(2),
            BeamSplitterPM(4, 3),
            SqueezeFactor(5, 1.0 / _SQRT2),
        ),
    )


def ideal_encoded_state(r: float, alpha: complex = 0j) -> GaussianState:
    """Run the ideal encoder on a coherent input and x-squeezed ancillas."""
    ancilla = squeeze(vacuum(1), 0, -r)
    register = tensor(coherent(alpha), ancilla, ancilla, ancilla, ancilla)
    return run(ideal_encoder(), register).state


def optical_encoded_state(r: float, alpha: complex = 0j) -> GaussianState:
    """Run the optical encoder on a coherent input and vacuum ancillas."""
    register = tensor(coherent(alpha), vacuum(4))
    return run(optical_encoder(r), register).state


def erase(state: GaussianState, tag: str) -> GaussianState:
    """Trace out the erased modes, leaving the survivors in wire order."""
    _check_tag(tag)
    if state.n_modes != 5:
        raise ValueError(f"erasure acts on the 5-mode register, got {state.n_modes} modes")
    from ..gaussian import discard

    return discard(state, [m - 1 for m in ERASED_MODES[tag]])


def ideal_decoder(tag: str) -> Circuit:
    """Unitary recovery on the survivors of one erasure (no measurements).

    The recovered input sits on wire IDEAL_RECOVERY_WIRE[tag] afterwards.
    Position action of each circuit is exactly ``decoder_matrix(tag)``.
    """
    _check_tag(tag)
    if tag == "E1":
        return Circuit((1, 2), (BeamSplitterPM(1, 2),))
    if tag == "E2":
        return Circuit(
            (1, 4, 5),
            (Qnd(5, 4, -2.0), Qnd(4, 1, -1.0), Qnd(5, 1, -1.0), Qnd(1, 5, -1.0)),
        )
    if tag == "E3":
        return Circuit(
            (1, 3, 5),
            (Qnd(5, 3, 2.0), Qnd(3, 5, -1.0), Qnd(5, 1, 1.0), Qnd(1, 5, 1.0)),
        )
    return Circuit(
        (2, 3, 4),
        (Qnd(4, 3, -1.0), Qnd(2, 4, -1.0), Qnd(3, 4, 0.5), Qnd(4, 2, 2.0)),
    )


def decoder_matrix(tag: str) -> PointTransform:
    """Position-basis transform of the ideal decoder, rows/cols in survivor order."""
    _check_tag(tag)
    if tag == "E1":
        h = 1.0 / _SQRT2
        return PointTransform(np.array([[h, h], [h, -h]]))
    if tag == "E2":
        return PointTransform(np.array([[1.0, -1.0, 1.0], [0.0, 1.0, -2.0], [-1.0, 1.0, 0.0]]))
    if tag == "E3":
        return PointTransform(np.array([[1.0, -1.0, -1.0], [0.0, 1.0, 2.0], [1.0, -2.0, -2.0]]))
    return PointTransform(np.array([[-1.0, 1.0, 1.0], [0.0, 1.0, -1.0], [-1.0, 0.5, 0.5]]))


# Pivot orders under which resynthesizing a decoder matrix reproduces the
# reference gate sequence for that decoder (see synthesis.synthesize's
# pivot_rows).  Tags without an entry use the default pivot preference.
REFERENCE_PIVOT_ROWS: dict = {"E2": (2, 1, 2)}


def optical_decoder(tag: str) -> Circuit:
    """Calibrated recovery line for the optically encoded register.

    Consumes the survivors of the erasure down to the single recovered wire
    (OPTICAL_RECOVERY_WIRE[tag]); E4 is the one decoder that homodynes a
    port and feeds the outcome forward.
    """
    _check_tag(tag)
    if tag == "E1":
        return Circuit((1, 2), (BeamSplitterPM(1, 2), Discard(1)))
    if tag == "E2":
        return Circuit(
            (1, 4, 5),
            (
                BeamSplitterPM(1, 4),
                SqueezeFactor(5, _SQRT2),
                Qnd(4, 5, 2.0),
                Qnd(5, 1, -2.0),
                Discard(1),
                Discard(4),
            ),
        )
    if tag == "E3":
        return Circuit(
            (1, 3, 5),
            (
                SqueezeFactor(3, _SQRT2),
                Pi(3),
                Qnd(1, 3, _SQRT2),
                Qnd(5, 3, -_SQRT2),
                Qnd(3, 1, -_SQRT2),
                Qnd(3, 5, 1.0 / _SQRT2),
                Discard(1),
                Discard(5),
            ),
        )
    return Circuit(
        (2, 3, 4),
        (
            BeamSplitterPM(4, 3),
            Qnd(4, 2, -_SQRT2),
            Qnd(2, 4, _SQRT2),
            Qnd(3, 4, 1.0),
            Measure(3, "x", "m1"),
            Discard(2),
            Pi(4),
            FeedforwardDisplace("m1", 4, "x", 1.0),
        ),
    )


def closed_form_fidelity(tag: str, r: float) -> float:
    """Recovery fidelity formula for the optical pipeline at squeezing r."""
    _check_tag(tag)
    if tag == "E1":
        return 1.0
    if tag in ("E2", "E3"):
        return 1.0 / (1.0 + 2.0 * exp(-2.0 * r))
    return 1.0 / (1.0 + exp(-2.0 * r))


def recovery_fidelity(
    tag: str,
    r: float,
    alpha: complex = 0j,
    *,
    rng: np.random.Generator | None = None,
) -> float:
    """Simulated fidelity of optical encode -> erase -> decode vs the input.

    Deterministic by default: the one decoder containing a measurement (E4)
    is run in analytic-average mode, which equals its every-outcome
    conditional state because the feedforward cancels the outcome exactly.
    Pass ``rng`` to sample the homodyne instead (same fidelity, by design).
    """
    _check_tag(tag)
    survivors = erase(optical_encoded_state(r, alpha), tag)
    decoder = optical_decoder(tag)
    if rng is not None:
        result: RunResult = run(decoder, survivors, rng=rng)
    else:
        result = run(decoder, survivors, average=True)
    out = result.state
    keep = result.labels.index(OPTICAL_RECOVERY_WIRE[tag])
    if out.n_modes > 1:
        from ..gaussian import discard

        out = discard(out, [i for i in range(out.n_modes) if i != keep])
    return fidelity_with_coherent(out, alpha)


# ---------------------------------------------------------------------------
# sweeps and thresholds

@dataclass(frozen=True)
class SweepSpec:
    r_min: float = 0.0
    r_max: float = 2.0
    steps: int = 9
    errors: tuple[str, ...] = ERASURE_TAGS
    alpha: complex = 0j

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.r_max < self.r_min:
            raise ValueError("r_max must be >= r_min")
        errors = tuple(self.errors)
        for tag in errors:
            _check_tag(tag)
        if len(set(errors)) != len(errors):
            raise ValueError("duplicate erasure tags in sweep")
        if not errors:
            raise ValueError("sweep needs at least one erasure tag")
        object.__setattr__(self, "errors", errors)
        object.__setattr__(self, "alpha", complex(self.alpha))


@dataclass(frozen=True)
class SweepRow:
    r: float
    simulated: dict  # tag -> fidelity; nan for tags outside the sweep
    formula: dict  # tag -> closed form
    max_abs_dev: float  # over the swept tags only


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple
    max_abs_dev: float


def fidelity_sweep(spec: SweepSpec, *, rng: np.random.Generator | None = None) -> SweepResult:
    """Simulate every requested erasure over a squeezing grid.

    Each row carries the simulated and closed-form fidelities for all four
    tags (simulated entries of unswept tags are nan) plus the row's largest
    simulation-vs-formula deviation.  With an ``rng``, decoders that contain
    a homodyne sample it instead of averaging — the deviations should not
    care, which is itself a property worth sweeping.
    """
    if spec.steps == 1:
        grid = [float(spec.r_min)]
    else:
        grid = list(np.linspace(spec.r_min, spec.r_max, spec.steps))
    rows = []
    worst = 0.0
    for r in grid:
        simulated = {}
        formula = {}
        devs = []
        for tag in ERASURE_TAGS:
            formula[tag] = closed_form_fidelity(tag, r)
            if tag in spec.errors:
                simulated[tag] = recovery_fidelity(tag, r, spec.alpha, rng=rng)
                devs.append(abs(simulated[tag] - formula[tag]))
            else:
                simulated[tag] = nan
        row_dev = max(devs)
        worst = max(worst, row_dev)
        rows.append(SweepRow(float(r), simulated, formula, row_dev))
    return SweepResult(spec, tuple(rows), worst)


class UnreachableTargetError(ValueError):
    pass


def _worst_case_fidelity(r: float) -> float:
    return min(recovery_fidelity(tag, r) for tag in ERASURE_TAGS)


def threshold_squeezing(target: float, *, tol: float = 1e-6) -> float:
    """Least squeezing r at which every erasure's simulated fidelity >= target.

    Bisects the simulated worst case (not the formulas), so it stays honest
    if the simulation and the closed forms ever disagree.  Targets >= 1 are
    unreachable at finite squeezing; targets already met at r = 0 return 0.
    """
    if not isfinite(target):
        raise ValueError("target fidelity must be finite")
    if target >= 1.0:
        raise UnreachableTargetError(
            f"target fidelity {target} is unreachable: the worst-case recovery "
            f"fidelity approaches 1 only as squeezing grows without bound"
        )
    if tol <= 0:
        raise ValueError("tol must be positive")
    if _worst_case_fidelity(0.0) >= target:
        return 0.0
    lo, hi = 0.0, 1.0
    while _worst_case_fidelity(hi) < target:
        lo, hi = hi, hi * 2.0
        if hi > 64.0:  # worst case is ~1 - 2e^{-2r}; this would be absurd
            raise UnreachableTargetError(
                f"no squeezing below r = 64 reaches target fidelity {target}"
            )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _worst_case_fidelity(mid) >= target:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
