"""Gaussian-state simulator.

States are Gaussian, represented by a mean vector and covariance matrix over
quadrature coordinates ordered ``[x_1 .. x_n, p_1 .. p_n]``.  Conventions:
hbar = 1, x = (a + a†)/sqrt(2), so the vacuum variance of every quadrature
is 1/2 and [x, p] = i.

All operations are value-style: they validate their inputs, never mutate the
given state, and return a fresh :class:`GaussianState`.  Symplectic gates are
built from small blocks embedded into the full 2n-dimensional phase space;
measurements condition the state with the standard Gaussian (Schur
complement) update and then drop the measured mode entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tolerances import TOL

__all__ = [
    "GaussianState",
    "SymplecticMap",
    "MeasurementRecord",
    "DegenerateMeasurementError",
    "omega",
    "symplectic_eigenvalues",
    "tensor",
    "vacuum",
    "coherent",
    "displace",
    "squeeze",
    "squeeze_by_factor",
    "two_mode_squeeze",
    "beam_splitter",
    "beam_splitter_pm",
    "phase_shift",
    "fourier",
    "inverse_fourier",
    "qnd",
    "homodyne",
    "feedforward_displace",
    "discard",
    "fidelity_with_coherent",
]


class DegenerateMeasurementError(ValueError):
    """Raised when a homodyne hits a quadrature with (numerically) zero variance."""


def omega(n_modes: int) -> np.ndarray:
    r"""Canonical symplectic form on ``n_modes`` modes in xxpp ordering.

    With :math:`u = (\vec s_1, \vec t_1)`, :math:`v = (\vec s_2, \vec t_2)`,
    the form is :math:`u^T \Omega v = \vec s_1 \cdot \vec t_2 - \vec t_1 \cdot \vec s_2`.
    """
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix (ascending, one per mode)."""
    n = cov.shape[0] // 2
    if n == 0:
        return np.zeros(0)
    spectrum = np.abs(np.linalg.eigvals(1j * omega(n) @ cov))
    return np.sort(spectrum)[::2]


class GaussianState:
    """Mean vector + covariance matrix over n modes, xxpp ordering."""

    def __init__(self, mean: np.ndarray, cov: np.ndarray, *, _validate: bool = True):
        mean = np.asarray(mean, dtype=float)
        cov = np.asarray(cov, dtype=float)
        if mean.ndim != 1 or mean.size % 2 != 0:
            raise ValueError(f"mean must be a vector of even length, got shape {mean.shape}")
        n = mean.size // 2
        if cov.shape != (2 * n, 2 * n):
            raise ValueError(
                f"cov shape {cov.shape} inconsistent with mean of length {mean.size}"
            )
        self.n_modes = n
        self.mean = mean
        self.cov = cov
        if _validate:
            self.validate()

    def validate(self) -> None:
        if not np.all(np.isfinite(self.mean)) or not np.all(np.isfinite(self.cov)):
            raise ValueError("state contains non-finite entries")
        asym = np.max(np.abs(self.cov - self.cov.T), initial=0.0)
        if asym > TOL.cov_symmetry:
            raise ValueError(f"covariance not symmetric: max asymmetry {asym:.3e}")
        if self.n_modes:
            nu_min = symplectic_eigenvalues(self.cov).min()
            if nu_min < 0.5 - TOL.symplectic_eig_slack:
                raise ValueError(
                    f"covariance violates the uncertainty bound: "
                    f"min symplectic eigenvalue {nu_min!r} < 1/2"
                )

    def copy(self) -> "GaussianState":
        return GaussianState(self.mean.copy(), self.cov.copy(), _validate=False)

    # Convenience views used by code/nullifier analysis.
    @property
    def cov_x(self) -> np.ndarray:
        n = self.n_modes
        return self.cov[:n, :n]

    @property
    def cov_p(self) -> np.ndarray:
        n = self.n_modes
        return self.cov[n:, n:]

    def mean_of(self, mode: int, quad: str) -> float:
        idx = _quad_index(self, mode, quad)
        return float(self.mean[idx])

    def variance_of(self, mode: int, quad: str) -> float:
        idx = _quad_index(self, mode, quad)
        return float(self.cov[idx, idx])

    def __repr__(self) -> str:
        return f"GaussianState(n_modes={self.n_modes})"


@dataclass(frozen=True)
class SymplecticMap:
    """Affine Gaussian map: state -> (matrix @ mean + displacement, matrix @ cov @ matrix.T)."""

    matrix: np.ndarray
    displacement: np.ndarray

    def __post_init__(self):
        S = np.asarray(self.matrix, dtype=float)
        d = np.asarray(self.displacement, dtype=float)
        object.__setattr__(self, "matrix", S)
        object.__setattr__(self, "displacement", d)
        n2 = S.shape[0]
        if S.shape != (n2, n2) or n2 % 2 or d.shape != (n2,):
            raise ValueError(f"bad shapes: matrix {S.shape}, displacement {d.shape}")
        form = omega(n2 // 2)
        defect = np.max(np.abs(S @ form @ S.T - form))
        if defect > TOL.symplectic_check:
            raise ValueError(f"matrix is not symplectic: defect {defect:.3e}")

    @staticmethod
    def identity(n_modes: int) -> "SymplecticMap":
        return SymplecticMap(np.eye(2 * n_modes), np.zeros(2 * n_modes))

    def after(self, first: "SymplecticMap") -> "SymplecticMap":
        """The composite map 'first, then self'."""
        return SymplecticMap(
            self.matrix @ first.matrix,
            self.matrix @ first.displacement + self.displacement,
        )

    def apply(self, state: GaussianState) -> GaussianState:
        if self.matrix.shape[0] != 2 * state.n_modes:
            raise ValueError(
                f"map on {self.matrix.shape[0] // 2} modes applied to "
                f"{state.n_modes}-mode state"
            )
        return GaussianState(
            self.matrix @ state.mean + self.displacement,
            self.matrix @ state.cov @ self.matrix.T,
            _validate=False,
        )


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome of one homodyne: which mode index was measured, in which basis."""

    mode: int
    basis: str
    outcome: float

    def __post_init__(self):
        if self.basis not in ("x", "p"):
            raise ValueError(f"basis must be 'x' or 'p', got {self.basis!r}")
        if not np.isfinite(self.outcome):
            raise ValueError("measurement outcome must be finite")


# ---------------------------------------------------------------------------
# state constructors

def vacuum(n_modes: int) -> GaussianState:
    """n-mode vacuum: zero mean, covariance I/2."""
    if n_modes < 1:
        raise ValueError("vacuum needs at least one mode")
    return GaussianState(np.zeros(2 * n_modes), np.eye(2 * n_modes) / 2, _validate=False)


def coherent(alpha: complex) -> GaussianState:
    """Single-mode coherent state: displaced vacuum, mean (sqrt2 Re a, sqrt2 Im a)."""
    return displace(vacuum(1), 0, alpha)


def tensor(*states: GaussianState) -> GaussianState:
    """Product state; modes of later factors are appended after earlier ones."""
    if not states:
        raise ValueError("tensor of zero states")
    n = sum(s.n_modes for s in states)
    mean = np.zeros(2 * n)
    cov = np.zeros((2 * n, 2 * n))
    offset = 0
    for s in states:
        m = s.n_modes
        idx = np.r_[offset : offset + m, n + offset : n + offset + m]
        mean[idx] = s.mean
        cov[np.ix_(idx, idx)] = s.cov
        offset += m
    return GaussianState(mean, cov, _validate=False)


# ---------------------------------------------------------------------------
# symplectic gate blocks (xxpp ordering within each block)

def _check_mode(state: GaussianState, mode: int) -> None:
    if not 0 <= mode < state.n_modes:
        raise ValueError(f"mode {mode} out of range for {state.n_modes}-mode state")


def _quad_index(state: GaussianState, mode: int, quad: str) -> int:
    _check_mode(state, mode)
    if quad not in ("x", "p"):
        raise ValueError(f"quadrature must be 'x' or 'p', got {quad!r}")
    return mode if quad == "x" else state.n_modes + mode


def _embed_single(n: int, mode: int, block: np.ndarray) -> np.ndarray:
    """Embed a 2x2 block acting on (x_m, p_m) into the 2n x 2n identity."""
    S = np.eye(2 * n)
    idx = [mode, n + mode]
    S[np.ix_(idx, idx)] = block
    return S

def _embed_pair(n: int, a: int, b: int, block: np.ndarray) -> np.ndarray:
    """Embed a 4x4 block acting on (x_a, x_b, p_a, p_b) into the identity."""
    S = np.eye(2 * n)
    idx = [a, b, n + a, n + b]
    S[np.ix_(idx, idx)] = block
    return S


def single_mode_block(kind: str, value: float = 0.0) -> np.ndarray:
    """2x2 (x, p) blocks for the single-mode gates."""
    if kind == "squeeze_factor":
        k = value
        if k == 0 or not np.isfinite(k):
            raise ValueError(f"squeeze factor must be finite and nonzero, got {k!r}")
        return np.array([[k, 0.0], [0.0, 1.0 / k]])
    if kind == "phase":
        c, s = np.cos(value), np.sin(value)
        return np.array([[c, -s], [s, c]])
    # Exact quarter/half-turn blocks: these appear inside algebraic rewrite
    # identities that are checked to tight tolerances, so they must not pick
    # up cos(pi/2) != 0 rounding noise.
    if kind == "fourier":
        return np.array([[0.0, -1.0], [1.0, 0.0]])
    if kind == "inverse_fourier":
        return np.array([[0.0, 1.0], [-1.0, 0.0]])
    if kind == "pi":
        return -np.eye(2)
    raise ValueError(f"unknown single-mode gate kind {kind!r}")


def pair_block(kind: str, value: float = 0.0) -> np.ndarray:
    """4x4 (x_a, x_b, p_a, p_b) blocks for the two-mode gates."""
    if kind == "qnd":
        g = value
        return np.array(
            [
                [1.0, 0.0, 0.0, 0.0],
                [g, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, -g],
                [0.0, 0.0, 0.0, 1.0],
            ]
        )
    if kind == "bs_pm":
        h = 1.0 / np.sqrt(2.0)
        B = np.array([[h, h], [h, -h]])
        out = np.zeros((4, 4))
        out[:2, :2] = B
        out[2:, 2:] = B
        return out
    if kind == "bs_rotation":
        c, s = np.cos(value), np.sin(value)
        R = np.array([[c, s], [-s, c]])
        out = np.zeros((4, 4))
        out[:2, :2] = R
        out[2:, 2:] = R
        return out
    if kind == "swap":
        X = np.array([[0.0, 1.0], [1.0, 0.0]])
        out = np.zeros((4, 4))
        out[:2, :2] = X
        out[2:, 2:] = X
        return out
    if kind == "two_mode_squeeze":
        ch, sh = np.cosh(value), np.sinh(value)
        return np.array(
            [
                [ch, sh, 0.0, 0.0],
                [sh, ch, 0.0, 0.0],
                [0.0, 0.0, ch, -sh],
                [0.0, 0.0, -sh, ch],
            ]
        )
    raise ValueError(f"unknown two-mode gate kind {kind!r}")


def _apply_single(state: GaussianState, mode: int, block: np.ndarray) -> GaussianState:
    _check_mode(state, mode)
    S = _embed_single(state.n_modes, mode, block)
    return GaussianState(S @ state.mean, S @ state.cov @ S.T, _validate=False)


def _apply_pair(state: GaussianState, a: int, b: int, block: np.ndarray) -> GaussianState:
    _check_mode(state, a)
    _check_mode(state, b)
    if a == b:
        raise ValueError(f"two-mode gate needs distinct modes, got ({a}, {b})")
    S = _embed_pair(state.n_modes, a, b, block)
    return GaussianState(S @ state.mean, S @ state.cov @ S.T, _validate=False)


# ---------------------------------------------------------------------------
# gates

def displace(state: GaussianState, mode: int, alpha: complex) -> GaussianState:
    """Shift the mode's mean by (sqrt2 Re alpha, sqrt2 Im alpha); covariance unchanged."""
    _check_mode(state, mode)
    alpha = complex(alpha)
    if not np.isfinite(alpha.real) or not np.isfinite(alpha.imag):
        raise ValueError("displacement amplitude must be finite")
    mean = state.mean.copy()
    mean[mode] += np.sqrt(2.0) * alpha.real
    mean[state.n_modes + mode] += np.sqrt(2.0) * alpha.imag
    return GaussianState(mean, state.cov.copy(), _validate=False)


def squeeze_by_factor(state: GaussianState, mode: int, k: float) -> GaussianState:
    """Scale x by k and p by 1/k on one mode.

    Negative k is allowed (it is the parity flip combined with a |k| squeeze);
    circuit synthesis emits it for sign-flipping row scalings.
    """
    return _apply_single(state, mode, single_mode_block("squeeze_factor", k))


def squeeze(state: GaussianState, mode: int, r: float) -> GaussianState:
    """One-mode squeezer with log-factor r: x -> e^r x, p -> e^-r p."""
    if not np.isfinite(r):
        raise ValueError("squeezing parameter must be finite")
    return squeeze_by_factor(state, mode, float(np.exp(r)))


def two_mode_squeeze(state: GaussianState, modes: tuple[int, int], r: float) -> GaussianState:
    """Two-mode squeezer: correlates x_a with x_b and anticorrelates p_a with p_b.

    x_a -> x_a cosh r + x_b sinh r      p_a -> p_a cosh r - p_b sinh r
    x_b -> x_b cosh r + x_a sinh r      p_b -> p_b cosh r - p_a sinh r

    On vacuum this squeezes the x-difference and p-sum: Var((x_a - x_b)/sqrt2)
    = e^{-2r}/2.
    """
    a, b = modes
    if not np.isfinite(r):
        raise ValueError("squeezing parameter must be finite")
    return _apply_pair(state, a, b, pair_block("two_mode_squeeze", r))


def beam_splitter_pm(state: GaussianState, modes: tuple[int, int]) -> GaussianState:
    """Balanced beam splitter, "plus/minus" convention.

    x_a -> (x_a + x_b)/sqrt2, x_b -> (x_a - x_b)/sqrt2, identically on p.
    The matrix is an involution: applying it twice is the identity.
    """
    a, b = modes
    return _apply_pair(state, a, b, pair_block("bs_pm"))


def beam_splitter(state: GaussianState, modes: tuple[int, int], angle: float) -> GaussianState:
    """General beam splitter as a mode-space rotation by ``angle``.

    x_a -> cos(t) x_a + sin(t) x_b, x_b -> -sin(t) x_a + cos(t) x_b, same on p.
    """
    a, b = modes
    return _apply_pair(state, a, b, pair_block("bs_rotation", angle))


def phase_shift(state: GaussianState, mode: int, phi: float) -> GaussianState:
    """Rotate one mode's (x, p) plane by phi.

    The mean map is [[cos, -sin], [sin, cos]], so phi = pi/2 (the Fourier
    gate) sends a coherent state at amplitude 1 to amplitude i, and phi = pi
    negates both quadratures.
    """
    return _apply_single(state, mode, single_mode_block("phase", phi))


def fourier(state: GaussianState, mode: int) -> GaussianState:
    """Quarter turn (x, p) -> (-p, x), applied as an exact matrix."""
    return _apply_single(state, mode, single_mode_block("fourier"))


def inverse_fourier(state: GaussianState, mode: int) -> GaussianState:
    """Quarter turn (x, p) -> (p, -x), applied as an exact matrix."""
    return _apply_single(state, mode, single_mode_block("inverse_fourier"))


def qnd(state: GaussianState, control: int, target: int, gain: float) -> GaussianState:
    """Controlled addition of quadratures (QND / CPLUS gate).

    x_target -> x_target + gain * x_control, and the unique symplectic
    completion p_control -> p_control - gain * p_target; x_control and
    p_target are untouched.
    """
    if control == target:
        raise ValueError("qnd control and target must differ")
    if not np.isfinite(gain):
        raise ValueError("qnd gain must be finite")
    return _apply_pair(state, control, target, pair_block("qnd", gain))


# ---------------------------------------------------------------------------
# measurement / feedforward / discard

def homodyne(
    state: GaussianState,
    mode: int,
    basis: str,
    *,
    outcome: float | None = None,
    rng: np.random.Generator | None = None,
    average: bool = False,
) -> tuple[MeasurementRecord, GaussianState]:
    """Measure one quadrature; condition and drop the measured mode.

    Exactly one outcome policy must be chosen:

    - ``outcome=value`` forces the result (deterministic tests),
    - ``rng=generator`` samples it from the Gaussian marginal,
    - ``average=True`` uses the current mean of the measured quadrature,
      which reproduces the outcome-averaged output for circuits whose
      feedforward cancels outcome dependence.

    The conditional covariance never depends on the outcome; the conditional
    mean follows the standard Gaussian conditioning (Schur complement) rule.
    The measured mode is removed entirely -- its conjugate quadrature is
    junk after the measurement and is not tracked.
    """
    q = _quad_index(state, mode, basis)
    policies = (outcome is not None) + (rng is not None) + bool(average)
    if policies != 1:
        raise ValueError("choose exactly one of outcome=, rng=, average=True")

    var_q = state.cov[q, q]
    if var_q < TOL.degenerate_variance:
        raise DegenerateMeasurementError(
            f"quadrature {basis}[{mode}] has variance {var_q:.3e}; "
            "conditioning is singular"
        )

    if outcome is not None:
        m = float(outcome)
    elif average:
        m = float(state.mean[q])
    else:
        m = float(rng.normal(state.mean[q], np.sqrt(var_q)))
    if not np.isfinite(m):
        raise ValueError("homodyne outcome must be finite")

    col = state.cov[:, q]
    mean = state.mean + col * ((m - state.mean[q]) / var_q)
    cov = state.cov - np.outer(col, col) / var_q

    keep = [i for i in range(2 * state.n_modes) if i not in (mode, state.n_modes + mode)]
    reduced = GaussianState(mean[keep], cov[np.ix_(keep, keep)], _validate=False)
    return MeasurementRecord(mode, basis, m), reduced


def feedforward_displace(
    state: GaussianState,
    target: int,
    quad: str,
    gain: float,
    record: MeasurementRecord,
) -> GaussianState:
    """Classically controlled displacement: mean[quad of target] += gain * outcome."""
    idx = _quad_index(state, target, quad)
    if not np.isfinite(gain):
        raise ValueError("feedforward gain must be finite")
    mean = state.mean.copy()
    mean[idx] += gain * record.outcome
    return GaussianState(mean, state.cov.copy(), _validate=False)


def discard(state: GaussianState, modes) -> GaussianState:
    """Partial trace: delete the given modes' mean entries and cov rows/columns."""
    drop = set(int(m) for m in modes)
    for m in drop:
        _check_mode(state, m)
    if len(drop) >= state.n_modes:
        raise ValueError("cannot discard every mode")
    if not drop:
        return state.copy()
    n = state.n_modes
    keep = [i for i in range(n) if i not in drop]
    idx = np.r_[keep, [n + i for i in keep]].astype(int)
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)], _validate=False)


# ---------------------------------------------------------------------------
# fidelity

def fidelity_with_coherent(state: GaussianState, alpha: complex) -> float:
    """Overlap <alpha| rho |alpha> for a single-mode Gaussian rho.

    Closed form: F = exp(-1/2 d^T (V + I/2)^-1 d) / sqrt(det(V + I/2)) with
    d the mean difference from the coherent state's mean.
    """
    if state.n_modes != 1:
        raise ValueError(f"fidelity_with_coherent needs a single-mode state, got {state.n_modes}")
    alpha = complex(alpha)
    target = np.array([np.sqrt(2.0) * alpha.real, np.sqrt(2.0) * alpha.imag])
    M = state.cov + np.eye(2) / 2
    delta = state.mean - target
    value = float(np.exp(-0.5 * delta @ np.linalg.solve(M, delta)) / np.sqrt(np.linalg.det(M)))
    return value
