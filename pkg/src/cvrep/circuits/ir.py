"""Circuit intermediate representation.

A circuit is an ordered op list over named wires.  Wire labels are 1-based
integers (matching how modes are numbered in all I/O); a circuit that acts on
the survivors of an erasure keeps the original labels, e.g. ``labels=(1, 4,
5)``.  Ops reference wires by label, never by position.

Measurement results land in named classical registers; feedforward ops read
them.  Validation walks the op list once, tracking which wires are still
live and which registers have been written.

Serialization is line-oriented text, one op per line, with a ``MODES``
header naming the wires.  Numbers are printed as plain integers when whole
and ``repr(float)`` otherwise, so parse(print(c)) reproduces the circuit
bit-for-bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import isfinite

__all__ = [
    "Qnd",
    "BeamSplitterPM",
    "SqueezeFactor",
    "PhaseShift",
    "Fourier",
    "InverseFourier",
    "Pi",
    "Swap",
    "Displace",
    "TwoModeSqueeze",
    "Measure",
    "FeedforwardDisplace",
    "Discard",
    "Circuit",
    "PointTransform",
    "CircuitParseError",
    "serialize",
    "parse",
]


@dataclass(frozen=True)
class Qnd:
    control: int
    target: int
    gain: float

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("qnd control and target must differ")
        if not isfinite(self.gain):
            raise ValueError("qnd gain must be finite")


@dataclass(frozen=True)
class BeamSplitterPM:
    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("beam splitter modes must differ")


@dataclass(frozen=True)
class SqueezeFactor:
    mode: int
    factor: float

    def __post_init__(self):
        if self.factor == 0 or not isfinite(self.factor):
            raise ValueError(f"squeeze factor must be finite and nonzero, got {self.factor!r}")


@dataclass(frozen=True)
class PhaseShift:
    mode: int
    phi: float


@dataclass(frozen=True)
class Fourier:
    mode: int


@dataclass(frozen=True)
class InverseFourier:
    mode: int


@dataclass(frozen=True)
class Pi:
    mode: int


@dataclass(frozen=True)
class Swap:
    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("swap modes must differ")


@dataclass(frozen=True)
class Displace:
    mode: int
    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))


@dataclass(frozen=True)
class TwoModeSqueeze:
    a: int
    b: int
    r: float

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("two-mode squeezer modes must differ")
        if not isfinite(self.r):
            raise ValueError("squeezing parameter must be finite")


@dataclass(frozen=True)
class Measure:
    mode: int
    basis: str
    register: str

    def __post_init__(self):
        if self.basis not in ("x", "p"):
            raise ValueError(f"basis must be 'x' or 'p', got {self.basis!r}")
        if not re.fullmatch(r"[A-Za-z_]\w*", self.register):
            raise ValueError(f"bad register name {self.register!r}")


@dataclass(frozen=True)
class FeedforwardDisplace:
    register: str
    target: int
    quad: str
    gain: float

    def __post_init__(self):
        if self.quad not in ("x", "p"):
            raise ValueError(f"quadrature must be 'x' or 'p', got {self.quad!r}")
        if not isfinite(self.gain):
            raise ValueError("feedforward gain must be finite")


@dataclass(frozen=True)
class Discard:
    mode: int


_UNITARY = (
    Qnd,
    BeamSplitterPM,
    SqueezeFactor,
    PhaseShift,
    Fourier,
    InverseFourier,
    Pi,
    Swap,
    Displace,
    TwoModeSqueeze,
)


def wires_of(op) -> tuple[int, ...]:
    """Labels an op touches, in field order."""
    if isinstance(op, (Qnd,)):
        return (op.control, op.target)
    if isinstance(op, (BeamSplitterPM, Swap, TwoModeSqueeze)):
        return (op.a, op.b)
    if isinstance(op, (SqueezeFactor, PhaseShift, Fourier, InverseFourier, Pi, Displace, Measure, Discard)):
        return (op.mode,)
    if isinstance(op, FeedforwardDisplace):
        return (op.target,)
    raise TypeError(f"not a circuit op: {op!r}")


@dataclass(frozen=True)
class Circuit:
    """Ordered ops over labelled wires; immutable after construction."""

    labels: tuple[int, ...]
    ops: tuple = ()

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "ops", tuple(self.ops))
        if len(set(labels)) != len(labels) or any(v < 1 for v in labels):
            raise ValueError(f"labels must be distinct positive integers, got {labels}")
        self.validate()

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    def validate(self) -> None:
        live = set(self.labels)
        written: set[str] = set()
        for i, op in enumerate(self.ops):
            for wire in wires_of(op):
                if wire not in live:
                    raise ValueError(
                        f"op {i} ({type(op).__name__}) references wire {wire}, "
                        f"which is not live"
                    )
            if isinstance(op, Measure):
                if op.register in written:
                    raise ValueError(f"register {op.register!r} written twice")
                written.add(op.register)
                live.remove(op.mode)
            elif isinstance(op, Discard):
                live.remove(op.mode)
            elif isinstance(op, FeedforwardDisplace):
                if op.register not in written:
                    raise ValueError(
                        f"op {i} reads register {op.register!r} before any measurement writes it"
                    )

    def is_unitary(self) -> bool:
        return all(isinstance(op, _UNITARY) for op in self.ops)

    def surviving_labels(self) -> tuple[int, ...]:
        gone = {op.mode for op in self.ops if isinstance(op, (Measure, Discard))}
        return tuple(v for v in self.labels if v not in gone)

    def with_ops(self, ops) -> "Circuit":
        return Circuit(self.labels, tuple(ops))

    def __len__(self) -> int:
        return len(self.ops)


@dataclass(frozen=True)
class PointTransform:
    """Position-basis map |x> -> |A x>; lifts to the symplectic block diag(A, A^-T)."""

    A: "object"

    def __post_init__(self):
        import numpy as np

        A = np.asarray(self.A, dtype=float)
        object.__setattr__(self, "A", A)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"point transform must be square, got shape {A.shape}")
        if abs(np.linalg.det(A)) <= 1e-12:
            raise ValueError("point transform must be invertible")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def to_symplectic(self):
        """The 2n x 2n xxpp symplectic lift diag(A, A^-T) with zero displacement."""
        import numpy as np

        from ..gaussian import SymplecticMap

        n = self.n
        S = np.zeros((2 * n, 2 * n))
        S[:n, :n] = self.A
        S[n:, n:] = np.linalg.inv(self.A).T
        return SymplecticMap(S, np.zeros(2 * n))


# ---------------------------------------------------------------------------
# serialization

class CircuitParseError(ValueError):
    pass


def _fmt(v: float) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)


def serialize(circuit: Circuit) -> str:
    lines = ["MODES " + " ".join(str(v) for v in circuit.labels)]
    for op in circuit.ops:
        if isinstance(op, Qnd):
            lines.append(f"QND c={op.control} t={op.target} gain={_fmt(op.gain)}")
        elif isinstance(op, BeamSplitterPM):
            lines.append(f"BS a={op.a} b={op.b}")
        elif isinstance(op, SqueezeFactor):
            lines.append(f"SQ mode={op.mode} factor={_fmt(op.factor)}")
        elif isinstance(op, PhaseShift):
            lines.append(f"PHASE mode={op.mode} phi={_fmt(op.phi)}")
        elif isinstance(op, Fourier):
            lines.append(f"FOURIER mode={op.mode}")
        elif isinstance(op, InverseFourier):
            lines.append(f"INVFOURIER mode={op.mode}")
        elif isinstance(op, Pi):
            lines.append(f"PI mode={op.mode}")
        elif isinstance(op, Swap):
            lines.append(f"SWAP a={op.a} b={op.b}")
        elif isinstance(op, Displace):
            lines.append(f"DISP mode={op.mode} re={_fmt(op.alpha.real)} im={_fmt(op.alpha.imag)}")
        elif isinstance(op, TwoModeSqueeze):
            lines.append(f"TMS a={op.a} b={op.b} r={_fmt(op.r)}")
        elif isinstance(op, Measure):
            lines.append(f"MEAS mode={op.mode} basis={op.basis} reg={op.register}")
        elif isinstance(op, FeedforwardDisplace):
            lines.append(
                f"FF reg={op.register} target={op.target} quad={op.quad} gain={_fmt(op.gain)}"
            )
        elif isinstance(op, Discard):
            lines.append(f"DISCARD mode={op.mode}")
        else:
            raise TypeError(f"cannot serialize {op!r}")
    return "\n".join(lines) + "\n"


def _fields(tokens: list[str], lineno: int) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise CircuitParseError(f"line {lineno}: expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        out[key] = val
    return out


def parse(text: str) -> Circuit:
    labels: tuple[int, ...] | None = None
    ops = []
    max_wire = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "MODES":
                if ops or labels is not None:
                    raise CircuitParseError(f"line {lineno}: MODES must come first, once")
                labels = tuple(int(v) for v in rest)
                continue
            kv = _fields(rest, lineno)
            if head == "QND":
                op = Qnd(int(kv["c"]), int(kv["t"]), float(kv["gain"]))
            elif head == "BS":
                op = BeamSplitterPM(int(kv["a"]), int(kv["b"]))
            elif head == "SQ":
                op = SqueezeFactor(int(kv["mode"]), float(kv["factor"]))
            elif head == "PHASE":
                op = PhaseShift(int(kv["mode"]), float(kv["phi"]))
            elif head == "FOURIER":
                op = Fourier(int(kv["mode"]))
            elif head == "INVFOURIER":
                op = InverseFourier(int(kv["mode"]))
            elif head == "PI":
                op = Pi(int(kv["mode"]))
            elif head == "SWAP":
                op = Swap(int(kv["a"]), int(kv["b"]))
            elif head == "DISP":
                op = Displace(int(kv["mode"]), complex(float(kv["re"]), float(kv["im"])))
            elif head == "TMS":
                op = TwoModeSqueeze(int(kv["a"]), int(kv["b"]), float(kv["r"]))
            elif head == "MEAS":
                op = Measure(int(kv["mode"]), kv["basis"], kv["reg"])
            elif head == "FF":
                op = FeedforwardDisplace(kv["reg"], int(kv["target"]), kv["quad"], float(kv["gain"]))
            elif head == "DISCARD":
                op = Discard(int(kv["mode"]))
            else:
                raise CircuitParseError(f"line {lineno}: unknown op {head!r}")
        except (KeyError, ValueError) as exc:
            if isinstance(exc, CircuitParseError):
                raise
            raise CircuitParseError(f"line {lineno}: {exc}") from exc
        ops.append(op)
        max_wire = max([max_wire, *wires_of(op)])
    if labels is None:
        labels = tuple(range(1, max_wire + 1))
    try:
        return Circuit(labels, tuple(ops))
    except ValueError as exc:
        raise CircuitParseError(str(exc)) from exc
