"""State-vector simulation of the Hadamard/oracle sampling circuits.

The simulator keeps the ancilla explicit: the single-output circuit acts on
n+1 qubits (input register plus phase-kickback ancilla), the multi-output
circuit on n+2m+1 qubits across four registers.  Basis-state indices
concatenate the registers most-significant-first, matching the encoding
convention in :mod:`walshgl.boolfn`.

Measurement outcomes can also be drawn from the exact spectral distribution
P(w) = S(w)^2 without building a state vector; both sources are identically
distributed, and the spectral source is exact in integer arithmetic, so an
outcome with a zero coefficient can never be drawn.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import rng
from .boolfn import BitVector, BooleanFunction, VectorialFunction, _as_mask, parity_u64
from .errors import CapacityError
from .walsh import WalshSpectrum, component_spectrum, fwht

MAX_STATE_QUBITS = 15

SPECTRAL = "spectral"
STATEVECTOR = "statevector"
MODES = (SPECTRAL, STATEVECTOR)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class QuantumState:
    """Pure state over consecutive qubit registers."""

    __slots__ = ("register_widths", "amplitudes")

    def __init__(self, register_widths: Sequence[int], amplitudes: np.ndarray):
        widths = tuple(int(w) for w in register_widths)
        if any(w < 1 for w in widths):
            raise ValueError(f"register widths must be positive, got {widths}")
        total = sum(widths)
        if total > MAX_STATE_QUBITS:
            raise CapacityError(
                f"{total} qubits exceed the state-vector limit of {MAX_STATE_QUBITS}"
            )
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.shape != (1 << total,):
            raise ValueError(
                f"amplitude vector must have length 2^{total}, got {amps.shape}"
            )
        if amps.flags.writeable:  # never freeze or alias a caller's array
            amps = amps.copy()
            amps.setflags(write=False)
        self.register_widths = widths
        self.amplitudes = amps

    @classmethod
    def basis(cls, register_widths: Sequence[int], values: Sequence[int]) -> "QuantumState":
        """Computational basis state |v1>|v2>...|vk>."""
        widths = tuple(int(w) for w in register_widths)
        if len(values) != len(widths):
            raise ValueError("one value per register required")
        index = 0
        for w, v in zip(widths, values):
            v = int(v)
            if not 0 <= v < (1 << w):
                raise ValueError(f"register value {v} does not fit in {w} qubits")
            index = (index << w) | v
        amps = np.zeros(1 << sum(widths), dtype=np.complex128)
        amps[index] = 1.0
        return cls(widths, amps)

    @property
    def num_qubits(self) -> int:
        return sum(self.register_widths)

    def register_shift(self, reg: int) -> int:
        """Bit shift of register ``reg``'s least significant qubit."""
        widths = self.register_widths
        if not 0 <= reg < len(widths):
            raise ValueError(f"no register {reg} in a {len(widths)}-register state")
        return sum(widths[reg + 1 :])

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def register_marginal(self, reg: int) -> np.ndarray:
        """Probability of each outcome when measuring one register."""
        w = self.register_widths[reg]
        pre = sum(self.register_widths[:reg])
        post = self.num_qubits - pre - w
        cube = self.probabilities().reshape(1 << pre, 1 << w, 1 << post)
        return cube.sum(axis=(0, 2))


def apply_hadamard(state: QuantumState, reg: int) -> QuantumState:
    """Hadamard on every qubit of one register."""
    total = state.num_qubits
    shift = state.register_shift(reg)
    width = state.register_widths[reg]
    amps = state.amplitudes.copy()
    for q in range(width):
        g = total - 1 - (shift + q)  # global position from the MSB
        cube = amps.reshape(1 << g, 2, -1)
        top = cube[:, 0, :].copy()
        bottom = cube[:, 1, :].copy()
        cube[:, 0, :] = (top + bottom) * _INV_SQRT2
        cube[:, 1, :] = (top - bottom) * _INV_SQRT2
    return QuantumState(state.register_widths, amps)


def apply_xor_oracle(
    state: QuantumState, src: int, dst: int, table: np.ndarray
) -> QuantumState:
    """|x>_src |y>_dst -> |x>_src |y XOR table[x]>_dst."""
    if src == dst:
        raise ValueError("source and destination registers must differ")
    src_w = state.register_widths[src]
    dst_w = state.register_widths[dst]
    table = np.asarray(table)
    if table.shape != (1 << src_w,):
        raise ValueError(f"oracle table must have 2^{src_w} entries")
    if table.max(initial=0) >= (1 << dst_w):
        raise ValueError(f"oracle table values must fit in {dst_w} qubits")
    idx = np.arange(state.amplitudes.shape[0], dtype=np.uint32)
    x = (idx >> np.uint32(state.register_shift(src))) & np.uint32((1 << src_w) - 1)
    flips = table.astype(np.uint32)[x] << np.uint32(state.register_shift(dst))
    # XOR permutations are involutions, so gathering at idx^flips applies it.
    return QuantumState(state.register_widths, state.amplitudes[idx ^ flips])


def apply_uip(state: QuantumState, regs: tuple[int, int, int] = (1, 2, 3)) -> QuantumState:
    """Inner-product phase: basis state picks up (-1)^(y.b) where y and b
    are the first two named registers.

    Diagonal in the computational basis; the third named register must be
    the 1-qubit ancilla that holds the |-> component at the point of use.
    """
    ry, rb, ranc = regs
    wy = state.register_widths[ry]
    wb = state.register_widths[rb]
    if wy != wb:
        raise ValueError(f"inner-product registers must match: {wy} vs {wb} qubits")
    if state.register_widths[ranc] != 1:
        raise ValueError("ancilla register must be a single qubit")
    idx = np.arange(state.amplitudes.shape[0], dtype=np.uint64)
    y = (idx >> np.uint64(state.register_shift(ry))) & np.uint64((1 << wy) - 1)
    b = (idx >> np.uint64(state.register_shift(rb))) & np.uint64((1 << wb) - 1)
    signs = 1.0 - 2.0 * parity_u64(y & b).astype(np.float64)
    return QuantumState(state.register_widths, state.amplitudes * signs)


# --- circuits ---------------------------------------------------------------


def dj_state(f: BooleanFunction) -> QuantumState:
    """Final pre-measurement state of the Deutsch-Jozsa circuit on f.

    Registers (n, 1); with the ancilla factored as (|0>-|1>)/sqrt(2), the
    coefficient of |w> equals S(w).
    """
    if f.n + 1 > MAX_STATE_QUBITS:
        raise CapacityError(
            f"n={f.n} needs {f.n + 1} qubits, over the limit {MAX_STATE_QUBITS}"
        )
    state = QuantumState.basis((f.n, 1), (0, 1))
    state = apply_hadamard(state, 0)
    state = apply_hadamard(state, 1)
    state = apply_xor_oracle(state, 0, 1, f.bits)
    return apply_hadamard(state, 0)


def dj_amplitudes(state: QuantumState) -> np.ndarray:
    """Coefficients of |w> (x) |-> for a state whose last register is the
    1-qubit ancilla."""
    if state.register_widths[-1] != 1:
        raise ValueError("last register must be the 1-qubit ancilla")
    pairs = state.amplitudes.reshape(-1, 2)
    return (pairs[:, 0] - pairs[:, 1]) * _INV_SQRT2


def qwt_bf_state(F: VectorialFunction, b: BitVector | int) -> QuantumState:
    """Final state of the multi-output circuit for the component mask b.

    Registers (n, m, m, 1) holding |x>|value>|b>|ancilla>.  The phase
    oracle for x -> b.F(x) is realized as compute / inner-product phase /
    uncompute: writing F(x) into the value register, kicking back the
    (-1)^(b.F(x)) phase, then XOR-ing F(x) out again.  The uncompute step
    is what disentangles the value register; without it the branches
    |F(x)> would decohere the final interference and the first register
    would NOT measure as S_{b.F}(a)^2.  After it, the first register's
    marginal equals S_{b.F}(a)^2 exactly.
    """
    qubits = F.n + 2 * F.m + 1
    if qubits > MAX_STATE_QUBITS:
        raise CapacityError(
            f"n={F.n}, m={F.m} needs {qubits} qubits, over the limit {MAX_STATE_QUBITS}"
        )
    b = _as_mask(b, F.m, "b")
    state = QuantumState.basis((F.n, F.m, F.m, 1), (0, 0, b, 1))
    state = apply_hadamard(state, 0)
    state = apply_hadamard(state, 3)
    state = apply_xor_oracle(state, 0, 1, F.table)
    state = apply_uip(state, (1, 2, 3))
    state = apply_xor_oracle(state, 0, 1, F.table)
    return apply_hadamard(state, 0)


# --- measurement sampling ----------------------------------------------------


class SampleStream:
    """Reproducible stream of measurement outcomes for one fixed circuit.

    ``source`` is "spectral" (exact inverse CDF over integer weights
    W(w)^2 / 4^n) or "statevector" (inverse CDF over the simulated
    first-register marginal).  Outcome i is derived from the i-th output of
    the Philox substream (seed, label), so a stream replays identically
    and ``draws`` records everything drawn so far.
    """

    __slots__ = ("n", "source", "seed", "label", "_cum_int", "_total", "_cum_float", "_rng", "_drawn")

    def __init__(self, n: int, source: str, seed: int, label: int = 0):
        if source not in MODES:
            raise ValueError(f"unknown sampling source {source!r}; use one of {MODES}")
        self.n = n
        self.source = source
        self.seed = int(seed)
        self.label = int(label)
        self._cum_int = None
        self._total = None
        self._cum_float = None
        self._rng = rng.generator(seed, label)
        self._drawn: list[np.ndarray] = []

    @classmethod
    def from_spectrum(cls, spectrum: WalshSpectrum, seed: int, label: int = 0) -> "SampleStream":
        stream = cls(spectrum.n, SPECTRAL, seed, label)
        cum = np.cumsum(spectrum.squared_weights())
        if int(cum[-1]) != 4**spectrum.n:
            raise ValueError("coefficient weights violate Parseval; corrupt spectrum")
        stream._cum_int = cum
        stream._total = int(cum[-1])
        return stream

    @classmethod
    def from_probabilities(cls, probs: np.ndarray, seed: int, label: int = 0) -> "SampleStream":
        probs = np.asarray(probs, dtype=np.float64)
        n = int(probs.shape[0]).bit_length() - 1
        if probs.shape != (1 << n,):
            raise ValueError("probability table length must be a power of two")
        cum = np.cumsum(probs)
        cum /= cum[-1]
        stream = cls(n, STATEVECTOR, seed, label)
        stream._cum_float = cum
        return stream

    def draw_encoded(self, count: int) -> np.ndarray:
        """The next ``count`` outcomes as encoded integers."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        if self.source == SPECTRAL:
            u = self._rng.integers(0, self._total, size=count, dtype=np.uint64)
            out = np.searchsorted(self._cum_int, u, side="right").astype(np.uint64)
        else:
            u = self._rng.random(size=count)
            out = np.searchsorted(self._cum_float, u, side="right").astype(np.uint64)
        self._drawn.append(out)
        return out

    def draw(self) -> BitVector:
        return BitVector(self.n, int(self.draw_encoded(1)[0]))

    @property
    def count(self) -> int:
        """Number of outcomes drawn so far (the oracle query count)."""
        return sum(len(chunk) for chunk in self._drawn)

    @property
    def draws(self) -> tuple[BitVector, ...]:
        if not self._drawn:
            return ()
        return tuple(
            BitVector(self.n, int(v)) for v in np.concatenate(self._drawn)
        )


def dj_sample_stream(
    f: BooleanFunction, seed: int, mode: str = SPECTRAL, label: int = 0
) -> SampleStream:
    """Measurement stream for the Deutsch-Jozsa circuit on f."""
    if mode == SPECTRAL:
        return SampleStream.from_spectrum(fwht(f), seed, label)
    if mode == STATEVECTOR:
        return SampleStream.from_probabilities(
            dj_state(f).register_marginal(0), seed, label
        )
    raise ValueError(f"unknown sampling mode {mode!r}; use one of {MODES}")


def qwt_bf_sample_stream(
    F: VectorialFunction,
    b: BitVector | int,
    seed: int,
    mode: str = SPECTRAL,
    label: int = 0,
) -> SampleStream:
    """Measurement stream for the multi-output circuit on component b."""
    if mode == SPECTRAL:
        return SampleStream.from_spectrum(component_spectrum(F, b), seed, label)
    if mode == STATEVECTOR:
        return SampleStream.from_probabilities(
            qwt_bf_state(F, b).register_marginal(0), seed, label
        )
    raise ValueError(f"unknown sampling mode {mode!r}; use one of {MODES}")


def dj_sample(f: BooleanFunction, seed: int, mode: str = SPECTRAL) -> BitVector:
    """One measurement of the circuit on f: w with probability S(w)^2."""
    return dj_sample_stream(f, seed, mode).draw()


def qwt_bf_sample(
    F: VectorialFunction, b: BitVector | int, seed: int, mode: str = SPECTRAL
) -> BitVector:
    """One measurement of the multi-output circuit: a with probability
    S_{b.F}(a)^2."""
    return qwt_bf_sample_stream(F, b, seed, mode).draw()
