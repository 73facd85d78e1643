"""Exact Walsh spectra in integer arithmetic.

Coefficients are kept as integers W(a) = 2^n * S(a) so that Parseval and
every threshold comparison are exact; the correlation S(a) in [-1, 1]
appears only at API boundaries.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .boolfn import BitVector, BooleanFunction, VectorialFunction, parity_u64
from .errors import CapacityError


def as_fraction(value: float | int | str | Fraction) -> Fraction:
    """Exact rational view of a threshold.

    Strings parse as decimals or ratios ("0.4", "2/5") and are exact;
    floats convert to the dyadic rational they actually represent.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class WalshSpectrum:
    """All 2^n integer coefficients W(a) of one Boolean function."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.int64)
        if arr.shape != (1 << self.n,):
            raise ValueError(
                f"spectrum for n={self.n} needs {1 << self.n} coefficients"
            )
        if arr.flags.writeable:  # never freeze or alias a caller's array
            arr = arr.copy()
            arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __getitem__(self, a: int | BitVector) -> int:
        return int(self.coeffs[int(a)])

    def s(self, a: int | BitVector) -> float:
        """Correlation S(a) = W(a) / 2^n."""
        return int(self.coeffs[int(a)]) / (1 << self.n)

    def s_values(self) -> np.ndarray:
        return self.coeffs / float(1 << self.n)

    def probabilities(self) -> np.ndarray:
        """Measurement distribution P(a) = S(a)^2; sums to 1 by Parseval."""
        s = self.s_values()
        return s * s

    def squared_weights(self) -> np.ndarray:
        """Exact integer numerators W(a)^2 of P(a) over the common
        denominator 4^n."""
        w = self.coeffs.astype(np.uint64)
        return w * w

    def parseval_sum(self) -> int:
        """Sum of W(a)^2 as an exact Python integer (equals 4^n)."""
        total = 0
        sq = self.squared_weights()
        for i in range(0, sq.shape[0], 1 << 14):
            total += int(np.sum(sq[i : i + (1 << 14)], dtype=np.uint64))
        return total


def walsh_coefficient_naive(f: BooleanFunction, a: int | BitVector) -> int:
    """W(a) by direct summation over all 2^n inputs (the reference oracle,
    independent of the butterfly)."""
    a = int(a)
    if not 0 <= a < (1 << f.n):
        raise ValueError(f"mask {a} out of range for n={f.n}")
    idx = np.arange(1 << f.n, dtype=np.uint64)
    chi = parity_u64(idx & np.uint64(a)).astype(np.int64)
    signs = 1 - 2 * f.bits.astype(np.int64)
    return int(np.sum(signs * (1 - 2 * chi)))


def fwht_inplace(arr: np.ndarray):
    """In-place Walsh-Hadamard butterfly on a length-2^k integer array."""
    size = arr.shape[0]
    h = 1
    while h < size:
        view = arr.reshape(-1, 2 * h)
        left = view[:, :h]
        right = view[:, h:]
        diff = left - right
        left += right
        right[:] = diff
        h *= 2


def fwht(f: BooleanFunction) -> WalshSpectrum:
    """Full spectrum via the divide-and-conquer butterfly, n*2^n integer ops."""
    arr = 1 - 2 * f.bits.astype(np.int64)
    fwht_inplace(arr)
    arr.setflags(write=False)  # hand over ownership, skip the defensive copy
    return WalshSpectrum(f.n, arr)


def component_spectrum(F: VectorialFunction, b: BitVector | int) -> WalshSpectrum:
    """Spectrum of the component b . F."""
    return fwht(F.component(b))


def threshold_count(n: int, epsilon: Fraction) -> int:
    """Smallest integer T with T >= epsilon * 2^n, exactly.

    An integer |W| satisfies |W| >= epsilon * 2^n iff |W| >= T, so closed
    rational thresholds reduce to one integer comparison.
    """
    scaled = epsilon * (1 << n)
    return -((-scaled.numerator) // scaled.denominator)


def heavy_set_exact(
    spectrum: WalshSpectrum, epsilon: float | str | Fraction
) -> set[BitVector]:
    """All a with |S(a)| >= epsilon, resolved in exact rational arithmetic."""
    eps = as_fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must be in (0, 1], got {eps}")
    threshold = threshold_count(spectrum.n, eps)
    hits = np.nonzero(np.abs(spectrum.coeffs) >= threshold)[0]
    return {BitVector(spectrum.n, int(a)) for a in hits}


def linear_approximation_table(F: VectorialFunction) -> np.ndarray:
    """LAT[a, b] = W_{b.F}(a) for all masks, shape (2^n, 2^m)."""
    lat = np.empty((1 << F.n, 1 << F.m), dtype=np.int64)
    for b in range(1 << F.m):
        lat[:, b] = component_spectrum(F, b).coeffs
    return lat


def top_coefficients(spectrum: WalshSpectrum, k: int = 8) -> list[tuple[BitVector, int]]:
    """The k largest coefficients by |W|, ties broken by encoding."""
    order = np.lexsort((np.arange(spectrum.coeffs.shape[0]), -np.abs(spectrum.coeffs)))
    return [
        (BitVector(spectrum.n, int(a)), int(spectrum.coeffs[a])) for a in order[:k]
    ]


# --- export formats --------------------------------------------------------


def spectrum_to_csv(spectrum: WalshSpectrum, out: IO[str]):
    """Rows ``index,bitstring,W,S`` for every mask, in encoding order."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["index", "bitstring", "W", "S"])
    scale = 1 << spectrum.n
    for a in range(scale):
        w = int(spectrum.coeffs[a])
        writer.writerow([a, format(a, f"0{spectrum.n}b"), w, repr(w / scale)])


_BINARY_HEADER = struct.Struct("<I")


def write_spectrum_binary(spectrum: WalshSpectrum, path: str | Path):
    """Compact dump: little-endian uint32 n, then 2^n little-endian int64."""
    with open(path, "wb") as fh:
        fh.write(_BINARY_HEADER.pack(spectrum.n))
        fh.write(spectrum.coeffs.astype("<i8").tobytes())


def read_spectrum_binary(path: str | Path) -> WalshSpectrum:
    data = Path(path).read_bytes()
    if len(data) < _BINARY_HEADER.size:
        raise ValueError(f"{path}: truncated spectrum dump")
    (n,) = _BINARY_HEADER.unpack_from(data)
    if not 1 <= n <= 24:
        raise CapacityError(f"{path}: header n={n} outside 1..24")
    body = data[_BINARY_HEADER.size :]
    if len(body) != (1 << n) * 8:
        raise ValueError(f"{path}: expected {(1 << n) * 8} coefficient bytes")
    return WalshSpectrum(n, np.frombuffer(body, dtype="<i8").astype(np.int64))
