"""Single- and multi-output Boolean functions as bit-packed truth tables.

Encoding convention, used everywhere in this package: the assignment
(x1, ..., xn) corresponds to the integer with x1 in the MOST significant
bit, so the string "1001" means x1=1, x2=0, x3=0, x4=1 and encodes to 9.
Truth tables are indexed by that encoding.  All types here are immutable
after construction and safe to share between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, ParseError

MAX_N = 24
MAX_M = 16


def parity(v: int) -> int:
    """Parity (XOR of all bits) of a nonnegative integer."""
    return int(v).bit_count() & 1


def parity_u64(arr: np.ndarray) -> np.ndarray:
    """Elementwise bit parity of an unsigned integer array, as uint8."""
    v = arr.astype(np.uint64, copy=True)
    v ^= v >> np.uint64(32)
    v ^= v >> np.uint64(16)
    v ^= v >> np.uint64(8)
    v ^= v >> np.uint64(4)
    v ^= v >> np.uint64(2)
    v ^= v >> np.uint64(1)
    return (v & np.uint64(1)).astype(np.uint8)


@dataclass(frozen=True)
class BitVector:
    """An element of F_2^n with the canonical MSB-first integer encoding."""

    n: int
    value: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"bit vector length must be >= 1, got {self.n}")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(
                f"value {self.value} does not fit in {self.n} bits"
            )

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        bits = tuple(bits)
        value = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bit values must be 0 or 1, got {b!r}")
            value = (value << 1) | b
        return cls(len(bits), value)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "BitVector":
        """Parse "1001" (binary, length fixes n) or "0x9" (hex, needs n)."""
        text = text.strip()
        if text.lower().startswith("0x"):
            if n is None:
                raise ParseError("hex bit vector needs an explicit length")
            try:
                value = int(text, 16)
            except ValueError:
                raise ParseError(f"invalid hex bit vector {text!r}") from None
            return cls(n, value)
        if not text or any(c not in "01" for c in text):
            raise ParseError(f"invalid bit vector {text!r}: expected 0/1 string or 0x-hex")
        if n is not None and n != len(text):
            raise ParseError(f"bit vector {text!r} has length {len(text)}, expected {n}")
        return cls(len(text), int(text, 2))

    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.n - 1 - i)) & 1 for i in range(self.n))

    def dot(self, other: "BitVector") -> int:
        """Inner product over F_2."""
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return parity(self.value & other.value)

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return BitVector(self.n, self.value ^ other.value)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")


def _check_n(n: int):
    if not 1 <= n <= MAX_N:
        raise CapacityError(f"variable count n={n} outside supported range 1..{MAX_N}")


class BooleanFunction:
    """An n-variable Boolean function f: F_2^n -> F_2, stored bit-packed."""

    __slots__ = ("n", "_packed")

    def __init__(self, n: int, bits: Sequence[int] | np.ndarray):
        _check_n(n)
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.shape != (1 << n,):
            raise ValueError(
                f"truth table must have exactly 2^{n} = {1 << n} entries, got {arr.shape}"
            )
        if arr.max(initial=0) > 1:
            raise ValueError("truth table entries must be 0 or 1")
        packed = np.packbits(arr, bitorder="big")
        packed.setflags(write=False)
        self.n = n
        self._packed = packed

    @property
    def bits(self) -> np.ndarray:
        """Unpacked truth table, entry encode(x) = f(x).  Fresh read-only array."""
        out = np.unpackbits(self._packed, bitorder="big")[: 1 << self.n]
        out.setflags(write=False)
        return out

    @property
    def packed(self) -> np.ndarray:
        return self._packed

    def evaluate(self, x: int | BitVector) -> int:
        x = int(x)
        if not 0 <= x < (1 << self.n):
            raise ValueError(f"input {x} out of range for n={self.n}")
        return int((self._packed[x >> 3] >> (7 - (x & 7))) & 1)

    __call__ = evaluate

    def __eq__(self, other) -> bool:
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._packed, other._packed)

    def __hash__(self) -> int:
        return hash((self.n, self._packed.tobytes()))

    def __repr__(self) -> str:
        return f"BooleanFunction(n={self.n}, tt={serialize_truth_table(self)!r})"


class VectorialFunction:
    """A multi-output function F: F_2^n -> F_2^m given by its lookup table."""

    __slots__ = ("n", "m", "_table")

    def __init__(self, n: int, m: int, table: Sequence[int] | np.ndarray):
        _check_n(n)
        if not 1 <= m <= MAX_M:
            raise CapacityError(f"output count m={m} outside supported range 1..{MAX_M}")
        arr = np.asarray(table, dtype=np.uint32)
        if arr.shape != (1 << n,):
            raise ValueError(
                f"lookup table must have exactly 2^{n} = {1 << n} entries, got {arr.shape}"
            )
        if arr.max(initial=0) >= (1 << m):
            bad = int(np.argmax(arr >= (1 << m)))
            raise ValueError(
                f"table entry at index {bad} is {int(arr[bad])}, not below 2^{m}"
            )
        if arr.flags.writeable:  # never freeze or alias a caller's array
            arr = arr.copy()
            arr.setflags(write=False)
        self.n = n
        self.m = m
        self._table = arr

    @property
    def table(self) -> np.ndarray:
        return self._table

    def evaluate(self, x: int | BitVector) -> int:
        x = int(x)
        if not 0 <= x < (1 << self.n):
            raise ValueError(f"input {x} out of range for n={self.n}")
        return int(self._table[x])

    __call__ = evaluate

    def component(self, b: BitVector | int) -> BooleanFunction:
        """The Boolean component x -> b . F(x) for an output mask b."""
        b = _as_mask(b, self.m, "b")
        return BooleanFunction(self.n, parity_u64(self._table & np.uint32(b)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorialFunction):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and np.array_equal(self._table, other._table)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.m, self._table.tobytes()))

    def __repr__(self) -> str:
        return f"VectorialFunction(n={self.n}, m={self.m})"


def _as_mask(b: BitVector | int, width: int, name: str) -> int:
    if isinstance(b, BitVector):
        if b.n != width:
            raise ValueError(f"{name} has length {b.n}, expected {width}")
        return b.value
    b = int(b)
    if not 0 <= b < (1 << width):
        raise ValueError(f"{name}={b} does not fit in {width} bits")
    return b


# --- ANF ----------------------------------------------------------------

_VAR_RE = re.compile(r"x(\d+)")


def _tokenize_anf(text: str):
    """Yield (kind, lexeme, 1-based position) tokens."""
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+*":
            yield c, c, i + 1
            i += 1
            continue
        if c in "01" and not text[i + 1 : i + 2].isdigit():
            yield "const", c, i + 1
            i += 1
            continue
        m = _VAR_RE.match(text, i)
        if m:
            yield "var", m.group(1), i + 1
            i = m.end()
            continue
        raise ParseError(f"unexpected character {c!r}", position=i + 1)


def parse_anf(text: str, n: int | None = None) -> BooleanFunction:
    """Build a function from an ANF expression like "x1+x2+x2*x3+x3*x4".

    A monomial is the constant "1" (or "0", the empty polynomial) or a
    '*'-separated product of variables x1..x24.  n defaults to the largest
    variable index that appears.  Repeated monomials cancel over F_2.
    """
    tokens = list(_tokenize_anf(text))
    if not tokens:
        raise ParseError("empty ANF expression", position=1)

    monomials: list[tuple[tuple[int, ...], int]] = []  # (sorted var indices, pos)
    max_index = 0
    expect = "monomial"
    current: list[int] = []
    current_pos = 0
    current_const: str | None = None

    def flush():
        nonlocal current, current_const
        if current_const is None:
            monomials.append((tuple(sorted(set(current))), current_pos))
        elif current_const == "1":
            monomials.append(((), current_pos))
        # "0" contributes nothing
        current = []
        current_const = None

    for kind, lexeme, pos in tokens:
        if expect == "monomial":
            current_pos = pos
            if kind == "var":
                idx = int(lexeme)
                if idx == 0 or idx > MAX_N:
                    raise ParseError(
                        f"variable index {idx} outside 1..{MAX_N}", position=pos
                    )
                current = [idx]
                max_index = max(max_index, idx)
                expect = "after_factor"
            elif kind == "const":
                current_const = lexeme
                expect = "after_const"
            else:
                raise ParseError(f"expected a monomial, got {lexeme!r}", position=pos)
        elif expect == "after_factor":
            if kind == "*":
                expect = "factor"
            elif kind == "+":
                flush()
                expect = "monomial"
            else:
                raise ParseError(f"expected '+' or '*', got {lexeme!r}", position=pos)
        elif expect == "after_const":
            if kind == "+":
                flush()
                expect = "monomial"
            else:
                raise ParseError(
                    "constant monomials cannot be multiplied", position=pos
                )
        elif expect == "factor":
            if kind != "var":
                raise ParseError("expected a variable after '*'", position=pos)
            idx = int(lexeme)
            if idx == 0 or idx > MAX_N:
                raise ParseError(f"variable index {idx} outside 1..{MAX_N}", position=pos)
            current.append(idx)
            max_index = max(max_index, idx)
            expect = "after_factor"

    if expect in ("monomial", "factor"):
        raise ParseError("expression ends with a dangling operator", position=len(text))
    flush()

    if n is None:
        if max_index == 0:
            raise ParseError(
                "cannot infer variable count from a constant expression; pass n"
            )
        n = max_index
    if max_index > n:
        raise ParseError(f"variable x{max_index} exceeds declared n={n}")
    _check_n(n)

    # XOR-cancel duplicate monomials, then evaluate each surviving mask.
    parity_count: dict[int, int] = {}
    for vars_, _pos in monomials:
        mask = 0
        for idx in vars_:
            mask |= 1 << (n - idx)
        parity_count[mask] = parity_count.get(mask, 0) ^ 1

    idx = np.arange(1 << n, dtype=np.uint32)
    bits = np.zeros(1 << n, dtype=np.uint8)
    for mask, keep in parity_count.items():
        if keep:
            bits ^= (idx & np.uint32(mask)) == np.uint32(mask)
    return BooleanFunction(n, bits)


def mobius_transform(bits: np.ndarray) -> np.ndarray:
    """ANF coefficients of a truth table (self-inverse XOR butterfly)."""
    a = np.array(bits, dtype=np.uint8)
    size = a.shape[0]
    h = 1
    while h < size:
        view = a.reshape(-1, 2 * h)
        view[:, h:] ^= view[:, :h]
        h *= 2
    return a


def anf_monomials(f: BooleanFunction) -> list[int]:
    """Encoded monomial masks with nonzero ANF coefficient, ascending."""
    coeffs = mobius_transform(f.bits)
    return [int(u) for u in np.nonzero(coeffs)[0]]


def serialize_anf(f: BooleanFunction) -> str:
    """Canonical ANF string; inverse of parse_anf up to function equality."""
    terms = []
    for mask in anf_monomials(f):
        if mask == 0:
            terms.append(((), "1"))
            continue
        vars_ = tuple(i for i in range(1, f.n + 1) if (mask >> (f.n - i)) & 1)
        terms.append((vars_, "*".join(f"x{i}" for i in vars_)))
    if not terms:
        return "0"
    terms.sort(key=lambda t: t[0])
    return "+".join(text for _vars, text in terms)


# --- truth table hex format ----------------------------------------------


def parse_truth_table(hex_text: str, n: int) -> BooleanFunction:
    """Decode a hex truth table: first hex digit holds f at indices 0..3,
    most significant bit of each nibble first."""
    _check_n(n)
    text = hex_text.strip()
    nbits = 1 << n
    expected = (nbits + 3) // 4
    if len(text) != expected:
        raise ParseError(
            f"hex truth table for n={n} needs {expected} digits, got {len(text)}"
        )
    for i, c in enumerate(text):
        if c not in "0123456789abcdefABCDEF":
            raise ParseError(f"non-hex character {c!r}", position=i + 1)
    nibbles = np.array([int(c, 16) for c in text], dtype=np.uint8)
    bits = ((nibbles[:, None] >> np.array([3, 2, 1, 0], dtype=np.uint8)) & 1).reshape(-1)
    if bits[nbits:].any():
        raise ParseError("padding bits beyond 2^n must be zero")
    return BooleanFunction(n, bits[:nbits])


def serialize_truth_table(f: BooleanFunction) -> str:
    bits = f.bits
    pad = (-len(bits)) % 4
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    nibbles = bits.reshape(-1, 4) @ np.array([8, 4, 2, 1], dtype=np.uint8)
    return "".join(format(int(v), "x") for v in nibbles)


# --- S-box listing --------------------------------------------------------


def parse_sbox(text: str, n: int, m: int) -> VectorialFunction:
    """Parse whitespace/comma-separated integers (decimal or 0x-hex) into a
    lookup table, listed in integer-encoding input order."""
    tokens = text.replace(",", " ").split()
    if len(tokens) != 1 << n:
        raise ParseError(
            f"S-box for n={n} needs {1 << n} values, got {len(tokens)}"
        )
    values = []
    for i, tok in enumerate(tokens):
        try:
            v = int(tok, 16) if tok.lower().startswith("0x") else int(tok, 10)
        except ValueError:
            raise ParseError(f"invalid integer {tok!r} at value {i}") from None
        if not 0 <= v < (1 << m):
            raise ParseError(f"value {v} at index {i} not in [0, 2^{m})")
        values.append(v)
    return VectorialFunction(n, m, values)


# --- file formats ---------------------------------------------------------

_TT_HEADER_RE = re.compile(r"^n=(\d+)$")
_SBOX_HEADER_RE = re.compile(r"^n=(\d+)\s+m=(\d+)$")


def load_truth_table(path: str | Path) -> BooleanFunction:
    """Read a .tt file: header line ``n=<int>``, then one hex line."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if len(lines) != 2:
        raise ParseError(f"{path}: expected a header line and one hex line")
    m = _TT_HEADER_RE.match(lines[0])
    if not m:
        raise ParseError(f"{path}: malformed header {lines[0]!r}, expected n=<int>")
    return parse_truth_table(lines[1], int(m.group(1)))


def save_truth_table(f: BooleanFunction, path: str | Path):
    Path(path).write_text(f"n={f.n}\n{serialize_truth_table(f)}\n")


def load_sbox(path: str | Path) -> VectorialFunction:
    """Read a .sbox file: header ``n=<int> m=<int>``, then 2^n integers."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ParseError(f"{path}: empty S-box file")
    m = _SBOX_HEADER_RE.match(lines[0])
    if not m:
        raise ParseError(
            f"{path}: malformed header {lines[0]!r}, expected n=<int> m=<int>"
        )
    return parse_sbox(" ".join(lines[1:]), int(m.group(1)), int(m.group(2)))


def save_sbox(F: VectorialFunction, path: str | Path):
    body = "\n".join(
        " ".join(str(int(v)) for v in F.table[i : i + 16])
        for i in range(0, 1 << F.n, 16)
    )
    Path(path).write_text(f"n={F.n} m={F.m}\n{body}\n")
