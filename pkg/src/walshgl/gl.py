"""Heavy-coefficient search by repeated circuit sampling.

Both algorithms draw l outcomes per distribution, count repeats, and keep
every outcome seen at least ceil(s) times, where

    l = ceil(8 * ln(1/delta) / epsilon^4),    s = epsilon^2 * l / 2.

The logarithm is the NATURAL log: the per-candidate failure probability is
Hoeffding-bounded by exp(-2l(epsilon^2/4)^2) = exp(-l*epsilon^4/8), and
solving that <= delta for l forces base e.  A first observation of an
outcome counts as 1, and the threshold comparison is the closed
``count >= ceil(s)``, which can only strengthen the |S| >= epsilon/2
property of emitted vectors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO

import numpy as np

from .boolfn import BitVector, BooleanFunction, VectorialFunction
from .qsim import SPECTRAL, SampleStream, dj_sample_stream, qwt_bf_sample_stream
from .walsh import (
    WalshSpectrum,
    as_fraction,
    component_spectrum,
    fwht,
    heavy_set_exact,
    threshold_count,
)


@dataclass(frozen=True)
class GLParams:
    """Sampling parameters (epsilon, delta, l, s).

    ``delta`` is the per-candidate failure budget actually used by the
    formulas; with strict confidence it is the requested budget divided by
    the Parseval candidate bound floor(4/epsilon^2).
    """

    epsilon: Fraction
    delta: float
    l: int
    s: Fraction

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")
        if self.l < 1:
            raise ValueError("sample count l must be positive")
        if not 0 < self.s <= self.l:
            raise ValueError("threshold s must satisfy 0 < s <= l")

    @property
    def count_threshold(self) -> int:
        """ceil(s): the closed integer cut applied to final counts."""
        return -((-self.s.numerator) // self.s.denominator)


def derive_params(
    epsilon: float | str | Fraction,
    delta: float,
    strict_confidence: bool = False,
) -> GLParams:
    """l and s from (epsilon, delta); natural log, l rounded up.

    ``strict_confidence`` divides delta by floor(4/epsilon^2) so the
    per-candidate bound union-bounds over every possible |S| >= epsilon/2
    candidate simultaneously.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must be in (0, 1], got {eps}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if strict_confidence:
        delta = delta / math.floor(4 / (eps * eps))
    l = max(1, math.ceil(8.0 * math.log(1.0 / delta) / float(eps**4)))
    s = eps * eps * l / 2
    return GLParams(epsilon=eps, delta=delta, l=l, s=s)


@dataclass(frozen=True)
class HeavyEntry:
    """One emitted vector with its sample count.

    ``b`` is None for Algorithm 1 results; ``exact_s`` is the oracle
    annotation S(a) (or S_{b.F}(a)) when available.
    """

    a: BitVector
    b: BitVector | None
    count: int
    exact_s: float | None = None

    def key(self) -> tuple[int, int]:
        return (-1 if self.b is None else self.b.value, self.a.value)


@dataclass(frozen=True)
class HeavyList:
    """Output of one algorithm run: entries sorted by (b, a) encoding."""

    params: GLParams
    entries: tuple[HeavyEntry, ...]
    queries: int
    seed: int
    mode: str

    def vectors(self) -> set[BitVector]:
        return {e.a for e in self.entries}

    def pairs(self) -> set[tuple[BitVector, BitVector]]:
        return {(e.a, e.b) for e in self.entries if e.b is not None}

    def to_json_dict(self) -> dict:
        entries = []
        for e in self.entries:
            record: dict = {"a": str(e.a)}
            if e.b is not None:
                record["b"] = str(e.b)
            record["count"] = e.count
            if e.exact_s is not None:
                record["exact_S"] = e.exact_s
            entries.append(record)
        return {
            "params": {
                "epsilon": float(self.params.epsilon),
                "delta": self.params.delta,
                "l": self.params.l,
                "s": float(self.params.s),
            },
            "entries": entries,
            "queries": self.queries,
            "seed": self.seed,
        }

    def write_json(self, out: IO[str]):
        json.dump(self.to_json_dict(), out, indent=2)
        out.write("\n")


def _threshold_entries(
    stream: SampleStream, l: int, threshold: int, b: BitVector | None
) -> list[HeavyEntry]:
    encoded = stream.draw_encoded(l)
    values, counts = np.unique(encoded, return_counts=True)
    return [
        HeavyEntry(a=BitVector(stream.n, int(v)), b=b, count=int(c))
        for v, c in zip(values, counts)
        if c >= threshold
    ]


def run_algorithm1(
    f: BooleanFunction, params: GLParams, seed: int, mode: str = SPECTRAL
) -> HeavyList:
    """Sample the single-output circuit l times and keep the frequent
    outcomes; exactly l oracle queries."""
    stream = dj_sample_stream(f, seed, mode)
    entries = _threshold_entries(stream, params.l, params.count_threshold, None)
    entries.sort(key=HeavyEntry.key)
    return HeavyList(
        params=params,
        entries=tuple(entries),
        queries=stream.count,
        seed=int(seed),
        mode=mode,
    )


def run_algorithm2(
    F: VectorialFunction, params: GLParams, seed: int, mode: str = SPECTRAL
) -> HeavyList:
    """Run the counting loop independently for every nonzero output mask b.

    Counters are keyed by the pair (a, b) and reset between components:
    the accuracy guarantee is per (a, b), and pooling counts across b would
    mix distributions.  Total queries: l * (2^m - 1).
    """
    entries: list[HeavyEntry] = []
    queries = 0
    for b in range(1, 1 << F.m):
        stream = qwt_bf_sample_stream(F, b, seed, mode, label=b)
        entries.extend(
            _threshold_entries(
                stream, params.l, params.count_threshold, BitVector(F.m, b)
            )
        )
        queries += stream.count
    entries.sort(key=HeavyEntry.key)
    return HeavyList(
        params=params,
        entries=tuple(entries),
        queries=queries,
        seed=int(seed),
        mode=mode,
    )


def annotate_with_oracle(
    result: HeavyList, target: BooleanFunction | VectorialFunction
) -> HeavyList:
    """Fill each entry's exact_s from the exact transform."""
    if isinstance(target, BooleanFunction):
        spectrum = fwht(target)
        entries = tuple(
            HeavyEntry(e.a, e.b, e.count, spectrum.s(e.a)) for e in result.entries
        )
    else:
        spectra = {b: None for b in {e.b.value for e in result.entries if e.b}}
        for b in spectra:
            spectra[b] = component_spectrum(target, b)
        entries = tuple(
            HeavyEntry(e.a, e.b, e.count, spectra[e.b.value].s(e.a))
            for e in result.entries
        )
    return HeavyList(
        params=result.params,
        entries=entries,
        queries=result.queries,
        seed=result.seed,
        mode=result.mode,
    )


@dataclass(frozen=True)
class VerificationReport:
    """Exact-oracle check of one result list.

    ``complete``: every vector with |S| >= epsilon made it into the list.
    ``sound``: every listed vector has |S| >= epsilon/2.
    Offenders are reported as (a,) or (a, b) tuples.
    """

    complete: bool
    sound: bool
    missing: tuple
    violators: tuple

    def ok(self) -> bool:
        return self.complete and self.sound


def _sound_cut(n: int, eps: Fraction) -> int:
    return threshold_count(n, eps / 2)


def verify_against_oracle(
    target: BooleanFunction | VectorialFunction,
    result: HeavyList,
    epsilon: float | str | Fraction,
) -> VerificationReport:
    """Compare a run's output against the exact spectrum at threshold
    epsilon (completeness) and epsilon/2 (soundness)."""
    eps = as_fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must be in (0, 1], got {eps}")

    if isinstance(target, BooleanFunction):
        spectrum = fwht(target)
        listed = result.vectors()
        exact = heavy_set_exact(spectrum, eps)
        missing = tuple(sorted((a for a in exact - listed), key=lambda a: a.value))
        cut = _sound_cut(target.n, eps)
        violators = tuple(
            e.a for e in result.entries if abs(spectrum[e.a]) < cut
        )
        return VerificationReport(
            complete=not missing,
            sound=not violators,
            missing=missing,
            violators=violators,
        )

    listed_pairs = result.pairs()
    cut = _sound_cut(target.n, eps)
    missing_pairs: list[tuple[BitVector, BitVector]] = []
    violators_pairs: list[tuple[BitVector, BitVector]] = []
    spectra: dict[int, WalshSpectrum] = {}
    for b in range(1, 1 << target.m):
        spectra[b] = component_spectrum(target, b)
        bv = BitVector(target.m, b)
        for a in heavy_set_exact(spectra[b], eps):
            if (a, bv) not in listed_pairs:
                missing_pairs.append((a, bv))
    for e in result.entries:
        if e.b is None or e.b.value == 0:
            continue
        if abs(spectra[e.b.value][e.a]) < cut:
            violators_pairs.append((e.a, e.b))
    missing_pairs.sort(key=lambda p: (p[1].value, p[0].value))
    return VerificationReport(
        complete=not missing_pairs,
        sound=not violators_pairs,
        missing=tuple(missing_pairs),
        violators=tuple(violators_pairs),
    )
