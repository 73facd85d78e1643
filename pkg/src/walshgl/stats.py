"""Hoeffding-bound helpers and Monte-Carlo validation of the accuracy
guarantees.

The guarantee under test is per designated vector: over many independent
runs, the fraction where a fixed heavy w0 misses the output list must stay
within delta (plus binomial slack for finite run counts).  The
all-heavy-vectors-simultaneously failure rate is reported alongside but
never gated; the per-candidate bound does not union-bound over candidates
unless strict confidence is requested at parameter-derivation time.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Mapping

import numpy as np

from . import rng
from .boolfn import BitVector, BooleanFunction, VectorialFunction
from .gl import GLParams, derive_params, run_algorithm1, run_algorithm2
from .qsim import SPECTRAL
from .walsh import (
    WalshSpectrum,
    as_fraction,
    component_spectrum,
    fwht,
    heavy_set_exact,
    threshold_count,
)


def hoeffding_failure_bound(l: int, epsilon: float | str | Fraction) -> float:
    """Per-candidate failure probability bound exp(-l * epsilon^4 / 8)."""
    if l < 1:
        raise ValueError(f"sample count l must be >= 1, got {l}")
    eps = float(as_fraction(epsilon))
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must be in (0, 1], got {eps}")
    return math.exp(-l * eps**4 / 8.0)


def binomial_interval(failures: int, runs: int, z: float = 3.0) -> tuple[float, float]:
    """z-sigma normal-approximation interval around an empirical rate."""
    rate = failures / runs
    half = z * math.sqrt(rate * (1.0 - rate) / runs)
    return (max(0.0, rate - half), min(1.0, rate + half))


@dataclass(frozen=True)
class TrialReport:
    """Outcome of repeated independent algorithm runs on one fixture."""

    fixture: str
    runs: int
    params: GLParams
    designated: str | None
    completeness_vacuous: bool
    completeness_ok: tuple[bool, ...]
    soundness_ok: tuple[bool, ...]
    simultaneous_ok: tuple[bool, ...]

    @property
    def completeness_failures(self) -> int:
        return self.runs - sum(self.completeness_ok)

    @property
    def soundness_failures(self) -> int:
        return self.runs - sum(self.soundness_ok)

    @property
    def simultaneous_failures(self) -> int:
        return self.runs - sum(self.simultaneous_ok)

    @property
    def completeness_rate(self) -> float:
        return self.completeness_failures / self.runs

    @property
    def soundness_rate(self) -> float:
        return self.soundness_failures / self.runs

    @property
    def simultaneous_rate(self) -> float:
        return self.simultaneous_failures / self.runs

    @property
    def gate_threshold(self) -> float:
        """delta plus three-sigma binomial slack for this run count."""
        d = self.params.delta
        return d + 3.0 * math.sqrt(d * (1.0 - d) / self.runs)

    @property
    def passed(self) -> bool:
        """Gated checks only: designated completeness and soundness rates."""
        gate = self.gate_threshold
        return self.completeness_rate <= gate and self.soundness_rate <= gate

    def to_json_dict(self) -> dict:
        return {
            "fixture": self.fixture,
            "runs": self.runs,
            "params": {
                "epsilon": float(self.params.epsilon),
                "delta": self.params.delta,
                "l": self.params.l,
                "s": float(self.params.s),
            },
            "designated": self.designated,
            "completeness_vacuous": self.completeness_vacuous,
            "completeness": {
                "failures": self.completeness_failures,
                "rate": self.completeness_rate,
                "interval": list(binomial_interval(self.completeness_failures, self.runs)),
            },
            "soundness": {
                "failures": self.soundness_failures,
                "rate": self.soundness_rate,
                "interval": list(binomial_interval(self.soundness_failures, self.runs)),
            },
            "simultaneous_ungated": {
                "failures": self.simultaneous_failures,
                "rate": self.simultaneous_rate,
                "interval": list(binomial_interval(self.simultaneous_failures, self.runs)),
            },
            "gate_threshold": self.gate_threshold,
            "passed": self.passed,
            "per_run": {
                "completeness_ok": list(self.completeness_ok),
                "soundness_ok": list(self.soundness_ok),
                "simultaneous_ok": list(self.simultaneous_ok),
            },
        }

    def write_json(self, out: IO[str]):
        json.dump(self.to_json_dict(), out, indent=2)
        out.write("\n")

    CSV_HEADER = (
        "fixture,runs,epsilon,delta,l,s,designated,completeness_failures,"
        "soundness_failures,simultaneous_failures,gate_threshold,passed"
    )

    def csv_row(self) -> str:
        return ",".join(
            str(v)
            for v in (
                self.fixture,
                self.runs,
                float(self.params.epsilon),
                self.params.delta,
                self.params.l,
                float(self.params.s),
                self.designated or "",
                self.completeness_failures,
                self.soundness_failures,
                self.simultaneous_failures,
                self.gate_threshold,
                self.passed,
            )
        )


def _check_runs(runs: int):
    if runs < 100:
        raise ValueError(f"need at least 100 runs for a meaningful rate, got {runs}")


def monte_carlo_theorem1(
    f: BooleanFunction,
    epsilon: float | str | Fraction,
    delta: float,
    runs: int,
    base_seed: int,
    w0: BitVector | None = None,
    mode: str = SPECTRAL,
    fixture: str = "",
    params: GLParams | None = None,
) -> TrialReport:
    """Empirical failure rates of the single-output algorithm.

    Per run: completeness is judged for one designated heavy w0 (given, or
    the largest-|S| heavy vector; vacuous if nothing reaches epsilon) and
    soundness for every emitted vector.  ``params`` overrides the derived
    (l, s), e.g. to demonstrate that a corrupted threshold gets flagged.
    """
    _check_runs(runs)
    eps = as_fraction(epsilon)
    if params is None:
        params = derive_params(eps, delta)
    spectrum = fwht(f)
    heavy = heavy_set_exact(spectrum, eps)
    if w0 is None:
        w0 = _designate(spectrum, heavy)
    elif w0 not in heavy:
        raise ValueError(f"designated w0={w0} is not epsilon-heavy")
    sound_cut = threshold_count(f.n, eps / 2)

    comp_ok, sound_ok, simul_ok = [], [], []
    for r in range(runs):
        result = run_algorithm1(f, params, seed=rng.stream_key(base_seed, r), mode=mode)
        listed = result.vectors()
        comp_ok.append(w0 in listed if w0 is not None else True)
        sound_ok.append(all(abs(spectrum[e.a]) >= sound_cut for e in result.entries))
        simul_ok.append(heavy <= listed)
    return TrialReport(
        fixture=fixture or f"n={f.n} boolean",
        runs=runs,
        params=params,
        designated=None if w0 is None else str(w0),
        completeness_vacuous=w0 is None,
        completeness_ok=tuple(comp_ok),
        soundness_ok=tuple(sound_ok),
        simultaneous_ok=tuple(simul_ok),
    )


def monte_carlo_theorem2(
    F: VectorialFunction,
    epsilon: float | str | Fraction,
    delta: float,
    runs: int,
    base_seed: int,
    w0: tuple[BitVector, BitVector] | None = None,
    mode: str = SPECTRAL,
    fixture: str = "",
    params: GLParams | None = None,
) -> TrialReport:
    """Per-component analogue: the designated target is an (a, b) pair."""
    _check_runs(runs)
    eps = as_fraction(epsilon)
    if params is None:
        params = derive_params(eps, delta)
    spectra: dict[int, WalshSpectrum] = {
        b: component_spectrum(F, b) for b in range(1, 1 << F.m)
    }
    heavy_pairs: set[tuple[BitVector, BitVector]] = set()
    for b, spec in spectra.items():
        bv = BitVector(F.m, b)
        heavy_pairs.update((a, bv) for a in heavy_set_exact(spec, eps))
    if w0 is None:
        w0 = min(
            heavy_pairs,
            key=lambda p: (-abs(spectra[p[1].value][p[0]]), p[1].value, p[0].value),
            default=None,
        )
    elif w0 not in heavy_pairs:
        raise ValueError(f"designated pair {w0} is not epsilon-heavy")
    sound_cut = threshold_count(F.n, eps / 2)

    comp_ok, sound_ok, simul_ok = [], [], []
    for r in range(runs):
        result = run_algorithm2(F, params, seed=rng.stream_key(base_seed, r), mode=mode)
        pairs = result.pairs()
        comp_ok.append(w0 in pairs if w0 is not None else True)
        sound_ok.append(
            all(abs(spectra[e.b.value][e.a]) >= sound_cut for e in result.entries)
        )
        simul_ok.append(heavy_pairs <= pairs)
    return TrialReport(
        fixture=fixture or f"n={F.n} m={F.m} sbox",
        runs=runs,
        params=params,
        designated=None if w0 is None else f"a={w0[0]} b={w0[1]}",
        completeness_vacuous=w0 is None,
        completeness_ok=tuple(comp_ok),
        soundness_ok=tuple(sound_ok),
        simultaneous_ok=tuple(simul_ok),
    )


def _designate(spectrum: WalshSpectrum, heavy: set[BitVector]) -> BitVector | None:
    """Largest-|W| heavy vector, ties to the smallest encoding."""
    if not heavy:
        return None
    return min(heavy, key=lambda a: (-abs(spectrum[a]), a.value))


def distribution_distance(
    empirical: Mapping[BitVector | int, int] | np.ndarray, exact: WalshSpectrum
) -> float:
    """Total-variation distance between normalized counts and P(w) = S(w)^2."""
    size = 1 << exact.n
    if isinstance(empirical, np.ndarray):
        counts = empirical.astype(np.float64)
        if counts.shape != (size,):
            raise ValueError(f"count table must have length {size}")
    else:
        counts = np.zeros(size, dtype=np.float64)
        for key, c in empirical.items():
            counts[int(key)] += c
    total = counts.sum()
    if total <= 0:
        raise ValueError("empirical distribution has no observations")
    return float(0.5 * np.abs(counts / total - exact.probabilities()).sum())
