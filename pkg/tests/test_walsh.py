import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walshgl import (
    BitVector,
    BooleanFunction,
    VectorialFunction,
    component_spectrum,
    fwht,
    heavy_set_exact,
    linear_approximation_table,
    parse_anf,
    read_spectrum_binary,
    spectrum_to_csv,
    walsh_coefficient_naive,
    write_spectrum_binary,
)
from walshgl.walsh import WalshSpectrum, fwht_inplace, threshold_count, top_coefficients

from conftest import EXAMPLE1_SPECTRUM, linear_function, random_function


def brute_force_spectrum(f: BooleanFunction) -> list[int]:
    """Definition-level oracle: no numpy, no butterfly."""
    out = []
    for a in range(1 << f.n):
        total = 0
        for x in range(1 << f.n):
            total += (-1) ** ((bin(a & x).count("1") & 1) ^ f(x))
        out.append(total)
    return out


class TestNaiveCoefficient:
    def test_constant_zero(self):
        f = BooleanFunction(3, [0] * 8)
        assert walsh_coefficient_naive(f, 0) == 8

    def test_example1_published_values(self, example1):
        assert walsh_coefficient_naive(example1, 0b1001) == 8
        assert walsh_coefficient_naive(example1, 0b1011) == -8

    def test_linear_is_a_delta(self):
        f = linear_function(5, 0b10110)
        for b in range(32):
            assert walsh_coefficient_naive(f, b) == (32 if b == 0b10110 else 0)

    def test_matches_definition_oracle(self):
        rng = np.random.default_rng(21)
        f = random_function(4, rng)
        expected = brute_force_spectrum(f)
        for a in range(16):
            assert walsh_coefficient_naive(f, a) == expected[a]


class TestFwht:
    def test_example1_exactly_four_nonzero(self, example1):
        spec = fwht(example1)
        for a in range(16):
            assert spec[a] == EXAMPLE1_SPECTRUM.get(a, 0)

    def test_constant_one_n3(self):
        spec = fwht(BooleanFunction(3, [1] * 8))
        assert spec.coeffs.tolist() == [-8, 0, 0, 0, 0, 0, 0, 0]

    def test_agrees_with_naive_on_random_functions(self):
        rng = np.random.default_rng(2)
        for _ in range(40):
            n = int(rng.integers(1, 9))
            f = random_function(n, rng)
            spec = fwht(f)
            for a in range(1 << n):
                assert spec[a] == walsh_coefficient_naive(f, a)

    def test_butterfly_is_involution_up_to_scaling(self):
        rng = np.random.default_rng(8)
        arr = 1 - 2 * rng.integers(0, 2, size=64).astype(np.int64)
        twice = arr.copy()
        fwht_inplace(twice)
        fwht_inplace(twice)
        assert np.array_equal(twice, 64 * arr)

    @given(st.integers(min_value=1, max_value=8), st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_parseval_exact(self, n, pyrandom):
        rng = np.random.default_rng(pyrandom.getrandbits(32))
        spec = fwht(random_function(n, rng))
        assert spec.parseval_sum() == 4**n

    @given(
        st.integers(min_value=1, max_value=8),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=40, deadline=None)
    def test_affine_shift(self, n, pyrandom):
        rng = np.random.default_rng(pyrandom.getrandbits(32))
        f = random_function(n, rng)
        c = int(rng.integers(0, 1 << n))
        d = int(rng.integers(0, 2))
        g = BooleanFunction(n, f.bits ^ linear_function(n, c).bits ^ d)
        sf, sg = fwht(f), fwht(g)
        for a in range(1 << n):
            assert sg[a] == (-1) ** d * sf[a ^ c]

    def test_parity_bound_and_magnitude(self):
        rng = np.random.default_rng(13)
        spec = fwht(random_function(6, rng))
        for a in range(64):
            w = spec[a]
            assert abs(w) <= 64
            assert w % 2 == 0


class TestComponentSpectrum:
    def test_identity_linear_component(self, identity_sbox3):
        spec = component_spectrum(identity_sbox3, 0b010)
        assert spec[0b010] == 8
        assert np.count_nonzero(spec.coeffs) == 1

    def test_zero_mask(self, identity_sbox3):
        spec = component_spectrum(identity_sbox3, 0)
        assert spec[0] == 8
        assert np.count_nonzero(spec.coeffs) == 1

    def test_lat_matches_naive_double_loop(self, nonlinear_sbox3):
        lat = linear_approximation_table(nonlinear_sbox3)
        table = nonlinear_sbox3.table
        for a in range(8):
            for b in range(8):
                total = 0
                for x in range(8):
                    sign = (bin(a & x).count("1") + bin(b & int(table[x])).count("1")) & 1
                    total += -1 if sign else 1
                assert lat[a, b] == total

    def test_aes_component_one_max_magnitude(self, aes_sbox):
        spec = component_spectrum(aes_sbox, 0x01)
        assert int(np.max(np.abs(spec.coeffs))) == 32
        # cross-check the extremal entry against the direct sum
        a = int(np.argmax(np.abs(spec.coeffs)))
        assert walsh_coefficient_naive(aes_sbox.component(0x01), a) == spec[a]


class TestHeavySet:
    def test_example1_at_04(self, example1):
        heavy = heavy_set_exact(fwht(example1), "0.4")
        assert {v.value for v in heavy} == set(EXAMPLE1_SPECTRUM)

    def test_example1_at_06_empty(self, example1):
        assert heavy_set_exact(fwht(example1), "0.6") == set()

    def test_boundary_is_closed(self, example1):
        # |S| = 1/2 exactly must be included at epsilon = 1/2.
        heavy = heavy_set_exact(fwht(example1), Fraction(1, 2))
        assert {v.value for v in heavy} == set(EXAMPLE1_SPECTRUM)

    def test_float_epsilon_is_taken_exactly(self, example1):
        # float 0.5 is the dyadic 1/2, so the boundary still matches.
        heavy = heavy_set_exact(fwht(example1), 0.5)
        assert len(heavy) == 4

    def test_threshold_count_rounding(self):
        assert threshold_count(4, Fraction(2, 5)) == 7  # 6.4 -> 7
        assert threshold_count(4, Fraction(1, 2)) == 8  # exact
        assert threshold_count(3, Fraction(1, 1)) == 8

    @given(
        st.integers(min_value=1, max_value=8),
        st.fractions(min_value=Fraction(1, 10), max_value=1),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=60, deadline=None)
    def test_parseval_counting_bound(self, n, eps, pyrandom):
        rng = np.random.default_rng(pyrandom.getrandbits(32))
        heavy = heavy_set_exact(fwht(random_function(n, rng)), eps)
        assert len(heavy) <= 1 / (eps * eps)

    def test_epsilon_range_validated(self, example1):
        spec = fwht(example1)
        for bad in (0, -0.5, 1.5):
            with pytest.raises(ValueError):
                heavy_set_exact(spec, bad)


class TestExports:
    def test_csv_rows(self, example1):
        buf = io.StringIO()
        spectrum_to_csv(fwht(example1), buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "index,bitstring,W,S"
        assert len(lines) == 17
        assert "9,1001,8,0.5" in lines
        assert "11,1011,-8,-0.5" in lines

    def test_binary_roundtrip(self, tmp_path, example1):
        spec = fwht(example1)
        path = tmp_path / "spec.bin"
        write_spectrum_binary(spec, path)
        back = read_spectrum_binary(path)
        assert back.n == spec.n
        assert np.array_equal(back.coeffs, spec.coeffs)
        assert path.stat().st_size == 4 + 16 * 8

    def test_binary_rejects_garbage(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"\x02\x00\x00\x00" + b"\x00" * 7)
        with pytest.raises(ValueError):
            read_spectrum_binary(path)

    def test_top_coefficients_order(self, example1):
        top = top_coefficients(fwht(example1), 5)
        assert [(v.value, w) for v, w in top[:4]] == [
            (9, 8),
            (11, -8),
            (12, 8),
            (14, 8),
        ]
        assert top[4][1] == 0

    def test_spectrum_shape_validated(self):
        with pytest.raises(ValueError):
            WalshSpectrum(3, np.zeros(7, dtype=np.int64))
