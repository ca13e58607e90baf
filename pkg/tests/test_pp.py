"""Bit-level multiplier model: examples and properties."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wiredor.errors import DomainError, UnsupportedConfigError
from wiredor.mulconfig import MulConfig, Variant
from wiredor.pp import approx_mul, combo, decode_lines, exact_mul, generate_pps, single

FLA4 = MulConfig(Variant.FLA, 4)
FLA8 = MulConfig(Variant.FLA, 8)
FLA8_FP = MulConfig(Variant.FLA, 8, fp_mode=True)
PC2_8_FP = MulConfig(Variant.PC2, 8, fp_mode=True)
PC3_8_FP = MulConfig(Variant.PC3, 8, fp_mode=True)


class TestMulConfig:
    def test_width_bounds(self):
        MulConfig(Variant.FLA, 2)
        MulConfig(Variant.FLA, 32)
        with pytest.raises(UnsupportedConfigError):
            MulConfig(Variant.FLA, 1)
        with pytest.raises(UnsupportedConfigError):
            MulConfig(Variant.FLA, 33)

    def test_pc3_integer_mode_rejected(self):
        with pytest.raises(UnsupportedConfigError):
            MulConfig(Variant.PC3, 8, fp_mode=False)

    def test_pc3_needs_third_line(self):
        with pytest.raises(UnsupportedConfigError):
            MulConfig(Variant.PC3, 2, fp_mode=True)
        MulConfig(Variant.PC3, 3, fp_mode=True)

    def test_variant_parse(self):
        assert Variant.parse(" PC2 ") is Variant.PC2
        with pytest.raises(UnsupportedConfigError):
            Variant.parse("pc4")


class TestGeneratePps:
    def test_figure_example(self):
        assert generate_pps(0b1011, 0b0101, FLA4) == [(2, 0b101100), (0, 0b1011)]

    def test_zero_multiplier(self):
        assert generate_pps(0b1010, 0, FLA4) == []

    def test_single_bit(self):
        assert generate_pps(0b11, 0b10, MulConfig(Variant.FLA, 2)) == [(1, 0b110)]

    def test_out_of_range_rejected(self):
        with pytest.raises(DomainError):
            generate_pps(16, 1, FLA4)
        with pytest.raises(DomainError):
            generate_pps(1, 16, FLA4)

    def test_fp_mode_requires_leading_one(self):
        with pytest.raises(DomainError):
            generate_pps(0b01000000, 0b10000000, FLA8_FP)
        with pytest.raises(DomainError):
            generate_pps(0b10000000, 0b01000000, FLA8_FP)


class TestDecodeLines:
    def test_pc3_fp_selection(self):
        ls = decode_lines(0b11000101, PC3_8_FP)
        assert ls.lines == frozenset({combo(7, 6), single(2), single(0)})
        assert not ls.dropped_bits
        # combo line stores the exact sub-sum
        a = 0b10010011
        assert combo(7, 6).stored_value(a) == (a << 7) + (a << 6)

    def test_pc2_fp_hidden_one_only(self):
        ls = decode_lines(0b10000000, PC2_8_FP)
        assert ls.lines == frozenset({single(7)})

    def test_pc2_integer_storage_faithful(self):
        ls = decode_lines(0b1111, MulConfig(Variant.PC2, 4))
        assert ls.lines == frozenset({combo(3, 2), single(1)})
        assert ls.dropped_bits == frozenset({0})

    def test_pc2_integer_lsb_without_combo_drops(self):
        ls = decode_lines(0b0001, MulConfig(Variant.PC2, 4))
        assert ls.lines == frozenset()
        assert ls.dropped_bits == frozenset({0})

    def test_pc2_fp_never_emits_second_line(self):
        for b in range(128, 256):
            for line in decode_lines(b, PC2_8_FP).lines:
                assert line.shifts != (6,)

    def test_pc3_selection_table(self):
        heads = {
            0b10000000: single(7),
            0b11000000: combo(7, 6),
            0b10100000: combo(7, 5),
            0b11100000: combo(7, 6, 5),
        }
        for b, head in heads.items():
            assert decode_lines(b, PC3_8_FP).lines == frozenset({head})

    def test_at_most_one_combo_everywhere(self):
        for cfg in (PC2_8_FP, PC3_8_FP, MulConfig(Variant.PC2, 8)):
            start = 128 if cfg.fp_mode else 0
            for b in range(start, 256):
                ls = decode_lines(b, cfg)
                assert sum(1 for ln in ls.lines if ln.is_combo) <= 1

    def test_line_count_bounds(self):
        for b in range(256):
            assert decode_lines(b, FLA8).count <= 8
        for b in range(128, 256):
            assert decode_lines(b, PC2_8_FP).count <= 7
            assert decode_lines(b, PC3_8_FP).count <= 6

    def test_labels(self):
        assert combo(7, 6).label(8) == "AB"
        assert single(0).label(8) == "H"
        assert single(2).label(4) == "B"


class TestApproxMul:
    def test_figure_example(self):
        assert approx_mul(0b1011, 0b0101, FLA4) == 0b101111 == 47
        assert exact_mul(0b1011, 0b0101) == 55

    def test_fp_pair_fla_vs_pc2(self):
        assert approx_mul(0b11000000, 0b11000000, FLA8_FP) == 28672
        assert approx_mul(0b11000000, 0b11000000, PC2_8_FP) == 36864 == 192 * 192

    def test_truncation_masks_low_columns(self):
        # 129*129: the shift-7 and shift-0 copies collide at bit 7, so the
        # OR loses the carry (oracle-confirmed 16513; exact product 16641)
        full = approx_mul(0b10000001, 0b10000001, FLA8)
        trunc = approx_mul(0b10000001, 0b10000001, MulConfig(Variant.FLA, 8, truncate=True))
        assert full == 16513
        assert trunc == full & 0xFF00 == 16384

    def test_exact_mul(self):
        assert exact_mul(11, 5) == 55
        assert exact_mul(12345, 0) == 0
        assert exact_mul(192, 192) == 36864
        with pytest.raises(DomainError):
            exact_mul(256, 1, FLA8)


def _all_configs(n):
    cfgs = [
        MulConfig(Variant.FLA, n),
        MulConfig(Variant.FLA, n, fp_mode=True),
        MulConfig(Variant.PC2, n),
        MulConfig(Variant.PC2, n, fp_mode=True),
    ]
    if n >= 3:
        cfgs.append(MulConfig(Variant.PC3, n, fp_mode=True))
    return cfgs + [
        MulConfig(c.variant, c.width_n, fp_mode=c.fp_mode, truncate=True) for c in cfgs
    ]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_under_approximation_exhaustive(n):
    for cfg in _all_configs(n):
        start = 1 << (n - 1) if cfg.fp_mode else 0
        for a in range(start, 1 << n):
            for b in range(start, 1 << n):
                assert approx_mul(a, b, cfg) <= a * b


def test_sparse_multiplier_is_exact():
    for a in range(256):
        assert approx_mul(a, 0, FLA8) == 0
        for k in range(8):
            assert approx_mul(a, 1 << k, FLA8) == a << k


def test_disjoint_partial_products_are_exact():
    # a = 1: shifted copies never collide, so the OR is the true sum
    for b in range(256):
        assert approx_mul(1, b, FLA8) == b


@given(st.integers(0, 255), st.integers(0, 255))
def test_fla_commutes(a, b):
    assert approx_mul(a, b, FLA8) == approx_mul(b, a, FLA8)


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_bit_monotonicity(a, b, extra):
    grown = b | extra
    assert approx_mul(a, b, FLA8) | approx_mul(a, grown, FLA8) == approx_mul(a, grown, FLA8)


@settings(max_examples=200)
@given(st.integers(0, 255), st.integers(0, 255), st.sampled_from(["fla", "pc2"]))
def test_truncation_is_a_mask_integer(a, b, variant):
    full = MulConfig(Variant.parse(variant), 8)
    trunc = MulConfig(Variant.parse(variant), 8, truncate=True)
    assert approx_mul(a, b, trunc) == approx_mul(a, b, full) & full.truncation_mask


@settings(max_examples=200)
@given(st.integers(128, 255), st.integers(128, 255), st.sampled_from(["fla", "pc2", "pc3"]))
def test_truncation_is_a_mask_fp(a, b, variant):
    full = MulConfig(Variant.parse(variant), 8, fp_mode=True)
    trunc = MulConfig(Variant.parse(variant), 8, fp_mode=True, truncate=True)
    assert approx_mul(a, b, trunc) == approx_mul(a, b, full) & full.truncation_mask


@given(st.integers(128, 255), st.integers(128, 255), st.sampled_from(["fla", "pc2", "pc3"]))
def test_fp_mode_lower_bound(a, b, variant):
    cfg = MulConfig(Variant.parse(variant), 8, fp_mode=True)
    result = approx_mul(a, b, cfg)
    assert result >= a << 7  # top line always active
    assert result >= 1 << 14
    trunc = MulConfig(Variant.parse(variant), 8, fp_mode=True, truncate=True)
    # truncation may clear the top line's low columns but keeps its MSB
    assert approx_mul(a, b, trunc) >= 1 << 14
