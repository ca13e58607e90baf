"""Mapping and cycle-approximate simulation."""

import math
from collections import Counter

import numpy as np
import pytest

from wiredor.errors import MappingError
from wiredor.fp import BFLOAT16, fp_mul, from_float, to_float
from wiredor.layout import BankGeometry
from wiredor.mulconfig import MulConfig, Variant
from wiredor.sim import ArchConfig, Conv, Gemm, build_mapping, peak_gops, run_gemm, simulate

PC3_TR = MulConfig(Variant.PC3, 8, fp_mode=True, truncate=True)
VGG8_L1 = Conv(224, 224, 3, 64, 3, 3, stride=1, pad=1)


def arch(banks=16, bank="8kB", mul=PC3_TR, clock=1e9, spc=None):
    return ArchConfig(
        banks=banks,
        bank=BankGeometry.parse(bank),
        mul=mul,
        fmt=BFLOAT16,
        clock_hz=clock,
        scratchpad_inputs_per_cycle=spc,
    )


class TestWorkloads:
    def test_vgg8_l1_lowering(self):
        g = VGG8_L1.as_gemm()
        assert (g.m, g.k, g.n) == (50176, 27, 64)
        assert g.m * g.k * g.n == 86_704_128

    def test_conv_output_shape(self):
        c = Conv(8, 8, 1, 4, 3, 3, stride=2, pad=0)
        assert (c.out_height, c.out_width) == (3, 3)

    def test_bad_dims(self):
        with pytest.raises(ValueError):
            Gemm(0, 1, 1)
        with pytest.raises(ValueError):
            Conv(2, 2, 1, 1, 5, 5)


class TestBuildMapping:
    def test_vgg8_l1_on_16x8kb(self):
        mapping = build_mapping(arch(), VGG8_L1)
        assert len(mapping.assignments) == 54  # 27 k-indices x 2 column tiles
        counts = Counter(rg.bank for rg in mapping.assignments)
        assert set(counts.values()) == {3, 4}
        # every kernel element assigned exactly once
        covered = Counter()
        for rg in mapping.assignments:
            for j in range(rg.n_start, rg.n_start + rg.cols):
                covered[(rg.k, j)] += 1
        assert len(covered) == 27 * 64
        assert set(covered.values()) == {1}

    def test_trivial_gemm(self):
        mapping = build_mapping(arch(banks=1), Gemm(1, 1, 1))
        assert len(mapping.assignments) == 1
        assert mapping.assignments[0].cols == 1

    def test_single_large_bank_mostly_unused(self):
        mapping = build_mapping(arch(banks=1, bank="512kB"), VGG8_L1)
        assert len(mapping.assignments) == 27
        assert all(rg.cols == 64 for rg in mapping.assignments)
        used = 27 * 64
        assert used / mapping.layout.capacity_elements < 0.06

    def test_capacity_error_names_shortfall(self):
        small = arch(banks=1, bank="2kB")  # 128x128, 16 elements/row, 8 groups
        with pytest.raises(MappingError, match="short by"):
            build_mapping(small, Gemm(1, 100, 200))

    def test_row_group_shortfall(self):
        # elements fit but one row-group per k exhausts the rows
        small = arch(banks=1, bank="2kB")
        with pytest.raises(MappingError, match="row-group"):
            build_mapping(small, Gemm(1, 20, 1))


class TestSimulate:
    def test_single_mac(self):
        report = simulate(arch(banks=1), Gemm(1, 1, 1))
        assert report.cycles == 1
        assert report.useful_macs == 1
        assert report.utilization == 1 / report.pe_count
        assert report.access_counts["accumulator_add"] == 1
        assert report.access_counts["scratchpad_write"] == 1

    def test_vgg8_l1_reference_numbers(self):
        report = simulate(arch(), VGG8_L1)
        assert report.useful_macs == 86_704_128
        assert report.cycles == 50176 * 4
        assert report.pe_count == 512
        assert report.utilization == pytest.approx(0.84375, abs=1e-12)
        assert report.access_counts["sram_compute_read"] == 50176 * 54
        assert report.access_counts["scratchpad_read"] == 50176 * 54
        assert report.access_counts["scratchpad_write"] == 50176 * 64
        assert report.access_counts["accumulator_add"] == report.useful_macs

    def test_doubling_bank_size_doubles_pes(self):
        small = simulate(arch(), VGG8_L1)
        large = simulate(arch(bank="32kB"), VGG8_L1)
        assert large.pe_count == 2 * small.pe_count

    def test_peak_gops(self):
        assert peak_gops(arch()) == 1024.0
        assert peak_gops(arch(bank="32kB")) == 2048.0
        assert peak_gops(arch(bank="32kB")) / peak_gops(arch()) == 2.0
        tiny = ArchConfig(
            banks=1, bank=BankGeometry.from_bytes(512), mul=PC3_TR, fmt=BFLOAT16, clock_hz=1.0,
        )
        # 1 bank, 1 Hz: peak is 2 * elements_per_row_group * 1e-9
        assert peak_gops(tiny) == 2 * tiny.layout().elements_per_row_group / 1e9

    def test_sustained_never_exceeds_peak(self):
        for banks in (1, 4, 16):
            for spc in (None, 1, 3):
                a = arch(banks=banks, bank="32kB", spc=spc)
                for wl in (VGG8_L1, Gemm(100, 27, 64), Gemm(7, 3, 5)):
                    r = simulate(a, wl)
                    assert r.sustained_gops <= peak_gops(a) + 1e-9
                    assert 0 < r.utilization <= 1

    def test_bandwidth_throttle(self):
        free = simulate(arch(), VGG8_L1)
        starved = simulate(arch(spc=1), VGG8_L1)
        assert starved.cycles == 50176 * 54
        assert starved.cycles > free.cycles
        assert starved.access_counts == free.access_counts  # work is identical, only slower

    def test_mac_conservation_grid(self):
        for wl in (Gemm(3, 9, 17), Gemm(1, 1, 300), Conv(10, 10, 2, 5, 3, 3, pad=1)):
            g = wl.as_gemm()
            r = simulate(arch(banks=4), wl)
            assert r.useful_macs == g.m * g.k * g.n

    def test_more_banks_never_slower(self):
        for wl in (VGG8_L1, Gemm(64, 40, 100)):
            prev = None
            for banks in (1, 2, 4, 8, 16):
                cycles = simulate(arch(banks=banks), wl).cycles
                if prev is not None:
                    assert cycles <= prev
                prev = cycles

    def test_csv_row_matches_header(self):
        r = simulate(arch(), Gemm(2, 3, 4))
        header = r.csv_header().split(",")
        row = r.csv_row().split(",")
        assert len(header) == len(row)
        assert header[0] == "schema_version" and row[0] == "1"


class TestFunctionalEquivalence:
    def test_simulator_order_matches_direct_loop(self):
        rng = np.random.default_rng(9)
        cfg = MulConfig(Variant.PC2, 8, fp_mode=True)
        a = ArchConfig(
            banks=3, bank=BankGeometry.parse("8kB"), mul=cfg, fmt=BFLOAT16, clock_hz=1e9
        )
        for m, k, n in ((1, 1, 1), (4, 5, 6), (8, 8, 8)):
            x = rng.uniform(-2, 2, (m, k))
            w = rng.uniform(-2, 2, (k, n))
            sim_out = run_gemm(a, Gemm(m, k, n), x, w)
            direct = [
                [
                    math.fsum(
                        to_float(
                            fp_mul(
                                from_float(float(w[kk][j]), BFLOAT16),
                                from_float(float(x[mm][kk]), BFLOAT16),
                                BFLOAT16,
                                cfg,
                            ),
                            BFLOAT16,
                        )
                        for kk in range(k)
                    )
                    for j in range(n)
                ]
                for mm in range(m)
            ]
            assert sim_out == direct
