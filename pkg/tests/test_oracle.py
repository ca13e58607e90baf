"""Independent oracle and the exhaustive equivalence sweep."""

import pytest

from wiredor.errors import UnsupportedConfigError
from wiredor.mulconfig import MulConfig, Variant
from wiredor.oracle import exhaustive_compare, oracle_or_mul, supported_configs
from wiredor.pp import approx_mul


def test_figure_operands():
    assert oracle_or_mul(11, 5, MulConfig(Variant.FLA, 4)) == 47


def test_power_of_two_multiplier_is_shift():
    cfg = MulConfig(Variant.FLA, 8)
    for x in (0, 1, 37, 255):
        for k in range(8):
            assert oracle_or_mul(x, 1 << k, cfg) == x << k


def test_pc2_fp_combo_is_exact_sum():
    cfg = MulConfig(Variant.PC2, 8, fp_mode=True)
    assert oracle_or_mul(192, 192, cfg) == 36864


def test_exhaustive_small_widths():
    report = exhaustive_compare(MulConfig(Variant.FLA, 4))
    assert report.pairs_checked == 256
    assert report.ok

    report = exhaustive_compare(MulConfig(Variant.PC3, 8, fp_mode=True))
    assert report.pairs_checked == 16384
    assert report.ok


def test_pc3_integer_is_a_config_error_not_a_crash():
    with pytest.raises(UnsupportedConfigError):
        MulConfig(Variant.PC3, 8, fp_mode=False)


def test_width_limit():
    with pytest.raises(ValueError):
        exhaustive_compare(MulConfig(Variant.FLA, 9))


def test_supported_configs_cover_both_truncations():
    cfgs = supported_configs(8)
    assert len(cfgs) == 10  # (fla, pc2) x (int, fp) + pc3 fp, each with/without truncation
    assert len({(c.variant, c.fp_mode, c.truncate) for c in cfgs}) == 10
    assert all(c.width_n == 8 for c in cfgs)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_oracle_matches_model_exhaustively(n):
    for cfg in supported_configs(n):
        start = 1 << (n - 1) if cfg.fp_mode else 0
        for a in range(start, 1 << n):
            for b in range(start, 1 << n):
                assert oracle_or_mul(a, b, cfg) == approx_mul(a, b, cfg), (cfg, a, b)
