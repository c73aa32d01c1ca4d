import math

import numpy as np
import pytest

from qrmeans.conjugation import decompose
from qrmeans.gfunction import (
    angular_norm,
    g_function,
    g_norm_ratio,
    load_calibration,
    power_split_holds,
    splitting_bound_check,
)
from qrmeans.qr import GridSpec, check_qr
from qrmeans.series import AnalyticSeries, HarmonicMap

from conftest import random_map


def test_g_function_closed_forms():
    const = g_function(AnalyticSeries([3.0 + 1j]), n_theta=64)
    assert np.allclose(const.values, 0.0)
    lin = g_function(AnalyticSeries([0, 1]), n_theta=64)
    assert np.allclose(lin.values, 1.0 / math.sqrt(2.0), atol=1e-12)
    sq = g_function(AnalyticSeries([0, 0, 1]), n_theta=64)
    assert np.allclose(sq.values, math.sqrt(1.0 / 3.0), atol=1e-12)


def test_g_function_positive_homogeneity(rng):
    a = AnalyticSeries(rng.uniform(-1, 1, 12) + 1j * rng.uniform(-1, 1, 12))
    c = -2.0 + 1.5j
    g1 = g_function(a, n_theta=128)
    g2 = g_function(c * a, n_theta=128)
    assert np.allclose(g2.values, abs(c) * g1.values, rtol=1e-12)


def test_g_function_radial_refinement(rng):
    a = AnalyticSeries(rng.uniform(-1, 1, 101) + 1j * rng.uniform(-1, 1, 101))
    g1 = g_function(a, n_theta=64, n_radial=128)
    g2 = g_function(a, n_theta=64, n_radial=256)
    assert float(np.max(np.abs(g1.values - g2.values))) < 1e-9
    auto = g_function(a, n_theta=64)
    assert auto.converged


def test_g_norm_ratio_linear_map():
    rep = g_norm_ratio(AnalyticSeries([0, 1]), 2.0)
    assert rep.ratio == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-3)
    assert rep.ratio_centered == pytest.approx(rep.ratio, rel=1e-12)
    assert not rep.degenerate


def test_g_norm_ratio_constant_degenerates():
    rep = g_norm_ratio(AnalyticSeries([5.0]), 2.0)
    assert rep.degenerate
    assert rep.ratio == pytest.approx(0.0, abs=1e-12)
    assert rep.ratio_centered is None


def test_g_norm_ratio_corpus_in_bracket():
    rng = np.random.default_rng(77)
    for p in (1.0, 2.0):
        for _ in range(5):
            deg = int(rng.integers(2, 33))
            a = AnalyticSeries(rng.uniform(-1, 1, deg + 1) + 1j * rng.uniform(-1, 1, deg + 1))
            rep = g_norm_ratio(a, p)
            assert rep.bracket is not None
            assert rep.in_bracket


def test_power_split_scalars():
    assert power_split_holds(1.0, 1.0, 2.0)
    assert (1.0 + 1.0) ** 2 == 2 ** max(2 - 1, 0) * (1 + 1)  # equality case
    assert power_split_holds(3.0, 0.0, 0.5)
    rng = np.random.default_rng(5)
    for _ in range(200):
        assert power_split_holds(rng.uniform(0, 9), rng.uniform(0, 9), rng.uniform(0.05, 7))
    with pytest.raises(ValueError):
        power_split_holds(-1.0, 0.0, 2.0)


def test_splitting_bound_on_certified_map(rng):
    k = 0.2
    h = AnalyticSeries(rng.uniform(-1, 1, 9) + 1j * rng.uniform(-1, 1, 9))
    m = HarmonicMap(h, (k * h.derivative()).antiderivative())
    K = (1 + k) / (1 - k)
    prof = check_qr(m, K, 0.0, GridSpec(n_radii=24, n_theta=256))
    assert prof.certified()
    pair = decompose(m)
    for p in (1.5, 2.0, 3.0):
        rep = splitting_bound_check(pair, prof, p)
        assert rep.slack >= -1e-9 * max(1.0, rep.rhs)
        assert rep.pointwise_max_deficit <= 1e-9
        assert rep.scalar_split_ok


def test_calibration_fixture_shape():
    fix = load_calibration()
    assert "g_norm_brackets" in fix and "hl_growth_windows" in fix
    for key, (lo, hi) in fix["hl_growth_windows"].items():
        assert 0 < lo < hi
        assert hi / lo == pytest.approx(4.0)
