import cmath
import math

import numpy as np
import pytest

from qrmeans.series import (
    AnalyticSeries,
    DomainError,
    HarmonicMap,
    diff_at,
    directional_derivative,
    eval_map,
    inv_power_series,
    map_from_spec,
    series_from_spec,
)

from conftest import random_map


def test_eval_identity_map():
    m = HarmonicMap(AnalyticSeries([0, 1]))
    assert eval_map(m, 0.5) == 0.5


def test_eval_antianalytic_square():
    m = HarmonicMap(AnalyticSeries([0]), AnalyticSeries([0, 0, 1]))
    z = 0.5j
    assert eval_map(m, z) == pytest.approx((z**2).conjugate())
    assert eval_map(m, z) == pytest.approx(-0.25)


def test_eval_geometric_series_oracle():
    m = HarmonicMap(inv_power_series(1.0, n=200))
    assert abs(eval_map(m, 0.5) - 2.0) < 1e-12


def test_eval_domain_error():
    m = HarmonicMap(AnalyticSeries([0, 1]))
    with pytest.raises(DomainError):
        eval_map(m, 1.0)
    with pytest.raises(DomainError):
        eval_map(m, 1.2j)


def test_nonfinite_coefficients_rejected():
    with pytest.raises(ValueError):
        AnalyticSeries([1.0, math.nan])
    with pytest.raises(ValueError):
        AnalyticSeries([1.0, complex(0, math.inf)])


def test_derivative_coefficients():
    a = AnalyticSeries([3, 2, 5, 7])
    assert np.allclose(a.derivative().coeffs, [2, 10, 21])
    assert a.derivative().degree == a.degree - 1
    assert np.allclose(AnalyticSeries([4]).derivative().coeffs, [0])


def test_antiderivative_starts_at_zero():
    a = AnalyticSeries([2, 6])
    b = a.antiderivative()
    assert b(0) == 0
    assert np.allclose(b.coeffs, [0, 2, 3])


def test_diff_constant_dilatation():
    m = HarmonicMap(AnalyticSeries([0, 1]), AnalyticSeries([0, 0.5]))
    d = diff_at(m, 0.3 - 0.2j)
    assert d.stretch_max == pytest.approx(1.5)
    assert d.stretch_min == pytest.approx(0.5)
    assert d.jacobian == pytest.approx(0.75)


def test_diff_conformal_identity():
    m = HarmonicMap(AnalyticSeries([0, 1]))
    for z in (0.0, 0.5j, -0.7):
        d = diff_at(m, z)
        assert (d.stretch_max, d.stretch_min, d.jacobian) == (1.0, 1.0, 1.0)


def test_diff_radial_profile():
    # h = z, g = z^2/2: |g'| = r, so the stretches are 1 +- r
    m = HarmonicMap(AnalyticSeries([0, 1]), AnalyticSeries([0, 0, 0.5]))
    for r, t in ((0.3, 0.0), (0.8, 2.1)):
        d = diff_at(m, r * cmath.exp(1j * t))
        assert d.stretch_max == pytest.approx(1 + r)
        assert d.stretch_min == pytest.approx(1 - r)
        assert d.jacobian == pytest.approx(1 - r * r)


def test_directional_derivative_values():
    m = HarmonicMap(AnalyticSeries([0, 1]))
    assert directional_derivative(m, 0.2, math.pi / 3) == pytest.approx(cmath.exp(1j * math.pi / 3))
    m2 = HarmonicMap(AnalyticSeries([0, 0, 1]))
    assert directional_derivative(m2, 0.3, 0.0) == pytest.approx(0.6)


def test_directional_max_attains_stretch():
    k = 0.4
    m = HarmonicMap(AnalyticSeries([0, 1]), AnalyticSeries([0, k]))
    mods = [abs(directional_derivative(m, 0.1, t)) for t in np.linspace(0, 2 * np.pi, 360, endpoint=False)]
    assert max(mods) == pytest.approx(1 + k, abs=1e-3)


def test_sampled_direction_extremes_bracket_stretches(rng):
    thetas = np.linspace(0, 2 * np.pi, 360, endpoint=False)
    for _ in range(5):
        m = random_map(rng, degree=10, analytic=False)
        z = 0.6 * cmath.exp(2j * rng.uniform(0, math.pi))
        d = diff_at(m, z)
        mods = np.abs([directional_derivative(m, z, t) for t in thetas])
        assert d.stretch_max - 1e-3 <= mods.max() <= d.stretch_max + 1e-12
        assert d.stretch_min - 1e-12 <= mods.min() <= d.stretch_min + 1e-3


def test_jacobian_two_ways(rng):
    for _ in range(10):
        m = random_map(rng, degree=12, analytic=False)
        z = 0.7 * cmath.exp(2j * rng.uniform(0, math.pi))
        d = diff_at(m, z)
        prod = d.stretch_max * d.stretch_min
        assert abs(abs(d.jacobian) - prod) <= 1e-12 * max(1.0, prod)


def test_finite_difference_matches_directional(rng):
    delta = 1e-6
    for _ in range(5):
        m = random_map(rng, degree=50, analytic=False)
        z = 0.85 * cmath.exp(2j * rng.uniform(0, math.pi))
        theta = rng.uniform(0, 2 * math.pi)
        fd = (eval_map(m, z + delta * cmath.exp(1j * theta)) - eval_map(m, z)) / delta
        assert abs(fd - directional_derivative(m, z, theta)) < 1e-4


def test_inv_power_tail_control():
    a = inv_power_series(1.0)
    # remaining geometric tail at the default radius must be tiny
    r = 0.999
    tail = r ** (a.degree + 1) / (1 - r)
    assert tail < 1e-10
    assert abs(a(0.5) - 2.0) < 1e-12


def test_inv_power_rotation_phase():
    a = inv_power_series(2.0, rot=math.pi / 2, n=64)
    b = inv_power_series(2.0, n=64)
    assert np.allclose(a.coeffs, 1j * b.coeffs)


def test_inv_power_rejects_bad_alpha():
    with pytest.raises(ValueError):
        inv_power_series(0.0)


def test_series_spec_roundtrip():
    spec = {"h": {"coeffs": [[0.0, 0.0], [1.0, -2.0]]}, "g": {"coeffs": [[0.0, 0.0], [0.25, 0.0]]}}
    m = map_from_spec(spec)
    assert m.h.coeffs[1] == 1.0 - 2.0j
    assert m.g.coeffs[1] == 0.25
    again = map_from_spec(m.to_spec())
    assert np.allclose(again.h.coeffs, m.h.coeffs)
    assert np.allclose(again.g.coeffs, m.g.coeffs)


def test_generator_spec_fields():
    a = series_from_spec({"generator": "inv_power", "alpha": 1.0, "rot": 0.0, "N": 32})
    assert a.degree == 32
    assert np.allclose(a.coeffs, np.ones(33))
    with pytest.raises(ValueError):
        series_from_spec({"generator": "unknown"})


def test_map_normalization_guard():
    g = AnalyticSeries([0.5, 1.0])
    with pytest.raises(ValueError):
        HarmonicMap(AnalyticSeries([0, 1]), g)
    m = HarmonicMap.from_unnormalized(AnalyticSeries([0, 1]), g)
    assert m.g(0) == 0
    # f is unchanged by moving the constant
    z = 0.3 + 0.1j
    raw = AnalyticSeries([0, 1])(z) + (g(z)).conjugate()
    assert eval_map(m, z) == pytest.approx(raw)


def test_series_arithmetic_and_scaling():
    a = AnalyticSeries([1, 2])
    b = AnalyticSeries([0, 1, 1])
    assert np.allclose((a + b).coeffs, [1, 3, 1])
    assert np.allclose((a - b).coeffs, [1, 1, -1])
    assert np.allclose((2.0 * a).coeffs, [2, 4])
    assert np.allclose((a * b).coeffs, np.convolve(a.coeffs, b.coeffs))


def test_reliability_cut_for_truncated_generators():
    a = inv_power_series(1.0, n=1000)
    assert a.reliable_at(0.9)
    assert not a.reliable_at(1 - 1e-5)
    assert AnalyticSeries([1, 2, 3]).reliable_at(0.999999)
