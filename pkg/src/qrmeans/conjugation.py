"""Harmonic conjugation through the analytic completion.

For f = h + conj(g) the sum and difference series carry the real and
imaginary parts: u = Re(h + g) and v = Im(h - g).  Working on
coefficients keeps the v(0) = 0 normalization exact and avoids any
boundary sampling.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import AnalyticSeries, HarmonicMap, _check_in_disk


@dataclass(frozen=True)
class ConjugatePair:
    """Analytic completions of the two coordinate functions.

    u = Re(u_analytic) and v = Im(v_analytic), checked pointwise in tests.
    """

    u_analytic: AnalyticSeries  # h + g
    v_analytic: AnalyticSeries  # h - g


def decompose(m: HarmonicMap) -> ConjugatePair:
    """Coefficientwise sum/difference pair of the map."""
    return ConjugatePair(u_analytic=m.h + m.g, v_analytic=m.h - m.g)


def conjugate_function(a: AnalyticSeries) -> AnalyticSeries:
    """Normalize the analytic completion of u so that Im a(0) = 0.

    The imaginary part of the result is then THE harmonic conjugate of
    u = Re a with v(0) = 0 (the constant coefficient is rotated to real;
    all other coefficients are untouched).
    """
    a0 = complex(a.coeffs[0])
    if a0.imag == 0.0:
        return a
    return a.with_constant(a0.real)


def gradient_modulus_u(pair: ConjugatePair, z: complex) -> float:
    """|grad u|(z), equal to the derivative modulus of the completion of u."""
    _check_in_disk(z)
    return abs(pair.u_analytic.derivative()(z))


def boundary_mean_sq_real(a: AnalyticSeries) -> float:
    """Limit of the squared 2-mean of Re a on circles r -> 1 (coefficient sum)."""
    c = a.coeffs
    tail = 0.5 * float(np.sum(np.abs(c[1:]) ** 2))
    return float(c[0].real) ** 2 + tail


def boundary_mean_sq_imag(a: AnalyticSeries) -> float:
    """Limit of the squared 2-mean of Im a on circles r -> 1 (coefficient sum)."""
    c = a.coeffs
    tail = 0.5 * float(np.sum(np.abs(c[1:]) ** 2))
    return float(c[0].imag) ** 2 + tail


def boundary_mean_sq_map(m: HarmonicMap) -> float:
    """Limit of M_2(r, f)^2 as r -> 1 for the truncated representative.

    Equals the coefficient sum of h plus that of g: the cross term
    averages to h(0) * g(0) = 0 under the g(0) = 0 normalization.
    """
    return float(np.sum(np.abs(m.h.coeffs) ** 2) + np.sum(np.abs(m.g.coeffs) ** 2))
