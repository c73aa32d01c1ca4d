"""Seeded map corpora for experiments; a seed fully determines a corpus."""
from __future__ import annotations

import numpy as np

from .means import mean_p, sample_map_circle
from .qr import GridSpec, QRProfile, check_qr, min_kprime
from .series import AnalyticSeries, HarmonicMap

NORM_RADIUS = 0.9999
NORM_N_THETA = 4096


def _random_series(rng: np.random.Generator, degree: int) -> AnalyticSeries:
    re = rng.uniform(-1.0, 1.0, degree + 1)
    im = rng.uniform(-1.0, 1.0, degree + 1)
    return AnalyticSeries(re + 1j * im)


def _normalize_u(m: HarmonicMap, p: float) -> HarmonicMap:
    u_mean = mean_p(np.real(sample_map_circle(m, NORM_RADIUS, NORM_N_THETA)), p)
    if u_mean <= 1e-12:
        return m
    s = 1.0 / u_mean
    return HarmonicMap(s * m.h, s * m.g)


def analytic_corpus(
    size: int,
    seed: int,
    *,
    degree: int = 16,
    p_norm: float = 2.0,
    zero_imag_at_origin: bool = True,
    zero_at_origin: bool = False,
) -> list[HarmonicMap]:
    """Random analytic polynomials (g = 0), normalized to unit u-mean.

    ``zero_imag_at_origin`` enforces v(0) = 0; ``zero_at_origin`` removes
    the constant term entirely (f(0) = 0).
    """
    rng = np.random.default_rng(seed)
    maps = []
    for _ in range(size):
        h = _random_series(rng, degree)
        a0 = complex(h.coeffs[0])
        if zero_at_origin:
            h = h.with_constant(0j)
        elif zero_imag_at_origin:
            h = h.with_constant(a0.real)
        maps.append(_normalize_u(HarmonicMap(h), p_norm))
    return maps


def qr_corpus(
    size: int,
    seed: int,
    K: float,
    kprime: float = 0.0,
    *,
    degree: int = 12,
    omega_degree: int = 4,
    grid: GridSpec | None = None,
    p_norm: float = 2.0,
) -> list[tuple[HarmonicMap, QRProfile]]:
    """Random certified (K, K') maps with v(0) = 0.

    For K' = 0 the second dilatation is k*omega*h' with |omega| <= 1, an
    exact equality-family envelope.  For K' > 0 the dilatation ratio is
    pushed above (K-1)/(K+1) and the whole map rescaled so the measured
    envelope lands at 90% of the requested K'.
    """
    if K < 1.0 or kprime < 0.0:
        raise ValueError("need K >= 1 and K' >= 0")
    rng = np.random.default_rng(seed)
    grid = grid or GridSpec()
    k = (K - 1.0) / (K + 1.0)
    out = []
    for _ in range(size):
        h = _random_series(rng, degree)
        h = h.with_constant(complex(h.coeffs[0]).real)
        w = _random_series(rng, omega_degree)
        sup_w = max(
            float(np.abs(sample_map_circle(HarmonicMap(w), r, grid.n_theta)).max())
            for r in (grid.r_max,)
        )
        omega = (1.0 / sup_w) * w
        ratio = k if kprime == 0.0 else min(k + 0.05, 0.95)
        gprime = ratio * (omega * h.derivative())
        m = HarmonicMap(h, gprime.antiderivative())
        if kprime > 0.0:
            measured = min_kprime(m, K, grid)
            if measured > 0.0:
                s = float(np.sqrt(0.9 * kprime / measured))
                m = HarmonicMap(s * m.h, s * m.g)
        else:
            m = _normalize_u(m, p_norm)
        profile = check_qr(m, K, kprime, grid)
        out.append((m, profile))
    return out


def sector_corpus(size: int, seed: int, *, degree: int = 8, center: complex = 0.5j, spread: float = 0.15) -> list[HarmonicMap]:
    """Analytic maps clustered around an interior point of the upper sector.

    The perturbation is sup-normalized (coefficient-sum bound) so the range
    stays within ``spread`` of the center.
    """
    rng = np.random.default_rng(seed)
    maps = []
    for _ in range(size):
        w = _random_series(rng, degree)
        w = w.with_constant(0j)
        bound = float(np.sum(np.abs(w.coeffs)))
        h = (spread / max(bound, 1e-12)) * w
        h = h.with_constant(center)
        maps.append(HarmonicMap(h))
    return maps
