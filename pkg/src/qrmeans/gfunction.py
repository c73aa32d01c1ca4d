"""Radial square functional G[f](zeta) = (int_0^1 (1-r) |f'(r zeta)|^2 dr)^(1/2).

Per-angle radial integrals use Gauss-Legendre nodes, which are exact for
polynomial integrands once the node count passes the degree; node doubling
confirms convergence.  The equivalence constant between Hardy norms and
angular norms of G has no closed form here, so only an empirical bracket
(calibrated once over a versioned corpus, stored as a fixture) is shipped,
for regression alerts.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .conjugation import ConjugatePair
from .constants import splitting_factor
from .means import hardy_norm, radius_ladder, sample_series_circle
from .qr import QRProfile
from .series import AnalyticSeries, HarmonicMap


@lru_cache(maxsize=32)
def _unit_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=1)
def load_calibration() -> dict:
    with resources.files("qrmeans.fixtures").joinpath("calibration.json").open() as fh:
        return json.load(fh)


@dataclass(frozen=True)
class GFunctionSamples:
    angles: np.ndarray
    values: np.ndarray  # one value per angle, >= 0
    n_radial: int
    converged: bool
    max_delta: float


def _radial_sq(a_prime: AnalyticSeries, n_theta: int, n_radial: int) -> np.ndarray:
    nodes, weights = _unit_nodes(n_radial)
    acc = np.zeros(n_theta)
    for r, w in zip(nodes, weights):
        vals = sample_series_circle(a_prime, float(r), n_theta)
        acc += w * (1.0 - r) * np.abs(vals) ** 2
    return acc


def g_function(
    a: AnalyticSeries,
    n_theta: int = 1024,
    n_radial: int | None = None,
    *,
    tol: float = 1e-9,
    cap: int = 4096,
) -> GFunctionSamples:
    """Sampled square functional of an analytic series on the circle grid."""
    ap = a.derivative()
    angles = 2.0 * np.pi * np.arange(n_theta) / n_theta
    if n_radial is not None:
        sq = _radial_sq(ap, n_theta, n_radial)
        return GFunctionSamples(angles=angles, values=np.sqrt(sq), n_radial=n_radial, converged=True, max_delta=0.0)
    # (1-r)|a'|^2 has radial degree 2*deg(a)-1: this node count is already
    # exact for polynomials; the doubling below certifies it.
    n = max(16, min(a.degree + 1, 512))
    sq = _radial_sq(ap, n_theta, n)
    converged, delta = False, math.inf
    while n < cap:
        sq2 = _radial_sq(ap, n_theta, 2 * n)
        n *= 2
        delta = float(np.max(np.abs(sq2 - sq)))
        sq = sq2
        if delta <= tol * max(1.0, float(np.max(sq))):
            converged = True
            break
    return GFunctionSamples(angles=angles, values=np.sqrt(sq), n_radial=n, converged=converged, max_delta=delta)


def angular_norm(values: np.ndarray, p: float) -> float:
    """(mean |v|^p over the angle grid)^(1/p)."""
    if not p > 0:
        raise ValueError("exponent must be positive")
    return float(np.mean(np.abs(values) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class GNormRatio:
    ratio: float | None  # angular norm of G over the Hardy ladder norm
    ratio_centered: float | None  # same with the constant term removed first
    bracket: tuple[float, float] | None
    in_bracket: bool | None
    g_norm: float
    hardy_value: float
    hardy_centered: float
    degenerate: bool


def _bracket_for(p: float) -> tuple[float, float] | None:
    table = load_calibration().get("g_norm_brackets", {})
    entry = table.get(repr(float(p))) or table.get(str(p))
    if entry is None:
        return None
    return (float(entry[0]), float(entry[1]))


def g_norm_ratio(
    a: AnalyticSeries,
    p: float,
    *,
    n_theta: int = 1024,
    ladder=None,
) -> GNormRatio:
    """Ratio of the two norms, with the constant-removed variant.

    The functional annihilates constants, so the raw ratio of a constant
    series is 0; the centered ratio (series minus its value at 0) is the
    one compared against the calibrated bracket.
    """
    ladder = tuple(ladder) if ladder is not None else radius_ladder(4)
    gs = g_function(a, n_theta=n_theta)
    gn = angular_norm(gs.values, p)
    wrap = HarmonicMap(a)
    hv = hardy_norm(wrap, p, ladder).value
    centered = a.with_constant(0j)
    hc = hardy_norm(HarmonicMap(centered), p, ladder).value
    if hc <= 1e-300:
        return GNormRatio(
            ratio=(gn / hv if hv > 1e-300 else None),
            ratio_centered=None,
            bracket=_bracket_for(p),
            in_bracket=None,
            g_norm=gn,
            hardy_value=hv,
            hardy_centered=hc,
            degenerate=True,
        )
    ratio = gn / hv if hv > 1e-300 else None
    rc = gn / hc
    bracket = _bracket_for(p)
    inb = None if bracket is None else bool(bracket[0] <= rc <= bracket[1])
    return GNormRatio(
        ratio=ratio, ratio_centered=rc, bracket=bracket, in_bracket=inb,
        g_norm=gn, hardy_value=hv, hardy_centered=hc, degenerate=False,
    )


def power_split_holds(a: float, b: float, p: float, tol: float = 1e-12) -> bool:
    """(a+b)^p <= 2^max(p-1, 0) (a^p + b^p) for nonnegative scalars."""
    if a < 0 or b < 0 or p <= 0:
        raise ValueError("need a, b >= 0 and p > 0")
    lhs = (a + b) ** p
    rhs = 2.0 ** max(p - 1.0, 0.0) * (a**p + b**p)
    return lhs <= rhs + tol * max(1.0, rhs)


@dataclass(frozen=True)
class SplitReport:
    p: float
    factor: float
    lhs: float  # angular norm of G[v_analytic]
    rhs: float  # factor * (K * angular norm of G[u_analytic] + sqrt(K'))
    slack: float
    pointwise_max_deficit: float  # |F2'|^2 - (2 K^2 |F1'|^2 + 2 K')
    scalar_split_ok: bool


def splitting_bound_check(
    pair: ConjugatePair,
    profile: QRProfile,
    p: float,
    *,
    n_theta: int = 1024,
    n_radial: int | None = None,
    rng_seed: int = 1,
) -> SplitReport:
    """Square-functional consequence of a certified profile.

    Three independent layers: the scalar power-mean split on fuzzed
    nonnegative inputs, the pointwise squared-derivative comparison on the
    radial-node lattice, and the angular-norm inequality itself.
    """
    K, kp = profile.K, profile.kprime
    factor = splitting_factor(p)
    g1 = g_function(pair.u_analytic, n_theta=n_theta, n_radial=n_radial)
    g2 = g_function(pair.v_analytic, n_theta=n_theta, n_radial=n_radial)
    lhs = angular_norm(g2.values, p)
    rhs = factor * (K * angular_norm(g1.values, p) + math.sqrt(kp))
    d1 = pair.u_analytic.derivative()
    d2 = pair.v_analytic.derivative()
    nodes, _ = _unit_nodes(g2.n_radial)
    worst = -math.inf
    for r in nodes:
        v1 = np.abs(sample_series_circle(d1, float(r), n_theta)) ** 2
        v2 = np.abs(sample_series_circle(d2, float(r), n_theta)) ** 2
        worst = max(worst, float(np.max(v2 - (2.0 * K * K * v1 + 2.0 * kp))))
    rng = np.random.default_rng(rng_seed)
    ok = all(
        power_split_holds(float(x), float(y), float(q))
        for x, y, q in zip(rng.uniform(0, 10, 64), rng.uniform(0, 10, 64), rng.uniform(0.1, 6, 64))
    )
    return SplitReport(
        p=p, factor=factor, lhs=lhs, rhs=rhs, slack=rhs - lhs,
        pointwise_max_deficit=worst, scalar_split_ok=ok,
    )
