"""Boundary-growth witness families and their sharpness experiments.

Each witness is an affine stretch f = alpha*Re(A) + i*beta*Im(A) of an
analytic generator A, with alpha = 2K/(K+1), beta = 2/(K+1); the stretch
has constant derivative-ratio (K-1)/(K+1), so the maps are grid-certified
(K, 0) by construction.  Two families:

  hl_growth      A = e^(i j pi/2) (1 - z)^(-j-1): the real part has a
                 bounded 1/(1+j)-mean ladder while the imaginary-part mean
                 grows logarithmically (two-sided).
  hl_derivative  A' = (1 - z)^(eps - 1/p) for p < 1, small eps > 0, with
                 A(0) = 0: the gradient stays in the p-mean ladder while
                 the map itself leaves every q-mean ladder just above
                 q = p/(1-p).

Pass windows and slope thresholds are frozen in the calibration fixture,
never tuned inside an experiment run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gfunction import load_calibration
from .means import (
    N_THETA_CAP,
    _refined_circle_mean,
    increment_ratio,
    mean_p_map,
    radius_ladder,
    sample_map_circle,
)
from .series import AnalyticSeries, HarmonicMap, inv_power_series

EXPERIMENT_MEAN_TOL = 1e-8


@dataclass(frozen=True)
class ExtremalSpec:
    family: str  # "hl_growth" | "hl_derivative"
    j: int = 0
    K: float = 1.0
    epsilon: float = 0.05
    p: float = 0.5
    n: int | None = None
    r_max: float = 0.9999

    def __post_init__(self):
        if self.family not in ("hl_growth", "hl_derivative"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "hl_growth" and self.j < 0:
            raise ValueError("j must be nonnegative")
        if self.K < 1.0:
            raise ValueError("K must be at least 1")
        if self.family == "hl_derivative":
            if not 0.0 < self.p < 1.0:
                raise ValueError("p must lie in (0, 1)")
            if not 0.0 < self.epsilon < 1.0 / self.p - 1.0:
                raise ValueError("epsilon must lie in (0, 1/p - 1)")


def stretch_map(a: AnalyticSeries, K: float) -> HarmonicMap:
    """Affine stretch alpha*Re(A) + i*beta*Im(A) realized as h + conj(g).

    With real weights, alpha*Re(A) + i*beta*Im(A) equals
    ((alpha+beta)/2) A + conj(((alpha-beta)/2) A), so h and g are both
    scalar multiples of A itself; the constant of g is then moved into h
    so that g(0) = 0 with f unchanged.  The derivative ratio g'/h' is the
    constant (K-1)/(K+1).
    """
    alpha = 2.0 * K / (K + 1.0)
    beta = 2.0 / (K + 1.0)
    h = 0.5 * (alpha + beta) * a
    g = 0.5 * (alpha - beta) * a
    return HarmonicMap.from_unnormalized(h, g)


def growth_witness(j: int, K: float, *, n: int | None = None, r_max: float = 0.9999) -> HarmonicMap:
    a = inv_power_series(j + 1.0, rot=j * math.pi / 2.0, n=n, r_max=r_max)
    return stretch_map(a, K)


def derivative_witness(p: float, epsilon: float, K: float, *, n: int | None = None, r_max: float = 0.9999) -> HarmonicMap:
    alpha = 1.0 / p - epsilon
    a = inv_power_series(alpha, n=n, r_max=r_max).antiderivative()
    return stretch_map(a, K)


def build_extremal(spec: ExtremalSpec) -> HarmonicMap:
    if spec.family == "hl_growth":
        return growth_witness(spec.j, spec.K, n=spec.n, r_max=spec.r_max)
    return derivative_witness(spec.p, spec.epsilon, spec.K, n=spec.n, r_max=spec.r_max)


def _constant_control_map() -> HarmonicMap:
    return HarmonicMap(AnalyticSeries([1.0 + 1.0j]))


def _reliable_rungs(m: HarmonicMap, ladder) -> tuple[list, list]:
    keep, dropped = [], []
    for r in ladder:
        (keep if m.reliable_at(r) else dropped).append(float(r))
    return keep, dropped


def _growth_window(j: int, K: float) -> tuple[float, float]:
    table = load_calibration()["hl_growth_windows"]
    entry = table[f"{j},{K:g}"]
    return float(entry[0]), float(entry[1])


@dataclass(frozen=True)
class GrowthSharpnessReport:
    j: int
    K: float
    control: bool
    radii: tuple
    ratios: tuple  # mean of |Im f|^(1/(1+j)) over log(1/(1-r))
    window: tuple
    dropped_radii: tuple
    passed: bool


def sharpness_experiment_growth(
    j: int,
    K: float,
    *,
    ladder=None,
    window: tuple[float, float] | None = None,
    control: bool = False,
    mean_tol: float = EXPERIMENT_MEAN_TOL,
) -> GrowthSharpnessReport:
    """Two-sided logarithmic-growth test of the imaginary-part mean.

    PASS means every rung ratio falls inside the frozen window; the
    constant-map control is expected to drop below the lower edge.
    """
    ladder = tuple(ladder) if ladder is not None else radius_ladder(4)
    m = _constant_control_map() if control else growth_witness(j, K, r_max=max(ladder))
    keep, dropped = _reliable_rungs(m, ladder)
    window = window if window is not None else _growth_window(j, K)
    q = 1.0 / (1.0 + j)
    ratios = []
    for r in keep:
        mv = _refined_circle_mean(
            lambda n, rr=r: sample_map_circle(m, rr, n),
            lambda vals: float(np.mean(np.abs(np.imag(vals)) ** q)),
            tol=mean_tol,
            cap=N_THETA_CAP,
        )
        ratios.append(mv.value / math.log(1.0 / (1.0 - r)))
    passed = all(window[0] <= x <= window[1] for x in ratios) and bool(ratios)
    return GrowthSharpnessReport(
        j=j, K=K, control=control, radii=tuple(keep), ratios=tuple(ratios),
        window=window, dropped_radii=tuple(dropped), passed=passed,
    )


@dataclass(frozen=True)
class DerivativeSharpnessReport:
    p: float
    epsilon: float
    K: float
    q_nominal: float  # p / (1 - p)
    q_critical: float | None
    bracket: tuple | None
    gradient_ladder_bounded: bool
    no_blowup_detected: bool
    radii: tuple
    dropped_radii: tuple
    probes: tuple  # (q, increment ratio, divergent) triples
    passed: bool




def sharpness_experiment_derivative(
    p: float,
    epsilon: float = 0.05,
    K: float = 1.0,
    *,
    deep: bool = True,
    ladder=None,
    mean_tol: float = 1e-9,
    bisect_tol: float = 0.02,
    control: bool = False,
) -> DerivativeSharpnessReport:
    """Locate the blow-up exponent of the derivative witness by bisection.

    A candidate exponent q counts as divergent when the last increment
    ratio of mean |f|^q along the ladder exceeds the frozen threshold
    (1 by default: increments that keep growing per decade).  The gradient
    ladder is required to settle under the same measure first; a map with
    bounded modulus (the ``control`` runs the identity) reports no blow-up
    at all instead of a critical exponent.
    """
    ExtremalSpec(family="hl_derivative", p=p, epsilon=epsilon, K=K)  # validates ranges
    ladder = tuple(ladder) if ladder is not None else radius_ladder(6 if deep else 4)
    if control:
        m = HarmonicMap(AnalyticSeries([0.0, 1.0]))
    else:
        m = derivative_witness(p, epsilon, K, r_max=max(ladder))
    keep, dropped = _reliable_rungs(m, ladder)
    if len(keep) < 4:
        raise ValueError("not enough trustworthy rungs below the truncation cut")
    threshold = float(load_calibration()["hl_derivative"]["divergence_increment_ratio"])

    grad = HarmonicMap(m.h.derivative() + m.g.derivative())  # |grad u| = |(h+g)'|
    grad_keep = [r for r in keep if grad.reliable_at(r)]
    if len(grad_keep) < 3:
        raise ValueError("not enough trustworthy rungs for the gradient ladder")
    grad_powers = [mean_p_map(grad, r, p, tol=mean_tol).value ** p for r in grad_keep]
    grad_ok = increment_ratio(grad_powers) <= threshold

    probes = []

    def divergent(q: float) -> bool:
        powers = [mean_p_map(m, r, q, tol=mean_tol).value ** q for r in keep]
        rho = increment_ratio(powers)
        is_div = rho > threshold
        probes.append((q, rho, is_div))
        return is_div

    q0 = p / (1.0 - p)
    lo, hi = 0.5 * q0, 2.0 * q0
    if not divergent(hi):
        return DerivativeSharpnessReport(
            p=p, epsilon=epsilon, K=K, q_nominal=q0, q_critical=None, bracket=None,
            gradient_ladder_bounded=grad_ok, no_blowup_detected=True,
            radii=tuple(keep), dropped_radii=tuple(dropped), probes=tuple(probes), passed=False,
        )
    if divergent(lo):
        raise ValueError("divergence criterion fires at half the nominal exponent")
    while hi - lo > bisect_tol * q0:
        mid = 0.5 * (lo + hi)
        if divergent(mid):
            hi = mid
        else:
            lo = mid
    q_crit = 0.5 * (lo + hi)
    return DerivativeSharpnessReport(
        p=p, epsilon=epsilon, K=K, q_nominal=q0, q_critical=q_crit, bracket=(lo, hi),
        gradient_ladder_bounded=grad_ok, no_blowup_detected=False,
        radii=tuple(keep), dropped_radii=tuple(dropped), probes=tuple(probes),
        passed=grad_ok and abs(q_crit - q0) <= 0.5 * q0,
    )
