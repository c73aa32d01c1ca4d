"""Grid certification of the pointwise stretch bound for harmonic maps.

A map is grid-certified (K, K') when stretch_max^2 <= K * jacobian + K'
holds at every lattice point together with jacobian >= 0.  Certification
always goes through direct grid evaluation; the derived dilatation bounds
are checked one-directionally only (their converse is false in general).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .means import sample_series_circle
from .series import AnalyticSeries, HarmonicMap

CERT_TOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Polar evaluation lattice; radii cluster toward r_max ("cheb")."""

    n_radii: int = 64
    n_theta: int = 1024
    r_max: float = 0.999
    spacing: str = "cheb"

    def __post_init__(self):
        if not 0.0 < self.r_max < 1.0:
            raise ValueError("r_max must lie in (0, 1)")
        if self.spacing not in ("cheb", "uniform"):
            raise ValueError("spacing must be 'cheb' or 'uniform'")

    def radii(self) -> np.ndarray:
        s = np.linspace(0.0, 1.0, self.n_radii)
        if self.spacing == "cheb":
            return self.r_max * np.sin(0.5 * np.pi * s)
        return self.r_max * s

    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta

    def to_dict(self) -> dict:
        return {
            "n_radii": self.n_radii,
            "n_theta": self.n_theta,
            "r_max": self.r_max,
            "spacing": self.spacing,
        }


def _circle_stack(a: AnalyticSeries, radii: np.ndarray, n_theta: int) -> np.ndarray:
    return np.stack([sample_series_circle(a, float(r), n_theta) for r in radii])


def _derivative_samples(m: HarmonicMap, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    radii = grid.radii()
    hp = _circle_stack(m.h.derivative(), radii, grid.n_theta)
    gp = _circle_stack(m.g.derivative(), radii, grid.n_theta)
    return hp, gp


@dataclass(frozen=True)
class QRProfile:
    """(K, K') envelope of a map certified over an evaluation grid."""

    K: float
    kprime: float
    grid: GridSpec
    max_violation: float
    j_min: float

    @property
    def mu1(self) -> float:
        return (self.K - 1.0) / (self.K + 1.0)

    @property
    def mu2(self) -> float:
        return math.sqrt(self.kprime) / (1.0 + self.K)

    def certified(self, tol: float = CERT_TOL) -> bool:
        return self.max_violation <= tol and self.j_min >= -tol

    def to_json_dict(self) -> dict:
        return {
            "K": self.K,
            "Kprime": self.kprime,
            "max_violation": self.max_violation,
            "j_min": self.j_min,
            "grid": self.grid.to_dict(),
        }


def check_qr(m: HarmonicMap, K: float, kprime: float, grid: GridSpec | None = None) -> QRProfile:
    """Worst grid excess of stretch_max^2 - K*jacobian - K' (plus min jacobian).

    A negative jacobian anywhere fails certification outright; it is
    reported through j_min rather than clamped.
    """
    if K < 1.0 or kprime < 0.0:
        raise ValueError("need K >= 1 and K' >= 0")
    grid = grid or GridSpec()
    hp, gp = _derivative_samples(m, grid)
    ah, ag = np.abs(hp), np.abs(gp)
    jac = ah * ah - ag * ag
    violation = (ah + ag) ** 2 - K * jac - kprime
    return QRProfile(
        K=float(K),
        kprime=float(kprime),
        grid=grid,
        max_violation=float(violation.max()),
        j_min=float(jac.min()),
    )


def min_kprime(m: HarmonicMap, K: float, grid: GridSpec | None = None) -> float:
    """Smallest grid-sup K' making the (K, K') inequality hold: the maximum
    of the positive part of stretch_max^2 - K*jacobian."""
    if K < 1.0:
        raise ValueError("need K >= 1")
    grid = grid or GridSpec()
    hp, gp = _derivative_samples(m, grid)
    ah, ag = np.abs(hp), np.abs(gp)
    excess = (ah + ag) ** 2 - K * (ah * ah - ag * ag)
    return float(np.maximum(excess, 0.0).max())


@dataclass(frozen=True)
class DilatationReport:
    """Worst slack deficits of the two derivative bounds implied by a profile."""

    dilatation_deficit: float  # |g'| - (mu1 |h'| + mu2)
    pair_deficit: float  # |(h-g)'| - (K |(h+g)'| + sqrt(K'))
    argmax_dilatation: complex
    argmax_pair: complex


def dilatation_bound_check(m: HarmonicMap, profile: QRProfile, grid: GridSpec | None = None) -> DilatationReport:
    """One-directional consequence check of a certified profile (both
    deficits should not exceed the certification tolerance)."""
    grid = grid or profile.grid
    hp, gp = _derivative_samples(m, grid)
    ah, ag = np.abs(hp), np.abs(gp)
    d1 = ag - (profile.mu1 * ah + profile.mu2)
    d2 = np.abs(hp - gp) - (profile.K * np.abs(hp + gp) + math.sqrt(profile.kprime))
    radii = grid.radii()
    angles = grid.angles()

    def argmax_point(d):
        i, j = np.unravel_index(int(np.argmax(d)), d.shape)
        return complex(radii[i] * np.exp(1j * angles[j]))

    return DilatationReport(
        dilatation_deficit=float(d1.max()),
        pair_deficit=float(d2.max()),
        argmax_dilatation=argmax_point(d1),
        argmax_pair=argmax_point(d2),
    )


def synthesize_qr(
    h: AnalyticSeries,
    k: float,
    omega: AnalyticSeries,
    perturb: tuple[AnalyticSeries, float] | None = None,
    *,
    K: float | None = None,
    grid: GridSpec | None = None,
) -> tuple[HarmonicMap, QRProfile]:
    """Build the map with g' = k * omega * h' (+ s*b) and certify it.

    With no perturbation the result satisfies the (1+k)/(1-k) stretch bound
    by construction; with a perturbation the envelope is re-measured via
    min_kprime.  Certification is always by direct grid evaluation.
    """
    if not 0.0 <= k < 1.0:
        raise ValueError("k must lie in [0, 1)")
    grid = grid or GridSpec()
    sup_omega = max(float(np.abs(sample_series_circle(omega, float(r), grid.n_theta)).max()) for r in grid.radii())
    if sup_omega > 1.0 + 1e-12:
        raise ValueError(f"omega exceeds unit modulus on the grid (sup = {sup_omega})")
    gprime = k * (omega * h.derivative())
    s = 0.0
    if perturb is not None:
        b, s = perturb
        if s < 0.0:
            raise ValueError("perturbation scale must be nonnegative")
        if s > 0.0:
            gprime = gprime + s * b
    m = HarmonicMap(h, gprime.antiderivative())
    K_target = float(K) if K is not None else (1.0 + k) / (1.0 - k)
    if s == 0.0:
        profile = check_qr(m, K_target, 0.0, grid)
    else:
        kp = min_kprime(m, K_target, grid)
        profile = check_qr(m, K_target, kp, grid)
    return m, profile


@dataclass(frozen=True)
class SectorFlags:
    """Hypothesis flags for the sharp-constant inequalities at exponent p.

    ``origin_ok`` is None when f(0) = 0 leaves the argument undefined (the
    quantity the inequalities actually consume is then 0, which passes).
    The range condition is reported as two separate sub-flags: the
    argument sector and the modulus bound |f| < 1.
    """

    origin_ok: bool | None
    sector_ok: bool
    modulus_ok: bool
    worst_point: complex | None
    worst_gap_depth: float


def _even_integer(p: float) -> bool:
    k = round(p)
    if abs(p - k) <= 1e-12 and k % 2 == 0:
        if p != k:
            warnings.warn(f"snapping p = {p!r} to the even integer {k}")
        return True
    return False


def sector_hypotheses(m: HarmonicMap, p: float, grid: GridSpec | None = None) -> SectorFlags:
    """Evaluate the two alternative hypotheses at exponent p >= 2.

    origin_ok: cos(p*(arg f(0) - pi/2)) <= 0 at the origin.
    sector_ok: every grid value of arg f lies in
    [-(p-1)pi/2p, (3p-1)pi/2p] (principal branch, shifted by 2pi where
    needed); the worst offending point measures depth into the forbidden
    gap of width pi/p around -pi/2.
    """
    if not p >= 2.0:
        raise ValueError("p must be at least 2")
    grid = grid or GridSpec()
    f0 = m.value_at_origin
    if f0 == 0:
        origin_ok: bool | None = None
    else:
        origin_ok = math.cos(p * (math.atan2(f0.imag, f0.real) - math.pi / 2.0)) <= 1e-12
    radii = grid.radii()
    hvals = _circle_stack(m.h, radii, grid.n_theta)
    gvals = _circle_stack(m.g, radii, grid.n_theta)
    fvals = hvals + np.conj(gvals)
    t = np.angle(fvals)
    gap_lo = -(p + 1.0) * math.pi / (2.0 * p)
    gap_hi = -(p - 1.0) * math.pi / (2.0 * p)
    inside_gap = (t > gap_lo + 1e-12) & (t < gap_hi - 1e-12)
    depth = np.where(inside_gap, np.minimum(t - gap_lo, gap_hi - t), 0.0)
    sector_ok = not bool(inside_gap.any())
    worst_point = None
    worst_depth = 0.0
    if not sector_ok:
        i, j = np.unravel_index(int(np.argmax(depth)), depth.shape)
        worst_point = complex(radii[i] * np.exp(1j * grid.angles()[j]))
        worst_depth = float(depth[i, j])
    modulus_ok = bool(np.abs(fvals).max() < 1.0)
    return SectorFlags(
        origin_ok=origin_ok,
        sector_ok=sector_ok,
        modulus_ok=modulus_ok,
        worst_point=worst_point,
        worst_gap_depth=worst_depth,
    )


def hypothesis_gate(m: HarmonicMap, p: float, grid: GridSpec | None = None) -> tuple[bool, str]:
    """Admission rule for the sharp-constant experiments.

    Even integer p: pass when the origin condition holds, or vacuously when
    f(0) = 0.  Other p: pass when all sampled values stay inside the
    argument sector.  Returns (admitted, reason).
    """
    flags = sector_hypotheses(m, p, grid)
    if _even_integer(p):
        if flags.origin_ok is None:
            return True, "f(0) = 0, origin condition vacuous"
        if flags.origin_ok:
            return True, "origin condition holds"
        return False, "origin condition fails"
    if flags.sector_ok:
        return True, "range stays in the admissible sector"
    return False, f"range leaves the sector (depth {flags.worst_gap_depth:.3e} at {flags.worst_point})"
