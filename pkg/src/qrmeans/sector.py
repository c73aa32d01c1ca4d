"""Degree-p homogeneous sector comparison function and its consequences.

The angular profile is piecewise in |t| (with reflection across pi/2):

    -cos(p(pi/2 - |t|))                          pi/2 - pi/p <= |t| <= pi/2
    max{|cos p(pi/2 - t)|, |cos p(pi/2 + t)|}    |t| <  pi/2 - pi/p
    value at pi - |t|                            pi/2 <= |t| <= pi

and the full function scales as r^p.  On top of it sit the four pointwise
inequalities against a_p, b_p, m_p, n_p, the rotated-power auxiliary
field Re(-(-i f)^p), its Laplacian comparisons, and the disk Green
identity used to pass from pointwise to integral bounds.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .constants import lemma_constants
from .means import DEFAULT_N_THETA, N_THETA_CAP, sample_map_circle
from .series import AnalyticSeries, HarmonicMap, _check_in_disk


class BranchCutError(ValueError):
    """A rotated power hit the negative real axis at a sampled point."""


def _check_p(p: float) -> None:
    if not p >= 2.0:
        raise ValueError("p must be at least 2")


def phi_angle(p: float, t):
    """Angular profile at exponent p, vectorized over t in [-pi, pi].

    At the branch seam both candidate values are formed and the larger one
    is used; they agree there (asserted in tests to 1e-12).
    """
    _check_p(p)
    tt = np.abs(np.asarray(t, dtype=float))
    if np.any(tt > np.pi + 1e-12):
        raise ValueError("angles must lie in [-pi, pi]")
    tt = np.where(tt > 0.5 * np.pi, np.pi - tt, tt)
    seam = 0.5 * np.pi - np.pi / p
    outer = -np.cos(p * (0.5 * np.pi - tt))
    inner = np.maximum(np.abs(np.cos(p * (0.5 * np.pi - tt))), np.abs(np.cos(p * (0.5 * np.pi + tt))))
    out = np.where(tt > seam, outer, np.where(tt < seam, inner, np.maximum(outer, inner)))
    if out.ndim == 0:
        return float(out)
    return out


def sector_value(p: float, w):
    """Homogeneous extension |w|^p * phi_angle(arg w); 0 at the origin."""
    ww = np.asarray(w, dtype=complex)
    r = np.abs(ww)
    out = r**p * phi_angle(p, np.angle(ww))
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class SectorFunction:
    """Callable bundle for one exponent p >= 2."""

    p: float

    def __post_init__(self):
        _check_p(self.p)

    def angle_profile(self, t):
        return phi_angle(self.p, t)

    def __call__(self, w):
        return sector_value(self.p, w)


def _is_integer(p: float) -> bool:
    return abs(p - round(p)) <= 1e-12


def rotated_power_real(values, p: float):
    """Re(-(-i w)^p) for sampled w, principal branch for non-integer p.

    Integer exponents are polynomial and need no restriction; otherwise any
    sample with -i*w on the closed negative real axis is a hard error that
    names the offending value.
    """
    _check_p(p)
    w = -1j * np.asarray(values, dtype=complex)
    if _is_integer(p):
        out = -(w ** int(round(p)))
        return out.real if out.ndim else float(out.real)
    on_cut = (w.imag == 0.0) & (w.real < 0.0)
    if np.any(on_cut):
        bad = np.asarray(values, dtype=complex)[on_cut].ravel()[0]
        raise BranchCutError(f"value {bad} maps onto the power branch cut")
    out = -(w**p)
    return out.real if out.ndim else float(out.real)


def f_p_eval(m: HarmonicMap, p: float, z: complex) -> float:
    """Auxiliary field Re(-(-i f(z))^p) of a harmonic map at one point."""
    _check_in_disk(z)
    return float(rotated_power_real(m(z), p))


def lemma_angles(p: float, which: int, n_angles: int) -> np.ndarray:
    """Angle grid for one of the four sector inequalities.

    Inequalities 1 and 3 hold for every argument; 2 and 4 are restricted to
    the admissible arc, which is the full circle exactly when p is an even
    integer (p within 1e-12 of one is snapped, with a warning).
    """
    if which in (1, 3):
        return np.linspace(-np.pi, np.pi, n_angles)
    if which in (2, 4):
        k = round(p)
        if abs(p - k) <= 1e-12 and k % 2 == 0:
            if p != k:
                warnings.warn(f"snapping p = {p!r} to the even integer {k}")
            return np.linspace(-np.pi, np.pi, n_angles)
        return np.linspace(-0.5 * np.pi + np.pi / p, 1.5 * np.pi - np.pi / p, n_angles)
    raise ValueError("which must be one of 1, 2, 3, 4")


@dataclass(frozen=True)
class LemmaSweep:
    which: int
    p: float
    r: float
    max_deficit: float
    scaled_max_deficit: float  # deficit / max(1, r^p)
    argmax_t: float


def lemma_check(p: float, which: int, r: float = 1.0, n_angles: int = 10_000) -> LemmaSweep:
    """Worst LHS - RHS of one sector inequality on the circle of radius r."""
    _check_p(p)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    lc = lemma_constants(p)
    t = lemma_angles(p, which, n_angles)
    re_part = np.abs(r * np.cos(t)) ** p
    if which in (1, 2):
        lhs = np.abs(r * np.sin(t)) ** p
        lead = lc.a_p
        tail = lc.b_p
    else:
        lhs = np.full_like(t, float(r) ** p)
        lead = lc.m_p
        tail = lc.n_p
    if which in (1, 3):
        correction = -tail * sector_value(p, r * np.exp(1j * t))
    else:
        correction = tail * (float(r) ** p) * np.cos(p * (0.5 * np.pi - t))
    deficit = lhs - (lead * re_part + correction)
    i = int(np.argmax(deficit))
    worst = float(deficit[i])
    return LemmaSweep(
        which=which,
        p=p,
        r=float(r),
        max_deficit=worst,
        scaled_max_deficit=worst / max(1.0, float(r) ** p),
        argmax_t=float(t[i]),
    )


# ---------------------------------------------------------------------------
# Disk Green identity
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _unit_gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class GreenQuad:
    n_theta: int = 1024
    n_radial: int = 512
    tol: float = 1e-8
    max_doublings: int = 3


@dataclass(frozen=True)
class GreenReport:
    residual: float
    value_at_origin: float
    boundary_mean: float
    area_term: float  # (1/2) * integral of (Laplacian) log(1/|z|) over the disk
    converged: bool
    n_theta: int
    n_radial: int


def _green_components(f_real: Callable, laplacian: Callable, n_theta: int, n_radial: int) -> tuple[float, float]:
    angles = 2.0 * np.pi * np.arange(n_theta) / n_theta
    ring = np.exp(1j * angles)
    boundary_mean = float(np.mean(f_real(ring)))
    nodes, weights = _unit_gauss_legendre(n_radial)
    area = 0.0
    for r, w in zip(nodes, weights):
        lap_mean = float(np.mean(laplacian(r * ring)))
        # normalized area measure dx dy / pi  ->  2 r dr x angular mean
        area += w * 2.0 * r * math.log(1.0 / r) * lap_mean
    return boundary_mean, area


def green_identity_residual(f_real: Callable, laplacian: Callable, quad: GreenQuad = GreenQuad()) -> GreenReport:
    """Residual of  F(0) = (boundary mean of F) - (1/2) int Lap(F) log(1/|z|) dA.

    ``f_real`` and ``laplacian`` take an ndarray of complex points and return
    real values; dA carries the 1/pi normalization.  The quadrature is
    refined by doubling until both components settle to quad.tol; failure to
    settle is reported through ``converged``.
    """
    f0 = float(np.asarray(f_real(np.zeros(1, dtype=complex)))[0])
    nt, nr = quad.n_theta, quad.n_radial
    bmean, area = _green_components(f_real, laplacian, nt, nr)
    converged = False
    for _ in range(quad.max_doublings):
        bmean2, area2 = _green_components(f_real, laplacian, 2 * nt, 2 * nr)
        if abs(bmean2 - bmean) <= quad.tol * max(1.0, abs(bmean2)) and abs(area2 - area) <= quad.tol * max(
            1.0, abs(area2)
        ):
            bmean, area = bmean2, area2
            nt, nr = 2 * nt, 2 * nr
            converged = True
            break
        bmean, area, nt, nr = bmean2, area2, 2 * nt, 2 * nr
    residual = abs(f0 - bmean + 0.5 * area)
    return GreenReport(
        residual=residual,
        value_at_origin=f0,
        boundary_mean=bmean,
        area_term=0.5 * area,
        converged=converged,
        n_theta=nt,
        n_radial=nr,
    )


def f_p_field(m: HarmonicMap, p: float) -> tuple[Callable, Callable]:
    """Callables (F, Lap F) of the rotated-power field of a map.

    They evaluate the underlying polynomials directly so the closed disk,
    boundary included, is admissible.  Lap F comes from the chain rule:
    4 p (p-1) Re((-i f)^(p-2) h' conj(g')).
    """
    _check_p(p)
    hp = m.h.derivative()
    gp = m.g.derivative()

    def fvals(z: np.ndarray) -> np.ndarray:
        return m.h(z) + np.conj(m.g(z))

    def field(z: np.ndarray) -> np.ndarray:
        return rotated_power_real(fvals(z), p)

    def lap(z: np.ndarray) -> np.ndarray:
        w = -1j * fvals(z)
        if _is_integer(p):
            core = w ** (int(round(p)) - 2)
        else:
            on_cut = (w.imag == 0.0) & (w.real < 0.0)
            if np.any(on_cut):
                raise BranchCutError("map value hits the power branch cut")
            core = w ** (p - 2.0)
        return 4.0 * p * (p - 1.0) * (core * hp(z) * np.conj(gp(z))).real

    return field, lap


@dataclass(frozen=True)
class LaplacianComparison:
    exact_abs: float
    product_bound: float  # 4 p (p-1) |f|^(p-2) |g' h'|
    majorant: float | None  # (K^2-1) c_p (Lap|u|^p + Lap|v|^p), needs K
    skipped: bool
    reason: str


def laplacian_f_p(m: HarmonicMap, p: float, z: complex, K: float | None = None) -> LaplacianComparison:
    """Exact |Lap F_p| at z next to its two closed-form majorants.

    For p < 4 the comparison degenerates at zeros of f (or of u, v for the
    K-majorant): those points are flagged as skipped, the singular factors
    being merely integrable there.
    """
    _check_p(p)
    _check_in_disk(z)
    f = m(z)
    hp = m.h.derivative()(z)
    gp = m.g.derivative()(z)
    u, v = f.real, f.imag
    R = abs(f)
    if p < 4.0 and (R == 0.0 or u == 0.0 or v == 0.0):
        return LaplacianComparison(
            exact_abs=math.nan, product_bound=math.nan, majorant=None, skipped=True,
            reason=f"coordinate zero at {z} with p = {p} < 4",
        )
    w = -1j * f
    if _is_integer(p):
        core = w ** (int(round(p)) - 2)
    else:
        if w.imag == 0.0 and w.real < 0.0:
            raise BranchCutError(f"value {f} maps onto the power branch cut at {z}")
        core = w ** (p - 2.0)
    exact = abs(4.0 * p * (p - 1.0) * (core * hp * gp.conjugate()).real)
    bound = 4.0 * p * (p - 1.0) * R ** (p - 2.0) * abs(gp) * abs(hp)
    majorant = None
    if K is not None:
        if K < 1.0:
            raise ValueError("need K >= 1")
        c_p = lemma_constants(p).c_p
        grad_u = abs(hp + gp)
        grad_v = abs(hp - gp)
        lap_up = p * (p - 1.0) * grad_u**2 * abs(u) ** (p - 2.0)
        lap_vp = p * (p - 1.0) * grad_v**2 * abs(v) ** (p - 2.0)
        majorant = (K * K - 1.0) * c_p * (lap_up + lap_vp)
    return LaplacianComparison(exact_abs=exact, product_bound=bound, majorant=majorant, skipped=False, reason="")


@dataclass(frozen=True)
class MeanValueCheck:
    lhs: float  # circle mean of the sector function of f
    rhs: float  # sector function at f(0)
    holds: bool
    slack: float
    n_theta: int


def meanvalue_hypothesis(
    m: HarmonicMap,
    p: float,
    r: float,
    *,
    n_theta: int | None = None,
    tol: float = 1e-9,
    quad_tol: float = 1e-9,
) -> MeanValueCheck:
    """Sub-mean-value test for the composed sector function on one circle.

    ``tol`` is the slack tolerance of the verdict, ``quad_tol`` the relative
    agreement target of the angular refinement.
    """
    _check_p(p)
    rhs = float(sector_value(p, m.value_at_origin))

    def one(n: int) -> float:
        return float(np.mean(sector_value(p, sample_map_circle(m, r, n))))

    if n_theta is not None:
        lhs, n_used = one(n_theta), n_theta
    else:
        n_used = DEFAULT_N_THETA
        lhs = one(n_used)
        while n_used < N_THETA_CAP:
            nxt = one(2 * n_used)
            n_used *= 2
            if abs(nxt - lhs) <= quad_tol * max(1.0, abs(nxt)):
                lhs = nxt
                break
            lhs = nxt
    slack = lhs - rhs
    return MeanValueCheck(lhs=lhs, rhs=rhs, holds=slack >= -tol * max(1.0, abs(rhs)), slack=slack, n_theta=n_used)
