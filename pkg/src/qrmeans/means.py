"""Integral means M_p(r, f) over circles, Hardy-norm ladders and growth fits.

The circle mean uses the periodic trapezoid rule, which is spectrally
accurate for smooth integrands; the angular grid is doubled until two
successive values agree, so tables are self-validating.  Series are
sampled on circles through an exact coefficient-folding FFT.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .series import AnalyticSeries, DomainError, HarmonicMap, _fold_circle_samples

DEFAULT_N_THETA = 4096
N_THETA_CAP = 2**20
QUAD_TOL = 1e-9
DIVERGENCE_FACTOR = 1.1


def circle_angles(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def sample_series_circle(a: AnalyticSeries, r: float, n: int) -> np.ndarray:
    """Values of the series at the n-th roots of unity scaled by r.

    Exact for polynomials: coefficients are folded modulo n (the grid
    aliases e^(ik*theta) with k mod n exactly) and transformed at once.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("circle radius must lie in [0, 1]")
    if n < 1:
        raise ValueError("need at least one sample")
    return _fold_circle_samples(a.coeffs, float(r), n)


def sample_map_circle(m: HarmonicMap, r: float, n: int) -> np.ndarray:
    """Values of f = h + conj(g) on the circle of radius r < 1."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius {r} is outside [0, 1)")
    return sample_series_circle(m.h, r, n) + np.conj(sample_series_circle(m.g, r, n))


def mean_p(fvals, p: float) -> float:
    """((1/2pi) * integral of |f|^p d(theta))^(1/p) from uniform samples.

    ``p = math.inf`` returns the grid maximum of |f| (a lower bound of the
    true sup over the circle).
    """
    v = np.asarray(fvals)
    if v.size == 0:
        raise ValueError("empty sample grid")
    if v.size < 16:
        raise ValueError("need at least 16 uniform samples")
    a = np.abs(v)
    if p == math.inf:
        return float(a.max())
    if not (isinstance(p, (int, float)) and math.isfinite(p) and p > 0):
        raise ValueError(f"exponent must be positive and finite (or inf), got {p!r}")
    return float(np.mean(a**p) ** (1.0 / p))


@dataclass(frozen=True)
class MeanValue:
    value: float
    n_theta: int
    delta: float  # change at the last grid doubling
    converged: bool


def _refined_circle_mean(sample, reduce_samples, *, n_theta=None, tol=QUAD_TOL, cap=N_THETA_CAP) -> MeanValue:
    # sample(n) -> ndarray of circle values; reduce_samples(vals) -> float
    if n_theta is not None:
        val = reduce_samples(sample(int(n_theta)))
        return MeanValue(value=val, n_theta=int(n_theta), delta=0.0, converged=True)
    n = DEFAULT_N_THETA
    prev = reduce_samples(sample(n))
    while n < cap:
        n *= 2
        cur = reduce_samples(sample(n))
        delta = abs(cur - prev)
        if delta <= tol * max(1.0, abs(cur)):
            return MeanValue(value=cur, n_theta=n, delta=delta, converged=True)
        prev = cur
    return MeanValue(value=prev, n_theta=n, delta=math.inf, converged=False)


def mean_p_map(
    m: HarmonicMap,
    r: float,
    p: float,
    *,
    n_theta: int | None = None,
    tol: float = QUAD_TOL,
    cap: int = N_THETA_CAP,
) -> MeanValue:
    """M_p(r, f) with automatic angular refinement when n_theta is None."""
    return _refined_circle_mean(
        lambda n: sample_map_circle(m, r, n), lambda v: mean_p(v, p), n_theta=n_theta, tol=tol, cap=cap
    )


@dataclass
class MeansTable:
    """Sampled M_p(r, .) values over a radius/exponent grid."""

    radii: tuple
    exponents: tuple
    values: np.ndarray  # shape (len(radii), len(exponents))
    n_theta: np.ndarray  # same shape, ints
    target: str = "map"

    def column(self, p: float) -> np.ndarray:
        idx = self.exponents.index(p)
        return self.values[:, idx]

    def monotone_ok(self, p: float, tol: float = 1e-12) -> bool:
        col = self.column(p)
        return bool(np.all(np.diff(col) >= -tol * np.maximum(1.0, col[1:])))

    def rows(self):
        for i, r in enumerate(self.radii):
            for j, p in enumerate(self.exponents):
                yield r, p, float(self.values[i, j]), int(self.n_theta[i, j])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["r", "p", "value", "n_theta"])
        for r, p, v, n in self.rows():
            w.writerow([repr(r), repr(p), repr(v), n])
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "radii": [float(r) for r in self.radii],
            "exponents": [float(p) for p in self.exponents],
            "values": [[float(v) for v in row] for row in self.values],
            "n_theta": [[int(n) for n in row] for row in self.n_theta],
        }


def means_table(
    m: HarmonicMap,
    radii,
    exponents,
    *,
    n_theta: int | None = None,
    tol: float = QUAD_TOL,
    target: str = "map",
) -> MeansTable:
    radii = tuple(float(r) for r in radii)
    exponents = tuple(exponents)
    vals = np.zeros((len(radii), len(exponents)))
    ns = np.zeros((len(radii), len(exponents)), dtype=int)
    for i, r in enumerate(radii):
        for j, p in enumerate(exponents):
            mv = mean_p_map(m, r, p, n_theta=n_theta, tol=tol)
            vals[i, j] = mv.value
            ns[i, j] = mv.n_theta
    return MeansTable(radii=radii, exponents=exponents, values=vals, n_theta=ns, target=target)


@dataclass(frozen=True)
class HardyNorm:
    value: float
    argmax_r: float
    divergence_suspected: bool
    means: tuple


def hardy_norm(
    m: HarmonicMap,
    p: float,
    radii,
    *,
    n_theta: int | None = None,
    tol: float = QUAD_TOL,
    divergence_factor: float = DIVERGENCE_FACTOR,
) -> HardyNorm:
    """sup of M_p(r, f) over the given radius grid.

    Divergence is suspected when the mean still grows by more than
    ``divergence_factor`` between the two outermost radii.
    """
    radii = [float(r) for r in radii]
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])) or radii[-1] >= 1.0:
        raise ValueError("radii must be nonempty, strictly increasing and < 1")
    means = [mean_p_map(m, r, p, n_theta=n_theta, tol=tol).value for r in radii]
    k = int(np.argmax(means))
    divergent = len(means) >= 2 and means[-1] > divergence_factor * means[-2] > 0
    return HardyNorm(value=means[k], argmax_r=radii[k], divergence_suspected=divergent, means=tuple(means))


def zygmund_integral(m: HarmonicMap, r: float, n_theta: int | None = None, *, tol: float = QUAD_TOL) -> float:
    """integral over [0, 2pi) of |u| log+ |u| d(theta), u = Re f."""

    def reduce_samples(vals):
        u = np.abs(np.real(vals))
        with np.errstate(divide="ignore"):
            lg = np.where(u > 1.0, np.log(u, where=u > 0, out=np.zeros_like(u)), 0.0)
        return float(2.0 * np.pi * np.mean(u * lg))

    return _refined_circle_mean(
        lambda n: sample_map_circle(m, r, n), reduce_samples, n_theta=n_theta, tol=tol
    ).value


def radius_ladder(k_max: int = 4, k_min: int = 1) -> tuple:
    """Radii 1 - 10^-k approaching the boundary."""
    return tuple(1.0 - 10.0 ** (-k) for k in range(k_min, k_max + 1))


def increment_ratio(ladder_values) -> float:
    """Ratio of the last two increments of a ladder of power means.

    On a decade-spaced ladder a mean behaving like C + c (1-r)^(-s) has
    increments scaling by 10^s per rung: a ratio below 1 means the ladder
    is settling (bounded limit), above 1 it is accelerating (divergence),
    and 1 is the logarithmic borderline.  Vanishing increments count as 0.
    """
    a = np.asarray(ladder_values, dtype=float)
    if a.size < 3:
        raise ValueError("need at least three ladder values")
    d = np.diff(a)
    tiny = 1e-6 * max(1.0, abs(a[-1]))
    if d[-1] <= tiny:
        return 0.0
    if d[-2] <= tiny:
        return math.inf
    return float(d[-1] / d[-2])


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    max_residual: float
    degenerate: bool
    model: str


def growth_exponent(radii, values, model: str) -> GrowthFit:
    """Least-squares slope of log M against the chosen boundary model.

    model "log_power":  x = log log(1/(1-r))   (slope estimates the power
    of the logarithm); model "inv_power": x = log(1/(1-r)) (slope estimates
    the power of 1/(1-r)).
    """
    r = np.asarray(radii, dtype=float)
    v = np.asarray(values, dtype=float)
    if r.size < 4:
        raise ValueError("need at least 4 radii for a growth fit")
    if np.any(v < 0):
        raise ValueError("means must be nonnegative")
    if np.ptp(v) <= 1e-15 * max(1.0, float(np.max(np.abs(v)))):
        return GrowthFit(slope=0.0, intercept=float(np.log(max(v[0], 1e-300))), max_residual=0.0, degenerate=True, model=model)
    big = np.log(1.0 / (1.0 - r))
    if model == "log_power":
        if np.any(big <= 0):
            raise ValueError("log_power model requires r > 1 - 1/e")
        x = np.log(big)
    elif model == "inv_power":
        x = big
    else:
        raise ValueError(f"unknown growth model {model!r}")
    y = np.log(np.maximum(v, 1e-300))
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    return GrowthFit(slope=float(slope), intercept=float(intercept), max_residual=resid, degenerate=False, model=model)


def table_growth_exponent(table: MeansTable, model: str, p: float | None = None) -> GrowthFit:
    if p is None:
        if len(table.exponents) != 1:
            raise ValueError("table has several exponents; pass p explicitly")
        p = table.exponents[0]
    return growth_exponent(table.radii, table.column(p), model)
