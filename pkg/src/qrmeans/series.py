"""Truncated power series and planar harmonic maps on the unit disk.

Analytic atoms are finite polynomials.  Named generators such as
(1 - z)^(-alpha) are materialized up to a degree fixed by an explicit
tail bound, so every downstream quantity is a finite computation in
double precision.  A harmonic map is stored as a pair (h, g) of such
polynomials with f = h + conj(g) and g(0) = 0.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

GENERATOR_DEGREE_CAP = 200_000
GENERATOR_TAIL_TOL = 1e-10
GENERATOR_R_MAX = 0.999

# A truncated generator is trusted at radius r only while degree*(1-r)
# stays above this many e-foldings (residual factor exp(-20) ~ 2e-9) AND
# the truncation ripple |c_N| r^N stays small against the minimum modulus
# of the function on the circle (differentiated generators have huge c_N,
# so the folds cut alone is not enough).
RELIABLE_TAIL_FOLDS = 20.0
RIPPLE_TOL = 1e-3


class DomainError(ValueError):
    """Evaluation point outside the open unit disk."""


def _fold_circle_samples(coeffs: np.ndarray, r: float, n: int) -> np.ndarray:
    """Exact values of the polynomial at the n-th roots of unity scaled by r.

    The grid aliases e^(ik theta) with k mod n exactly, so coefficients are
    folded modulo n and transformed in one FFT.
    """
    k = np.arange(coeffs.size)
    b = coeffs * np.power(float(r), k)
    if b.size <= n:
        folded = np.zeros(n, dtype=complex)
        folded[: b.size] = b
    else:
        pad = (-b.size) % n
        folded = np.concatenate((b, np.zeros(pad, dtype=complex))).reshape(-1, n).sum(axis=0)
    return np.fft.ifft(folded) * n


@dataclass(frozen=True)
class GeneratorTag:
    """Marks a series as the truncation of an infinite generator."""

    kind: str
    alpha: float


class AnalyticSeries:
    """Polynomial a_0 + a_1 z + ... + a_N z^N with complex coefficients."""

    __slots__ = ("coeffs", "origin")

    def __init__(self, coeffs, origin: GeneratorTag | None = None):
        arr = np.array(coeffs, dtype=complex, copy=True)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("need a one-dimensional, nonempty coefficient list")
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise ValueError("coefficients must be finite")
        arr.setflags(write=False)
        self.coeffs = arr
        self.origin = origin

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        """Evaluate at a point or an ndarray of points (Horner)."""
        if np.isscalar(z) or getattr(z, "shape", None) == ():
            acc = 0j
            zc = complex(z)
            for a in self.coeffs[::-1].tolist():
                acc = acc * zc + a
            return acc
        zz = np.asarray(z, dtype=complex)
        out = np.full(zz.shape, self.coeffs[-1], dtype=complex)
        for a in self.coeffs[-2::-1]:
            out *= zz
            out += a
        return out

    def _shift_origin(self, delta: float) -> GeneratorTag | None:
        if self.origin is None:
            return None
        return GeneratorTag(self.origin.kind, self.origin.alpha + delta)

    def derivative(self) -> "AnalyticSeries":
        if self.coeffs.size == 1:
            return AnalyticSeries([0j], origin=self._shift_origin(1.0))
        k = np.arange(1, self.coeffs.size)
        return AnalyticSeries(self.coeffs[1:] * k, origin=self._shift_origin(1.0))

    def antiderivative(self) -> "AnalyticSeries":
        """Termwise primitive with value 0 at the origin."""
        k = np.arange(1, self.coeffs.size + 1)
        return AnalyticSeries(np.concatenate(([0j], self.coeffs / k)), origin=self._shift_origin(-1.0))

    def conj_coefficients(self) -> "AnalyticSeries":
        """Series with conjugated coefficients: z -> conj(self(conj(z)))."""
        return AnalyticSeries(np.conj(self.coeffs), origin=self.origin)

    def with_constant(self, a0: complex) -> "AnalyticSeries":
        arr = self.coeffs.copy()
        arr[0] = a0
        return AnalyticSeries(arr, origin=self.origin)

    def _combine_origin(self, other: "AnalyticSeries") -> GeneratorTag | None:
        if self.origin is not None and other.origin is None:
            return self.origin
        if self.origin is None and other.origin is not None:
            return other.origin
        if self.origin == other.origin:
            return self.origin
        return None

    def __add__(self, other: "AnalyticSeries") -> "AnalyticSeries":
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=complex)
        out[: self.coeffs.size] = self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return AnalyticSeries(out, origin=self._combine_origin(other))

    def __sub__(self, other: "AnalyticSeries") -> "AnalyticSeries":
        return self + (-other)

    def __neg__(self) -> "AnalyticSeries":
        return AnalyticSeries(-self.coeffs, origin=self.origin)

    def __mul__(self, other):
        if isinstance(other, AnalyticSeries):
            return AnalyticSeries(
                np.convolve(self.coeffs, other.coeffs), origin=self._combine_origin(other)
            )
        return AnalyticSeries(self.coeffs * complex(other), origin=self.origin)

    def __rmul__(self, other):
        return self.__mul__(other)

    def reliable_radius(self) -> float:
        """Folds-based upper bound on the trustworthy radius (necessary,
        not sufficient: see reliable_at)."""
        if self.origin is None:
            return 1.0
        return max(0.0, 1.0 - RELIABLE_TAIL_FOLDS / max(self.degree, 1))

    def reliable_at(self, r: float) -> bool:
        """Whether circle samples at radius r are trustworthy.

        Requires both enough tail folds and a truncation ripple that is
        small against the median modulus on the circle (the median ignores
        the boundary peak and isolated near-zeros).
        """
        if self.origin is None:
            return True
        r = float(r)
        if r > self.reliable_radius() + 1e-15:
            return False
        ripple = abs(complex(self.coeffs[-1])) * r**self.degree / 2.0
        scale = float(np.median(np.abs(_fold_circle_samples(self.coeffs, r, 64))))
        return ripple <= RIPPLE_TOL * max(scale, 1e-300)

    def to_spec(self) -> dict:
        return {"coeffs": [[float(a.real), float(a.imag)] for a in self.coeffs]}

    def __repr__(self) -> str:
        return f"AnalyticSeries(degree={self.degree})"


def inv_power_series(
    alpha: float,
    rot: float = 0.0,
    n: int | None = None,
    *,
    r_max: float = GENERATOR_R_MAX,
    tail_tol: float = GENERATOR_TAIL_TOL,
    degree_cap: int = GENERATOR_DEGREE_CAP,
) -> AnalyticSeries:
    """Truncation of e^(i*rot) * (1 - z)^(-alpha).

    Coefficients follow the binomial recurrence c_{k+1} = c_k (k+alpha)/(k+1),
    which is stable and needs no branch-cut evaluation inside the disk.  With
    no explicit degree ``n`` the truncation stops once a geometric bound on
    the tail at ``r_max`` drops below ``tail_tol``, or at ``degree_cap``.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if not 0.0 < r_max < 1.0:
        raise ValueError("r_max must lie in (0, 1)")
    tag = GeneratorTag("inv_power", float(alpha))
    if n is not None:
        if n < 0:
            raise ValueError("degree must be nonnegative")
        k = np.arange(n, dtype=float)
        c = np.concatenate(([1.0], np.cumprod((k + alpha) / (k + 1.0))))
    else:
        blocks = [np.array([1.0])]
        c_last, deg = 1.0, 0
        log_tol = math.log(tail_tol)
        while deg < degree_cap:
            m = min(4096, degree_cap - deg)
            kk = np.arange(deg, deg + m, dtype=float)
            block = c_last * np.cumprod((kk + alpha) / (kk + 1.0))
            blocks.append(block)
            c_last = float(block[-1])
            deg += m
            rho = r_max * ((deg + alpha) / (deg + 1.0) if alpha >= 1.0 else 1.0)
            if rho < 1.0:
                log_tail = math.log(c_last) + deg * math.log(r_max) + math.log(rho / (1.0 - rho))
                if log_tail < log_tol:
                    break
        c = np.concatenate(blocks)
    return AnalyticSeries(c * cmath.exp(1j * rot), origin=tag)


def series_from_spec(spec: dict) -> AnalyticSeries:
    """Build a series from its JSON description.

    Accepted forms: {"coeffs": [[re, im], ...]} or
    {"generator": "inv_power", "alpha": a, "rot": phi, "N": n}.
    """
    if "coeffs" in spec:
        return AnalyticSeries([complex(re, im) for re, im in spec["coeffs"]])
    if spec.get("generator") == "inv_power":
        return inv_power_series(float(spec["alpha"]), rot=float(spec.get("rot", 0.0)), n=spec.get("N"))
    raise ValueError("series spec needs 'coeffs' or a known 'generator'")


@dataclass(frozen=True)
class PointDiff:
    """Wirtinger data of a harmonic map at one point."""

    fz: complex
    fzbar: complex
    stretch_max: float  # |fz| + |fzbar|
    stretch_min: float  # ||fz| - |fzbar||
    jacobian: float  # |fz|^2 - |fzbar|^2

    @classmethod
    def from_wirtinger(cls, fz: complex, fzbar: complex) -> "PointDiff":
        a, b = abs(fz), abs(fzbar)
        return cls(fz=fz, fzbar=fzbar, stretch_max=a + b, stretch_min=abs(a - b), jacobian=a * a - b * b)


class HarmonicMap:
    """f = h + conj(g) with h, g analytic polynomials and g(0) = 0."""

    __slots__ = ("h", "g")

    def __init__(self, h: AnalyticSeries, g: AnalyticSeries | None = None):
        if g is None:
            g = AnalyticSeries([0j])
        if complex(g.coeffs[0]) != 0:
            raise ValueError("g(0) must vanish; use HarmonicMap.from_unnormalized")
        self.h = h
        self.g = g

    @classmethod
    def from_unnormalized(cls, h: AnalyticSeries, g: AnalyticSeries) -> "HarmonicMap":
        """Move the constant of g into h (f is unchanged)."""
        c = complex(g.coeffs[0])
        if c == 0:
            return cls(h, g)
        h2 = h.with_constant(complex(h.coeffs[0]) + c.conjugate())
        return cls(h2, g.with_constant(0j))

    @property
    def value_at_origin(self) -> complex:
        return complex(self.h.coeffs[0])

    def is_analytic(self) -> bool:
        return bool(np.all(self.g.coeffs == 0))

    def reliable_radius(self) -> float:
        return min(self.h.reliable_radius(), self.g.reliable_radius())

    def reliable_at(self, r: float) -> bool:
        """Trustworthiness of circle samples of f = h + conj(g) at radius r:
        the combined truncation ripple must stay small against the median
        modulus of the sampled map."""
        if self.h.origin is None and self.g.origin is None:
            return True
        r = float(r)
        for s in (self.h, self.g):
            if s.origin is not None and r > s.reliable_radius() + 1e-15:
                return False
        ripple = (
            abs(complex(self.h.coeffs[-1])) * r**self.h.degree
            + abs(complex(self.g.coeffs[-1])) * r**self.g.degree
        ) / 2.0
        vals = _fold_circle_samples(self.h.coeffs, r, 64) + np.conj(_fold_circle_samples(self.g.coeffs, r, 64))
        scale = float(np.median(np.abs(vals)))
        return ripple <= RIPPLE_TOL * max(scale, 1e-300)

    def __call__(self, z):
        return eval_map(self, z)

    def to_spec(self) -> dict:
        return {"h": self.h.to_spec(), "g": self.g.to_spec()}

    def __repr__(self) -> str:
        return f"HarmonicMap(h_degree={self.h.degree}, g_degree={self.g.degree})"


def map_from_spec(spec: dict) -> HarmonicMap:
    h = series_from_spec(spec["h"])
    g = series_from_spec(spec["g"]) if spec.get("g") else AnalyticSeries([0j])
    return HarmonicMap(h, g)


def _check_in_disk(z) -> None:
    r = float(np.max(np.abs(np.asarray(z))))
    if not r < 1.0:
        raise DomainError(f"|z| = {r} is outside the open unit disk")


def eval_map(m: HarmonicMap, z):
    """f(z) = h(z) + conj(g(z)) for |z| < 1."""
    _check_in_disk(z)
    hv = m.h(z)
    gv = m.g(z)
    if isinstance(hv, complex):
        return hv + gv.conjugate()
    return hv + np.conj(gv)


def diff_at(m: HarmonicMap, z: complex) -> PointDiff:
    """Wirtinger derivatives f_z = h'(z), f_zbar = conj(g'(z)) and the
    induced stretch/Jacobian data."""
    _check_in_disk(z)
    fz = m.h.derivative()(z)
    fzbar = m.g.derivative()(z).conjugate()
    return PointDiff.from_wirtinger(fz, fzbar)


def directional_derivative(m: HarmonicMap, z: complex, theta: float) -> complex:
    """Derivative of f at z in the direction e^(i*theta); its modulus lies
    between the two stretches of diff_at."""
    d = diff_at(m, z)
    return d.fz * cmath.exp(1j * theta) + d.fzbar * cmath.exp(-1j * theta)
