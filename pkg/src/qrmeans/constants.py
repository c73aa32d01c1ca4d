"""Closed-form constant catalogue for the conjugate-function inequalities.

All entries are elementary trigonometric expressions evaluated in double
precision:

  p*            = max{p, p/(p-1)}
  pichorides    = cot(pi/(2 p*))
  verbitsky     : 1/cos(pi/(2 p*)) <= |f| side, 1/sin(pi/(2 p*)) upper bound
  a_p = cot^p(pi/2p)          b_p = 2 cos^p(pi/2p) csc(pi/p)
  m_p = csc^p(pi/2p)          n_p = cot(pi/2p)
  c_p = 1 on (2, 4],  2^((p-4)/2) on [4, inf)   (branches agree at p = 4)

  C(K,p)^p = m_p / (1 - (K^2-1) c_p n_p 2^(1-p/2)),  valid while the
             subtracted product stays below 1
  c(K,p)   = ((a_p + (K^2-1) b_p c_p) / (1 - (K^2-1) b_p c_p))^(1/p),
             valid while (K^2-1) b_p c_p < 1

Invalidity is an explicit tagged state (None / "invalid"), never NaN.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


def pstar(p: float) -> float:
    """Self-dual exponent index max{p, p/(p-1)} for p > 1."""
    if not p > 1.0:
        raise ValueError("p must exceed 1")
    return max(p, p / (p - 1.0))


def classical_constants(p: float) -> tuple[float, float, float]:
    """(cot, 1/sin, 1/cos) at pi/(2 p*): the sharp conjugate-function,
    two-sided modulus bounds for p > 1."""
    ps = pstar(p)
    ang = math.pi / (2.0 * ps)
    return (math.cos(ang) / math.sin(ang), 1.0 / math.sin(ang), 1.0 / math.cos(ang))


class LemmaConstants(NamedTuple):
    a_p: float
    b_p: float
    m_p: float
    n_p: float
    c_p: float


def lemma_constants(p: float) -> LemmaConstants:
    """Sector-inequality constants for p >= 2.

    c_p at exactly p = 2 is defined as 1 by right-continuity of the
    (2, 4] branch.
    """
    if not p >= 2.0:
        raise ValueError("p must be at least 2")
    ang = math.pi / (2.0 * p)
    cot = math.cos(ang) / math.sin(ang)
    a_p = cot**p
    b_p = 2.0 * math.cos(ang) ** p / math.sin(math.pi / p)
    m_p = (1.0 / math.sin(ang)) ** p
    n_p = cot
    c_p = 1.0 if p <= 4.0 else 2.0 ** ((p - 4.0) / 2.0)
    return LemmaConstants(a_p=a_p, b_p=b_p, m_p=m_p, n_p=n_p, c_p=c_p)


class TheoremConstants(NamedTuple):
    C_Kp: float | None
    c_Kp: float | None
    f_bound_valid: bool
    v_bound_valid: bool


def theorem_constants(K: float, p: float) -> TheoremConstants:
    """Norm-inequality constants at (K, p), p >= 2, K >= 1.

    Each entry is None when its validity condition fails; the conditions
    are part of the statement, so they are returned alongside.
    """
    if not K >= 1.0:
        raise ValueError("K must be at least 1")
    lc = lemma_constants(p)
    excess = K * K - 1.0
    f_term = excess * lc.c_p * lc.n_p * 2.0 ** (1.0 - p / 2.0)
    v_term = excess * lc.b_p * lc.c_p
    f_valid = f_term < 1.0
    v_valid = v_term < 1.0
    C_Kp = (lc.m_p / (1.0 - f_term)) ** (1.0 / p) if f_valid else None
    c_Kp = ((lc.a_p + v_term) / (1.0 - v_term)) ** (1.0 / p) if v_valid else None
    return TheoremConstants(C_Kp=C_Kp, c_Kp=c_Kp, f_bound_valid=f_valid, v_bound_valid=v_valid)


def f_bound_k_threshold(p: float, tol: float = 1e-10) -> float:
    """Largest K keeping the |f|-side constant valid, located by bisection."""
    lo, hi = 1.0, 2.0
    while not theorem_constants(hi, p).f_bound_valid is False:
        lo, hi = hi, hi * 2.0
        if hi > 1e8:
            raise ValueError("no invalidity threshold below K = 1e8")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if theorem_constants(mid, p).f_bound_valid:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def splitting_factor(p: float) -> float:
    """Constant in the square-function splitting bound.

    2^(max{0, p/2-1}/p + 1/2) for p >= 1 and 2^(1/p - 1/2) for p < 1
    (the two power-mean regimes; they agree at p = 1).
    """
    if p <= 0:
        raise ValueError("exponent must be positive")
    if p >= 1.0:
        return 2.0 ** (max(0.0, p / 2.0 - 1.0) / p + 0.5)
    return 2.0 ** (1.0 / p - 0.5)


def empirical_chain_constants(p: float, K: float, c_emp: float) -> tuple[float, float]:
    """Finite bracket entries (C1, C2) for the two-constant mean inequality.

    The square-function equivalence constant has no closed form; given an
    empirical bracket value ``c_emp`` for it, the chain yields
    C1 = B(p) c_emp^2 K / sin(pi/(2 p*)) and C2 = B(p) c_emp with B the
    splitting factor.  These are regression brackets, not certified bounds.
    """
    b = splitting_factor(p)
    return (b * c_emp * c_emp * K / math.sin(math.pi / (2.0 * pstar(p))), b * c_emp)


@dataclass(frozen=True)
class ConstantSet:
    """Full constant catalogue at one (p, K) with validity flags."""

    p: float
    K: float
    pstar: float
    pichorides: float
    verbitsky_upper: float
    verbitsky_lower: float
    a_p: float | None
    b_p: float | None
    c_p: float | None
    m_p: float | None
    n_p: float | None
    C_Kp: float | None
    c_Kp: float | None
    f_bound_valid: bool
    v_bound_valid: bool

    def to_json_dict(self) -> dict:
        def tag(x):
            return "invalid" if x is None else x

        return {
            "p": self.p,
            "K": self.K,
            "pstar": self.pstar,
            "pichorides": self.pichorides,
            "verbitsky_upper": self.verbitsky_upper,
            "verbitsky_lower": self.verbitsky_lower,
            "a_p": tag(self.a_p),
            "b_p": tag(self.b_p),
            "c_p": tag(self.c_p),
            "m_p": tag(self.m_p),
            "n_p": tag(self.n_p),
            "C_Kp": tag(self.C_Kp),
            "c_Kp": tag(self.c_Kp),
            "validity": {"f_bound": self.f_bound_valid, "v_bound": self.v_bound_valid},
        }


def build_constant_set(p: float, K: float = 1.0) -> ConstantSet:
    """Assemble the catalogue; entries outside their exponent range are tagged."""
    pich, vu, vl = classical_constants(p)
    if p >= 2.0:
        lc = lemma_constants(p)
        tc = theorem_constants(K, p)
        return ConstantSet(
            p=p, K=K, pstar=pstar(p), pichorides=pich, verbitsky_upper=vu, verbitsky_lower=vl,
            a_p=lc.a_p, b_p=lc.b_p, c_p=lc.c_p, m_p=lc.m_p, n_p=lc.n_p,
            C_Kp=tc.C_Kp, c_Kp=tc.c_Kp,
            f_bound_valid=tc.f_bound_valid, v_bound_valid=tc.v_bound_valid,
        )
    return ConstantSet(
        p=p, K=K, pstar=pstar(p), pichorides=pich, verbitsky_upper=vu, verbitsky_lower=vl,
        a_p=None, b_p=None, c_p=None, m_p=None, n_p=None, C_Kp=None, c_Kp=None,
        f_bound_valid=False, v_bound_valid=False,
    )
