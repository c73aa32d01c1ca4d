"""Acceptance suite: every criterion at its stated tolerance, one line each.

Run with `pytest tests/test_acceptance.py -s` to see the verdict lines.
"""
import cmath
import math
import time

import numpy as np
import pytest

from qrmeans.constants import (
    classical_constants,
    f_bound_k_threshold,
    lemma_constants,
    theorem_constants,
)
from qrmeans.corpus import analytic_corpus
from qrmeans.gallery import sharpness_experiment_derivative, sharpness_experiment_growth
from qrmeans.harness import ExperimentConfig, render_report, run_experiment
from qrmeans.means import mean_p, sample_map_circle
from qrmeans.qr import GridSpec, check_qr, min_kprime
from qrmeans.sector import GreenQuad, f_p_field, green_identity_residual, lemma_check, sector_value
from qrmeans.series import AnalyticSeries, HarmonicMap


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"[acceptance] criterion {num:2d}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def test_criterion_01_lemma_sweep():
    t0 = time.perf_counter()
    worst = -math.inf
    for p in (2.0, 2.5, 3.0, 4.0, 6.0):
        for r in (0.5, 1.0, 2.0):
            bound = 1e-11 * max(1.0, r**p)
            for which in (1, 2, 3, 4):
                sweep = lemma_check(p, which, r=r, n_angles=10_000)
                worst = max(worst, sweep.max_deficit / bound)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1.0 and elapsed < 10.0
    _verdict(1, ok, f"worst deficit at {worst:.2e} of tolerance, {elapsed:.2f}s")


def test_criterion_02_equality_witnesses():
    lc = lemma_constants(2.0)
    z1 = cmath.exp(1j * math.pi / 4)
    slack1 = abs(z1.imag) ** 2 - (lc.a_p * abs(z1.real) ** 2 - lc.b_p * sector_value(2.0, z1))
    z3 = 1j
    slack3 = abs(z3) ** 2 - (lc.m_p * abs(z3.real) ** 2 - lc.n_p * sector_value(2.0, z3))
    ok = abs(slack1) <= 1e-12 and abs(slack3) <= 1e-12
    _verdict(2, ok, f"|slack| = {abs(slack1):.2e}, {abs(slack3):.2e}")


def test_criterion_03_constant_catalogue():
    t0 = time.perf_counter()
    worst_rel = 0.0
    for p in (2.0, 3.0, 4.0, 6.0, 8.0):
        lc = lemma_constants(p)
        tc = theorem_constants(1.0, p)
        worst_rel = max(worst_rel, abs(tc.C_Kp**p - lc.m_p) / lc.m_p)
        worst_rel = max(worst_rel, abs(tc.c_Kp**p - lc.a_p) / lc.a_p)
        near = theorem_constants(1.0 + 1e-8, p)
        worst_lim = max(
            abs(near.C_Kp - 1.0 / math.sin(math.pi / (2 * p))) / near.C_Kp,
            abs(near.c_Kp - 1.0 / math.tan(math.pi / (2 * p))) / near.c_Kp,
        )
    threshold = f_bound_k_threshold(2.0)
    elapsed = time.perf_counter() - t0
    ok = (
        worst_rel <= 1e-14
        and worst_lim <= 1e-6
        and abs(threshold - math.sqrt(2.0)) <= 1e-10
        and elapsed < 1.0
    )
    _verdict(3, ok, f"identity rel {worst_rel:.1e}, limit rel {worst_lim:.1e}, threshold err {abs(threshold - math.sqrt(2.0)):.1e}, {elapsed:.2f}s")


def test_criterion_04_parseval_p2():
    t0 = time.perf_counter()
    maps = analytic_corpus(50, seed=20250904, degree=16)
    worst = 0.0
    all_dominated = True
    r = 0.9999
    for m in maps:
        vals = sample_map_circle(m, r, 4096)
        mu2 = mean_p(np.real(vals), 2.0) ** 2
        mv2 = mean_p(np.imag(vals), 2.0) ** 2
        u0 = m.value_at_origin.real
        worst = max(worst, abs(mv2 - (mu2 - u0 * u0)) / max(mu2, 1e-300))
        all_dominated = all_dominated and mv2 <= mu2 + 1e-12
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and all_dominated and elapsed < 5.0
    _verdict(4, ok, f"worst identity rel {worst:.1e} over 50 maps, {elapsed:.2f}s")


def test_criterion_05_p4_calibrations():
    t0 = time.perf_counter()
    cot8 = classical_constants(4.0)[0]
    csc8 = classical_constants(4.0)[1]
    r = 0.9999
    worst_v = worst_f = -math.inf
    for m in analytic_corpus(50, seed=20250905, degree=16):
        vals = sample_map_circle(m, r, 4096)
        mu = mean_p(np.real(vals), 4.0)
        mv = mean_p(np.imag(vals), 4.0)
        mf = mean_p(vals, 4.0)
        worst_v = max(worst_v, mv - (cot8 * mu + 1e-8))
        worst_f = max(worst_f, mf - (csc8 * mu + 1e-8))
    # the sharp-constant route with its origin-condition normalization
    cfg = ExperimentConfig(theorem_id="riesz_sharp", p=(4.0,), K=1.0, corpus_size=20, seed=20250906)
    verdict = run_experiment(cfg)
    elapsed = time.perf_counter() - t0
    ok = worst_v <= 0.0 and worst_f <= 0.0 and verdict.passed and verdict.n_skipped() == 0 and elapsed < 10.0
    _verdict(5, ok, f"max excess v {worst_v:.1e}, f {worst_f:.1e}, gated run passed={verdict.passed}, {elapsed:.2f}s")


def test_criterion_06_green_identity():
    t0 = time.perf_counter()
    quad = GreenQuad(n_theta=1024, n_radial=512)
    rep1 = green_identity_residual(
        lambda z: np.abs(z) ** 2, lambda z: np.full(z.shape, 4.0), quad
    )
    rep2 = green_identity_residual(lambda z: np.real(z**3), lambda z: np.zeros(z.shape), quad)
    m = HarmonicMap(AnalyticSeries([0, 1]), AnalyticSeries([0, 0, 0.3]))
    field, lap = f_p_field(m, 2.0)
    rep3 = green_identity_residual(field, lap, quad)
    closed_form_ok = (
        abs(rep1.value_at_origin) <= 1e-12
        and abs(rep1.boundary_mean - 1.0) <= 1e-10
        and abs(rep1.area_term - 1.0) <= 1e-6
    )
    elapsed = time.perf_counter() - t0
    ok = max(rep1.residual, rep2.residual, rep3.residual) < 1e-6 and closed_form_ok and elapsed < 20.0
    _verdict(6, ok, f"residuals {rep1.residual:.1e}/{rep2.residual:.1e}/{rep3.residual:.1e}, {elapsed:.2f}s")


def test_criterion_07_qr_envelope():
    m = HarmonicMap(AnalyticSeries([0, 1]), AnalyticSeries([0, 0, 0.5]))
    got = min_kprime(m, 1.0, GridSpec(r_max=0.9999))
    env_ok = abs(got - 4.0) <= 1e-3
    eq_ok = True
    for k in (0.1, 0.5, 0.9):
        shear = HarmonicMap(AnalyticSeries([0, 1]), AnalyticSeries([0, k]))
        prof = check_qr(shear, (1 + k) / (1 - k), 0.0)
        eq_ok = eq_ok and prof.max_violation <= 1e-10 and prof.certified()
    _verdict(7, env_ok and eq_ok, f"envelope {got:.6f}, equality family certified={eq_ok}")


def test_criterion_08_two_constant_chain():
    t0 = time.perf_counter()
    details = []
    ok = True
    for kprime in (0.0, 0.5):
        cfg = ExperimentConfig(
            theorem_id="riesz_kk", p=(1.5, 2.0, 3.0), K=1.2, kprime=kprime,
            corpus_size=20, seed=20250908, degree=12,
        )
        verdict = run_experiment(cfg)
        ok = ok and verdict.passed and verdict.n_skipped() == 0
        worst_pair = max(r.slacks["pointwise_pair_deficit"] for r in verdict.records)
        worst_split = min(
            r.slacks[f"split_slack_p{p:g}"] for r in verdict.records for p in (1.5, 2.0, 3.0)
        )
        details.append(f"K'={kprime}: pair {worst_pair:.1e}, split slack {worst_split:.2f}")
        ok = ok and worst_pair <= 1e-9 and worst_split >= -1e-9
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60.0
    _verdict(8, ok, "; ".join(details) + f", {elapsed:.1f}s")


def test_criterion_09_growth_sharpness():
    t0 = time.perf_counter()
    ok = True
    worst = ""
    for j in (0, 1):
        for K in (1.0, 2.0):
            rep = sharpness_experiment_growth(j, K)
            ok = ok and rep.passed
            if not rep.passed:
                worst = f" first failure at (j={j}, K={K})"
    control = sharpness_experiment_growth(0, 1.0, control=True)
    control_ok = (not control.passed) and any(x < control.window[0] for x in control.ratios)
    elapsed = time.perf_counter() - t0
    ok = ok and control_ok and elapsed < 60.0
    _verdict(9, ok, f"4 witness runs in-window, control below floor={control_ok}{worst}, {elapsed:.1f}s")


def test_criterion_10_derivative_critical_exponent():
    t0 = time.perf_counter()
    rep = sharpness_experiment_derivative(0.5, 0.05, 1.0, deep=True)
    elapsed = time.perf_counter() - t0
    ok = (
        rep.q_critical is not None
        and 0.9 <= rep.q_critical <= 1.1
        and rep.gradient_ladder_bounded
        and elapsed < 120.0
    )
    _verdict(10, ok, f"q_critical {rep.q_critical}, bracket {rep.bracket}, {elapsed:.1f}s")


def test_criterion_11_submean_hypothesis():
    t0 = time.perf_counter()
    cfg = ExperimentConfig(theorem_id="prop2", p=(2.0, 3.0, 4.0), corpus_size=20, seed=20250911, degree=16)
    verdict = run_experiment(cfg)
    worst = min(
        r.slacks[f"meanvalue_slack_p{p:g}"] for r in verdict.records for p in (2.0, 3.0, 4.0)
    )
    elapsed = time.perf_counter() - t0
    ok = verdict.passed and worst >= -1e-9 and elapsed < 30.0
    _verdict(11, ok, f"worst sub-mean slack {worst:.1e}, conclusions passed={verdict.passed}, {elapsed:.1f}s")


def test_criterion_12_determinism():
    cfg = ExperimentConfig(theorem_id="prop2", p=(2.0,), corpus_size=3, seed=20250912, degree=8)
    first = render_report(run_experiment(cfg), "json")
    second = render_report(run_experiment(cfg), "json")
    cfg2 = ExperimentConfig(theorem_id="riesz_kk", p=(2.0,), K=1.2, corpus_size=3, seed=20250912, degree=8)
    third = render_report(run_experiment(cfg2), "json")
    fourth = render_report(run_experiment(cfg2), "json")
    ok = first == second and third == fourth
    _verdict(12, ok, f"byte-identical reruns: {ok}")
