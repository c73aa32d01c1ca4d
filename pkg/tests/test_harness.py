import json
import math

import numpy as np
import pytest

from qrmeans.corpus import analytic_corpus, qr_corpus, sector_corpus
from qrmeans.harness import (
    ExperimentConfig,
    dumps_canonical,
    normalize_v0,
    render_report,
    run_experiment,
    version_string,
)
from qrmeans.qr import GridSpec
from qrmeans.series import AnalyticSeries, HarmonicMap


def test_config_validation_and_echo():
    with pytest.raises(ValueError):
        ExperimentConfig(theorem_id="nope")
    cfg = ExperimentConfig(theorem_id="prop2", p=(2,), corpus_size=2)
    d = cfg.to_dict()
    assert d["theorem_id"] == "prop2" and d["p"] == [2.0]
    assert cfg.ladder() == (0.9, 0.99, 0.999, 0.9999)
    assert ExperimentConfig(theorem_id="prop2", deep=True).ladder()[-1] == pytest.approx(1 - 1e-6)


def test_analytic_corpus_properties():
    maps = analytic_corpus(8, seed=42, degree=10)
    assert len(maps) == 8
    for m in maps:
        assert m.value_at_origin.imag == 0.0
        assert m.is_analytic()
    again = analytic_corpus(8, seed=42, degree=10)
    assert all(np.allclose(a.h.coeffs, b.h.coeffs) for a, b in zip(maps, again))
    zeroed = analytic_corpus(3, seed=1, zero_at_origin=True)
    assert all(m.value_at_origin == 0 for m in zeroed)


def test_qr_corpus_certified():
    grid = GridSpec(n_radii=24, n_theta=256)
    pairs = qr_corpus(4, seed=5, K=1.2, kprime=0.0, grid=grid)
    for m, prof in pairs:
        assert prof.certified()
        assert m.value_at_origin.imag == 0.0
    pairs = qr_corpus(4, seed=5, K=1.2, kprime=0.5, grid=grid)
    for m, prof in pairs:
        assert prof.certified()
        assert prof.kprime == 0.5


def test_sector_corpus_in_sector():
    from qrmeans.qr import sector_hypotheses

    for m in sector_corpus(4, seed=2):
        flags = sector_hypotheses(m, 2.5, GridSpec(n_radii=12, n_theta=64))
        assert flags.sector_ok


def test_normalize_v0():
    m = HarmonicMap(AnalyticSeries([1 + 2j, 0.5]))
    m2, shift = normalize_v0(m)
    assert shift == 2.0
    assert m2.value_at_origin == 1.0
    m3, shift = normalize_v0(m2)
    assert shift == 0.0


def test_riesz_kk_conformal_calibration():
    cfg = ExperimentConfig(theorem_id="riesz_kk", p=(2.0, 4.0), K=1.0, corpus_size=4, seed=21, degree=10)
    v = run_experiment(cfg)
    assert v.passed
    for rec in v.records:
        assert rec.slacks["conformal_ratio_slack_p2"] >= 0.0
        assert rec.slacks["conformal_ratio_slack_p4"] >= 0.0


def test_riesz_kk_rejects_uncertified_map():
    bad = {"h": {"coeffs": [[0.0, 0.0], [0.2, 0.0]]}, "g": {"coeffs": [[0.0, 0.0], [0.9, 0.0]]}}
    cfg = ExperimentConfig(theorem_id="riesz_kk", p=(2.0,), K=1.1, maps=(bad,))
    with pytest.raises(ValueError):
        run_experiment(cfg)


def test_riesz_sharp_gate_skips():
    # after the v(0) = 0 shift f(0) is real, and cos(4 * pi/2) = 1 > 0:
    # a nonzero real origin value fails the p = 4 origin condition
    spec = {"h": {"coeffs": [[1.0, 0.0], [0.1, 0.0]]}, "g": {"coeffs": [[0.0, 0.0]]}}
    cfg = ExperimentConfig(theorem_id="riesz_sharp", p=(4.0,), K=1.0, maps=(spec,))
    v = run_experiment(cfg)
    assert v.n_skipped() == 1
    assert v.records[0].passed is None
    assert v.passed  # skips are not failures


def test_riesz_sharp_invalid_constants_skip():
    cfg = ExperimentConfig(theorem_id="riesz_sharp", p=(2.0,), K=3.0, kprime=0.0, corpus_size=2, seed=3)
    v = run_experiment(cfg)
    assert v.n_skipped() == len(v.records)


def test_prop2_verdict_structure():
    cfg = ExperimentConfig(theorem_id="prop2", p=(2.0,), corpus_size=2, seed=13, degree=8)
    v = run_experiment(cfg)
    assert v.passed
    d = v.to_json_dict()
    assert d["theorem_id"] == "prop2"
    assert len(d["records"]) == 2
    assert all("meanvalue_slack_p2" in r["slacks"] for r in d["records"])
    assert "version" in d["environment"]


def test_determinism_bytes():
    cfg = ExperimentConfig(theorem_id="prop2", p=(2.0,), corpus_size=2, seed=99, degree=6)
    a = render_report(run_experiment(cfg), "json")
    b = render_report(run_experiment(cfg), "json")
    assert a == b
    assert json.loads(a) == json.loads(b)


def test_report_csv_rows():
    cfg = ExperimentConfig(theorem_id="prop2", p=(2.0,), corpus_size=2, seed=99, degree=6)
    v = run_experiment(cfg)
    text = render_report(v, "csv")
    lines = text.strip().splitlines()
    assert lines[0] == "map_id,skipped,passed,metric,value"
    assert len(lines) > 1
    with pytest.raises(ValueError):
        render_report(v, "xml")


def test_json_report_roundtrip():
    cfg = ExperimentConfig(theorem_id="prop2", p=(2.0,), corpus_size=1, seed=7, degree=6)
    v = run_experiment(cfg)
    text = render_report(v, "json")
    assert json.loads(text) == v.to_json_dict()


def test_version_string_shape():
    s = version_string()
    assert s.startswith("qrmeans-0.")


def test_dumps_canonical_sorted():
    assert dumps_canonical({"b": 1, "a": 2}).index('"a"') < dumps_canonical({"b": 1, "a": 2}).index('"b"')


def test_kolmogorov_control_skips():
    v = run_experiment(ExperimentConfig(theorem_id="kolmogorov", K=2.0))
    by_id = {r.map_id: r for r in v.records}
    assert by_id["log_control"].skipped
    assert by_id["bounded_witness"].passed
    assert v.passed


def test_zygmund_control_skips():
    v = run_experiment(ExperimentConfig(theorem_id="zygmund", K=2.0))
    by_id = {r.map_id: r for r in v.records}
    assert by_id["log_control"].skipped
    assert by_id["bounded_witness"].passed


def test_hl_growth_fit():
    v = run_experiment(ExperimentConfig(theorem_id="hl_growth", p=(1.0,), K=2.0))
    assert v.passed
    rec = v.records[0]
    slope = rec.details["fitted_log_power_p1"]
    assert 0.85 <= slope <= 1.15
