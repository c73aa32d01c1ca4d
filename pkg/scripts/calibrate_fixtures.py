#!/usr/bin/env python3
"""Regenerate src/qrmeans/fixtures/calibration.json.

Run once and commit the output: experiments compare against these frozen
numbers instead of re-deriving them, so acceptance thresholds cannot
drift with the code.  Windows get a total width of factor 4 around the
geometric center of the observed rung ratios.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from qrmeans.gallery import _reliable_rungs, growth_witness
from qrmeans.gfunction import angular_norm, g_function
from qrmeans.means import N_THETA_CAP, _refined_circle_mean, hardy_norm, radius_ladder, sample_map_circle
from qrmeans.series import AnalyticSeries, HarmonicMap

CORPUS_SEED = 20250901
CORPUS_SIZE = 30
BRACKET_MARGIN = 1.25
G_EXPONENTS = (1.0, 1.5, 2.0, 3.0)
GROWTH_CASES = ((0, 1.0), (0, 2.0), (1, 1.0), (1, 2.0))

OUT = Path(__file__).resolve().parents[1] / "src" / "qrmeans" / "fixtures" / "calibration.json"


def g_brackets() -> tuple[dict, float]:
    rng = np.random.default_rng(CORPUS_SEED)
    ladder = radius_ladder(4)
    ratios: dict[float, list[float]] = {p: [] for p in G_EXPONENTS}
    for _ in range(CORPUS_SIZE):
        deg = int(rng.integers(2, 33))
        c = rng.uniform(-1, 1, deg + 1) + 1j * rng.uniform(-1, 1, deg + 1)
        a = AnalyticSeries(c)
        centered = a.with_constant(0j)
        gs = g_function(a, n_theta=2048)
        for p in G_EXPONENTS:
            gn = angular_norm(gs.values, p)
            hn = hardy_norm(HarmonicMap(centered), p, ladder).value
            ratios[p].append(gn / hn)
    brackets = {
        repr(p): [min(v) / BRACKET_MARGIN, max(v) * BRACKET_MARGIN] for p, v in ratios.items()
    }
    c_emp = max(max(1.0 / min(v), max(v)) for v in ratios.values()) * BRACKET_MARGIN
    return brackets, c_emp


def growth_windows() -> dict:
    ladder = radius_ladder(4)
    windows = {}
    for j, K in GROWTH_CASES:
        m = growth_witness(j, K, r_max=max(ladder))
        keep, _ = _reliable_rungs(m, ladder)
        q = 1.0 / (1.0 + j)
        vals = []
        for r in keep:
            mv = _refined_circle_mean(
                lambda n, rr=r: sample_map_circle(m, rr, n),
                lambda s: float(np.mean(np.abs(np.imag(s)) ** q)),
                tol=1e-8,
                cap=N_THETA_CAP,
            )
            vals.append(mv.value / math.log(1.0 / (1.0 - r)))
        center = math.sqrt(min(vals) * max(vals))
        if max(vals) / min(vals) >= 4.0:
            raise RuntimeError(f"observed spread too wide for a factor-4 window at (j={j}, K={K})")
        windows[f"{j},{K:g}"] = [center / 2.0, center * 2.0]
    return windows


def main() -> None:
    brackets, c_emp = g_brackets()
    payload = {
        "provenance": {
            "corpus_seed": CORPUS_SEED,
            "corpus_size": CORPUS_SIZE,
            "bracket_margin": BRACKET_MARGIN,
            "ladder": list(radius_ladder(4)),
        },
        "g_norm_brackets": brackets,
        "g_norm_c_emp": c_emp,
        "riesz_kk_stability_factor": 4.0,
        "hl_growth_windows": growth_windows(),
        "hl_derivative": {"divergence_increment_ratio": 1.0},
    }
    OUT.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
