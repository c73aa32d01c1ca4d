from __future__ import annotations

import numpy as np
import pytest

from qrmeans.series import AnalyticSeries, HarmonicMap


def random_map(rng: np.random.Generator, degree: int = 16, *, analytic: bool = True) -> HarmonicMap:
    h = AnalyticSeries(rng.uniform(-1, 1, degree + 1) + 1j * rng.uniform(-1, 1, degree + 1))
    if analytic:
        return HarmonicMap(h)
    gp = 0.3 * (rng.uniform(-1, 1, degree) + 1j * rng.uniform(-1, 1, degree))
    return HarmonicMap(h, AnalyticSeries(np.concatenate(([0j], gp))))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
