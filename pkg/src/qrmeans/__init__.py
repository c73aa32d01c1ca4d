"""Numerical toolkit for integral means and conjugate-function inequalities
of planar harmonic maps with a pointwise stretch bound."""

__version__ = "0.1.0"

from .series import (  # noqa: F401
    AnalyticSeries,
    DomainError,
    HarmonicMap,
    PointDiff,
    diff_at,
    directional_derivative,
    eval_map,
    inv_power_series,
    map_from_spec,
    series_from_spec,
)
from .means import (  # noqa: F401
    MeansTable,
    growth_exponent,
    hardy_norm,
    mean_p,
    mean_p_map,
    means_table,
    radius_ladder,
    sample_map_circle,
    sample_series_circle,
    zygmund_integral,
)
from .conjugation import ConjugatePair, conjugate_function, decompose, gradient_modulus_u  # noqa: F401
from .constants import (  # noqa: F401
    ConstantSet,
    build_constant_set,
    classical_constants,
    f_bound_k_threshold,
    lemma_constants,
    pstar,
    splitting_factor,
    theorem_constants,
)
from .qr import (  # noqa: F401
    GridSpec,
    QRProfile,
    check_qr,
    dilatation_bound_check,
    min_kprime,
    sector_hypotheses,
    synthesize_qr,
)
from .sector import (  # noqa: F401
    BranchCutError,
    GreenQuad,
    SectorFunction,
    f_p_eval,
    f_p_field,
    green_identity_residual,
    laplacian_f_p,
    lemma_check,
    meanvalue_hypothesis,
    phi_angle,
    sector_value,
)
from .gfunction import g_function, g_norm_ratio, splitting_bound_check  # noqa: F401
from .gallery import (  # noqa: F401
    ExtremalSpec,
    build_extremal,
    sharpness_experiment_derivative,
    sharpness_experiment_growth,
    stretch_map,
)
from .harness import (  # noqa: F401
    ExperimentConfig,
    Verdict,
    render_report,
    run_experiment,
    run_limit_theorems,
    run_riesz_kk,
    run_riesz_sharp,
)
