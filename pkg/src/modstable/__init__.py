"""Explicit Kolmogorov-distance bounds for convergence to stable laws,
and the numerical machinery to verify them on a catalog of models."""

from .stable_laws import (
    CAUCHY,
    GAUSSIAN,
    LEVY,
    NonConvergence,
    StableLaw,
    cdf,
    char_fn,
    density,
    density_sup_bound,
    levy_exponent,
    renormalize,
    sample,
)
from .zone_control import (
    InvalidZone,
    ZoneOfControl,
    kolmogorov_bound,
    kolmogorov_constant,
    kolmogorov_constant_at,
    simplified_constant,
    test_fn_constants,
    validate,
)
from .cumulants import (
    CumulantBoundParams,
    MomentOracle,
    boolean_cumulant,
    boolean_to_classical,
    check_uniform_bounds,
    cumulant_kol_bound,
    janson_diagnostic,
    joint_cumulant,
    npi,
    truncation_bound,
    zone_from_cumulants,
)
from .dependency_graphs import (
    InducedMultigraph,
    WeightedGraph,
    induced,
    max_weighted_degree,
    plain_depgraph_bound,
    spanning_tree_weight_sum,
    uwdg_check,
    uwdg_cumulant_bound,
)
from .markov import (
    MarkovChainSpec,
    asymptotic_variance,
    boolean_cumulant_matrix,
    cycle_criterion,
    fill_check,
    joint_moment,
    make_chain,
    markov_cumulant_bound,
    markov_kol_bound,
    sample_path,
    stationary,
    theta,
    time_reversal,
)
from .models import Model, make_model, model_cf, model_sample
from .empirics import (
    DkolEstimate,
    VerificationRow,
    cf_dkol,
    emit_report,
    empirical_dkol,
    verify_model,
)

__version__ = "0.1.0"
