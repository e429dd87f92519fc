"""fadeperf: unified average bit-error probability and channel capacity over
generalized fading channels, evaluated through Fox's H / Meijer's G contour
integration, an MGF single-integral combiner route, and a seeded Monte Carlo
oracle."""

from .fading import (
    EGK,
    ChannelModel,
    Custom,
    Exponential,
    GeneralizedGamma,
    GeneralizedK,
    Hoyt,
    HyperFoxH,
    HyperGamma,
    KDist,
    Lognormal,
    Maxwell,
    Nakagami,
    OneSidedGaussian,
    Rice,
    Weibull,
    dmgf,
    hyper_dmgf,
    hyper_mgf,
    mgf,
    pdf,
    sample,
    to_hyper_foxh,
)
from .mc import McEstimate, estimate_aup_mc
from .mellin import ContourConfig, FoxHParams, fox_h, meijer_g, validate
from .perf import (
    JointMgf,
    MetricKind,
    MetricSpec,
    aup_egk,
    aup_gnm,
    aup_lognormal,
    aup_mrc,
    aup_mrc_independent,
    aup_nakagami_identical_mrc,
    aup_single,
    aup_single_closed,
    aup_single_quadrature,
    conditional_up,
    conditional_up_identities,
)
from .specfn import (
    QuadratureRule,
    exp_integral_ei,
    gauss_hermite_nodes,
    gcq_nodes,
    incomplete_beta,
    log_gamma_complex,
    pfq,
    upper_incomplete_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "EGK",
    "ChannelModel",
    "ContourConfig",
    "Custom",
    "Exponential",
    "FoxHParams",
    "GeneralizedGamma",
    "GeneralizedK",
    "Hoyt",
    "HyperFoxH",
    "HyperGamma",
    "JointMgf",
    "KDist",
    "Lognormal",
    "Maxwell",
    "McEstimate",
    "MetricKind",
    "MetricSpec",
    "Nakagami",
    "OneSidedGaussian",
    "QuadratureRule",
    "Rice",
    "Weibull",
    "aup_egk",
    "aup_gnm",
    "aup_lognormal",
    "aup_mrc",
    "aup_mrc_independent",
    "aup_nakagami_identical_mrc",
    "aup_single",
    "aup_single_closed",
    "aup_single_quadrature",
    "conditional_up",
    "conditional_up_identities",
    "dmgf",
    "estimate_aup_mc",
    "exp_integral_ei",
    "fox_h",
    "gauss_hermite_nodes",
    "gcq_nodes",
    "hyper_dmgf",
    "hyper_mgf",
    "incomplete_beta",
    "log_gamma_complex",
    "meijer_g",
    "mgf",
    "pdf",
    "pfq",
    "sample",
    "to_hyper_foxh",
    "upper_incomplete_gamma",
    "validate",
]
