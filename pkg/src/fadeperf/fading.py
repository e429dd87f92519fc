"""Fading-model catalog: SNR densities, MGFs, derivatives, samplers, and the
mapping of every model onto the hyper-Fox's H mixture form.

All parameters live in linear power units; dB conversion is a CLI concern.
Every model is mean-normalized so that E[gamma] equals its gbar (gbar_s for
the composite models), which the beta = Gamma(m + 1/xi)/Gamma(m) factors
enforce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import integrate
from scipy.special import gamma as _gamma
from scipy.special import gammaln, i0e, kv

from .mellin import DEFAULT_CONTOUR, ContourConfig, FoxHParams, fox_h, validate
from .specfn import gauss_hermite_nodes

_DB = 10.0 / math.log(10.0)  # dB per neper of log-power
_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-12, limit=200)


def _beta_shape(m: float, xi: float) -> float:
    """Gamma(m + 1/xi)/Gamma(m), the mean normalizer of powered-Gamma laws."""
    return math.exp(gammaln(m + 1.0 / xi) - gammaln(m))


@dataclass(frozen=True)
class HyperFoxH:
    """Finite mixture sum_i eta_i * H_i[c_i * gamma] representing an SNR PDF.

    Terms whose H has no coefficients at all (p = q = 0) are unit point
    masses at gamma = 1/c (the degenerate kernel reading); they carry
    probability eta/c.
    """

    terms: tuple[tuple[float, float, FoxHParams], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "terms",
            tuple((float(e), float(c), h) for e, c, h in self.terms),
        )
        if not self.terms:
            raise ValueError("HyperFoxH needs at least one term")
        lo, hi = -math.inf, math.inf
        for _, c, h in self.terms:
            if c <= 0.0:
                raise ValueError("term scales c must be positive")
            strip = validate(h)
            lo, hi = max(lo, strip.c_lo), min(hi, strip.c_hi)
        if not lo < hi:
            raise ValueError(
                f"term strips do not intersect (common strip would be [{lo:g}, {hi:g}])"
            )

    @property
    def has_point_masses(self) -> bool:
        return any(h.p == 0 and h.q == 0 for _, _, h in self.terms)


def _check_positive(**kwargs):
    for name, val in kwargs.items():
        if not val > 0.0:
            raise ValueError(f"{name} must be positive, got {val!r}")


@dataclass(frozen=True)
class OneSidedGaussian:
    gbar: float

    def __post_init__(self):
        _check_positive(gbar=self.gbar)


@dataclass(frozen=True)
class Exponential:
    gbar: float

    def __post_init__(self):
        _check_positive(gbar=self.gbar)


@dataclass(frozen=True)
class Nakagami:
    """Gamma-distributed SNR; m is the fading figure (m >= 0.5)."""

    m: float
    gbar: float

    def __post_init__(self):
        _check_positive(gbar=self.gbar)
        if self.m < 0.5:
            raise ValueError("fading figure m must be >= 0.5")


@dataclass(frozen=True)
class Weibull:
    """Mean-normalized Weibull SNR; equals GeneralizedGamma with m = 1."""

    xi: float
    gbar: float

    def __post_init__(self):
        _check_positive(xi=self.xi, gbar=self.gbar)


@dataclass(frozen=True)
class HyperGamma:
    """Mixture of Gamma environments; weights must sum to one."""

    components: tuple[tuple[float, float, float], ...]  # (weight, m_k, gbar_k)

    def __post_init__(self):
        object.__setattr__(
            self,
            "components",
            tuple((float(w), float(m), float(g)) for w, m, g in self.components),
        )
        if not self.components:
            raise ValueError("HyperGamma needs at least one component")
        for w, m, g in self.components:
            if w <= 0.0 or m < 0.5 or g <= 0.0:
                raise ValueError("each component needs weight > 0, m >= 0.5, gbar > 0")
        total = sum(w for w, _, _ in self.components)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"accrual weights must sum to 1, got {total!r}")


@dataclass(frozen=True)
class Hoyt:
    """Nakagami-q power fading, 0 < q < 1; k_trunc bounds the Gamma-mixture map."""

    q: float
    gbar: float
    k_trunc: int = 30

    def __post_init__(self):
        _check_positive(gbar=self.gbar)
        if not 0.0 < self.q < 1.0:
            raise ValueError("Hoyt parameter must satisfy 0 < q < 1")
        if self.k_trunc < 1:
            raise ValueError("k_trunc must be >= 1")


@dataclass(frozen=True)
class Rice:
    """Nakagami-n (Rician) power fading; n**2 is the Rician K factor."""

    n: float
    gbar: float
    k_trunc: int = 30

    def __post_init__(self):
        _check_positive(n=self.n, gbar=self.gbar)
        if self.k_trunc < 1:
            raise ValueError("k_trunc must be >= 1")


@dataclass(frozen=True)
class Maxwell:
    gbar: float

    def __post_init__(self):
        _check_positive(gbar=self.gbar)


@dataclass(frozen=True)
class Lognormal:
    """Lognormal shadowing of the SNR; mu/sigma are in dB, the MGF and the
    hyper-Fox's H map use the k_hermite-point Gauss-Hermite mixture."""

    mu_db: float
    sigma_db: float
    k_hermite: int = 20

    def __post_init__(self):
        if self.sigma_db < 0.0:
            raise ValueError("sigma_db must be nonnegative")
        if self.k_hermite < 1:
            raise ValueError("k_hermite must be >= 1")


@dataclass(frozen=True)
class KDist:
    """K-distribution: exponential fading under Gamma shadowing."""

    m_s: float
    gbar_s: float

    def __post_init__(self):
        _check_positive(gbar_s=self.gbar_s)
        if self.m_s < 0.5:
            raise ValueError("shadowing severity m_s must be >= 0.5")


@dataclass(frozen=True)
class GeneralizedK:
    m: float
    m_s: float
    gbar_s: float

    def __post_init__(self):
        _check_positive(gbar_s=self.gbar_s)
        if self.m < 0.5 or self.m_s < 0.5:
            raise ValueError("fading figures m, m_s must be >= 0.5")


@dataclass(frozen=True)
class GeneralizedGamma:
    """Generalized Nakagami-m: fading figure m, shaping xi, mean power gbar."""

    m: float
    xi: float
    gbar: float

    def __post_init__(self):
        _check_positive(xi=self.xi, gbar=self.gbar)
        if self.m < 0.5:
            raise ValueError("fading figure m must be >= 0.5")


@dataclass(frozen=True)
class EGK:
    """Extended generalized-K: generalized-Gamma fading compounded with
    generalized-Gamma shadowing."""

    m: float
    xi: float
    m_s: float
    xi_s: float
    gbar_s: float

    def __post_init__(self):
        _check_positive(xi=self.xi, xi_s=self.xi_s, gbar_s=self.gbar_s)
        if self.m < 0.5 or self.m_s < 0.5:
            raise ValueError("fading figures m, m_s must be >= 0.5")


@dataclass(frozen=True)
class Custom:
    """A user-supplied hyper-Fox's H SNR distribution."""

    hyper: HyperFoxH


ChannelModel = Union[
    OneSidedGaussian,
    Exponential,
    Nakagami,
    Weibull,
    HyperGamma,
    Hoyt,
    Rice,
    Maxwell,
    Lognormal,
    KDist,
    GeneralizedK,
    GeneralizedGamma,
    EGK,
    Custom,
]


def mean_snr(model: ChannelModel) -> float:
    """E[gamma] of the model (equals gbar by mean normalization)."""
    if isinstance(model, HyperGamma):
        return sum(w * g for w, _, g in model.components)
    if isinstance(model, Lognormal):
        sig = model.sigma_db / _DB
        return 10.0 ** (model.mu_db / 10.0) * math.exp(0.5 * sig * sig)
    if isinstance(model, (KDist, GeneralizedK, EGK)):
        return model.gbar_s
    if isinstance(model, Custom):
        raise ValueError("mean of a custom hyper-Fox's H model is not tracked")
    return model.gbar


def scale_mean(model: ChannelModel, gbar: float) -> ChannelModel:
    """Return the same fading shape with its mean power set to gbar."""
    if isinstance(model, OneSidedGaussian):
        return OneSidedGaussian(gbar)
    if isinstance(model, Exponential):
        return Exponential(gbar)
    if isinstance(model, Nakagami):
        return Nakagami(model.m, gbar)
    if isinstance(model, Weibull):
        return Weibull(model.xi, gbar)
    if isinstance(model, Maxwell):
        return Maxwell(gbar)
    if isinstance(model, HyperGamma):
        base = sum(w * g for w, _, g in model.components)
        return HyperGamma(
            tuple((w, m, g * gbar / base) for w, m, g in model.components)
        )
    if isinstance(model, Hoyt):
        return Hoyt(model.q, gbar, model.k_trunc)
    if isinstance(model, Rice):
        return Rice(model.n, gbar, model.k_trunc)
    if isinstance(model, Lognormal):
        return Lognormal(10.0 * math.log10(gbar), model.sigma_db, model.k_hermite)
    if isinstance(model, KDist):
        return KDist(model.m_s, gbar)
    if isinstance(model, GeneralizedK):
        return GeneralizedK(model.m, model.m_s, gbar)
    if isinstance(model, GeneralizedGamma):
        return GeneralizedGamma(model.m, model.xi, gbar)
    if isinstance(model, EGK):
        return EGK(model.m, model.xi, model.m_s, model.xi_s, gbar)
    raise ValueError(f"cannot rescale {type(model).__name__}")


# ---------------------------------------------------------------------------
# Gamma-mixture expansions of Hoyt and Rice (their hyper-Fox's H route).

def _hoyt_mixture(model: Hoyt):
    q, gbar = model.q, model.gbar
    ks = np.arange(model.k_trunc)
    ratio = ((1.0 - q * q) / (1.0 + q * q)) ** 2
    logw = (
        math.log(2.0 * q / (1.0 + q * q))
        + gammaln(ks + 0.5)
        - 0.5 * math.log(math.pi)
        - gammaln(ks + 1.0)
        + ks * math.log(ratio)
    )
    weights = np.exp(logw)
    m_k = 2.0 * ks + 1.0
    mean_k = m_k * 4.0 * q * q * gbar / (1.0 + q * q) ** 2
    return weights, m_k, mean_k


def _rice_mixture(model: Rice):
    n, gbar = model.n, model.gbar
    ks = np.arange(model.k_trunc)
    logw = 2.0 * ks * math.log(n) - n * n - gammaln(ks + 1.0)
    weights = np.exp(logw)
    m_k = ks + 1.0
    mean_k = m_k * gbar / (1.0 + n * n)
    return weights, m_k, mean_k


def _lognormal_mixture(model: Lognormal):
    rule = gauss_hermite_nodes(model.k_hermite)
    omega = 10.0 ** (
        (math.sqrt(2.0) * model.sigma_db * rule.nodes + model.mu_db) / 10.0
    )
    return rule.weights / math.sqrt(math.pi), omega


# ---------------------------------------------------------------------------
# Densities.

def _gamma_pdf(g, m, mean):
    rate = m / mean
    return np.exp(
        m * np.log(rate) + (m - 1.0) * np.log(g) - rate * g - gammaln(m)
    )


def _peak_bracketed_quad(log_f, x_lo: float = 0.0, log_scale: float = 0.0) -> float:
    """int_{x_lo}^inf exp(log_f(r) + log_scale) dr for a unimodal-ish
    log-integrand whose peak may sit anywhere on (0, inf).

    QUADPACK's infinite-range rule misses interior or boundary spikes whose
    width is far below the panel scale; bracketing the mass on a log grid
    first makes the adaptive pass reliable.
    """

    def f(r):
        if r <= 0.0:
            return 0.0
        e = log_f(r) + log_scale
        return math.exp(e) if e > -745.0 else 0.0

    grid = np.logspace(-14.0, 12.0, 521)
    grid = grid[grid >= max(x_lo, 1e-300)]
    if grid.size == 0:
        grid = np.array([max(x_lo, 1e-300)])
    with np.errstate(all="ignore"):
        logs = np.array([log_f(r) for r in grid])
    logs = np.where(np.isfinite(logs), logs, -np.inf)
    peak_idx = int(np.argmax(logs))
    peak = logs[peak_idx]
    if peak == -np.inf:
        return 0.0
    keep = logs > peak - 60.0
    lo = max(x_lo, float(grid[keep][0]) * 0.5)
    hi = float(grid[keep][-1]) * 2.0
    val, _ = integrate.quad(
        f, lo, hi, points=[float(grid[peak_idx])], epsabs=1e-13, epsrel=1e-12, limit=400
    )
    head = integrate.quad(f, x_lo, lo, **_QUAD_OPTS)[0] if lo > x_lo else 0.0
    tail, _ = integrate.quad(f, hi, np.inf, **_QUAD_OPTS)
    return val + head + tail


def _extended_incomplete_gamma_scaled(
    alpha: float, x: float, b: float, beta: float, log_scale: float
) -> float:
    """exp(log_scale) * Gamma(alpha, x, b, beta), integrand kept in log space."""

    def log_f(r):
        return (alpha - 1.0) * math.log(r) - r - b * r ** (-beta)

    return _peak_bracketed_quad(log_f, x_lo=x, log_scale=log_scale)


def extended_incomplete_gamma(alpha: float, x: float, b: float, beta: float) -> float:
    """Gamma(alpha, x, b, beta) = int_x^inf r^(alpha-1) exp(-r - b r^(-beta)) dr."""
    if b < 0.0 or beta <= 0.0 or x < 0.0:
        raise ValueError("requires b >= 0, beta > 0, x >= 0")
    return _extended_incomplete_gamma_scaled(alpha, x, b, beta, 0.0)


def pdf(model: ChannelModel, g: float) -> float:
    """SNR density p(gamma) at gamma = g > 0."""
    if g <= 0.0:
        raise ValueError("pdf requires gamma > 0")
    if isinstance(model, OneSidedGaussian):
        return float(_gamma_pdf(g, 0.5, model.gbar))
    if isinstance(model, Exponential):
        return math.exp(-g / model.gbar) / model.gbar
    if isinstance(model, Nakagami):
        return float(_gamma_pdf(g, model.m, model.gbar))
    if isinstance(model, Maxwell):
        return float(_gamma_pdf(g, 1.5, model.gbar))
    if isinstance(model, Weibull):
        return pdf(GeneralizedGamma(1.0, model.xi, model.gbar), g)
    if isinstance(model, HyperGamma):
        return float(
            sum(w * _gamma_pdf(g, m, gb) for w, m, gb in model.components)
        )
    if isinstance(model, Hoyt):
        q, gbar = model.q, model.gbar
        amp = (1.0 + q * q) / (2.0 * q * gbar)
        x = (1.0 - q**4) * g / (4.0 * q * q * gbar)
        return amp * math.exp(-(1.0 + q * q) * g / (2.0 * gbar)) * float(i0e(x))
    if isinstance(model, Rice):
        n, gbar = model.n, model.gbar
        lam = (1.0 + n * n) / gbar
        x = 2.0 * n * math.sqrt((1.0 + n * n) * g / gbar)
        return (
            lam
            * math.exp(-((n - math.sqrt((1.0 + n * n) * g / gbar)) ** 2))
            * float(i0e(x))
        )
    if isinstance(model, Lognormal):
        if model.sigma_db == 0.0:
            raise ValueError("degenerate lognormal (sigma = 0) has no density")
        x = 10.0 * math.log10(g)
        return (
            _DB
            / (math.sqrt(2.0 * math.pi) * model.sigma_db * g)
            * math.exp(-((x - model.mu_db) ** 2) / (2.0 * model.sigma_db**2))
        )
    if isinstance(model, KDist):
        return pdf(GeneralizedK(1.0, model.m_s, model.gbar_s), g)
    if isinstance(model, GeneralizedK):
        m, ms, gbs = model.m, model.m_s, model.gbar_s
        lam = m * ms / gbs
        arg = 2.0 * math.sqrt(lam * g)
        order = ms - m
        val = 2.0 * (lam * g) ** (0.5 * (ms + m)) / g * float(kv(order, arg))
        return val * math.exp(-gammaln(m) - gammaln(ms))
    if isinstance(model, GeneralizedGamma):
        m, xi, gbar = model.m, model.xi, model.gbar
        beta = _beta_shape(m, xi)
        r = beta * g / gbar
        return (
            xi / g * math.exp(xi * m * math.log(r) - r**xi - gammaln(m))
        )
    if isinstance(model, EGK):
        m, xi, ms, xis, gbs = model.m, model.xi, model.m_s, model.xi_s, model.gbar_s
        lam = _beta_shape(m, xi) * _beta_shape(ms, xis) / gbs
        log_pref = xi * m * math.log(lam * g) - gammaln(m) - gammaln(ms)
        tail = _extended_incomplete_gamma_scaled(
            ms - m * xi / xis, 0.0, (lam * g) ** xi, xi / xis, log_pref
        )
        return xi / g * tail
    if isinstance(model, Custom):
        return hyper_pdf(model.hyper, g)
    raise TypeError(f"unknown channel model {type(model).__name__}")


# ---------------------------------------------------------------------------
# MGFs M(s) = E[exp(-s gamma)] and their s-derivatives.

def _gg_mgf_integrals(m, xi, gbar, s, moment):
    """int g^(m-1+moment/xi) exp(-g - s*(gbar/beta)*g^(1/xi)) dg / Gamma(m)."""
    beta = _beta_shape(m, xi)
    scale = s * gbar / beta

    def log_f(g):
        return (m - 1.0 + moment / xi) * math.log(g) - g - scale * g ** (1.0 / xi)

    return _peak_bracketed_quad(log_f, log_scale=-gammaln(m))


def mgf(model: ChannelModel, s: float) -> float:
    """MGF in the communications sign convention, M(s) = E[e^(-s gamma)]."""
    if s < 0.0:
        raise ValueError("mgf requires s >= 0")
    if s == 0.0:
        return 1.0
    if isinstance(model, OneSidedGaussian):
        return (1.0 + 2.0 * model.gbar * s) ** -0.5
    if isinstance(model, Exponential):
        return 1.0 / (1.0 + model.gbar * s)
    if isinstance(model, Nakagami):
        return (1.0 + model.gbar * s / model.m) ** -model.m
    if isinstance(model, Maxwell):
        return (1.0 + 2.0 * model.gbar * s / 3.0) ** -1.5
    if isinstance(model, HyperGamma):
        return float(
            sum(w * (1.0 + gb * s / m) ** -m for w, m, gb in model.components)
        )
    if isinstance(model, Hoyt):
        q, gbar = model.q, model.gbar
        return (
            1.0
            + 2.0 * gbar * s
            + (2.0 * gbar * s * q) ** 2 / (1.0 + q * q) ** 2
        ) ** -0.5
    if isinstance(model, Rice):
        n, gbar = model.n, model.gbar
        den = (1.0 + n * n) + gbar * s
        return (1.0 + n * n) / den * math.exp(-n * n * gbar * s / den)
    if isinstance(model, Lognormal):
        w, omega = _lognormal_mixture(model)
        return float(np.sum(w * np.exp(-omega * s)))
    if isinstance(model, Weibull):
        return _gg_mgf_integrals(1.0, model.xi, model.gbar, s, 0.0)
    if isinstance(model, GeneralizedGamma):
        return _gg_mgf_integrals(model.m, model.xi, model.gbar, s, 0.0)
    if isinstance(model, (KDist, GeneralizedK)):
        m = 1.0 if isinstance(model, KDist) else model.m
        ms, gbs = model.m_s, model.gbar_s
        rate = ms / gbs

        def log_f(v):
            return (
                -m * math.log1p(s * v / m)
                + ms * math.log(rate)
                + (ms - 1.0) * math.log(v)
                - rate * v
            )

        return _peak_bracketed_quad(log_f, log_scale=-gammaln(ms))
    if isinstance(model, EGK):
        m, xi, ms, xis, gbs = model.m, model.xi, model.m_s, model.xi_s, model.gbar_s
        lam = _beta_shape(m, xi) * _beta_shape(ms, xis) / gbs
        params = FoxHParams(
            m=2,
            n=1,
            upper=((1.0, 1.0),),
            lower=((m, 1.0 / xi), (ms, 1.0 / xis)),
        )
        return fox_h(params, lam / s, log_scale=-gammaln(m) - gammaln(ms))
    if isinstance(model, Custom):
        return hyper_mgf(model.hyper, s)
    raise TypeError(f"unknown channel model {type(model).__name__}")


def dmgf(model: ChannelModel, s: float) -> float:
    """dM/ds; equals -E[gamma] at s = 0."""
    if s < 0.0:
        raise ValueError("dmgf requires s >= 0")
    if isinstance(model, OneSidedGaussian):
        return -model.gbar * (1.0 + 2.0 * model.gbar * s) ** -1.5
    if isinstance(model, Exponential):
        return -model.gbar / (1.0 + model.gbar * s) ** 2
    if isinstance(model, Nakagami):
        return -model.gbar * (1.0 + model.gbar * s / model.m) ** (-model.m - 1.0)
    if isinstance(model, Maxwell):
        return -model.gbar * (1.0 + 2.0 * model.gbar * s / 3.0) ** -2.5
    if isinstance(model, HyperGamma):
        return float(
            sum(
                -w * gb * (1.0 + gb * s / m) ** (-m - 1.0)
                for w, m, gb in model.components
            )
        )
    if isinstance(model, Hoyt):
        q, gbar = model.q, model.gbar
        qq = (1.0 + q * q) ** 2
        den = 1.0 + 2.0 * gbar * s + (2.0 * gbar * s * q) ** 2 / qq
        return -gbar * (1.0 + 4.0 * q * q * gbar * s / qq) * den**-1.5
    if isinstance(model, Rice):
        n, gbar = model.n, model.gbar
        den = (1.0 + n * n) + gbar * s
        m_val = (1.0 + n * n) / den * math.exp(-n * n * gbar * s / den)
        return -gbar * m_val * (1.0 / den + n * n * (1.0 + n * n) / den**2)
    if isinstance(model, Lognormal):
        w, omega = _lognormal_mixture(model)
        return float(-np.sum(w * omega * np.exp(-omega * s)))
    if isinstance(model, Weibull):
        return dmgf(GeneralizedGamma(1.0, model.xi, model.gbar), s)
    if isinstance(model, GeneralizedGamma):
        beta = _beta_shape(model.m, model.xi)
        return (
            -model.gbar
            / beta
            * _gg_mgf_integrals(model.m, model.xi, model.gbar, s, 1.0)
        )
    if isinstance(model, (KDist, GeneralizedK)):
        m = 1.0 if isinstance(model, KDist) else model.m
        ms, gbs = model.m_s, model.gbar_s
        rate = ms / gbs

        def log_f(v):
            return (
                -(m + 1.0) * math.log1p(s * v / m)
                + ms * math.log(rate)
                + ms * math.log(v)
                - rate * v
            )

        return -_peak_bracketed_quad(log_f, log_scale=-gammaln(ms))
    if isinstance(model, EGK):
        if s == 0.0:
            return -model.gbar_s
        m, xi, ms, xis, gbs = model.m, model.xi, model.m_s, model.xi_s, model.gbar_s
        lam = _beta_shape(m, xi) * _beta_shape(ms, xis) / gbs
        params = FoxHParams(
            m=2,
            n=1,
            upper=((0.0, 1.0),),
            lower=((m, 1.0 / xi), (ms, 1.0 / xis)),
        )
        return -fox_h(params, lam / s, log_scale=-gammaln(m) - gammaln(ms)) / s
    if isinstance(model, Custom):
        return hyper_dmgf(model.hyper, s)
    raise TypeError(f"unknown channel model {type(model).__name__}")


# ---------------------------------------------------------------------------
# Sampling.

def sample_array(model: ChannelModel, rng: np.random.Generator, size: int):
    """size i.i.d. draws of gamma as a numpy array (the vector form of sample)."""
    if isinstance(model, OneSidedGaussian):
        return rng.gamma(0.5, 2.0 * model.gbar, size)
    if isinstance(model, Exponential):
        return rng.gamma(1.0, model.gbar, size)
    if isinstance(model, Nakagami):
        return rng.gamma(model.m, model.gbar / model.m, size)
    if isinstance(model, Maxwell):
        return rng.gamma(1.5, model.gbar / 1.5, size)
    if isinstance(model, Weibull):
        return sample_array(GeneralizedGamma(1.0, model.xi, model.gbar), rng, size)
    if isinstance(model, GeneralizedGamma):
        beta = _beta_shape(model.m, model.xi)
        return rng.gamma(model.m, 1.0, size) ** (1.0 / model.xi) * (model.gbar / beta)
    if isinstance(model, HyperGamma):
        weights = np.array([w for w, _, _ in model.components])
        picks = rng.choice(len(weights), size=size, p=weights / weights.sum())
        out = np.empty(size)
        for k, (_, m, gb) in enumerate(model.components):
            mask = picks == k
            out[mask] = rng.gamma(m, gb / m, int(mask.sum()))
        return out
    if isinstance(model, Hoyt):
        q, gbar = model.q, model.gbar
        sx = math.sqrt(gbar / (1.0 + q * q))
        sy = q * sx
        x = rng.normal(0.0, sx, size)
        y = rng.normal(0.0, sy, size)
        return x * x + y * y
    if isinstance(model, Rice):
        n, gbar = model.n, model.gbar
        sig = math.sqrt(gbar / (2.0 * (1.0 + n * n)))
        mu = n * math.sqrt(gbar / (1.0 + n * n))
        x = rng.normal(mu, sig, size)
        y = rng.normal(0.0, sig, size)
        return x * x + y * y
    if isinstance(model, Lognormal):
        return 10.0 ** (rng.normal(model.mu_db, model.sigma_db, size) / 10.0)
    if isinstance(model, KDist):
        return sample_array(GeneralizedK(1.0, model.m_s, model.gbar_s), rng, size)
    if isinstance(model, GeneralizedK):
        shadow = rng.gamma(model.m_s, model.gbar_s / model.m_s, size)
        fade = rng.gamma(model.m, 1.0 / model.m, size)
        return fade * shadow
    if isinstance(model, EGK):
        # Compound construction: unit-mean generalized-Gamma fading times
        # generalized-Gamma shadowing carrying the power.
        bf = _beta_shape(model.m, model.xi)
        bs = _beta_shape(model.m_s, model.xi_s)
        fade = rng.gamma(model.m, 1.0, size) ** (1.0 / model.xi) / bf
        shadow = rng.gamma(model.m_s, 1.0, size) ** (1.0 / model.xi_s) * (
            model.gbar_s / bs
        )
        return fade * shadow
    if isinstance(model, Custom):
        raise ValueError("sampling is not supported for custom hyper-Fox's H models")
    raise TypeError(f"unknown channel model {type(model).__name__}")


def sample(model: ChannelModel, rng: np.random.Generator) -> float:
    """One draw of gamma from the model's law using the caller's stream."""
    return float(sample_array(model, rng, 1)[0])


# ---------------------------------------------------------------------------
# Hyper-Fox's H mapping and evaluation.

def _gg_term(m, xi, gbar):
    beta = _beta_shape(m, xi)
    eta = beta / (gbar * math.exp(gammaln(m)))
    c = beta / gbar
    h = FoxHParams(m=1, n=0, upper=(), lower=(((m - 1.0 / xi), 1.0 / xi),))
    return eta, c, h


def to_hyper_foxh(model: ChannelModel) -> HyperFoxH:
    """Map a catalog model to its hyper-Fox's H mixture.

    Exact for every model except Hoyt/Rice (Gamma-mixture series truncated at
    k_trunc) and Lognormal (k_hermite point masses).
    """
    if isinstance(model, OneSidedGaussian):
        return HyperFoxH((_gg_term(0.5, 1.0, model.gbar),))
    if isinstance(model, Exponential):
        return HyperFoxH((_gg_term(1.0, 1.0, model.gbar),))
    if isinstance(model, Nakagami):
        return HyperFoxH((_gg_term(model.m, 1.0, model.gbar),))
    if isinstance(model, Maxwell):
        return HyperFoxH((_gg_term(1.5, 1.0, model.gbar),))
    if isinstance(model, Weibull):
        return HyperFoxH((_gg_term(1.0, model.xi, model.gbar),))
    if isinstance(model, GeneralizedGamma):
        return HyperFoxH((_gg_term(model.m, model.xi, model.gbar),))
    if isinstance(model, HyperGamma):
        terms = []
        for w, m, gb in model.components:
            eta, c, h = _gg_term(m, 1.0, gb)
            terms.append((w * eta, c, h))
        return HyperFoxH(tuple(terms))
    if isinstance(model, (Hoyt, Rice)):
        weights, m_k, mean_k = (
            _hoyt_mixture(model) if isinstance(model, Hoyt) else _rice_mixture(model)
        )
        terms = []
        for w, m, mean in zip(weights, m_k, mean_k):
            eta, c, h = _gg_term(float(m), 1.0, float(mean))
            terms.append((float(w) * eta, c, h))
        return HyperFoxH(tuple(terms))
    if isinstance(model, Lognormal):
        w, omega = _lognormal_mixture(model)
        point = FoxHParams(m=0, n=0, upper=(), lower=())
        return HyperFoxH(
            tuple((float(wk / ok), float(1.0 / ok), point) for wk, ok in zip(w, omega))
        )
    if isinstance(model, KDist):
        return to_hyper_foxh(GeneralizedK(1.0, model.m_s, model.gbar_s))
    if isinstance(model, GeneralizedK):
        m, ms, gbs = model.m, model.m_s, model.gbar_s
        c = m * ms / gbs
        eta = c * math.exp(-gammaln(m) - gammaln(ms))
        h = FoxHParams(
            m=2, n=0, upper=(), lower=((m - 1.0, 1.0), (ms - 1.0, 1.0))
        )
        return HyperFoxH(((eta, c, h),))
    if isinstance(model, EGK):
        m, xi, ms, xis, gbs = model.m, model.xi, model.m_s, model.xi_s, model.gbar_s
        c = _beta_shape(m, xi) * _beta_shape(ms, xis) / gbs
        eta = c * math.exp(-gammaln(m) - gammaln(ms))
        h = FoxHParams(
            m=2,
            n=0,
            upper=(),
            lower=((m - 1.0 / xi, 1.0 / xi), (ms - 1.0 / xis, 1.0 / xis)),
        )
        return HyperFoxH(((eta, c, h),))
    if isinstance(model, Custom):
        return model.hyper
    raise TypeError(f"unknown channel model {type(model).__name__}")


def hyper_pdf(h: HyperFoxH, g: float, cfg: ContourConfig = DEFAULT_CONTOUR) -> float:
    """Pointwise density of the mixture; undefined for point-mass terms."""
    if g <= 0.0:
        raise ValueError("hyper_pdf requires gamma > 0")
    if h.has_point_masses:
        raise ValueError("point-mass mixture has no pointwise density")
    return float(
        sum(eta * fox_h(hp, c * g, cfg) for eta, c, hp in h.terms)
    )


def _shifted(params: FoxHParams, head: float) -> FoxHParams:
    """Coefficient shift of the Mellin transform at 1-s with head (head, 1)
    prepended to the upper row: the MGF (head=1) / derivative (head=0) map."""
    upper = ((head, 1.0),) + tuple((a + A, A) for a, A in params.upper)
    lower = tuple((b + B, B) for b, B in params.lower)
    return FoxHParams(m=params.m, n=params.n + 1, upper=upper, lower=lower)


def hyper_mgf(h: HyperFoxH, s: float, cfg: ContourConfig = DEFAULT_CONTOUR) -> float:
    """MGF of the mixture by per-term Fox's H evaluation at argument c/s."""
    if s <= 0.0:
        raise ValueError("hyper_mgf requires s > 0")
    total = 0.0
    for eta, c, hp in h.terms:
        if hp.p == 0 and hp.q == 0:
            total += eta / c * math.exp(-s / c)
        else:
            total += eta / c * fox_h(_shifted(hp, 1.0), c / s, cfg)
    return float(total)


def hyper_dmgf(h: HyperFoxH, s: float, cfg: ContourConfig = DEFAULT_CONTOUR) -> float:
    """dM/ds of the mixture via the derivative coefficient shift."""
    if s <= 0.0:
        raise ValueError("hyper_dmgf requires s > 0")
    total = 0.0
    for eta, c, hp in h.terms:
        if hp.p == 0 and hp.q == 0:
            total += -eta / (c * c) * math.exp(-s / c)
        else:
            total += -eta / (c * s) * fox_h(_shifted(hp, 0.0), c / s, cfg)
    return float(total)
