"""Unified performance measures: conditional bit-error probability and
channel capacity under one (a, b, n) parameterization, averaged over
single-link fading (closed hyper-Fox's H forms and direct quadrature) and
over L-branch maximal-ratio combining through the joint-MGF single
integral.

Sign conventions were pinned against analytic oracles (Rayleigh/Nakagami
closed forms, e^{1/g}E_1(1/g) capacity); see the test suite.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.special import betainc, exp1, gammaincc, gammaln

from . import fading
from .fading import ChannelModel, HyperFoxH
from .mellin import DEFAULT_CONTOUR, ContourConfig, FoxHParams, fox_h
from .specfn import gcq_nodes, incomplete_beta, pfq


class QuadratureFailure(RuntimeError):
    """Adaptive quadrature did not reach its tolerance; carries the partial."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class MetricKind(enum.Enum):
    BEP_COHERENT_FSK = "bep_coherent_fsk"
    BEP_NONCOHERENT_FSK = "bep_noncoherent_fsk"
    BEP_COHERENT_PSK = "bep_coherent_psk"
    BEP_DPSK = "bep_dpsk"
    BEP_CORRELATED = "bep_correlated"
    CAPACITY = "capacity"
    CUSTOM = "custom"


_TABLE = {
    MetricKind.BEP_COHERENT_FSK: (0.5, 0.5, 1),
    MetricKind.BEP_NONCOHERENT_FSK: (0.5, 1.0, 1),
    MetricKind.BEP_COHERENT_PSK: (1.0, 0.5, 1),
    MetricKind.BEP_DPSK: (1.0, 1.0, 1),
}


@dataclass(frozen=True)
class MetricSpec:
    """The (a, b, n) triple selecting the performance measure.

    n = 1 gives a bit-error probability (a: modulation, b: detection);
    n = 2 with b = 1 gives channel capacity in nats/s/Hz with a the
    transmit power.
    """

    a: float
    b: float
    n: int
    kind: MetricKind = MetricKind.CUSTOM

    def __post_init__(self):
        if self.a <= 0.0:
            raise ValueError("metric parameter a must be positive")
        if not 0.0 < self.b <= 1.0:
            raise ValueError("metric parameter b must lie in (0, 1]")
        if self.n not in (1, 2):
            raise ValueError("metric parameter n must be 1 or 2")
        if self.kind in _TABLE and (self.a, self.b, self.n) != _TABLE[self.kind]:
            raise ValueError(f"(a, b, n) inconsistent with {self.kind.value}")
        if self.kind is MetricKind.CAPACITY and (self.b, self.n) != (1.0, 2):
            raise ValueError("capacity requires b = 1, n = 2")
        if self.kind is MetricKind.BEP_CORRELATED and not (
            self.a <= 1.0 and self.b == 0.5 and self.n == 1
        ):
            raise ValueError("correlated binary signaling requires a <= 1, b = 1/2, n = 1")

    @property
    def is_bep(self) -> bool:
        return self.n == 1

    @staticmethod
    def bep_coherent_fsk() -> "MetricSpec":
        return MetricSpec(0.5, 0.5, 1, MetricKind.BEP_COHERENT_FSK)

    @staticmethod
    def bep_noncoherent_fsk() -> "MetricSpec":
        return MetricSpec(0.5, 1.0, 1, MetricKind.BEP_NONCOHERENT_FSK)

    @staticmethod
    def bep_coherent_psk() -> "MetricSpec":
        return MetricSpec(1.0, 0.5, 1, MetricKind.BEP_COHERENT_PSK)

    @staticmethod
    def bep_dpsk() -> "MetricSpec":
        return MetricSpec(1.0, 1.0, 1, MetricKind.BEP_DPSK)

    @staticmethod
    def bep_correlated(a: float) -> "MetricSpec":
        return MetricSpec(a, 0.5, 1, MetricKind.BEP_CORRELATED)

    @staticmethod
    def capacity(a: float = 1.0) -> "MetricSpec":
        return MetricSpec(a, 1.0, 2, MetricKind.CAPACITY)

    @staticmethod
    def custom(a: float, b: float, n: int) -> "MetricSpec":
        return MetricSpec(a, b, n, MetricKind.CUSTOM)


@dataclass(frozen=True)
class JointMgf:
    """Joint MGF M(s) = E[exp(-s sum_l gamma_l)] of the combiner input.

    deriv may be omitted; a central finite difference with step
    1e-5 * max(1, s) stands in.
    """

    eval: Callable[[float], float]
    deriv: Callable[[float], float] | None = None

    def deriv_at(self, s: float) -> float:
        if self.deriv is not None:
            return self.deriv(s)
        h = 1e-5 * max(1.0, s)
        lo = max(s - h, 0.0)
        return (self.eval(s + h) - self.eval(lo)) / (s + h - lo)

    def check(self, nodes=None) -> None:
        """Sanity of the contract: M(0+) = 1 and M' <= 0 on a node set."""
        m0 = self.eval(1e-12)
        if abs(m0 - 1.0) > 1e-8:
            raise ValueError(f"joint MGF evaluates to {m0!r} at s -> 0+, expected 1")
        if nodes is None:
            nodes = gcq_nodes(16).nodes
        for s in nodes:
            if self.deriv_at(float(s)) > 1e-12:
                raise ValueError(f"joint MGF derivative is positive at s = {s:g}")


# ---------------------------------------------------------------------------
# Conditional (instantaneous) measures.

def conditional_up(metric: MetricSpec, g: float) -> float:
    """Conditional unified performance at instantaneous SNR g.

    BEP metrics use the incomplete-gamma closed form, capacity the
    logarithm; any other (a, b, n) goes through the Meijer's G
    representation.
    """
    if g < 0.0:
        raise ValueError("conditional_up requires gamma >= 0")
    a, b, n = metric.a, metric.b, metric.n
    if n == 1:
        return float(gammaincc(b, a * g)) / 2.0
    if b == 1.0:
        return math.log1p(a * g)
    if g == 0.0:
        return 0.0
    return conditional_up_meijer(metric, g)


def conditional_up_meijer(
    metric: MetricSpec, g: float, cfg: ContourConfig = DEFAULT_CONTOUR
) -> float:
    """The Meijer's G form of the conditional measure (contour-evaluated)."""
    if g <= 0.0:
        return 0.5 if metric.n == 1 else 0.0
    a, b, n = metric.a, metric.b, metric.n
    params = FoxHParams(
        m=1,
        n=n,
        upper=tuple(((1.0, 1.0),) * n),
        lower=((b, 1.0), (0.0, 1.0)),
    )
    gval = fox_h(params, a * g, cfg)
    return 1.0 - 0.5 * n * (1.0 - (-1.0) ** n / math.gamma(b) * gval)


def _gauss_2f1_bb(b: float, x: float) -> float:
    """2F1(b, b; b+1; -x) for x >= 0, via the Pfaff map to a convergent series."""
    if x == 0.0:
        return 1.0
    if b == 1.0:
        return math.log1p(x) / x
    w = x / (1.0 + x)
    return (1.0 + x) ** (-b) * pfq([b, 1.0], [b + 1.0], w)


def conditional_up_identities(metric: MetricSpec, g: float, d: float = 1e6) -> dict:
    """Alternate representations of the conditional measure, for cross-checks.

    Returns the production value together with the incomplete-beta limit
    form (at finite d), the hypergeometric form, the Meijer's G form, and
    for capacity the incomplete-beta and Gauss-2F1 identities.
    """
    if g <= 0.0:
        raise ValueError("identity surface needs gamma > 0")
    a, b, n = metric.a, metric.b, metric.n
    out = {"production": conditional_up(metric, g)}

    # Hypergeometric representation (sign pinned by the closed-form oracles).
    if n == 1:
        f11 = math.exp(-a * g) * pfq([1.0], [b + 1.0], a * g)
        x_term = (a * g) ** b / math.gamma(b + 1.0) * f11
    else:
        x_term = (a * g) ** b / math.gamma(b + 1.0) * _gauss_2f1_bb(b, a * g)
    out["pfq"] = 1.0 - 0.5 * n * (1.0 - (-1.0) ** n * x_term)

    out["meijer_g"] = conditional_up_meijer(metric, g)

    if n == 1:
        # BEP limit representation at large finite d: the e^{-i pi b} phase
        # cancels the (-z)^b branch factor of the incomplete beta.
        z = -a * g / d
        beta_val = incomplete_beta(z, b, 1.0 - d)
        phased = complex(math.cos(math.pi * b), -math.sin(math.pi * b)) * complex(
            beta_val
        )
        out["beta_limit_d"] = 0.5 - d**b * phased.real / (2.0 * math.gamma(b))
    else:
        out["beta_capacity"] = -float(np.real(incomplete_beta(-a * g, 1.0, 0.0)))
        out["gauss_2f1"] = a * g * _gauss_2f1_bb(1.0, a * g)
    return out


# ---------------------------------------------------------------------------
# Single-link averaging.

def _quad(f, lo, hi, **kw):
    opts = dict(epsabs=1e-12, epsrel=1e-11, limit=400)
    opts.update(kw)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, lo, hi, **opts)
        except integrate.IntegrationWarning as exc:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                val, err = integrate.quad(f, lo, hi, **opts)
            if err > 1e-6 * max(abs(val), 1e-12):
                raise QuadratureFailure(
                    f"quadrature stalled: {exc} (partial {val!r} +- {err:.2e})",
                    partial=val,
                ) from exc
    return val


def aup_single_quadrature(model: ChannelModel, metric: MetricSpec) -> float:
    """E[P_UP(gamma)] by direct adaptive quadrature against the SNR density."""
    f = lambda g: conditional_up(metric, g) * fading.pdf(model, g)
    return _quad(f, 0.0, np.inf)


def _combined_params(term: FoxHParams, metric: MetricSpec) -> FoxHParams:
    """Fox's H parameters of one averaged-measure term (argument c/a).

    Fronts: upper (1-b, 1) then the theta-shifted upper fronts; lower n
    copies of (0, 1) then the phi-shifted lower fronts. Tails: upper (1, 1)
    then shifted upper tails; lower the shifted lower tails.
    """
    b, n = metric.b, metric.n
    up_front = [(1.0 - b, 1.0)] + [
        (a + A, A) for a, A in term.upper[: term.n]
    ]
    up_tail = [(1.0, 1.0)] + [(a + A, A) for a, A in term.upper[term.n :]]
    lo_front = [(0.0, 1.0)] * n + [(bb + B, B) for bb, B in term.lower[: term.m]]
    lo_tail = [(bb + B, B) for bb, B in term.lower[term.m :]]
    return FoxHParams(
        m=term.m + n,
        n=term.n + 1,
        upper=tuple(up_front + up_tail),
        lower=tuple(lo_front + lo_tail),
    )


def _assemble(metric: MetricSpec, averaged_g: float) -> float:
    b, n = metric.b, metric.n
    return 1.0 - 0.5 * n * (1.0 - (-1.0) ** n / math.gamma(b) * averaged_g)


def aup_single_closed(
    h: HyperFoxH, metric: MetricSpec, cfg: ContourConfig = DEFAULT_CONTOUR
) -> float:
    """Averaged measure over a hyper-Fox's H distribution, as a finite sum
    of Fox's H evaluations at arguments c_i/a."""
    a = metric.a
    total = 0.0
    for eta, c, term in h.terms:
        total += eta / c * fox_h(_combined_params(term, metric), c / a, cfg)
    return _assemble(metric, total)


def aup_single(model: ChannelModel, metric: MetricSpec) -> float:
    """Closed-form averaged measure of a catalog model."""
    return aup_single_closed(fading.to_hyper_foxh(model), metric)


def aup_gnm(m: float, xi: float, gbar: float, metric: MetricSpec) -> float:
    """Generalized Nakagami-m averaged measure via its single Fox's H term."""
    beta = math.exp(gammaln(m + 1.0 / xi) - gammaln(m))
    params = _combined_params(
        FoxHParams(m=1, n=0, upper=(), lower=((m - 1.0 / xi, 1.0 / xi),)), metric
    )
    hval = fox_h(params, beta / (metric.a * gbar), log_scale=-gammaln(m))
    return _assemble(metric, hval)


def aup_lognormal(
    mu_db: float, sigma_db: float, k_hermite: int, metric: MetricSpec
) -> float:
    """Lognormal averaged measure: Hermite point-mass mixture of the
    conditional values."""
    model = fading.Lognormal(mu_db, sigma_db, k_hermite)
    w, omega = fading._lognormal_mixture(model)
    return float(sum(wk * conditional_up(metric, ok) for wk, ok in zip(w, omega)))


def aup_egk(
    m: float, xi: float, m_s: float, xi_s: float, gbar_s: float, metric: MetricSpec
) -> float:
    """EGK averaged measure via its single two-gamma Fox's H term."""
    lam = math.exp(gammaln(m + 1.0 / xi) - gammaln(m)) * math.exp(
        gammaln(m_s + 1.0 / xi_s) - gammaln(m_s)
    )
    params = _combined_params(
        FoxHParams(
            m=2,
            n=0,
            upper=(),
            lower=((m - 1.0 / xi, 1.0 / xi), (m_s - 1.0 / xi_s, 1.0 / xi_s)),
        ),
        metric,
    )
    hval = fox_h(
        params,
        lam / (metric.a * gbar_s),
        log_scale=-gammaln(m) - gammaln(m_s),
    )
    return _assemble(metric, hval)


# ---------------------------------------------------------------------------
# L-branch MRC through the joint MGF (Theorem-3 single integral).

def theorem3_kernel(
    metric: MetricSpec, s: float, cfg: ContourConfig = DEFAULT_CONTOUR
) -> float:
    """The G^{1,n}_{n+1,2}[a/s | 1..1,1; b,0] kernel of the MGF integral.

    Closed forms: for n = 1 it is Gamma(b) * I(a/s; b, 1-b) with I the
    regularized incomplete beta (a unit step for b = 1); for n = 2, b = 1
    it is E_1(s/a). Anything else falls back to the contour.
    """
    a, b, n = metric.a, metric.b, metric.n
    if s <= 0.0:
        raise ValueError("kernel needs s > 0")
    if n == 1:
        if b == 1.0:
            return 1.0 if s <= a else 0.0
        if s <= a:
            return math.gamma(b)
        return math.gamma(b) * float(betainc(b, 1.0 - b, a / s))
    if b == 1.0:
        return float(exp1(s / a))
    params = FoxHParams(
        m=1,
        n=n,
        upper=tuple(((1.0, 1.0),) * n) + ((1.0, 1.0),),
        lower=((b, 1.0), (0.0, 1.0)),
    )
    return fox_h(params, a / s, cfg)


def _mrc_integral_adaptive(joint: JointMgf, metric: MetricSpec) -> float:
    """int_0^inf kernel(s) M'(s) ds, split at the kernel breakpoint s = a."""
    a, b, n = metric.a, metric.b, metric.n
    if n == 1:
        # Kernel constant Gamma(b) below a: that piece is Gamma(b)(M(a)-1).
        total = math.gamma(b) * (joint.eval(a) - 1.0)
        if b < 1.0:
            f = lambda s: theorem3_kernel(metric, s) * joint.deriv_at(s)
            total += _quad(f, a, np.inf)
        return total
    if n == 2 and b == 1.0:
        f = lambda s: float(exp1(s / a)) * joint.deriv_at(s)
        return _quad(f, 0.0, a) + _quad(f, a, np.inf)
    raise ValueError(
        "MRC averaging supports n = 1 (any b) and n = 2 with b = 1; "
        f"got n={n}, b={b}"
    )


def _mrc_integral_gcq(joint: JointMgf, metric: MetricSpec, N: int) -> float:
    rule = gcq_nodes(N)
    return float(
        sum(
            w * theorem3_kernel(metric, float(s)) * joint.deriv_at(float(s))
            for s, w in zip(rule.nodes, rule.weights)
        )
    )


def aup_mrc(
    joint: JointMgf, metric: MetricSpec, N: int = 64, method: str = "adaptive"
) -> float:
    """Averaged measure of an MRC combiner from its joint MGF.

    method="adaptive" (production) integrates the single-integral form by
    kernel-aware adaptive quadrature, exact at the kernel breakpoint.
    method="gcq" is the literal N-node tan-Chebyshev sum, which converges
    only at O(N^-2); it is kept as the printed estimator for cross-checks.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if method == "adaptive":
        integral = _mrc_integral_adaptive(joint, metric)
    elif method == "gcq":
        if metric.n == 2 and metric.b != 1.0:
            raise ValueError("GCQ path supports n = 1 or capacity (n = 2, b = 1)")
        integral = _mrc_integral_gcq(joint, metric, N)
    else:
        raise ValueError(f"unknown method {method!r}")
    b, n = metric.b, metric.n
    value = 1.0 - 0.5 * n * (1.0 + (-1.0) ** n / math.gamma(b) * integral)
    if not math.isfinite(value):
        raise QuadratureFailure(f"non-finite MRC value {value!r}", partial=value)
    return value


def product_joint_mgf(models: Sequence[ChannelModel]) -> JointMgf:
    """Joint MGF of independent branches: the product of per-branch MGFs,
    with the product-rule derivative."""
    models = list(models)
    if not models:
        raise ValueError("need at least one branch")

    def eval_(s: float) -> float:
        out = 1.0
        for mod in models:
            out *= fading.mgf(mod, s)
        return out

    def deriv(s: float) -> float:
        vals = [fading.mgf(mod, s) for mod in models]
        dvals = [fading.dmgf(mod, s) for mod in models]
        total = 0.0
        for i in range(len(models)):
            prod = dvals[i]
            for j, v in enumerate(vals):
                if j != i:
                    prod *= v
            total += prod
        return total

    return JointMgf(eval=eval_, deriv=deriv)


def aup_mrc_independent(
    models: Sequence[ChannelModel],
    metric: MetricSpec,
    N: int = 64,
    method: str = "adaptive",
) -> float:
    """MRC over independent, not necessarily identical branches."""
    return aup_mrc(product_joint_mgf(models), metric, N, method)


def aup_nakagami_identical_mrc(
    m: float, gbar: float, L: int, metric: MetricSpec
) -> float:
    """Closed form for L identical Nakagami branches: the combiner SNR is
    Gamma with shape m*L and mean L*gbar, so the single-link closed form
    applies with those parameters."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return aup_gnm(m * L, 1.0, L * gbar, metric)
