"""Numerical Fox's H (and Meijer's G) by Mellin-Barnes contour integration.

The H function is the inverse Mellin transform

    H[z] = (1/2*pi*i) * int_C K(s) z^(-s) ds,

    K(s) =  prod_{j<=m} Gamma(b_j + B_j s) * prod_{j<=n} Gamma(1 - a_j - A_j s)
          / (prod_{j>m} Gamma(1 - b_j - B_j s) * prod_{j>n} Gamma(a_j + A_j s)),

with C a contour separating the two pole families: the poles of the
front-lower gammas run left from -b_j/B_j, those of the front-upper gammas
run right from (1-a_j)/A_j, so C must cross the real axis inside the open
strip between them.

Evaluation strategy: a vertical line through an abscissa chosen to minimize
the t=0 integrand magnitude inside the strip (all computation in log-gamma
space to dodge overflow), refined by node doubling. When the gamma products
alone decay too slowly along the vertical, the endpoints are bent into
hyperbolas at +-45 degrees toward the half plane where z^(-s) decays; every
pole sits on the real axis, so the bent path crosses no pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import loggamma


class FoxHError(RuntimeError):
    """Base class for Fox's H evaluation failures."""


class EmptyStripError(FoxHError, ValueError):
    """The two gamma pole families leave no contour strip."""


class ContourConvergenceError(FoxHError):
    """The contour integrand failed to decay within the truncation cap."""


class ImaginaryResidueError(FoxHError):
    """The contour integral returned a non-negligible imaginary part."""


class ConvergenceStrip(NamedTuple):
    c_lo: float
    c_hi: float


@dataclass(frozen=True)
class FoxHParams:
    """Orders and coefficient pairs of H^{m,n}_{p,q}.

    upper holds the p pairs (a_j, A_j), lower the q pairs (b_j, B_j); the
    first n upper and first m lower pairs are the "front" gammas appearing
    in the numerator of the Mellin kernel.
    """

    m: int
    n: int
    upper: tuple[tuple[float, float], ...]
    lower: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "upper", tuple((float(a), float(A)) for a, A in self.upper)
        )
        object.__setattr__(
            self, "lower", tuple((float(b), float(B)) for b, B in self.lower)
        )
        if not (0 <= self.n <= self.p and 0 <= self.m <= self.q):
            raise ValueError(
                f"invalid orders m={self.m}, n={self.n}, p={self.p}, q={self.q}"
            )
        if any(A <= 0.0 for _, A in self.upper) or any(B <= 0.0 for _, B in self.lower):
            raise ValueError("all scale exponents A_j, B_j must be positive")

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)


@dataclass(frozen=True)
class ContourConfig:
    """Knobs of the contour quadrature.

    abscissa_fraction places the contour inside finite strips when
    auto_abscissa is off; truncation_height caps the contour half-height;
    max_panels caps node-doubling refinement.
    """

    abscissa_fraction: float = 0.5
    truncation_height: float = 400.0
    max_panels: int = 1 << 15
    rel_tol: float = 1e-9
    auto_abscissa: bool = True

    def __post_init__(self):
        if not (0.0 < self.abscissa_fraction < 1.0):
            raise ValueError("abscissa_fraction must lie in (0, 1)")
        if self.truncation_height <= 0.0 or self.rel_tol <= 0.0:
            raise ValueError("truncation_height and rel_tol must be positive")
        if self.max_panels < 64:
            raise ValueError("max_panels must be at least 64")


DEFAULT_CONTOUR = ContourConfig()

_IMAG_REL_TOL = 1e-8
_TINY = 1e-300


def validate(params: FoxHParams) -> ConvergenceStrip:
    """Return the open abscissa strip, or raise EmptyStripError."""
    c_lo = -math.inf
    for j in range(params.m):
        b, B = params.lower[j]
        c_lo = max(c_lo, -b / B)
    c_hi = math.inf
    for j in range(params.n):
        a, A = params.upper[j]
        c_hi = min(c_hi, (1.0 - a) / A)
    if not c_lo < c_hi:
        raise EmptyStripError(
            "empty contour strip: front-lower poles reach up to "
            f"max_j(-b_j/B_j) = {c_lo:g} while front-upper poles reach down to "
            f"min_j((1-a_j)/A_j) = {c_hi:g}"
        )
    return ConvergenceStrip(c_lo, c_hi)


def _log_kernel(params: FoxHParams, s, lnz: float):
    """log of the Mellin integrand K(s) z^(-s) for complex s (vectorized)."""
    s = np.asarray(s, dtype=complex)
    L = -s * lnz
    for j, (b, B) in enumerate(params.lower):
        if j < params.m:
            L = L + loggamma(b + B * s)
        else:
            L = L - loggamma(1.0 - b - B * s)
    for j, (a, A) in enumerate(params.upper):
        if j < params.n:
            L = L + loggamma(1.0 - a - A * s)
        else:
            L = L - loggamma(a + A * s)
    return L


def _decay_exponent(params: FoxHParams) -> float:
    """Coefficient a* of the e^{-(pi/2) a* |t|} decay along a vertical line."""
    a_star = 0.0
    for j, (_, A) in enumerate(params.upper):
        a_star += A if j < params.n else -A
    for j, (_, B) in enumerate(params.lower):
        a_star += B if j < params.m else -B
    return a_star


def _real_L(params: FoxHParams, c: float, lnz: float) -> float:
    val = _log_kernel(params, complex(c), lnz).real
    if not np.isfinite(val):
        return 1e30
    return float(val)


def _pick_abscissa(
    params: FoxHParams, strip: ConvergenceStrip, lnz: float, cfg: ContourConfig
) -> float:
    c_lo, c_hi = strip
    if not cfg.auto_abscissa:
        if not (math.isfinite(c_lo) and math.isfinite(c_hi)):
            raise FoxHError(
                "abscissa_fraction placement needs a finite strip; "
                "enable auto_abscissa for half-infinite strips"
            )
        return c_lo + cfg.abscissa_fraction * (c_hi - c_lo)

    # Grow a finite search bracket into any infinite strip end while the
    # t=0 magnitude keeps falling.
    def probe_bound(start: float, direction: float) -> float:
        pos, step = start, 1.0
        val = _real_L(params, pos, lnz)
        for _ in range(80):
            nxt = pos + direction * step
            nval = _real_L(params, nxt, lnz)
            if nval >= val:
                return nxt
            pos, val = nxt, nval
            step *= 2.0
        return pos

    if math.isfinite(c_lo) and math.isfinite(c_hi):
        pad = 1e-4 * (c_hi - c_lo)
        lo, hi = c_lo + pad, c_hi - pad
    elif math.isfinite(c_lo):
        lo = c_lo + 1e-4 * max(1.0, abs(c_lo))
        hi = probe_bound(lo + 1.0, +1.0)
    elif math.isfinite(c_hi):
        hi = c_hi - 1e-4 * max(1.0, abs(c_hi))
        lo = probe_bound(hi - 1.0, -1.0)
    else:
        lo = probe_bound(0.0, -1.0)
        hi = probe_bound(0.0, +1.0)
    if not lo < hi:
        lo, hi = min(lo, hi), max(lo, hi)
        if lo == hi:
            return lo
    res = minimize_scalar(
        lambda c: _real_L(params, c, lnz),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-8 * max(1.0, hi - lo)},
    )
    c = float(res.x)
    # Nudge off any tail-gamma pole sitting exactly on the real axis node.
    width = (c_hi - c_lo) if math.isfinite(c_hi - c_lo) else 1.0
    for j in range(params.m, params.q):
        b, B = params.lower[j]
        arg = 1.0 - b - B * c
        if arg <= 0.5 and abs(arg - round(arg)) < 1e-12:
            c += 1e-6 * min(1.0, width)
    for j in range(params.n, params.p):
        a, A = params.upper[j]
        arg = a + A * c
        if arg <= 0.5 and abs(arg - round(arg)) < 1e-12:
            c += 1e-6 * min(1.0, width)
    return c


def _path(c: float, slope_dir: float, t0: float):
    """Hyperbolic bent path s(t) and its derivative. slope_dir 0 = straight."""

    def s_of(t):
        t = np.asarray(t, dtype=float)
        if slope_dir == 0.0:
            return c + 1j * t
        return c + slope_dir * (np.hypot(t, t0) - t0) + 1j * t

    def ds_of(t):
        t = np.asarray(t, dtype=float)
        if slope_dir == 0.0:
            return np.full(t.shape, 1j)
        return slope_dir * t / np.hypot(t, t0) + 1j

    return s_of, ds_of


def _choose_height(params, lnz, c, slope_dir, t0, cfg) -> float:
    """Smallest T where the path integrand has dropped far below its peak.

    Accepts the truncation cap provisionally when the drop is at least 25
    nats; the quadrature then verifies the actual tail contribution.
    """
    s_of, _ = _path(c, slope_dir, t0)
    peak = _real_L(params, c, lnz)
    drop = max(36.0, -math.log(cfg.rel_tol) + 16.0)
    a_star = _decay_exponent(params)
    T = drop / (0.5 * math.pi * a_star) if a_star > 0.25 else 10.0
    T = min(max(T, 5.0), cfg.truncation_height)
    for _ in range(200):
        tail = float(_log_kernel(params, s_of(T), lnz).real)
        if tail - peak <= -drop:
            return T
        if T >= cfg.truncation_height:
            if tail - peak <= -25.0:
                return T
            raise ContourConvergenceError(
                f"integrand not decayed at the truncation cap T={T:g} "
                f"(dropped {peak - tail:.1f} of {drop:.1f} nats)"
            )
        T = min(T * 1.6, cfg.truncation_height)
    raise ContourConvergenceError("failed to locate a truncation height")


def _quadrature(params, lnz, c, slope_dir, t0, T, cfg, log_scale=0.0):
    s_of, ds_of = _path(c, slope_dir, t0)
    npts = 257
    prev = None
    while True:
        t = np.linspace(-T, T, npts)
        F = _log_kernel(params, s_of(t), lnz) + np.log(ds_of(t))
        re = F.real
        M = float(np.max(re[np.isfinite(re)], initial=-math.inf))
        if M == -math.inf:
            return 0.0 + 0.0j, 0.0
        vals = np.exp(np.where(np.isfinite(re), F - M, -math.inf))
        integral = np.trapezoid(vals, t) / (2.0j * math.pi)
        mag = abs(integral)
        if mag == 0.0:
            cur = 0.0 + 0.0j
        else:
            log_value = M + log_scale + math.log(mag)
            if log_value > 709.0:
                raise FoxHError(
                    f"H value magnitude exp({log_value:.1f}) overflows a double; "
                    "fold prefactors in via log_scale"
                )
            cur = (integral / mag) * math.exp(max(log_value, -745.0)) if log_value > -745.0 else 0.0 + 0.0j
        if prev is not None:
            err = abs(cur - prev)
            if err <= cfg.rel_tol * max(abs(cur), _TINY):
                # Neglected tail beyond +-T, from the local decay rate of
                # the last stretch of nodes on each side.
                k = max(2, npts // 64)
                tail = 0.0
                for head, anchor in ((vals[-1], vals[-1 - k]), (vals[0], vals[k])):
                    mag, ref = abs(head), abs(anchor)
                    span = t[-1] - t[-1 - k]
                    if mag == 0.0:
                        continue
                    rate = math.log(max(ref, _TINY) / mag) / span
                    if rate <= 0.0:
                        tail = math.inf
                        break
                    tail += mag / rate
                if tail > cfg.rel_tol * max(abs(integral), _TINY) * 8.0:
                    raise ContourConvergenceError(
                        "tail beyond the truncation cap is not negligible "
                        f"(estimate {tail:.2e} of {abs(integral):.2e})"
                    )
                return cur, err
        prev = cur
        if npts >= cfg.max_panels:
            raise ContourConvergenceError(
                f"node doubling exhausted at {npts} points "
                f"(last change {abs(cur - (prev if prev is not None else 0)):.3e})"
            )
        npts = 2 * npts - 1


def fox_h(
    params: FoxHParams,
    z: float,
    cfg: ContourConfig = DEFAULT_CONTOUR,
    log_scale: float = 0.0,
) -> float:
    """Evaluate exp(log_scale) * H^{m,n}_{p,q}[z | (a,A); (b,B)] for real z > 0.

    log_scale lets callers fold in huge or tiny prefactors (reciprocal gamma
    products) without leaving log space. The result is real for real
    parameter sets; an imaginary residue above 1e-8 of the magnitude raises
    ImaginaryResidueError.
    """
    if z <= 0.0:
        raise ValueError("fox_h requires z > 0")
    strip = validate(params)
    lnz = math.log(z)
    c = _pick_abscissa(params, strip, lnz, cfg)
    a_star = _decay_exponent(params)

    candidates = [0.0] if a_star > 0.25 else []
    t0 = 5.0
    if a_star <= 0.25:
        # Bend toward the half plane where the integrand actually decays.
        trials = []
        for d in (+1.0, -1.0):
            s_of, _ = _path(c, d, t0)
            lo = float(_log_kernel(params, s_of(30.0), lnz).real)
            hi = float(_log_kernel(params, s_of(90.0), lnz).real)
            trials.append((hi - lo, d))
        trials.sort()
        candidates = [d for slope, d in trials if slope < 0.0]
        if not candidates:
            raise ContourConvergenceError(
                "integrand decays in neither bent direction "
                f"(a* = {a_star:g}, z = {z:g})"
            )

    last_exc = None
    for slope_dir in candidates:
        try:
            T = _choose_height(params, lnz, c, slope_dir, t0, cfg)
            value, _ = _quadrature(params, lnz, c, slope_dir, t0, T, cfg, log_scale)
            break
        except ContourConvergenceError as exc:
            last_exc = exc
    else:
        raise last_exc

    re, im = value.real, value.imag
    if abs(im) > max(_IMAG_REL_TOL * abs(re), 1e-280):
        raise ImaginaryResidueError(
            f"imaginary residue {im:.3e} vs real part {re:.3e}"
        )
    return float(re)


def meijer_g(
    m: int,
    n: int,
    p: int,
    q: int,
    upper: Sequence[float],
    lower: Sequence[float],
    z: float,
    cfg: ContourConfig = DEFAULT_CONTOUR,
    log_scale: float = 0.0,
) -> float:
    """Meijer's G^{m,n}_{p,q}[z | a; b]: Fox's H with unit scale exponents."""
    upper = tuple(float(a) for a in upper)
    lower = tuple(float(b) for b in lower)
    if len(upper) != p or len(lower) != q:
        raise ValueError("upper/lower lengths must match the stated orders p, q")
    params = FoxHParams(
        m=m,
        n=n,
        upper=tuple((a, 1.0) for a in upper),
        lower=tuple((b, 1.0) for b in lower),
    )
    return fox_h(params, z, cfg, log_scale)
