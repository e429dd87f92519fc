"""Scalar special functions and quadrature-node generators.

Everything here is a pure function of its arguments. The heavy lifting for
gamma-type functions is delegated to scipy.special, which delivers better
than the 1e-12 relative accuracy budgeted on the working strip; the
generalized hypergeometric series and the tan-Chebyshev rule are implemented
directly because their exact form matters downstream.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import betainc, expi, gammaincc
from scipy.special import gamma as _gamma
from scipy.special import loggamma as _loggamma


class NonConvergenceError(RuntimeError):
    """A series or quadrature failed to converge; carries partial results."""

    def __init__(self, message, partial=None, terms=None):
        super().__init__(message)
        self.partial = partial
        self.terms = terms


class RuleKind(enum.Enum):
    GAUSS_HERMITE = "gauss_hermite"
    GCQ = "gcq"


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a fixed quadrature rule.

    For GAUSS_HERMITE the rule integrates f against exp(-u^2) on the real
    line (physicists' convention, sum of weights = sqrt(pi)). For GCQ the
    rule estimates integrals over (0, inf) through the tan-of-Chebyshev
    substitution; all nodes are strictly positive.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: RuleKind

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.size == 0 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be nonempty and equal length")
        if not np.all(weights > 0.0):
            raise ValueError("weights must be positive")
        if self.kind is RuleKind.GCQ and not np.all((nodes > 0.0) & np.isfinite(nodes)):
            raise ValueError("GCQ nodes must be strictly positive and finite")


def log_gamma_complex(z: complex) -> complex:
    """Principal branch of log Gamma(z).

    Raises a pole error at nonpositive integers. exp(log_gamma_complex(x))
    recovers Gamma(x) for real x > 0.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise ValueError(f"log-gamma pole at z={z.real:g}")
    return complex(_loggamma(z))


def upper_incomplete_gamma(b: float, x: float) -> float:
    """Complementary (upper) incomplete gamma Gamma(b, x), unregularized."""
    if b <= 0.0:
        raise ValueError("upper_incomplete_gamma requires b > 0")
    if x < 0.0:
        raise ValueError("upper_incomplete_gamma requires x >= 0")
    return float(gammaincc(b, x) * _gamma(b))


def incomplete_beta(z: float, a: float, b: float) -> float | complex:
    """Incomplete beta B(z; a, b) = int_0^z u^(a-1) (1-u)^(b-1) du.

    Negative z and nonpositive b are allowed. For z < 0 the principal
    branch z^a makes the value genuinely complex unless a is an integer;
    a complex number is returned in that case, a float otherwise.
    """
    if a <= 0.0:
        raise ValueError("incomplete_beta requires a > 0")
    if z >= 1.0:
        raise ValueError("incomplete_beta requires z < 1 (divergent endpoint)")
    if z == 0.0:
        return 0.0
    if 0.0 < z < 1.0 and b > 0.0:
        return float(betainc(a, b, z) * _gamma(a) * _gamma(b) / _gamma(a + b))
    # Remaining cases (z < 0, or b <= 0): B = z^a * int_0^1 v^(a-1) (1-z v)^(b-1) dv,
    # where the integral is real because 1 - z v stays positive. The
    # substitution v = w^(1/a) removes the endpoint singularity.
    val, _ = integrate.quad(
        lambda w: (1.0 - z * w ** (1.0 / a)) ** (b - 1.0) / a,
        0.0,
        1.0,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=200,
    )
    if z > 0.0:
        return float(z**a * val)
    phase = complex(z) ** a  # principal branch, (-|z|)^a = |z|^a e^{i pi a}
    result = phase * val
    if abs(result.imag) <= 1e-13 * max(1.0, abs(result.real)):
        return float(result.real)
    return complex(result)


def exp_integral_ei(x: float) -> float:
    """Cauchy principal value of the exponential integral Ei(x), x != 0.

    E_1(x) = -Ei(-x) for x > 0 connects this to the decaying branch.
    """
    if x == 0.0:
        raise ValueError("Ei has a logarithmic pole at x = 0")
    return float(expi(x))


def pfq(numer, denom, z: float, max_terms: int = 10_000, rtol: float = 1e-16) -> float:
    """Generalized hypergeometric pFq by guarded power series.

    Sums sum_k prod(numer)_k / prod(denom)_k * z^k / k! with a term-ratio
    convergence guard. Valid when the series converges (p <= q anywhere,
    p = q+1 inside |z| < 1); raises NonConvergenceError with the partial
    sum otherwise.
    """
    numer = [float(v) for v in numer]
    denom = [float(v) for v in denom]
    if len(numer) > len(denom) + 1 and z != 0.0:
        raise NonConvergenceError(
            f"pFq series with p={len(numer)} > q+1={len(denom) + 1} diverges"
        )
    if len(numer) == 2 and len(denom) == 1 and z <= -0.5:
        # Gauss 2F1 at or beyond the convergence boundary: Pfaff map
        # 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)) brings the
        # argument back inside the disk (the log-form reachability route).
        w = z / (z - 1.0)
        if w < 0.999:
            a1, a2 = numer
            c1 = denom[0]
            return (1.0 - z) ** (-a1) * pfq([a1, c1 - a2], [c1], w, max_terms, rtol)
        raise NonConvergenceError(
            f"2F1 argument z={z:g} maps to w={w:g}, too close to the boundary"
        )
    for d in denom:
        if d <= 0.0 and d == int(d):
            raise ValueError(f"pFq lower parameter {d:g} is a nonpositive integer")
    total = 1.0
    term = 1.0
    for k in range(max_terms):
        factor = z / (k + 1.0)
        for av in numer:
            factor *= av + k
        for dv in denom:
            factor /= dv + k
        term *= factor
        total += term
        if abs(term) < rtol * abs(total):
            return float(total)
        if not math.isfinite(total):
            raise NonConvergenceError(
                f"pFq series overflowed after {k + 1} terms", partial=total, terms=k + 1
            )
    raise NonConvergenceError(
        f"pFq series did not converge in {max_terms} terms "
        f"(last |term|/|sum| = {abs(term) / max(abs(total), 1e-300):.2e})",
        partial=total,
        terms=max_terms,
    )


def gcq_nodes(N: int) -> QuadratureRule:
    """N-node tan-Chebyshev rule for integrals over (0, inf).

    Nodes s_n = tan(pi/4 * cos((2n-1)pi/(2N)) + pi/4) and weights
    w_n = pi^2 sin((2n-1)pi/(2N)) / (4N cos^2(pi/4 cos((2n-1)pi/(2N)) + pi/4)),
    i.e. the Chebyshev midpoint rule pushed through s = tan(phi).
    """
    if N < 1:
        raise ValueError("gcq_nodes requires N >= 1")
    n = np.arange(1, N + 1, dtype=float)
    theta = (2.0 * n - 1.0) * np.pi / (2.0 * N)
    phi = 0.25 * np.pi * np.cos(theta) + 0.25 * np.pi
    nodes = np.tan(phi)
    weights = np.pi**2 * np.sin(theta) / (4.0 * N * np.cos(phi) ** 2)
    return QuadratureRule(nodes=nodes, weights=weights, kind=RuleKind.GCQ)


def gauss_hermite_nodes(K: int) -> QuadratureRule:
    """Abscissas and weights of the K-point Gauss-Hermite rule.

    Physicists' convention: integrates against exp(-u^2), so the weights
    sum to sqrt(pi).
    """
    if K < 1:
        raise ValueError("gauss_hermite_nodes requires K >= 1")
    nodes, weights = np.polynomial.hermite.hermgauss(K)
    return QuadratureRule(nodes=nodes, weights=weights, kind=RuleKind.GAUSS_HERMITE)
