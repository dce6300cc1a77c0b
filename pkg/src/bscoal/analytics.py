"""Transition probabilities, hitting probabilities, absorption times.

Everything here is a deterministic function of the inputs.  Quantities with
an exact rational representation (hitting probabilities through the
convolution and Stirling routes) are returned as ``Fraction``; the rest are
double precision floats evaluated through log-gamma.

Conventions: states are 1-based positive integers; ``alpha`` always means
``exp(-t)`` for the time point under consideration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import (
    EULER_GAMMA,
    ZETA,
    factorial,
    general_binomial,
    signed_log_gamma,
    stirling_first,
    stirling_second,
)

__all__ = [
    "TimePoint",
    "HittingMethod",
    "EdgeworthCoeffs",
    "NumericInstabilityError",
    "fixation_pgf",
    "fixation_transition",
    "fixation_marginal",
    "reciprocal_factorial_moment",
    "block_tail_via_duality",
    "hitting_probability",
    "hitting_gf_coefficients",
    "hitting_asymptotic",
    "absorption_cdf",
    "gumbel_limit_cdf",
    "gumbel_cumulant",
    "gumbel_moment",
    "edgeworth_c",
    "edgeworth_d",
    "edgeworth_cdf",
]


class NumericInstabilityError(ArithmeticError):
    """A result left its mathematically required range by more than tolerance."""


@dataclass(frozen=True)
class TimePoint:
    """Coalescent time t together with alpha = exp(-t), kept consistent."""

    t: float
    alpha: float

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"time must be nonnegative, got {self.t}")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if abs(self.alpha - math.exp(-self.t)) > 1e-12 * max(1.0, self.alpha):
            raise ValueError("alpha and t are inconsistent; use the constructors")

    @classmethod
    def from_time(cls, t: float) -> "TimePoint":
        return cls(t=float(t), alpha=math.exp(-float(t)))

    @classmethod
    def from_alpha(cls, alpha: float) -> "TimePoint":
        return cls(t=-math.log(float(alpha)), alpha=float(alpha))


class HittingMethod(enum.Enum):
    CONVOLUTION = "convolution"
    STIRLING_DOUBLE = "stirling-double"
    STIRLING_SHIFT = "stirling-shift"
    INTEGRAL = "integral"
    GF_SERIES = "gf-series"


# ---------------------------------------------------------------------------
# fixation line marginals and transition probabilities
# ---------------------------------------------------------------------------

def fixation_pgf(i: int, tp: TimePoint, z: float) -> float:
    """E[z^{state at time t}] started from i: (1 - (1-z)^alpha)^i."""
    if i < 1:
        raise ValueError(f"initial state must be positive, got {i}")
    if not (-1.0 < z < 1.0):
        raise ValueError(f"pgf argument must satisfy |z| < 1, got {z}")
    return (1.0 - (1.0 - z) ** tp.alpha) ** i


def _transition_stirling_exact(i: int, j: int, alpha: Fraction) -> Fraction:
    # (-1)^{i+j} (i!/j!) sum_k S(k,i) alpha^k s(j,k), all in exact rationals
    # (alpha enters as the exact binary rational of the float exp(-t)).
    acc = Fraction(0)
    for k in range(i, j + 1):
        acc += stirling_second(k, i) * alpha**k * stirling_first(j, k)
    sign = -1 if (i + j) % 2 else 1
    return sign * Fraction(factorial(i), factorial(j)) * acc


def fixation_transition(i: int, j: int, tp: TimePoint, formula: str = "stirling") -> float:
    """P(state j at time t | state i at time 0) for the fixation line.

    ``formula="stirling"`` runs the exact-rational double Stirling sum
    (valid without cancellation trouble for i, j <= 60); ``"binomial"``
    evaluates the alternating generalized-binomial sum in floats.
    """
    if i < 1 or j < 1:
        raise ValueError(f"states must be positive, got ({i}, {j})")
    if j < i:
        return 0.0  # the fixation line is nondecreasing
    if formula == "stirling":
        val = float(_transition_stirling_exact(i, j, Fraction(tp.alpha)))
    elif formula == "binomial":
        terms = [
            ((-1) ** k) * math.comb(i, k) * general_binomial(tp.alpha * k, j)
            for k in range(1, i + 1)
        ]
        val = ((-1) ** j) * math.fsum(terms)
    else:
        raise ValueError(f"unknown formula {formula!r}")
    if val < -1e-9 or val > 1.0 + 1e-9:
        raise NumericInstabilityError(
            f"transition probability p({i},{j}) = {val} outside [0, 1]"
        )
    return min(max(val, 0.0), 1.0)


def fixation_marginal(tp: TimePoint, j: int) -> float:
    """P(fixation line from state 1 sits at j at time t).

    Equals alpha Gamma(j - alpha) / (Gamma(1 - alpha) Gamma(j + 1)).
    """
    if j < 1:
        raise ValueError(f"state must be positive, got {j}")
    a = tp.alpha
    if a == 1.0:
        return 1.0 if j == 1 else 0.0
    return a * math.exp(math.lgamma(j - a) - math.lgamma(1.0 - a) - math.lgamma(j + 1.0))


def reciprocal_factorial_moment(tp: TimePoint, k: int) -> float:
    """E[1 / ((state+1)...(state+k))] for the state-1 fixation line marginal."""
    if k < 1:
        raise ValueError(f"order must be positive, got {k}")
    return tp.alpha / (factorial(k) * (tp.alpha + k))


def _survival_sum(n: int, i: int, alpha: float) -> float:
    # sum_{j=1..i} (-1)^{j-1} C(i,j) Gamma(n - j a) / (Gamma(n) Gamma(1 - j a))
    lg_n = math.lgamma(n)
    terms = []
    for j in range(1, i + 1):
        s_den, l_den = signed_log_gamma(1.0 - j * alpha)
        if s_den == 0:
            continue  # 1/Gamma vanishes at nonpositive integers
        mag = math.exp(math.lgamma(n - j * alpha) - lg_n - l_den)
        sign = (-1) ** (j - 1) * s_den
        terms.append(sign * math.comb(i, j) * mag)
    return math.fsum(terms)


def block_tail_via_duality(n: int, i: int, tp: TimePoint) -> float:
    """P(block counting process from n is <= i at time t).

    By duality this equals the probability that the fixation line from i
    has reached n, i.e. the upper tail of its transition row.
    """
    if not (1 <= i <= n):
        raise ValueError(f"need 1 <= i <= n, got i={i}, n={n}")
    if i == n:
        return 1.0
    val = _survival_sum(n, i, tp.alpha)
    if val < -1e-9 or val > 1.0 + 1e-9:
        raise NumericInstabilityError(f"duality tail {val} outside [0, 1]")
    return min(max(val, 0.0), 1.0)


# ---------------------------------------------------------------------------
# hitting probabilities of the fixation line
# ---------------------------------------------------------------------------

_renewal_cache: list[Fraction] = [Fraction(1)]


def _renewal_mass(d: int) -> Fraction:
    """Probability that the jump chain increments ever sum to exactly d.

    Dynamic program over totals: f(0) = 1 and
    f(d) = sum_{m=1..d} f(d-m) / (m (m+1)), which collapses the sum over
    the number of jumps analytically.
    """
    while len(_renewal_cache) <= d:
        dd = len(_renewal_cache)
        _renewal_cache.append(
            sum(
                (Fraction(1, m * (m + 1)) * _renewal_cache[dd - m] for m in range(1, dd + 1)),
                Fraction(0),
            )
        )
    return _renewal_cache[d]


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)
# mapped to [0, 1]
_GL_X = 0.5 * (_GL_NODES + 1.0)
_GL_W = 0.5 * _GL_WEIGHTS


def _hitting_integral(d: int) -> float:
    # (1/d!) int_0^1 Gamma(d + x) / Gamma(x) dx; the integrand extends
    # continuously to 0 at x = 0 since 1/Gamma(x) ~ x.
    lg_d1 = math.lgamma(d + 1.0)
    vals = [
        w * math.exp(math.lgamma(d + x) - math.lgamma(x) - lg_d1)
        for x, w in zip(_GL_X, _GL_W)
    ]
    return math.fsum(vals)


def hitting_probability(i: int, j: int, method: HittingMethod = HittingMethod.CONVOLUTION):
    """Probability the fixation line started at i ever occupies state j.

    Depends on (i, j) only through j - i.  The convolution and both
    Stirling methods return exact ``Fraction``s; the integral and
    generating-function methods return floats.
    """
    if i < 1 or j < 1:
        raise ValueError(f"states must be positive, got ({i}, {j})")
    if j < i:
        return Fraction(0) if method in (
            HittingMethod.CONVOLUTION,
            HittingMethod.STIRLING_DOUBLE,
            HittingMethod.STIRLING_SHIFT,
        ) else 0.0
    d = j - i
    if method is HittingMethod.CONVOLUTION:
        return _renewal_mass(d)
    if method is HittingMethod.STIRLING_DOUBLE:
        acc = sum(
            (
                Fraction(stirling_first(j, k) * stirling_second(k, i), k)
                for k in range(i, j + 1)
            ),
            Fraction(0),
        )
        sign = -1 if (i + j) % 2 else 1
        return sign * Fraction(factorial(i), factorial(j - 1)) * acc
    if method is HittingMethod.STIRLING_SHIFT:
        acc = sum(
            (Fraction(stirling_first(d + 1, k), k) for k in range(1, d + 2)),
            Fraction(0),
        )
        sign = -1 if d % 2 else 1
        return sign * acc / factorial(d)
    if method is HittingMethod.INTEGRAL:
        return _hitting_integral(d)
    if method is HittingMethod.GF_SERIES:
        return hitting_gf_coefficients(i, j)[-1]
    raise ValueError(f"unknown method {method!r}")


def hitting_gf_coefficients(i: int, J: int) -> list[float]:
    """Coefficients of z^{j-1}, j = i..J, of z^i / ((1-z)(-log(1-z))).

    Extracted by exact rational power-series division: with
    B(z) = (-log(1-z))/z the reciprocal series A = 1/B is computed term by
    term, and the 1/(1-z) factor turns into partial sums.
    """
    if J < i:
        raise ValueError(f"need J >= i, got i={i}, J={J}")
    m = J - i
    b = [Fraction(1, n + 1) for n in range(m + 1)]
    a = [Fraction(1)] + [Fraction(0)] * m
    for n in range(1, m + 1):
        a[n] = -sum(b[k] * a[n - k] for k in range(1, n + 1))
    out: list[float] = []
    acc = Fraction(0)
    for n in range(m + 1):
        acc += a[n]
        out.append(float(acc))
    return out


def hitting_asymptotic(j: int) -> float:
    """Two-term large-j expansion 1/log j - gamma/log^2 j."""
    if j <= 1:
        raise ValueError(f"asymptotic form needs j >= 2, got {j}")
    lj = math.log(j)
    return 1.0 / lj - EULER_GAMMA / (lj * lj)


# ---------------------------------------------------------------------------
# absorption times of the block counting process
# ---------------------------------------------------------------------------

def absorption_cdf(n: int, i: int, t: float) -> float:
    """P(block counting process from n reaches a state <= i by time t)."""
    if not (1 <= i <= n):
        raise ValueError(f"need 1 <= i <= n, got i={i}, n={n}")
    if t <= 0:
        raise ValueError(f"time must be positive, got {t}")
    if i == n:
        return 1.0
    val = _survival_sum(n, i, math.exp(-t))
    if val < -1e-9 or val > 1.0 + 1e-9:
        raise NumericInstabilityError(f"absorption CDF {val} outside [0, 1]")
    return min(max(val, 0.0), 1.0)


def gumbel_limit_cdf(i: int, x: float) -> float:
    """CDF of the minimum of i independent standard Gumbel variables."""
    if i < 1:
        raise ValueError(f"need i >= 1, got {i}")
    F = math.exp(-math.exp(-x)) if x > -math.inf else 0.0
    return 1.0 - (1.0 - F) ** i


# ---------------------------------------------------------------------------
# Edgeworth expansion of the centered absorption time
# ---------------------------------------------------------------------------

_EDGEWORTH_MAX_ORDER = 12


def gumbel_cumulant(j: int) -> float:
    """Cumulants of the standard Gumbel law: gamma, then (j-1)! zeta(j)."""
    if j < 1:
        raise ValueError(f"cumulant order must be positive, got {j}")
    if j == 1:
        return EULER_GAMMA
    if j > _EDGEWORTH_MAX_ORDER:
        raise ValueError(f"cumulant order {j} beyond tabulated zeta values")
    return factorial(j - 1) * ZETA[j]


def gumbel_moment(k: int) -> float:
    """Raw moments of the standard Gumbel law via the cumulant recursion."""
    if k < 0:
        raise ValueError(f"moment order must be nonnegative, got {k}")
    m = [1.0]
    for nn in range(1, k + 1):
        m.append(
            math.fsum(
                math.comb(nn - 1, jj - 1) * gumbel_cumulant(jj) * m[nn - jj]
                for jj in range(1, nn + 1)
            )
        )
    return m[k]


@dataclass(frozen=True)
class EdgeworthCoeffs:
    """Taylor coefficients c_0..c_K of the reciprocal of Gamma(1 - x)."""

    order: int
    values: tuple[float, ...]

    def __getitem__(self, k: int) -> float:
        return self.values[k]


def edgeworth_c(K: int) -> EdgeworthCoeffs:
    """c_k from the Gumbel moments by the alternating composition sum.

    The moments enter as a_k = m_k / k!; the coefficients are the series
    of sum_j (-A)^j where A(x) = sum_{k>=1} a_k x^k, accumulated by
    truncated convolution powers.
    """
    if K < 0:
        raise ValueError(f"order must be nonnegative, got {K}")
    if K > _EDGEWORTH_MAX_ORDER:
        raise ValueError(f"order {K} exceeds supported maximum {_EDGEWORTH_MAX_ORDER}")
    a = [0.0] + [gumbel_moment(k) / factorial(k) for k in range(1, K + 1)]
    c = [0.0] * (K + 1)
    c[0] = 1.0
    power = [1.0] + [0.0] * K  # (-A)^j, truncated
    for _ in range(1, K + 1):
        nxt = [0.0] * (K + 1)
        for p in range(K + 1):
            if power[p] == 0.0:
                continue
            for q in range(1, K + 1 - p):
                nxt[p + q] += power[p] * (-a[q])
        power = nxt
        for k in range(1, K + 1):
            c[k] += power[k]
    return EdgeworthCoeffs(order=K, values=tuple(c))


def edgeworth_d(k: int, i: int, x: float, form: str = "direct") -> float:
    """Coefficient functions d_{k i}(x) = (e^x d/dx)^k applied to the Gumbel-min CDF.

    ``form="direct"`` evaluates the finite alternating sum in powers of
    F(x); ``form="stirling"`` uses the equivalent Stirling-number /
    falling-factorial representation (k >= 1).
    """
    if k < 0 or i < 1:
        raise ValueError(f"need k >= 0 and i >= 1, got k={k}, i={i}")
    F = math.exp(-math.exp(-x))
    if form == "direct":
        return math.fsum(
            (F**j) * ((-1) ** (j - 1)) * math.comb(i, j) * (j**k)
            for j in range(1, i + 1)
        )
    if form == "stirling":
        if k == 0:
            return 1.0 - (1.0 - F) ** i
        acc = 0.0
        falling = 1
        for j in range(1, k + 1):
            falling *= i - j + 1
            acc += (
                stirling_second(k, j)
                * ((-1) ** (j - 1))
                * falling
                * (F**j)
                * ((1.0 - F) ** (i - j))
            )
        return acc
    raise ValueError(f"unknown form {form!r}")


def edgeworth_cdf(n: int, i: int, x: float, K: int) -> float:
    """Order-K expansion of P(absorption time from n, centered by log log n, <= x)."""
    if n < 3:
        raise ValueError(f"need n >= 3 so that log log n is meaningful, got {n}")
    if i < 1:
        raise ValueError(f"need i >= 1, got {i}")
    c = edgeworth_c(K)
    ln = math.log(n)
    return math.fsum(
        c[k] * edgeworth_d(k, i, x) * math.exp(-k * x) / ln**k for k in range(K + 1)
    )
