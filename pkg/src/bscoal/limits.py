"""Marginals and samplers of the two scaling-limit processes.

The limit of the scaled block counting process has Mittag-Leffler
marginals with parameter alpha = exp(-t); the limit of the scaled fixation
line has one-sided alpha-stable marginals with Laplace transform
exp(-lambda^alpha).  Both are sampled exactly through Kanter's
rejection-free representation of the positive stable law, and the
Mittag-Leffler draw is the (-alpha)-power of a stable draw.

Samplers accept ``size=None`` for a scalar draw or an integer for a
vectorized batch; the random stream is always an explicit
``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analytics import TimePoint, gumbel_cumulant

__all__ = [
    "LogProcess",
    "ml_moment",
    "sample_neveu",
    "sample_mittag_leffler",
    "neveu_laplace_fd",
    "log_cumulant",
    "siegmund_duality_gap",
    "check_pow_inequality",
]


def ml_moment(tp: TimePoint, m: float) -> float:
    """Moment of order m >= 0 of the Mittag-Leffler marginal at time t.

    Gamma(1 + m) / Gamma(1 + m alpha); finite for every m >= 0.
    """
    if m < 0:
        raise ValueError(f"moment order must be nonnegative, got {m}")
    return math.exp(math.lgamma(1.0 + m) - math.lgamma(1.0 + m * tp.alpha))


def _kanter_stable(alpha: float, rng: np.random.Generator, size):
    # S = (A(U) / E)^((1-alpha)/alpha) with
    # A(u) = sin(a pi u)^(a/(1-a)) sin((1-a) pi u) / sin(pi u)^(1/(1-a)),
    # normalized so that E exp(-lam S) = exp(-lam^alpha).
    scalar = size is None
    n = 1 if scalar else int(size)
    u = 1.0 - rng.random(n)  # in (0, 1]
    e = rng.exponential(size=n)
    a = alpha
    log_s = (
        np.log(np.sin(a * np.pi * u))
        + (1.0 - a) / a * np.log(np.sin((1.0 - a) * np.pi * u))
        - np.log(np.sin(np.pi * u)) / a
        - (1.0 - a) / a * np.log(e)
    )
    s = np.exp(log_s)
    return float(s[0]) if scalar else s


def sample_neveu(tp: TimePoint, rng: np.random.Generator, size=None):
    """Draws of the one-sided stable marginal with Laplace transform exp(-lam^alpha).

    alpha = 1 is the degenerate point mass at 1.
    """
    if tp.alpha == 1.0:
        return 1.0 if size is None else np.ones(int(size))
    return _kanter_stable(tp.alpha, rng, size)


def sample_mittag_leffler(tp: TimePoint, rng: np.random.Generator, size=None):
    """Draws with moments Gamma(1+m)/Gamma(1+m alpha): S^(-alpha) for stable S."""
    if tp.alpha == 1.0:
        return 1.0 if size is None else np.ones(int(size))
    s = _kanter_stable(tp.alpha, rng, size)
    return s ** (-tp.alpha) if size is not None else float(s) ** (-tp.alpha)


def neveu_laplace_fd(times: Sequence[float], lambdas: Sequence[float]) -> float:
    """Joint Laplace transform E exp(-sum_k lam_k Y_{t_k}) by backward recursion.

    Each step folds the last argument into the previous one through the
    conditional transform exponent alpha_k / alpha_{k-1}.
    """
    times = [float(t) for t in times]
    lams = [float(v) for v in lambdas]
    if len(times) != len(lams) or not times:
        raise ValueError("times and lambdas must be equal-length nonempty sequences")
    if any(l < 0 for l in lams):
        raise ValueError("lambdas must be nonnegative")
    if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        raise ValueError("times must be strictly increasing")
    if times[0] < 0:
        raise ValueError("times must be nonnegative")
    alphas = [math.exp(-t) for t in times]
    while len(lams) > 1:
        lk = lams.pop()
        ak = alphas.pop()
        lams[-1] = lams[-1] + lk ** (ak / alphas[-1])
    return math.exp(-(lams[0] ** alphas[0]))


@dataclass(frozen=True)
class LogProcess:
    """Which logarithmic limit marginal a cumulant refers to."""

    which: str  # "mittag-leffler" or "neveu"
    t: float

    def __post_init__(self):
        if self.which not in ("mittag-leffler", "neveu"):
            raise ValueError(f"unknown log process {self.which!r}")
        if self.t < 0:
            raise ValueError(f"time must be nonnegative, got {self.t}")


def log_cumulant(spec: LogProcess, j: int) -> float:
    """j-th cumulant of log X_t (Mittag-Leffler) or log Y_t (stable limit).

    Both are scaled Gumbel cumulants: (e^{jt} - 1) kappa_j for the stable
    limit, (-1)^j (1 - e^{-jt}) kappa_j for the Mittag-Leffler one.
    """
    if j < 1:
        raise ValueError(f"cumulant order must be positive, got {j}")
    kg = gumbel_cumulant(j)
    if spec.which == "neveu":
        return (math.exp(j * spec.t) - 1.0) * kg
    return ((-1) ** j) * (1.0 - math.exp(-j * spec.t)) * kg


def siegmund_duality_gap(
    x: float, y: float, t: float, reps: int, rng: np.random.Generator
) -> float:
    """Monte Carlo estimate of P(X_t <= y | X_0 = x) - P(Y_t >= x | Y_0 = y).

    Uses the multiplicative semigroup forms x^{e^{-t}} X_t and y^{e^t} Y_t;
    the two probabilities are equal, so the estimate fluctuates around 0
    with standard error of order reps^{-1/2}.
    """
    if reps < 1:
        raise ValueError(f"need at least one replicate, got {reps}")
    if x < 0 or y < 0 or t <= 0:
        raise ValueError("need x, y >= 0 and t > 0")
    tp = TimePoint.from_time(t)
    xs = sample_mittag_leffler(tp, rng, size=reps)
    ys = sample_neveu(tp, rng, size=reps)
    p_x = float(np.mean(x ** tp.alpha * xs <= y))
    p_y = float(np.mean(y ** math.exp(t) * ys >= x))
    return p_x - p_y


def check_pow_inequality(x: float, alpha: float) -> bool:
    """(1 - e^{-x})^alpha >= 1 - e^{-x^alpha} up to a 1e-12 equality margin."""
    if x < 0 or not (0.0 <= alpha <= 1.0):
        raise ValueError("need x >= 0 and alpha in [0, 1]")
    # expm1 keeps tiny x from rounding 1 - e^{-x} to zero; 0**0 == 1
    # covers the corner points.
    lhs = (-math.expm1(-x)) ** alpha
    rhs = -math.expm1(-(x**alpha))
    return lhs >= rhs - 1e-12
