"""Degree sequences and maximum-likelihood tail fits.

Distributions are discrete (degrees are counts).  The power-law model
on a tail x >= x_min has P[X = x] = x^-gamma / zeta(gamma, x_min); its
log-likelihood

    L(gamma) = -gamma * sum(log x_i) - n_tail * log(zeta(gamma, x_min))

is maximized numerically, and x_min is chosen by minimizing the
Kolmogorov-Smirnov distance of the fitted tail.  The exponential
alternative is the geometric distribution on the same support.  Zero
degrees are excluded from tails (their log is undefined); callers can
report their mass separately.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from .graph import CallGraph, CallGraphError, InputError

_GAMMA_BOUNDS = (1.0 + 1e-9, 50.0)


class DegenerateSampleError(CallGraphError):
    """Sample has no variation left to fit."""


@dataclass(frozen=True)
class DegreeSequence:
    mode: str
    values: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class DegreeSummary:
    mode: str
    mean: float
    variance: float


@dataclass(frozen=True)
class PowerLawFit:
    gamma: float
    x_min: int
    n_tail: int
    log_likelihood: float
    ks_stat: float


@dataclass(frozen=True)
class ExponentialFit:
    rate: float
    x_min: int
    log_likelihood: float


@dataclass(frozen=True)
class FitComparison:
    lr: float
    normalized_lr: float
    verdict: str


def degree_sequence(g: CallGraph, mode: str) -> DegreeSequence:
    """Per-node degrees; total = in + out on directed graphs."""
    if mode == "in":
        values = tuple(len(s) for s in g.in_adj)
    elif mode == "out":
        values = tuple(len(s) for s in g.out_adj)
    elif mode == "total":
        if g.directed:
            values = tuple(
                len(a) + len(b) for a, b in zip(g.in_adj, g.out_adj)
            )
        else:
            values = tuple(len(s) for s in g.out_adj)
    else:
        raise InputError(f"unknown degree mode: {mode!r}")
    return DegreeSequence(mode=mode, values=values)


def empirical_ccdf(seq: DegreeSequence) -> list[tuple[int, float]]:
    """(degree, P[X > degree]) over sorted distinct degrees."""
    if seq.n == 0:
        raise InputError("empty degree sequence")
    counts = Counter(seq.values)
    remaining = seq.n
    out = []
    for d in sorted(counts):
        remaining -= counts[d]
        out.append((d, remaining / seq.n))
    return out


def degree_summary(seq: DegreeSequence) -> DegreeSummary:
    """Arithmetic mean and unbiased sample variance (0 when n = 1)."""
    if seq.n == 0:
        raise InputError("empty degree sequence")
    mean = math.fsum(seq.values) / seq.n
    if seq.n == 1:
        variance = 0.0
    else:
        variance = math.fsum((v - mean) ** 2 for v in seq.values) / (seq.n - 1)
    return DegreeSummary(mode=seq.mode, mean=mean, variance=variance)


def _power_law_loglik(gamma: float, log_sum: float, n_tail: int, x_min: int) -> float:
    return -gamma * log_sum - n_tail * math.log(zeta(gamma, x_min))


def _mle_gamma(log_sum: float, n_tail: int, x_min: int) -> float:
    res = minimize_scalar(
        lambda t: -_power_law_loglik(t, log_sum, n_tail, x_min),
        bounds=_GAMMA_BOUNDS,
        method="bounded",
        options={"xatol": 1e-9},
    )
    return float(res.x)


def _ks_distance(
    distinct: np.ndarray, cum_counts: np.ndarray, n_tail: int, gamma: float, x_min: int
) -> float:
    fitted_cdf = 1.0 - zeta(gamma, distinct + 1) / zeta(gamma, x_min)
    empirical_cdf = cum_counts / n_tail
    return float(np.max(np.abs(empirical_cdf - fitted_cdf)))


def fit_power_law(seq: DegreeSequence, x_min: int | None = None) -> PowerLawFit:
    """Discrete power-law MLE with KS-minimizing x_min.

    Every distinct positive degree is a cutoff candidate; candidates
    whose tail has fewer than 2 samples or no value above the cutoff
    are degenerate and skipped.  Ties on ks_stat keep the smallest
    x_min.  Passing x_min pins the cutoff instead of scanning, which
    is what a like-for-like model comparison on a fixed tail wants.
    """
    positives = np.sort(np.asarray([v for v in seq.values if v > 0], dtype=np.int64))
    distinct_all = np.unique(positives)
    if distinct_all.size < 2:
        raise DegenerateSampleError(
            "need at least 2 distinct positive degrees to fit a power law"
        )
    if x_min is not None and x_min < 1:
        raise InputError(f"x_min must be >= 1, got {x_min}")
    candidates = distinct_all.tolist() if x_min is None else [int(x_min)]
    logs = np.log(positives.astype(np.float64))
    suffix_log = np.concatenate([np.cumsum(logs[::-1])[::-1], [0.0]])
    best: PowerLawFit | None = None
    for x_min in candidates:
        start = int(bisect_left(positives, x_min))
        n_tail = positives.size - start
        if n_tail < 2 or int(positives[-1]) <= x_min:
            continue
        log_sum = float(suffix_log[start])
        gamma = _mle_gamma(log_sum, n_tail, x_min)
        tail_distinct = distinct_all[distinct_all >= x_min]
        cum = n_tail - (
            positives.size - np.searchsorted(positives, tail_distinct, side="right")
        )
        ks = _ks_distance(tail_distinct, cum, n_tail, gamma, x_min)
        if best is None or ks < best.ks_stat:
            best = PowerLawFit(
                gamma=gamma,
                x_min=int(x_min),
                n_tail=int(n_tail),
                log_likelihood=_power_law_loglik(gamma, log_sum, n_tail, x_min),
                ks_stat=ks,
            )
    if best is None:
        raise DegenerateSampleError("no viable x_min candidate (zero-variance tail)")
    return best


def fit_exponential(seq: DegreeSequence, x_min: int) -> ExponentialFit:
    """Geometric MLE on the tail >= x_min: q = 1 / (1 + mean(x - x_min))."""
    if x_min < 1:
        raise InputError(f"x_min must be >= 1, got {x_min}")
    tail = [v for v in seq.values if v >= x_min]
    if not tail:
        raise InputError(f"empty tail at x_min={x_min}")
    excess = math.fsum(v - x_min for v in tail)
    if excess == 0:
        raise DegenerateSampleError(
            "all tail values equal x_min; geometric MLE degenerates to q=1"
        )
    q = 1.0 / (1.0 + excess / len(tail))
    log_likelihood = len(tail) * math.log(q) + excess * math.log1p(-q)
    return ExponentialFit(rate=q, x_min=x_min, log_likelihood=log_likelihood)


def _log_likelihood_diffs(
    pl: PowerLawFit, ex: ExponentialFit, tail: list[int]
) -> list[float]:
    # per-sample log p_powerlaw(x) - log p_geometric(x), shared support
    log_norm = math.log(zeta(pl.gamma, pl.x_min))
    log_q = math.log(ex.rate)
    log_1mq = math.log1p(-ex.rate)
    return [
        (-pl.gamma * math.log(x) - log_norm) - (log_q + (x - ex.x_min) * log_1mq)
        for x in tail
    ]


def compare_fits(
    pl: PowerLawFit, ex: ExponentialFit, seq: DegreeSequence
) -> FitComparison:
    """Vuong-style likelihood-ratio comparison on the shared tail.

    lr > 0 favours the power law.  The verdict needs |normalized_lr|
    >= 2 (roughly 95% two-sided); anything less is inconclusive.
    """
    if ex.x_min != pl.x_min:
        raise InputError(
            f"fits use different tails: x_min {pl.x_min} vs {ex.x_min}"
        )
    tail = [v for v in seq.values if v >= pl.x_min]
    if len(tail) < 2:
        raise DegenerateSampleError("tail too small to compare fits")
    diffs = _log_likelihood_diffs(pl, ex, tail)
    lr = math.fsum(diffs)
    n = len(diffs)
    mean = lr / n
    variance = math.fsum((d - mean) ** 2 for d in diffs) / (n - 1)
    sigma = math.sqrt(variance)
    if sigma == 0.0:
        normalized = 0.0
    else:
        normalized = lr / (sigma * math.sqrt(n))
    if normalized >= 2.0:
        verdict = "power_law"
    elif normalized <= -2.0:
        verdict = "exponential"
    else:
        verdict = "inconclusive"
    return FitComparison(lr=lr, normalized_lr=normalized, verdict=verdict)
