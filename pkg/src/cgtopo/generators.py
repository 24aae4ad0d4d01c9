"""Seeded random-graph generators used as baselines and fixtures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .graph import CallGraph, CallGraphError

GNM = "erdos_renyi_gnm"
ERASED_CONFIG = "erased_configuration"


class SpecError(CallGraphError):
    """Invalid random-graph parameters."""


@dataclass(frozen=True)
class RandomGraphSpec:
    """Parameters for generate_random; seed makes the draw reproducible."""

    model: str
    n: int
    m: int = 0
    gamma: float | None = None
    seed: int = 0


def _validate(spec: RandomGraphSpec) -> None:
    if spec.model not in (GNM, ERASED_CONFIG):
        raise SpecError(f"unknown model: {spec.model!r}")
    if spec.n < 2:
        raise SpecError(f"n must be >= 2, got {spec.n}")
    if spec.model == GNM and not 0 <= spec.m <= spec.n * (spec.n - 1):
        raise SpecError(
            f"m={spec.m} outside [0, n(n-1)] = [0, {spec.n * (spec.n - 1)}]"
        )
    if spec.model == ERASED_CONFIG:
        if spec.gamma is None or spec.gamma <= 1:
            raise SpecError("erased_configuration requires gamma > 1")


def sample_power_law(
    gamma: float, size: int, rng: np.random.Generator, x_min: int = 1
) -> np.ndarray:
    """Draw integers k >= x_min with P[X = k] proportional to k^-gamma.

    Inversion against the zeta-normalized CDF, tabulated over the first
    10^6 support points; draws falling beyond the table (probability
    ~1e-9 per draw at gamma=2.5) use the asymptotic tail inverse.
    """
    if gamma <= 1:
        raise SpecError("power-law sampler requires gamma > 1")
    if x_min < 1:
        raise SpecError(f"power-law sampler requires x_min >= 1, got {x_min}")
    table = 1_000_000
    support = np.arange(x_min, x_min + table, dtype=np.float64)
    norm = zeta(gamma, x_min)
    cdf = np.cumsum(support**-gamma) / norm
    u = rng.random(size)
    out = x_min + np.searchsorted(cdf, u, side="right")
    beyond = u >= cdf[-1]
    if np.any(beyond):
        # CCDF(k) ~ k^(1-gamma) / ((gamma-1) * norm) for large k
        tail = ((1.0 - u[beyond]) * (gamma - 1.0) * norm) ** (-1.0 / (gamma - 1.0))
        out[beyond] = np.maximum(np.rint(tail).astype(np.int64), x_min + table)
    return out.astype(np.int64)


def _gnm_edges(n: int, m: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    # ordered non-self pairs are coded 0 .. n(n-1)-1
    total = n * (n - 1)
    if m * 3 >= total:
        codes = rng.permutation(total)[:m]
    else:
        chosen: set[int] = set()
        codes_list: list[int] = []
        while len(codes_list) < m:
            batch = rng.integers(0, total, size=max(64, 2 * (m - len(codes_list))))
            for code in batch:
                c = int(code)
                if c not in chosen:
                    chosen.add(c)
                    codes_list.append(c)
                    if len(codes_list) == m:
                        break
        codes = np.array(codes_list, dtype=np.int64)
    u = codes // (n - 1)
    r = codes % (n - 1)
    v = r + (r >= u)
    return list(zip(u.tolist(), v.tolist()))


def _erased_configuration_edges(
    n: int, gamma: float, rng: np.random.Generator
) -> list[tuple[int, int]]:
    indeg = sample_power_law(gamma, n, rng)
    total = int(indeg.sum())
    outdeg = rng.multinomial(total, np.full(n, 1.0 / n))
    out_stubs = np.repeat(np.arange(n), outdeg)
    in_stubs = np.repeat(np.arange(n), indeg)
    rng.shuffle(in_stubs)
    return list(zip(out_stubs.tolist(), in_stubs.tolist()))


def generate_random(spec: RandomGraphSpec) -> CallGraph:
    """Generate a canonical CallGraph from a seeded model spec.

    erdos_renyi_gnm draws exactly m distinct directed non-self edges
    uniformly.  erased_configuration samples indegrees from a discrete
    power law (minimum 1), outdegrees multinomially to match the stub
    total, pairs stubs uniformly and erases self-loops and duplicates,
    so the realized edge count may fall below the stub total.
    """
    _validate(spec)
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    if spec.model == GNM:
        pairs = _gnm_edges(spec.n, spec.m, rng)
    else:
        pairs = _erased_configuration_edges(spec.n, spec.gamma, rng)
    return CallGraph.from_id_pairs(spec.n, pairs)
