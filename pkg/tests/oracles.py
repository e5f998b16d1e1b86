"""Brute-force references, deliberately independent of the package code paths."""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np


def exact_binary_probs(probs: tuple[float, float]) -> tuple[Fraction, Fraction]:
    """Rational pmf from the float one, renormalized so the pair sums to exactly 1."""
    p1 = Fraction(probs[1])
    return 1 - p1, p1


def max_parse_length(probs: tuple[float, float], max_leaves: int) -> Fraction:
    """Max expected phrase length over every full binary parse tree with <= max_leaves leaves.

    Exact rational arithmetic; see :func:`exact_binary_probs`.
    """
    p0, p1 = exact_binary_probs(probs)

    @lru_cache(maxsize=None)
    def trees(n_leaves: int) -> frozenset[Fraction]:
        # expected depth below a node, for every tree shape with n_leaves leaves
        if n_leaves == 1:
            return frozenset({Fraction(0)})
        out = set()
        for left in range(1, n_leaves):
            for a in trees(left):
                for b in trees(n_leaves - left):
                    out.add(1 + p0 * a + p1 * b)
        return frozenset(out)

    return max(max(trees(n)) for n in range(2, max_leaves + 1))


def min_prefix_code_length(probs: np.ndarray) -> float:
    """Minimum sum p*len over all integer length vectors obeying Kraft."""
    probs = np.asarray(probs, dtype=float)
    n = len(probs)
    if n == 1:
        return float(probs[0])
    # lengths in 1..n-1 suffice for an optimal code over n words
    choices = np.arange(1, n)
    head = min(2, n - 1)
    tail = np.array(list(itertools.product(choices, repeat=n - head)), dtype=np.int64)
    tail_kraft = (2.0 ** -tail).sum(axis=1)
    tail_cost = tail @ probs[head:]
    best = np.inf
    for prefix in itertools.product(choices, repeat=head):
        k = sum(2.0 ** -l for l in prefix)
        ok = tail_kraft + k <= 1.0 + 1e-15
        if ok.any():
            best = min(best, float(np.dot(prefix, probs[:head]) + tail_cost[ok].min()))
    return best


def inter_arrival_pmf(b_support, q: float, t_max: int) -> np.ndarray:
    """P(T = t), t = 0..t_max, for T a sum of B i.i.d. geometric(q) gaps, via convolution."""
    t = np.arange(t_max + 1)
    geo = np.where(t >= 1, q * (1 - q) ** np.maximum(t - 1, 0), 0.0)
    out = np.zeros(t_max + 1)
    power = np.zeros(t_max + 1)
    power[0] = 1.0
    b_max = max(v for v, _ in b_support)
    weights = dict(b_support)
    for k in range(1, b_max + 1):
        power = np.convolve(power, geo)[: t_max + 1]
        out += weights.get(k, 0.0) * power
    return out


def mgf_by_enumeration(theta: float, b_support, service: float, q: float, t_max: int = 4000) -> float:
    pmf = inter_arrival_pmf(b_support, q, t_max)
    t = np.arange(t_max + 1)
    return float(np.exp(theta * service) * (pmf * np.exp(-theta * t)).sum())


def u_moments_by_enumeration(b_support, service: float, q: float, t_max: int = 4000) -> tuple[float, float]:
    pmf = inter_arrival_pmf(b_support, q, t_max)
    t = np.arange(t_max + 1)
    mean_t = float((pmf * t).sum())
    var_t = float((pmf * (t - mean_t) ** 2).sum())
    return service - mean_t, var_t
