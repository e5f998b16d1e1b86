"""Mergeable running mean/variance and batch-means standard errors."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class RunningStats:
    """Welford accumulator that also absorbs whole arrays (Chan et al. merge)."""

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def push(self, x: float) -> None:
        self.n += 1
        delta = x - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (x - self.mean)

    def push_array(self, xs: np.ndarray) -> None:
        xs = np.asarray(xs, dtype=float)
        if xs.size == 0:
            return
        self.merge(RunningStats(int(xs.size), float(xs.mean()), float(((xs - xs.mean()) ** 2).sum())))

    def merge(self, other: "RunningStats") -> None:
        if other.n == 0:
            return
        n = self.n + other.n
        delta = other.mean - self.mean
        self.mean += delta * other.n / n
        self.m2 += other.m2 + delta * delta * self.n * other.n / n
        self.n = n

    @property
    def variance(self) -> float:
        return self.m2 / (self.n - 1) if self.n > 1 else 0.0

    @property
    def stderr(self) -> float:
        """Standard error assuming independent samples."""
        return math.sqrt(self.variance / self.n) if self.n > 1 else math.inf


def batch_means_stderr(xs: np.ndarray, n_batches: int = 32) -> float:
    """Standard error of ``mean(xs)`` from contiguous batch means.

    Queue waiting times are strongly autocorrelated, so the i.i.d. formula
    understates the error; batch means keep the correlation inside batches.
    """
    xs = np.asarray(xs, dtype=float)
    n_batches = min(n_batches, xs.size)
    if n_batches < 2:
        return math.inf
    size = xs.size // n_batches
    means = xs[: size * n_batches].reshape(n_batches, size).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(n_batches))
