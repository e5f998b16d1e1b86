"""Random source: geometric inter-arrival gaps and i.i.d. symbols.

All randomness goes through :class:`numpy.random.Generator` seeded from an
unsigned 64-bit integer; the bit generator name is exported as
:data:`RNG_ALGORITHM` so run metadata can state it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

RNG_ALGORITHM = "numpy.random.PCG64"

_SUM_TOL = 1e-12


class ValidationError(ValueError):
    """Raised for malformed model parameters."""


@dataclass(frozen=True)
class SymbolPmf:
    """Probability mass function over the alphabet ``0..len(probs)-1``."""

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) < 2:
            raise ValidationError(f"alphabet needs at least 2 symbols, got {len(probs)}")
        for i, p in enumerate(probs):
            if not math.isfinite(p) or p <= 0.0:
                raise ValidationError(f"probability of symbol {i} must be > 0, got {p!r}")
        total = math.fsum(probs)
        if abs(total - 1.0) > _SUM_TOL:
            raise ValidationError(f"probabilities sum to {total!r}, expected 1")

    @property
    def size(self) -> int:
        return len(self.probs)

    @classmethod
    def bernoulli(cls, p: float) -> "SymbolPmf":
        """Binary source with ``Pr(X=1) = p``."""
        return cls((1.0 - p, p))


@dataclass(frozen=True)
class ArrivalSpec:
    q: float
    seed: int = 0

    def __post_init__(self) -> None:
        if not (0.0 < self.q < 1.0):
            raise ValidationError(f"arrival probability q must lie in (0, 1), got {self.q!r}")
        if not (0 <= int(self.seed) < 2**64):
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class SymbolStream:
    symbols: np.ndarray
    arrival_times: np.ndarray

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def gaps(self) -> np.ndarray:
        """Inter-arrival gaps ``D_n`` with ``A_0 = 0``."""
        return np.diff(self.arrival_times, prepend=0)


def validate_pmf(raw_probs: Sequence[float]) -> SymbolPmf:
    if len(raw_probs) == 0:
        raise ValidationError("empty probability list")
    return SymbolPmf(tuple(raw_probs))


def entropy(pmf: SymbolPmf) -> float:
    """Shannon entropy in bits per symbol."""
    return -math.fsum(p * math.log2(p) for p in pmf.probs)


def geometric_gaps(rng: np.random.Generator, q: float, n: int) -> np.ndarray:
    # inverse CDF on u in (0, 1]: D = 1 + floor(log u / log(1 - q))
    u = 1.0 - rng.random(n)
    return 1 + np.floor(np.log(u) / math.log1p(-q)).astype(np.int64)


def sample_stream(pmf: SymbolPmf, arrivals: ArrivalSpec, n_symbols: int) -> SymbolStream:
    """Draw ``n_symbols`` arrivals; identical arguments give identical streams."""
    if n_symbols < 1:
        raise ValidationError(f"n_symbols must be >= 1, got {n_symbols}")
    rng = np.random.Generator(np.random.PCG64(int(arrivals.seed)))
    gaps = geometric_gaps(rng, arrivals.q, n_symbols)
    cdf = np.cumsum(pmf.probs)
    symbols = np.searchsorted(cdf, rng.random(n_symbols), side="right")
    # guard against cdf[-1] landing a hair below 1
    np.minimum(symbols, pmf.size - 1, out=symbols)
    return SymbolStream(symbols=symbols.astype(np.int64), arrival_times=np.cumsum(gaps))
