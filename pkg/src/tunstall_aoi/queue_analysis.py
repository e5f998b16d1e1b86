"""Closed-form stability conditions, tarry time and waiting-time bounds.

Queue convention throughout: ``U = S - T`` (service minus inter-arrival), so
a stable queue has ``E[U] < 0``. Unbounded results are ``math.inf``, set
explicitly and never produced by overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .codes import LengthPmf
from .source_model import ValidationError

Scheme = Literal["vtf", "ftv"]

ROOT_TOL = 1e-12
MAX_ITER = 200


class RootFindingError(RuntimeError):
    def __init__(self, message: str, bracket: tuple[float, float]):
        super().__init__(f"{message} (last bracket [{bracket[0]!r}, {bracket[1]!r}])")
        self.bracket = bracket


@dataclass(frozen=True)
class ChannelSpec:
    """FIFO drained at ``r_ch`` bits per time step, fed by arrivals with probability ``q``."""

    r_ch: float
    q: float

    def __post_init__(self) -> None:
        if not (self.r_ch > 0 and math.isfinite(self.r_ch)):
            raise ValidationError(f"r_ch must be a positive real, got {self.r_ch!r}")
        if not (0.0 < self.q < 1.0):
            raise ValidationError(f"q must lie in (0, 1), got {self.q!r}")

    @property
    def rate_threshold(self) -> float:
        """Largest code rate (bits/symbol) the channel can carry: ``r_ch / q``."""
        return self.r_ch / self.q


@dataclass(frozen=True)
class MgfBound:
    bound: float
    nu: float
    iterations: int
    case: Literal["root", "never_waits", "unstable"]


@dataclass(frozen=True)
class WaitingBounds:
    low_moment: float
    mgf: float
    nu: float
    root_iterations: int


@dataclass(frozen=True)
class DelayDecomposition:
    tarry_mean: float
    inter_arrival_mean: float
    service_mean: float
    waiting_mean_bound: float

    @property
    def delay_bound(self) -> float:
        return self.tarry_mean + self.service_mean + self.waiting_mean_bound

    @property
    def peak_aoi_bound(self) -> float:
        return self.inter_arrival_mean + self.service_mean + self.waiting_mean_bound


def vtf_stability(rate_code: float, ch: ChannelSpec) -> tuple[bool, float]:
    """``(stable, margin)`` with ``margin = r_ch/q - rate_code``; stability is strict."""
    margin = ch.rate_threshold - rate_code
    return rate_code < ch.rate_threshold, margin


def stabilizable(entropy_bits: float, ch: ChannelSpec) -> bool:
    """Whether some Tunstall code (large enough ``ell``) keeps delay and AoI bounded."""
    return entropy_bits < ch.rate_threshold


def tarry_mean(b_pmf: LengthPmf, q: float) -> float:
    """Mean time a symbol waits for its phrase to complete."""
    return (b_pmf.second_moment - b_pmf.mean) / (2.0 * q * b_pmf.mean)


def low_moment_bound_vtf(b_pmf: LengthPmf, ell: int, ch: ChannelSpec) -> float:
    q = ch.q
    denom = q * (b_pmf.mean - q * ell / ch.r_ch)
    if denom <= 0.0:
        return math.inf
    return (b_pmf.variance + (1.0 - q) * b_pmf.mean) / denom


def low_moment_bound_ftv(l_pmf: LengthPmf, b: int, ch: ChannelSpec) -> float:
    q, r = ch.q, ch.r_ch
    denom = b / q - l_pmf.mean / r
    if denom <= 0.0:
        return math.inf
    return (l_pmf.variance / r**2 + (1.0 - q) * b / q**2) / denom


def _log_phi_and_slope(theta: float, values: np.ndarray, logp: np.ndarray, service: float, q: float
                       ) -> tuple[float, float]:
    """Cumulant ``log E[exp(theta U)]`` and its derivative, evaluated stably for large theta."""
    c = (1.0 - q) * math.exp(-theta)
    log_g = math.log(q) - theta - math.log1p(-c)
    terms = logp + values * log_g
    top = float(terms.max())
    weights = np.exp(terms - top)
    total = float(weights.sum())
    log_phi = service * theta + top + math.log(total)
    mean_b = float((weights * values).sum() / total)
    return float(log_phi), service - mean_b / (1.0 - c)


def phi_U(theta: float, b_pmf: LengthPmf, ell: int, ch: ChannelSpec) -> float:
    """m.g.f. of ``U = ell/r_ch - sum_{n<=B} D_n`` at ``theta >= 0``."""
    if theta < 0:
        raise ValueError("theta must be >= 0")
    log_phi, _ = _log_phi_and_slope(theta, b_pmf.values, np.log(b_pmf.probs), ell / ch.r_ch, ch.q)
    return math.exp(log_phi) if log_phi < 709.0 else math.inf


def mgf_bound_vtf(b_pmf: LengthPmf, ell: int, ch: ChannelSpec, tol: float = ROOT_TOL,
                  max_iter: int = MAX_ITER) -> MgfBound:
    """``E[W] <= 1/nu`` with ``nu = sup{theta > 0 : phi_U(theta) < 1}``.

    Three outcomes: a positive root of ``phi_U = 1`` (``case="root"``);
    ``S <= min T`` almost surely so ``phi_U < 1`` for every ``theta > 0`` and
    the queue never waits (``nu = inf``, bound 0); or no admissible theta at
    all (unstable, ``nu = 0``, bound ``inf``).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    service = ell / ch.r_ch
    q = ch.q
    if service <= b_pmf.min_value:
        # T >= B >= b_min >= S with probability one
        return MgfBound(bound=0.0, nu=math.inf, iterations=0, case="never_waits")
    if service - b_pmf.mean / q >= 0.0:
        return MgfBound(bound=math.inf, nu=0.0, iterations=0, case="unstable")

    values = b_pmf.values
    logp = np.log(b_pmf.probs)

    def f(theta: float) -> tuple[float, float]:
        return _log_phi_and_slope(theta, values, logp, service, q)

    # S > b_min makes the cumulant grow linearly for large theta, so doubling
    # always finds a sign change; the cap only guards against float blow-up
    theta_cap = 1e300
    lo, hi = 0.0, 1e-6
    f_hi, _ = f(hi)
    while f_hi >= 0.0 and hi > 1e-300:
        # drift is tiny relative to curvature: the root sits closer to zero
        hi *= 0.5
        f_hi, _ = f(hi)
    iterations = 0
    while f_hi < 0.0:
        lo = hi
        hi *= 2.0
        iterations += 1
        if hi > theta_cap:
            raise RootFindingError("phi_U stays below 1 beyond theta cap", (lo, hi))
        f_hi, _ = f(hi)

    # safeguarded Newton on the convex cumulant, starting on the right of the root
    x = hi
    fx, dfx = f(x)
    for _ in range(max_iter):
        iterations += 1
        if abs(math.expm1(fx)) <= tol:
            return MgfBound(bound=1.0 / x, nu=x, iterations=iterations, case="root")
        if fx > 0.0:
            hi = x
        else:
            lo = x
        step = x - fx / dfx if dfx > 0.0 else math.nan
        x_new = step if lo < step < hi else 0.5 * (lo + hi)
        if x_new == x:
            break
        x = x_new
        fx, dfx = f(x)
    if abs(math.expm1(fx)) <= 10 * tol:
        return MgfBound(bound=1.0 / x, nu=x, iterations=iterations, case="root")
    raise RootFindingError("root finder did not converge", (lo, hi))


def waiting_bounds_vtf(b_pmf: LengthPmf, ell: int, ch: ChannelSpec, tol: float = ROOT_TOL
                       ) -> WaitingBounds:
    mgf = mgf_bound_vtf(b_pmf, ell, ch, tol)
    return WaitingBounds(
        low_moment=low_moment_bound_vtf(b_pmf, ell, ch),
        mgf=mgf.bound,
        nu=mgf.nu,
        root_iterations=mgf.iterations,
    )


def decompose(scheme: Scheme, stats: LengthPmf, ch: ChannelSpec, waiting_bound: float, *,
              ell: int | None = None, b: int | None = None) -> DelayDecomposition:
    """Split delay and peak AoI into tarry + service + waiting terms.

    ``stats`` is the phrase-length distribution for ``"vtf"`` (needs ``ell``)
    or the codeword-length distribution for ``"ftv"`` (needs ``b``).
    """
    if waiting_bound < 0:
        raise ValueError("waiting_bound must be >= 0")
    q = ch.q
    if scheme == "vtf":
        if ell is None:
            raise ValueError("vtf decomposition needs ell")
        return DelayDecomposition(
            tarry_mean=tarry_mean(stats, q),
            inter_arrival_mean=stats.mean / q,
            service_mean=ell / ch.r_ch,
            waiting_mean_bound=waiting_bound,
        )
    if scheme == "ftv":
        if b is None:
            raise ValueError("ftv decomposition needs b")
        return DelayDecomposition(
            tarry_mean=(b - 1) / (2.0 * q),
            inter_arrival_mean=b / q,
            service_mean=stats.mean / ch.r_ch,
            waiting_mean_bound=waiting_bound,
        )
    raise ValueError(f"unknown scheme {scheme!r}")
