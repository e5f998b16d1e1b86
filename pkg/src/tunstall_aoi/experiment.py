"""Single experiment points and entropy sweeps comparing VtF and FtV coding.

A point builds a Tunstall code (``ell`` bits) and a block-Huffman code
(``b`` symbols) for a binary source with ``Pr(X=1) = p``, evaluates the
analytic bounds and, for stable schemes, simulates both on the same symbol
stream.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .codes import (DEFAULT_MAX_BLOCKS, block_length_pmf, build_huffman_block, build_tunstall,
                    code_rate, codeword_length_pmf)
from .queue_analysis import (ChannelSpec, decompose, low_moment_bound_ftv, low_moment_bound_vtf,
                             mgf_bound_vtf, vtf_stability)
from .simulator import SimConfig, SimReport, simulate
from .source_model import ArrivalSpec, SymbolPmf, ValidationError, entropy

CSV_HEADER = (
    "p", "entropy", "scheme", "code_rate", "stable", "tarry_mean", "service_mean",
    "inter_arrival_mean", "low_moment_bound", "mgf_bound", "delay_bound", "aoi_bound",
    "sim_mean_waiting", "sim_mean_delay", "sim_mean_peak_aoi", "sim_stderr_delay",
    "n_symbols", "seed",
)

DEFAULT_Q = 0.5
DEFAULT_R_CH = 1 / 6.5
DEFAULT_ELL = 4
DEFAULT_B = 4

_MASK64 = (1 << 64) - 1
_GOLDEN64 = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    x = (x + _GOLDEN64) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def point_seed(master_seed: int, index: int) -> int:
    """Seed of sweep point ``index``: ``splitmix64(master + index * golden)`` mod 2**64."""
    return splitmix64((master_seed + index * _GOLDEN64) & _MASK64)


def binary_entropy(p: float) -> float:
    return entropy(SymbolPmf.bernoulli(p))


def inverse_binary_entropy(h: float) -> float:
    """The ``p`` in (0, 1/2] with ``H(p) = h``, by bisection."""
    if not 0.0 < h <= 1.0:
        raise ValidationError(f"entropy must lie in (0, 1], got {h}")
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if binary_entropy(mid) < h:
            lo = mid
        else:
            hi = mid
    return hi


def default_p_grid(n: int = 12, h_lo: float = 0.05, h_hi: float = 0.30) -> list[float]:
    """``n`` values log-spaced in p whose entropies span ``[h_lo, h_hi]``."""
    p_lo, p_hi = inverse_binary_entropy(h_lo), inverse_binary_entropy(h_hi)
    return [float(p) for p in np.geomspace(p_lo, p_hi, n)]


@dataclass(frozen=True)
class SweepSpec:
    p_values: tuple[float, ...] = field(default_factory=lambda: tuple(default_p_grid()))
    q: float = DEFAULT_Q
    r_ch: float = DEFAULT_R_CH
    ell: int = DEFAULT_ELL
    b: int = DEFAULT_B
    n_symbols: int = 200_000
    seed: int = 0
    warmup_blocks: int = 0
    output_path: str | None = None
    max_blocks: int = DEFAULT_MAX_BLOCKS
    jobs: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))
        for p in self.p_values:
            if not 0.0 < p <= 0.5:
                raise ValidationError(f"p must lie in (0, 0.5], got {p}")
        if self.ell < 1 or self.b < 1 or self.n_symbols < 1:
            raise ValidationError("ell, b and n_symbols must all be >= 1")
        if self.warmup_blocks < 0 or self.jobs < 1:
            raise ValidationError("warmup_blocks must be >= 0 and jobs >= 1")
        ChannelSpec(self.r_ch, self.q)
        ArrivalSpec(self.q, self.seed)


@dataclass(frozen=True)
class SchemeResult:
    scheme: str
    code_rate: float
    stable: bool
    tarry_mean: float
    service_mean: float
    inter_arrival_mean: float
    low_moment_bound: float
    mgf_bound: float | None  # None for ftv
    delay_bound: float
    aoi_bound: float
    report: SimReport | None  # None when unstable or not simulated

    @property
    def waiting_bound(self) -> float:
        if self.mgf_bound is None:
            return self.low_moment_bound
        return min(self.low_moment_bound, self.mgf_bound)


@dataclass(frozen=True)
class PointResult:
    p: float
    entropy: float
    n_symbols: int
    seed: int
    vtf: SchemeResult
    ftv: SchemeResult
    simulated: bool = True

    @property
    def schemes(self) -> tuple[SchemeResult, SchemeResult]:
        return self.vtf, self.ftv


def run_point(p: float, q: float = DEFAULT_Q, r_ch: float = DEFAULT_R_CH, ell: int = DEFAULT_ELL,
              b: int = DEFAULT_B, n_symbols: int = 200_000, seed: int = 0, *,
              warmup_blocks: int = 0, simulate_schemes: bool = True,
              max_blocks: int = DEFAULT_MAX_BLOCKS) -> PointResult:
    """Analytic bounds and (optionally) simulations of both codes at one ``p``."""
    if not 0.0 < p <= 0.5:
        raise ValidationError(f"p must lie in (0, 0.5], got {p}")
    pmf = SymbolPmf.bernoulli(p)
    ch = ChannelSpec(r_ch, q)
    arrivals = ArrivalSpec(q, seed)

    tunstall = build_tunstall(pmf, ell)
    b_pmf = block_length_pmf(tunstall, pmf)
    rate = code_rate(tunstall, pmf)
    stable, _ = vtf_stability(rate, ch)
    low = low_moment_bound_vtf(b_pmf, ell, ch)
    mgf = mgf_bound_vtf(b_pmf, ell, ch).bound
    parts = decompose("vtf", b_pmf, ch, min(low, mgf), ell=ell)
    report = None
    if stable and simulate_schemes:
        report = simulate(SimConfig(pmf, arrivals, tunstall, ch, n_symbols, warmup_blocks))
    vtf = SchemeResult("vtf", rate, stable, parts.tarry_mean, parts.service_mean,
                       parts.inter_arrival_mean, low, mgf, parts.delay_bound,
                       parts.peak_aoi_bound, report)

    huffman = build_huffman_block(pmf, b, max_blocks)
    l_pmf = codeword_length_pmf(huffman, pmf)
    rate = code_rate(huffman, pmf)
    stable, _ = vtf_stability(rate, ch)
    low = low_moment_bound_ftv(l_pmf, b, ch)
    parts = decompose("ftv", l_pmf, ch, low, b=b)
    report = None
    if stable and simulate_schemes:
        report = simulate(SimConfig(pmf, arrivals, huffman, ch, n_symbols, warmup_blocks))
    ftv = SchemeResult("ftv", rate, stable, parts.tarry_mean, parts.service_mean,
                       parts.inter_arrival_mean, low, None, parts.delay_bound,
                       parts.peak_aoi_bound, report)
    return PointResult(p, entropy(pmf), n_symbols, seed, vtf, ftv, simulate_schemes)


def fmt(x: float | int | bool | None) -> str:
    """CSV cell: 9 significant digits, ``inf`` for unbounded, ``n/a`` for missing."""
    if x is None:
        return "n/a"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(float(x), ".9g")


def point_rows(point: PointResult) -> list[list[str]]:
    rows = []
    for res in point.schemes:
        inf_if_unstable = (lambda v: v) if res.stable else (lambda v: math.inf)
        if res.report is not None:
            sim = [fmt(res.report.mean_waiting), fmt(res.report.mean_delay),
                   fmt(res.report.mean_peak_aoi), fmt(res.report.stderr_delay)]
        elif point.simulated:
            sim = ["unstable"] * 4
        else:
            sim = ["n/a"] * 4
        rows.append([
            fmt(point.p), fmt(point.entropy), res.scheme, fmt(res.code_rate), fmt(res.stable),
            fmt(res.tarry_mean), fmt(res.service_mean), fmt(res.inter_arrival_mean),
            fmt(inf_if_unstable(res.low_moment_bound)),
            "n/a" if res.mgf_bound is None else fmt(inf_if_unstable(res.mgf_bound)),
            fmt(inf_if_unstable(res.delay_bound)), fmt(inf_if_unstable(res.aoi_bound)),
            *sim, fmt(point.n_symbols), fmt(point.seed),
        ])
    return rows


def write_csv(points: Iterable[PointResult], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for point in points:
        writer.writerows(point_rows(point))


def crossover_entropy(points: Sequence[PointResult]) -> float | None:
    """Smallest entropy at which VtF's simulated mean delay beats FtV's.

    An unstable scheme counts as infinite delay; points where both are
    unstable are skipped.
    """
    for point in sorted(points, key=lambda pt: pt.entropy):
        v = point.vtf.report.mean_delay if point.vtf.report else math.inf
        f = point.ftv.report.mean_delay if point.ftv.report else math.inf
        if math.isinf(v) and math.isinf(f):
            continue
        if v < f:
            return point.entropy
    return None


def _run_indexed(args: tuple) -> PointResult:
    index, p, spec = args
    return run_point(p, spec.q, spec.r_ch, spec.ell, spec.b, spec.n_symbols,
                     point_seed(spec.seed, index), warmup_blocks=spec.warmup_blocks,
                     max_blocks=spec.max_blocks)


def sweep_points(spec: SweepSpec) -> list[PointResult]:
    """All sweep points, sorted by entropy ascending regardless of worker order."""
    tasks = [(i, p, spec) for i, p in enumerate(spec.p_values)]
    if spec.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            points = list(pool.map(_run_indexed, tasks))
    else:
        points = [_run_indexed(t) for t in tasks]
    return sorted(points, key=lambda pt: (pt.entropy, pt.p))


def run_sweep(spec: SweepSpec, out: TextIO | None = None) -> tuple[list[PointResult], str]:
    """Run the sweep and write CSV to ``out`` or ``spec.output_path``.

    Returns the points and the CSV text.
    """
    points = sweep_points(spec)
    buf = io.StringIO()
    write_csv(points, buf)
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    elif spec.output_path is not None:
        with open(spec.output_path, "w", newline="") as fh:
            fh.write(text)
    return points, text
