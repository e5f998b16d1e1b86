"""Discrete-event simulation of source -> encoder -> FIFO -> decoder.

Blocks enter the FIFO at the arrival instant of their last symbol. The
waiting time follows the Lindley recursion
``W_i = max(0, W_{i-1} + S_{i-1} - T_i)`` with ``W_1 = 0``, where ``T_i`` is
the gap between the queue-entry instants of blocks ``i-1`` and ``i``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .codes import BlockCode, Code, ParseDictionary
from .queue_analysis import ChannelSpec
from .source_model import (RNG_ALGORITHM, ArrivalSpec, SymbolPmf, SymbolStream, ValidationError,
                           sample_stream)
from .stats import RunningStats, batch_means_stderr

TRACE_COLUMNS = ("block_index", "B_or_b", "L", "arrival_last", "W", "S", "R", "Gamma")


@dataclass(frozen=True)
class SimConfig:
    pmf: SymbolPmf
    arrivals: ArrivalSpec
    code: Code
    channel: ChannelSpec
    n_symbols: int
    warmup_blocks: int = 0
    trace_path: Path | str | None = None

    def __post_init__(self) -> None:
        if self.n_symbols < 1:
            raise ValidationError("n_symbols must be >= 1")
        if self.warmup_blocks < 0:
            raise ValidationError("warmup_blocks must be >= 0")
        if self.arrivals.q != self.channel.q:
            raise ValidationError(f"arrival q {self.arrivals.q} differs from channel q {self.channel.q}")
        if self.code.alphabet_size != self.pmf.size:
            raise ValidationError("code alphabet does not match the pmf")

    @property
    def scheme(self) -> str:
        return "vtf" if isinstance(self.code, ParseDictionary) else "ftv"


@dataclass(frozen=True)
class SimReport:
    mean_delay: float
    mean_peak_aoi: float
    mean_waiting: float
    mean_tarry: float
    mean_service: float
    mean_inter_arrival: float
    # W and S averaged over symbols rather than blocks (each symbol sees its block's values)
    mean_waiting_per_symbol: float
    mean_service_per_symbol: float
    n_blocks: int
    n_symbols_decoded: int
    stderr_delay: float
    stderr_peak_aoi: float
    stderr_waiting: float
    stderr_tarry: float
    rng: str = RNG_ALGORITHM


@dataclass(frozen=True)
class BlockTrace:
    sizes: np.ndarray         # symbols per block
    bits: np.ndarray          # codeword length per block
    arrival_last: np.ndarray  # queue-entry instant a_i
    inter_arrival: np.ndarray
    service: np.ndarray
    waiting: np.ndarray
    decode_time: np.ndarray
    symbol_arrivals: np.ndarray  # A_n of every fully parsed symbol

    @property
    def peak_aoi(self) -> np.ndarray:
        """``R_i - a_{i-1}`` for blocks 2, 3, ..."""
        return self.decode_time[1:] - self.arrival_last[:-1]


def lindley(service: np.ndarray, inter_arrival: np.ndarray) -> np.ndarray:
    s = service.tolist()
    t = inter_arrival.tolist()
    w = [0.0] * len(s)
    prev = 0.0
    for i in range(1, len(s)):
        prev = prev + s[i - 1] - t[i]
        if prev < 0.0:
            prev = 0.0
        w[i] = prev
    return np.array(w)


def run_blocks(cfg: SimConfig, stream: SymbolStream | None = None) -> BlockTrace:
    """Form blocks and push them through the FIFO.

    ``stream`` overrides the one sampled from ``cfg`` (hand-built traces).
    """
    if stream is None:
        stream = sample_stream(cfg.pmf, cfg.arrivals, cfg.n_symbols)
    code = cfg.code
    if isinstance(code, ParseDictionary):
        _, sizes, _ = code.parse_lengths(stream.symbols.tolist())
        bits = np.full(len(sizes), code.ell, dtype=np.int64)
    elif isinstance(code, BlockCode):
        idx = code.block_indices(stream.symbols)
        sizes = np.full(len(idx), code.b, dtype=np.int64)
        bits = code.lengths[idx]
    else:
        raise TypeError(f"unsupported code type {type(code).__name__}")
    n_used = int(sizes.sum())
    ends = np.cumsum(sizes) - 1
    arrival_last = stream.arrival_times[ends].astype(float)
    inter_arrival = np.diff(arrival_last, prepend=0.0)
    service = bits / cfg.channel.r_ch
    waiting = lindley(service, inter_arrival)
    return BlockTrace(
        sizes=sizes,
        bits=bits,
        arrival_last=arrival_last,
        inter_arrival=inter_arrival,
        service=service,
        waiting=waiting,
        decode_time=arrival_last + waiting + service,
        symbol_arrivals=stream.arrival_times[:n_used].astype(float),
    )


def write_trace(trace: BlockTrace, path: Path | str) -> None:
    gamma = np.concatenate([[math.nan], trace.peak_aoi])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for i in range(len(trace.sizes)):
            writer.writerow([
                i + 1, int(trace.sizes[i]), int(trace.bits[i]), repr(float(trace.arrival_last[i])),
                repr(float(trace.waiting[i])), repr(float(trace.service[i])),
                repr(float(trace.decode_time[i])), "" if i == 0 else repr(float(gamma[i])),
            ])


def simulate(cfg: SimConfig, stream: SymbolStream | None = None) -> SimReport:
    """Run one simulation and summarize delay, peak AoI and their components.

    The trailing partial block is discarded. Symbol-level means use every
    block after ``warmup_blocks``; block-level means (T, W, S, peak AoI)
    additionally skip block 1, whose peak AoI has no predecessor.
    """
    trace = run_blocks(cfg, stream)
    if cfg.trace_path is not None:
        write_trace(trace, cfg.trace_path)
    n_blocks = len(trace.sizes)
    first_sym_block = cfg.warmup_blocks
    first_blk = max(1, cfg.warmup_blocks)
    if n_blocks - first_blk < 1:
        raise ValidationError(
            f"only {n_blocks} complete blocks; need more than {first_blk} to report statistics"
        )

    block_of_symbol = np.repeat(np.arange(n_blocks), trace.sizes)
    keep = block_of_symbol >= first_sym_block
    owner = block_of_symbol[keep]
    arrivals = trace.symbol_arrivals[keep]
    tarry = trace.arrival_last[owner] - arrivals
    delay = trace.decode_time[owner] - arrivals
    w_sym = trace.waiting[owner]
    s_sym = trace.service[owner]

    blk = slice(first_blk, n_blocks)
    aoi = trace.peak_aoi[first_blk - 1:]

    acc = {name: RunningStats() for name in ("delay", "tarry", "w_sym", "s_sym", "aoi", "w", "s", "t")}
    for name, xs in (("delay", delay), ("tarry", tarry), ("w_sym", w_sym), ("s_sym", s_sym),
                     ("aoi", aoi), ("w", trace.waiting[blk]), ("s", trace.service[blk]),
                     ("t", trace.inter_arrival[blk])):
        acc[name].push_array(xs)

    return SimReport(
        mean_delay=acc["delay"].mean,
        mean_peak_aoi=acc["aoi"].mean,
        mean_waiting=acc["w"].mean,
        mean_tarry=acc["tarry"].mean,
        mean_service=acc["s"].mean,
        mean_inter_arrival=acc["t"].mean,
        mean_waiting_per_symbol=acc["w_sym"].mean,
        mean_service_per_symbol=acc["s_sym"].mean,
        n_blocks=n_blocks - first_sym_block,
        n_symbols_decoded=int(keep.sum()),
        stderr_delay=batch_means_stderr(delay),
        stderr_peak_aoi=batch_means_stderr(aoi),
        stderr_waiting=batch_means_stderr(trace.waiting[blk]),
        stderr_tarry=batch_means_stderr(tarry),
    )


def detect_divergence(cfg: SimConfig, windows: int = 5, window_blocks: int | None = None) -> bool:
    """True when windowed mean waiting time rises strictly across every window.

    Windows are consecutive runs of ``window_blocks`` blocks after warm-up; by
    default the post-warm-up blocks are split evenly.
    """
    if windows < 3:
        raise ValidationError("need at least 3 windows")
    waiting = run_blocks(cfg).waiting[cfg.warmup_blocks:]
    size = len(waiting) // windows if window_blocks is None else int(window_blocks)
    if size < 1 or size * windows > len(waiting):
        raise ValidationError(f"{len(waiting)} blocks cannot fill {windows} windows of {size}")
    means = waiting[: size * windows].reshape(windows, size).mean(axis=1)
    return bool(np.all(np.diff(means) > 0.0))
