"""Variable-to-fixed (Tunstall) and fixed-to-variable (block-Huffman) coding of
randomly arriving symbols over a FIFO channel: delay, peak Age of Information,
stability and waiting-time bounds, plus a discrete-event simulator."""
from .codes import (BlockCode, DecodeError, EncodedStream, LengthPmf, ParseDictionary,
                    block_length_pmf, build_huffman_block, build_tunstall, code_rate,
                    codeword_length_pmf, decode_stream, encode_stream)
from .queue_analysis import (ChannelSpec, DelayDecomposition, MgfBound, RootFindingError,
                             WaitingBounds, decompose, low_moment_bound_ftv, low_moment_bound_vtf,
                             mgf_bound_vtf, phi_U, stabilizable, tarry_mean, vtf_stability,
                             waiting_bounds_vtf)
from .experiment import (CSV_HEADER, PointResult, SchemeResult, SweepSpec, crossover_entropy,
                         default_p_grid, run_point, run_sweep)
from .simulator import BlockTrace, SimConfig, SimReport, detect_divergence, run_blocks, simulate
from .source_model import (RNG_ALGORITHM, ArrivalSpec, SymbolPmf, SymbolStream, ValidationError,
                           entropy, sample_stream, validate_pmf)

__all__ = [
    "ArrivalSpec", "BlockCode", "BlockTrace", "CSV_HEADER", "PointResult", "SchemeResult",
    "SweepSpec", "crossover_entropy", "default_p_grid", "run_blocks", "run_point", "run_sweep", "ChannelSpec", "DecodeError", "DelayDecomposition",
    "EncodedStream", "LengthPmf", "MgfBound", "ParseDictionary", "RNG_ALGORITHM",
    "RootFindingError", "SimConfig", "SimReport", "SymbolPmf", "SymbolStream",
    "ValidationError", "WaitingBounds", "block_length_pmf", "build_huffman_block",
    "build_tunstall", "code_rate", "codeword_length_pmf", "decode_stream", "decompose",
    "detect_divergence", "encode_stream", "entropy", "low_moment_bound_ftv",
    "low_moment_bound_vtf", "mgf_bound_vtf", "phi_U", "sample_stream", "simulate",
    "stabilizable", "tarry_mean", "validate_pmf", "vtf_stability", "waiting_bounds_vtf",
]
