"""
Simulating delay and peak age of information
============================================

Symbols arrive after geometric gaps, are grouped into blocks by the code and
shipped through a FIFO over a channel of rate ``r_ch`` bits per slot. The
simulator tracks every block and reports the mean symbol delay, the mean peak
AoI and their parts: tarry at the encoder, queueing and service.
"""
from tunstall_aoi import (ArrivalSpec, ChannelSpec, SimConfig, SymbolPmf, build_huffman_block,
                          build_tunstall, run_blocks, simulate)

pmf = SymbolPmf.bernoulli(0.01)
ch = ChannelSpec(r_ch=1 / 6.5, q=0.5)

##############################################################################
# Run both schemes on the same seed, so they see the same symbol stream.

for name, code in (("vtf", build_tunstall(pmf, 4)), ("ftv", build_huffman_block(pmf, 4))):
    rep = simulate(SimConfig(pmf, ArrivalSpec(ch.q, seed=7), code, ch, n_symbols=200_000))
    print(f"{name}: delay {rep.mean_delay:7.2f} +- {rep.stderr_delay:.2f} "
          f"= tarry {rep.mean_tarry:.2f} + wait {rep.mean_waiting_per_symbol:.2f} "
          f"+ service {rep.mean_service_per_symbol:.2f}")
    print(f"     peak AoI {rep.mean_peak_aoi:7.2f} over {rep.n_blocks} blocks")

##############################################################################
# The per-block trace holds the queue's internals; the waiting times follow
# the Lindley recursion.

trace = run_blocks(SimConfig(pmf, ArrivalSpec(ch.q, seed=7), build_tunstall(pmf, 4), ch, 2_000))
for i in range(5):
    print(f"block {i + 1}: B={trace.sizes[i]} T={trace.inter_arrival[i]:.0f} "
          f"W={trace.waiting[i]:.1f} S={trace.service[i]:.1f} R={trace.decode_time[i]:.1f}")
