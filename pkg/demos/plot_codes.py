"""
Building the two source codes
=============================

A Tunstall dictionary parses a variable number of source symbols into a
fixed ``ell``-bit word (variable-to-fixed, VtF). A block-Huffman code does the
opposite: ``b`` symbols go in, a variable number of bits come out
(fixed-to-variable, FtV). Here we build both for a skewed binary source and
look at what each one sends over the channel.
"""
from tunstall_aoi import (SymbolPmf, block_length_pmf, build_huffman_block, build_tunstall,
                          code_rate, codeword_length_pmf, decode_stream, encode_stream, entropy)

pmf = SymbolPmf.bernoulli(0.1)
print(f"source entropy H = {entropy(pmf):.4f} bits/symbol")

##############################################################################
# Tunstall: grow the most likely leaf until the 2**ell words are used up.

tunstall = build_tunstall(pmf, 3)
print(tunstall.to_text())
b_pmf = block_length_pmf(tunstall, pmf)
print(f"E[B] = {b_pmf.mean:.4f} symbols per 3-bit word, "
      f"rate = {code_rate(tunstall, pmf):.4f} bits/symbol")

##############################################################################
# Block Huffman over pairs of symbols.

huffman = build_huffman_block(pmf, 2)
print(huffman.to_text())
l_pmf = codeword_length_pmf(huffman, pmf)
print(f"E[L] = {l_pmf.mean:.4f} bits per 2-symbol block, "
      f"rate = {code_rate(huffman, pmf):.4f} bits/symbol")

##############################################################################
# Both codes are lossless. Symbols that do not complete a phrase or block are
# held back as the trailing remainder.

symbols = [0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1]
for code in (tunstall, huffman):
    enc = encode_stream(code, symbols)
    back = decode_stream(code, enc.bits)
    print(f"{type(code).__name__:>15}: bits={enc.bits} blocks={enc.block_sizes} "
          f"trailing={enc.trailing} roundtrip={back == symbols[:len(back)]}")
