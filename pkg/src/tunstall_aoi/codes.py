"""Tunstall (variable-to-fixed) and block-Huffman (fixed-to-variable) codes.

Source phrases are tuples of alphabet indices. Codewords are ``str`` of
``'0'``/``'1'``. Both code types are immutable once built.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .source_model import SymbolPmf, ValidationError

Phrase = tuple[int, ...]

DEFAULT_MAX_BLOCKS = 2**20

_SUM_TOL = 1e-12


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class LengthPmf:
    """Distribution of a positive integer length (phrase length B or codeword length L)."""

    support: tuple[tuple[int, float], ...]
    mean: float
    second_moment: float
    variance: float
    max_value: int
    min_value: int

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "LengthPmf":
        acc: dict[int, list[float]] = {}
        for value, prob in pairs:
            if value < 1:
                raise ValidationError(f"length values must be positive, got {value}")
            acc.setdefault(int(value), []).append(float(prob))
        support = tuple((v, math.fsum(acc[v])) for v in sorted(acc))
        if any(p <= 0.0 for _, p in support):
            raise ValidationError("length probabilities must be positive")
        total = math.fsum(p for _, p in support)
        if abs(total - 1.0) > _SUM_TOL:
            raise ValidationError(f"length probabilities sum to {total!r}")
        mean = math.fsum(v * p for v, p in support)
        second = math.fsum(v * v * p for v, p in support)
        var = math.fsum(p * (v - mean) ** 2 for v, p in support)
        return cls(support, mean, second, var, support[-1][0], support[0][0])

    @classmethod
    def constant(cls, value: int) -> "LengthPmf":
        return cls.from_pairs([(value, 1.0)])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.support], dtype=float)

    @property
    def probs(self) -> np.ndarray:
        return np.array([p for _, p in self.support], dtype=float)


@dataclass(frozen=True)
class ParseDictionary:
    """Variable-to-fixed code: a full parse tree whose leaves get ``ell``-bit words.

    ``leaves`` is in lexicographic order and ``leaf_words[i]`` is the binary
    expansion of ``i``.
    """

    ell: int
    alphabet_size: int
    leaves: tuple[Phrase, ...]
    leaf_probs: tuple[float, ...]
    leaf_words: tuple[str, ...]
    # trie for streaming parses: _next[node][symbol] >= 0 is a child node,
    # < 0 encodes leaf index -(value + 1)
    _next: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())

    def __post_init__(self) -> None:
        k = self.alphabet_size
        if not (k <= len(self.leaves) <= 2**self.ell):
            raise ValidationError(f"{len(self.leaves)} leaves do not fit {self.ell}-bit words")
        if len(set(self.leaf_words)) != len(self.leaf_words) or any(
            len(w) != self.ell for w in self.leaf_words
        ):
            raise ValidationError("leaf words must be distinct and exactly ell bits")
        if abs(math.fsum(self.leaf_probs) - 1.0) > _SUM_TOL:
            raise ValidationError("leaf probabilities do not sum to 1")
        if not self._next:
            object.__setattr__(self, "_next", _build_trie(self.leaves, k))

    @property
    def word_to_leaf(self) -> dict[str, Phrase]:
        return dict(zip(self.leaf_words, self.leaves))

    def depths(self) -> np.ndarray:
        return np.array([len(leaf) for leaf in self.leaves], dtype=np.int64)

    def parse_lengths(self, symbols: Sequence[int]) -> tuple[np.ndarray, np.ndarray, int]:
        """Greedy parse of ``symbols``.

        Returns ``(leaf_indices, block_sizes, trailing)`` where ``trailing`` is
        the number of symbols left in an unfinished walk at the end.
        """
        nxt = self._next
        depths = [len(leaf) for leaf in self.leaves]
        leaf_ids: list[int] = []
        node = 0
        for s in symbols:
            child = nxt[node][s]
            if child < 0:
                leaf_ids.append(-child - 1)
                node = 0
            else:
                node = child
        ids = np.array(leaf_ids, dtype=np.int64)
        sizes = np.array([depths[i] for i in leaf_ids], dtype=np.int64)
        trailing = len(symbols) - int(sizes.sum())
        return ids, sizes, trailing

    def to_text(self, letters: str | None = None) -> str:
        """One ``phrase codeword`` line per leaf. Debug aid only, no stability promise."""
        return "\n".join(
            f"{phrase_str(leaf, letters)} {word}" for leaf, word in zip(self.leaves, self.leaf_words)
        )


@dataclass(frozen=True)
class BlockCode:
    """Fixed-to-variable code on blocks of ``b`` symbols.

    ``codewords[j]`` belongs to the block whose base-``alphabet_size`` digits
    (most significant first) spell ``j``, i.e. lexicographic block order.
    """

    b: int
    alphabet_size: int
    codewords: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.codewords) != self.alphabet_size**self.b:
            raise ValidationError("need one codeword per block")
        if sum(2.0 ** -len(w) for w in self.codewords) > 1.0:
            raise ValidationError("codeword lengths violate Kraft")
        if not _is_prefix_free(self.codewords):
            raise ValidationError("codewords are not prefix-free")

    @property
    def lengths(self) -> np.ndarray:
        return np.array([len(w) for w in self.codewords], dtype=np.int64)

    def blocks(self) -> Iterable[Phrase]:
        return itertools.product(range(self.alphabet_size), repeat=self.b)

    def block_index(self, block: Sequence[int]) -> int:
        j = 0
        for s in block:
            j = j * self.alphabet_size + int(s)
        return j

    def block_indices(self, symbols: np.ndarray) -> np.ndarray:
        """Index of each complete block in ``symbols``; the partial tail is dropped."""
        symbols = np.asarray(symbols, dtype=np.int64)
        m = len(symbols) // self.b
        weights = self.alphabet_size ** np.arange(self.b - 1, -1, -1, dtype=np.int64)
        return symbols[: m * self.b].reshape(m, self.b) @ weights

    def to_text(self, letters: str | None = None) -> str:
        return "\n".join(
            f"{phrase_str(block, letters)} {word}" for block, word in zip(self.blocks(), self.codewords)
        )


Code = Union[ParseDictionary, BlockCode]


@dataclass(frozen=True)
class EncodedStream:
    bits: str
    codewords: tuple[str, ...]
    block_sizes: tuple[int, ...]
    trailing: Phrase

    def __len__(self) -> int:
        return len(self.codewords)


def phrase_str(phrase: Phrase, letters: str | None = None) -> str:
    letters = letters or "abcdefghijklmnopqrstuvwxyz"
    if phrase and max(phrase) >= len(letters):
        return ",".join(map(str, phrase))
    return "".join(letters[s] for s in phrase)


def _build_trie(leaves: Sequence[Phrase], k: int) -> tuple[tuple[int, ...], ...]:
    table: list[list[int | None]] = [[None] * k]
    for leaf_id, leaf in enumerate(leaves):
        node = 0
        for depth, s in enumerate(leaf):
            last = depth == len(leaf) - 1
            cur = table[node][s]
            if last:
                if cur is not None:
                    raise ValidationError(f"leaf {leaf} collides with another phrase")
                table[node][s] = -(leaf_id + 1)
            else:
                if cur is None:
                    table.append([None] * k)
                    cur = table[node][s] = len(table) - 1
                elif cur < 0:
                    raise ValidationError(f"leaf set is not prefix-free at {leaf}")
                node = cur
    for row in table:
        if any(c is None for c in row):
            raise ValidationError("parse tree is not full")
    return tuple(tuple(row) for row in table)  # type: ignore[arg-type]


def _is_prefix_free(words: Sequence[str]) -> bool:
    ordered = sorted(words)
    return all(not b.startswith(a) for a, b in zip(ordered, ordered[1:]))


def _phrase_prob(phrase: Phrase, probs: Sequence[float]) -> float:
    out = 1.0
    for s in phrase:
        out *= probs[s]
    return out


def build_tunstall(pmf: SymbolPmf, ell: int) -> ParseDictionary:
    """Tunstall parse tree with at most ``2**ell`` leaves.

    The most probable leaf is split into ``|X|`` children for as long as the
    leaf count stays within ``2**ell``; probability ties go to the
    lexicographically smallest phrase.
    """
    k = pmf.size
    if ell < 0 or 2**ell < k:
        raise ValidationError(f"2**{ell} words cannot index the {k} root leaves")
    cap = 2**ell
    # max-heap on probability, then smallest phrase
    heap = [(-p, (s,)) for s, p in enumerate(pmf.probs)]
    heapq.heapify(heap)
    n_leaves = k
    while n_leaves + (k - 1) <= cap:
        neg_p, phrase = heapq.heappop(heap)
        for s, ps in enumerate(pmf.probs):
            heapq.heappush(heap, (neg_p * ps, phrase + (s,)))
        n_leaves += k - 1
    leaves = sorted(phrase for _, phrase in heap)
    return ParseDictionary(
        ell=ell,
        alphabet_size=k,
        leaves=tuple(leaves),
        leaf_probs=tuple(_phrase_prob(leaf, pmf.probs) for leaf in leaves),
        leaf_words=tuple(format(i, f"0{ell}b") if ell else "" for i in range(len(leaves))),
    )


def huffman_lengths(probs: Sequence[float]) -> list[int]:
    """Binary Huffman codeword lengths; merge ties go to the lower creation index."""
    n = len(probs)
    if n == 1:
        return [1]
    heap = [(p, i) for i, p in enumerate(probs)]
    heapq.heapify(heap)
    parent = [-1] * (2 * n - 1)
    next_id = n
    while len(heap) > 1:
        p1, a = heapq.heappop(heap)
        p2, b = heapq.heappop(heap)
        parent[a] = parent[b] = next_id
        heapq.heappush(heap, (p1 + p2, next_id))
        next_id += 1
    depth = [0] * (2 * n - 1)
    # parents are created after children, so walk ids downward from the root
    for node in range(2 * n - 3, -1, -1):
        depth[node] = depth[parent[node]] + 1
    return depth[:n]


def canonical_codewords(lengths: Sequence[int]) -> list[str]:
    """Canonical prefix code: words assigned in (length, index) order."""
    order = sorted(range(len(lengths)), key=lambda i: (lengths[i], i))
    words = [""] * len(lengths)
    code = 0
    prev = lengths[order[0]]
    for rank, i in enumerate(order):
        if rank:
            code = (code + 1) << (lengths[i] - prev)
        prev = lengths[i]
        words[i] = format(code, f"0{lengths[i]}b")
    return words


def build_huffman_block(pmf: SymbolPmf, b: int, max_blocks: int = DEFAULT_MAX_BLOCKS) -> BlockCode:
    if b < 1:
        raise ValidationError(f"block length must be >= 1, got {b}")
    n_blocks = pmf.size**b
    if n_blocks > max_blocks:
        raise ValidationError(f"{pmf.size}**{b} = {n_blocks} blocks exceeds cap {max_blocks}")
    probs = np.ones(1)
    for _ in range(b):
        probs = np.outer(probs, pmf.probs).ravel()
    lengths = huffman_lengths(probs.tolist())
    return BlockCode(b=b, alphabet_size=pmf.size, codewords=tuple(canonical_codewords(lengths)))


def block_length_pmf(code: ParseDictionary, pmf: SymbolPmf | None = None) -> LengthPmf:
    """Distribution of the phrase length B: leaf probabilities grouped by depth."""
    probs = code.leaf_probs if pmf is None else [_phrase_prob(l, pmf.probs) for l in code.leaves]
    return LengthPmf.from_pairs(zip((len(l) for l in code.leaves), probs))


def block_probs(code: BlockCode, pmf: SymbolPmf) -> np.ndarray:
    probs = np.ones(1)
    for _ in range(code.b):
        probs = np.outer(probs, pmf.probs).ravel()
    return probs


def codeword_length_pmf(code: BlockCode, pmf: SymbolPmf) -> LengthPmf:
    return LengthPmf.from_pairs(zip(code.lengths.tolist(), block_probs(code, pmf).tolist()))


def code_rate(code: Code, pmf: SymbolPmf) -> float:
    """Mean coded bits per source symbol."""
    if isinstance(code, ParseDictionary):
        return code.ell / block_length_pmf(code, pmf).mean
    return codeword_length_pmf(code, pmf).mean / code.b


def encode_stream(code: Code, symbols: Sequence[int]) -> EncodedStream:
    symbols = [int(s) for s in symbols]
    if isinstance(code, ParseDictionary):
        ids, sizes, trailing = code.parse_lengths(symbols)
        words = tuple(code.leaf_words[i] for i in ids)
        block_sizes = tuple(int(x) for x in sizes)
    else:
        m = len(symbols) // code.b
        words = tuple(
            code.codewords[code.block_index(symbols[i * code.b : (i + 1) * code.b])] for i in range(m)
        )
        block_sizes = (code.b,) * m
        trailing = len(symbols) - m * code.b
    tail = tuple(symbols[len(symbols) - trailing :]) if trailing else ()
    return EncodedStream("".join(words), words, block_sizes, tail)


def decode_stream(code: Code, bits: str | EncodedStream) -> list[int]:
    if isinstance(bits, EncodedStream):
        bits = bits.bits
    out: list[int] = []
    if isinstance(code, ParseDictionary):
        if len(bits) % max(code.ell, 1):
            raise DecodeError(f"bit count {len(bits)} is not a multiple of {code.ell}")
        table = code.word_to_leaf
        for i in range(0, len(bits), code.ell):
            word = bits[i : i + code.ell]
            if word not in table:
                raise DecodeError(f"word {word!r} at bit {i} is not assigned to any phrase")
            out.extend(table[word])
        return out
    table = {w: blk for w, blk in zip(code.codewords, code.blocks())}
    longest = max(len(w) for w in code.codewords)
    start = 0
    for end in range(1, len(bits) + 1):
        word = bits[start:end]
        if word in table:
            out.extend(table[word])
            start = end
        elif end - start >= longest:
            raise DecodeError(f"no codeword matches bits {start}..{end}")
    if start != len(bits):
        raise DecodeError(f"dangling bits {bits[start:]!r} at end of stream")
    return out
