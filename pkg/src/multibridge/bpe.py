"""Byte-pair-encoding subword segmentation.

Words are sequences of characters with an end-of-word marker fused onto
the final character, the convention subword-nmt codes files use. Learning
greedily merges the most frequent adjacent symbol pair; ties break to the
lexicographically smallest (left, right) pair, a portable rule pinned
here because insertion-order tie-breaking is not reproducible across
implementations.

Applied output uses the ``@@`` continuation suffix on non-final subwords.
When a vocabulary with a frequency floor is attached, out-of-vocabulary
subwords are re-split into characters at apply time, mirroring the
vocabulary-threshold behaviour of subword-nmt.

Tokens must not contain whitespace or the literal ``@@`` separator;
the separator is what makes segmentation reversible.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import MultibridgeError

SEPARATOR = "@@"
END_OF_WORD = "</w>"

#: Merges stop early once the best pair occurs fewer times than this.
DEFAULT_MERGE_FLOOR = 2


class BpeError(MultibridgeError):
    """Base class for BPE errors."""


class EmptyCorpus(BpeError):
    """No tokens were supplied to learn from (or to score)."""


class DanglingContinuation(BpeError):
    """A subword stream ends with a continuation token."""


@dataclass(frozen=True)
class BpeModel:
    """Ordered merge rules plus the frequency-filtered subword vocabulary."""

    merges: tuple[tuple[str, str], ...]
    vocab: dict[str, int] | None
    num_merges: int
    min_frequency: int

    def __post_init__(self) -> None:
        if len(self.merges) > self.num_merges:
            raise BpeError("more merges than the configured budget")
        for left, right in self.merges:
            if not left or not right:
                raise BpeError(f"empty side in merge rule ({left!r}, {right!r})")

    def ranks(self) -> dict[tuple[str, str], int]:
        return {pair: i for i, pair in enumerate(self.merges)}


def _word_symbols(token: str) -> tuple[str, ...]:
    if not token:
        raise BpeError("cannot segment an empty token")
    if len(token) == 1:
        return (token + END_OF_WORD,)
    return tuple(token[:-1]) + (token[-1] + END_OF_WORD,)


def _merge_word(symbols: Sequence[str], pair: tuple[str, str]) -> tuple[str, ...]:
    """Replace non-overlapping occurrences of ``pair``, left to right."""
    left, right = pair
    merged = left + right
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        if symbols[i] == left and i + 1 < n and symbols[i + 1] == right:
            out.append(merged)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return tuple(out)


def _pair_counts(symbols: Sequence[str]) -> Counter:
    return Counter(zip(symbols, symbols[1:]))


def render_subwords(symbols: Sequence[str]) -> list[str]:
    """Turn internal symbols into @@-convention subword tokens."""
    out = [s + SEPARATOR for s in symbols[:-1]]
    last = symbols[-1]
    if last.endswith(END_OF_WORD):
        last = last[: -len(END_OF_WORD)]
    out.append(last)
    return out


def _iter_tokens(token_stream: Iterable[str]) -> Iterable[str]:
    for chunk in token_stream:
        yield from chunk.split()


def learn_bpe(
    token_stream: Iterable[str],
    num_merges: int = 32000,
    min_frequency: int = 5,
    merge_floor: int = DEFAULT_MERGE_FLOOR,
) -> BpeModel:
    """Learn merge rules from tokenized text.

    ``token_stream`` yields whitespace-separated tokens (whole lines are
    fine). ``min_frequency`` filters the resulting vocabulary, applied at
    segmentation time; ``merge_floor`` is the learn-time stopping floor.
    """
    token_counts = Counter(_iter_tokens(token_stream))
    if not token_counts:
        raise EmptyCorpus("no tokens to learn from")

    words: list[list] = [[_word_symbols(tok), freq] for tok, freq in token_counts.items()]
    pair_counts: dict[tuple[str, str], int] = {}
    pair_words: dict[tuple[str, str], set[int]] = {}
    for wid, (symbols, freq) in enumerate(words):
        for pair, k in _pair_counts(symbols).items():
            pair_counts[pair] = pair_counts.get(pair, 0) + k * freq
            pair_words.setdefault(pair, set()).add(wid)

    merges: list[tuple[str, str]] = []
    for _ in range(num_merges):
        best_pair = None
        best_count = 0
        for pair, count in pair_counts.items():
            if count > best_count or (count == best_count and best_pair is not None and pair < best_pair):
                best_pair = pair
                best_count = count
        if best_pair is None or best_count < merge_floor:
            break
        merges.append(best_pair)

        for wid in sorted(pair_words[best_pair]):
            symbols, freq = words[wid]
            new_symbols = _merge_word(symbols, best_pair)
            if new_symbols == symbols:
                continue
            old_pairs = _pair_counts(symbols)
            new_pairs = _pair_counts(new_symbols)
            for pair in old_pairs.keys() | new_pairs.keys():
                delta = (new_pairs.get(pair, 0) - old_pairs.get(pair, 0)) * freq
                if delta:
                    pair_counts[pair] = pair_counts.get(pair, 0) + delta
                    if pair_counts[pair] <= 0:
                        del pair_counts[pair]
                if new_pairs.get(pair, 0) == 0:
                    bucket = pair_words.get(pair)
                    if bucket is not None:
                        bucket.discard(wid)
                        if not bucket:
                            del pair_words[pair]
                elif old_pairs.get(pair, 0) == 0:
                    pair_words.setdefault(pair, set()).add(wid)
            words[wid][0] = new_symbols

    vocab_counts: Counter = Counter()
    for symbols, freq in words:
        for subword in render_subwords(symbols):
            vocab_counts[subword] += freq
    vocab = {sym: cnt for sym, cnt in vocab_counts.items() if cnt >= min_frequency}
    return BpeModel(tuple(merges), vocab, num_merges, min_frequency)


def _encode(token: str, ranks: dict[tuple[str, str], int]) -> tuple[str, ...]:
    symbols = _word_symbols(token)
    while len(symbols) > 1:
        best = None
        best_rank = len(ranks)
        for pair in set(zip(symbols, symbols[1:])):
            rank = ranks.get(pair)
            if rank is not None and rank < best_rank:
                best = pair
                best_rank = rank
        if best is None:
            break
        symbols = _merge_word(symbols, best)
    return symbols


def _split_oov(subword: str, is_final: bool) -> list[str]:
    core = subword[: -len(SEPARATOR)] if subword.endswith(SEPARATOR) and not is_final else subword
    if len(core) <= 1:
        return [subword]
    chars = list(core)
    if is_final:
        return [c + SEPARATOR for c in chars[:-1]] + [chars[-1]]
    return [c + SEPARATOR for c in chars]


class BpeSegmenter:
    """Reusable applier: build the rank table and word cache once."""

    def __init__(self, model: BpeModel, reserved: Iterable[str] = ()):
        self.model = model
        self._ranks = model.ranks()
        self._reserved = frozenset(reserved)
        self._cache: dict[str, list[str]] = {}

    def segment(self, tokens: Sequence[str]) -> list[str]:
        out: list[str] = []
        for token in tokens:
            if token in self._reserved:
                out.append(token)
                continue
            got = self._cache.get(token)
            if got is None:
                rendered = render_subwords(_encode(token, self._ranks))
                if self.model.vocab is not None:
                    filtered: list[str] = []
                    for i, subword in enumerate(rendered):
                        if subword in self.model.vocab:
                            filtered.append(subword)
                        else:
                            filtered.extend(_split_oov(subword, i == len(rendered) - 1))
                    rendered = filtered
                got = rendered
                self._cache[token] = got
            out.extend(got)
        return out


def apply_bpe(model: BpeModel, tokens: Sequence[str], reserved: Iterable[str] = ()) -> list[str]:
    """Segment tokens into @@-convention subwords.

    ``reserved`` tokens (e.g. language control tags) pass through whole.
    Subwords missing from the model vocabulary are re-split to characters.
    """
    return BpeSegmenter(model, reserved).segment(tokens)


def revert_bpe(subwords: Sequence[str]) -> list[str]:
    """Undo @@-convention segmentation; inverse of :func:`apply_bpe`."""
    tokens: list[str] = []
    buffer: list[str] = []
    for subword in subwords:
        if subword.endswith(SEPARATOR):
            buffer.append(subword[: -len(SEPARATOR)])
        else:
            buffer.append(subword)
            tokens.append("".join(buffer))
            buffer = []
    if buffer:
        raise DanglingContinuation("subword stream ends mid-word (trailing @@)")
    return tokens


def save_bpe(model: BpeModel, codes_path: str | Path, vocab_path: str | Path | None = None) -> None:
    """Write the codes file (and optionally the vocabulary file)."""
    with open(codes_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"#bpe num_merges={model.num_merges} min_frequency={model.min_frequency}\n")
        for left, right in model.merges:
            f.write(f"{left} {right}\n")
    if vocab_path is not None:
        if model.vocab is None:
            raise BpeError("model has no vocabulary to save")
        with open(vocab_path, "w", encoding="utf-8", newline="\n") as f:
            for sym, count in sorted(model.vocab.items(), key=lambda kv: (-kv[1], kv[0])):
                f.write(f"{sym} {count}\n")


def load_bpe(codes_path: str | Path, vocab_path: str | Path | None = None) -> BpeModel:
    """Load a model saved by :func:`save_bpe`."""
    with open(codes_path, encoding="utf-8") as f:
        header = f.readline().rstrip("\n")
        fields = dict(
            part.split("=", 1) for part in header.removeprefix("#bpe").split() if "=" in part
        )
        if not header.startswith("#bpe") or "num_merges" not in fields or "min_frequency" not in fields:
            raise BpeError(f"{codes_path}: not a BPE codes file")
        merges = []
        for line_no, line in enumerate(f, start=2):
            parts = line.rstrip("\n").split(" ")
            if len(parts) != 2:
                raise BpeError(f"{codes_path}:{line_no}: expected 'left right'")
            merges.append((parts[0], parts[1]))
    vocab = None
    if vocab_path is not None:
        vocab = {}
        with open(vocab_path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                parts = line.rstrip("\n").rsplit(" ", 1)
                if len(parts) != 2:
                    raise BpeError(f"{vocab_path}:{line_no}: expected 'symbol count'")
                vocab[parts[0]] = int(parts[1])
    return BpeModel(tuple(merges), vocab, int(fields["num_merges"]), int(fields["min_frequency"]))
