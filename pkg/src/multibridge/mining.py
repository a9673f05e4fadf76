"""Pivot extraction: mine X-Y parallel corpora out of English-centric bitext.

Two sentences in different non-English languages form a mined pair when
they were both observed as translations of the same English sentence.
Join equality is defined by :func:`normalize_pivot` (NFC plus whitespace
collapse) rather than raw string equality, which would miss trivially
variant duplicates.

The index holds every English sentence's per-language translation sets,
keyed by a 64-bit hash of the normalized sentence with full-key
verification on collision; millions of keys fit in memory this way and
the join stays linear.
"""

from __future__ import annotations

import hashlib
import logging
import unicodedata
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .corpus import BitextCorpus, SentencePair
from .errors import MultibridgeError

logger = logging.getLogger(__name__)

#: Per-pivot-key ceiling on the translation cross product. Boilerplate
#: sentences ("Thank you.") can have hundreds of observed translations per
#: language; an uncapped join would blow up quadratically on them.
DEFAULT_XPROD_CAP = 64


class MiningError(MultibridgeError):
    """Base class for pivot-mining errors."""


class NonPivotCorpus(MiningError):
    """An input corpus does not include the pivot language."""

    def __init__(self, src_lang: str, tgt_lang: str, pivot: str):
        super().__init__(f"corpus {src_lang}-{tgt_lang} has no {pivot} side")
        self.direction = (src_lang, tgt_lang)


class PivotLanguageRequested(MiningError):
    """mine_pairs was asked to extract the pivot language itself."""


def normalize_pivot(text: str) -> str:
    """Canonical join key for an English sentence.

    Unicode NFC, outer whitespace stripped, inner whitespace runs collapsed
    to a single space. Casing is preserved: case differences are real
    content differences in English.
    """
    return " ".join(unicodedata.normalize("NFC", text).split())


def _hash_key(key: str) -> int:
    # blake2b rather than hash(): stable across processes and platforms.
    return int.from_bytes(hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest(), "big")


class _Entry:
    __slots__ = ("key", "by_lang")

    def __init__(self, key: str):
        self.key = key
        self.by_lang: dict[str, set[str]] = {}


class PivotIndex:
    """Inverted index: normalized English sentence -> per-language translations."""

    __slots__ = ("pivot_lang", "_buckets", "_n_keys")

    def __init__(self, pivot_lang: str = "en"):
        self.pivot_lang = pivot_lang
        self._buckets: dict[int, list[_Entry]] = {}
        self._n_keys = 0

    def __len__(self) -> int:
        return self._n_keys

    def _entry(self, key: str, create: bool) -> _Entry | None:
        digest = _hash_key(key)
        bucket = self._buckets.get(digest)
        if bucket is not None:
            for entry in bucket:
                if entry.key == key:
                    return entry
        if not create:
            return None
        entry = _Entry(key)
        if bucket is None:
            self._buckets[digest] = [entry]
        else:
            bucket.append(entry)
        self._n_keys += 1
        return entry

    def add(self, english_text: str, lang: str, translation: str) -> None:
        """Record one observed (english, translation) pair; duplicates collapse."""
        entry = self._entry(normalize_pivot(english_text), create=True)
        entry.by_lang.setdefault(lang, set()).add(translation)

    def translations(self, key: str, lang: str) -> frozenset[str]:
        entry = self._entry(key, create=False)
        if entry is None:
            return frozenset()
        return frozenset(entry.by_lang.get(lang, ()))

    def keys(self) -> list[str]:
        """All pivot keys, sorted for deterministic traversal."""
        return sorted(entry.key for bucket in self._buckets.values() for entry in bucket)

    def entries(self) -> Iterable[_Entry]:
        for bucket in self._buckets.values():
            yield from bucket

    def languages(self) -> set[str]:
        langs: set[str] = set()
        for entry in self.entries():
            langs.update(entry.by_lang)
        return langs


def build_pivot_index(corpora: Iterable[BitextCorpus], pivot: str = "en") -> PivotIndex:
    """One-pass index construction over English-centric corpora.

    Each corpus must have the pivot on one side; the pivot side is detected
    so both en-X and X-en orientations load correctly.
    """
    index = PivotIndex(pivot)
    for corpus in corpora:
        if not corpus.has_language(pivot):
            raise NonPivotCorpus(corpus.src_lang, corpus.tgt_lang, pivot)
        other = corpus.other_side(pivot)
        pivot_is_src = corpus.src_lang == pivot
        for pair in corpus.pairs:
            if pivot_is_src:
                index.add(pair.src_text, other, pair.tgt_text)
            else:
                index.add(pair.tgt_text, other, pair.src_text)
    return index


@dataclass(frozen=True)
class MiningOutcome:
    """A mined corpus plus the bookkeeping the stats reporter wants."""

    corpus: BitextCorpus
    raw_pair_count: int
    capped_keys: tuple[str, ...] = ()


def mine_pairs_detailed(
    index: PivotIndex,
    l1: str,
    l2: str,
    xprod_cap: int | None = DEFAULT_XPROD_CAP,
) -> MiningOutcome:
    """Join two languages' translation sets through shared pivot keys.

    For every pivot key with translations in both languages, emit the full
    cross product of the two sets (capped per key), then drop identical-text
    pairs and global duplicates. Traversal is sorted by pivot key and
    lexicographic within each cross product, so output is deterministic.
    """
    if index.pivot_lang in (l1, l2):
        raise PivotLanguageRequested(f"cannot mine the pivot language {index.pivot_lang!r}")
    if l1 == l2:
        raise MiningError(f"cannot mine a language against itself: {l1!r}")

    candidates = []
    for entry in index.entries():
        side1 = entry.by_lang.get(l1)
        side2 = entry.by_lang.get(l2)
        if side1 and side2:
            candidates.append((entry.key, side1, side2))
    candidates.sort(key=lambda item: item[0])

    pairs: list[SentencePair] = []
    seen: set[tuple[str, str]] = set()
    raw = 0
    capped: list[str] = []
    for key, side1, side2 in candidates:
        xs = sorted(side1)
        ys = sorted(side2)
        budget = xprod_cap if xprod_cap is not None else len(xs) * len(ys)
        if len(xs) * len(ys) > budget:
            capped.append(key)
            logger.info("cross product capped at %d for pivot key %r", budget, key)
        emitted = 0
        for x in xs:
            if emitted >= budget:
                break
            for y in ys:
                if emitted >= budget:
                    break
                emitted += 1
                raw += 1
                if x == y:
                    # Identical text on both sides is almost always an
                    # untranslated sentence that leaked into the corpus.
                    continue
                if (x, y) in seen:
                    continue
                seen.add((x, y))
                pairs.append(SentencePair(x, y))
    return MiningOutcome(BitextCorpus(l1, l2, tuple(pairs)), raw, tuple(capped))


def mine_pairs(
    index: PivotIndex,
    l1: str,
    l2: str,
    xprod_cap: int | None = DEFAULT_XPROD_CAP,
) -> BitextCorpus:
    return mine_pairs_detailed(index, l1, l2, xprod_cap).corpus


def canonical_pair(l1: str, l2: str) -> tuple[str, str]:
    """Unordered pair key: languages in lexicographic order."""
    if l1 == l2:
        raise ValueError(f"not a pair: {l1!r}, {l2!r}")
    return (l1, l2) if l1 < l2 else (l2, l1)


def mine_all_detailed(
    index: PivotIndex,
    languages: Sequence[str],
    xprod_cap: int | None = DEFAULT_XPROD_CAP,
) -> dict[tuple[str, str], MiningOutcome]:
    """Mine every unordered pair among ``languages``."""
    langs = list(dict.fromkeys(languages))
    if index.pivot_lang in langs:
        raise PivotLanguageRequested(f"language list includes the pivot {index.pivot_lang!r}")
    if len(langs) < 2:
        raise MiningError("need at least two non-pivot languages to mine pairs")
    results: dict[tuple[str, str], MiningOutcome] = {}
    for a, b in combinations(sorted(langs), 2):
        results[(a, b)] = mine_pairs_detailed(index, a, b, xprod_cap)
    return results


def mine_all(
    index: PivotIndex,
    languages: Sequence[str],
    xprod_cap: int | None = DEFAULT_XPROD_CAP,
) -> dict[tuple[str, str], BitextCorpus]:
    return {
        pair: outcome.corpus
        for pair, outcome in mine_all_detailed(index, languages, xprod_cap).items()
    }


@dataclass(frozen=True)
class StatsMatrix:
    """Pair-count matrix: one English column plus a symmetric non-English block."""

    languages: tuple[str, ...]
    english_counts: dict[str, int] = field(compare=False)
    pair_counts: dict[tuple[str, str], int] = field(compare=False)
    raw_pair_counts: dict[tuple[str, str], int] | None = field(default=None, compare=False)

    def cell(self, row: str, col: str) -> int:
        if row == col:
            return 0
        if col == "en":
            return self.english_counts.get(row, 0)
        return self.pair_counts.get(canonical_pair(row, col), 0)

    def column_sum(self, col: str) -> int:
        return sum(self.cell(row, col) for row in self.languages)

    def column_sums(self) -> dict[str, int]:
        return {col: self.column_sum(col) for col in ("en", *self.languages)}

    def grand_total(self) -> int:
        """Sum of the non-English block: counts every mined pair twice."""
        return sum(self.column_sum(lang) for lang in self.languages)

    def unique_unordered_total(self) -> int:
        return self.grand_total() // 2

    def to_tsv(self) -> str:
        """Render the matrix in the layout of the dataset statistics table."""
        header = "\t".join(("", "en", *self.languages))
        rows = [header]
        for row in self.languages:
            cells = [str(self.cell(row, col)) for col in ("en", *self.languages)]
            rows.append("\t".join((row, *cells)))
        sums = self.column_sums()
        rows.append("\t".join(("SUM", *(str(sums[col]) for col in ("en", *self.languages)))))
        rows.append("\t".join(("TOTAL", "", str(self.grand_total()))))
        if self.raw_pair_counts is not None:
            rows.append("")
            rows.append("\t".join(("# raw pair", "count")))
            for pair in sorted(self.raw_pair_counts):
                rows.append("\t".join((f"{pair[0]}-{pair[1]}", str(self.raw_pair_counts[pair]))))
        return "\n".join(rows) + "\n"


def extraction_stats(
    english_corpora: Iterable[BitextCorpus],
    mined: Mapping[tuple[str, str], BitextCorpus] | Mapping[tuple[str, str], MiningOutcome],
    languages: Sequence[str] | None = None,
    pivot: str = "en",
) -> StatsMatrix:
    """Build the statistics matrix from loaded corpora.

    Mined deduplicated counts populate the symmetric block; raw pre-dedup
    counts are reported alongside when :class:`MiningOutcome` values are
    supplied (whether published pair counts were taken before or after
    deduplication varies, so both are kept visible).
    """
    english_counts: dict[str, int] = {}
    for corpus in english_corpora:
        if not corpus.has_language(pivot):
            raise NonPivotCorpus(corpus.src_lang, corpus.tgt_lang, pivot)
        other = corpus.other_side(pivot)
        english_counts[other] = english_counts.get(other, 0) + len(corpus)

    pair_counts: dict[tuple[str, str], int] = {}
    raw_counts: dict[tuple[str, str], int] = {}
    have_raw = False
    for pair, value in mined.items():
        key = canonical_pair(*pair)
        if isinstance(value, MiningOutcome):
            have_raw = True
            pair_counts[key] = len(value.corpus)
            raw_counts[key] = value.raw_pair_count
        else:
            pair_counts[key] = len(value)

    if languages is None:
        observed = set(english_counts)
        for a, b in pair_counts:
            observed.update((a, b))
        languages = sorted(observed)
    return StatsMatrix(
        tuple(languages),
        english_counts,
        pair_counts,
        raw_pair_counts=raw_counts if have_raw else None,
    )
