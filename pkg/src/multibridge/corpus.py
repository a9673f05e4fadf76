"""Sentence pairs, bitext corpora, and training manifests.

Bitext lives on disk as a pair of line-aligned plain-text files (one
sentence per line, UTF-8, LF endings), the format used by shared-task
data, or as a two-column TSV for mined output. Whitespace-only lines are
hard errors: silently dropping them would desynchronize the alignment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import MultibridgeError


class CorpusError(MultibridgeError):
    """Base class for corpus data errors."""


class LineCountMismatch(CorpusError):
    """The two sides of a bitext have different line counts."""

    def __init__(self, n_src: int, n_tgt: int):
        super().__init__(f"line count mismatch: {n_src} source lines vs {n_tgt} target lines")
        self.n_src = n_src
        self.n_tgt = n_tgt


class InvalidUtf8(CorpusError):
    """A line could not be decoded as UTF-8."""

    def __init__(self, path: str | Path, line_no: int):
        super().__init__(f"{path}:{line_no}: invalid UTF-8")
        self.line_no = line_no


class EmptyLine(CorpusError):
    """A line is empty or whitespace-only."""

    def __init__(self, path: str | Path, line_no: int):
        super().__init__(f"{path}:{line_no}: empty or whitespace-only line")
        self.line_no = line_no


class IoFailure(CorpusError):
    """Reading or writing a corpus file failed at the OS level."""


class ManifestError(CorpusError):
    """A training manifest violates its invariants."""


@dataclass(frozen=True, slots=True)
class SentencePair:
    """One aligned sentence pair. Texts are immutable and newline-free."""

    src_text: str
    tgt_text: str

    def __post_init__(self) -> None:
        for side, text in (("src", self.src_text), ("tgt", self.tgt_text)):
            if not text.strip():
                raise ValueError(f"{side} text is empty after trimming")
            if "\n" in text or "\r" in text:
                raise ValueError(f"{side} text contains a newline")

    def swapped(self) -> "SentencePair":
        return SentencePair(self.tgt_text, self.src_text)


@dataclass(frozen=True)
class BitextCorpus:
    """An ordered sequence of sentence pairs between two fixed languages."""

    src_lang: str
    tgt_lang: str
    pairs: tuple[SentencePair, ...]

    def __post_init__(self) -> None:
        if self.src_lang == self.tgt_lang:
            raise ValueError(f"source and target language are both {self.src_lang!r}")
        object.__setattr__(self, "pairs", tuple(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[SentencePair]:
        return iter(self.pairs)

    def swapped(self) -> "BitextCorpus":
        return BitextCorpus(self.tgt_lang, self.src_lang, tuple(p.swapped() for p in self.pairs))

    def has_language(self, code: str) -> bool:
        return code in (self.src_lang, self.tgt_lang)

    def other_side(self, code: str) -> str:
        """The language opposite ``code``; raises if ``code`` is not a side."""
        if code == self.src_lang:
            return self.tgt_lang
        if code == self.tgt_lang:
            return self.src_lang
        raise ValueError(f"{code!r} is not a side of this {self.src_lang}-{self.tgt_lang} corpus")


@dataclass(frozen=True, order=True)
class TranslationDirection:
    """A directed language pair: (a, b) is distinct from (b, a)."""

    src: str
    tgt: str

    def __post_init__(self) -> None:
        if self.src == self.tgt:
            raise ValueError(f"direction source equals target: {self.src!r}")

    def reversed(self) -> "TranslationDirection":
        return TranslationDirection(self.tgt, self.src)

    def label(self) -> str:
        return f"{self.src}-{self.tgt}"


def _read_lines(path: str | Path) -> list[str]:
    """Read a one-sentence-per-line file, validating UTF-8 and non-emptiness."""
    lines: list[str] = []
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if not raw:
        return lines
    for line_no, chunk in enumerate(raw.split(b"\n"), start=1):
        try:
            text = chunk.decode("utf-8")
        except UnicodeDecodeError:
            raise InvalidUtf8(path, line_no) from None
        lines.append(text)
    # A trailing LF produces one final empty chunk; drop it. A genuinely
    # empty last line is then caught by the emptiness check below.
    if lines and lines[-1] == "":
        lines.pop()
    for line_no, text in enumerate(lines, start=1):
        if not text.strip():
            raise EmptyLine(path, line_no)
    return lines


def load_bitext(src_path: str | Path, tgt_path: str | Path, src_lang: str, tgt_lang: str) -> BitextCorpus:
    """Load a line-aligned bitext from two plain-text files.

    Unequal line counts are an error, never silently truncated: a missing
    line anywhere would shift the alignment of everything after it.
    """
    src_lines = _read_lines(src_path)
    tgt_lines = _read_lines(tgt_path)
    if len(src_lines) != len(tgt_lines):
        raise LineCountMismatch(len(src_lines), len(tgt_lines))
    pairs = tuple(SentencePair(s, t) for s, t in zip(src_lines, tgt_lines))
    return BitextCorpus(src_lang, tgt_lang, pairs)


def write_bitext(corpus: BitextCorpus, src_path: str | Path, tgt_path: str | Path) -> None:
    """Write a corpus as two line-aligned files; inverse of :func:`load_bitext`."""
    try:
        with open(src_path, "w", encoding="utf-8", newline="\n") as f_src:
            for pair in corpus.pairs:
                f_src.write(pair.src_text + "\n")
        with open(tgt_path, "w", encoding="utf-8", newline="\n") as f_tgt:
            for pair in corpus.pairs:
                f_tgt.write(pair.tgt_text + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write bitext: {exc}") from exc


class TsvFormatError(CorpusError):
    """A TSV bitext line does not have exactly two columns."""

    def __init__(self, path: str | Path, line_no: int):
        super().__init__(f"{path}:{line_no}: expected exactly 2 tab-separated columns")
        self.line_no = line_no


def load_bitext_tsv(path: str | Path, src_lang: str, tgt_lang: str) -> BitextCorpus:
    """Load a two-column TSV bitext (src TAB tgt per line, no header)."""
    pairs = []
    for line_no, text in enumerate(_read_lines(path), start=1):
        cols = text.split("\t")
        if len(cols) != 2:
            raise TsvFormatError(path, line_no)
        if not cols[0].strip() or not cols[1].strip():
            raise EmptyLine(path, line_no)
        pairs.append(SentencePair(cols[0], cols[1]))
    return BitextCorpus(src_lang, tgt_lang, tuple(pairs))


def write_bitext_tsv(corpus: BitextCorpus, path: str | Path) -> None:
    """Write a corpus as a two-column TSV; texts must not contain tabs."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for pair in corpus.pairs:
                if "\t" in pair.src_text or "\t" in pair.tgt_text:
                    raise TsvFormatError(path, 0)
                f.write(f"{pair.src_text}\t{pair.tgt_text}\n")
    except OSError as exc:
        raise IoFailure(f"cannot write TSV bitext: {exc}") from exc


@dataclass(frozen=True)
class ManifestEntry:
    direction: TranslationDirection
    path: str
    count: int
    strategy: str

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("entry count must be non-negative")


@dataclass(frozen=True)
class TrainingManifest:
    """Declarative description of which corpora enter a training set."""

    entries: tuple[ManifestEntry, ...]
    seed: int
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        directions = [e.direction for e in self.entries]
        if len(set(directions)) != len(directions):
            raise ManifestError("duplicate directions in manifest")

    def total_pairs(self) -> int:
        return sum(e.count for e in self.entries)

    def by_direction(self) -> dict[TranslationDirection, ManifestEntry]:
        return {e.direction: e for e in self.entries}


def save_manifest(manifest: TrainingManifest, path: str | Path) -> None:
    doc = {
        "entries": [
            {
                "src": e.direction.src,
                "tgt": e.direction.tgt,
                "path": e.path,
                "count": e.count,
                "strategy": e.strategy,
            }
            for e in manifest.entries
        ],
        "seed": manifest.seed,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(doc, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")


def load_manifest(path: str | Path) -> TrainingManifest:
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    entries = tuple(
        ManifestEntry(
            TranslationDirection(item["src"], item["tgt"]),
            item["path"],
            int(item["count"]),
            item["strategy"],
        )
        for item in doc["entries"]
    )
    return TrainingManifest(entries, int(doc["seed"]))


def verify_manifest(manifest: TrainingManifest, base_dir: str | Path) -> None:
    """Check that every entry's count matches the on-disk line count.

    Entry paths are prefixes relative to ``base_dir``; the corpus sides
    live at ``<path>.src`` and ``<path>.tgt``.
    """
    base = Path(base_dir)
    for entry in manifest.entries:
        for suffix in (".src", ".tgt"):
            file_path = base / (entry.path + suffix)
            n = len(_read_lines(file_path))
            if n != entry.count:
                raise ManifestError(
                    f"{file_path}: {n} lines on disk but manifest says {entry.count}"
                )


def corpus_line_count(path: str | Path) -> int:
    """Number of sentences in a one-per-line corpus file."""
    return len(_read_lines(path))


def iter_directions(corpora: Iterable[BitextCorpus]) -> Iterator[TranslationDirection]:
    for corpus in corpora:
        yield TranslationDirection(corpus.src_lang, corpus.tgt_lang)
