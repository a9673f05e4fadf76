"""Corpus-level BLEU, chrF2, and embedding-cosine similarity.

BLEU reproduces the sacrebleu recipe exactly: 13a (or no) tokenization,
n-grams up to 4, clipped counts, exponential smoothing of zero precisions
(each successive zero halves the credited precision), brevity penalty,
case-sensitive, single reference, 0-100 scale. chrF2 is the character
n-gram F-score with beta=2 over orders 1..6 with all whitespace removed,
averaging precision and recall over the orders attested in both sides.

Sentence embeddings are consumed from files produced externally (this
toolkit never loads an encoder); cosine similarity is averaged over
sentences and reported x100.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import TranslationDirection
from .errors import MultibridgeError
from .tokenizers import tokenize_13a
from .version import __version__

BLEU_ORDER = 4
CHRF_ORDER = 6
CHRF_BETA = 2

#: Stand-in for log(0): drives the score to zero without raising.
_LOG_ZERO = -9999999999

METRIC_RANGES = {
    "bleu": (0.0, 100.0),
    "chrf2": (0.0, 100.0),
    "cosine": (-100.0, 100.0),
}

METRIC_ORDER = ("bleu", "chrf2", "cosine", "tset_sim")


class MetricError(MultibridgeError):
    """Base class for evaluation errors."""


class LengthMismatch(MetricError):
    """Hypothesis and reference lists have different lengths."""


class EmptyCorpus(MetricError):
    """No segments to score."""


class DimensionMismatch(MetricError):
    """Embedding tables disagree on dimension or sentence ids."""


class ZeroNormVector(MetricError):
    """An embedding has zero norm, so cosine similarity is undefined."""


@dataclass(frozen=True)
class MetricScore:
    metric: str
    value: float
    signature: str

    def __post_init__(self) -> None:
        lo, hi = METRIC_RANGES.get(self.metric, (-math.inf, math.inf))
        if not (lo <= self.value <= hi):
            raise MetricError(f"{self.metric} value {self.value} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class EvalReport:
    """Per-direction scores on one test set."""

    direction: TranslationDirection
    scores: tuple[MetricScore, ...]
    n_sentences: int

    def __post_init__(self) -> None:
        metrics = [s.metric for s in self.scores]
        if len(set(metrics)) != len(metrics):
            raise MetricError("one score per metric per direction")

    def score(self, metric: str) -> MetricScore | None:
        for s in self.scores:
            if s.metric == metric:
                return s
        return None


def _check_streams(hypotheses: Sequence[str], references: Sequence[str]) -> None:
    if len(hypotheses) != len(references):
        raise LengthMismatch(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise EmptyCorpus("nothing to score")


def _ngram_counts(tokens: Sequence[str], max_order: int) -> Counter:
    counts: Counter = Counter()
    for n in range(1, max_order + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i : i + n])] += 1
    return counts


def _log_or_floor(value: float) -> float:
    return math.log(value) if value != 0.0 else _LOG_ZERO


def bleu(hypotheses: Sequence[str], references: Sequence[str], tokenization: str = "13a") -> MetricScore:
    """Corpus-level BLEU-4 with exponential smoothing, 0-100 scale.

    ``tokenization`` is ``"13a"`` for raw text or ``"none"`` for input that
    is already tokenized (space-separated), the protocol used when scoring
    Indic output after external tokenization.
    """
    if tokenization not in ("13a", "none"):
        raise MetricError(f"unknown tokenization {tokenization!r}")
    _check_streams(hypotheses, references)

    correct = [0] * BLEU_ORDER
    total = [0] * BLEU_ORDER
    sys_len = 0
    ref_len = 0
    for hyp_line, ref_line in zip(hypotheses, references):
        if tokenization == "13a":
            hyp_line = tokenize_13a(hyp_line.rstrip())
            ref_line = tokenize_13a(ref_line.rstrip())
        else:
            hyp_line = hyp_line.rstrip()
            ref_line = ref_line.rstrip()
        hyp_tokens = hyp_line.split()
        ref_tokens = ref_line.split()
        sys_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        ref_ngrams = _ngram_counts(ref_tokens, BLEU_ORDER)
        for ngram, count in _ngram_counts(hyp_tokens, BLEU_ORDER).items():
            n = len(ngram)
            total[n - 1] += count
            correct[n - 1] += min(count, ref_ngrams.get(ngram, 0))

    precisions = [0.0] * BLEU_ORDER
    smooth = 1.0
    for n in range(1, BLEU_ORDER + 1):
        if total[n - 1] == 0:
            break
        if correct[n - 1] == 0:
            smooth *= 2
            precisions[n - 1] = 100.0 / (smooth * total[n - 1])
        else:
            precisions[n - 1] = 100.0 * correct[n - 1] / total[n - 1]

    if sys_len == 0:
        bp = 0.0
    elif sys_len < ref_len:
        bp = math.exp(1 - ref_len / sys_len)
    else:
        bp = 1.0

    if bp == 1.0 and all(p == 100.0 for p in precisions):
        score = 100.0  # exact by construction for perfect matches
    else:
        score = bp * math.exp(sum(_log_or_floor(p) for p in precisions) / BLEU_ORDER)
        score = min(score, 100.0)
    signature = f"BLEU+case.mixed+numrefs.1+smooth.exp+tok.{tokenization}+version.{__version__}"
    return MetricScore("bleu", score, signature)


def _char_ngrams(text: str, n: int) -> Counter:
    return Counter(text[i : i + n] for i in range(len(text) - n + 1))


def chrf2(hypotheses: Sequence[str], references: Sequence[str]) -> MetricScore:
    """chrF with beta=2: character n-grams 1..6, whitespace removed, 0-100."""
    _check_streams(hypotheses, references)
    stats = [0] * (CHRF_ORDER * 3)
    for hyp, ref in zip(hypotheses, references):
        hyp = "".join(hyp.split())
        ref = "".join(ref.split())
        for i in range(CHRF_ORDER):
            hyp_ngrams = _char_ngrams(hyp, i + 1)
            ref_ngrams = _char_ngrams(ref, i + 1)
            stats[3 * i] += sum(hyp_ngrams.values())
            stats[3 * i + 1] += sum(ref_ngrams.values())
            stats[3 * i + 2] += sum((hyp_ngrams & ref_ngrams).values())

    avg_precision = 0.0
    avg_recall = 0.0
    effective_order = 0
    for i in range(CHRF_ORDER):
        n_hyp, n_ref, n_match = stats[3 * i : 3 * i + 3]
        if n_hyp > 0 and n_ref > 0:
            avg_precision += n_match / n_hyp
            avg_recall += n_match / n_ref
            effective_order += 1
    if effective_order == 0 or avg_precision + avg_recall == 0.0:
        score = 0.0
    else:
        avg_precision /= effective_order
        avg_recall /= effective_order
        beta_sq = CHRF_BETA**2
        denominator = beta_sq * avg_precision + avg_recall
        score = 0.0 if denominator == 0 else 100.0 * (1 + beta_sq) * avg_precision * avg_recall / denominator
    signature = f"chrF2+numchars.{CHRF_ORDER}+space.false+version.{__version__}"
    return MetricScore("chrf2", score, signature)


@dataclass(frozen=True)
class EmbeddingTable:
    """Fixed-dimension sentence embeddings keyed by integer sentence id."""

    ids: tuple[int, ...]
    matrix: np.ndarray  # (n, dim), row i belongs to ids[i]

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.ids):
            raise MetricError("embedding matrix shape does not match ids")
        if len(set(self.ids)) != len(self.ids):
            raise MetricError("duplicate sentence ids in embedding table")
        if not np.all(np.isfinite(self.matrix)):
            raise MetricError("embedding table contains non-finite values")

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def vector(self, sentence_id: int) -> np.ndarray:
        return self.matrix[self.ids.index(sentence_id)]


def load_embeddings(path) -> EmbeddingTable:
    """Read a TSV embedding file: header ``d n``, then ``id v1 ... vd`` rows."""
    with open(path, encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) != 2:
            raise MetricError(f"{path}: expected 'd n' header")
        dim, n = int(header[0]), int(header[1])
        ids = []
        rows = []
        for line_no, line in enumerate(f, start=2):
            parts = line.split()
            if len(parts) != dim + 1:
                raise MetricError(f"{path}:{line_no}: expected id plus {dim} floats")
            ids.append(int(parts[0]))
            rows.append([float(x) for x in parts[1:]])
    if len(ids) != n:
        raise MetricError(f"{path}: header says {n} rows, found {len(ids)}")
    matrix = np.asarray(rows, dtype=np.float64).reshape(len(ids), dim)
    return EmbeddingTable(tuple(ids), matrix)


def save_embeddings(table: EmbeddingTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{table.dim} {len(table.ids)}\n")
        for sentence_id, row in zip(table.ids, table.matrix):
            f.write("\t".join([str(sentence_id)] + [repr(float(x)) for x in row]) + "\n")


def cosine_batch(a: EmbeddingTable, b: EmbeddingTable) -> MetricScore:
    """Mean per-sentence cosine similarity between two tables, x100."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension {a.dim} vs {b.dim}")
    if set(a.ids) != set(b.ids):
        raise DimensionMismatch("embedding tables cover different sentence ids")
    if not a.ids:
        raise EmptyCorpus("empty embedding tables")
    order = sorted(a.ids)
    index_a = {sid: i for i, sid in enumerate(a.ids)}
    index_b = {sid: i for i, sid in enumerate(b.ids)}
    mat_a = a.matrix[[index_a[s] for s in order]]
    mat_b = b.matrix[[index_b[s] for s in order]]
    norms_a = np.linalg.norm(mat_a, axis=1)
    norms_b = np.linalg.norm(mat_b, axis=1)
    if np.any(norms_a == 0) or np.any(norms_b == 0):
        raise ZeroNormVector("zero-norm embedding encountered")
    cosines = np.sum(mat_a * mat_b, axis=1) / (norms_a * norms_b)
    value = 100.0 * float(np.mean(cosines))
    value = max(-100.0, min(100.0, value))  # guard rounding at the boundary
    signature = f"cosine+dim.{a.dim}+scale.100+version.{__version__}"
    return MetricScore("cosine", value, signature)


@dataclass(frozen=True)
class ComparisonTable:
    """Per-source aggregate of metric scores, in the n-way layout."""

    rows: tuple[tuple[str, dict[str, float | None]], ...]
    avg_row: dict[str, float | None]
    pivot_row: dict[str, float | None] | None
    metrics: tuple[str, ...]
    average: str
    missing: tuple[TranslationDirection, ...] = ()

    def to_tsv(self) -> str:
        lines = [f"# average: {self.average}", "\t".join(("src", *self.metrics))]

        def fmt(values: dict[str, float | None]) -> list[str]:
            return ["" if values.get(m) is None else f"{values[m]:.1f}" for m in self.metrics]

        for label, values in self.rows:
            lines.append("\t".join((label, *fmt(values))))
        lines.append("\t".join(("AVG", *fmt(self.avg_row))))
        if self.pivot_row is not None:
            lines.append("\t".join(("en", *fmt(self.pivot_row))))
        if self.missing:
            lines.append("# missing: " + " ".join(d.label() for d in self.missing))
        return "\n".join(lines) + "\n"


def _aggregate(values: list[tuple[float, int]], average: str) -> float | None:
    if not values:
        return None
    if average == "micro":
        weight = sum(n for _, n in values)
        if weight == 0:
            return None
        return sum(v * n for v, n in values) / weight
    return sum(v for v, _ in values) / len(values)


def nway_compare(
    reports: Iterable[EvalReport],
    languages: Sequence[str],
    pivot: str = "en",
    average: str = "macro",
    testset_similarity: Mapping[TranslationDirection, float] | None = None,
) -> ComparisonTable:
    """Aggregate per-direction reports into one row per source language.

    Each row averages a source's outgoing directions into non-English
    targets; English gets its own row outside the AVG. ``average`` is
    ``macro`` (unweighted over directions) or ``micro`` (weighted by
    sentence counts). Expected-but-absent directions are listed in
    ``missing`` rather than failing the comparison.
    """
    if average not in ("macro", "micro"):
        raise MetricError(f"unknown average {average!r}")
    non_english = [code for code in languages if code != pivot]
    by_direction = {r.direction: r for r in reports}
    tset = dict(testset_similarity or {})

    metric_names = [
        m for m in METRIC_ORDER
        if any(r.score(m) for r in by_direction.values()) or (m == "tset_sim" and tset)
    ]

    missing = []
    for src in (*non_english, pivot):
        for tgt in non_english:
            if src != tgt and TranslationDirection(src, tgt) not in by_direction:
                missing.append(TranslationDirection(src, tgt))

    def row_for(src: str) -> dict[str, float | None]:
        row: dict[str, float | None] = {}
        outgoing = [
            d for d in sorted(by_direction) if d.src == src and d.tgt != pivot and d.tgt in non_english
        ]
        for metric in metric_names:
            if metric == "tset_sim":
                values = [
                    (tset[d], by_direction[d].n_sentences if d in by_direction else 1)
                    for d in sorted(tset)
                    if d.src == src and d.tgt != pivot and d.tgt in non_english
                ]
            else:
                values = []
                for d in outgoing:
                    score = by_direction[d].score(metric)
                    if score is not None:
                        values.append((score.value, by_direction[d].n_sentences))
            row[metric] = _aggregate(values, average)
        return row

    rows = tuple((src, row_for(src)) for src in non_english)

    avg_row: dict[str, float | None] = {}
    for metric in metric_names:
        if average == "micro":
            pooled = []
            for src in non_english:
                if metric == "tset_sim":
                    pooled.extend(
                        (tset[d], by_direction[d].n_sentences if d in by_direction else 1)
                        for d in sorted(tset)
                        if d.src == src and d.tgt != pivot and d.tgt in non_english
                    )
                else:
                    for d in sorted(by_direction):
                        if d.src == src and d.tgt != pivot and d.tgt in non_english:
                            score = by_direction[d].score(metric)
                            if score is not None:
                                pooled.append((score.value, by_direction[d].n_sentences))
            avg_row[metric] = _aggregate(pooled, "micro")
        else:
            row_values = [row[metric] for _, row in rows if row[metric] is not None]
            avg_row[metric] = sum(row_values) / len(row_values) if row_values else None

    pivot_row = row_for(pivot)
    if all(v is None for v in pivot_row.values()):
        pivot_row = None

    return ComparisonTable(rows, avg_row, pivot_row, tuple(metric_names), average, tuple(missing))
