"""Training-set construction under the three sampling regimes.

English-centric data is always used in full; the regimes differ only in
how much mined non-English data joins it:

* sample-pairs: all data, but only for a selected subset of language
  pairs that together span every language;
* sample-fraction: a capped number of pairs from every language pair;
* train-all: everything.

Every stochastic choice flows through the pinned generator in
:mod:`multibridge.rng`, with one labeled child stream per language pair,
so a fixed seed reproduces the training set byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import (
    BitextCorpus,
    ManifestEntry,
    TrainingManifest,
    TranslationDirection,
    save_manifest,
    write_bitext,
)
from .errors import MultibridgeError
from .mining import canonical_pair
from .rng import Xoshiro256StarStar, derive_seed

DEFAULT_PER_PAIR_TARGET = 100_000


class SamplingError(MultibridgeError):
    """Base class for sampling errors."""


class InfeasibleSpan(SamplingError):
    """Too few pairs requested to cover every language."""


class MissingCorpus(SamplingError):
    """A sampling plan references a language pair that was never mined."""

    def __init__(self, pair: tuple[str, str]):
        super().__init__(f"no mined corpus for pair {pair[0]}-{pair[1]}")
        self.pair = pair


@dataclass(frozen=True)
class SamplePairs:
    """Use all data, but only for these unordered non-English pairs."""

    pairs: tuple[tuple[str, str], ...]
    name = "sample-pairs"

    def __post_init__(self) -> None:
        canon = tuple(canonical_pair(*p) for p in self.pairs)
        if len(set(canon)) != len(canon):
            raise SamplingError("duplicate pairs in sample-pairs list")
        object.__setattr__(self, "pairs", canon)


@dataclass(frozen=True)
class SampleFraction:
    """Cap every pair's corpus at this many sentence pairs."""

    per_pair_target: int = DEFAULT_PER_PAIR_TARGET
    name = "sample-fraction"

    def __post_init__(self) -> None:
        if self.per_pair_target <= 0:
            raise SamplingError("per-pair target must be positive")


@dataclass(frozen=True)
class TrainAll:
    """Use all mined data from all pairs."""

    name = "train-all"


Strategy = SamplePairs | SampleFraction | TrainAll


@dataclass(frozen=True)
class SamplingPlan:
    strategy: Strategy
    seed: int
    always_include_english_centric: bool = True

    def __post_init__(self) -> None:
        if not self.always_include_english_centric:
            raise SamplingError("English-centric data is always included; the flag is fixed true")


def spans_all_languages(pairs: Iterable[tuple[str, str]], languages: Iterable[str]) -> bool:
    """Independent spanning check: every language appears in some pair."""
    covered: set[str] = set()
    for a, b in pairs:
        covered.update((a, b))
    return set(languages) <= covered


def select_spanning_pairs(languages: Sequence[str], n_pairs: int, seed: int) -> list[tuple[str, str]]:
    """Pick ``n_pairs`` distinct unordered pairs covering every language.

    A random permutation is paired up greedily, which guarantees coverage
    with ceil(L/2) pairs; the remaining quota is filled uniformly from the
    unused pairs. Deterministic for a fixed seed.
    """
    langs = sorted(set(languages))
    if "en" in langs:
        raise SamplingError("spanning pairs are selected among non-English languages only")
    if len(langs) < 2:
        raise SamplingError("need at least two languages to form pairs")
    min_pairs = math.ceil(len(langs) / 2)
    if n_pairs < min_pairs:
        raise InfeasibleSpan(
            f"{n_pairs} pairs cover at most {2 * n_pairs} languages; {len(langs)} languages need >= {min_pairs}"
        )
    max_pairs = len(langs) * (len(langs) - 1) // 2
    if n_pairs > max_pairs:
        raise SamplingError(f"only {max_pairs} distinct pairs exist for {len(langs)} languages")

    rng = Xoshiro256StarStar(seed)
    perm = langs[:]
    rng.shuffle(perm)
    cover = [canonical_pair(perm[i], perm[i + 1]) for i in range(0, len(perm) - 1, 2)]
    if len(perm) % 2 == 1:
        leftover = perm[-1]
        others = [lang for lang in langs if lang != leftover]
        partner = others[rng.randbelow(len(others))]
        cover.append(canonical_pair(leftover, partner))

    chosen = set(cover)
    pool = [p for p in combinations(langs, 2) if p not in chosen]
    for idx in rng.sample_indices(len(pool), n_pairs - len(cover)):
        chosen.add(pool[idx])
    result = sorted(chosen)
    assert spans_all_languages(result, langs)
    return result


def sample_fraction(corpus: BitextCorpus, target_n: int, seed: int) -> BitextCorpus:
    """Uniform sample without replacement of at most ``target_n`` pairs.

    Corpora at or under the target are returned unchanged. Sampling keeps
    the original order (the result is a subsequence of the input).
    """
    if target_n <= 0:
        raise SamplingError("target must be positive")
    if len(corpus) <= target_n:
        return corpus
    rng = Xoshiro256StarStar(seed)
    keep = rng.sample_indices(len(corpus), target_n)
    return BitextCorpus(corpus.src_lang, corpus.tgt_lang, tuple(corpus.pairs[i] for i in keep))


def _merge_english_corpora(english_corpora: Iterable[BitextCorpus], pivot: str) -> dict[str, BitextCorpus]:
    """Orient every English-centric corpus as pivot->X and merge duplicates."""
    merged: dict[str, BitextCorpus] = {}
    for corpus in english_corpora:
        if not corpus.has_language(pivot):
            raise SamplingError(f"corpus {corpus.src_lang}-{corpus.tgt_lang} has no {pivot} side")
        oriented = corpus if corpus.src_lang == pivot else corpus.swapped()
        other = oriented.tgt_lang
        if other in merged:
            merged[other] = BitextCorpus(pivot, other, merged[other].pairs + oriented.pairs)
        else:
            merged[other] = oriented
    return merged


def build_training_set(
    english_corpora: Iterable[BitextCorpus],
    mined_corpora: Mapping[tuple[str, str], BitextCorpus],
    plan: SamplingPlan,
    pivot: str = "en",
) -> list[tuple[TranslationDirection, BitextCorpus, str]]:
    """Select the directional corpora a plan admits, without touching disk.

    Every selected unordered pair is emitted in both directions, built from
    the same (possibly sampled) subset, so the two directions mirror each
    other exactly.
    """
    mined: dict[tuple[str, str], BitextCorpus] = {}
    for raw_key, corpus in mined_corpora.items():
        key = canonical_pair(*raw_key)
        if {corpus.src_lang, corpus.tgt_lang} != set(key):
            raise SamplingError(
                f"corpus languages {corpus.src_lang}-{corpus.tgt_lang} do not match key {key}"
            )
        mined[key] = corpus if corpus.src_lang == key[0] else corpus.swapped()

    if isinstance(plan.strategy, SamplePairs):
        for pair in plan.strategy.pairs:
            if pivot in pair:
                raise SamplingError(f"sample-pairs list may not include the pivot: {pair}")
            if pair not in mined:
                raise MissingCorpus(pair)
        selected = {pair: mined[pair] for pair in plan.strategy.pairs}
    elif isinstance(plan.strategy, SampleFraction):
        target = plan.strategy.per_pair_target
        selected = {
            pair: sample_fraction(corpus, target, derive_seed(plan.seed, f"frac:{pair[0]}-{pair[1]}"))
            for pair, corpus in mined.items()
        }
    else:
        selected = dict(mined)

    entries: list[tuple[TranslationDirection, BitextCorpus, str]] = []
    english = _merge_english_corpora(english_corpora, pivot)
    for other in sorted(english):
        oriented = english[other]
        entries.append((TranslationDirection(pivot, other), oriented, "english-centric"))
        entries.append((TranslationDirection(other, pivot), oriented.swapped(), "english-centric"))

    for pair in sorted(selected):
        corpus = selected[pair]
        label = plan.strategy.name
        entries.append((TranslationDirection(*pair), corpus, label))
        entries.append((TranslationDirection(pair[1], pair[0]), corpus.swapped(), label))

    entries.sort(key=lambda item: (item[2] != "english-centric", item[0]))
    return entries


def assemble_training_set(
    english_corpora: Iterable[BitextCorpus],
    mined_corpora: Mapping[tuple[str, str], BitextCorpus],
    plan: SamplingPlan,
    out_dir: str | Path,
    pivot: str = "en",
) -> TrainingManifest:
    """Materialize a training set: corpus files plus ``manifest.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest_entries = []
    for direction, corpus, label in build_training_set(english_corpora, mined_corpora, plan, pivot):
        prefix = direction.label()
        write_bitext(corpus, out / f"{prefix}.src", out / f"{prefix}.tgt")
        manifest_entries.append(ManifestEntry(direction, prefix, len(corpus), label))
    manifest = TrainingManifest(tuple(manifest_entries), plan.seed)
    save_manifest(manifest, out / "manifest.json")
    return manifest


def sample_validation_corpora(
    dev_corpora: Mapping[TranslationDirection, BitextCorpus],
    fraction: float,
    seed: int,
) -> dict[TranslationDirection, BitextCorpus]:
    """Per-direction uniform subsample of round(fraction * n) pairs, min 1."""
    if not (0.0 < fraction <= 1.0):
        raise SamplingError(f"fraction must be in (0, 1]: {fraction}")
    sampled: dict[TranslationDirection, BitextCorpus] = {}
    for direction in sorted(dev_corpora):
        corpus = dev_corpora[direction]
        # floor(x + 0.5): plain half-up rounding, pinned for portability.
        k = max(1, math.floor(len(corpus) * fraction + 0.5))
        sampled[direction] = sample_fraction(
            corpus, k, derive_seed(seed, f"val:{direction.label()}")
        )
    return sampled


def sample_validation(
    dev_corpora: Mapping[TranslationDirection, BitextCorpus],
    fraction: float,
    seed: int,
    out_dir: str | Path,
) -> TrainingManifest:
    """Write the validation subsample and its manifest; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for direction, corpus in sample_validation_corpora(dev_corpora, fraction, seed).items():
        prefix = direction.label()
        write_bitext(corpus, out / f"{prefix}.src", out / f"{prefix}.tgt")
        entries.append(ManifestEntry(direction, prefix, len(corpus), "validation"))
    manifest = TrainingManifest(tuple(entries), seed)
    save_manifest(manifest, out / "manifest.json")
    return manifest
