import filecmp

import pytest

from multibridge.corpus import BitextCorpus, SentencePair, TranslationDirection, load_manifest, verify_manifest
from multibridge.mining import build_pivot_index, mine_all
from multibridge.sampling import (
    InfeasibleSpan,
    MissingCorpus,
    SampleFraction,
    SamplePairs,
    SamplingError,
    SamplingPlan,
    TrainAll,
    assemble_training_set,
    build_training_set,
    sample_fraction,
    sample_validation,
    sample_validation_corpora,
    select_spanning_pairs,
    spans_all_languages,
)

from synth import english_centric_fixture

INDIC_10 = ["bn", "gu", "hi", "kn", "ml", "mr", "or", "pa", "ta", "te"]

# The published 11-pair spanning selection over the ten Indic languages.
PUBLISHED_PAIRS = [
    ("bn", "hi"), ("bn", "mr"), ("bn", "or"), ("gu", "pa"), ("gu", "te"),
    ("hi", "ta"), ("kn", "pa"), ("kn", "ta"), ("ml", "or"), ("ml", "te"),
    ("mr", "te"),
]


def _tiny_corpus(src, tgt, n, prefix=""):
    pairs = tuple(SentencePair(f"{prefix}{src}{i}", f"{prefix}{tgt}{i}") for i in range(n))
    return BitextCorpus(src, tgt, pairs)


class TestSpanning:
    def test_published_pair_list_spans(self):
        assert spans_all_languages(PUBLISHED_PAIRS, INDIC_10)

    def test_two_languages_single_pair(self):
        assert select_spanning_pairs(["bn", "hi"], 1, seed=0) == [("bn", "hi")]

    def test_pigeonhole_infeasible(self):
        with pytest.raises(InfeasibleSpan):
            select_spanning_pairs(INDIC_10, 4, seed=0)

    def test_too_many_pairs_rejected(self):
        with pytest.raises(SamplingError):
            select_spanning_pairs(["bn", "hi"], 2, seed=0)

    def test_english_rejected(self):
        with pytest.raises(SamplingError):
            select_spanning_pairs(["en", "hi", "bn"], 2, seed=0)

    def test_selection_spans_and_is_deterministic(self):
        first = select_spanning_pairs(INDIC_10, 11, seed=42)
        second = select_spanning_pairs(INDIC_10, 11, seed=42)
        assert first == second
        assert len(first) == 11
        assert len(set(first)) == 11
        assert spans_all_languages(first, INDIC_10)
        assert all(a < b for a, b in first)
        different = select_spanning_pairs(INDIC_10, 11, seed=43)
        assert different != first  # overwhelmingly likely

    @pytest.mark.parametrize("seed", range(25))
    def test_odd_language_count_spans(self, seed):
        langs = ["bn", "gu", "hi", "kn", "ml"]
        pairs = select_spanning_pairs(langs, 3, seed=seed)
        assert spans_all_languages(pairs, langs)
        assert len(set(pairs)) == 3


class TestSampleFraction:
    def test_small_corpus_unchanged(self):
        corpus = _tiny_corpus("bn", "hi", 50)
        assert sample_fraction(corpus, 100, seed=1) is corpus

    def test_exact_target_subsequence(self):
        corpus = _tiny_corpus("bn", "hi", 1000)
        sampled = sample_fraction(corpus, 100, seed=1)
        assert len(sampled) == 100
        positions = [int(p.src_text[2:]) for p in sampled.pairs]
        assert positions == sorted(positions)  # order preserved
        assert set(sampled.pairs) <= set(corpus.pairs)

    def test_seed_determinism_and_sensitivity(self):
        corpus = _tiny_corpus("bn", "hi", 1000)
        base = sample_fraction(corpus, 100, seed=7).pairs
        assert sample_fraction(corpus, 100, seed=7).pairs == base
        distinct = sum(
            1 for s in range(20) if sample_fraction(corpus, 100, seed=s).pairs != base
        )
        assert distinct >= 19  # different seeds virtually always differ

    def test_target_must_be_positive(self):
        with pytest.raises(SamplingError):
            sample_fraction(_tiny_corpus("bn", "hi", 5), 0, seed=1)


def _mined_fixture(seed=30, langs=("bn", "hi", "ta")):
    corpora = english_centric_fixture(seed, list(langs), n_english=60, overlap=0.7)
    index = build_pivot_index(corpora.values())
    return corpora, mine_all(index, list(langs), None)


class TestBuildTrainingSet:
    def test_sample_pairs_empty_list_is_english_only(self):
        corpora, mined = _mined_fixture()
        plan = SamplingPlan(SamplePairs(()), seed=5)
        entries = build_training_set(corpora.values(), mined, plan)
        assert all(label == "english-centric" for _, _, label in entries)
        assert len(entries) == 6  # 3 languages x 2 directions

    def test_both_directions_mirror(self):
        corpora, mined = _mined_fixture()
        plan = SamplingPlan(TrainAll(), seed=5)
        entries = {d: c for d, c, _ in build_training_set(corpora.values(), mined, plan)}
        fwd = entries[TranslationDirection("bn", "hi")]
        bwd = entries[TranslationDirection("hi", "bn")]
        assert [p.swapped() for p in fwd.pairs] == list(bwd.pairs)

    def test_missing_corpus(self):
        corpora, mined = _mined_fixture()
        plan = SamplingPlan(SamplePairs((("bn", "te"),)), seed=5)
        with pytest.raises(MissingCorpus):
            build_training_set(corpora.values(), mined, plan)

    def test_reversed_mined_keys_reoriented(self):
        corpora, mined = _mined_fixture()
        flipped = {(b, a): corpus.swapped() for (a, b), corpus in mined.items()}
        plan = SamplingPlan(TrainAll(), seed=5)
        canonical = build_training_set(corpora.values(), mined, plan)
        from_flipped = build_training_set(corpora.values(), flipped, plan)
        assert canonical == from_flipped

    def test_mismatched_corpus_languages_rejected(self):
        corpora, mined = _mined_fixture()
        bad = {("bn", "te"): mined[("bn", "hi")]}
        with pytest.raises(SamplingError):
            build_training_set(corpora.values(), bad, SamplingPlan(TrainAll(), 5))

    def test_sample_fraction_totals(self):
        corpora, mined = _mined_fixture()
        target = 10
        plan = SamplingPlan(SampleFraction(target), seed=5)
        entries = build_training_set(corpora.values(), mined, plan)
        sampled_total = sum(len(c) for _, c, label in entries if label == "sample-fraction")
        expected = 2 * sum(min(len(c), target) for c in mined.values())
        assert sampled_total == expected

    def test_subset_of_train_all(self):
        corpora, mined = _mined_fixture()
        all_entries = {
            d: set(c.pairs)
            for d, c, _ in build_training_set(corpora.values(), mined, SamplingPlan(TrainAll(), 5))
        }
        for strategy in (SamplePairs((("bn", "hi"),)), SampleFraction(7)):
            for d, c, label in build_training_set(corpora.values(), mined, SamplingPlan(strategy, 5)):
                assert set(c.pairs) <= all_entries[d], (strategy, d, label)

    def test_always_include_english_flag_fixed(self):
        with pytest.raises(SamplingError):
            SamplingPlan(TrainAll(), seed=1, always_include_english_centric=False)


class TestAssembleTrainingSet:
    def test_manifest_counts_match_disk(self, tmp_path):
        corpora, mined = _mined_fixture()
        plan = SamplingPlan(SampleFraction(8), seed=9)
        manifest = assemble_training_set(corpora.values(), mined, plan, tmp_path / "out")
        verify_manifest(manifest, tmp_path / "out")
        assert load_manifest(tmp_path / "out" / "manifest.json") == manifest
        assert {e.strategy for e in manifest.entries} == {"english-centric", "sample-fraction"}

    def test_byte_identical_reruns(self, tmp_path):
        corpora, mined = _mined_fixture()
        plan = SamplingPlan(SampleFraction(8), seed=9)
        assemble_training_set(corpora.values(), mined, plan, tmp_path / "a")
        assemble_training_set(corpora.values(), mined, plan, tmp_path / "b")
        names = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
        match, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", names, shallow=False)
        assert not mismatch and not errors


class TestSampleValidation:
    def _dev(self, n):
        return {
            TranslationDirection("bn", "hi"): _tiny_corpus("bn", "hi", n),
            TranslationDirection("hi", "bn"): _tiny_corpus("hi", "bn", n),
        }

    def test_ten_percent_of_thousand(self):
        sampled = sample_validation_corpora(self._dev(1000), 0.1, seed=2)
        assert all(len(c) == 100 for c in sampled.values())

    def test_full_fraction_preserves_order(self):
        dev = self._dev(17)
        sampled = sample_validation_corpora(dev, 1.0, seed=2)
        for direction, corpus in sampled.items():
            assert corpus.pairs == dev[direction].pairs

    def test_minimum_one_pair(self):
        sampled = sample_validation_corpora(self._dev(5), 0.1, seed=2)
        assert all(len(c) == 1 for c in sampled.values())

    def test_fraction_bounds(self):
        with pytest.raises(SamplingError):
            sample_validation_corpora(self._dev(5), 0.0, seed=2)
        with pytest.raises(SamplingError):
            sample_validation_corpora(self._dev(5), 1.5, seed=2)

    def test_writes_manifest(self, tmp_path):
        manifest = sample_validation(self._dev(40), 0.25, seed=3, out_dir=tmp_path)
        assert all(e.count == 10 for e in manifest.entries)
        verify_manifest(manifest, tmp_path)
