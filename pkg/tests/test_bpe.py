import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multibridge.bpe import (
    BpeModel,
    BpeSegmenter,
    DanglingContinuation,
    EmptyCorpus,
    apply_bpe,
    learn_bpe,
    load_bpe,
    revert_bpe,
    save_bpe,
)

from oracles import brute_force_learn, sequential_apply

TOY = "low low lower newest newest newest widest"


class TestLearn:
    def test_toy_corpus_matches_brute_force(self):
        model = learn_bpe([TOY], num_merges=10, min_frequency=1)
        expected = brute_force_learn(TOY.split(), 10)
        assert list(model.merges) == expected

    def test_first_merge_is_most_frequent_pair(self):
        # "newest" x3 dominates; among its adjacent pairs each occurs 3
        # times, so the lexicographically smallest wins the tie.
        model = learn_bpe([TOY], num_merges=1, min_frequency=1)
        counts = {}
        for token in TOY.split():
            symbols = list(token[:-1]) + [token[-1] + "</w>"]
            for pair in zip(symbols, symbols[1:]):
                counts[pair] = counts.get(pair, 0) + 1
        best = max(counts.values())
        assert model.merges[0] == min(p for p, c in counts.items() if c == best)

    def test_single_char_token_no_merges(self):
        model = learn_bpe(["a a a"], num_merges=10, min_frequency=1)
        assert model.merges == ()

    def test_zero_merges_gives_char_segmentation(self):
        model = learn_bpe(["abc abc"], num_merges=0, min_frequency=1)
        assert model.merges == ()
        assert apply_bpe(model, ["abc"]) == ["a@@", "b@@", "c"]

    def test_merge_floor_stops_early(self):
        # every word unique: all pair counts are 1 < floor 2
        model = learn_bpe(["abcd efgh ijkl"], num_merges=100, min_frequency=1)
        assert model.merges == ()

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            learn_bpe([])
        with pytest.raises(EmptyCorpus):
            learn_bpe(["   "])

    def test_vocabulary_filtered_by_frequency(self):
        model = learn_bpe([TOY], num_merges=10, min_frequency=3)
        assert all(count >= 3 for count in model.vocab.values())

    @pytest.mark.parametrize("seed", range(8))
    def test_random_corpora_match_brute_force(self, seed):
        rng = random.Random(seed)
        tokens = [
            "".join(rng.choice("abcdef") for _ in range(rng.randint(1, 8)))
            for _ in range(rng.randint(5, 400))
        ]
        fast = learn_bpe([" ".join(tokens)], num_merges=30, min_frequency=1)
        assert list(fast.merges) == brute_force_learn(tokens, 30)


class TestApply:
    def test_frequent_token_emitted_whole(self):
        model = learn_bpe([TOY], num_merges=50, min_frequency=1)
        assert apply_bpe(model, ["newest"]) == ["newest"]

    def test_unseen_characters_fully_split(self):
        model = learn_bpe([TOY], num_merges=50, min_frequency=1)
        assert apply_bpe(model, ["xyz"]) == ["x@@", "y@@", "z"]

    def test_deterministic(self):
        model = learn_bpe([TOY], num_merges=50, min_frequency=1)
        assert apply_bpe(model, ["lowest"]) == apply_bpe(model, ["lowest"])

    def test_matches_sequential_reference(self):
        rng = random.Random(99)
        tokens = [
            "".join(rng.choice("abcde") for _ in range(rng.randint(1, 7)))
            for _ in range(300)
        ]
        model = learn_bpe([" ".join(tokens)], num_merges=40, min_frequency=1)
        unfiltered = BpeModel(model.merges, None, model.num_merges, model.min_frequency)
        for token in set(tokens) | {"aabbccdd", "eee", "z"}:
            assert apply_bpe(unfiltered, [token]) == sequential_apply(token, list(model.merges))

    def test_oov_subword_resplit_to_chars(self):
        # "low" appears twice, "lower" once; with threshold 2 the whole-word
        # subword "lower" falls out of the vocabulary and is re-split.
        model = learn_bpe(["low low lower"], num_merges=100, min_frequency=2)
        segmented = apply_bpe(model, ["lower"])
        assert segmented == ["l@@", "o@@", "w@@", "e@@", "r"]
        assert apply_bpe(model, ["low"]) == ["low"]

    def test_reserved_tokens_pass_through(self):
        model = learn_bpe([TOY], num_merges=50, min_frequency=1)
        tagged = apply_bpe(model, ["__src_bn__", "newest"], reserved=["__src_bn__", "__tgt_hi__"])
        assert tagged == ["__src_bn__", "newest"]

    def test_segmenter_bulk_equals_single(self):
        model = learn_bpe([TOY], num_merges=50, min_frequency=1)
        segmenter = BpeSegmenter(model)
        tokens = TOY.split() + ["unseen"]
        assert segmenter.segment(tokens) == apply_bpe(model, tokens)


class TestRevert:
    def test_basic(self):
        assert revert_bpe(["lo@@", "w"]) == ["low"]

    def test_dangling(self):
        with pytest.raises(DanglingContinuation):
            revert_bpe(["a@@"])

    def test_empty(self):
        assert revert_bpe([]) == []

    def test_round_trip_toy(self):
        model = learn_bpe([TOY], num_merges=10, min_frequency=1)
        tokens = TOY.split() + ["unseen", "xyzzy"]
        assert revert_bpe(apply_bpe(model, tokens)) == tokens


_token = st.text(
    st.characters(blacklist_categories=("Cs", "Zs", "Zl", "Zp", "Cc")),
    min_size=1, max_size=12,
).filter(lambda t: "@@" not in t and not t.isspace())


@settings(max_examples=150, deadline=None)
@given(st.lists(_token, min_size=0, max_size=30))
def test_revert_apply_identity_property(tokens):
    model = learn_bpe([TOY], num_merges=10, min_frequency=1)
    assert revert_bpe(apply_bpe(model, tokens)) == tokens


@settings(max_examples=50, deadline=None)
@given(st.lists(_token, min_size=1, max_size=20))
def test_concatenation_reproduces_token(tokens):
    model = learn_bpe([" ".join(tokens)], num_merges=20, min_frequency=1)
    for token in tokens:
        subwords = apply_bpe(model, [token])
        assert "".join(s.removesuffix("@@") for s in subwords) == token


class TestModelFile:
    def test_save_load_save_byte_identical(self, tmp_path):
        model = learn_bpe([TOY], num_merges=10, min_frequency=2)
        save_bpe(model, tmp_path / "codes.txt", tmp_path / "vocab.txt")
        loaded = load_bpe(tmp_path / "codes.txt", tmp_path / "vocab.txt")
        assert loaded == model
        save_bpe(loaded, tmp_path / "codes2.txt", tmp_path / "vocab2.txt")
        assert (tmp_path / "codes.txt").read_bytes() == (tmp_path / "codes2.txt").read_bytes()
        assert (tmp_path / "vocab.txt").read_bytes() == (tmp_path / "vocab2.txt").read_bytes()

    def test_codes_file_shape(self, tmp_path):
        model = learn_bpe([TOY], num_merges=10, min_frequency=1)
        save_bpe(model, tmp_path / "codes.txt")
        lines = (tmp_path / "codes.txt").read_text().splitlines()
        assert lines[0].startswith("#bpe ")
        assert "num_merges=10" in lines[0] and "min_frequency=1" in lines[0]
        for line in lines[1:]:
            assert len(line.split(" ")) == 2

    def test_load_without_vocab_disables_filter(self, tmp_path):
        model = learn_bpe(["low low lower"], num_merges=100, min_frequency=2)
        save_bpe(model, tmp_path / "codes.txt")
        loaded = load_bpe(tmp_path / "codes.txt")
        assert loaded.vocab is None
        # with the vocab filter "lo@@" is out-of-vocabulary and re-split;
        # without it the learned merges apply untouched
        assert apply_bpe(model, ["lower"]) == ["l@@", "o@@", "w@@", "e@@", "r"]
        assert apply_bpe(loaded, ["lower"]) == ["lo@@", "w@@", "e@@", "r"]

    def test_reject_garbage(self, tmp_path):
        (tmp_path / "bad.txt").write_text("not a header\n")
        with pytest.raises(Exception):
            load_bpe(tmp_path / "bad.txt")
