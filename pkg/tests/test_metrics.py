import json
import math
import random
from pathlib import Path

import numpy as np
import pytest

from multibridge.corpus import TranslationDirection
from multibridge.metrics import (
    DimensionMismatch,
    EmbeddingTable,
    EmptyCorpus,
    EvalReport,
    LengthMismatch,
    MetricError,
    MetricScore,
    ZeroNormVector,
    bleu,
    chrf2,
    cosine_batch,
    load_embeddings,
    nway_compare,
    save_embeddings,
)

from oracles import naive_mean_cosine

GOLDEN = json.loads((Path(__file__).parent / "data" / "metrics_golden.json").read_text())


def _golden_cases():
    return [pytest.param(c, id=c["name"]) for c in GOLDEN["cases"]]


class TestBleu:
    def test_perfect_match_exactly_100(self):
        hyps = ["The cat sat.", "A dog barked loudly!"]
        assert bleu(hyps, list(hyps)).value == 100.0
        assert bleu(hyps, list(hyps), "none").value == 100.0

    def test_imperfect_below_100(self):
        score = bleu(["the cat sat on a mat"], ["the cat sat on the mat"])
        assert 0.0 < score.value < 100.0

    def test_hand_computed_smoothing(self):
        # 5 shared unigrams minus 2, 1 shared bigram, zero tri/4-grams:
        # p1=3/5, p2=1/4, p3=exp-smoothed 1/(2*3), p4=1/(4*2), BP=1.
        value = bleu(["the swift brown fox leaps"], ["the quick brown fox jumps"], "none").value
        expected = 100.0 * math.exp(
            (math.log(3 / 5) + math.log(1 / 4) + math.log(1 / 6) + math.log(1 / 8)) / 4
        )
        assert value == pytest.approx(expected, abs=1e-9)

    def test_signature_shape(self):
        score = bleu(["a b c d"], ["a b c d"], "13a")
        assert score.signature.startswith("BLEU+case.mixed+numrefs.1+smooth.exp+tok.13a+version.")
        assert bleu(["a b c d"], ["a b c d"], "none").signature.count("+tok.none+") == 1

    def test_case_sensitive(self):
        assert bleu(["The Cat"], ["the cat"]).value < 100.0

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            bleu(["a"], ["a", "b"])
        with pytest.raises(EmptyCorpus):
            bleu([], [])
        with pytest.raises(MetricError):
            bleu(["a"], ["a"], tokenization="intl")

    def test_permutation_invariant(self):
        hyps = ["the cat sat down", "a dog barked", "birds fly south in winter"]
        refs = ["the cat sat down now", "a dog barked twice", "birds flew south in winter"]
        base = bleu(hyps, refs).value
        order = [2, 0, 1]
        assert bleu([hyps[i] for i in order], [refs[i] for i in order]).value == pytest.approx(base)

    @pytest.mark.parametrize("case", _golden_cases())
    def test_golden_13a(self, case):
        value = bleu(case["hypotheses"], case["references"], "13a").value
        assert value == pytest.approx(case["bleu_13a"], abs=0.1)

    @pytest.mark.parametrize("case", _golden_cases())
    def test_golden_none(self, case):
        value = bleu(case["hypotheses"], case["references"], "none").value
        assert value == pytest.approx(case["bleu_none"], abs=0.1)


class TestChrf2:
    def test_identical_exactly_100(self):
        assert chrf2(["abc def"], ["abc def"]).value == 100.0

    def test_disjoint_zero(self):
        assert chrf2(["aaaa"], ["zzzz"]).value == 0.0

    def test_whitespace_invariant(self):
        assert chrf2(["ab cd"], ["abcd"]).value == 100.0

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            chrf2(["a"], [])
        with pytest.raises(EmptyCorpus):
            chrf2([], [])

    @pytest.mark.parametrize("case", _golden_cases())
    def test_golden(self, case):
        value = chrf2(case["hypotheses"], case["references"]).value
        assert value == pytest.approx(case["chrf2"], abs=0.1)


def _table(vectors, ids=None):
    matrix = np.asarray(vectors, dtype=np.float64)
    return EmbeddingTable(tuple(ids or range(len(vectors))), matrix)


class TestCosine:
    def test_self_similarity_100(self):
        table = _table([[1.0, 2.0, 3.0], [0.5, -1.0, 2.0]])
        assert cosine_batch(table, table).value == pytest.approx(100.0)

    def test_orthogonal_zero(self):
        a = _table([[1.0, 0.0]])
        b = _table([[0.0, 1.0]])
        assert cosine_batch(a, b).value == pytest.approx(0.0)

    def test_matches_naive_recomputation(self):
        rng = random.Random(4)
        va = [[rng.uniform(-2, 2) for _ in range(8)] for _ in range(10)]
        vb = [[rng.uniform(-2, 2) for _ in range(8)] for _ in range(10)]
        got = cosine_batch(_table(va), _table(vb)).value
        expected = naive_mean_cosine(va, vb)
        assert got == pytest.approx(expected, rel=1e-9)

    def test_symmetric(self):
        rng = random.Random(5)
        va = [[rng.uniform(-1, 1) for _ in range(4)] for _ in range(6)]
        vb = [[rng.uniform(-1, 1) for _ in range(4)] for _ in range(6)]
        assert cosine_batch(_table(va), _table(vb)).value == cosine_batch(_table(vb), _table(va)).value

    def test_id_alignment_not_row_order(self):
        a = _table([[1.0, 0.0], [0.0, 1.0]], ids=[1, 2])
        b = _table([[0.0, 1.0], [1.0, 0.0]], ids=[2, 1])
        assert cosine_batch(a, b).value == pytest.approx(100.0)

    def test_errors(self):
        with pytest.raises(DimensionMismatch):
            cosine_batch(_table([[1.0, 0.0]]), _table([[1.0, 0.0, 0.0]]))
        with pytest.raises(DimensionMismatch):
            cosine_batch(_table([[1.0]], ids=[0]), _table([[1.0]], ids=[5]))
        with pytest.raises(ZeroNormVector):
            cosine_batch(_table([[0.0, 0.0]]), _table([[1.0, 0.0]]))


class TestEmbeddingFile:
    def test_round_trip(self, tmp_path):
        table = _table([[0.25, -1.5, 3.0], [1.0, 2.0, -0.125]], ids=[10, 11])
        save_embeddings(table, tmp_path / "e.tsv")
        loaded = load_embeddings(tmp_path / "e.tsv")
        assert loaded.ids == table.ids
        assert np.array_equal(loaded.matrix, table.matrix)
        header = (tmp_path / "e.tsv").read_text().splitlines()[0]
        assert header == "3 2"

    def test_reject_bad_row(self, tmp_path):
        (tmp_path / "bad.tsv").write_text("2 1\n0\t1.0\n")
        with pytest.raises(MetricError):
            load_embeddings(tmp_path / "bad.tsv")

    def test_reject_nonfinite(self):
        with pytest.raises(MetricError):
            _table([[float("nan"), 1.0]])


def _score(metric, value):
    return MetricScore(metric, value, f"{metric}+test")


def _report(src, tgt, values: dict, n=100):
    scores = tuple(_score(metric, value) for metric, value in values.items())
    return EvalReport(TranslationDirection(src, tgt), scores, n)


# Per-source aggregate rows of the published n-way comparison (labse
# cosine, chrF2, BLEU, testset similarity), used as an arithmetic check.
TABLE4_ROWS = {
    "bn": (81.2, 45.8, 14.6, 78.1),
    "gu": (84.4, 51.1, 19.0, 83.2),
    "hi": (86.0, 52.9, 19.7, 83.8),
    "kn": (82.8, 47.9, 16.4, 81.7),
    "ml": (83.1, 47.3, 16.0, 80.1),
    "mr": (82.6, 47.9, 16.2, 81.6),
    "or": (82.2, 48.3, 17.0, 79.6),
    "pa": (85.1, 52.3, 19.5, 82.6),
    "ta": (82.1, 46.2, 15.4, 80.3),
    "te": (83.9, 48.2, 16.3, 74.5),
}
TABLE4_AVG = {"cosine": 83.3, "chrf2": 48.8, "bleu": 17.0, "tset_sim": 80.6}


class TestNwayCompare:
    def test_single_direction_is_its_own_row(self):
        reports = [_report("bn", "hi", {"bleu": 12.5, "chrf2": 40.0})]
        table = nway_compare(reports, ["bn", "hi"])
        rows = dict(table.rows)
        assert rows["bn"]["bleu"] == pytest.approx(12.5)
        assert rows["hi"]["bleu"] is None
        assert TranslationDirection("hi", "bn") in table.missing

    def test_published_avg_row(self):
        # One synthetic direction per source carrying the published
        # per-source aggregates; the AVG row must reproduce the printed
        # averages within rounding.
        langs = sorted(TABLE4_ROWS)
        reports = []
        tset = {}
        for src, (labse, chrf, bleu_score, sim) in TABLE4_ROWS.items():
            tgt = next(l for l in langs if l != src)
            reports.append(_report(src, tgt, {"cosine": labse, "chrf2": chrf, "bleu": bleu_score}))
            tset[TranslationDirection(src, tgt)] = sim
        table = nway_compare(reports, langs, testset_similarity=tset)
        for metric, printed in TABLE4_AVG.items():
            assert abs(table.avg_row[metric] - printed) <= 0.05 + 1e-9, metric

    def test_micro_vs_macro_hand_weighted(self):
        reports = [
            _report("bn", "hi", {"bleu": 10.0}, n=100),
            _report("bn", "ta", {"bleu": 20.0}, n=300),
            _report("hi", "ta", {"bleu": 30.0}, n=600),
        ]
        langs = ["bn", "hi", "ta"]
        macro = nway_compare(reports, langs, average="macro")
        micro = nway_compare(reports, langs, average="micro")
        rows_macro = dict(macro.rows)
        rows_micro = dict(micro.rows)
        assert rows_macro["bn"]["bleu"] == pytest.approx((10 + 20) / 2)
        assert rows_micro["bn"]["bleu"] == pytest.approx((10 * 100 + 20 * 300) / 400)
        # pooled micro average across all three directions
        assert micro.avg_row["bleu"] == pytest.approx((10 * 100 + 20 * 300 + 30 * 600) / 1000)
        assert macro.avg_row["bleu"] == pytest.approx((15.0 + 30.0) / 2)

    def test_english_row_separate(self):
        reports = [
            _report("en", "hi", {"bleu": 25.0}),
            _report("bn", "hi", {"bleu": 12.0}),
        ]
        table = nway_compare(reports, ["bn", "hi"])
        assert table.pivot_row["bleu"] == pytest.approx(25.0)
        assert table.avg_row["bleu"] == pytest.approx(12.0)

    def test_into_english_excluded_from_rows(self):
        reports = [
            _report("bn", "en", {"bleu": 30.0}),
            _report("bn", "hi", {"bleu": 10.0}),
        ]
        table = nway_compare(reports, ["bn", "hi"])
        assert dict(table.rows)["bn"]["bleu"] == pytest.approx(10.0)

    def test_tsv_layout(self):
        reports = [_report("bn", "hi", {"bleu": 12.345})]
        text = nway_compare(reports, ["bn", "hi"]).to_tsv()
        lines = text.splitlines()
        assert lines[0] == "# average: macro"
        assert lines[1].split("\t") == ["src", "bleu"]
        assert "12.3" in lines[2]
        assert any(line.startswith("AVG\t") for line in lines)


class TestMetricScoreInvariants:
    def test_range_enforced(self):
        with pytest.raises(MetricError):
            MetricScore("bleu", 101.0, "sig")
        with pytest.raises(MetricError):
            MetricScore("chrf2", -0.5, "sig")
        MetricScore("cosine", -100.0, "sig")

    def test_duplicate_metric_rejected(self):
        with pytest.raises(MetricError):
            EvalReport(
                TranslationDirection("bn", "hi"),
                (_score("bleu", 1.0), _score("bleu", 2.0)),
                10,
            )
