"""Evaluation: BLEU, chrF2, embedding cosine, and the n-way comparison.

BLEU follows the standard WMT recipe (13a tokenization, exponential
smoothing); for pre-tokenized Indic output use tokenization="none".
"""

import numpy as np

from multibridge import (
    EmbeddingTable,
    EvalReport,
    MetricScore,
    TranslationDirection,
    bleu,
    chrf2,
    cosine_batch,
    nway_compare,
)

hyps = [
    "the cat sat on a mat",
    "multilingual systems share parameters across directions",
    "the river is wide and deep",
]
refs = [
    "the cat sat on the mat",
    "multilingual systems share their parameters across many directions",
    "the river is wide and deep",
]

b = bleu(hyps, refs, tokenization="13a")
c = chrf2(hyps, refs)
print(f"BLEU  = {b.value:.1f}   [{b.signature}]")
print(f"chrF2 = {c.value:.1f}   [{c.signature}]")

# Embeddings come from files produced by an external encoder; here we
# fake two small tables to show the cosine report.
rng = np.random.default_rng(0)
base = rng.normal(size=(3, 8))
noisy = base + 0.1 * rng.normal(size=(3, 8))
sim = cosine_batch(
    EmbeddingTable((0, 1, 2), base),
    EmbeddingTable((0, 1, 2), noisy),
)
print(f"cosine = {sim.value:.1f}   [{sim.signature}]")

# n-way comparison: per-source rows over outgoing non-English directions,
# an AVG row, and English kept separate.
def report(src, tgt, bleu_value, n=239):
    return EvalReport(
        TranslationDirection(src, tgt),
        (MetricScore("bleu", bleu_value, "demo"),),
        n,
    )

reports = [
    report("bn", "hi", 13.0), report("bn", "ta", 10.4),
    report("hi", "bn", 12.9), report("hi", "ta", 10.9),
    report("ta", "bn", 11.5), report("ta", "hi", 14.8),
    report("en", "bn", 15.0), report("en", "hi", 37.2), report("en", "ta", 13.5),
]
table = nway_compare(reports, ["bn", "hi", "ta"], average="macro")
print("\nn-way comparison (macro):")
print(table.to_tsv())

micro = nway_compare(reports, ["bn", "hi", "ta"], average="micro")
print("micro AVG (sentence-weighted):", round(micro.avg_row["bleu"], 2))
