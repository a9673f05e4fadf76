"""Pivot mining walkthrough.

Two English-centric corpora share some English sentences; joining on the
shared side yields a direct Bengali-Hindi corpus that never existed in
the input.
"""

from multibridge import (
    BitextCorpus,
    SentencePair,
    build_pivot_index,
    extraction_stats,
    mine_all,
    normalize_pivot,
)

en_bn = BitextCorpus("en", "bn", (
    SentencePair("good morning", "সুপ্রভাত"),
    SentencePair("good morning", "শুভ সকাল"),        # second translation of the same pivot
    SentencePair("the river is wide", "নদীটি প্রশস্ত"),
    SentencePair("thank you", "ধন্যবাদ"),
))

en_hi = BitextCorpus("en", "hi", (
    SentencePair("good  morning ", "सुप्रभात"),        # messy whitespace: still joins
    SentencePair("the river is wide", "नदी चौड़ी है"),
    SentencePair("see you tomorrow", "कल मिलते हैं"),
))

en_ta = BitextCorpus("en", "ta", (
    SentencePair("thank you", "நன்றி"),
    SentencePair("the river is wide", "ஆறு அகலமானது"),
))

print("join keys are normalized English sentences:")
print("   ", repr(normalize_pivot("good  morning ")))

index = build_pivot_index([en_bn, en_hi, en_ta])
print(f"\nindex holds {len(index)} distinct pivot sentences")

mined = mine_all(index, ["bn", "hi", "ta"])
for (a, b), corpus in sorted(mined.items()):
    print(f"\nmined {a}-{b}: {len(corpus)} pairs")
    for pair in corpus.pairs:
        print(f"    {pair.src_text}  |||  {pair.tgt_text}")

# "good morning" has two Bengali translations, so the bn-hi corpus gets
# the full cross product: 2 pairs from that single pivot key.

print("\nstatistics matrix (counts, English column first):")
print(extraction_stats([en_bn, en_hi, en_ta], mined).to_tsv())
