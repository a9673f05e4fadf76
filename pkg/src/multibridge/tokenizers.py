"""Word tokenization and detokenization for English and Indic text.

English follows the WMT ``mteval-v13a`` rule set (the same rules the BLEU
scorer applies, so preprocessing and scoring agree on token boundaries).
Indic text is tokenized by padding punctuation, treating danda and double
danda as sentence punctuation, and keeping numeric sequences like
``1,000`` or ``3.14`` intact.

Detokenization reverses the padding with a small attachment rule set:
closers and sentence punctuation attach left, openers attach right, and
ambiguous ASCII quotes alternate. Full Moses parity is out of scope; the
round trip is exact on text that uses punctuation conventionally.
"""

from __future__ import annotations

import re
import string

DANDA = "।"
DOUBLE_DANDA = "॥"

_13A_PUNCT = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
_13A_PERIOD_BEFORE = re.compile(r"([^0-9])([\.,])")
_13A_PERIOD_AFTER = re.compile(r"([\.,])([^0-9])")
_13A_DIGIT_DASH = re.compile(r"([0-9])(-)")
_WS = re.compile(r"\s+")

_INDIC_PUNCT = re.compile("([" + re.escape(string.punctuation) + DANDA + DOUBLE_DANDA + "])")
_NUM_SEQ = re.compile(r"([0-9]+ [,.:/] )+[0-9]+")

_ATTACH_LEFT = set(".,!?;:%)]}»”’" + DANDA + DOUBLE_DANDA)
_ATTACH_RIGHT = set("([{«“‘$€£₹#")
_AMBIGUOUS_QUOTES = {'"', "'"}


def tokenize_13a(line: str) -> str:
    """mteval-v13a tokenization; returns the space-separated token string."""
    norm = line.replace("<skipped>", "")
    norm = norm.replace("-\n", "").replace("\n", " ")
    norm = norm.replace("&quot;", '"').replace("&amp;", "&")
    norm = norm.replace("&lt;", "<").replace("&gt;", ">")

    norm = f" {norm} "
    norm = _13A_PUNCT.sub(r" \1 ", norm)
    # Periods and commas stay attached inside numbers (3.14, 1,000).
    norm = _13A_PERIOD_BEFORE.sub(r"\1 \2 ", norm)
    norm = _13A_PERIOD_AFTER.sub(r" \1 \2", norm)
    norm = _13A_DIGIT_DASH.sub(r"\1 \2 ", norm)
    return _WS.sub(" ", norm).strip()


def _tokenize_indic(text: str) -> list[str]:
    padded = _INDIC_PUNCT.sub(r" \1 ", text.replace("\t", " "))
    collapsed = _WS.sub(" ", padded).strip()
    if not collapsed:
        return []
    # Stitch numeric sequences back together: "1 , 000" -> "1,000".
    parts = []
    prev = 0
    for match in _NUM_SEQ.finditer(collapsed):
        parts.append(collapsed[prev:match.start()])
        parts.append(match.group(0).replace(" ", ""))
        prev = match.end()
    parts.append(collapsed[prev:])
    return "".join(parts).split(" ")


def tokenize(text: str, lang: str) -> list[str]:
    """Split a sentence into word and punctuation tokens."""
    if lang == "en":
        return tokenize_13a(text).split()
    tokens = _tokenize_indic(text)
    return [t for t in tokens if t]


def detokenize(tokens: list[str], lang: str) -> str:
    """Reattach punctuation; inverse of :func:`tokenize` on conventional text."""
    del lang  # same attachment rules work for English and Indic
    out: list[str] = []
    glue_next = True  # suppress the space before the next token
    quote_open: dict[str, bool] = {q: False for q in _AMBIGUOUS_QUOTES}
    for token in tokens:
        if token in _AMBIGUOUS_QUOTES:
            if quote_open[token]:
                out.append(token)  # closing quote: attach left
                glue_next = False
            else:
                if not glue_next:
                    out.append(" ")
                out.append(token)  # opening quote: attach right
                glue_next = True
            quote_open[token] = not quote_open[token]
        elif token in _ATTACH_LEFT:
            out.append(token)
            glue_next = False
        elif token in _ATTACH_RIGHT:
            if not glue_next:
                out.append(" ")
            out.append(token)
            glue_next = True
        else:
            if not glue_next:
                out.append(" ")
            out.append(token)
            glue_next = False
    return "".join(out)
