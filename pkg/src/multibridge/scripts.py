"""Unicode normalization and Indic <-> Devanagari transliteration.

The major Brahmic blocks are laid out in parallel with Devanagari, so
script unification is a per-codepoint offset: Bengali U+0995 sits at the
same block offset as Devanagari U+0915, and so on. The mapping is built
per language as a pair of translation tables:

* forward: every assigned codepoint of the language's block maps to the
  Devanagari codepoint at the same offset (unassigned slots cannot occur
  in real text and pass through untouched);
* reverse: the exact inverse; Devanagari codepoints whose positional
  counterpart is unassigned in the target script (e.g. OM has no Bengali
  slot) have no counterpart and trigger the unmappable policy.

Explicit per-language codepoint overrides can be layered on top; the
default override table is empty and ships as data so it can be versioned
independently of the code.

Normalization is NFC plus nukta canonicalization: each script's
base+nukta sequences are composed into their precomposed forms (NFC alone
leaves most of these decomposed because they are composition-excluded).
"""

from __future__ import annotations

import unicodedata
from functools import lru_cache

from .errors import MultibridgeError
from .languages import BLOCK_SIZE, DEVANAGARI_BASE, Language, get_language

QA_FAMILY_NUKTA = {
    # Devanagari: letters with a precomposed nukta form.
    "ऩ": "ऩ",
    "ऱ": "ऱ",
    "ऴ": "ऴ",
    "क़": "क़",
    "ख़": "ख़",
    "ग़": "ग़",
    "ज़": "ज़",
    "ड़": "ड़",
    "ढ़": "ढ़",
    "फ़": "फ़",
    "य़": "य़",
}

#: Per-script canonicalization of nukta sequences into precomposed forms.
#: Versioned configuration: callers may pass their own table.
DEFAULT_CANONICALIZATIONS: dict[str, dict[str, str]] = {
    "Devanagari": QA_FAMILY_NUKTA,
    "Bengali": {
        "ড়": "ড়",
        "ঢ়": "ঢ়",
        "য়": "য়",
    },
    "Oriya": {
        "ଡ଼": "ଡ଼",
        "ଢ଼": "ଢ଼",
    },
    "Gurmukhi": {
        "ਲ਼": "ਲ਼",
        "ਸ਼": "ਸ਼",
        "ਖ਼": "ਖ਼",
        "ਗ਼": "ਗ਼",
        "ਜ਼": "ਜ਼",
        "ਫ਼": "ਫ਼",
    },
}

#: Explicit transliteration overrides per language code ({src_cp: deva_cp}).
#: Empty by default; present so deployments can pin their own exceptions.
DEFAULT_OVERRIDES: dict[str, dict[int, int]] = {}

#: Devanagari-block codepoints every Indic script borrows as-is (the other
#: blocks intentionally leave these slots unassigned): danda and double
#: danda. They pass through both directions unchanged.
SHARED_CODEPOINTS = frozenset({0x0964, 0x0965})


class ScriptError(MultibridgeError):
    """Base class for script-processing errors."""


class UnsupportedLanguage(ScriptError):
    """Transliteration was requested for a non-Indic or unknown language."""


class UnmappableCodepoint(ScriptError):
    """A Devanagari codepoint has no counterpart in the target script."""

    def __init__(self, char: str, lang: str):
        super().__init__(f"U+{ord(char):04X} ({unicodedata.name(char, '?')}) has no {lang} counterpart")
        self.char = char
        self.lang = lang


def normalize_unicode(text: str, lang: str | None = None,
                      canonicalizations: dict[str, dict[str, str]] | None = None) -> str:
    """NFC normalization plus script-specific nukta composition.

    With ``lang`` given, only that language's script table applies;
    otherwise all tables do (they touch disjoint blocks, so this is safe).
    """
    tables = DEFAULT_CANONICALIZATIONS if canonicalizations is None else canonicalizations
    text = unicodedata.normalize("NFC", text)
    if lang is not None:
        script = get_language(lang).script
        selected = [tables[script]] if script in tables else []
    else:
        selected = list(tables.values())
    for table in selected:
        for seq, composed in table.items():
            if seq in text:
                text = text.replace(seq, composed)
    return text


def _is_assigned(cp: int) -> bool:
    return unicodedata.category(chr(cp)) != "Cn"


class ScriptMap:
    """Positional codepoint mapping between one Indic block and Devanagari."""

    __slots__ = ("lang", "block_base", "forward", "reverse", "unmappable")

    def __init__(self, lang: Language, overrides: dict[int, int] | None = None):
        if not lang.is_indic:
            raise UnsupportedLanguage(f"{lang.code} has no Indic block to map")
        self.lang = lang.code
        self.block_base = lang.block_base
        forward: dict[int, int] = {}
        reverse: dict[int, int] = {}
        unmappable: set[int] = set()
        for offset in range(BLOCK_SIZE):
            src_cp = lang.block_base + offset
            deva_cp = DEVANAGARI_BASE + offset
            if deva_cp in SHARED_CODEPOINTS:
                continue  # danda family: identity in both directions
            if _is_assigned(src_cp):
                forward[src_cp] = deva_cp
                reverse[deva_cp] = src_cp
            else:
                unmappable.add(deva_cp)
        for src_cp, deva_cp in (overrides or {}).items():
            forward[src_cp] = deva_cp
            reverse[deva_cp] = src_cp
            unmappable.discard(deva_cp)
        if len(set(forward.values())) != len(forward):
            raise ScriptError(f"override table for {lang.code} makes the mapping non-injective")
        self.forward = forward
        self.reverse = reverse
        self.unmappable = frozenset(unmappable)


@lru_cache(maxsize=None)
def _script_map(code: str) -> ScriptMap:
    lang = get_language(code)
    return ScriptMap(lang, DEFAULT_OVERRIDES.get(code))


def to_devanagari(text: str, lang: str) -> str:
    """Map every codepoint of ``lang``'s block to its Devanagari position.

    Codepoints outside the block (digits, punctuation, Latin) pass through
    unchanged. For natively-Devanagari languages this is the identity.
    """
    smap = _script_map(lang)
    if smap.block_base == DEVANAGARI_BASE:
        return text
    return text.translate(smap.forward)


def from_devanagari(text: str, lang: str, on_unmappable: str = "error") -> str:
    """Exact inverse of :func:`to_devanagari` on its image.

    A Devanagari codepoint with no counterpart in ``lang``'s script raises
    :class:`UnmappableCodepoint` by default (surfacing corrupt model output
    early); pass ``on_unmappable="pass"`` to let such codepoints through.
    """
    if on_unmappable not in ("error", "pass"):
        raise ValueError(f"unknown unmappable policy: {on_unmappable!r}")
    smap = _script_map(lang)
    if smap.block_base == DEVANAGARI_BASE:
        return text
    if on_unmappable == "error" and smap.unmappable:
        for ch in text:
            if ord(ch) in smap.unmappable:
                raise UnmappableCodepoint(ch, lang)
    return text.translate(smap.reverse)
