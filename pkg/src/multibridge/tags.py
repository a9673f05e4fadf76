"""Source- and target-language control tokens for the multilingual model.

Every encoder input starts with two reserved tokens: ``__src_xx__`` then
``__tgt_yy__``. Both are single tokens that subword segmentation must
never split (pass them as ``reserved`` to the BPE applier).
"""

from __future__ import annotations

import re
from typing import Sequence

from .errors import MultibridgeError

#: Grammar of a tag token, e.g. __src_en__ or __tgt_hi__.
TAG_PATTERN = re.compile(r"^__(src|tgt)_([a-z]{2})__$")


class TagError(MultibridgeError):
    """Base class for tagging errors."""


class ReservedTokenInPayload(TagError):
    """The payload already contains a tag-shaped token."""


class MalformedTags(TagError):
    """A sequence does not start with a valid src tag followed by a tgt tag."""


def src_tag(lang: str) -> str:
    return f"__src_{lang}__"


def tgt_tag(lang: str) -> str:
    return f"__tgt_{lang}__"


def is_tag_token(token: str) -> bool:
    return TAG_PATTERN.match(token) is not None


def tag_tokens(languages: Sequence[str]) -> list[str]:
    """All tag tokens for a language set, for reserving in segmentation."""
    return [src_tag(code) for code in languages] + [tgt_tag(code) for code in languages]


def tag(tokens: Sequence[str], src: str, tgt: str) -> list[str]:
    """Prepend the source and target tags (in that pinned order)."""
    if src == tgt:
        raise TagError(f"source and target language are both {src!r}")
    for token in tokens:
        if is_tag_token(token):
            raise ReservedTokenInPayload(f"payload contains reserved token {token!r}")
    return [src_tag(src), tgt_tag(tgt), *tokens]


def untag(tokens: Sequence[str]) -> tuple[str, str, list[str]]:
    """Strip the two leading tags; inverse of :func:`tag`."""
    if len(tokens) < 2:
        raise MalformedTags("sequence shorter than the two leading tags")
    src_match = TAG_PATTERN.match(tokens[0])
    tgt_match = TAG_PATTERN.match(tokens[1])
    if src_match is None or src_match.group(1) != "src":
        raise MalformedTags(f"expected a __src_xx__ tag first, got {tokens[0]!r}")
    if tgt_match is None or tgt_match.group(1) != "tgt":
        raise MalformedTags(f"expected a __tgt_yy__ tag second, got {tokens[1]!r}")
    src, tgt = src_match.group(2), tgt_match.group(2)
    if src == tgt:
        raise MalformedTags(f"source and target tags agree on {src!r}")
    return src, tgt, list(tokens[2:])
