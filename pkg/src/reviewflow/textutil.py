"""Small text helpers used by the parser and the composer."""

from __future__ import annotations

import re

_SLUG_STRIP = re.compile(r"[^a-z0-9]+")
_WS = re.compile(r"\s+")
_TERMINAL_PUNCT = ".,;:!?"


def slugify(text: str, max_words: int = 0) -> str:
    """Lowercase slug of ``text``; keep at most ``max_words`` words if > 0."""
    words = text.strip().lower().split()
    if max_words > 0:
        words = words[:max_words]
    parts = [_SLUG_STRIP.sub("", w) for w in words]
    return "-".join(p for p in parts if p)


def normalize_text(text: str) -> str:
    """Canonical form for duplicate detection.

    Lowercase, collapse runs of whitespace, strip terminal punctuation.
    """
    collapsed = _WS.sub(" ", text.strip().lower())
    return collapsed.rstrip(_TERMINAL_PUNCT).strip()


def is_slug(value: str) -> bool:
    return bool(value) and bool(re.fullmatch(r"[a-z0-9]+(-[a-z0-9]+)*", value))
