"""Parser for the markdown document form of an empirical standard.

Document schema (fixed heading names and order, so parsing is
deterministic):

    ---
    id: experiment
    kind: method            # general | method | supplement
    version: 0.1.0
    followup: <item-id>=<tree-id>       # repeatable
    initial_checks: <check text>        # repeatable, general standard only
    ---
    # <Name>

    <definition paragraph>

    ## Application
    ## Specific Attributes
    ### Essential / ### Desirable / ### Extraordinary
        - [ ] <item text>               # optionally preceded by
                                        # <!-- id: <slug> --> and/or
                                        # <!-- tags: a, b -->
    ## General Quality Criteria         # optional bullet-list sections ...
    ## Examples of Acceptable Deviations
    ## Antipatterns
    ## Invalid Criticisms
    ## Suggested Readings
    ## Exemplars
    ## Notes                            # optional free text

The front-matter block is optional; a document without one gets
``id = slug(name)``, ``kind = method`` and version ``0.1.0``.
"""

from __future__ import annotations

import re

from ..errors import (
    DuplicateItemId,
    EmptyDocument,
    MissingSection,
    ParseError,
    UnknownCategoryHeading,
)
from ..textutil import is_slug, slugify
from .model import AttributeItem, Category, Standard, StandardKind

_LIST_SECTIONS = (
    "General Quality Criteria",
    "Examples of Acceptable Deviations",
    "Antipatterns",
    "Invalid Criticisms",
    "Suggested Readings",
    "Exemplars",
)

_SECTION_ORDER = ("Application", "Specific Attributes", *_LIST_SECTIONS, "Notes")

_CATEGORY_HEADINGS = {
    "Essential": Category.ESSENTIAL,
    "Desirable": Category.DESIRABLE,
    "Extraordinary": Category.EXTRAORDINARY,
}

_KIND_NAMES = {
    "general": StandardKind.GENERAL,
    "method": StandardKind.METHOD,
    "supplement": StandardKind.SUPPLEMENT,
}

_ITEM_RE = re.compile(r"^- \[ \] (?P<text>\S.*)$")
_ANCHOR_RE = re.compile(r"^<!--\s*id:\s*(?P<id>[^>]+?)\s*-->$")
_TAGS_RE = re.compile(r"^<!--\s*tags:\s*(?P<tags>[^>]+?)\s*-->$")
_BULLET_RE = re.compile(r"^- (?P<text>\S.*)$")

DERIVED_ID_WORDS = 6


def parse_standard(text: str) -> Standard:
    """Parse one standard document into its typed model.

    Raises EmptyDocument, MissingSection, UnknownCategoryHeading,
    DuplicateItemId, or a plain ParseError on malformed structure.
    """
    if not text.strip():
        raise EmptyDocument("document is empty")

    front, body_lines = _split_front_matter(text)

    name, cursor = _read_name(body_lines)
    sections = _split_sections(body_lines, cursor)
    _check_section_order(sections)

    kind = _parse_kind(front.get("kind", ["method"])[-1])

    if "Application" not in sections:
        raise MissingSection("Application")
    if "Specific Attributes" not in sections and kind is not StandardKind.SUPPLEMENT:
        raise MissingSection("Specific Attributes")

    definition = _block_text(sections.get("", []))
    application = _block_text(sections["Application"])

    followups = _parse_followups(front.get("followup", []))
    attributes = _parse_attributes(sections.get("Specific Attributes", []), followups)

    unknown_refs = set(followups) - {a.item_id for a in attributes}
    if unknown_refs:
        raise ParseError(
            "followup front matter names unknown item ids: " + ", ".join(sorted(unknown_refs))
        )

    lists = {
        heading: _parse_bullets(sections[heading]) for heading in _LIST_SECTIONS if heading in sections
    }

    std_id = front.get("id", [slugify(name)])[-1]
    if not is_slug(std_id):
        raise ParseError(f"front matter id is not a lowercase slug: {std_id!r}")

    return Standard(
        id=std_id,
        name=name,
        kind=kind,
        definition=definition,
        application=application,
        attributes=attributes,
        quality_criteria=lists.get("General Quality Criteria", ()),
        acceptable_deviations=lists.get("Examples of Acceptable Deviations", ()),
        antipatterns=lists.get("Antipatterns", ()),
        invalid_criticisms=lists.get("Invalid Criticisms", ()),
        suggested_readings=lists.get("Suggested Readings", ()),
        exemplars=lists.get("Exemplars", ()),
        notes=_block_text(sections.get("Notes", [])),
        version=front.get("version", ["0.1.0"])[-1],
        initial_checks=tuple(front.get("initial_checks", [])),
    )


def _split_front_matter(text: str) -> tuple[dict[str, list[str]], list[str]]:
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx >= len(lines) or lines[idx].strip() != "---":
        return {}, lines[idx:]

    front: dict[str, list[str]] = {}
    close = None
    for j in range(idx + 1, len(lines)):
        if lines[j].strip() == "---":
            close = j
            break
        line = lines[j].strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ParseError(f"front matter line has no key: {line!r}")
        key, value = line.split(":", 1)
        front.setdefault(key.strip(), []).append(value.strip())
    if close is None:
        raise ParseError("front matter block is not closed with ---")
    return front, lines[close + 1 :]


def _read_name(lines: list[str]) -> tuple[str, int]:
    for idx, line in enumerate(lines):
        if not line.strip():
            continue
        if line.startswith("# "):
            name = line[2:].strip()
            if not name:
                raise ParseError("empty standard name heading")
            return name, idx + 1
        raise ParseError(f"expected '# <Name>' on the first content line, got {line!r}")
    raise EmptyDocument("no content after front matter")


def _split_sections(lines: list[str], start: int) -> dict[str, list[str]]:
    """Split body into blocks keyed by their '## ' heading.

    The leading block before the first heading (the definition) is keyed
    by the empty string.
    """
    sections: dict[str, list[str]] = {"": []}
    current = ""
    for line in lines[start:]:
        if line.startswith("## "):
            heading = line[3:].strip()
            if heading not in _SECTION_ORDER:
                raise ParseError(f"unknown section heading: {heading!r}")
            if heading in sections:
                raise ParseError(f"section appears twice: {heading!r}")
            sections[heading] = []
            current = heading
        elif line.startswith("# "):
            raise ParseError(f"unexpected extra top-level heading: {line.strip()!r}")
        else:
            sections[current].append(line)
    return sections


def _check_section_order(sections: dict[str, list[str]]) -> None:
    present = [h for h in sections if h]
    expected = [h for h in _SECTION_ORDER if h in sections]
    if present != expected:
        raise ParseError(
            "sections out of order: found "
            + ", ".join(present)
            + " expected "
            + ", ".join(expected)
        )


def _parse_kind(raw: str) -> StandardKind:
    try:
        return _KIND_NAMES[raw.strip().lower()]
    except KeyError:
        raise ParseError(f"unknown standard kind: {raw!r}") from None


def _parse_followups(raw_entries: list[str]) -> dict[str, str]:
    refs: dict[str, str] = {}
    for raw in raw_entries:
        if "=" not in raw:
            raise ParseError(f"followup entry must be <item-id>=<tree-id>: {raw!r}")
        item_id, tree_id = (part.strip() for part in raw.split("=", 1))
        if not item_id or not tree_id:
            raise ParseError(f"followup entry must be <item-id>=<tree-id>: {raw!r}")
        refs[item_id] = tree_id
    return refs


def _parse_attributes(
    lines: list[str], followups: dict[str, str]
) -> tuple[AttributeItem, ...]:
    items: list[AttributeItem] = []
    seen: set[str] = set()
    category: Category | None = None
    anchor: str | None = None
    tags: tuple[str, ...] = ()

    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("### "):
            heading = stripped[4:].strip()
            if heading not in _CATEGORY_HEADINGS:
                raise UnknownCategoryHeading(heading)
            category = _CATEGORY_HEADINGS[heading]
            anchor, tags = None, ()
            continue

        anchor_match = _ANCHOR_RE.match(stripped)
        if anchor_match:
            anchor = anchor_match.group("id").strip()
            continue
        tags_match = _TAGS_RE.match(stripped)
        if tags_match:
            tags = tuple(t.strip() for t in tags_match.group("tags").split(",") if t.strip())
            continue

        item_match = _ITEM_RE.match(stripped)
        if not item_match:
            raise ParseError(f"unexpected line in Specific Attributes: {stripped!r}")
        if category is None:
            raise ParseError("attribute item before any category heading")

        text = item_match.group("text").strip()
        item_id = anchor if anchor is not None else slugify(text, max_words=DERIVED_ID_WORDS)
        if not item_id:
            raise ParseError(f"cannot derive an id for item {text!r}")
        if item_id in seen:
            raise DuplicateItemId(item_id)
        seen.add(item_id)
        items.append(
            AttributeItem(
                item_id=item_id,
                text=text,
                category=category,
                tags=tags,
                followup_tree_ref=followups.get(item_id),
                explicit_anchor=anchor is not None,
            )
        )
        anchor, tags = None, ()

    return tuple(items)


def _parse_bullets(lines: list[str]) -> tuple[str, ...]:
    out: list[str] = []
    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        match = _BULLET_RE.match(stripped)
        if not match:
            raise ParseError(f"expected '- <text>' bullet, got {stripped!r}")
        out.append(match.group("text").strip())
    return tuple(out)


def _block_text(lines: list[str]) -> str:
    return "\n".join(lines).strip()
