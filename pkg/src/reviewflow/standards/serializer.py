"""Canonical markdown serialization of a Standard.

Layout mirrors the parser's schema; empty optional sections are omitted.
parse(serialize(s)) is structurally identical to s for any standard that
validates cleanly (the model, not the byte layout, round-trips).
"""

from __future__ import annotations

from .model import Category, Standard

_CATEGORY_ORDER = (Category.ESSENTIAL, Category.DESIRABLE, Category.EXTRAORDINARY)

_CATEGORY_TITLES = {
    Category.ESSENTIAL: "Essential",
    Category.DESIRABLE: "Desirable",
    Category.EXTRAORDINARY: "Extraordinary",
}

_LIST_SECTIONS = (
    ("General Quality Criteria", "quality_criteria"),
    ("Examples of Acceptable Deviations", "acceptable_deviations"),
    ("Antipatterns", "antipatterns"),
    ("Invalid Criticisms", "invalid_criticisms"),
    ("Suggested Readings", "suggested_readings"),
    ("Exemplars", "exemplars"),
)


def serialize_standard(standard: Standard) -> str:
    lines: list[str] = []
    lines.extend(_front_matter(standard))
    lines.append("")
    lines.append(f"# {standard.name}")
    if standard.definition:
        lines.append("")
        lines.append(standard.definition)
    lines.append("")
    lines.append("## Application")
    if standard.application:
        lines.append("")
        lines.append(standard.application)

    if standard.attributes or standard.kind.value != "supplement":
        lines.append("")
        lines.append("## Specific Attributes")
        for category in _CATEGORY_ORDER:
            items = standard.items_in(category)
            if not items:
                continue
            lines.append("")
            lines.append(f"### {_CATEGORY_TITLES[category]}")
            for item in items:
                lines.append("")
                if item.explicit_anchor:
                    lines.append(f"<!-- id: {item.item_id} -->")
                if item.tags:
                    lines.append(f"<!-- tags: {', '.join(item.tags)} -->")
                lines.append(f"- [ ] {item.text}")

    for title, attr in _LIST_SECTIONS:
        values = getattr(standard, attr)
        if not values:
            continue
        lines.append("")
        lines.append(f"## {title}")
        lines.append("")
        lines.extend(f"- {value}" for value in values)

    if standard.notes:
        lines.append("")
        lines.append("## Notes")
        lines.append("")
        lines.append(standard.notes)

    return "\n".join(lines) + "\n"


def _front_matter(standard: Standard) -> list[str]:
    lines = ["---"]
    lines.append(f"id: {standard.id}")
    lines.append(f"kind: {standard.kind.value}")
    lines.append(f"version: {standard.version}")
    for item in standard.attributes:
        if item.followup_tree_ref:
            lines.append(f"followup: {item.item_id}={item.followup_tree_ref}")
    for check in standard.initial_checks:
        lines.append(f"initial_checks: {check}")
    lines.append("---")
    return lines
