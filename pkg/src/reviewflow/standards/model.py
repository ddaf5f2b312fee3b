"""Typed model of an empirical standard and the registry that holds them.

A standard is a checklist-style document: attribute items in three
categories (essential, desirable, extraordinary) plus deviation and
antipattern guidance.  All types are immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import TYPE_CHECKING, Iterator, Mapping

from ..errors import UnknownStandardId, UnknownTree
from ..textutil import is_slug, normalize_text

if TYPE_CHECKING:
    from ..trees import FollowUpTree


class StandardKind(Enum):
    GENERAL = "general"
    METHOD = "method"
    SUPPLEMENT = "supplement"


class Category(Enum):
    ESSENTIAL = "essential"
    DESIRABLE = "desirable"
    EXTRAORDINARY = "extraordinary"


@dataclass(frozen=True)
class AttributeItem:
    """One checklist sentence with a stable id.

    ``item_id`` comes from an explicit anchor comment when present,
    otherwise from a slug of the first six words of the text, so ids stay
    stable under whitespace edits around anchored items.
    """

    item_id: str
    text: str
    category: Category
    tags: tuple[str, ...] = ()
    followup_tree_ref: str | None = None
    explicit_anchor: bool = False

    def normalized_text(self) -> str:
        return normalize_text(self.text)


@dataclass(frozen=True)
class Standard:
    id: str
    name: str
    kind: StandardKind
    definition: str
    application: str
    attributes: tuple[AttributeItem, ...]
    quality_criteria: tuple[str, ...] = ()
    acceptable_deviations: tuple[str, ...] = ()
    antipatterns: tuple[str, ...] = ()
    invalid_criticisms: tuple[str, ...] = ()
    suggested_readings: tuple[str, ...] = ()
    exemplars: tuple[str, ...] = ()
    notes: str = ""
    version: str = "0.1.0"
    initial_checks: tuple[str, ...] = ()

    def items_in(self, category: Category) -> tuple[AttributeItem, ...]:
        return tuple(a for a in self.attributes if a.category is category)

    @property
    def essential(self) -> tuple[AttributeItem, ...]:
        return self.items_in(Category.ESSENTIAL)

    def item(self, item_id: str) -> AttributeItem:
        for a in self.attributes:
            if a.item_id == item_id:
                return a
        raise KeyError(item_id)

    def with_attributes(self, attributes: tuple[AttributeItem, ...]) -> Standard:
        return replace(self, attributes=attributes)


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding: which standard/field broke which rule."""

    standard_id: str
    field: str
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"{self.standard_id}.{self.field}: {self.rule} ({self.detail})"


@dataclass(frozen=True)
class Registry:
    """All standards known to a venue, keyed by id, plus follow-up trees.

    Exactly one standard has kind GENERAL and its id is ``general_id``.
    """

    standards: Mapping[str, Standard]
    general_id: str
    trees: Mapping[str, "FollowUpTree"] = field(default_factory=dict)

    def __iter__(self) -> Iterator[Standard]:
        return iter(self.standards.values())

    @property
    def general(self) -> Standard:
        return self.standards[self.general_id]

    def get(self, standard_id: str) -> Standard:
        try:
            return self.standards[standard_id]
        except KeyError:
            raise UnknownStandardId(standard_id) from None

    def tree(self, tree_id: str) -> "FollowUpTree":
        try:
            return self.trees[tree_id]
        except KeyError:
            raise UnknownTree(tree_id) from None


def validate_standard(standard: Standard, registry: Registry | None = None) -> list[Diagnostic]:
    """Check a standard against its own invariants and, when a registry is
    given, against cross-registry rules.

    Returns an empty list iff everything holds.  Violations are reported as
    diagnostics, never raised.
    """
    out: list[Diagnostic] = []

    def bad(field_name: str, rule: str, detail: str) -> None:
        out.append(Diagnostic(standard.id or "<unnamed>", field_name, rule, detail))

    if not standard.id:
        bad("id", "non-empty id required", "id is empty")
    elif not is_slug(standard.id):
        bad("id", "lowercase slug characters only", repr(standard.id))

    if not standard.name.strip():
        bad("name", "non-empty name required", "name is empty")

    seen_ids: set[str] = set()
    for item in standard.attributes:
        if not item.text.strip():
            bad("attributes", "item text non-empty", f"item {item.item_id!r}")
        if item.item_id in seen_ids:
            bad("attributes", "item ids unique within standard", item.item_id)
        seen_ids.add(item.item_id)
        if item.category is not Category.ESSENTIAL and item.followup_tree_ref:
            bad(
                "attributes",
                "only essential items carry follow-up trees",
                f"item {item.item_id!r} is {item.category.value}",
            )

    if standard.kind is not StandardKind.SUPPLEMENT and not standard.essential:
        bad("attributes", "no essential attributes", f"kind {standard.kind.value} requires at least one")

    # The document form groups items by category section, so a standard
    # whose attribute order interleaves categories cannot round-trip.
    ranks = [
        (Category.ESSENTIAL, Category.DESIRABLE, Category.EXTRAORDINARY).index(a.category)
        for a in standard.attributes
    ]
    if ranks != sorted(ranks):
        bad("attributes", "attributes grouped by category", "essential, then desirable, then extraordinary")

    if registry is not None:
        _validate_against_registry(standard, registry, bad)

    return out


def _validate_against_registry(standard: Standard, registry: Registry, bad) -> None:
    for item in standard.attributes:
        if item.followup_tree_ref and item.followup_tree_ref not in registry.trees:
            bad(
                "attributes",
                "followup tree ref resolves",
                f"item {item.item_id!r} references {item.followup_tree_ref!r}",
            )
    if standard.kind is StandardKind.GENERAL:
        return
    general = registry.standards.get(registry.general_id)
    if general is None or general.id == standard.id:
        return
    general_texts = {a.normalized_text(): a.item_id for a in general.attributes}
    for item in standard.attributes:
        hit = general_texts.get(item.normalized_text())
        if hit is not None:
            bad(
                "attributes",
                "duplicates General Standard item",
                f"item {item.item_id!r} repeats general item {hit!r}",
            )


def validate_registry(registry: Registry) -> list[Diagnostic]:
    """Registry-level invariants plus per-standard validation."""
    out: list[Diagnostic] = []
    generals = [s.id for s in registry if s.kind is StandardKind.GENERAL]
    if registry.general_id not in registry.standards:
        out.append(
            Diagnostic("<registry>", "general_id", "general standard present", registry.general_id)
        )
    if len(generals) != 1:
        out.append(
            Diagnostic(
                "<registry>",
                "standards",
                "exactly one general standard",
                f"found {len(generals)}: {', '.join(generals) or 'none'}",
            )
        )
    for standard_id, standard in registry.standards.items():
        if standard_id != standard.id:
            out.append(Diagnostic(standard_id, "id", "registry key matches standard id", standard.id))
        out.extend(validate_standard(standard, registry))
    return out
