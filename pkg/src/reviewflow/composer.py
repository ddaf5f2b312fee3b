"""Merge the applicable standards into one deduplicated review form.

Resolution always starts with the general standard, then the declared
method standards in declaration order, then the declared supplements.
Items repeated across standards (same normalized text, or same explicit
anchor id) collapse into a single form item that remembers every source.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import CategoryConflict, ComposeError, ItemConflict
from .standards.model import AttributeItem, Category, Registry, Standard, StandardKind


@dataclass(frozen=True)
class MethodDeclaration:
    """Which method standards and supplements a submission declares."""

    method_ids: tuple[str, ...] = ()
    supplement_ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "method_ids", tuple(self.method_ids))
        object.__setattr__(self, "supplement_ids", tuple(self.supplement_ids))


@dataclass(frozen=True)
class FormItem:
    """One review-form entry, possibly merged from several standards.

    ``key`` is ``<standard id>.<item id>`` of the first source, so keys
    stay unique even when distinct items derive identical item ids.
    """

    key: str
    text: str
    category: Category
    provenance: tuple[tuple[str, str], ...]
    followup_tree_ref: str | None = None


@dataclass(frozen=True)
class ReviewForm:
    form_id: str
    items: tuple[FormItem, ...]
    source_standards: tuple[tuple[str, str], ...]

    def item(self, key: str) -> FormItem:
        for entry in self.items:
            if entry.key == key:
                return entry
        raise KeyError(key)

    def items_in(self, category: Category) -> tuple[FormItem, ...]:
        return tuple(i for i in self.items if i.category is category)

    @property
    def essential(self) -> tuple[FormItem, ...]:
        return self.items_in(Category.ESSENTIAL)


@dataclass(frozen=True)
class AuthorChecklist:
    form_id: str
    entries: tuple[tuple[str, str, str], ...]


def resolve_standards(decl: MethodDeclaration, registry: Registry) -> tuple[Standard, ...]:
    """General standard first, then methods, then supplements."""
    declared = list(decl.method_ids) + list(decl.supplement_ids)
    dupes = {sid for sid in declared if declared.count(sid) > 1}
    if dupes:
        raise ComposeError("declaration repeats standard ids: " + ", ".join(sorted(dupes)))

    resolved = [registry.general]
    for sid in decl.method_ids:
        std = registry.get(sid)
        if std.kind is not StandardKind.METHOD:
            raise ComposeError(
                f"{sid!r} is a {std.kind.value} standard, not a method standard"
            )
        resolved.append(std)
    for sid in decl.supplement_ids:
        std = registry.get(sid)
        if std.kind is not StandardKind.SUPPLEMENT:
            raise ComposeError(f"{sid!r} is a {std.kind.value} standard, not a supplement")
        resolved.append(std)
    return tuple(resolved)


class _Merged:
    """Mutable accumulator for one form item while composing."""

    __slots__ = ("key", "text", "norm", "category", "provenance", "tree_ref")

    def __init__(self, standard: Standard, item: AttributeItem) -> None:
        self.key = f"{standard.id}.{item.item_id}"
        self.text = item.text
        self.norm = item.normalized_text()
        self.category = item.category
        self.provenance = [(standard.id, item.item_id)]
        self.tree_ref = item.followup_tree_ref

    def absorb(self, standard: Standard, item: AttributeItem, via_anchor: bool) -> None:
        if item.category is not self.category:
            raise CategoryConflict(self.text, (self.category.value, item.category.value))
        if via_anchor and item.normalized_text() != self.norm:
            raise ItemConflict(
                f"anchor {item.item_id!r} in {standard.id!r} carries different text "
                f"than {self.key!r}: {item.text!r} vs {self.text!r}"
            )
        if item.followup_tree_ref:
            if self.tree_ref and self.tree_ref != item.followup_tree_ref:
                raise ItemConflict(
                    f"item {self.key!r} inherits conflicting follow-up trees: "
                    f"{self.tree_ref!r} vs {item.followup_tree_ref!r}"
                )
            self.tree_ref = item.followup_tree_ref
        self.provenance.append((standard.id, item.item_id))

    def freeze(self) -> FormItem:
        return FormItem(
            key=self.key,
            text=self.text,
            category=self.category,
            provenance=tuple(self.provenance),
            followup_tree_ref=self.tree_ref,
        )


def compose_form(decl: MethodDeclaration, registry: Registry) -> ReviewForm:
    """Union of all attribute items over the resolved standards.

    First occurrence fixes an item's position and key; later duplicates
    only extend its provenance.  Category disagreement on a merge is a
    CategoryConflict; anchor collisions with different text and
    conflicting follow-up trees are ItemConflicts.
    """
    standards = resolve_standards(decl, registry)

    merged: list[_Merged] = []
    by_text: dict[str, _Merged] = {}
    by_anchor: dict[str, _Merged] = {}

    for standard in standards:
        for item in standard.attributes:
            text_hit = by_text.get(item.normalized_text())
            anchor_hit = by_anchor.get(item.item_id) if item.explicit_anchor else None
            if text_hit is not None and anchor_hit is not None and text_hit is not anchor_hit:
                raise ItemConflict(
                    f"item {item.item_id!r} of {standard.id!r} matches "
                    f"{text_hit.key!r} by text and {anchor_hit.key!r} by anchor"
                )
            hit = text_hit or anchor_hit
            if hit is None:
                entry = _Merged(standard, item)
                merged.append(entry)
                by_text[entry.norm] = entry
                if item.explicit_anchor:
                    by_anchor[item.item_id] = entry
            else:
                hit.absorb(standard, item, via_anchor=anchor_hit is not None)
                if item.explicit_anchor:
                    by_anchor[item.item_id] = hit

    items = tuple(entry.freeze() for entry in merged)
    sources = tuple((s.id, s.version) for s in standards)
    return ReviewForm(form_id=_form_id(sources, items), items=items, source_standards=sources)


def _form_id(sources, items) -> str:
    payload = json.dumps(
        [list(map(list, sources)), [[i.key, i.text, i.category.value] for i in items]],
        separators=(",", ":"),
    )
    return "form-" + hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]


def author_checklist(form: ReviewForm) -> AuthorChecklist:
    """The pre-submission checklist mirrors the review form exactly."""
    entries = tuple((i.key, i.text, i.category.value) for i in form.items)
    return AuthorChecklist(form_id=form.form_id, entries=entries)


# -- exports ----------------------------------------------------------------

def form_to_text(form: ReviewForm) -> str:
    """One item per line: key | category | text | provenance-list."""
    lines = [f"form {form.form_id}"]
    lines += [f"source {sid} {version}" for sid, version in form.source_standards]
    for item in form.items:
        prov = ",".join(f"{sid}:{iid}" for sid, iid in item.provenance)
        lines.append(f"{item.key} | {item.category.value} | {item.text} | {prov}")
    return "\n".join(lines) + "\n"


def form_to_json(form: ReviewForm) -> dict:
    return {
        "form_id": form.form_id,
        "source_standards": [
            {"standard_id": sid, "version": version} for sid, version in form.source_standards
        ],
        "items": [
            {
                "key": item.key,
                "text": item.text,
                "category": item.category.value,
                "provenance": [
                    {"standard_id": sid, "item_id": iid} for sid, iid in item.provenance
                ],
                "followup_tree_ref": item.followup_tree_ref,
            }
            for item in form.items
        ],
    }


def form_from_json(doc: dict) -> ReviewForm:
    items = tuple(
        FormItem(
            key=entry["key"],
            text=entry["text"],
            category=Category(entry["category"]),
            provenance=tuple((p["standard_id"], p["item_id"]) for p in entry["provenance"]),
            followup_tree_ref=entry.get("followup_tree_ref"),
        )
        for entry in doc["items"]
    )
    sources = tuple(
        (s["standard_id"], s["version"]) for s in doc["source_standards"]
    )
    return ReviewForm(form_id=doc["form_id"], items=items, source_standards=sources)


def checklist_to_text(checklist: AuthorChecklist) -> str:
    lines = [f"checklist {checklist.form_id}"]
    lines += [f"{key} | {category} | {text}" for key, text, category in checklist.entries]
    return "\n".join(lines) + "\n"
