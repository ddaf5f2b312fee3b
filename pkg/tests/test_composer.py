"""Form composition against an independent set-union oracle.

The oracle below recomputes the expected merged item list from raw
standards with its own normalization, so composer defects cannot hide
behind shared helpers.
"""

from __future__ import annotations

import pytest

from reviewflow.composer import (
    AuthorChecklist,
    MethodDeclaration,
    ReviewForm,
    author_checklist,
    checklist_to_text,
    compose_form,
    form_from_json,
    form_to_json,
    form_to_text,
    resolve_standards,
)
from reviewflow.errors import (
    CategoryConflict,
    ComposeError,
    ItemConflict,
    UnknownStandardId,
)
from reviewflow.standards import (
    Category,
    Registry,
    Standard,
    StandardKind,
    load_builtin_registry,
)
from reviewflow.standards.model import AttributeItem


def union_oracle(standards):
    """Expected (normalized text -> first source) union, insertion ordered."""

    def norm(text):
        return " ".join(text.lower().split()).rstrip(".,;:!?").strip()

    expected = {}
    for std in standards:
        for item in std.attributes:
            key = norm(item.text)
            if key not in expected:
                expected[key] = (std.id, item)
    return expected


@pytest.fixture(scope="module")
def registry():
    return load_builtin_registry()


def test_resolve_includes_general_first(registry):
    out = resolve_standards(MethodDeclaration(("case-study",), ()), registry)
    assert [s.id for s in out] == ["general", "case-study"]


def test_resolve_worked_pairs(registry):
    one = resolve_standards(
        MethodDeclaration(("experiment",), ("information-visualization",)), registry
    )
    assert [s.id for s in one] == ["general", "experiment", "information-visualization"]
    two = resolve_standards(
        MethodDeclaration(("systematic-review", "questionnaire-survey"), ("multi-methodology",)),
        registry,
    )
    assert len(two) == 4


def test_resolve_unknown_id(registry):
    with pytest.raises(UnknownStandardId):
        resolve_standards(MethodDeclaration(("grounded-theory",), ()), registry)


def test_resolve_rejects_duplicates(registry):
    with pytest.raises(ComposeError, match="repeats"):
        resolve_standards(MethodDeclaration(("experiment", "experiment"), ()), registry)


def test_resolve_rejects_kind_mismatch(registry):
    with pytest.raises(ComposeError, match="not a method standard"):
        resolve_standards(MethodDeclaration(("sampling",), ()), registry)
    with pytest.raises(ComposeError, match="not a supplement"):
        resolve_standards(MethodDeclaration((), ("experiment",)), registry)


def test_compose_no_methods_is_general_only(registry):
    form = compose_form(MethodDeclaration(), registry)
    general = registry.general
    assert [i.text for i in form.items] == [a.text for a in general.attributes]
    assert all(i.provenance == (("general", i.key.split(".", 1)[1]),) for i in form.items)


@pytest.mark.parametrize(
    "methods,supplements",
    [
        (("experiment",), ("information-visualization",)),
        (("systematic-review", "questionnaire-survey"), ("multi-methodology",)),
    ],
)
def test_compose_matches_union_oracle(registry, methods, supplements):
    decl = MethodDeclaration(methods, supplements)
    standards = resolve_standards(decl, registry)
    expected = union_oracle(standards)

    form = compose_form(decl, registry)

    total = sum(len(s.attributes) for s in standards)
    assert len(form.items) == len(expected) == total - (total - len(expected))
    assert total > len(expected)  # the pair really does share items
    assert [i.text for i in form.items] == [item.text for _, item in expected.values()]
    for got, (src_id, item) in zip(form.items, expected.values()):
        assert got.key == f"{src_id}.{item.item_id}"
        assert got.category is item.category
        assert got.provenance[0] == (src_id, item.item_id)

    general_count = len(registry.general.attributes)
    assert all(i.provenance[0][0] == "general" for i in form.items[:general_count])


def test_merged_items_concatenate_provenance(registry):
    decl = MethodDeclaration(("experiment",), ("information-visualization",))
    form = compose_form(decl, registry)
    shared = [i for i in form.items if len(i.provenance) > 1]
    assert shared, "expected at least one merged item in this pair"
    for item in shared:
        sources = {sid for sid, _ in item.provenance}
        assert len(sources) == len(item.provenance)


def test_compose_idempotent(registry):
    decl = MethodDeclaration(("experiment",), ("information-visualization",))
    assert compose_form(decl, registry) == compose_form(decl, registry)


def test_adding_supplement_is_monotonic(registry):
    base = compose_form(MethodDeclaration(("experiment",), ()), registry)
    wider = compose_form(
        MethodDeclaration(("experiment",), ("information-visualization",)), registry
    )
    assert {i.key for i in base.items} <= {i.key for i in wider.items}


def test_dedup_soundness(registry):
    decl = MethodDeclaration(("systematic-review", "questionnaire-survey"), ("multi-methodology",))
    form = compose_form(decl, registry)
    norms = [" ".join(i.text.lower().split()).rstrip(".,;:!?") for i in form.items]
    assert len(norms) == len(set(norms))


# -- merge conflicts over hand-built registries -----------------------------

def _std(std_id, kind, *items):
    return Standard(
        id=std_id,
        name=std_id.replace("-", " ").title(),
        kind=kind,
        definition="",
        application="anywhere",
        attributes=tuple(items),
    )


def _toy_registry(*extra_standards):
    general = _std(
        "general",
        StandardKind.GENERAL,
        AttributeItem("rq", "states a clear research question", Category.ESSENTIAL,
                      explicit_anchor=True),
    )
    standards = {"general": general}
    for std in extra_standards:
        standards[std.id] = std
    return Registry(standards=standards, general_id="general")


def test_shared_text_merges_into_one_item():
    method = _std(
        "toy-method",
        StandardKind.METHOD,
        AttributeItem("own-rq", "States a clear research question.", Category.ESSENTIAL),
        AttributeItem("extra", "does something else", Category.ESSENTIAL),
    )
    form = compose_form(MethodDeclaration(("toy-method",), ()), _toy_registry(method))
    assert len(form.items) == 2
    merged = form.items[0]
    assert merged.key == "general.rq"
    assert merged.provenance == (("general", "rq"), ("toy-method", "own-rq"))


def test_shared_anchor_merges_and_keeps_first_text():
    method = _std(
        "toy-method",
        StandardKind.METHOD,
        AttributeItem("rq", "States a clear research question", Category.ESSENTIAL,
                      explicit_anchor=True),
    )
    form = compose_form(MethodDeclaration(("toy-method",), ()), _toy_registry(method))
    assert len(form.items) == 1
    assert form.items[0].text == "states a clear research question"
    assert len(form.items[0].provenance) == 2


def test_category_conflict_on_merge():
    method = _std(
        "toy-method",
        StandardKind.METHOD,
        AttributeItem("own-rq", "states a clear research question", Category.DESIRABLE),
    )
    with pytest.raises(CategoryConflict):
        compose_form(MethodDeclaration(("toy-method",), ()), _toy_registry(method))


def test_anchor_conflict_on_different_text():
    method = _std(
        "toy-method",
        StandardKind.METHOD,
        AttributeItem("rq", "asks something else entirely", Category.ESSENTIAL,
                      explicit_anchor=True),
    )
    with pytest.raises(ItemConflict, match="anchor"):
        compose_form(MethodDeclaration(("toy-method",), ()), _toy_registry(method))


def test_followup_tree_conflict_on_merge():
    a = _std(
        "method-a",
        StandardKind.METHOD,
        AttributeItem("x", "does the shared thing", Category.ESSENTIAL,
                      followup_tree_ref="tree-a"),
    )
    b = _std(
        "method-b",
        StandardKind.METHOD,
        AttributeItem("x", "does the shared thing", Category.ESSENTIAL,
                      followup_tree_ref="tree-b"),
    )
    with pytest.raises(ItemConflict, match="follow-up trees"):
        compose_form(MethodDeclaration(("method-a", "method-b"), ()), _toy_registry(a, b))


def test_followup_tree_adopted_from_later_source():
    a = _std(
        "method-a",
        StandardKind.METHOD,
        AttributeItem("x", "does the shared thing", Category.ESSENTIAL),
    )
    b = _std(
        "method-b",
        StandardKind.METHOD,
        AttributeItem("x", "does the shared thing", Category.ESSENTIAL,
                      followup_tree_ref="tree-b"),
    )
    form = compose_form(MethodDeclaration(("method-a", "method-b"), ()), _toy_registry(a, b))
    item = form.item("method-a.x")
    assert item.followup_tree_ref == "tree-b"


# -- checklist and exports --------------------------------------------------

def test_checklist_mirrors_form(registry):
    form = compose_form(MethodDeclaration(("experiment",), ()), registry)
    checklist = author_checklist(form)
    assert checklist.form_id == form.form_id
    assert len(checklist.entries) == len(form.items)
    for entry, item in zip(checklist.entries, form.items):
        assert entry == (item.key, item.text, item.category.value)


def test_checklist_of_empty_form():
    empty = ReviewForm(form_id="form-0", items=(), source_standards=())
    assert author_checklist(empty) == AuthorChecklist(form_id="form-0", entries=())


def test_text_export_format(registry):
    form = compose_form(MethodDeclaration(), registry)
    lines = form_to_text(form).splitlines()
    assert lines[0] == f"form {form.form_id}"
    assert lines[1] == f"source general {registry.general.version}"
    first = lines[2].split(" | ")
    assert first[0] == form.items[0].key
    assert first[1] == form.items[0].category.value
    assert first[2] == form.items[0].text
    assert first[3] == "general:" + form.items[0].key.split(".", 1)[1]


def test_json_export_round_trips(registry):
    form = compose_form(
        MethodDeclaration(("experiment",), ("information-visualization",)), registry
    )
    assert form_from_json(form_to_json(form)) == form


def test_checklist_text_export(registry):
    form = compose_form(MethodDeclaration(), registry)
    text = checklist_to_text(author_checklist(form))
    assert text.startswith(f"checklist {form.form_id}\n")
    assert f"{form.items[0].key} | {form.items[0].category.value} | {form.items[0].text}" in text
