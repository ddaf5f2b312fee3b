"""Shared test helpers.

The document generator below builds random but structurally valid
standard documents from a fixed word pool.  It deliberately reimplements
the id slug rule instead of importing the library's, so a defect there
shows up as a test failure rather than hiding inside the generator.
"""

from __future__ import annotations

import random
import re

WORDS = (
    "reports", "data", "sampling", "participants", "describes", "states",
    "clearly", "method", "analysis", "results", "threats", "validity",
    "measures", "collected", "archival", "protocol", "instrument", "coding",
    "scheme", "raters", "agreement", "effect", "sizes", "intervals",
    "hypotheses", "registered", "materials", "shared", "openly", "justifies",
    "choices", "design", "contrasts", "related", "work", "evidence", "chain",
    "quotations", "themes", "saturation", "context", "selection", "criteria",
    "screening", "synthesis", "figures", "labeled", "axes", "scales",
    "uncertainty", "replication", "package", "scripts", "versioned",
    "deviations", "explained", "limitations", "discussed", "conclusions",
    "follow", "findings", "population", "frame", "response", "rate",
)

TAGS = ("data-analysis", "sampling", "reporting", "ethics", "measurement")

_LIST_TITLES = (
    "General Quality Criteria",
    "Examples of Acceptable Deviations",
    "Antipatterns",
    "Invalid Criticisms",
    "Suggested Readings",
    "Exemplars",
)


def _slug(text: str, max_words: int = 0) -> str:
    words = text.strip().lower().split()
    if max_words > 0:
        words = words[:max_words]
    parts = [re.sub(r"[^a-z0-9]+", "", w) for w in words]
    return "-".join(p for p in parts if p)


def _sentence(rng: random.Random, lo: int, hi: int) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(lo, hi)))


def random_matrix_cells(
    rng: random.Random,
    max_raters: int = 3,
    max_units: int = 12,
    max_categories: int = 5,
    missing_rate: float = 0.0,
) -> tuple[tuple[str, ...], tuple[str, ...], dict[tuple[str, str], str]]:
    """Random (raters, units, cells) with at least one pairable unit."""
    categories = [f"c{i}" for i in range(rng.randint(2, max_categories))]
    while True:
        raters = tuple(f"r{i}" for i in range(rng.randint(2, max_raters)))
        units = tuple(f"u{i}" for i in range(rng.randint(1, max_units)))
        cells: dict[tuple[str, str], str] = {}
        for rater in raters:
            for unit in units:
                if rng.random() >= missing_rate:
                    cells[(rater, unit)] = rng.choice(categories)
        pairable = any(
            sum(1 for rater in raters if (rater, unit) in cells) >= 2 for unit in units
        )
        if pairable:
            return raters, units, cells


def random_document(rng: random.Random) -> str:
    """One random document that parse_standard accepts."""
    kind = rng.choice(("general", "method", "method", "supplement"))
    front = kind != "method" or rng.random() < 0.85
    name = " ".join(w.capitalize() for w in rng.sample(WORDS, rng.randint(2, 4)))

    seen_ids: set[str] = set()
    records: list[tuple[str, str, str | None, tuple[str, ...], str]] = []
    for category, count in (
        ("Essential", rng.randint(1, 4)),
        ("Desirable", rng.randint(0, 3)),
        ("Extraordinary", rng.randint(0, 2)),
    ):
        for _ in range(count):
            for _attempt in range(50):
                text = _sentence(rng, 3, 9)
                anchor = (
                    _slug("-".join(rng.sample(WORDS, 2)))
                    if rng.random() < 0.3
                    else None
                )
                item_id = anchor if anchor else _slug(text, 6)
                if item_id and item_id not in seen_ids:
                    break
            else:
                continue
            seen_ids.add(item_id)
            tags = (
                tuple(sorted(rng.sample(TAGS, rng.randint(1, 2))))
                if rng.random() < 0.25
                else ()
            )
            records.append((category, text, anchor, tags, item_id))

    followups: list[tuple[str, str]] = []
    if front:
        essential_ids = [r[4] for r in records if r[0] == "Essential"]
        if essential_ids and rng.random() < 0.3:
            chosen = rng.sample(essential_ids, min(len(essential_ids), rng.randint(1, 2)))
            followups = [(iid, _slug(rng.choice(WORDS)) + "-tree") for iid in chosen]

    lines: list[str] = []
    if front:
        lines.append("---")
        if rng.random() < 0.7:
            lines.append(f"id: {_slug(name)}")
        lines.append(f"kind: {kind}")
        if rng.random() < 0.6:
            lines.append(
                f"version: {rng.randint(0, 3)}.{rng.randint(0, 9)}.{rng.randint(0, 9)}"
            )
        for iid, tree in followups:
            lines.append(f"followup: {iid}={tree}")
        if kind == "general":
            for _ in range(rng.randint(0, 3)):
                lines.append(f"initial_checks: {_sentence(rng, 3, 6)}")
        lines.append("---")
        lines.append("")
    lines.append(f"# {name}")
    if rng.random() < 0.8:
        lines += ["", _sentence(rng, 6, 14) + "."]
    lines += ["", "## Application", "", _sentence(rng, 5, 12) + "."]

    if records or kind != "supplement":
        lines += ["", "## Specific Attributes"]
        for category in ("Essential", "Desirable", "Extraordinary"):
            rows = [r for r in records if r[0] == category]
            if not rows:
                continue
            lines += ["", f"### {category}"]
            for _, text, anchor, tags, _iid in rows:
                lines.append("")
                if anchor:
                    lines.append(f"<!-- id: {anchor} -->")
                if tags:
                    lines.append(f"<!-- tags: {', '.join(tags)} -->")
                lines.append(f"- [ ] {text}")

    for title in _LIST_TITLES:
        if rng.random() < 0.35:
            lines += ["", f"## {title}", ""]
            lines += [f"- {_sentence(rng, 4, 10)}" for _ in range(rng.randint(1, 3))]
    if rng.random() < 0.4:
        lines += ["", "## Notes", "", _sentence(rng, 6, 12) + "."]
    return "\n".join(lines) + "\n"


# -- session fixtures -------------------------------------------------------

from reviewflow.composer import FormItem, ReviewForm  # noqa: E402
from reviewflow.session import (  # noqa: E402
    Session,
    answer,
    complete_session,
    mark_attribute,
    set_comments,
    start_session,
)
from reviewflow.standards.model import Category  # noqa: E402
from reviewflow.trees import StatusCode, VenueKind  # noqa: E402


def toy_form(n_essential: int, n_desirable: int = 0, n_extraordinary: int = 0) -> ReviewForm:
    items = []
    for i in range(n_essential):
        items.append(
            FormItem(
                key=f"toy.e{i}",
                text=f"does essential thing number {i}",
                category=Category.ESSENTIAL,
                provenance=(("toy", f"e{i}"),),
            )
        )
    for i in range(n_desirable):
        items.append(
            FormItem(
                key=f"toy.d{i}",
                text=f"does desirable thing number {i}",
                category=Category.DESIRABLE,
                provenance=(("toy", f"d{i}"),),
            )
        )
    for i in range(n_extraordinary):
        items.append(
            FormItem(
                key=f"toy.x{i}",
                text=f"does extraordinary thing number {i}",
                category=Category.EXTRAORDINARY,
                provenance=(("toy", f"x{i}"),),
            )
        )
    return ReviewForm(form_id=f"form-toy-{n_essential}-{n_desirable}-{n_extraordinary}",
                      items=tuple(items), source_standards=(("toy", "0.1.0"),))


# Answer sequences that land each status code via the stock follow-up trees.
_JOURNAL_PATHS = {
    StatusCode.MET: (("root", "yes"),),
    StatusCode.JUSTIFIED_DEVIATION: (("root", "no"), ("justified", "yes")),
    StatusCode.FIXABLE_MINOR: (
        ("root", "no"), ("justified", "no"), ("camera_ready", "yes")),
    StatusCode.FIXABLE_REVISION: (
        ("root", "no"), ("justified", "no"), ("camera_ready", "no"),
        ("revisable", "yes"), ("fix_what", None)),
    StatusCode.FATAL: (
        ("root", "no"), ("justified", "no"), ("camera_ready", "no"),
        ("revisable", "no"), ("fatal_why", None)),
}
_CONFERENCE_PATHS = {
    StatusCode.MET: (("root", "yes"),),
    StatusCode.JUSTIFIED_DEVIATION: (("root", "no"), ("justified", "yes")),
    StatusCode.FIXABLE_MINOR: (
        ("root", "no"), ("justified", "no"), ("camera_ready", "yes")),
    StatusCode.FATAL: (
        ("root", "no"), ("justified", "no"), ("camera_ready", "no"),
        ("fatal_why", None)),
}


def drive_to(session: Session, item_key: str, code: StatusCode, note: str = "") -> Session:
    paths = _JOURNAL_PATHS if session.venue_kind is VenueKind.JOURNAL else _CONFERENCE_PATHS
    for node_id, value in paths[code]:
        session = answer(session, item_key, node_id, value if value is not None
                         else (note or f"problem with {item_key}"))
    return session


def completed_session(form, reviewer_id, venue_kind, codes, notes=None,
                      marks=None, comments=""):
    """Session with every essential driven to codes[key] and then completed."""
    session = start_session(form, reviewer_id, venue_kind)
    notes = notes or {}
    for item in form.essential:
        session = drive_to(session, item.key, codes[item.key],
                           notes.get(item.key, ""))
    for item in form.items:
        if item.category is not Category.ESSENTIAL:
            session = mark_attribute(session, item.key,
                                     (marks or {}).get(item.key, False))
    if comments:
        session = set_comments(session, comments)
    return complete_session(session)
