"""One reviewer's pass over a composed form.

The form behaves like a plain checklist until an essential item gets a
"no": only then is the next follow-up prompt revealed, one step per
answer, until a leaf fixes the item's status.  Desirable and
extraordinary items take a bare present/absent mark instead.

Sessions are immutable; every transition returns a new value and appends
to an event history that replays to an identical session.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping

from .composer import FormItem, ReviewForm, form_from_json, form_to_json
from .errors import (
    IncompleteSession,
    NotRevealed,
    SessionClosed,
    SessionError,
    TextTooLong,
    UnknownItem,
    UnknownTree,
    WrongAnswerKind,
    WrongCategory,
)
from .standards.model import Category
from .trees import (
    MAX_CAPTURE_LENGTH,
    AnswerKind,
    FollowUpNode,
    FollowUpTree,
    ItemStatus,
    StatusCode,
    VenueKind,
    default_tree,
    tree_from_json,
    tree_to_json,
)


class SessionState(Enum):
    OPEN = "open"
    COMPLETE = "complete"


@dataclass(frozen=True)
class SessionEvent:
    """One accepted mutation; the ordered history replays the session."""

    action: str  # answer | mark | comments | complete
    item_key: str = ""
    node_id: str = ""
    value: str = ""
    stamp: str = ""


@dataclass(frozen=True)
class Session:
    session_id: str
    reviewer_id: str
    venue_kind: VenueKind
    form: ReviewForm
    trees: Mapping[str, FollowUpTree]  # named follow-up trees the form references
    answers: Mapping[tuple[str, str], str] = field(default_factory=dict)
    desirable_marks: Mapping[str, bool] = field(default_factory=dict)
    comments: str = ""
    state: SessionState = SessionState.OPEN
    history: tuple[SessionEvent, ...] = ()


_DEFAULT_TREES: dict[VenueKind, FollowUpTree] = {}


def _base_tree(session: Session, item: FormItem) -> FollowUpTree:
    if item.followup_tree_ref:
        return session.trees[item.followup_tree_ref]
    cached = _DEFAULT_TREES.get(session.venue_kind)
    if cached is None:
        cached = _DEFAULT_TREES[session.venue_kind] = default_tree(session.venue_kind)
    return cached


def _composite(session: Session, item: FormItem) -> FollowUpTree:
    """The item's full tree: its own yes/no prompt grafted onto the
    follow-up tree, so "yes" resolves to Met without entering it."""
    base = _base_tree(session, item)
    nodes = dict(base.nodes)
    nodes["root"] = FollowUpNode(
        "root", item.text, AnswerKind.YES_NO, {"yes": "met", "no": base.root}
    )
    nodes["met"] = FollowUpNode("met", edges={}, leaf_status=StatusCode.MET)
    return FollowUpTree(base.tree_id, "root", nodes)


def start_session(
    form: ReviewForm,
    reviewer_id: str,
    venue_kind: VenueKind,
    tree_library: Mapping[str, FollowUpTree] | None = None,
    session_id: str | None = None,
) -> Session:
    """Open a session; the root prompt of every essential item is revealed."""
    library = dict(tree_library or {})
    kept: dict[str, FollowUpTree] = {}
    for item in form.essential:
        if item.followup_tree_ref:
            if item.followup_tree_ref not in library:
                raise UnknownTree(item.followup_tree_ref)
            kept[item.followup_tree_ref] = library[item.followup_tree_ref]
    if session_id is None:
        seed = f"{form.form_id}|{reviewer_id}|{venue_kind.value}"
        session_id = "sess-" + hashlib.sha256(seed.encode("utf-8")).hexdigest()[:10]
    return Session(
        session_id=session_id,
        reviewer_id=reviewer_id,
        venue_kind=venue_kind,
        form=form,
        trees=kept,
    )


def _chain(session: Session, item: FormItem) -> tuple[FollowUpTree, list[str]]:
    """Nodes visited from the item root by following recorded answers."""
    tree = _composite(session, item)
    node_id = tree.root
    visited = [node_id]
    while (item.key, node_id) in session.answers:
        node = tree.node(node_id)
        if node.is_leaf:
            break
        value = session.answers[(item.key, node_id)]
        target = (
            node.edges["text"]
            if node.answer_kind is AnswerKind.FREE_TEXT
            else node.edges[value]
        )
        visited.append(target)
        node_id = target
    return tree, visited


def revealed_prompts(session: Session) -> set[tuple[str, str]]:
    """All (item key, node id) prompts currently visible to the reviewer."""
    out: set[tuple[str, str]] = set()
    for item in session.form.essential:
        tree, visited = _chain(session, item)
        out.update((item.key, nid) for nid in visited if not tree.node(nid).is_leaf)
    return out


def revealed_trail(session: Session) -> dict[str, list[dict]]:
    """Per essential item, the visible prompt chain in reveal order.

    Each row carries the node id, prompt text, answer kind, and the recorded
    answer (None while unanswered). Leaves never appear. Clients can render
    a session from this without any knowledge of the follow-up trees."""
    out: dict[str, list[dict]] = {}
    for item in session.form.essential:
        tree, visited = _chain(session, item)
        rows = []
        for node_id in visited:
            node = tree.node(node_id)
            if node.is_leaf:
                continue
            rows.append({
                "node_id": node_id,
                "prompt": node.prompt,
                "answer_kind": node.answer_kind.value,
                "answer": session.answers.get((item.key, node_id)),
            })
        out[item.key] = rows
    return out


def current_prompt(session: Session, item_key: str) -> FollowUpNode | None:
    """The next unanswered prompt for an item, if its path is unresolved."""
    item = _essential_item(session, item_key)
    tree, visited = _chain(session, item)
    last = tree.node(visited[-1])
    if last.is_leaf or (item_key, last.node_id) in session.answers:
        return None
    return last


def _essential_item(session: Session, item_key: str) -> FormItem:
    try:
        item = session.form.item(item_key)
    except KeyError:
        raise UnknownItem(item_key) from None
    if item.category is not Category.ESSENTIAL:
        raise WrongCategory(
            f"item {item_key!r} is {item.category.value}; use a present/absent mark"
        )
    return item


def answer(
    session: Session, item_key: str, node_id: str, value: str, stamp: str = ""
) -> Session:
    """Record one answer and reveal at most one next prompt.

    Re-answering an earlier node purges everything recorded downstream of
    it, so a changed mind cannot leave stale answers behind.
    """
    if session.state is not SessionState.OPEN:
        raise SessionClosed("session is complete")
    item = _essential_item(session, item_key)
    if (item_key, node_id) not in revealed_prompts(session):
        raise NotRevealed(item_key, node_id)

    tree = _composite(session, item)
    node = tree.node(node_id)
    if node.answer_kind is AnswerKind.FREE_TEXT:
        if len(value) > MAX_CAPTURE_LENGTH:
            raise TextTooLong(
                f"free-text answer exceeds {MAX_CAPTURE_LENGTH} characters"
            )
        if not value.strip():
            raise WrongAnswerKind("free-text answer must not be empty")
    elif value not in node.edges:
        raise WrongAnswerKind(
            f"node {node_id!r} accepts {sorted(node.edges)}, got {value!r}"
        )

    answers = dict(session.answers)
    answers[(item_key, node_id)] = value
    trial = replace(session, answers=answers)
    _, visited = _chain(trial, item)
    on_path = set(visited)
    purged = {
        key: val
        for key, val in answers.items()
        if key[0] != item_key or key[1] in on_path
    }
    event = SessionEvent("answer", item_key, node_id, value, stamp)
    return replace(
        session, answers=purged, history=session.history + (event,)
    )


def mark_attribute(
    session: Session, item_key: str, present: bool, stamp: str = ""
) -> Session:
    """Present/absent mark for a desirable or extraordinary item."""
    if session.state is not SessionState.OPEN:
        raise SessionClosed("session is complete")
    try:
        item = session.form.item(item_key)
    except KeyError:
        raise UnknownItem(item_key) from None
    if item.category is Category.ESSENTIAL:
        raise WrongCategory(f"essential item {item_key!r} must be answered, not marked")
    marks = dict(session.desirable_marks)
    marks[item_key] = present
    event = SessionEvent("mark", item_key, value="true" if present else "false", stamp=stamp)
    return replace(session, desirable_marks=marks, history=session.history + (event,))


def set_comments(session: Session, text: str, stamp: str = "") -> Session:
    """Free-form comments; never consulted by the decision engine."""
    if session.state is not SessionState.OPEN:
        raise SessionClosed("session is complete")
    event = SessionEvent("comments", value=text, stamp=stamp)
    return replace(session, comments=text, history=session.history + (event,))


def item_status(session: Session, item_key: str) -> ItemStatus | None:
    """The status the recorded path reaches, or None while unresolved.

    A pure function of the recorded answers; comments and marks cannot
    influence it.
    """
    item = _essential_item(session, item_key)
    tree, visited = _chain(session, item)
    last = tree.node(visited[-1])
    if not last.is_leaf:
        return None
    notes = [
        session.answers[(item_key, nid)]
        for nid in visited
        if tree.node(nid).capture_text and (item_key, nid) in session.answers
    ]
    return ItemStatus(last.leaf_status, note="\n".join(notes))


def item_statuses(session: Session) -> dict[str, ItemStatus | None]:
    return {item.key: item_status(session, item.key) for item in session.form.essential}


def missing_work(session: Session) -> list[str]:
    """Item keys still blocking completion."""
    out = [key for key, status in item_statuses(session).items() if status is None]
    for item in session.form.items:
        if item.category is Category.ESSENTIAL:
            continue
        if item.key not in session.desirable_marks:
            out.append(item.key)
    return out


def complete_session(session: Session, stamp: str = "") -> Session:
    """Close the session once every item is resolved or marked."""
    if session.state is not SessionState.OPEN:
        raise SessionClosed("session is already complete")
    open_items = missing_work(session)
    if open_items:
        raise IncompleteSession("unresolved items: " + ", ".join(open_items))
    event = SessionEvent("complete", stamp=stamp)
    return replace(
        session, state=SessionState.COMPLETE, history=session.history + (event,)
    )


# -- append-only answer log -------------------------------------------------

def session_to_log(session: Session) -> str:
    """JSONL export: one header record, then the event history.

    The header embeds the form and every referenced tree, so a log
    replays with no registry at hand.
    """
    header = {
        "record": "session.started",
        "session_id": session.session_id,
        "reviewer_id": session.reviewer_id,
        "venue_kind": session.venue_kind.value,
        "form": form_to_json(session.form),
        "trees": {tree_id: tree_to_json(t) for tree_id, t in sorted(session.trees.items())},
    }
    lines = [json.dumps(header, sort_keys=True, separators=(",", ":"))]
    for event in session.history:
        record = {
            "record": event.action,
            "item_key": event.item_key,
            "node_id": event.node_id,
            "value": event.value,
            "stamp": event.stamp,
        }
        lines.append(json.dumps(record, sort_keys=True, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def replay_session_log(text: str) -> Session:
    """Rebuild a session by re-applying its event history.

    Every event goes back through the public transitions, so a log that
    violated an invariant fails replay instead of resurrecting bad state.
    """
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise SessionError("empty session log")
    records = []
    for number, line in enumerate(lines, start=1):
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise SessionError(f"session log line {number} is not JSON: {exc}") from exc
    header = records[0]
    if header.get("record") != "session.started":
        raise SessionError("session log must start with a session.started record")
    try:
        form = form_from_json(header["form"])
        library = {tid: tree_from_json(doc) for tid, doc in header.get("trees", {}).items()}
        session = start_session(
            form,
            header["reviewer_id"],
            VenueKind(header["venue_kind"]),
            tree_library=library,
            session_id=header["session_id"],
        )
        for record in records[1:]:
            action = record.get("record")
            stamp = record.get("stamp", "")
            if action == "answer":
                session = answer(
                    session, record["item_key"], record["node_id"], record["value"], stamp
                )
            elif action == "mark":
                session = mark_attribute(
                    session, record["item_key"], record["value"] == "true", stamp
                )
            elif action == "comments":
                session = set_comments(session, record["value"], stamp)
            elif action == "complete":
                session = complete_session(session, stamp)
            else:
                raise SessionError(f"unknown session log record: {action!r}")
    except KeyError as exc:
        raise SessionError(f"session log record is missing field {exc}") from exc
    return session
