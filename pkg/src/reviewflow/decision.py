"""Venue decision rules: aggregate reviewer statuses, decide, write letters.

The journal table accepts when every essential item is met, justified,
or trivially fixable; invites a revision while every remaining problem
is fixable without repeating data collection; rejects otherwise.  The
single-stage conference table accepts or rejects on the same first gate
and can nominate strong papers.  Free-form reviewer comments travel with
the letter but never touch the verdict.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .agreement import ThresholdPolicy
from .errors import (
    ConfigError,
    ConsensusMismatch,
    DecisionError,
    FormMismatch,
    IncompleteSession,
    UnknownItemKey,
    WrongVenueKind,
)
from .session import Session, SessionState, item_status
from .standards.model import Category
from .trees import STATUS_ORDER, ItemStatus, StatusCode, VenueKind, worst_status

# Statuses that do not block acceptance at either venue kind.
ACCEPTABLE = frozenset(
    {StatusCode.MET, StatusCode.JUSTIFIED_DEVIATION, StatusCode.FIXABLE_MINOR}
)


class Aggregation(Enum):
    WORST_CASE = "worst_case"
    MAJORITY = "majority"


class Outcome(Enum):
    ACCEPT = "accept"
    INVITE_REVISION = "invite_revision"
    REJECT = "reject"


class LetterKind(Enum):
    REVIEW_SUMMARY = "review_summary"
    REVISION_TODO_LIST = "revision_todo_list"
    REJECTION_REASONS = "rejection_reasons"


@dataclass(frozen=True)
class VenueRules:
    venue_kind: VenueKind
    reviewers_required: int = 2
    agreement_policy: ThresholdPolicy = ThresholdPolicy()
    nomination_threshold: int = 3
    aggregation: Aggregation = Aggregation.WORST_CASE

    def __post_init__(self) -> None:
        if self.reviewers_required < 1:
            raise ConfigError("reviewers_required must be at least 1")
        if self.nomination_threshold < 1:
            raise ConfigError("nomination_threshold must be at least 1")


@dataclass(frozen=True)
class ConsensusItem:
    item_key: str
    status: ItemStatus
    per_reviewer: Mapping[str, ItemStatus]
    disputed: bool


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    nominated: bool = False
    basis: tuple[tuple[str, StatusCode], ...] = ()

    def __post_init__(self) -> None:
        if self.nominated and self.outcome is not Outcome.ACCEPT:
            raise DecisionError("only an accepted paper can be nominated")

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "nominated": self.nominated,
            "basis": [
                {"item_key": key, "status": code.value} for key, code in self.basis
            ],
        }


@dataclass(frozen=True)
class LetterEntry:
    item_key: str
    text: str
    status: StatusCode
    note: str = ""


@dataclass(frozen=True)
class DecisionLetter:
    kind: LetterKind
    preamble: str
    entries: tuple[LetterEntry, ...]
    comments: tuple[tuple[str, str], ...] = ()


def aggregate(sessions: Sequence[Session], rules: VenueRules) -> list[ConsensusItem]:
    """One ConsensusItem per essential item across completed sessions."""
    if len(sessions) < rules.reviewers_required:
        raise DecisionError(
            f"{len(sessions)} sessions given, venue requires {rules.reviewers_required}"
        )
    form_ids = {s.form.form_id for s in sessions}
    if len(form_ids) != 1:
        raise FormMismatch("sessions answer different forms: " + ", ".join(sorted(form_ids)))
    reviewer_ids = [s.reviewer_id for s in sessions]
    if len(set(reviewer_ids)) != len(reviewer_ids):
        raise DecisionError("two sessions share a reviewer id")
    open_ids = [s.session_id for s in sessions if s.state is not SessionState.COMPLETE]
    if open_ids:
        raise IncompleteSession("sessions still open: " + ", ".join(open_ids))

    form = sessions[0].form
    out: list[ConsensusItem] = []
    for item in form.essential:
        per: dict[str, ItemStatus] = {}
        for session in sessions:
            status = item_status(session, item.key)
            if status is None:
                raise IncompleteSession(f"{session.session_id} left {item.key} unresolved")
            per[session.reviewer_id] = status
        codes = [status.code for status in per.values()]
        if rules.aggregation is Aggregation.WORST_CASE:
            agg_code = worst_status(codes)
        else:
            counts = Counter(codes)
            top = max(counts.values())
            agg_code = worst_status([c for c in counts if counts[c] == top])
        notes: list[str] = []
        for session in sessions:
            status = per[session.reviewer_id]
            if status.code is agg_code and status.note and status.note not in notes:
                notes.append(status.note)
        out.append(
            ConsensusItem(
                item_key=item.key,
                status=ItemStatus(agg_code, note="\n".join(notes)),
                per_reviewer=per,
                disputed=len(set(codes)) > 1,
            )
        )
    return out


def _blocking(consensus: Sequence[ConsensusItem]) -> list[ConsensusItem]:
    return [c for c in consensus if c.status.code not in ACCEPTABLE]


def decide_journal(
    consensus: Sequence[ConsensusItem], sessions: Sequence[Session], rules: VenueRules
) -> Verdict:
    """Accept / InviteRevision / Reject per the two-gate journal table."""
    if rules.venue_kind is not VenueKind.JOURNAL:
        raise WrongVenueKind("journal decision invoked with conference rules")
    blocking = _blocking(consensus)
    if not blocking:
        return Verdict(outcome=Outcome.ACCEPT)
    basis = tuple((c.item_key, c.status.code) for c in blocking)
    if all(c.status.code is not StatusCode.FATAL for c in blocking):
        return Verdict(outcome=Outcome.INVITE_REVISION, basis=basis)
    return Verdict(outcome=Outcome.REJECT, basis=basis)


def unanimous_present_count(sessions: Sequence[Session]) -> int:
    """Desirable or extraordinary items every reviewer marked present."""
    if not sessions:
        return 0
    form = sessions[0].form
    count = 0
    for item in form.items:
        if item.category is Category.ESSENTIAL:
            continue
        if all(s.desirable_marks.get(item.key) is True for s in sessions):
            count += 1
    return count


def decide_conference(
    consensus: Sequence[ConsensusItem], sessions: Sequence[Session], rules: VenueRules
) -> Verdict:
    """Accept or Reject; accepted papers with enough unanimously present
    desirable attributes are nominated."""
    if rules.venue_kind is not VenueKind.CONFERENCE:
        raise WrongVenueKind("conference decision invoked with journal rules")
    blocking = _blocking(consensus)
    if blocking:
        basis = tuple((c.item_key, c.status.code) for c in blocking)
        return Verdict(outcome=Outcome.REJECT, basis=basis)
    nominated = unanimous_present_count(sessions) >= rules.nomination_threshold
    return Verdict(outcome=Outcome.ACCEPT, nominated=nominated)


def decide(
    consensus: Sequence[ConsensusItem], sessions: Sequence[Session], rules: VenueRules
) -> Verdict:
    if rules.venue_kind is VenueKind.JOURNAL:
        return decide_journal(consensus, sessions, rules)
    return decide_conference(consensus, sessions, rules)


_KIND_FOR_OUTCOME = {
    Outcome.ACCEPT: LetterKind.REVIEW_SUMMARY,
    Outcome.INVITE_REVISION: LetterKind.REVISION_TODO_LIST,
    Outcome.REJECT: LetterKind.REJECTION_REASONS,
}


def _check_consistent(verdict: Verdict, consensus: Sequence[ConsensusItem]) -> None:
    codes = {c.item_key: c.status.code for c in consensus}
    for key, code in verdict.basis:
        if codes.get(key) is not code:
            raise ConsensusMismatch(f"verdict basis does not match consensus on {key!r}")
    blocking = _blocking(consensus)
    if verdict.outcome is Outcome.ACCEPT and blocking:
        raise ConsensusMismatch("verdict accepts but consensus has blocking items")
    if verdict.outcome is Outcome.INVITE_REVISION:
        if not blocking or any(c.status.code is StatusCode.FATAL for c in blocking):
            raise ConsensusMismatch("verdict invites revision against this consensus")
    if verdict.outcome is Outcome.REJECT and not blocking:
        raise ConsensusMismatch("verdict rejects but consensus has no blocking items")


def generate_letter(
    verdict: Verdict, consensus: Sequence[ConsensusItem], sessions: Sequence[Session]
) -> DecisionLetter:
    """Letter content is fully determined by verdict and consensus.

    Reviewer comments ride along verbatim in a separate non-binding
    block; they are never part of the decision basis.
    """
    _check_consistent(verdict, consensus)
    texts: dict[str, str] = {}
    if sessions:
        texts = {item.key: item.text for item in sessions[0].form.items}

    def entry(c: ConsensusItem) -> LetterEntry:
        return LetterEntry(
            item_key=c.item_key,
            text=texts.get(c.item_key, ""),
            status=c.status.code,
            note=c.status.note,
        )

    if verdict.outcome is Outcome.ACCEPT:
        entries = tuple(entry(c) for c in consensus)
        preamble = "The submission meets the venue's essential attribute requirements."
        if verdict.nominated:
            preamble += " It is nominated for distinguished-paper recognition."
    elif verdict.outcome is Outcome.INVITE_REVISION:
        entries = tuple(
            entry(c) for c in consensus if c.status.code is StatusCode.FIXABLE_REVISION
        )
        preamble = (
            "A revision is invited. Completing every item below is sufficient "
            "for acceptance; no re-review will follow."
        )
    else:
        entries = tuple(entry(c) for c in _blocking(consensus))
        preamble = "The submission cannot be accepted. The blocking items are listed below."

    comments = tuple(
        (s.reviewer_id, s.comments) for s in sessions if s.comments.strip()
    )
    return DecisionLetter(
        kind=_KIND_FOR_OUTCOME[verdict.outcome],
        preamble=preamble,
        entries=entries,
        comments=comments,
    )


@dataclass(frozen=True)
class RevisionCheck:
    accepted: bool
    open_keys: tuple[str, ...]


def verify_revision(
    todo: DecisionLetter, checker_marks: Mapping[str, bool]
) -> RevisionCheck:
    """Accept once every to-do entry is marked done; unmarked stays open."""
    if todo.kind is not LetterKind.REVISION_TODO_LIST:
        raise DecisionError(f"revision check over a {todo.kind.value} letter")
    known = {e.item_key for e in todo.entries}
    unknown = sorted(set(checker_marks) - known)
    if unknown:
        raise UnknownItemKey("marks name unknown items: " + ", ".join(unknown))
    open_keys = tuple(
        e.item_key for e in todo.entries if not checker_marks.get(e.item_key, False)
    )
    return RevisionCheck(accepted=not open_keys, open_keys=open_keys)


# -- exports ----------------------------------------------------------------

def letter_to_json(letter: DecisionLetter) -> dict:
    return {
        "kind": letter.kind.value,
        "preamble": letter.preamble,
        "entries": [
            {
                "item_key": e.item_key,
                "text": e.text,
                "status": e.status.value,
                "note": e.note,
            }
            for e in letter.entries
        ],
        "comments": [
            {"reviewer_id": rid, "text": text} for rid, text in letter.comments
        ],
    }


def letter_from_json(doc: dict) -> DecisionLetter:
    return DecisionLetter(
        kind=LetterKind(doc["kind"]),
        preamble=doc["preamble"],
        entries=tuple(
            LetterEntry(
                item_key=e["item_key"],
                text=e["text"],
                status=StatusCode(e["status"]),
                note=e.get("note", ""),
            )
            for e in doc["entries"]
        ),
        comments=tuple((c["reviewer_id"], c["text"]) for c in doc.get("comments", ())),
    )


_LETTER_TITLES = {
    LetterKind.REVIEW_SUMMARY: "Review summary",
    LetterKind.REVISION_TODO_LIST: "Revision to-do list",
    LetterKind.REJECTION_REASONS: "Reasons for rejection",
}


def letter_to_text(letter: DecisionLetter) -> str:
    """Plain-text letter with a stable field order."""
    lines = [_LETTER_TITLES[letter.kind], "", letter.preamble]
    if letter.entries:
        lines.append("")
        for e in letter.entries:
            lines.append(f"- [{e.status.value}] {e.item_key}: {e.text}")
            if e.note:
                for note_line in e.note.splitlines():
                    lines.append(f"    note: {note_line}")
    if letter.comments:
        lines += ["", "Non-binding reviewer comments", ""]
        for reviewer_id, text in letter.comments:
            lines.append(f"-- {reviewer_id} --")
            lines.append(text)
    return "\n".join(lines) + "\n"


def verdict_from_json(doc: dict) -> Verdict:
    return Verdict(
        outcome=Outcome(doc["outcome"]),
        nominated=doc.get("nominated", False),
        basis=tuple(
            (b["item_key"], StatusCode(b["status"])) for b in doc.get("basis", ())
        ),
    )


def consensus_from_json(docs: Sequence[dict]) -> list[ConsensusItem]:
    return [
        ConsensusItem(
            item_key=doc["item_key"],
            status=ItemStatus(StatusCode(doc["status"]), note=doc.get("note", "")),
            per_reviewer={
                rid: ItemStatus(StatusCode(s["status"]), note=s.get("note", ""))
                for rid, s in doc.get("per_reviewer", {}).items()
            },
            disputed=doc["disputed"],
        )
        for doc in docs
    ]


def consensus_to_json(consensus: Sequence[ConsensusItem]) -> list[dict]:
    return [
        {
            "item_key": c.item_key,
            "status": c.status.code.value,
            "note": c.status.note,
            "disputed": c.disputed,
            "per_reviewer": {
                rid: {"status": s.code.value, "note": s.note}
                for rid, s in c.per_reviewer.items()
            },
        }
        for c in consensus
    ]
