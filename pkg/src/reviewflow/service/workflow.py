"""Submission lifecycle built on an append-only event log.

Every mutating operation validates against in-memory state, appends one
event, then applies it through the same transition used during replay.
Events embed the composed form and any named follow-up trees, so a log
replays to the same state without consulting the standards registry.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from ..agreement import (
    AgreementReport,
    AgreementScope,
    RatingsMatrix,
    Recommendation,
    evaluate_threshold,
)
from ..composer import (
    FormItem,
    MethodDeclaration,
    ReviewForm,
    author_checklist,
    compose_form,
    form_from_json,
    form_to_json,
    resolve_standards,
)
from ..decision import (
    ConsensusItem,
    DecisionLetter,
    RevisionCheck,
    VenueRules,
    Verdict,
    aggregate,
    consensus_from_json,
    consensus_to_json,
    decide,
    generate_letter,
    letter_from_json,
    letter_to_json,
    verdict_from_json,
    verify_revision,
)
from ..errors import (
    AwaitingThirdReviewer,
    ChecksFailed,
    DuplicateReviewer,
    DuplicateSubmission,
    ServiceError,
    SessionsIncomplete,
    UnknownSession,
    UnknownSubmission,
    WrongState,
)
from ..session import (
    Session,
    SessionState,
    answer,
    complete_session,
    item_status,
    mark_attribute,
    session_to_log,
    set_comments,
    start_session,
)
from ..standards.model import Category
from ..standards.registry import Registry
from ..textutil import slugify
from ..trees import tree_from_json, tree_to_json
from .store import EventStore


class SubmissionStatus(Enum):
    SUBMITTED = "submitted"
    TRIAGED = "triaged"
    UNDER_REVIEW = "under_review"
    AWAITING_THIRD = "awaiting_third"
    DECIDED = "decided"
    REVISION_INVITED = "revision_invited"
    REVISION_VERIFIED = "revision_verified"


@dataclass(frozen=True)
class Submission:
    submission_id: str
    title: str
    declared_methods: tuple[str, ...]
    declared_supplements: tuple[str, ...]
    status: SubmissionStatus
    adhoc: bool
    form_id: str | None
    session_ids: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "submission_id": self.submission_id,
            "title": self.title,
            "declared_methods": list(self.declared_methods),
            "declared_supplements": list(self.declared_supplements),
            "status": self.status.value,
            "adhoc": self.adhoc,
            "form_id": self.form_id,
            "session_ids": list(self.session_ids),
        }


@dataclass(frozen=True)
class TriageRecord:
    submission_id: str
    triager_id: str
    initial_checks: tuple[tuple[str, bool], ...]
    corrected_methods: tuple[str, ...]
    corrected_supplements: tuple[str, ...]


@dataclass
class _SubState:
    submission_id: str
    title: str
    declared_methods: tuple[str, ...]
    declared_supplements: tuple[str, ...]
    adhoc: bool
    adhoc_items: tuple[dict, ...]
    status: SubmissionStatus = SubmissionStatus.SUBMITTED
    version: int = 0
    form: ReviewForm | None = None
    triage: TriageRecord | None = None
    reviewer_ids: tuple[str, ...] = ()
    session_ids: tuple[str, ...] = ()
    sessions: dict[str, Session] = field(default_factory=dict)
    agreement: dict | None = None
    consensus: list[ConsensusItem] | None = None
    verdict: Verdict | None = None
    letter: DecisionLetter | None = None
    open_todo_keys: tuple[str, ...] = ()


def _adhoc_form(submission_id: str, items: Sequence[dict]) -> ReviewForm:
    form_items: list[FormItem] = []
    seen: set[str] = set()
    for raw in items:
        base = slugify(raw["text"], max_words=6) or "item"
        key_tail, n = base, 1
        while key_tail in seen:
            n += 1
            key_tail = f"{base}-{n}"
        seen.add(key_tail)
        form_items.append(
            FormItem(
                key=f"adhoc.{key_tail}",
                text=raw["text"],
                category=Category(raw["category"]),
                provenance=(("adhoc", key_tail),),
            )
        )
    digest = hashlib.sha256(
        json.dumps(
            [[submission_id]] + [[i.key, i.text, i.category.value] for i in form_items],
            separators=(",", ":"),
        ).encode()
    ).hexdigest()[:12]
    return ReviewForm(
        form_id=f"form-{digest}", items=tuple(form_items), source_standards=()
    )


class VenueService:
    def __init__(self, registry: Registry, rules: VenueRules, store: EventStore) -> None:
        self.registry = registry
        self.rules = rules
        self.store = store
        self._subs: dict[str, _SubState] = {}
        self._sessions: dict[str, str] = {}
        self._forms: dict[str, ReviewForm] = {}
        for submission_id in store.list_ids():
            state: _SubState | None = None
            for event in store.read(submission_id):
                state = self._apply(state, event)
            if state is not None:
                self._register(state)

    # -- lookup -------------------------------------------------------------

    def _register(self, state: _SubState) -> None:
        self._subs[state.submission_id] = state
        if state.form is not None:
            self._forms[state.form.form_id] = state.form
        for session_id in state.session_ids:
            self._sessions[session_id] = state.submission_id

    def _get(self, submission_id: str) -> _SubState:
        state = self._subs.get(submission_id)
        if state is None:
            raise UnknownSubmission(submission_id)
        return state

    def submission(self, submission_id: str) -> Submission:
        state = self._get(submission_id)
        return Submission(
            submission_id=state.submission_id,
            title=state.title,
            declared_methods=state.declared_methods,
            declared_supplements=state.declared_supplements,
            status=state.status,
            adhoc=state.adhoc,
            form_id=state.form.form_id if state.form else None,
            session_ids=tuple(state.session_ids),
        )

    def submission_ids(self) -> list[str]:
        return sorted(self._subs)

    def form(self, form_id: str) -> ReviewForm:
        form = self._forms.get(form_id)
        if form is None:
            raise ServiceError(f"no composed form with id {form_id!r}")
        return form

    def checklist(self, submission_id: str):
        state = self._get(submission_id)
        if state.form is None:
            raise WrongState(state.status.value, "triaged")
        return author_checklist(state.form)

    def session(self, session_id: str) -> Session:
        submission_id = self._sessions.get(session_id)
        if submission_id is None:
            raise UnknownSession(session_id)
        return self._subs[submission_id].sessions[session_id]

    def letter(self, submission_id: str) -> DecisionLetter:
        state = self._get(submission_id)
        if state.letter is None:
            raise WrongState(state.status.value, "decided")
        return state.letter

    def verdict(self, submission_id: str) -> Verdict:
        state = self._get(submission_id)
        if state.verdict is None:
            raise WrongState(state.status.value, "decided")
        return state.verdict

    # -- event plumbing -----------------------------------------------------

    def _commit(self, state: _SubState, event: dict) -> None:
        self.store.append(state.submission_id, state.version, event)
        self._apply(state, event)
        self._register(state)

    def _apply(self, state: _SubState | None, event: dict) -> _SubState:
        record = event["record"]
        if record == "submission.received":
            return _SubState(
                submission_id=event["submission_id"],
                title=event["title"],
                declared_methods=tuple(event["methods"]),
                declared_supplements=tuple(event["supplements"]),
                adhoc=event["adhoc"],
                adhoc_items=tuple(event["adhoc_items"]),
                version=1,
            )
        assert state is not None
        state.version += 1
        if record == "triage.recorded":
            state.triage = TriageRecord(
                submission_id=state.submission_id,
                triager_id=event["triager_id"],
                initial_checks=tuple((t, p) for t, p in event["checks"]),
                corrected_methods=tuple(event["corrected_methods"]),
                corrected_supplements=tuple(event["corrected_supplements"]),
            )
            if event["outcome"] == "passed":
                state.form = form_from_json(event["form"])
                state.status = SubmissionStatus.TRIAGED
        elif record == "reviews.opened":
            trees = {
                tree_id: tree_from_json(doc)
                for tree_id, doc in event["trees"].items()
            }
            state.reviewer_ids = tuple(event["reviewer_ids"])
            state.session_ids = tuple(event["session_ids"])
            for reviewer_id, session_id in zip(state.reviewer_ids, state.session_ids):
                state.sessions[session_id] = start_session(
                    state.form, reviewer_id, self.rules.venue_kind,
                    tree_library=trees, session_id=session_id,
                )
            state.status = SubmissionStatus.UNDER_REVIEW
        elif record == "reviewer.added":
            trees = {
                tree_id: tree_from_json(doc)
                for tree_id, doc in event["trees"].items()
            }
            state.reviewer_ids += (event["reviewer_id"],)
            state.session_ids += (event["session_id"],)
            state.sessions[event["session_id"]] = start_session(
                state.form, event["reviewer_id"], self.rules.venue_kind,
                tree_library=trees, session_id=event["session_id"],
            )
        elif record == "session.answered":
            session = state.sessions[event["session_id"]]
            state.sessions[event["session_id"]] = answer(
                session, event["item_key"], event["node_id"],
                event["value"], event["stamp"],
            )
        elif record == "session.marked":
            session = state.sessions[event["session_id"]]
            state.sessions[event["session_id"]] = mark_attribute(
                session, event["item_key"], event["present"], event["stamp"]
            )
        elif record == "session.commented":
            session = state.sessions[event["session_id"]]
            state.sessions[event["session_id"]] = set_comments(
                session, event["text"], event["stamp"]
            )
        elif record == "session.completed":
            session = state.sessions[event["session_id"]]
            state.sessions[event["session_id"]] = complete_session(
                session, event["stamp"]
            )
        elif record == "escalation.recorded":
            state.agreement = event["agreement"]
            state.status = SubmissionStatus.AWAITING_THIRD
        elif record == "decision.recorded":
            state.agreement = event["agreement"]
            state.consensus = consensus_from_json(event["consensus"])
            state.verdict = verdict_from_json(event["verdict"])
            state.letter = letter_from_json(event["letter"])
            if state.verdict.outcome.value == "invite_revision":
                state.status = SubmissionStatus.REVISION_INVITED
                state.open_todo_keys = tuple(e.item_key for e in state.letter.entries)
            else:
                state.status = SubmissionStatus.DECIDED
        elif record == "revision.checked":
            state.open_todo_keys = tuple(event["open_keys"])
            if event["outcome"] == "verified":
                state.status = SubmissionStatus.REVISION_VERIFIED
        else:
            raise ServiceError(f"unknown event record {record!r}")
        return state

    # -- operations ---------------------------------------------------------

    def ingest_submission(
        self,
        title: str,
        declaration: MethodDeclaration,
        submission_id: str | None = None,
        adhoc_items: Sequence[Mapping] | None = None,
    ) -> Submission:
        if submission_id is None:
            submission_id = f"sub-{len(self._subs) + 1:04d}"
        if submission_id in self._subs or self.store.exists(submission_id):
            raise DuplicateSubmission(f"submission {submission_id!r} already exists")
        adhoc = False
        items = tuple(
            {"text": raw["text"], "category": raw["category"]}
            for raw in (adhoc_items or ())
        )
        try:
            resolve_standards(declaration, self.registry)
        except Exception:
            # Unknown or ill-kinded declarations fall back to reviewer-supplied
            # items; without that fallback the error propagates.
            if not items:
                raise
            adhoc = True
        event = {
            "record": "submission.received",
            "submission_id": submission_id,
            "title": title,
            "methods": list(declaration.method_ids),
            "supplements": list(declaration.supplement_ids),
            "adhoc": adhoc,
            "adhoc_items": list(items),
        }
        state = self._apply(None, event)
        self.store.append(submission_id, 0, event)
        self._register(state)
        return self.submission(submission_id)

    def run_triage(
        self,
        submission_id: str,
        triager_id: str,
        check_results: Mapping[str, bool],
        corrected_methods: Sequence[str] | None = None,
        corrected_supplements: Sequence[str] | None = None,
    ) -> Submission:
        state = self._get(submission_id)
        if state.status is not SubmissionStatus.SUBMITTED:
            raise WrongState(state.status.value, "submitted")
        required = list(self.registry.general.initial_checks)
        missing = [text for text in required if text not in check_results]
        if missing:
            raise ServiceError(
                "triage must answer every initial check; missing: " + "; ".join(missing)
            )
        checks = [[text, bool(check_results[text])] for text in required]
        failed = [text for text, passed in checks if not passed]
        event = {
            "record": "triage.recorded",
            "triager_id": triager_id,
            "checks": checks,
            "corrected_methods": list(corrected_methods or state.declared_methods),
            "corrected_supplements": list(
                corrected_supplements if corrected_supplements is not None
                else state.declared_supplements
            ),
            "outcome": "failed" if failed else "passed",
            "form": None,
        }
        if failed:
            self._commit(state, event)
            raise ChecksFailed(failed)
        if state.adhoc:
            form = _adhoc_form(submission_id, state.adhoc_items)
        else:
            declaration = MethodDeclaration(
                method_ids=tuple(event["corrected_methods"]),
                supplement_ids=tuple(event["corrected_supplements"]),
            )
            form = compose_form(declaration, self.registry)
        event["form"] = form_to_json(form)
        self._commit(state, event)
        return self.submission(submission_id)

    def _tree_payload(self, form: ReviewForm) -> dict:
        payload = {}
        for item in form.items:
            ref = item.followup_tree_ref
            if ref and ref not in payload:
                payload[ref] = tree_to_json(self.registry.tree(ref))
        return payload

    def open_reviews(self, submission_id: str, reviewer_ids: Sequence[str]) -> list[str]:
        state = self._get(submission_id)
        if state.status is not SubmissionStatus.TRIAGED:
            raise WrongState(state.status.value, "triaged")
        reviewer_ids = list(reviewer_ids)
        if len(set(reviewer_ids)) != len(reviewer_ids):
            raise DuplicateReviewer("reviewer listed twice")
        if len(reviewer_ids) != self.rules.reviewers_required:
            raise ServiceError(
                f"venue requires exactly {self.rules.reviewers_required} reviewers "
                f"to open, got {len(reviewer_ids)}"
            )
        session_ids = [f"{submission_id}-{rid}" for rid in reviewer_ids]
        event = {
            "record": "reviews.opened",
            "reviewer_ids": reviewer_ids,
            "session_ids": session_ids,
            "trees": self._tree_payload(state.form),
        }
        self._commit(state, event)
        return session_ids

    def add_reviewer(self, submission_id: str, reviewer_id: str) -> str:
        state = self._get(submission_id)
        if state.status is not SubmissionStatus.AWAITING_THIRD:
            raise WrongState(state.status.value, "awaiting_third")
        if reviewer_id in state.reviewer_ids:
            raise DuplicateReviewer(f"{reviewer_id} already reviews {submission_id}")
        session_id = f"{submission_id}-{reviewer_id}"
        event = {
            "record": "reviewer.added",
            "reviewer_id": reviewer_id,
            "session_id": session_id,
            "trees": self._tree_payload(state.form),
        }
        self._commit(state, event)
        return session_id

    def _session_state(self, session_id: str) -> _SubState:
        submission_id = self._sessions.get(session_id)
        if submission_id is None:
            raise UnknownSession(session_id)
        state = self._subs[submission_id]
        if state.status not in (
            SubmissionStatus.UNDER_REVIEW, SubmissionStatus.AWAITING_THIRD
        ):
            raise WrongState(state.status.value, "under_review")
        return state

    def answer_in_session(
        self, session_id: str, item_key: str, node_id: str, value: str, stamp: str = ""
    ) -> Session:
        state = self._session_state(session_id)
        answer(state.sessions[session_id], item_key, node_id, value, stamp)
        event = {
            "record": "session.answered",
            "session_id": session_id,
            "item_key": item_key,
            "node_id": node_id,
            "value": value,
            "stamp": stamp,
        }
        self._commit(state, event)
        return state.sessions[session_id]

    def mark_in_session(
        self, session_id: str, item_key: str, present: bool, stamp: str = ""
    ) -> Session:
        state = self._session_state(session_id)
        mark_attribute(state.sessions[session_id], item_key, present, stamp)
        event = {
            "record": "session.marked",
            "session_id": session_id,
            "item_key": item_key,
            "present": present,
            "stamp": stamp,
        }
        self._commit(state, event)
        return state.sessions[session_id]

    def comment_in_session(self, session_id: str, text: str, stamp: str = "") -> Session:
        state = self._session_state(session_id)
        set_comments(state.sessions[session_id], text, stamp)
        event = {
            "record": "session.commented",
            "session_id": session_id,
            "text": text,
            "stamp": stamp,
        }
        self._commit(state, event)
        return state.sessions[session_id]

    def complete_in_session(self, session_id: str, stamp: str = "") -> Session:
        state = self._session_state(session_id)
        complete_session(state.sessions[session_id], stamp)
        event = {"record": "session.completed", "session_id": session_id, "stamp": stamp}
        self._commit(state, event)
        return state.sessions[session_id]

    # -- agreement and decision ---------------------------------------------

    def _gate_sessions(self, state: _SubState) -> list[Session]:
        return [
            state.sessions[session_id]
            for session_id in state.session_ids[: self.rules.reviewers_required]
        ]

    def _ratings(self, state: _SubState, sessions: Sequence[Session]) -> RatingsMatrix:
        units = tuple(item.key for item in state.form.essential)
        values: dict[tuple[str, str], str] = {}
        raters = tuple(s.reviewer_id for s in sessions)
        for session in sessions:
            for unit in units:
                if self.rules.agreement_policy.scope is AgreementScope.ESSENTIAL_ROOTS:
                    cell = session.answers.get((unit, "root"))
                else:
                    status = item_status(session, unit)
                    cell = None if status is None else status.code.value
                if cell is not None:
                    values[(session.reviewer_id, unit)] = cell
        return RatingsMatrix(raters=raters, units=units, values=values)

    def agreement_report(self, submission_id: str) -> AgreementReport:
        state = self._get(submission_id)
        if not state.session_ids:
            raise WrongState(state.status.value, "under_review")
        sessions = self._gate_sessions(state)
        return evaluate_threshold(
            self._ratings(state, sessions), self.rules.agreement_policy
        )

    def finalize_decision(self, submission_id: str) -> Verdict:
        state = self._get(submission_id)
        if state.status not in (
            SubmissionStatus.UNDER_REVIEW, SubmissionStatus.AWAITING_THIRD
        ):
            raise WrongState(state.status.value, "under_review")
        sessions = [state.sessions[sid] for sid in state.session_ids]
        still_open = [
            s.session_id for s in sessions if s.state is not SessionState.COMPLETE
        ]
        if still_open:
            raise SessionsIncomplete("sessions still open: " + ", ".join(still_open))
        report: AgreementReport | None = None
        gate = self._gate_sessions(state)
        if len(gate) >= 2 and any(
            item.category is Category.ESSENTIAL for item in state.form.items
        ):
            report = evaluate_threshold(
                self._ratings(state, gate), self.rules.agreement_policy
            )
        escalate = (
            report is not None
            and report.recommendation is Recommendation.RECRUIT_THIRD_REVIEWER
            and len(sessions) == self.rules.reviewers_required
        )
        if escalate:
            if state.status is SubmissionStatus.UNDER_REVIEW:
                event = {
                    "record": "escalation.recorded",
                    "agreement": report.to_json(),
                }
                self._commit(state, event)
            raise AwaitingThirdReviewer(
                f"{submission_id} needs a third reviewer before a verdict"
            )
        consensus = aggregate(sessions, self.rules)
        verdict = decide(consensus, sessions, self.rules)
        letter = generate_letter(verdict, consensus, sessions)
        event = {
            "record": "decision.recorded",
            "agreement": report.to_json() if report else None,
            "consensus": consensus_to_json(consensus),
            "verdict": verdict.to_json(),
            "letter": letter_to_json(letter),
        }
        self._commit(state, event)
        return state.verdict

    def verify_revision_completion(
        self, submission_id: str, checker_marks: Mapping[str, bool]
    ) -> RevisionCheck:
        state = self._get(submission_id)
        if state.status is not SubmissionStatus.REVISION_INVITED:
            raise WrongState(state.status.value, "revision_invited")
        check = verify_revision(state.letter, checker_marks)
        event = {
            "record": "revision.checked",
            "marks": {key: bool(value) for key, value in sorted(checker_marks.items())},
            "outcome": "verified" if check.accepted else "still_open",
            "open_keys": list(check.open_keys),
        }
        self._commit(state, event)
        return check


def state_digest(service: VenueService) -> str:
    """Hash of the full derived state, for replay equality checks."""
    doc = {}
    for submission_id in service.submission_ids():
        state = service._subs[submission_id]
        doc[submission_id] = {
            "title": state.title,
            "declared_methods": list(state.declared_methods),
            "declared_supplements": list(state.declared_supplements),
            "adhoc": state.adhoc,
            "status": state.status.value,
            "version": state.version,
            "form": form_to_json(state.form) if state.form else None,
            "triage": None if state.triage is None else {
                "triager_id": state.triage.triager_id,
                "checks": [list(pair) for pair in state.triage.initial_checks],
                "corrected_methods": list(state.triage.corrected_methods),
                "corrected_supplements": list(state.triage.corrected_supplements),
            },
            "reviewer_ids": list(state.reviewer_ids),
            "sessions": {
                session_id: session_to_log(state.sessions[session_id])
                for session_id in state.session_ids
            },
            "agreement": state.agreement,
            "consensus": None if state.consensus is None
            else consensus_to_json(state.consensus),
            "verdict": None if state.verdict is None else state.verdict.to_json(),
            "letter": None if state.letter is None else letter_to_json(state.letter),
            "open_todo_keys": list(state.open_todo_keys),
        }
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
