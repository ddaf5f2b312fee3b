"""HTTP surface over the submission workflow.

Thin translation layer only: request bodies map onto service calls, and
service state maps onto JSON.  No decision logic lives here, so every
client sees byte-identical verdicts and letters.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..composer import MethodDeclaration, form_to_json
from ..decision import letter_to_json, letter_to_text
from ..errors import (
    AwaitingThirdReviewer,
    ChecksFailed,
    DuplicateReviewer,
    DuplicateSubmission,
    ReviewflowError,
    SessionClosed,
    SessionsIncomplete,
    UnknownSession,
    UnknownSubmission,
    UnknownTree,
    VersionConflict,
    WrongState,
)
from ..session import (
    MAX_CAPTURE_LENGTH,
    Session,
    current_prompt,
    item_statuses,
    missing_work,
    revealed_prompts,
    revealed_trail,
)
from .workflow import SubmissionStatus, VenueService

_NOT_FOUND = (UnknownSubmission, UnknownSession, UnknownTree)
_CONFLICT = (
    WrongState,
    DuplicateSubmission,
    DuplicateReviewer,
    SessionsIncomplete,
    AwaitingThirdReviewer,
    VersionConflict,
    SessionClosed,
    ChecksFailed,
)


def _status_for(exc: ReviewflowError) -> int:
    if isinstance(exc, _NOT_FOUND):
        return 404
    if isinstance(exc, _CONFLICT):
        return 409
    return 400


class SubmissionIn(BaseModel):
    title: str
    methods: list[str] = Field(default_factory=list)
    supplements: list[str] = Field(default_factory=list)
    submission_id: str | None = None
    adhoc_items: list[dict] | None = None


class TriageIn(BaseModel):
    triager_id: str
    results: dict[str, bool]
    corrected_methods: list[str] | None = None
    corrected_supplements: list[str] | None = None


class ReviewersIn(BaseModel):
    reviewer_ids: list[str]


class AnswerIn(BaseModel):
    item_key: str
    node_id: str
    value: str
    stamp: str = ""


class MarkIn(BaseModel):
    item_key: str
    present: bool
    stamp: str = ""


class CompleteIn(BaseModel):
    comments: str = ""
    stamp: str = ""


class RevisionCheckIn(BaseModel):
    marks: dict[str, bool]


def session_view(session: Session) -> dict:
    statuses = {}
    for key, status in item_statuses(session).items():
        statuses[key] = (
            None if status is None
            else {"status": status.code.value, "note": status.note}
        )
    prompts = {}
    for item in session.form.essential:
        node = current_prompt(session, item.key)
        if node is not None:
            prompts[item.key] = {
                "node_id": node.node_id,
                "prompt": node.prompt,
                "answer_kind": node.answer_kind.value,
            }
    return {
        "session_id": session.session_id,
        "reviewer_id": session.reviewer_id,
        "venue_kind": session.venue_kind.value,
        "form_id": session.form.form_id,
        "state": session.state.value,
        "revealed": sorted([key, node] for key, node in revealed_prompts(session)),
        "trail": revealed_trail(session),
        "current_prompts": prompts,
        "max_note_length": MAX_CAPTURE_LENGTH,
        "statuses": statuses,
        "marks": {key: bool(value) for key, value in sorted(session.desirable_marks.items())},
        "comments": session.comments,
        "missing": sorted(missing_work(session)),
    }


def create_app(service: VenueService) -> FastAPI:
    app = FastAPI(title="reviewflow venue service")

    @app.exception_handler(ReviewflowError)
    async def _on_error(request: Request, exc: ReviewflowError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": exc.code, "detail": str(exc)},
        )

    @app.post("/submissions", status_code=201)
    def create_submission(body: SubmissionIn):
        declaration = MethodDeclaration(
            method_ids=tuple(body.methods), supplement_ids=tuple(body.supplements)
        )
        submission = service.ingest_submission(
            title=body.title,
            declaration=declaration,
            submission_id=body.submission_id,
            adhoc_items=body.adhoc_items,
        )
        return submission.to_json()

    @app.get("/submissions/{submission_id}")
    def get_submission(submission_id: str):
        return service.submission(submission_id).to_json()

    @app.get("/triage-checks")
    def get_triage_checks():
        return {"checks": list(service.registry.general.initial_checks)}

    @app.get("/submissions/{submission_id}/checklist")
    def get_checklist(submission_id: str):
        checklist = service.checklist(submission_id)
        return {
            "form_id": checklist.form_id,
            "entries": [
                {"key": key, "text": text, "category": category}
                for key, text, category in checklist.entries
            ],
        }

    @app.post("/submissions/{submission_id}/triage")
    def post_triage(submission_id: str, body: TriageIn):
        submission = service.run_triage(
            submission_id,
            triager_id=body.triager_id,
            check_results=body.results,
            corrected_methods=body.corrected_methods,
            corrected_supplements=body.corrected_supplements,
        )
        return submission.to_json()

    @app.post("/submissions/{submission_id}/reviewers", status_code=201)
    def post_reviewers(submission_id: str, body: ReviewersIn):
        status = service.submission(submission_id).status
        if status is SubmissionStatus.AWAITING_THIRD:
            if len(body.reviewer_ids) != 1:
                raise WrongState(status.value, "one additional reviewer")
            session_ids = [service.add_reviewer(submission_id, body.reviewer_ids[0])]
        else:
            session_ids = service.open_reviews(submission_id, body.reviewer_ids)
        return {"session_ids": session_ids}

    @app.get("/forms/{form_id}")
    def get_form(form_id: str):
        return form_to_json(service.form(form_id))

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_view(service.session(session_id))

    @app.post("/sessions/{session_id}/answers")
    def post_answer(session_id: str, body: AnswerIn):
        session = service.answer_in_session(
            session_id, body.item_key, body.node_id, body.value, body.stamp
        )
        return session_view(session)

    @app.post("/sessions/{session_id}/marks")
    def post_mark(session_id: str, body: MarkIn):
        session = service.mark_in_session(
            session_id, body.item_key, body.present, body.stamp
        )
        return session_view(session)

    @app.post("/sessions/{session_id}/complete")
    def post_complete(session_id: str, body: CompleteIn):
        if body.comments:
            service.comment_in_session(session_id, body.comments, body.stamp)
        session = service.complete_in_session(session_id, body.stamp)
        return session_view(session)

    @app.get("/submissions/{submission_id}/agreement")
    def get_agreement(submission_id: str):
        policy = service.rules.agreement_policy
        body = service.agreement_report(submission_id).to_json()
        body["metric"] = policy.metric.value
        body["threshold"] = policy.threshold
        return body

    @app.post("/submissions/{submission_id}/decision")
    def post_decision(submission_id: str):
        verdict = service.finalize_decision(submission_id)
        return verdict.to_json()

    @app.post("/submissions/{submission_id}/revision-check")
    def post_revision_check(submission_id: str, body: RevisionCheckIn):
        check = service.verify_revision_completion(submission_id, body.marks)
        return {
            "accepted": check.accepted,
            "open_keys": list(check.open_keys),
            "status": service.submission(submission_id).status.value,
        }

    @app.get("/submissions/{submission_id}/letter")
    def get_letter(submission_id: str):
        letter = service.letter(submission_id)
        return {
            "verdict": service.verdict(submission_id).to_json(),
            "letter": letter_to_json(letter),
            "text": letter_to_text(letter),
        }

    return app
