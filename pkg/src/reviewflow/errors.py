"""Exception hierarchy shared across the engine.

Every error raised by the library derives from ReviewflowError so callers
(CLI, HTTP layer) can map failures uniformly.  Parse and compose errors
carry enough context to point at the offending document or item.
"""

from __future__ import annotations


class ReviewflowError(Exception):
    """Base class for all library errors."""

    code = "error"


# -- standards parsing ------------------------------------------------------

class ParseError(ReviewflowError):
    code = "parse_error"


class EmptyDocument(ParseError):
    code = "empty_document"


class MissingSection(ParseError):
    code = "missing_section"

    def __init__(self, section: str) -> None:
        super().__init__(f"required section missing: {section!r}")
        self.section = section


class UnknownCategoryHeading(ParseError):
    code = "unknown_category_heading"

    def __init__(self, heading: str) -> None:
        super().__init__(f"unknown attribute category heading: {heading!r}")
        self.heading = heading


class DuplicateItemId(ParseError):
    code = "duplicate_item_id"

    def __init__(self, item_id: str) -> None:
        super().__init__(f"duplicate attribute item id: {item_id!r}")
        self.item_id = item_id


# -- registry / composition -------------------------------------------------

class RegistryError(ReviewflowError):
    code = "registry_error"


class UnknownStandardId(RegistryError):
    code = "unknown_standard_id"

    def __init__(self, standard_id: str) -> None:
        super().__init__(f"no standard with id {standard_id!r}")
        self.standard_id = standard_id


class ComposeError(ReviewflowError):
    code = "compose_error"


class CategoryConflict(ComposeError):
    code = "category_conflict"

    def __init__(self, text: str, categories: tuple[str, str]) -> None:
        super().__init__(
            f"item {text!r} carries conflicting categories across standards: "
            f"{categories[0]} vs {categories[1]}"
        )
        self.text = text
        self.categories = categories


class ItemConflict(ComposeError):
    """Same anchor id used by two standards with different item text."""

    code = "item_conflict"


# -- follow-up trees --------------------------------------------------------

class TreeError(ReviewflowError):
    code = "tree_error"


class UnknownTree(TreeError):
    code = "unknown_tree"

    def __init__(self, tree_id: str) -> None:
        super().__init__(f"no follow-up tree with id {tree_id!r}")
        self.tree_id = tree_id


# -- review sessions --------------------------------------------------------

class SessionError(ReviewflowError):
    code = "session_error"


class NotRevealed(SessionError):
    code = "not_revealed"

    def __init__(self, item_key: str, node_id: str) -> None:
        super().__init__(f"prompt {node_id!r} of item {item_key!r} is not revealed")
        self.item_key = item_key
        self.node_id = node_id


class WrongAnswerKind(SessionError):
    code = "wrong_answer_kind"


class SessionClosed(SessionError):
    code = "session_closed"


class UnknownItem(SessionError):
    code = "unknown_item"

    def __init__(self, item_key: str) -> None:
        super().__init__(f"form has no item {item_key!r}")
        self.item_key = item_key


class WrongCategory(SessionError):
    code = "wrong_category"


class TextTooLong(SessionError):
    code = "text_too_long"


class IncompleteSession(SessionError):
    code = "incomplete_session"


# -- decisions --------------------------------------------------------------

class DecisionError(ReviewflowError):
    code = "decision_error"


class FormMismatch(DecisionError):
    code = "form_mismatch"


class WrongVenueKind(DecisionError):
    code = "wrong_venue_kind"


class ConsensusMismatch(DecisionError):
    code = "consensus_mismatch"


class UnknownItemKey(DecisionError):
    code = "unknown_item_key"


# -- agreement statistics ---------------------------------------------------

class AgreementError(ReviewflowError):
    code = "agreement_error"


class RaterCountUnsupported(AgreementError):
    code = "rater_count_unsupported"


class MissingValues(AgreementError):
    code = "missing_values"


class NoPairableValues(AgreementError):
    code = "no_pairable_values"


# -- venue service ----------------------------------------------------------

class ServiceError(ReviewflowError):
    code = "service_error"


class DuplicateSubmission(ServiceError):
    code = "duplicate_submission"


class UnknownSubmission(ServiceError):
    code = "unknown_submission"

    def __init__(self, submission_id: str) -> None:
        super().__init__(f"no submission {submission_id!r}")
        self.submission_id = submission_id


class UnknownSession(ServiceError):
    code = "unknown_session"

    def __init__(self, session_id: str) -> None:
        super().__init__(f"no session {session_id!r}")
        self.session_id = session_id


class WrongState(ServiceError):
    code = "wrong_state"

    def __init__(self, have: str, need: str) -> None:
        super().__init__(f"submission is {have}, operation requires {need}")
        self.have = have
        self.need = need


class ChecksFailed(ServiceError):
    code = "checks_failed"

    def __init__(self, failed: list[str]) -> None:
        super().__init__("initial checks failed: " + "; ".join(failed))
        self.failed = failed


class DuplicateReviewer(ServiceError):
    code = "duplicate_reviewer"


class SessionsIncomplete(ServiceError):
    code = "sessions_incomplete"


class AwaitingThirdReviewer(ServiceError):
    code = "awaiting_third_reviewer"


class VersionConflict(ServiceError):
    """Optimistic append lost the race; caller should reload and retry."""

    code = "version_conflict"


class ConfigError(ReviewflowError):
    code = "config_error"
