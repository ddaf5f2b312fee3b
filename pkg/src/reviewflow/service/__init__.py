"""Submission lifecycle service: event store, workflow, config, HTTP app."""

from .config import (
    ServiceConfig,
    load_venue_rules,
    parse_venue_rules,
    resolve_service_config,
    rules_to_text,
)
from .store import EventStore
from .workflow import Submission, SubmissionStatus, TriageRecord, VenueService, state_digest

__all__ = [
    "EventStore",
    "ServiceConfig",
    "Submission",
    "SubmissionStatus",
    "TriageRecord",
    "VenueService",
    "load_venue_rules",
    "parse_venue_rules",
    "resolve_service_config",
    "rules_to_text",
    "state_digest",
]
