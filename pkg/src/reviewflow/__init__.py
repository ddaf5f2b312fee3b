"""Structured peer-review engine.

Parses empirical-standard documents, composes deduplicated review forms,
runs dynamic reviewer sessions with follow-up decision trees, computes
inter-rater agreement, and turns reviewers' answers into venue verdicts
and decision letters.
"""

__version__ = "0.1.0"
