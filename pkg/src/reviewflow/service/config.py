"""Venue rules file format and service runtime settings.

Rules files are plain key = value lines; # starts a comment.  Runtime
settings resolve in order: explicit argument, environment variable,
built-in default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from ..agreement import AgreementMetric, AgreementScope, ThresholdPolicy
from ..decision import Aggregation, VenueRules
from ..errors import ConfigError
from ..trees import VenueKind

STORE_ENV = "REVIEWFLOW_STORE"
ADDR_ENV = "REVIEWFLOW_ADDR"
DEFAULT_STORE = "reviewflow-store"
DEFAULT_ADDR = "127.0.0.1:8800"

_BOOL = {"yes": True, "true": True, "1": True, "no": False, "false": False, "0": False}

_KEYS = {
    "venue_kind",
    "reviewers_required",
    "agreement_metric",
    "agreement_threshold",
    "agreement_scope",
    "degenerate_passes",
    "nomination_threshold",
    "aggregation",
}


def parse_venue_rules(text: str) -> VenueRules:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown setting {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: {key!r} set twice")
        values[key] = value

    if "venue_kind" not in values:
        raise ConfigError("venue_kind is required")

    def enum_value(key: str, enum_cls, default):
        if key not in values:
            return default
        try:
            return enum_cls(values[key])
        except ValueError:
            allowed = ", ".join(member.value for member in enum_cls)
            raise ConfigError(f"{key} must be one of: {allowed}") from None

    def int_value(key: str, default: int) -> int:
        if key not in values:
            return default
        try:
            return int(values[key])
        except ValueError:
            raise ConfigError(f"{key} must be an integer") from None

    kind = enum_value("venue_kind", VenueKind, None)
    metric = enum_value("agreement_metric", AgreementMetric, AgreementMetric.COHEN_KAPPA)
    scope = enum_value(
        "agreement_scope", AgreementScope, AgreementScope.ESSENTIAL_ROOTS
    )
    if "agreement_threshold" in values:
        try:
            threshold = float(values["agreement_threshold"])
        except ValueError:
            raise ConfigError("agreement_threshold must be a number") from None
    else:
        threshold = 0.6
    if "degenerate_passes" in values:
        flag = _BOOL.get(values["degenerate_passes"].lower())
        if flag is None:
            raise ConfigError("degenerate_passes must be yes or no")
    else:
        flag = True
    policy = ThresholdPolicy(
        metric=metric, threshold=threshold, scope=scope, treat_degenerate_as_pass=flag
    )
    return VenueRules(
        venue_kind=kind,
        reviewers_required=int_value("reviewers_required", 2),
        agreement_policy=policy,
        nomination_threshold=int_value("nomination_threshold", 3),
        aggregation=enum_value("aggregation", Aggregation, Aggregation.WORST_CASE),
    )


def load_venue_rules(path: Path | str) -> VenueRules:
    return parse_venue_rules(Path(path).read_text())


def rules_to_text(rules: VenueRules) -> str:
    policy = rules.agreement_policy
    lines = [
        f"venue_kind = {rules.venue_kind.value}",
        f"reviewers_required = {rules.reviewers_required}",
        f"agreement_metric = {policy.metric.value}",
        f"agreement_threshold = {policy.threshold:g}",
        f"agreement_scope = {policy.scope.value}",
        f"degenerate_passes = {'yes' if policy.treat_degenerate_as_pass else 'no'}",
        f"nomination_threshold = {rules.nomination_threshold}",
        f"aggregation = {rules.aggregation.value}",
    ]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ServiceConfig:
    store_dir: Path
    host: str
    port: int


def resolve_service_config(
    store: str | None = None, addr: str | None = None
) -> ServiceConfig:
    store_value = store or os.environ.get(STORE_ENV) or DEFAULT_STORE
    addr_value = addr or os.environ.get(ADDR_ENV) or DEFAULT_ADDR
    host, _, port_text = addr_value.rpartition(":")
    if not host or not port_text.isdigit():
        raise ConfigError(f"address must look like host:port, got {addr_value!r}")
    return ServiceConfig(store_dir=Path(store_value), host=host, port=int(port_text))
