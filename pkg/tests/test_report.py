"""Report files: delimited summary plus a rendered figure."""

from __future__ import annotations

import csv

from helpers import completed_session, toy_form
from reviewflow.agreement import (
    AgreementMetric,
    RatingsMatrix,
    ThresholdPolicy,
    evaluate_threshold,
)
from reviewflow.decision import VenueRules, aggregate, decide_journal
from reviewflow.report import write_agreement_report, write_decision_report
from reviewflow.trees import StatusCode, VenueKind

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_agreement_report_files(tmp_path):
    cells = {}
    for unit in range(10):
        cells[("rev-a", f"u{unit}")] = "yes" if unit < 7 else "no"
        cells[("rev-b", f"u{unit}")] = "yes" if unit < 5 else "no"
    matrix = RatingsMatrix(
        raters=("rev-a", "rev-b"),
        units=tuple(f"u{i}" for i in range(10)),
        values=cells,
    )
    policy = ThresholdPolicy(metric=AgreementMetric.COHEN_KAPPA, threshold=0.6)
    report = evaluate_threshold(matrix, policy)
    paths = write_agreement_report(report, tmp_path, threshold=0.6)
    assert [p.name for p in paths] == ["agreement.csv", "agreement.png"]
    with paths[0].open(newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["measure", "value"]
    measures = {row[0]: row[1] for row in rows[1:]}
    assert float(measures["percent_agreement"]) == 0.8
    assert measures["recommendation"] == report.recommendation.value
    assert measures["threshold"] == "0.600000"
    assert paths[1].read_bytes()[:8] == PNG_MAGIC


def test_decision_report_files(tmp_path):
    form = toy_form(3)
    rules = VenueRules(venue_kind=VenueKind.JOURNAL)
    codes_a = {"toy.e0": StatusCode.MET, "toy.e1": StatusCode.FIXABLE_REVISION,
               "toy.e2": StatusCode.MET}
    codes_b = {"toy.e0": StatusCode.MET, "toy.e1": StatusCode.FIXABLE_REVISION,
               "toy.e2": StatusCode.FIXABLE_MINOR}
    sessions = [
        completed_session(form, "rev-a", VenueKind.JOURNAL, codes_a,
                          notes={"toy.e1": "missing scripts"}),
        completed_session(form, "rev-b", VenueKind.JOURNAL, codes_b,
                          notes={"toy.e1": "missing scripts"}),
    ]
    consensus = aggregate(sessions, rules)
    verdict = decide_journal(consensus, sessions, rules)
    paths = write_decision_report(verdict, consensus, tmp_path)
    assert [p.name for p in paths] == ["decision.csv", "decision.png"]
    with paths[0].open(newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["item_key", "status", "disputed", "note"]
    by_key = {row[0]: row for row in rows[1:]}
    assert by_key["toy.e1"][1] == "fixable_revision"
    assert by_key["toy.e1"][3] == "missing scripts"
    assert by_key["toy.e2"][2] == "yes"
    assert by_key["toy.e0"][2] == "no"
    assert paths[1].read_bytes()[:8] == PNG_MAGIC
