"""Command line front end.

Output on stdout is delimited text (comma separated summary rows or the
pipe separated form listing); --report-dir additionally renders figures
next to a delimited copy of the same numbers.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .agreement import (
    AgreementMetric,
    AgreementScope,
    ThresholdPolicy,
    evaluate_threshold,
    parse_ratings_text,
)
from .composer import (
    MethodDeclaration,
    author_checklist,
    checklist_to_text,
    compose_form,
    form_to_json,
    form_to_text,
)
from .decision import aggregate, decide, generate_letter, letter_to_json, letter_to_text
from .errors import ReviewflowError
from .session import item_statuses, replay_session_log
from .standards.model import validate_registry
from .standards.registry import load_builtin_registry, load_registry
from .service.config import load_venue_rules, resolve_service_config


def _registry(standards_dir: str | None):
    if standards_dir is None:
        return load_builtin_registry()
    return load_registry(standards_dir)


def _declaration(methods: str, supplements: str) -> MethodDeclaration:
    return MethodDeclaration(
        method_ids=tuple(m for m in methods.split(",") if m),
        supplement_ids=tuple(s for s in supplements.split(",") if s),
    )


@click.group()
def main() -> None:
    """Structured review of empirical-standard submissions."""


@main.command()
@click.argument("standards_dir", type=click.Path(exists=True, file_okay=False))
def validate(standards_dir: str) -> None:
    """Check every standard in STANDARDS_DIR against the authoring rules."""
    registry = load_registry(standards_dir)
    findings = validate_registry(registry)
    for finding in findings:
        click.echo(str(finding))
    if findings:
        sys.exit(1)
    click.echo(f"ok: {len(registry.standards)} standards, no findings")


@main.command()
@click.option("--methods", default="", help="Comma separated method standard ids.")
@click.option("--supplements", default="", help="Comma separated supplement ids.")
@click.option("--standards-dir", type=click.Path(exists=True, file_okay=False))
@click.option("--as-json", is_flag=True, help="Emit the form as JSON.")
def compose(methods: str, supplements: str, standards_dir: str | None, as_json: bool) -> None:
    """Compose the deduplicated review form for a method declaration."""
    form = compose_form(_declaration(methods, supplements), _registry(standards_dir))
    if as_json:
        click.echo(json.dumps(form_to_json(form), indent=2))
    else:
        click.echo(form_to_text(form), nl=False)


@main.command()
@click.option("--methods", default="", help="Comma separated method standard ids.")
@click.option("--supplements", default="", help="Comma separated supplement ids.")
@click.option("--standards-dir", type=click.Path(exists=True, file_okay=False))
def checklist(methods: str, supplements: str, standards_dir: str | None) -> None:
    """Print the author-facing checklist for a method declaration."""
    form = compose_form(_declaration(methods, supplements), _registry(standards_dir))
    click.echo(checklist_to_text(author_checklist(form)), nl=False)


@main.group()
def session() -> None:
    """Review session tools."""


@session.command("replay")
@click.argument("log_file", type=click.Path(exists=True, dir_okay=False))
def session_replay(log_file: str) -> None:
    """Rebuild a session from its JSONL log and print its state."""
    rebuilt = replay_session_log(Path(log_file).read_text())
    click.echo(f"session_id,{rebuilt.session_id}")
    click.echo(f"reviewer_id,{rebuilt.reviewer_id}")
    click.echo(f"form_id,{rebuilt.form.form_id}")
    click.echo(f"state,{rebuilt.state.value}")
    for key, status in item_statuses(rebuilt).items():
        if status is None:
            click.echo(f"item,{key},unresolved,")
        else:
            note = status.note.replace("\n", " / ")
            click.echo(f"item,{key},{status.code.value},{note}")


@main.command()
@click.argument("ratings_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--metric", type=click.Choice([m.value for m in AgreementMetric]),
              default="kappa", show_default=True)
@click.option("--threshold", type=float, default=0.6, show_default=True)
@click.option("--report-dir", type=click.Path(file_okay=False),
              help="Also write agreement.csv and agreement.png here.")
def agreement(ratings_file: str, metric: str, threshold: float,
              report_dir: str | None) -> None:
    """Score inter-rater agreement for a delimited ratings matrix."""
    matrix = parse_ratings_text(Path(ratings_file).read_text())
    policy = ThresholdPolicy(
        metric=AgreementMetric(metric),
        threshold=threshold,
        scope=AgreementScope.ESSENTIAL_ROOTS,
    )
    report = evaluate_threshold(matrix, policy)

    def fmt(value):
        return "" if value is None else f"{value:.6f}"

    click.echo("measure,value")
    click.echo(f"percent_agreement,{fmt(report.percent)}")
    click.echo(f"cohen_kappa,{fmt(report.kappa)}")
    click.echo(f"krippendorff_alpha,{fmt(report.alpha)}")
    click.echo(f"degenerate,{'yes' if report.degenerate else 'no'}")
    click.echo(f"threshold,{fmt(threshold)}")
    click.echo(f"recommendation,{report.recommendation.value}")
    if report_dir:
        from .report import write_agreement_report

        paths = write_agreement_report(report, Path(report_dir), threshold=threshold)
        for path in paths:
            click.echo(f"wrote,{path}", err=True)


@main.command("decide")
@click.option("--venue", "rules_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Venue rules file (key = value lines).")
@click.option("--report-dir", type=click.Path(file_okay=False),
              help="Also write decision.csv and decision.png here.")
@click.option("--as-json", is_flag=True, help="Emit verdict and letter as JSON.")
@click.argument("session_logs", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
def decide_cmd(rules_file: str, report_dir: str | None, as_json: bool,
               session_logs: tuple[str, ...]) -> None:
    """Aggregate completed session logs and print verdict plus letter."""
    rules = load_venue_rules(rules_file)
    sessions = [replay_session_log(Path(p).read_text()) for p in session_logs]
    consensus = aggregate(sessions, rules)
    verdict = decide(consensus, sessions, rules)
    letter = generate_letter(verdict, consensus, sessions)
    if as_json:
        click.echo(json.dumps(
            {"verdict": verdict.to_json(), "letter": letter_to_json(letter)}, indent=2))
    else:
        click.echo(f"outcome,{verdict.outcome.value}")
        click.echo(f"nominated,{'yes' if verdict.nominated else 'no'}")
        disputed = sum(1 for item in consensus if item.disputed)
        click.echo(f"disputed_items,{disputed}")
        click.echo("")
        click.echo(letter_to_text(letter), nl=False)
    if report_dir:
        from .report import write_decision_report

        paths = write_decision_report(verdict, consensus, Path(report_dir))
        for path in paths:
            click.echo(f"wrote,{path}", err=True)


@main.command()
@click.option("--store", type=click.Path(file_okay=False),
              help="Event store directory (env REVIEWFLOW_STORE).")
@click.option("--addr", help="host:port to listen on (env REVIEWFLOW_ADDR).")
@click.option("--venue", "rules_file", type=click.Path(exists=True, dir_okay=False),
              help="Venue rules file; defaults to journal rules.")
@click.option("--standards-dir", type=click.Path(exists=True, file_okay=False))
def serve(store: str | None, addr: str | None, rules_file: str | None,
          standards_dir: str | None) -> None:
    """Run the venue HTTP service."""
    import uvicorn

    from .decision import VenueRules
    from .service import EventStore, VenueService
    from .service.api import create_app
    from .trees import VenueKind

    config = resolve_service_config(store=store, addr=addr)
    if rules_file:
        rules = load_venue_rules(rules_file)
    else:
        rules = VenueRules(venue_kind=VenueKind.JOURNAL)
    service = VenueService(_registry(standards_dir), rules, EventStore(config.store_dir))
    app = create_app(service)
    click.echo(f"serving on {config.host}:{config.port} "
               f"(store: {config.store_dir})", err=True)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")


def run() -> None:
    try:
        main(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)
    except ReviewflowError as exc:
        click.echo(f"error ({exc.code}): {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    run()
