"""Command line interface: batch analysis, terminal chat, and the API server."""

from __future__ import annotations

import sys

import click

from talkcoach.config import load_config
from talkcoach.dialogue import deliver_feedback
from talkcoach.metrics import build_report
from talkcoach.nlu import RemoteInterpreter, RuleBasedInterpreter
from talkcoach.service.session import ConversationSession
from talkcoach.store import UserRegistry
from talkcoach.types import TranscriptFormatError, load_transcript


def _threshold_options(fn):
    options = [
        click.option("--awkward-max", type=int, default=None, help="Awkward-transition limit."),
        click.option("--question-ratio-min", type=float, default=None, help="Minimum question ratio."),
        click.option("--wpm-low", type=float, default=None, help="Lower bound of the pace band."),
        click.option("--wpm-high", type=float, default=None, help="Upper bound of the pace band."),
        click.option("--lsm-min", type=float, default=None, help="Minimum style-matching score."),
        click.option("--tic-min-count", type=int, default=None, help="Minimum repeats to flag a tic."),
        click.option("--tic-min-share", type=float, default=None, help="Minimum token share to flag a tic."),
        click.option(
            "--question-heuristic/--no-question-heuristic",
            default=None,
            help="Also count interrogative openers (for punctuation-free transcripts).",
        ),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@click.group()
def main():
    """Practice small talk and get quantitative feedback on it."""


@main.command()
@click.argument("transcript_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--pretty", is_flag=True, help="Human-readable summary instead of JSON.")
@_threshold_options
def analyze(transcript_file, config_path, pretty, **threshold_overrides):
    """Score a saved transcript file and print the feedback report."""
    cfg = load_config(config_path, **threshold_overrides)
    try:
        transcript = load_transcript(transcript_file)
    except TranscriptFormatError as exc:
        raise click.ClickException(f"{transcript_file}: {exc}") from exc
    report = build_report(transcript, cfg.wordlists, cfg.thresholds)
    if pretty:
        click.echo(deliver_feedback(report, detail=True, thresholds=cfg.thresholds))
    else:
        click.echo(report.to_json())


def _build_interpreter(providers: str):
    if providers == "live":
        try:
            return RemoteInterpreter()
        except RuntimeError as exc:
            raise click.ClickException(str(exc)) from exc
    return RuleBasedInterpreter()


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--store", "store_path", type=click.Path(), default=None, help="Session store directory.")
@click.option("--name", default=None, help="Your name (enables the returning-user greeting).")
@click.option("--providers", type=click.Choice(["stub", "live"]), default=None)
@click.option("--min-turns", type=int, default=None, help="User turns before feedback opens.")
def chat(config_path, store_path, name, providers, min_turns):
    """Have a practice conversation in the terminal."""
    cfg = load_config(
        config_path, store_path=store_path, providers=providers, min_user_turns=min_turns
    )
    interpreter = _build_interpreter(cfg.providers)
    registry = UserRegistry(cfg.store_path)
    session = ConversationSession(
        config=cfg, interpreter=interpreter, registry=registry, name_hint=name
    )
    click.echo(f"bot> {session.greeting}")
    for line in sys.stdin:
        text = line.strip()
        if not text:
            continue
        if text.lower() in {"/quit", "/exit"}:
            break
        outcome = session.turn(text=text)
        click.echo(f"bot> {outcome.bot_text}")
        if outcome.done:
            break
    if session.report is not None:
        click.echo("")
        click.echo("=== feedback report ===")
        click.echo(session.report.to_json())
    else:
        click.echo("(conversation ended before the feedback phase)")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", "-p", default=8077, show_default=True, type=int)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--store", "store_path", type=click.Path(), default=None, help="Session store directory.")
@click.option("--providers", type=click.Choice(["stub", "live"]), default=None)
@click.option("--min-turns", type=int, default=None, help="User turns before feedback opens.")
@click.option("--min-elapsed-ms", type=int, default=None, help="Elapsed ms before feedback opens.")
@click.option("--synthesize/--no-synthesize", default=False, help="Write stub bot audio files.")
def serve(host, port, config_path, store_path, providers, min_turns, min_elapsed_ms, synthesize):
    """Run the HTTP API (used by the web client)."""
    import uvicorn

    from talkcoach.service.app import create_app
    from talkcoach.speech import StubSynthesizer

    cfg = load_config(
        config_path,
        store_path=store_path,
        providers=providers,
        min_user_turns=min_turns,
        min_elapsed_ms=min_elapsed_ms,
    )
    interpreter = _build_interpreter(cfg.providers)
    synthesizer = StubSynthesizer(f"{cfg.store_path}/bot-audio") if synthesize else None
    app = create_app(cfg, interpreter=interpreter, synthesizer=synthesizer)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
