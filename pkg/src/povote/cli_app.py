import logging
import sys
from pathlib import Path
from typing import Optional

import click
from click_option_group import MutuallyExclusiveOptionGroup, optgroup

from povote import log
from povote.__about__ import __version__
from povote.axioms import SUITES, AxiomId, CheckConfig, Verdict, check_all, check_suite, literature_seeds
from povote.ballots import GrammarError, ParseError, axiom_report, parse_ballots, parse_rule_spec, serialize_ballots
from povote.ballots import serialize_report
from povote.configmanager import ConfigurationError, axiom_settings, enumeration_bound, load_povote_configuration
from povote.const import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, MAX_M_ENV
from povote.preferences import Profile, ResourceError, Universe, enumerate_partial_orders
from povote.scoring import classify, tabulate

logger = logging.getLogger(__name__)

VERDICT_EXIT_CODES = {Verdict.PASS: EXIT_OK, Verdict.FAIL: EXIT_FAIL, Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}


class PovoteGroup(click.Group):
    """Click group whose commands return their exit code; usage errors exit with 3 instead of 2"""

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            exit_code = super().main(*args, **kwargs)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        sys.exit(exit_code or EXIT_OK)


def _emit(text: str, output: Optional[str]):
    if output:
        logger.debug("Output option set, writing report to %s", output)
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        logger.debug("Sending output to stdout")
        click.echo(text)


def _resolve_rule(spec: str, labels):
    try:
        return parse_rule_spec(spec, labels)
    except (GrammarError, ValueError) as e:
        raise click.BadParameter(str(e), param_hint="--rule") from e


@click.group(cls=PovoteGroup)
@click.option(
    "-c",
    "--config",
    default=None,
    type=click.Path(exists=True, path_type=Path, readable=True, dir_okay=False),
    help="Configuration file to use. If not set, will use ~/.povote/config.toml if it exists.",
)
@click.option("-v", "--verbose", is_flag=True, default=False, help="Enables debugging mode.")
@click.option(
    "-l",
    "--logfile",
    default="./povote.log",
    type=click.Path(file_okay=True, dir_okay=False, path_type=Path, writable=True),
    help="Path of logfile to use. Default is povote.log in current directory",
)
@click.pass_context
@click.version_option(__version__)
def cli_click(ctx: click.Context, config: Optional[Path], verbose: bool, logfile: Path):
    """Voting rules for partial-order ballots and bounded checks of their axioms"""
    ctx.ensure_object(dict)
    log.add_file_handler(logfile)
    logger.info("======= povote New Run ========")
    if verbose:
        log.setLevel(logging.DEBUG)
        logger.debug("Verbose mode enabled")

    config = load_povote_configuration(config)
    try:
        ctx.obj["max_m"] = enumeration_bound(config)
    except ConfigurationError as e:
        raise click.ClickException(str(e)) from e
    ctx.obj["config"] = config


@cli_click.command(name="compute")
@click.option("-r", "--rule", required=True, type=str, help="Rule specification, e.g. uniform-plurality or borda.")
@click.option(
    "-b",
    "--ballots",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Ballot file to evaluate.",
)
@click.option(
    "--scores",
    is_flag=True,
    default=False,
    help="Also report the total score of every alternative, weighted as the rule weighs voters.",
)
@click.option(
    "-o",
    "--output",
    "output",
    default=None,
    type=click.Path(writable=True, dir_okay=False),
    help="Destination file to write output to. If not set, the report is printed to stdout.",
)
def compute(rule: str, ballots: Path, scores: bool, output: Optional[str]):
    """Computes the winners of a rule on a ballot file."""
    try:
        document = parse_ballots(ballots.read_text(encoding="utf-8"))
    except ParseError as e:
        raise click.ClickException(f"{ballots}: {e}") from e

    voting_rule = _resolve_rule(rule, document.universe.labels)
    try:
        winners = voting_rule(document.profile)
    except ValueError as e:
        raise click.ClickException(str(e)) from e

    report = {"rule": voting_rule.name, "winners": winners}
    if scores:
        board = voting_rule.totals(document.profile)
        if board is None:
            logger.warning("Rule %s does not sum a scoring function, no scores reported", voting_rule.name)
        else:
            report["scores"] = dict(zip(document.universe.labels, board.totals))

    _emit(serialize_report(report, document.universe), output)
    return EXIT_OK


@cli_click.command(name="axioms")
@click.option("-r", "--rule", required=True, type=str, help="Rule specification to check.")
@click.option("-m", "--m", "m", default=3, show_default=True, type=click.IntRange(min=3), help="Number of alternatives.")
@optgroup.group("Bounds", help="Limits of the exhaustive search. Defaults come from the [axioms] configuration.")
@optgroup.option("--max-voters", type=click.IntRange(min=1), default=None, help="Largest electorate enumerated.")
@optgroup.option("--domain", type=click.Choice(["all", "linear", "approval"]), default=None, help="Ballot domain.")
@optgroup.option("--kmax", type=click.IntRange(min=0), default=None, help="Largest Continuity bound searched.")
@optgroup.option("--verify-window", type=click.IntRange(min=1), default=None, help="Replications confirming a bound.")
@optgroup.option(
    "--continuity-voters",
    type=click.IntRange(min=1),
    default=None,
    help="Electorate size per side simulated for Continuity of rules without a scoring function.",
)
@optgroup.option("--progress/--no-progress", default=None, help="Show a progress bar per axiom.")
@optgroup.group("Axioms", cls=MutuallyExclusiveOptionGroup, help="What to check. Defaults to every axiom.")
@optgroup.option("-a", "--axiom", type=click.Choice([a.value for a in AxiomId] + ["all"]), default=None)
@optgroup.option("-s", "--suite", type=click.Choice(list(SUITES)), default=None, help="Named characterisation suite.")
@click.option("--seeds/--no-seeds", default=True, show_default=True, help="Try known witnesses before enumerating.")
@click.option(
    "-o",
    "--output",
    "output",
    default=None,
    type=click.Path(writable=True, dir_okay=False),
    help="Destination file to write the report to. If not set, the report is printed to stdout.",
)
@click.pass_context
def axioms(
    ctx: click.Context,
    rule: str,
    m: int,
    max_voters: Optional[int],
    domain: Optional[str],
    kmax: Optional[int],
    verify_window: Optional[int],
    continuity_voters: Optional[int],
    progress: Optional[bool],
    axiom: Optional[str],
    suite: Optional[str],
    seeds: bool,
    output: Optional[str],
):
    """Checks axioms of a rule exhaustively within bounds.

    Exits with 1 if an axiom fails and with 2 if one could not be decided within the bounds."""
    universe = Universe.default(m)
    voting_rule = _resolve_rule(rule, universe.labels)
    try:
        cfg = CheckConfig.from_settings(
            axiom_settings(ctx.obj["config"]),
            m,
            max_voters=max_voters,
            domain=domain,
            k_max=kmax,
            verify_window=verify_window,
            continuity_voters=continuity_voters,
            progress=progress,
            seeds=literature_seeds(m) if seeds else (),
            max_m=ctx.obj["max_m"],
        )
    except ResourceError as e:
        raise click.ClickException(f"{e}; raise it with {MAX_M_ENV} or povote.max_m") from e
    except (TypeError, ValueError) as e:
        raise click.ClickException(f"Invalid bounds: {e}") from e

    if suite:
        results = check_suite(voting_rule, cfg, suite)
    elif axiom and axiom != "all":
        results = check_all(voting_rule, cfg, [AxiomId(axiom)])
    else:
        results = check_all(voting_rule, cfg)

    report = axiom_report(voting_rule, results)
    _emit(serialize_report(report, universe), output)
    return VERDICT_EXIT_CODES[report["verdict"]]


@cli_click.command(name="classify")
@click.option("-r", "--rule", required=True, type=str, help="Positional scoring rule specification.")
@click.option("-m", "--m", "m", default=3, show_default=True, type=click.IntRange(min=1), help="Number of alternatives.")
@click.pass_context
def classify_rule(ctx: click.Context, rule: str, m: int):
    """Decides the plurality-type classes a positional scoring rule belongs to."""
    voting_rule = _resolve_rule(rule, Universe.default(m).labels)
    if voting_rule.scoring is None or not voting_rule.positional:
        raise click.UsageError(f"Rule {voting_rule.name} is not a positional scoring rule")
    try:
        table = tabulate(voting_rule.scoring, m, max_m=ctx.obj["max_m"])
    except ResourceError as e:
        raise click.ClickException(str(e)) from e

    report = {"rule": voting_rule.name, "m": m, "classes": classify(table)}
    _emit(serialize_report(report), None)
    return EXIT_OK


@cli_click.command(name="enumerate")
@click.option("-m", "--m", "m", required=True, type=click.IntRange(min=1), help="Number of alternatives.")
@click.option("--count-only", is_flag=True, default=False, help="Only print the number of partial orders.")
@click.pass_context
def enumerate_orders(ctx: click.Context, m: int, count_only: bool):
    """Lists every strict partial order on m alternatives, one voter per order."""
    try:
        orders = enumerate_partial_orders(m, max_m=ctx.obj["max_m"])
    except ResourceError as e:
        raise click.ClickException(f"{e}; raise it with {MAX_M_ENV} or povote.max_m") from e

    if count_only:
        click.echo(len(orders))
    else:
        click.echo(serialize_ballots(Profile.from_preferences(orders)), nl=False)
    return EXIT_OK


if __name__ == "__main__":
    cli_click()
