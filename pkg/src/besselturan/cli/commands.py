"""
Command-line interface for besselturan: evaluation, certification and grid scans.

Exit codes: 0 when every asserted property holds (and always for exploratory commands), 1 when an
asserted suite has a failing verdict, 2 for usage and domain errors, 3 when an asserted suite has no
failure but some indeterminate verdicts.
"""
import csv
import functools
import io
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import click

from besselturan import __version__
from besselturan.bounds import bounds_scan, equivalence_audit
from besselturan.core import OrderArg, eval_dI, eval_dK, eval_I, eval_JY, eval_K
from besselturan.oracle import certify as certify_sample
from besselturan.oracle import oracle_I, oracle_K, oracle_P
from besselturan.order_props import order_suite
from besselturan.product import CONJECTURE_STEPS, conjecture_scan, eval_P, product_suite
from besselturan.quadrature import integral_suite
from besselturan.turan import TuranLabel, hunt_report, sharpness_checks, turan_scan
from besselturan.utils.config import get_settings
from besselturan.utils.errors import (
    BesselTuranError,
    DomainError,
    EvaluationOverflowError,
    EvaluationUnderflowError,
    GridSyntaxError,
)
from besselturan.utils.grids import linear_grid, parse_grid
from besselturan.utils.report import ScanReport, dump_json
from besselturan.utils.verdicts import Outcome

logger = logging.getLogger("besselturan.cli")

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_INDETERMINATE = 3

GRID_HELP = """
\b
Grid syntax for every --nu / --u option:
  lo:hi:step   linear grid, both ends included
  lo:hi:logN   N points per decade (lo, hi > 0)
  lo:hi        the two endpoints
  a,b,c        explicit values
  x            a single value
"""

# default grids: orders in (-1, 20] in steps of 1/16, arguments in [1e-3, 500] at 32 points per decade
NU_GRID = "-0.9375:20:0.0625"
U_GRID = "0.001:500:log32"
QUICK_NU_GRID = "-0.75:20:0.25"
QUICK_U_GRID = "0.001:500:log4"

TURAN_NU_GRIDS = {
    TuranLabel.T1: NU_GRID,
    TuranLabel.T2: "-20:20:0.0625",
    TuranLabel.T3: NU_GRID,
    TuranLabel.T4: "1.0625:20:0.0625",
    TuranLabel.T5: "0:1:0.0625",
    TuranLabel.T6: "0:3:0.0625",
    TuranLabel.T7: "-1:0:0.0625",
    TuranLabel.PHI: "-20:20:0.0625",
}


class GridParamType(click.ParamType):
    """A click parameter holding a grid in the lo:hi:step syntax."""
    name = "grid"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            return parse_grid(value)
        except GridSyntaxError as exc:
            self.fail(str(exc), param, ctx)


GRID = GridParamType()


@dataclass
class CliState:
    threads: Optional[int]
    output: Optional[str]
    fmt: str


class _CliHandler(logging.StreamHandler):
    """Marks the handler installed by the CLI so repeated invocations replace it."""


def configure_logging(level: str) -> None:
    """Sends besselturan log records to stderr at `level`; stdout only ever carries the report."""
    package_logger = logging.getLogger("besselturan")
    for handler in list(package_logger.handlers):
        if isinstance(handler, _CliHandler):
            package_logger.removeHandler(handler)
    handler = _CliHandler(click.get_text_stream("stderr"))
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    package_logger.addHandler(handler)
    package_logger.setLevel(level)


def reports_errors(func):
    """Maps besselturan exceptions to messages on stderr and the documented exit codes."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (DomainError, GridSyntaxError, EvaluationOverflowError, EvaluationUnderflowError) as exc:
            click.echo(click.style(f"Error: {exc}", fg="red"), err=True)
            sys.exit(EXIT_USAGE)
        except BesselTuranError as exc:
            click.echo(click.style(f"Error: {exc}", fg="red"), err=True)
            sys.exit(EXIT_FAILS)
    return wrapper


def exit_code(reports: Sequence[ScanReport]) -> int:
    """Exit code of a run from its reports; exploratory reports never change it."""
    code = EXIT_OK
    for report in reports:
        if not report.asserted:
            continue
        if report.failures() or report.counterexamples:
            return EXIT_FAILS
        if report.count(Outcome.INDETERMINATE):
            code = EXIT_INDETERMINATE
    return code


def _write(state: CliState, text: str) -> None:
    if state.output:
        Path(state.output).write_text(text, encoding="utf-8")
        logger.info("report written to %s", state.output)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def emit(state: CliState, report: ScanReport, reports: Optional[Sequence[ScanReport]] = None) -> None:
    """Writes the report in the requested format and exits with the code of `reports` (default: report)."""
    report.config.setdefault("version", __version__)
    _write(state, report.to_csv() if state.fmt == "csv" else report.to_json())
    summary = report.to_dict()["summary"]
    logger.info("%s: %d verdicts, %d hold, %d fail, %d indeterminate, min slack %s",
                report.command, summary["verdicts"], summary["holds"], summary["fails"],
                summary["indeterminate"], summary["min_slack"])
    sys.exit(exit_code(reports if reports is not None else [report]))


def _interval(grid: List[float]) -> tuple:
    return (min(grid), max(grid))


@click.group(epilog=GRID_HELP)
@click.version_option(__version__, prog_name="besselturan")
@click.option("--threads", type=click.IntRange(min=1), default=None,
              help="Worker threads for grid scans (default: BESSELTURAN_THREADS or all cores)")
@click.option("--output", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the report to this file instead of standard output")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", help="Report format")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging on stderr")
@click.option("--quiet", is_flag=True, help="Only warnings and errors on stderr")
@click.pass_context
def cli(ctx, threads, output, fmt, verbose, quiet):
    """Evaluate modified Bessel functions and verify their Turan-type inequalities."""
    level = get_settings().log_level.upper()
    if verbose:
        level = "DEBUG"
    elif quiet:
        level = "WARNING"
    configure_logging(level)
    ctx.obj = CliState(threads=threads, output=output, fmt=fmt)


@cli.command("eval")
@click.option("--nu", type=float, required=True, help="Order")
@click.option("--u", type=float, required=True, help="Argument (u > 0)")
@click.option("--kind", type=click.Choice(["I", "K", "dI", "dK", "P", "J", "Y"]), default="I", show_default=True)
@click.option("--scaled", is_flag=True, help="Return e^{-u} I or e^{u} K (I, K, dI, dK only)")
@click.option("--oracle", is_flag=True, help="Also report the extended-precision reference value (I, K, P)")
@click.pass_obj
@reports_errors
def eval_command(state, nu, u, kind, scaled, oracle):
    """Evaluate one function value."""
    p = OrderArg(nu, u)
    warning = None
    if kind in ("J", "Y"):
        j, y = eval_JY(p)
        chosen = j if kind == "J" else y
        value, err = chosen.value, chosen.abs_err_est
    elif kind == "P":
        pv = eval_P(p)
        value, err = pv.p, pv.abs_err
    else:
        evaluator = {"I": eval_I, "K": eval_K, "dI": eval_dI, "dK": eval_dK}[kind]
        fv = evaluator(p, scaled=scaled)
        value, err, warning = fv.value, fv.abs_err_est, fv.warning
    doc = {"command": "eval", "kind": kind, "nu": nu, "u": u, "scaled": scaled, "value": value,
           "abs_err_est": err, "warning": warning, "version": __version__}
    if oracle:
        if kind not in ("I", "K", "P") or scaled:
            raise DomainError("kind", kind, "the oracle covers unscaled I, K and P")
        ref = {"I": oracle_I, "K": oracle_K, "P": oracle_P}[kind](p)
        doc["oracle"] = {"value": str(ref.value), "certified_digits": ref.certified_digits,
                         "rel_diff": ref.rel_diff(value)}
    if state.fmt == "csv":
        buffer = io.StringIO()
        flat = {k: v for k, v in doc.items() if k != "oracle"}
        writer = csv.DictWriter(buffer, fieldnames=list(flat), lineterminator="\r\n")
        writer.writeheader()
        writer.writerow(flat)
        _write(state, buffer.getvalue())
    else:
        _write(state, dump_json(doc))


@cli.command()
@click.option("--points", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--seed", type=int, default=20240601, show_default=True)
@click.pass_obj
@reports_errors
def certify(state, points, seed):
    """Compare the fast evaluators with the oracle on seeded random points."""
    emit(state, certify_sample(points, seed, state.threads))


@cli.command()
@click.option("--nu", "nu_grid", type=GRID, default=NU_GRID, show_default=True)
@click.option("--u", "u_grid", type=GRID, default=U_GRID, show_default=True)
@click.option("--audit/--no-audit", default=True, show_default=True,
              help="Also check that each Turan inequality and its bound forms agree pointwise")
@click.pass_obj
@reports_errors
def bounds(state, nu_grid, u_grid, audit):
    """Sandwich bounds (l1)-(l4), (b1)-(b4) and the equivalence audit."""
    if audit:
        emit(state, equivalence_audit(nu_grid, u_grid, state.threads))
    else:
        emit(state, bounds_scan(nu_grid, u_grid, state.threads))


def _turan_asserted(label: TuranLabel, nu_grid: List[float]) -> bool:
    # (t5)/(t7) are claimed on [0, 1] / [-1, 0] only; (t6) never
    if label is TuranLabel.T6:
        return False
    if label is TuranLabel.T5:
        return all(0.0 <= nu <= 1.0 for nu in nu_grid)
    if label is TuranLabel.T7:
        return all(-1.0 <= nu <= 0.0 for nu in nu_grid)
    return True


@cli.command()
@click.option("--label", type=click.Choice([t.value for t in TuranLabel]), default="t1", show_default=True)
@click.option("--nu", "nu_grid", type=GRID, default=None, help="Order grid (default depends on the label)")
@click.option("--u", "u_grid", type=GRID, default=U_GRID, show_default=True)
@click.option("--sharpness", is_flag=True, help="Add the best-constant limit checks for nu in [0, 5]")
@click.pass_obj
@reports_errors
def turan(state, label, nu_grid, u_grid, sharpness):
    """Verdicts of one Turan inequality on a grid."""
    label = TuranLabel(label)
    if nu_grid is None:
        nu_grid = parse_grid(TURAN_NU_GRIDS[label])
    report = turan_scan(label, nu_grid, u_grid, state.threads, asserted=_turan_asserted(label, nu_grid))
    if not sharpness:
        emit(state, report)
        return
    sharp = sharpness_checks(linear_grid(0.0, 5.0, 0.25))
    merged = ScanReport.merge("turan", [report, sharp], {"label": label.value})
    emit(state, merged, [report, sharp])


@cli.command()
@click.option("--label", type=click.Choice([t.value for t in TuranLabel if t is not TuranLabel.PHI]), required=True)
@click.option("--nu", "nu_grid", type=GRID, required=True, help="Order range lo:hi")
@click.option("--u", "u_grid", type=GRID, required=True, help="Argument range lo:hi")
@click.option("--budget", type=click.IntRange(min=1), default=200_000, show_default=True,
              help="Maximum number of gap evaluations")
@click.pass_obj
@reports_errors
def hunt(state, label, nu_grid, u_grid, budget):
    """Search for points where an inequality fails (exploratory, exit code 0)."""
    emit(state, hunt_report(TuranLabel(label), _interval(nu_grid), _interval(u_grid), budget, state.threads))


@cli.command()
@click.option("--nu", "nu_grid", type=GRID, default="0.25:20:0.25", show_default=True)
@click.option("--u", "u_grid", type=GRID, default="0.1,1,10,100", show_default=True)
@click.option("--n-max", type=click.IntRange(min=2), default=50, show_default=True)
@click.option("--shape-u", "shape_u_grid", type=GRID, default="0.01:10:log8", show_default=True,
              help="Argument grid of the u-shape checks")
@click.pass_obj
@reports_errors
def product(state, nu_grid, u_grid, n_max, shape_u_grid):
    """The product I_nu K_nu: (h1), (h5), (h6), monotonicity and shape in u; (h2) is reported only."""
    emit(state, product_suite(u_grid, nu_grid, n_max, shape_u_grid, state.threads))


@cli.command("order-scan")
@click.option("--nu", "nu_grid", type=GRID, default="0.0625:50:0.0625", show_default=True)
@click.option("--u", "u_grid", type=GRID, default="0.1,1,10,100", show_default=True)
@click.option("--h", type=float, default=0.25, show_default=True, help="Difference step in the order")
@click.option("--max-k", type=click.IntRange(0, 4), default=4, show_default=True)
@click.pass_obj
@reports_errors
def order_scan(state, nu_grid, u_grid, h, max_k):
    """Log-convexity in the order, the sqrt-order Turan inequalities and complete monotonicity."""
    emit(state, order_suite(u_grid, nu_grid, h, max_k, state.threads))


@cli.command("integral-check")
@click.option("--nu", "nu_grid", type=GRID, default="0.5,1,1.5,2,3,5", show_default=True)
@click.option("--u", "u_grid", type=GRID, default="0.1,0.5,1,2,5,10", show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.pass_obj
@reports_errors
def integral_check(state, nu_grid, u_grid, tol):
    """Integral representations checked by exp-sinh quadrature."""
    emit(state, integral_suite(nu_grid, u_grid, tol, state.threads))


@cli.command()
@click.option("--nu", "nu_grid", type=GRID, default="-0.875:20:0.125", show_default=True)
@click.option("--u", "u_grid", type=GRID, default="0.1,1,10", show_default=True)
@click.option("--h", "h_values", type=GRID, default=",".join(str(h) for h in CONJECTURE_STEPS), show_default=True,
              help="Order steps")
@click.pass_obj
@reports_errors
def conjecture(state, nu_grid, u_grid, h_values):
    """Log-convexity of nu -> I_nu K_nu on (-1, inf) (exploratory, exit code 0)."""
    emit(state, conjecture_scan(u_grid, nu_grid, h_values, state.threads))


@cli.command("all")
@click.option("--quick", is_flag=True, help="Coarser grids and 100 certification points")
@click.option("--seed", type=int, default=20240601, show_default=True)
@click.pass_obj
@reports_errors
def run_all(state, quick, seed):
    """Every suite on its default grids, merged into one report."""
    nu_grid = parse_grid(QUICK_NU_GRID if quick else NU_GRID)
    u_grid = parse_grid(QUICK_U_GRID if quick else U_GRID)
    step = 0.25 if quick else 0.0625
    threads = state.threads
    reports = [certify_sample(100 if quick else 1000, seed, threads), equivalence_audit(nu_grid, u_grid, threads)]
    for label in TuranLabel:
        if label is TuranLabel.T6:
            continue
        grid = parse_grid(TURAN_NU_GRIDS[label])
        if quick:
            grid = grid[::4]
        reports.append(turan_scan(label, grid, u_grid, threads, asserted=_turan_asserted(label, grid)))
    reports.append(sharpness_checks(linear_grid(0.0, 5.0, 0.25)))
    budget = 20_000 if quick else 200_000
    reports.append(hunt_report(TuranLabel.T6, (1.5, 3.0), (1.0, 100.0), budget, threads))
    # a witness against (t2) is a failure, not a finding
    no_t2 = hunt_report(TuranLabel.T2, (-5.0, 5.0), (0.01, 100.0), budget, threads)
    no_t2.asserted = True
    reports.append(no_t2)
    reports.append(product_suite([0.1, 1.0, 10.0, 100.0], linear_grid(0.25, 20.0, 0.25 if not quick else 1.0),
                                 50, parse_grid("0.01:10:log8"), threads))
    reports.append(order_suite([0.1, 1.0, 10.0, 100.0], linear_grid(step, 50.0, step if not quick else 1.0),
                               0.25, 4, threads))
    reports.append(integral_suite(parse_grid("0.5,1,1.5,2,3,5"), parse_grid("0.1,0.5,1,2,5,10"), 1e-8, threads))
    reports.append(conjecture_scan([0.1, 1.0, 10.0], linear_grid(-0.875, 20.0, 0.125 if not quick else 0.5),
                                   CONJECTURE_STEPS, threads))
    merged = ScanReport.merge("all", reports, {"quick": quick, "seed": seed})
    emit(state, merged, reports)


if __name__ == "__main__":
    cli()

# Explicitly export the 'cli' group for entry points
__all__ = ["cli", "exit_code"]
