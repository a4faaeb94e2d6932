"""
Command-line front door for conley-surf.

Usage:
    python -m conley_surf validate block.json
    python -m conley_surf census block.json
    python -m conley_surf regularize block.json -o regular.json --trace trace.json
    python -m conley_surf classify a.json b.json --json --jobs 4
    python -m conley_surf ring block.json
    python -m conley_surf reverse block.json -o reversed.json
    python -m conley_surf continuation k0.json comps.json --shares-block
    python -m conley_surf generate pants_repeller -o pants.json
    python -m conley_surf generate random --seed 7 -o random.json
    python -m conley_surf schematic block.json -o block.dot

Exit status is 0 on success, 1 on a domain error (error JSON on standard
error) and 2 on a usage error.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, Union

from loguru import logger
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.table import Table

from conley_surf import __version__
from conley_surf.core.config import Settings, get_settings
from conley_surf.core.exceptions import BlockFormatError, ConleySurfError, InvalidBlockError
from conley_surf.core.logger import setup_logging
from conley_surf.models.block import load_block, save_block
from conley_surf.models.conley_schemas import (
    ClassificationReport,
    ComponentSummary,
    ContinuationFile,
    ContinuationReport,
    RingReport,
)
from conley_surf.services.block_service import describe, reverse, section_census, validate
from conley_surf.services.builders import random_block, recipe_names, standard
from conley_surf.services.conley_classifier import classify, ring_report
from conley_surf.services.continuation import check_continuation, require_continuation
from conley_surf.services.regularizer import regularize, regularize_both
from conley_surf.utils.schematic import write_dot


# ============================================================================
# Output Helpers
# ============================================================================

def _emit_json(payload: Union[BaseModel, list[BaseModel]], settings: Settings) -> None:
    indent = settings.report_indent or None
    if isinstance(payload, list):
        text = json.dumps([item.model_dump(mode="json") for item in payload], indent=indent, ensure_ascii=False)
    else:
        text = payload.model_dump_json(indent=indent)
    sys.stdout.write(text + "\n")


def _load_summary_file(path: Path, model: type[BaseModel]) -> Any:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise BlockFormatError(f"Cannot read {path}: {e.strerror}", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise BlockFormatError(f"Malformed JSON in {path}: {e.msg}", path=str(path)) from e
    if model is ContinuationFile and isinstance(data, list):
        data = {"components": data}
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise BlockFormatError(f"Malformed summary file: {where}: {first['msg']}", path=str(path)) from e


def _print_classification(console: Console, report: ClassificationReport) -> None:
    table = Table(title=f"Classification: {report.name}", show_header=True, header_style="bold magenta")
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="green")

    table.add_row("Type", report.dynamics_type.value)
    table.add_row("Case", report.case)
    table.add_row("Conley index", report.index_label)
    table.add_row("Shape", report.shape)
    table.add_row("beta1(K)", str(report.beta1_K))
    table.add_row("u / u_c", f"{report.u} / {report.u_c}")
    table.add_row("Orientable", "yes" if report.orientable else "no")
    table.add_row(
        "Fixed-point index",
        str(report.fp_index),
        style="red" if report.forces_fixed_point else None,
    )
    table.add_row("Non-saddle", "yes" if report.non_saddle else "no")
    table.add_row("Regularization cuts", str(report.regularization_cuts))
    if report.fixed_point_free_classification is not None:
        fpf = report.fixed_point_free_classification
        table.add_row("Fixed-point free", f"{fpf.block_surface}: {', '.join(fpf.admissible)}")
    console.print(table)
    for note in report.notes:
        console.print(f"[yellow]note:[/yellow] {note}")


def _print_ring(console: Console, report: RingReport) -> None:
    ch = report.cohomology
    console.print(f"[bold]{report.name}[/bold]")
    console.print(f"cohomology index: {ch.as_tuple()}")
    console.print(f"intersection form ({report.form.basis_size}x{report.form.basis_size}):")
    for row in report.form.matrix:
        console.print("  " + " ".join(str(x) for x in row))
    console.print(f"rank: {report.form.rank}")
    console.print(f"self-square: {'yes' if report.form.has_self_square else 'no'}")
    console.print(f"type: {report.dynamics_type.value}")
    if report.orientable is not None:
        console.print(f"orientable summand: {'yes' if report.orientable else 'no'}, implied u = {report.implied_u}")
    console.print(f"index: [green]{report.index_label}[/green]")


def _print_continuation(console: Console, report: ContinuationReport) -> None:
    if report.passed:
        console.print("[bold green]✓ consistent continuation[/bold green]")
        return
    table = Table(title="Violated clauses", show_header=True, header_style="bold magenta")
    table.add_column("Clause", style="cyan")
    table.add_column("Message", style="red")
    for violation in report.violations:
        table.add_row(violation.clause, violation.message)
    console.print(table)


# ============================================================================
# Subcommands
# ============================================================================

def cmd_validate(args: argparse.Namespace, console: Console, settings: Settings) -> int:
    b = load_block(args.file)
    report = validate(b)
    if args.json:
        _emit_json(report, settings)
    elif report.valid:
        console.print(f"[bold green]✓[/bold green] '{b.name}' is a valid isolating block")
    else:
        table = Table(title=f"Violations: {b.name}", show_header=True, header_style="bold magenta")
        table.add_column("Code", style="cyan")
        table.add_column("Message", style="red")
        table.add_column("Vertices")
        for violation in report.violations:
            table.add_row(violation.code, violation.message, " ".join(str(v) for v in violation.location))
        console.print(table)
    if not report.valid:
        raise InvalidBlockError(f"Block '{b.name}' is invalid", violations=report.messages())
    return 0


def cmd_census(args: argparse.Namespace, console: Console, settings: Settings) -> int:
    b = load_block(args.file)
    summary = describe(b)
    if args.json:
        _emit_json(summary, settings)
        return 0

    sections = section_census(b).counts()
    table = Table(title=f"Census: {b.name}", show_header=True, header_style="bold magenta")
    table.add_column("Field", style="cyan")
    table.add_column("Value", justify="right", style="green")
    table.add_row("V / E / F", " / ".join(str(x) for x in summary.counts))
    table.add_row("Surface", summary.signature.name)
    table.add_row("beta1(N)", str(summary.census.beta1_N))
    table.add_row("u / u_c", f"{summary.census.u} / {summary.census.u_c}")
    table.add_row("s / s_c", f"{summary.census.s} / {summary.census.s_c}")
    table.add_row(
        "Obstruction",
        str(summary.census.obstruction),
        style="yellow" if summary.census.obstruction else None,
    )
    table.add_row("Corners", " ".join(str(v) for v in summary.corners) or "-")
    table.add_row("Spines", str(summary.spines))
    table.add_row("Initial section", ", ".join(f"{n} {kind}" for kind, n in sections.items() if n) or "-")
    console.print(table)
    for circle in summary.circles:
        console.print(f"  circle {list(circle.vertices)}: {circle.labels}")
    return 0


def cmd_regularize(args: argparse.Namespace, console: Console, settings: Settings) -> int:
    b = load_block(args.file)
    regular, trace = regularize_both(b) if args.both else regularize(b)
    save_block(regular, args.output)
    if args.trace:
        Path(args.trace).write_text(trace.model_dump_json(indent=settings.report_indent or None) + "\n", encoding="utf-8")
    console.print(f"[green]✓[/green] '{b.name}' regularized in {trace.cuts} cut(s) -> {args.output}")
    return 0


def _classify_path(path: str) -> ClassificationReport:
    return classify(load_block(path))


def cmd_classify(args: argparse.Namespace, console: Console, settings: Settings) -> int:
    jobs = args.jobs or settings.jobs
    if jobs > 1 and len(args.files) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_classify_path, args.files))
    else:
        reports = [_classify_path(path) for path in args.files]

    if args.json:
        _emit_json(reports[0] if len(reports) == 1 else list(reports), settings)
    else:
        for report in reports:
            _print_classification(console, report)
    return 0


def cmd_ring(args: argparse.Namespace, console: Console, settings: Settings) -> int:
    report = ring_report(load_block(args.file))
    if args.json:
        _emit_json(report, settings)
    else:
        _print_ring(console, report)
    return 0


def cmd_reverse(args: argparse.Namespace, console: Console, settings: Settings) -> int:
    b = load_block(args.file)
    save_block(reverse(b), args.output)
    console.print(f"[green]✓[/green] reversed '{b.name}' -> {args.output}")
    return 0


def cmd_continuation(args: argparse.Namespace, console: Console, settings: Settings) -> int:
    k0 = _load_summary_file(Path(args.k0), ComponentSummary)
    comps = _load_summary_file(Path(args.components), ContinuationFile).components
    report = check_continuation(k0, comps, shares_block=args.shares_block)
    if args.json:
        _emit_json(report, settings)
    else:
        _print_continuation(console, report)
    if not report.passed:
        require_continuation(k0, comps, shares_block=args.shares_block)
    return 0


def _parse_params(pairs: Sequence[str]) -> dict[str, str]:
    params: dict[str, str] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got '{pair}'")
        params[key] = value
    return params


def cmd_generate(args: argparse.Namespace, console: Console, settings: Settings) -> int:
    if args.name == "random":
        b = random_block(args.seed, args.budget)
    else:
        b = standard(args.name, _parse_params(args.params))
    save_block(b, args.output)
    console.print(f"[green]✓[/green] wrote '{b.name}' ({b.complex.counts[2]} triangles) -> {args.output}")
    return 0


def cmd_schematic(args: argparse.Namespace, console: Console, settings: Settings) -> int:
    b = load_block(args.file)
    write_dot(b, args.output)
    console.print(f"[green]✓[/green] schematic of '{b.name}' -> {args.output}")
    return 0


# ============================================================================
# Parser
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conley-surf",
        description="Conley index toolkit for isolating blocks of surface flows",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, handler: Callable[..., int], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("validate", cmd_validate, "Check every block invariant")
    p.add_argument("file", help="Block file")
    p.add_argument("--json", action="store_true", help="Print the validation report as JSON")

    p = add("census", cmd_census, "Counts, signature, exit census and corners")
    p.add_argument("file", help="Block file")
    p.add_argument("--json", action="store_true", help="Print the block summary as JSON")

    p = add("regularize", cmd_regularize, "Cut along spines until the block is regular")
    p.add_argument("file", help="Block file")
    p.add_argument("-o", "--output", required=True, help="Regular block file to write")
    p.add_argument("--trace", help="Write the surgery trace as JSON")
    p.add_argument("--both", action="store_true", help="Regularize the entrance side as well")

    p = add("classify", cmd_classify, "Classify the Conley index (regularizes first)")
    p.add_argument("files", nargs="+", metavar="FILE", help="Block file(s)")
    p.add_argument("--json", action="store_true", help="Print reports as JSON")
    p.add_argument("--jobs", "-j", type=int, default=None, help="Worker threads for several files")

    p = add("ring", cmd_ring, "Cohomology index, intersection form and ring classification")
    p.add_argument("file", help="Block file")
    p.add_argument("--json", action="store_true", help="Print the ring report as JSON")

    p = add("reverse", cmd_reverse, "Reverse the flow direction of a block")
    p.add_argument("file", help="Block file")
    p.add_argument("-o", "--output", required=True, help="Reversed block file to write")

    p = add("continuation", cmd_continuation, "Check a continuation of K0 to components")
    p.add_argument("k0", help="Component summary of K0")
    p.add_argument("components", help="Component summaries of K_lambda")
    p.add_argument("--shares-block", action="store_true", help="K0 and K_lambda share an isolating block")
    p.add_argument("--json", action="store_true", help="Print the continuation report as JSON")

    p = add("generate", cmd_generate, "Write a standard or random block")
    p.add_argument("name", choices=recipe_names() + ["random"], help="Recipe name, or 'random'")
    p.add_argument("params", nargs="*", metavar="KEY=VALUE", help="Recipe parameters")
    p.add_argument("-o", "--output", required=True, help="Block file to write")
    p.add_argument("--seed", type=int, default=0, help="Seed for 'random'")
    p.add_argument("--budget", type=int, default=None, help="Triangle budget for 'random'")

    p = add("schematic", cmd_schematic, "Write a Graphviz DOT schematic of the boundary")
    p.add_argument("file", help="Block file")
    p.add_argument("-o", "--output", required=True, help="DOT file to write")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "generate":
            _parse_params(args.params)
    except argparse.ArgumentTypeError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{parser.prog}: error: {e}\n")
        return 2
    except SystemExit as e:
        return int(e.code or 0)

    settings = get_settings()
    setup_logging(
        level="DEBUG" if args.verbose else settings.log_level,
        log_file=settings.log_file_path,
        color=settings.color,
    )
    console = Console(no_color=not settings.color, highlight=False)

    try:
        return args.handler(args, console, settings)
    except ConleySurfError as e:
        logger.debug(f"{args.command} failed: {e.code}")
        sys.stderr.write(json.dumps(e.to_dict(), ensure_ascii=False) + "\n")
        return 1
