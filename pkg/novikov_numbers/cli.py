import csv
import functools
import io
import json
from pathlib import Path
from typing import Dict, List, Sequence

import click
import numpy as np
import pandas as pd
from pydantic import ValidationError
from tqdm import tqdm

from . import corpus
from .config import (
    DEFAULT_EPSILON,
    DEFAULT_FORMAT,
    DEFAULT_LOG_LEVEL,
    DEFAULT_ORDER,
    DEFAULT_PRIME,
    DEFAULT_SEED,
    DEFAULT_STRATEGY,
    DEFAULT_TRIALS,
    RunConfig,
)
from .documents import (
    ComplexDocument,
    Document,
    FamilyDocument,
    MorseDocument,
    dump_document,
    load_document,
    to_complex,
    to_family,
    to_morse,
)
from .errors import (
    EXIT_INCONCLUSIVE,
    EXIT_INTERNAL,
    EXIT_NEGATIVE,
    FiberDimensionMismatchError,
    MalformedInputError,
    NovikovError,
)
from .hodge import INCONCLUSIVE, MISMATCH, compare_kernels, evaluate_complex, spectrum_report
from .log import get_logger, set_level
from .morse_bott import (
    check_main_theorem,
    check_strong_inequalities,
    check_weak_inequalities,
    euler_poincare_check,
    euler_poincare_sum,
    morse_polynomial,
    novikov_polynomial,
)
from .spectral import first_differential_check, limit_page, linearize
from .twisted import (
    TwistedComplex,
    euler_characteristic,
    jump_scan,
    normalize_dims,
    novikov_numbers,
    novikov_report,
)

logger = get_logger(__name__)

CSV_HEADER = ("s", "degree", "index", "eigenvalue")


# === Helpers ===
def reports_errors(fn):
    """Log errors and leave with an exit code instead of a traceback."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NovikovError as e:
            logger.error(str(e))
            click.get_current_context().exit(e.exit_code)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except Exception as e:
            logger.error(f"Unexpected {type(e).__name__}: {e}")
            logger.debug("traceback", exc_info=True)
            click.get_current_context().exit(EXIT_INTERNAL)

    return wrapper


def _load(document: str) -> Document:
    """A path to a JSON document, or the name of a bundled example."""
    if Path(document).is_file():
        return load_document(document)
    if document in corpus.CORPUS:
        return corpus.load(document)
    raise MalformedInputError(
        f"'{document}' is neither a file nor a bundled example ({', '.join(corpus.names())})"
    )


def _complex_document(document: str) -> ComplexDocument:
    doc = _load(document)
    if not isinstance(doc, ComplexDocument):
        raise MalformedInputError(f"'{document}' is a {doc.kind} document, expected a complex")
    return doc


def _parse_point(text: str) -> List[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _fmt(values: Sequence) -> List[str]:
    return [str(v) for v in values]


def _matrix(m) -> List[List[str]]:
    return [[str(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def _emit(ctx: click.Context, text: str) -> None:
    out = ctx.obj["out"]
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"wrote {out}")
    else:
        click.echo(text)


def _render(ctx: click.Context, payload: Dict, frame: pd.DataFrame, lines: Sequence[str] = ()) -> None:
    fmt = ctx.obj["config"].output_format
    if fmt == "json":
        _emit(ctx, json.dumps(payload, indent=2, sort_keys=True))
    elif fmt == "csv":
        _emit(ctx, frame.to_csv(index=False).rstrip("\n"))
    else:
        body = frame.to_string(index=False) if len(frame) else "(empty)"
        _emit(ctx, "\n".join([body, *lines]))


# === CLI ===
@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True, help="Seed for every random draw.")
@click.option("--strategy", type=click.Choice(["randomized", "exact"]), default=DEFAULT_STRATEGY, show_default=True)
@click.option("--prime", type=int, default=DEFAULT_PRIME, show_default=True, help="Prime for randomized ranks.")
@click.option("--trials", type=int, default=DEFAULT_TRIALS, show_default=True)
@click.option("--epsilon", type=float, default=DEFAULT_EPSILON, show_default=True, help="Kernel threshold.")
@click.option("--order", type=int, default=DEFAULT_ORDER, show_default=True, help="Truncation order K.")
@click.option("--format", "output_format", type=click.Choice(["table", "json", "csv"]), default=DEFAULT_FORMAT, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write output to a file.")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False), default=DEFAULT_LOG_LEVEL, show_default=True)
@click.pass_context
def cli(ctx, seed, strategy, prime, trials, epsilon, order, output_format, out, log_level):
    """Novikov numbers, Morse-Bott certificates, deformation spectral sequences and Laplacian spectra."""
    try:
        config = RunConfig(
            seed=seed,
            strategy=strategy,
            prime=prime,
            trials=trials,
            epsilon=epsilon,
            order=order,
            output_format=output_format,
            log_level=log_level.upper(),
        )
    except ValidationError as e:
        raise click.UsageError(e.errors()[0]["msg"])
    set_level(config.log_level)
    ctx.obj = {"config": config, "out": out}


@cli.command()
@click.argument("document")
@click.pass_context
@reports_errors
def novikov(ctx, document):
    """Novikov numbers of a complex (file or bundled example name)."""
    config = ctx.obj["config"]
    c = to_complex(_complex_document(document))
    report = novikov_report(c, config.rank_strategy())
    outgoing = list(report.ranks) + [0]
    payload = {
        "name": report.name,
        "betti": list(report.betti),
        "field_betti": _fmt(report.field_betti),
        "field_degree": report.field_degree,
        "ranks": list(report.ranks),
        "cochain_ranks": list(c.cochain_ranks),
        "euler_characteristic": report.euler_characteristic,
        "strategy": report.strategy,
        "failure_probability": report.failure_probability,
    }
    frame = pd.DataFrame(
        {
            "degree": list(range(c.top_degree + 1)),
            "cochain_rank": list(c.cochain_ranks),
            "rank_D": outgoing,
            "beta": list(report.betti),
            "beta/field_degree": _fmt(report.field_betti),
        }
    )
    _render(
        ctx,
        payload,
        frame,
        [
            f"euler characteristic: {report.euler_characteristic}",
            f"strategy: {report.strategy}",
            f"failure probability <= {report.failure_probability:.3e}",
        ],
    )


@cli.command()
@click.argument("morse")
@click.argument("complex_document", required=False)
@click.option("--betti", default=None, help="Comma separated Betti numbers instead of a complex.")
@click.pass_context
@reports_errors
def check(ctx, morse, complex_document, betti):
    """Certify M - N = (1 + lambda) Q with Q >= 0, strong inequalities and Euler-Poincare."""
    config = ctx.obj["config"]
    doc = _load(morse)
    if not isinstance(doc, MorseDocument):
        raise MalformedInputError(f"'{morse}' is a {doc.kind} document, expected Morse data")
    md = to_morse(doc)
    if complex_document:
        c = to_complex(_complex_document(complex_document))
        if c.fiber_dim != md.fiber_dim:
            raise FiberDimensionMismatchError(morse_fiber_dim=md.fiber_dim, complex_fiber_dim=c.fiber_dim)
        numbers = list(novikov_report(c, config.rank_strategy()).betti)
        chi_d = euler_characteristic(c)
    elif betti is not None:
        try:
            numbers = [int(b) for b in _parse_point(betti)]
        except ValueError:
            raise MalformedInputError(f"cannot parse Betti numbers {betti!r}", "--betti")
        chi_d = novikov_polynomial(numbers)(-1)
    else:
        raise MalformedInputError("check needs a complex document or --betti")

    M = morse_polynomial(md)
    N = novikov_polynomial(numbers)
    cert = check_main_theorem(M, N)
    strong = check_strong_inequalities(M.coefficients, numbers, 1)
    weak = check_weak_inequalities(M.coefficients, numbers, 1)
    ep = euler_poincare_check(md, chi_d)
    holds = cert.holds and ep and all(strong)
    payload = {
        "morse_polynomial": str(M),
        "novikov_polynomial": str(N),
        "quotient": str(cert.quotient),
        "quotient_coefficients": list(cert.quotient.coefficients),
        "remainder": cert.remainder,
        "factorization_holds": cert.holds,
        "strong_inequalities": list(strong),
        "weak_inequalities": list(weak),
        "morse_at_minus_one": M(-1),
        "novikov_at_minus_one": N(-1),
        "fiber_dim_times_chi": chi_d,
        "euler_poincare_sum": euler_poincare_sum(md),
        "euler_poincare_holds": ep,
        "holds": holds,
    }
    n = len(strong)
    frame = pd.DataFrame(
        {
            "degree": list(range(n)),
            "M": [M.coefficient(p) for p in range(n)],
            "beta": [numbers[p] if p < len(numbers) else 0 for p in range(n)],
            "Q": [cert.quotient.coefficient(p) for p in range(n)],
            "strong": list(strong),
            "weak": list(weak),
        }
    )
    _render(
        ctx,
        payload,
        frame,
        [
            f"M(lambda) = {M}",
            f"N(lambda) = {N}",
            f"Q(lambda) = {cert.quotient}, remainder {cert.remainder}, holds: {cert.holds}",
            f"M(-1) = {M(-1)}, N(-1) = {N(-1)}, d*chi(M) = {chi_d}, Euler-Poincare: {ep}",
        ],
    )
    if not holds:
        ctx.exit(EXIT_NEGATIVE)


@cli.command()
@click.argument("document")
@click.option("--r-max", type=int, default=None, help="Last page to compute.")
@click.option("--point", default=None, help="Rational point to linearize a complex at, e.g. 1 or 1,2.")
@click.option("--direction", default=None, help="Direction of the linearization (default all ones).")
@click.pass_context
@reports_errors
def ss(ctx, document, r_max, point, direction):
    """Pages of the deformation spectral sequence of a family (or of a linearized complex)."""
    config = ctx.obj["config"]
    doc = _load(document)
    background = None
    if isinstance(doc, FamilyDocument):
        family = to_family(doc)
    elif isinstance(doc, ComplexDocument):
        if point is None:
            raise MalformedInputError("linearizing a complex needs --point", "--point")
        c = to_complex(doc)
        family = linearize(
            c, _parse_point(point), _parse_point(direction) if direction else None, config.order
        )
        background = list(novikov_report(c, config.rank_strategy()).betti)
    else:
        raise MalformedInputError(f"'{document}' is a {doc.kind} document, expected a family or complex")

    result = limit_page(family, r_max)
    d1_matches = (
        first_differential_check(family) if family.exact or family.order >= 1 else None
    )
    payload = {
        "name": family.name,
        "exact_family": family.exact,
        "order": family.order,
        "pages": [
            {"r": pg.r, "dims": list(pg.dims), "differentials": [_matrix(d) for d in pg.differentials]}
            for pg in result.pages
        ],
        "limit": list(result.dims),
        "stabilized": result.stabilized,
        "stable_from": result.stable_from,
        "first_differential_matches": d1_matches,
    }
    if background is not None:
        payload["background"] = background
    frame = pd.DataFrame(
        [{"r": pg.r, **{f"E^{p}": dim for p, dim in enumerate(pg.dims)}} for pg in result.pages]
    )
    lines = []
    if result.pages:
        lines.append(f"d_1: {[_matrix(d) for d in result.pages[0].differentials]}")
    lines.append(f"limit: {tuple(result.dims)}, stabilized: {result.stabilized} (from page {result.stable_from})")
    if background is not None:
        lines.append(f"background: {tuple(background)}")
    _render(ctx, payload, frame, lines)
    if not result.stabilized:
        ctx.exit(EXIT_INCONCLUSIVE)


def _jump_payload(c: TwistedComplex, points: List[List[str]], config: RunConfig):
    report = jump_scan(c, points, config.rank_strategy())
    rows = [
        {
            "point": ",".join(_fmt(probe.point)),
            **{f"dim^{p}": dim for p, dim in enumerate(probe.dims)},
            **{f"dim^{p}/k": str(v) for p, v in enumerate(normalize_dims(probe.dims, report.field_degree))},
            "jump": probe.is_jump,
        }
        for probe in report.probes
    ]
    payload = {
        "background": list(report.background),
        "field_degree": report.field_degree,
        "probes": [
            {"point": _fmt(probe.point), "dims": list(probe.dims), "jumps": list(probe.jumps)}
            for probe in report.probes
        ],
        "jump_points": [_fmt(point) for point in report.jump_points],
    }
    lines = [f"background: {report.background}", f"field degree: {report.field_degree}"]
    return payload, pd.DataFrame(rows), lines


@cli.command()
@click.argument("document")
@click.option("--probe", "probes", multiple=True, help="Rational point, e.g. 2 or 1,1/2 (repeatable).")
@click.pass_context
@reports_errors
def jumps(ctx, document, probes):
    """Twisted dimensions at rational probes against the background."""
    doc = _complex_document(document)
    points = [_parse_point(p) for p in probes] or [list(p) for p in doc.probes]
    payload, frame, lines = _jump_payload(to_complex(doc), points, ctx.obj["config"])
    _render(ctx, payload, frame, lines)


def _spectrum_csv(rows: List[tuple]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s, degree, index, value in rows:
        writer.writerow([format(s, ".17g"), degree, index, format(value, ".17g")])
    return buffer.getvalue().rstrip("\n")


@cli.command()
@click.argument("document")
@click.option("--s", "s_values", type=float, multiple=True, help="Deformation parameter s = t * alpha (repeatable).")
@click.option("--random-s", type=int, default=0, help="Number of seeded random parameters to add.")
@click.option("--s-range", nargs=2, type=float, default=(0.3, 3.0), show_default=True)
@click.option("--probe", "probes", multiple=True, help="Rational probe mode instead of numeric spectra.")
@click.pass_context
@reports_errors
def spectrum(ctx, document, s_values, random_s, s_range, probes):
    """Deformed Laplacian spectra along the twisting curve, compared with exact ranks."""
    config = ctx.obj["config"]
    c = to_complex(_complex_document(document))
    if probes:
        payload, frame, lines = _jump_payload(c, [_parse_point(p) for p in probes], config)
        _render(ctx, payload, frame, lines)
        return

    rng = np.random.default_rng(config.seed)
    values = [float(s) for s in s_values]
    if random_s:
        values += [float(s) for s in rng.uniform(s_range[0], s_range[1], size=random_s)]
    background = novikov_numbers(c, config.rank_strategy()) if values else ()
    rows = []
    cells = []
    for s in tqdm(values, desc="Sweeping s", disable=None, leave=False):
        report = spectrum_report(evaluate_complex(c, s), config.epsilon)
        for spectrum_p in report.degrees:
            rows.extend((s, spectrum_p.degree, i, v) for i, v in enumerate(spectrum_p.eigenvalues))
        cells.extend(compare_kernels(s, report, background))

    if config.output_format == "csv":
        _emit(ctx, _spectrum_csv(rows))
    else:
        payload = {
            "name": c.name,
            "epsilon": config.epsilon,
            "eigenvalues": [
                {"s": format(s, ".17g"), "degree": d, "index": i, "eigenvalue": format(v, ".17g")}
                for s, d, i, v in rows
            ],
            "comparison": [
                {"s": format(cell.s, ".17g"), "degree": cell.degree, "kernel_dim": cell.kernel_dim,
                 "background": cell.background, "status": cell.status}
                for cell in cells
            ],
        }
        frame = pd.DataFrame(
            [
                {"s": f"{cell.s:.6g}", "degree": cell.degree, "kernel_dim": cell.kernel_dim,
                 "background": cell.background, "status": cell.status}
                for cell in cells
            ]
        )
        _render(ctx, payload, frame, ["", _spectrum_csv(rows)])
    statuses = {cell.status for cell in cells}
    if INCONCLUSIVE in statuses:
        ctx.exit(EXIT_INCONCLUSIVE)
    if MISMATCH in statuses:
        ctx.exit(EXIT_NEGATIVE)


@cli.command()
@click.argument("name", default="list")
@click.pass_context
@reports_errors
def examples(ctx, name):
    """List the bundled examples, or print one of them as a document."""
    if name != "list":
        _emit(ctx, dump_document(corpus.load(name)))
        return
    rows = [
        {"name": n, "kind": corpus.CORPUS[n]["kind"], "description": corpus.CORPUS[n].get("description", "")}
        for n in corpus.names()
    ]
    _render(ctx, {"examples": rows}, pd.DataFrame(rows))
