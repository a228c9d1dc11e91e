"""Typer CLI for tm-spectra."""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Optional

import typer
from rich.console import Console

try:
    from typer._click.exceptions import Abort, ClickException, UsageError
except ModuleNotFoundError:  # typer releases that still depend on click directly
    from click.exceptions import Abort, ClickException, UsageError  # type: ignore[assignment]

from tmspectra.config import RunConfig, parse_exact_grid, parse_grid, parse_rational
from tmspectra.core.params import make_parameter
from tmspectra.core.resources import resolve_workers
from tmspectra.errors import TmSpectraError, exit_code_for
from tmspectra.logging_setup import setup_logging
from tmspectra.models.bracket import Bracket
from tmspectra.models.domain import CircleParameter, DyadicWord
from tmspectra.models.enums import OutputFormat, Pipeline, SpectrumKind
from tmspectra.report.formatters import Record, format_plot_rows, record, render

app = typer.Typer(
    name="tm-spectra",
    help="Spectral and fractal characteristics of generalized Thue-Morse measures.",
    no_args_is_help=True,
)
console = Console(stderr=True)

COption = Annotated[str, typer.Option("--c", help="Parameter c, e.g. 1/3 or 0.25")]
FormatOption = Annotated[
    Optional[OutputFormat], typer.Option("--format", "-f", help="csv or json")
]
WorkersOption = Annotated[
    Optional[int], typer.Option("--workers", "-w", help="Worker processes (0 = physical cores)")
]


def _config() -> RunConfig:
    return RunConfig.load()


def _parameter(text: str) -> CircleParameter:
    return make_parameter(parse_rational(text))


def _workers(requested: int | None, config: RunConfig) -> int:
    return resolve_workers(config.parallel.workers if requested is None else requested)


def _emit(records: Sequence[Record], fmt: OutputFormat | None, config: RunConfig) -> None:
    typer.echo(render(records, fmt or config.output.format), nl=False)


@contextmanager
def _guard() -> Iterator[None]:
    """Report library errors on stderr and exit with their mapped code."""
    try:
        yield
    except (TmSpectraError, ValueError) as exc:
        console.print(f"[red]Error:[/red] {exc}")
        raise typer.Exit(exit_code_for(exc)) from exc


def _eigen_rows(points: int) -> list[tuple[float, ...]]:
    from tmspectra.core.autocorr import eigen_plot_row

    return [eigen_plot_row(make_parameter(Fraction(k, points))) for k in range(points)]


def _write_plotdata(path: Path, points: int) -> None:
    path.write_text(format_plot_rows(_eigen_rows(points)))
    console.print(f"[green]Wrote plot data:[/green] {path}")


@app.callback()
def _main(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging")] = False,
) -> None:
    """Spectral and fractal characteristics of generalized Thue-Morse measures."""
    if verbose:
        setup_logging(logging.DEBUG)


@app.command()
def sequence(
    c: COption,
    length: Annotated[int, typer.Option("--length", "-n", help="Number of terms")] = 16,
    fmt: FormatOption = None,
) -> None:
    """Print t_0 .. t_{N-1}."""
    from tmspectra.core.sequence import tm_prefix

    config = _config()
    with _guard():
        param = _parameter(c)
        prefix = tm_prefix(param, length)
    records = []
    for k, z in enumerate(prefix.values):
        records.append(record("t.re", param, float(z.real), {"k": k}))
        records.append(record("t.im", param, float(z.imag), {"k": k}))
    _emit(records, fmt, config)


@app.command()
def eta(
    c: COption,
    max_index: Annotated[
        int, typer.Option("--max-index", "--max", "-n", help="Largest lag")
    ] = 16,
    theta: Annotated[bool, typer.Option("--theta", help="Dyadic Theta sums and slope")] = False,
    kmax: Annotated[Optional[int], typer.Option("--kmax", help="Largest k for --theta")] = None,
    fmt: FormatOption = None,
) -> None:
    """Autocorrelation coefficients eta_n, or the Theta growth with --theta."""
    from tmspectra.core.autocorr import eta_table, theta_growth

    config = _config()
    records = []
    with _guard():
        param = _parameter(c)
        if theta:
            growth = theta_growth(param, kmax or config.depth.theta_exponent)
            for k, value in growth.points:
                records.append(record("theta", param, value, {"k": k}))
            records.append(
                record(
                    "theta_slope",
                    param,
                    Bracket.around(growth.slope, growth.stderr),
                    {"kmin": growth.window[0], "kmax": growth.window[1]},
                    {"slope": growth.slope, "stderr": growth.stderr},
                )
            )
        else:
            table = eta_table(param, max_index)
            for n in range(max_index + 1):
                z = table[n]
                records.append(record("eta.re", param, z.real, {"n": n}))
                records.append(record("eta.im", param, z.imag, {"n": n}))
    _emit(records, fmt, config)


@app.command()
def d2(
    c: Annotated[str, typer.Option("--c", help="c value or grid (a:b:n or comma list)")],
    emit_plotdata: Annotated[
        Optional[Path], typer.Option("--emit-plotdata", help="Write eigenvalue columns over c")
    ] = None,
    points: Annotated[int, typer.Option("--points", help="c samples for plot data")] = 64,
    fmt: FormatOption = None,
) -> None:
    """Dominant eigenvalue lambda_1 and the correlation exponent D_2, per c."""
    from tmspectra.core.autocorr import correlation_exponent, lambda1

    config = _config()
    records = []
    with _guard():
        for value in parse_exact_grid(c):
            param = make_parameter(value)
            records.append(record("lambda1", param, lambda1(param)))
            records.append(record("d2", param, correlation_exponent(param)))
        if emit_plotdata is not None:
            _write_plotdata(emit_plotdata, points)
    _emit(records, fmt, config)


@app.command()
def riesz(
    c: COption,
    order: Annotated[int, typer.Option("--order", "-N", help="Partial product order")] = 10,
    x: Annotated[
        str, typer.Option("--x", "--at", help="Evaluation points (a:b:n or list)")
    ] = "0:1:5",
    depth: Annotated[
        Optional[int], typer.Option("--depth", "-n", help="Bracket all cylinder masses at depth n")
    ] = None,
    cylinder: Annotated[
        Optional[str], typer.Option("--cylinder", help="Bracket the mass of one word, e.g. 0110")
    ] = None,
    coefficients: Annotated[
        Optional[int],
        typer.Option("--coefficients", "-M", help="Fourier coefficients for m = 0 .. M"),
    ] = None,
    buffer: Annotated[Optional[int], typer.Option("--buffer", "-K", help="Order buffer")] = None,
    fmt: FormatOption = None,
) -> None:
    """Riesz product densities, Fourier coefficients, or bracketed cylinder masses."""
    from tmspectra.core.measure import (
        cylinder_measure,
        density_at,
        measure_partition,
        partial_product,
    )

    config = _config()
    records = []
    with _guard():
        param = _parameter(c)
        if sum(opt is not None for opt in (depth, cylinder, coefficients)) > 1:
            raise ValueError("--depth, --cylinder and --coefficients are exclusive")
        if cylinder is not None:
            cm = cylinder_measure(
                param,
                DyadicWord.from_bits(cylinder),
                buffer or config.depth.buffer_orders,
                config.depth.max_order,
                config.depth.grid_depth,
            )
            meta = {"gibbs_lo": cm.gibbs_lo, "gibbs_hi": cm.gibbs_hi, "clamped": cm.clamped}
            records.append(record("mu", param, cm.estimate, {"word": cylinder}, meta))
        elif depth is not None:
            partition = measure_partition(
                param,
                depth,
                buffer or config.depth.buffer_orders,
                config.depth.max_order,
                config.depth.grid_depth,
            )
            for value in range(1 << depth):
                word = DyadicWord(value, depth)
                records.append(
                    record(
                        "mu",
                        param,
                        Bracket(float(partition.lo[value]), float(partition.hi[value])),
                        {"word": str(word)},
                    )
                )
        elif coefficients is not None:
            if coefficients < 0:
                raise ValueError(f"--coefficients must be >= 0, got {coefficients}")
            pp = partial_product(param, order, config.depth.max_order)
            for m in range(coefficients + 1):
                z = pp.coefficient(m)
                records.append(record("coeff.re", param, z.real, {"m": m, "order": order}))
                records.append(record("coeff.im", param, z.imag, {"m": m, "order": order}))
        else:
            points = parse_grid(x)
            values = density_at(partial_product(param, order, config.depth.max_order), points)
            for point, value in zip(points, values):
                records.append(record("density", param, float(value), {"x": point, "order": order}))
    _emit(records, fmt, config)


@app.command()
def pressure(
    c: COption,
    t: Annotated[Optional[str], typer.Option("--t", help="t value or grid")] = None,
    depth: Annotated[Optional[int], typer.Option("--depth", "-n", help="Word length n")] = None,
    grid_depth: Annotated[Optional[int], typer.Option("--grid-depth", "-b")] = None,
    restrict: Annotated[
        Optional[int], typer.Option("--restrict", "-m", help="Forbidden-word depth m")
    ] = None,
    workers: WorkersOption = None,
    fmt: FormatOption = None,
) -> None:
    """Finite-depth topological pressure brackets."""
    from tmspectra.core.pressure import pressure_curve

    config = _config()
    with _guard():
        param = _parameter(c)
        n = depth or config.depth.pressure_depth
        b = grid_depth or config.depth.grid_depth
        curve = pressure_curve(
            param,
            parse_grid(t or config.grid.t_grid),
            n,
            b,
            restrict,
            _workers(workers, config),
            config.depth.max_pressure_depth,
        )
    params: dict[str, object] = {"depth": n, "grid_depth": b}
    if restrict is not None:
        params["m"] = restrict
    records = [
        record("pressure", param, v, {**params, "t": tv}, {"diagnostics": list(curve.diagnostics)})
        for tv, v in zip(curve.arguments, curve.values)
    ]
    _emit(records, fmt, config)


@app.command()
def words(
    c: COption,
    m: Annotated[Optional[int], typer.Option("--m", help="Forbidden-word depth")] = None,
    count: Annotated[Optional[int], typer.Option("--count", help="Count |Sigma_m^n|")] = None,
    markov_check: Annotated[
        bool, typer.Option("--markov-check", help="Irreducibility, period, spectral radius")
    ] = False,
    g: Annotated[Optional[int], typer.Option("--g", help="List the neighbourhood G_n")] = None,
    extend: Annotated[
        Optional[str], typer.Option("--extend", help="Shortest closing extension of a word")
    ] = None,
    inexact: Annotated[
        bool, typer.Option("--inexact", help="Code the singularity from the float value of c")
    ] = False,
    fmt: FormatOption = None,
) -> None:
    """Forbidden-word language, Markov checks and extension search."""
    from tmspectra.core import combinatorics as comb

    config = _config()
    records = []
    with _guard():
        exact = parse_rational(c)
        param = make_parameter(float(exact)) if inexact else make_parameter(exact)
        coding = comb.singularity_coding(param, exact=not inexact)
        depth = m or config.depth.forbidden_depth
        forbidden = comb.forbidden_words(coding, depth)
        records.append(
            record(
                "forbidden",
                param,
                len(forbidden),
                {"m": depth},
                {"words": [str(w) for w in forbidden]},
            )
        )
        if count is not None:
            aut = comb.forbidden_automaton(coding, depth)
            total = comb.word_count(aut, count)
            records.append(record("word_count", param, total, {"m": depth, "n": count}))
        if markov_check:
            report = comb.markov_check(comb.forbidden_automaton(coding, depth))
            params = {"m": depth}
            records.extend([
                record("irreducible", param, int(report.irreducible), params),
                record("aperiodic", param, int(report.aperiodic), params),
                record("period", param, report.period, params),
                record("spectral_radius", param, report.spectral_radius, params),
                record(
                    "essential_states",
                    param,
                    report.essential_count,
                    params,
                    {"states": report.state_count, "full_irreducible": report.full_irreducible},
                ),
            ])
        if g is not None:
            members = sorted(comb.g_n(coding, g), key=lambda w: w.value)
            listing = {"words": [str(w) for w in members]}
            records.append(record("g_n", param, len(members), {"n": g}, listing))
        if extend is not None:
            found = comb.extension_search(coding, DyadicWord.from_bits(extend))
            records.append(
                record(
                    "extension_length",
                    param,
                    found.length,
                    {"word": extend},
                    {"extension": str(found.extension), "envelope": found.envelope},
                )
            )
    _emit(records, fmt, config)


def _curve_records(
    quantity: str,
    param: CircleParameter,
    args: Sequence[float],
    values: Sequence[Bracket],
    key: str,
) -> list[Record]:
    return [record(quantity, param, v, {key: a}) for a, v in zip(args, values)]


@app.command()
def spectrum(
    c: COption,
    kind: Annotated[
        SpectrumKind, typer.Option("--kind", "-k", help="Which spectrum")
    ] = SpectrumKind.LQ,
    depth: Annotated[Optional[int], typer.Option("--depth", "-n", help="Word length n")] = None,
    grid: Annotated[Optional[str], typer.Option("--grid", help="q or t grid")] = None,
    r: Annotated[Optional[str], typer.Option("--r", help="r values for quantization")] = None,
    pipeline: Annotated[
        Pipeline, typer.Option("--pipeline", help="pressure-partition or measure-partition")
    ] = Pipeline.PRESSURE,
    emit_plotdata: Annotated[
        Optional[Path], typer.Option("--emit-plotdata", help="Write eigenvalue columns over c")
    ] = None,
    workers: WorkersOption = None,
    fmt: FormatOption = None,
) -> None:
    """L^q, Birkhoff and dimension spectra and the dimensions derived from them."""
    from tmspectra.core import spectra as sp

    config = _config()
    records: list[Record] = []
    with _guard():
        param = _parameter(c)
        nproc = _workers(workers, config)
        b = config.depth.grid_depth
        if kind in (SpectrumKind.BIRKHOFF, SpectrumKind.DIMENSION):
            n = depth or config.depth.pressure_depth
            t_grid = parse_grid(grid or config.grid.t_grid)
            build = sp.birkhoff_spectrum if kind is SpectrumKind.BIRKHOFF else sp.dimension_spectrum
            spec = build(param, n, t_grid, None, b, config.grid.alpha_points, nproc)
            name = "b" if kind is SpectrumKind.BIRKHOFF else "f"
            flags = spec.flagged or (False,) * len(spec.alphas)
            for a, v, flag in zip(spec.alphas, spec.values, flags):
                meta = {"flagged": flag, "truncated": spec.truncated}
                records.append(record(name, param, v, {"alpha": a}, meta))
        elif kind is SpectrumKind.FOURIER:
            result = sp.fourier_dimension(
                param, depth or config.depth.pressure_depth, config.depth.theta_exponent, b
            )
            for route, value in result.routes().items():
                records.append(record(f"fourier.{route}", param, value, {}, dict(result.meta)))
        elif kind is SpectrumKind.INFORMATION:
            n = depth or config.depth.measure_depth
            value = sp.information_dimension(
                param, n, config.depth.buffer_orders, config.depth.max_order, b
            )
            records.append(record("information_dimension", param, value, {"depth": n}))
        else:
            default_depth = (
                config.depth.measure_depth
                if pipeline is Pipeline.MEASURE
                else config.depth.pressure_depth
            )
            n = depth or default_depth
            q_grid = parse_grid(grid or config.grid.q_grid)
            curve = sp.lq_spectrum(
                param,
                q_grid,
                n,
                pipeline,
                b,
                config.depth.buffer_orders,
                config.depth.max_order,
                nproc,
            )
            if kind is SpectrumKind.LQ:
                records = _curve_records("beta", param, curve.arguments, curve.values, "q")
            elif kind is SpectrumKind.QUANTIZATION:
                for rv in parse_grid(r or config.grid.r_values):
                    dim = sp.quantization_dimension(curve, rv)
                    records.append(record("quantization_dimension", param, dim, {"r": rv}))
            elif kind is SpectrumKind.SPECTRAL:
                records.append(record("spectral_dimension", param, sp.spectral_dimension(curve)))
            else:
                for q in curve.arguments:
                    if q != 1:
                        dim = sp.renyi_dimension(curve, q)
                        records.append(record("renyi", param, dim, {"q": q}))
        if emit_plotdata is not None:
            _write_plotdata(emit_plotdata, 64)
    _emit(records, fmt, config)


@app.command()
def verify(
    quick: Annotated[
        Optional[bool], typer.Option("--quick/--full", help="Reduced sizes for a fast run")
    ] = None,
    check: Annotated[
        Optional[list[str]], typer.Option("--check", help="Run only this check (repeatable)")
    ] = None,
    workers: WorkersOption = None,
) -> None:
    """Run the cross-method acceptance suite."""
    from tmspectra.core.verify import CHECKS, run_checks

    config = _config()
    with _guard():
        report = run_checks(
            names=check,
            quick=config.verify.quick if quick is None else quick,
            seed=config.verify.seed,
            workers=_workers(workers, config),
        )

    from rich.table import Table

    table = Table(title="Acceptance checks")
    table.add_column("Check", style="bold")
    table.add_column("Result")
    table.add_column("Time")
    table.add_column("Detail")
    for res in report.results:
        status = "[green]pass[/green]" if res.passed else "[red]FAIL[/red]"
        table.add_row(res.name, status, f"{res.elapsed:.1f}s", res.detail)
    for name, err in report.failures:
        table.add_row(name, "[red]ERROR[/red]", "-", err)
    console.print(table)

    total = len(check) if check else len(CHECKS)
    passed = sum(1 for res in report.results if res.passed)
    console.print(f"{passed}/{total} checks passed")
    if not report.passed:
        raise typer.Exit(1)


def run(argv: Sequence[str] | None = None) -> int:
    """Invoke the CLI and return its exit code instead of exiting."""
    try:
        code = app(
            args=list(argv) if argv is not None else None,
            prog_name="tm-spectra",
            standalone_mode=False,
        )
    except UsageError as exc:
        exc.show()
        return 1
    except ClickException as exc:
        exc.show()
        return exc.exit_code
    except Abort:
        return 1
    except (TmSpectraError, ValueError) as exc:
        console.print(f"[red]Error:[/red] {exc}")
        return exit_code_for(exc)
    return code if isinstance(code, int) else 0


def main() -> None:
    """Entry point for the tm-spectra CLI."""
    raise SystemExit(run())


if __name__ == "__main__":
    main()
