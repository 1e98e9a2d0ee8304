"""Command-line front end.

Exit codes: 0 when no theorem conclusion failed, 1 when one did, 2 for input
errors (bad fields, expressions, files, family hypotheses, caps).
"""

import json
from pathlib import Path
from typing import Annotated, Optional

import typer
from mcp.server.fastmcp.utilities.logging import configure_logging, get_logger

from .config import get_settings
from .errors import ImageSetsError
from .families import FAMILIES, FamilySpec, build_family
from .map_repr import BivariateMap, dump_biv, dump_lut, format_poly, interpolate, load_biv
from .report import analyze as analyze_map, format_summary, resolve_map, to_univariate
from .search import MODES, run_search
from .theorems import WALSH_FULL, WALSH_NONE, WALSH_ZERO
from .walsh import write_spectrum_csv

logger = get_logger(__name__)

app = typer.Typer(help="Image sets, differential and Walsh profiles of maps on finite fields.",
                  no_args_is_help=True, add_completion=False)

EXIT_FAILURE = 1
EXIT_INPUT = 2

Lut = Annotated[Optional[Path], typer.Argument(help="LUT file (or .biv bivariate file)")]
Expr = Annotated[Optional[str], typer.Option("--expr", help="Expression in x, e.g. 'x^3 + Tr(x^9)'")]
Family = Annotated[Optional[str], typer.Option("--family", help="Family id, see `imagesets family --list`")]
N = Annotated[Optional[int], typer.Option("--n", help="Extension degree")]
P = Annotated[int, typer.Option("--p", help="Characteristic (expressions only)")]
M = Annotated[Optional[int], typer.Option("--m")]
I = Annotated[Optional[int], typer.Option("--i")]
K = Annotated[Optional[int], typer.Option("--k")]
G = Annotated[Optional[int], typer.Option("--g")]
A = Annotated[Optional[int], typer.Option("--a")]
Alpha = Annotated[Optional[int], typer.Option("--alpha")]
Beta = Annotated[Optional[int], typer.Option("--beta")]
Gamma = Annotated[Optional[int], typer.Option("--gamma")]
Name = Annotated[Optional[str], typer.Option("--name", help="Pinned example name (family 'named')")]
U1 = Annotated[Optional[int], typer.Option("--u1", help="First basis element for bivariate conversion")]
U2 = Annotated[Optional[int], typer.Option("--u2", help="Second basis element for bivariate conversion")]
Out = Annotated[Optional[Path], typer.Option("--out", "-o", help="Write to this file instead of stdout")]


def _params(m, i, k, g, a, alpha, beta, gamma, name) -> dict:
    return {"m": m, "i": i, "k": k, "g": g, "a": a, "alpha": alpha, "beta": beta, "gamma": gamma, "name": name}


def _fail(message: str) -> None:
    typer.echo(f"error: {message}", err=True)
    raise typer.Exit(EXIT_INPUT)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        typer.echo(text)
    else:
        out.write_text(text if text.endswith("\n") else text + "\n")


def _walsh_mode(no_walsh: bool, zero_only: bool) -> str:
    if no_walsh:
        return WALSH_NONE
    return WALSH_ZERO if zero_only else WALSH_FULL


@app.callback()
def main(log_level: Annotated[Optional[str], typer.Option("--log-level", help="Overrides IMAGESETS_LOG_LEVEL")] = None):
    configure_logging((log_level or get_settings().log_level).upper())


@app.command()
def analyze(lut: Lut = None, expr: Expr = None, family: Family = None, n: N = None, p: P = 2,
            m: M = None, i: I = None, k: K = None, g: G = None, a: A = None,
            alpha: Alpha = None, beta: Beta = None, gamma: Gamma = None, name: Name = None,
            u1: U1 = None, u2: U2 = None,
            no_walsh: Annotated[bool, typer.Option("--no-walsh", help="Skip spectral work")] = False,
            walsh_zero_only: Annotated[bool, typer.Option("--walsh-zero-only", help="Only W(b,0)")] = False,
            no_timing: Annotated[bool, typer.Option("--no-timing", help="Omit the timing block")] = False,
            out: Out = None):
    """Full analysis report as JSON."""
    try:
        f, provenance = resolve_map(lut, expr, family, n, p, _params(m, i, k, g, a, alpha, beta, gamma, name), u1, u2)
        report = analyze_map(f, provenance, walsh=_walsh_mode(no_walsh, walsh_zero_only))
    except (ImageSetsError, OSError) as e:
        _fail(str(e))
    _emit(report.to_json(timing=not no_timing), out)
    if report.failures:
        raise typer.Exit(EXIT_FAILURE)


@app.command()
def verify(lut: Lut = None, expr: Expr = None, family: Family = None, n: N = None, p: P = 2,
           m: M = None, i: I = None, k: K = None, g: G = None, a: A = None,
           alpha: Alpha = None, beta: Beta = None, gamma: Gamma = None, name: Name = None,
           u1: U1 = None, u2: U2 = None,
           suite: Annotated[Optional[list[str]], typer.Option("--suite", help="Theorem ids or globs, e.g. 'ab.*'")] = None,
           walsh_zero_only: Annotated[bool, typer.Option("--walsh-zero-only")] = False,
           out: Out = None):
    """Run the theorem checkers; exit 1 if any conclusion fails."""
    patterns = [s for entry in suite or [] for s in entry.split(",") if s]
    try:
        f, provenance = resolve_map(lut, expr, family, n, p, _params(m, i, k, g, a, alpha, beta, gamma, name), u1, u2)
        report = analyze_map(f, provenance, walsh=_walsh_mode(False, walsh_zero_only), suite=patterns)
    except (ImageSetsError, OSError) as e:
        _fail(str(e))
    typer.echo(format_summary(report), err=True)
    _emit(report.to_json(timing=False), out)
    if report.failures:
        raise typer.Exit(EXIT_FAILURE)


@app.command()
def search(mode: Annotated[str, typer.Argument(help=" | ".join(MODES))],
           n: Annotated[int, typer.Option("--n")],
           seed: Annotated[Optional[int], typer.Option("--seed", help="Required for random modes")] = None,
           samples: Annotated[int, typer.Option("--samples")] = 1000,
           out: Out = None):
    """Stream search hits as JSON lines."""
    try:
        records = run_search(mode, n, seed=seed, samples=samples)
        lines = (json.dumps(record, sort_keys=True) for record in records)
        if out is None:
            for line in lines:
                typer.echo(line)
        else:
            with out.open("w") as fh:
                for line in lines:
                    fh.write(line + "\n")
    except (ImageSetsError, OSError) as e:
        _fail(str(e))


@app.command()
def family(family_id: Annotated[Optional[str], typer.Argument(help="Family id")] = None,
           n: N = None, m: M = None, i: I = None, k: K = None, g: G = None, a: A = None,
           alpha: Alpha = None, beta: Beta = None, gamma: Gamma = None, name: Name = None,
           list_: Annotated[bool, typer.Option("--list", help="List the families")] = False,
           out: Out = None):
    """Instantiate a family as a LUT (univariate) or .biv (bivariate) file."""
    if list_ or family_id is None:
        for fam in FAMILIES.values():
            typer.echo(f"{fam.id:<16} {', '.join(fam.params):<24} {fam.summary}")
        return
    try:
        params = {k_: v for k_, v in _params(m, i, k, g, a, alpha, beta, gamma, name).items() if v is not None}
        built = build_family(FamilySpec(family=family_id, n=n, **params))
    except ImageSetsError as e:
        _fail(str(e))
    _emit(dump_biv(built) if isinstance(built, BivariateMap) else dump_lut(built), out)


@app.command("interpolate")
def interpolate_cmd(lut: Lut = None, expr: Expr = None, family: Family = None, n: N = None, p: P = 2,
                    m: M = None, i: I = None, k: K = None, g: G = None, a: A = None,
                    alpha: Alpha = None, beta: Beta = None, gamma: Gamma = None, name: Name = None,
                    u1: U1 = None, u2: U2 = None, out: Out = None):
    """Print the interpolating polynomial as 'e:c' terms."""
    try:
        f, _ = resolve_map(lut, expr, family, n, p, _params(m, i, k, g, a, alpha, beta, gamma, name), u1, u2)
        text = format_poly(interpolate(f))
    except (ImageSetsError, OSError) as e:
        _fail(str(e))
    _emit(text, out)


@app.command()
def convert(bivariate: Annotated[Path, typer.Option("--bivariate", help=".biv file")],
            u1: U1 = None, u2: U2 = None, out: Out = None):
    """Bivariate table to univariate LUT in the basis (u1, u2)."""
    try:
        f, extra = to_univariate(load_biv(bivariate.read_text()), u1, u2)
    except (ImageSetsError, OSError) as e:
        _fail(str(e))
    logger.info("converted %s with basis %s", bivariate, extra["basis"])
    _emit(dump_lut(f), out)


@app.command()
def walsh(lut: Lut = None, expr: Expr = None, family: Family = None, n: N = None,
          m: M = None, i: I = None, k: K = None, g: G = None, a: A = None,
          alpha: Alpha = None, beta: Beta = None, gamma: Gamma = None, name: Name = None,
          u1: U1 = None, u2: U2 = None,
          component: Annotated[Optional[list[int]], typer.Option("--component", "-b", help="Components b (default: all)")] = None,
          out: Annotated[Path, typer.Option("--out", "-o", help="CSV file")] = Path("spectrum.csv")):
    """Export W(b, a) as CSV rows b,a,W."""
    try:
        f, _ = resolve_map(lut, expr, family, n, 2, _params(m, i, k, g, a, alpha, beta, gamma, name), u1, u2)
        rows = write_spectrum_csv(f, out, components=component or None)
    except (ImageSetsError, OSError) as e:
        _fail(str(e))
    typer.echo(f"wrote {rows} rows to {out}", err=True)


@app.command()
def serve(transport: Annotated[str, typer.Option("--transport", help="stdio | sse | streamable-http")] = "stdio"):
    """Run the MCP tool server."""
    from .server import run

    try:
        run(transport)
    except ValueError as e:
        _fail(str(e))


if __name__ == "__main__":
    app()
