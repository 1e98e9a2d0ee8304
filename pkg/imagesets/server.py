"""MCP tool server exposing the analyses to LLM clients.

Tools never raise across the protocol: library errors come back as
``{"status": "error", "message": ...}``.
"""

from mcp.server.fastmcp import FastMCP
from mcp.server.fastmcp.utilities.logging import configure_logging, get_logger

from .config import get_settings
from .errors import ImageSetsError
from .families import FAMILIES, FamilySpec, build_family
from .map_repr import BivariateMap, dump_biv, dump_lut, format_poly, interpolate, load_lut
from .report import analyze, resolve_map
from .theorems import THEOREM_IDS, WALSH_FULL, WALSH_NONE, WALSH_ZERO

logger = get_logger(__name__)

settings = get_settings()

mcp = FastMCP(
    name="imagesets",
    host=settings.mcp_host,  # only used for the network transports
    port=settings.mcp_port,
)

TRANSPORTS = ("stdio", "sse", "streamable-http")


def _error(e: Exception) -> dict:
    logger.warning("tool call failed: %s", e)
    return {"status": "error", "message": str(e)}


def _resolve(expr, n, family, params, lut_text, u1, u2):
    if lut_text is not None:
        return load_lut(lut_text), {"source": "lut-text"}
    return resolve_map(expr=expr, family=family, n=n, params=params, u1=u1, u2=u2)


@mcp.tool()
async def analyze_map(expr: str | None = None, n: int | None = None, family: str | None = None,
                      params: dict | None = None, lut_text: str | None = None,
                      walsh: str = WALSH_FULL, u1: int | None = None, u2: int | None = None) -> dict:
    """Image, differential and Walsh profiles of a map, plus every theorem check.

    Args:
        expr: Expression in x over F_2^n, e.g. "x^3 + x^4" (needs n)
        n: Extension degree for expr, or for families indexed by n
        family: Family id (see list_families) instead of expr
        params: Family parameters such as {"k": 1} or {"m": 3, "a": 1}
        lut_text: A LUT in text form (field record line, table line) instead of expr/family
        walsh: "full", "zero" (W(b,0) only) or "none"
        u1: First basis element when a bivariate family is converted
        u2: Second basis element when a bivariate family is converted
    """
    if walsh not in (WALSH_FULL, WALSH_ZERO, WALSH_NONE):
        return {"status": "error", "message": f"walsh must be one of full, zero, none; got {walsh!r}"}
    try:
        f, provenance = _resolve(expr, n, family, params, lut_text, u1, u2)
        report = analyze(f, provenance, walsh=walsh)
    except ImageSetsError as e:
        return _error(e)
    return {"status": "success", "report": report.to_dict(timing=False)}


@mcp.tool()
async def verify_map(expr: str | None = None, n: int | None = None, family: str | None = None,
                     params: dict | None = None, lut_text: str | None = None,
                     suite: list[str] | None = None, u1: int | None = None, u2: int | None = None) -> dict:
    """Run theorem checkers on a map and list their statuses.

    Args:
        expr: Expression in x over F_2^n (needs n)
        n: Extension degree
        family: Family id instead of expr
        params: Family parameters
        lut_text: A LUT in text form instead of expr/family
        suite: Theorem ids or glob patterns such as ["lb.*", "ub.wan"]; all when omitted
        u1: First basis element for bivariate families
        u2: Second basis element for bivariate families
    """
    try:
        f, provenance = _resolve(expr, n, family, params, lut_text, u1, u2)
        report = analyze(f, provenance, suite=suite)
    except ImageSetsError as e:
        return _error(e)
    return {
        "status": "failed" if report.failures else "success",
        "failures": [r.theorem_id for r in report.failures],
        "theorems": {r.theorem_id: r.status for r in report.theorems},
        "image_size": report.preimage["image_size"],
        "d": report.differential["d"],
    }


@mcp.tool()
async def build_family_table(family: str, params: dict | None = None) -> dict:
    """Instantiate a named family and return its table text.

    Args:
        family: Family id (see list_families)
        params: Family parameters, e.g. {"n": 4, "k": 1}
    """
    try:
        built = build_family(FamilySpec(family=family, **(params or {})))
    except TypeError:
        return {"status": "error", "message": f"unknown family parameters {sorted(params or {})}"}
    except ImageSetsError as e:
        return _error(e)
    if isinstance(built, BivariateMap):
        return {"status": "success", "format": "biv", "text": dump_biv(built)}
    return {"status": "success", "format": "lut", "text": dump_lut(built), "digest": built.digest()}


@mcp.tool()
async def interpolate_map(expr: str | None = None, n: int | None = None, family: str | None = None,
                          params: dict | None = None, lut_text: str | None = None) -> dict:
    """Interpolating polynomial of a map as "e:c" terms.

    Args:
        expr: Expression in x (needs n)
        n: Extension degree
        family: Family id instead of expr
        params: Family parameters
        lut_text: A LUT in text form instead of expr/family
    """
    try:
        f, _ = _resolve(expr, n, family, params, lut_text, None, None)
        return {"status": "success", "polynomial": format_poly(interpolate(f))}
    except ImageSetsError as e:
        return _error(e)


def family_catalog() -> list[dict]:
    return [{"id": fam.id, "summary": fam.summary, "params": list(fam.params), "bivariate": fam.bivariate}
            for fam in FAMILIES.values()]


@mcp.tool()
async def list_families() -> dict:
    """List the map families and the theorem ids that can be checked."""
    return {"status": "success", "families": family_catalog(), "theorems": THEOREM_IDS}


@mcp.resource("imagesets://families")
def families_resource() -> list[dict]:
    """Catalog of the map families and their parameters."""
    return family_catalog()


def run(transport: str = "stdio") -> None:
    if transport not in TRANSPORTS:
        raise ValueError(f"Unknown transport: {transport}")
    configure_logging(settings.log_level)
    logger.info("starting imagesets MCP server over %s", transport)
    mcp.run(transport=transport)


if __name__ == "__main__":
    run()
