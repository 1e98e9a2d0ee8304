"""The JSON analysis report shared by the CLI and the MCP tools."""

import json
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from mcp.server.fastmcp.utilities.logging import get_logger

from .errors import ExpressionError, HypothesisError
from .families import FamilySpec, build_family
from .finite_field import build_field
from .map_repr import (BivariateMap, MapTable, bivariate_to_univariate, default_basis, from_expression,
                       load_biv, load_lut)
from .theorems import WALSH_FULL, WALSH_NONE, Profiles, TheoremReport, run_all

logger = get_logger(__name__)

SCHEMA_VERSION = 1


def to_univariate(bv: BivariateMap, u1: int | None = None, u2: int | None = None) -> tuple[MapTable, dict]:
    if (u1 is None) != (u2 is None):
        raise ExpressionError("give both --u1 and --u2, or neither")
    if u1 is None:
        u1, u2 = default_basis(bv.field)
    return bivariate_to_univariate(bv, u1, u2), {"basis": [u1, u2]}


def resolve_map(lut: str | Path | None = None, expr: str | None = None, family: str | None = None,
                n: int | None = None, p: int = 2, params: dict | None = None,
                u1: int | None = None, u2: int | None = None) -> tuple[MapTable, dict]:
    """Turn exactly one of a table file, an expression or a family into a MapTable.

    Bivariate inputs (``.biv`` files and bivariate families) are converted
    with the basis (u1, u2), or (1, g) when none is given.
    """
    given = [name for name, v in (("lut", lut), ("expr", expr), ("family", family)) if v is not None]
    if len(given) != 1:
        raise ExpressionError("give exactly one of a LUT file, --expr or --family")
    if lut is not None:
        path = Path(lut)
        text = path.read_text()
        if path.suffix == ".biv":
            f, extra = to_univariate(load_biv(text), u1, u2)
            return f, {"source": "biv", "path": str(path), **extra}
        return load_lut(text), {"source": "lut", "path": str(path)}
    if expr is not None:
        if n is None:
            raise ExpressionError("--expr needs --n")
        return from_expression(build_field(p, n), expr), {"source": "expr", "expr": expr, "p": p, "n": n}
    params = {k: v for k, v in (params or {}).items() if v is not None}
    try:
        spec = FamilySpec(family=family, n=n, **params)
    except TypeError:
        raise HypothesisError("known parameters", f"unknown family parameters {sorted(params)}")
    built = build_family(spec)
    provenance = {"source": "family", "family": family, "params": {"n": n, **params} if n is not None else params}
    if isinstance(built, BivariateMap):
        built, extra = to_univariate(built, u1, u2)
        provenance.update(extra)
    return built, provenance


@dataclass
class AnalysisReport:
    field: str
    provenance: dict
    preimage: dict
    differential: dict
    walsh: dict | None
    theorems: list[TheoremReport]
    timing: dict = dc_field(default_factory=dict)

    @property
    def failures(self) -> list[TheoremReport]:
        return [r for r in self.theorems if r.failed]

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "field": self.field,
            "provenance": self.provenance,
            "preimage": self.preimage,
            "differential": self.differential,
            "walsh": self.walsh,
            "theorems": [r.to_dict() for r in self.theorems],
        }
        if timing:
            out["timing"] = self.timing
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing=timing), indent=2, sort_keys=True)


def analyze(f: MapTable, provenance: dict, walsh: str = WALSH_FULL, suite: list[str] | None = None,
            theorems: bool = True) -> AnalysisReport:
    """Compute every profile of f once and run the theorem suite over them."""
    timing = {}
    profiles = Profiles(f, walsh=walsh)

    start = time.perf_counter()
    preimage = profiles.pp.summary()
    timing["preimage_s"] = round(time.perf_counter() - start, 6)

    start = time.perf_counter()
    differential = profiles.dp.summary()
    timing["differential_s"] = round(time.perf_counter() - start, 6)

    walsh_summary = None
    if walsh != WALSH_NONE and f.field.p == 2:
        start = time.perf_counter()
        walsh_summary = profiles.wp.summary()
        timing["walsh_s"] = round(time.perf_counter() - start, 6)

    reports = []
    if theorems:
        start = time.perf_counter()
        reports = run_all(f, suite=suite, walsh=walsh, profiles=profiles)
        timing["theorems_s"] = round(time.perf_counter() - start, 6)

    provenance = {**provenance, "digest": f.digest()}
    logger.info("analyzed %s: image %d, d=%d", f.field.record(), preimage["image_size"], differential["d"])
    return AnalysisReport(f.field.record(), provenance, preimage, differential, walsh_summary, reports, timing)


def format_summary(report: AnalysisReport) -> str:
    """Human-readable theorem table for ``verify``."""
    lines = [f"field {report.field}  image {report.preimage['image_size']}  d={report.differential['d']}"]
    width = max((len(r.theorem_id) for r in report.theorems), default=0)
    for r in report.theorems:
        note = f"  ({r.reason})" if r.reason else ""
        lines.append(f"  {r.theorem_id:<{width}}  {r.status}{note}")
    lines.append(f"{len(report.failures)} conclusion failure(s)")
    return "\n".join(lines)
