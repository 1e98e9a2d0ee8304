"""Search harnesses that stream one JSON-serialisable record per hit.

Every hit carries the table digest and a recipe from which the map can be
rebuilt with :func:`replay`. Random modes draw each sample from its own
generator seeded with ``(seed, sample)`` so a single hit replays without
regenerating the samples before it.
"""

from collections import Counter
from math import gcd
from typing import Iterator

import numpy as np
from mcp.server.fastmcp.utilities.logging import get_logger

from .errors import HypothesisError
from .finite_field import FieldSpec, build_field
from .map_repr import MapTable, PolyRepr
from .spectra import differential_profile, preimage_profile
from .theorems import apn_minimum, classify_minimal_case, minimal_shapes

logger = get_logger(__name__)

MODES = ("monomial-exhaustive", "quadratic-random", "minimal-image-probe")
RANDOM_MODES = ("quadratic-random", "minimal-image-probe")


def _binary_field(n: int) -> FieldSpec:
    if n < 2:
        raise HypothesisError("n >= 2", f"search needs n >= 2, got n={n}")
    return build_field(2, n)


def _hit(mode: str, f: MapTable, recipe: dict, **extra) -> dict:
    pp = preimage_profile(f)
    return {"mode": mode, "digest": f.digest(), "recipe": recipe,
            "image_size": pp.image_size, "M": {str(r): c for r, c in pp.M.items()}, **extra}


# -- monomials -------------------------------------------------------------------

def monomial_exhaustive(n: int) -> Iterator[dict]:
    """Every APN exponent 1 <= k < 2^n - 1, followed by a summary record."""
    field = _binary_field(n)
    xs = field.elements()
    apn = []
    for k in range(1, field.q - 1):
        f = MapTable(field, field.power(xs, k))
        d = differential_profile(f).d
        if d != 2:
            continue
        g = gcd(k, field.q - 1)
        apn.append(k)
        yield _hit("monomial-exhaustive", f, {"n": n, "expr": f"x^{k}"}, k=k, gcd=g)
    gcds = sorted({gcd(k, field.q - 1) for k in apn})
    yield {"mode": "monomial-exhaustive", "summary": True, "n": n, "apn_exponents": apn, "gcds": gcds}


# -- random quadratic maps -------------------------------------------------------

def quadratic_exponents(n: int) -> list[int]:
    return sorted({2**i + 2**j for i in range(n) for j in range(i + 1, n)})


def random_quadratic(field: FieldSpec, seed: int, sample: int, density: float = 0.5) -> PolyRepr:
    rng = np.random.default_rng([seed, sample])
    exps = quadratic_exponents(field.n)
    coeffs = []
    for e in exps:
        if rng.random() < density:
            coeffs.append((e, int(rng.integers(1, field.q))))
    if not coeffs:
        coeffs.append((exps[int(rng.integers(len(exps)))], int(rng.integers(1, field.q))))
    return PolyRepr(field, tuple(coeffs))


def quadratic_random(n: int, seed: int, samples: int) -> Iterator[dict]:
    """Random DO polynomials; APN hits are reported with their image data."""
    field = _binary_field(n)
    minimum = apn_minimum(n)
    hits = 0
    for sample in range(samples):
        pr = random_quadratic(field, seed, sample)
        f = pr.evaluate()
        if differential_profile(f).d != 2:
            continue
        hits += 1
        pp = preimage_profile(f)
        case = classify_minimal_case(n, pp) if pp.image_size == minimum else None
        recipe = {"n": n, "mode": "quadratic-random", "seed": seed, "sample": sample}
        yield _hit("quadratic-random", f, recipe, terms=[[e, c] for e, c in pr.coeffs],
                   at_minimum=pp.image_size == minimum, case=case)
    yield {"mode": "quadratic-random", "summary": True, "n": n, "seed": seed,
           "samples": samples, "apn_hits": hits}


# -- minimal image probe ---------------------------------------------------------

def random_with_shape(field: FieldSpec, shape: dict[int, int], rng: np.random.Generator) -> MapTable:
    """A uniformly random map whose preimage distribution is ``shape``."""
    if any(c < 0 for c in shape.values()) or sum(r * c for r, c in shape.items()) != field.q:
        raise HypothesisError("sum r*M_r = q", f"shape {shape} does not partition q={field.q}")
    sizes = np.repeat(list(shape), list(shape.values()))
    values = rng.choice(field.q, size=sizes.size, replace=False)
    order = rng.permutation(field.q)
    table = np.empty(field.q, dtype=np.int64)
    table[order] = np.repeat(values, sizes)
    return MapTable(field, table)


def _probe_sample(field: FieldSpec, seed: int, sample: int) -> tuple[str, MapTable]:
    rng = np.random.default_rng([seed, sample])
    shapes = minimal_shapes(field.n)
    names = sorted(shapes)
    name = names[int(rng.integers(len(names)))]
    return name, random_with_shape(field, shapes[name], rng)


def minimal_image_probe(n: int, seed: int, samples: int) -> Iterator[dict]:
    """Sample maps at the APN minimum image size and report those that are APN."""
    field = _binary_field(n)
    drawn: Counter = Counter()
    found: Counter = Counter()
    for sample in range(samples):
        name, f = _probe_sample(field, seed, sample)
        drawn[name] += 1
        if differential_profile(f).d != 2:
            continue
        found[name] += 1
        if name in ("case-2", "case-3"):
            logger.warning("APN map with preimage distribution %s at sample %d", name, sample)
        recipe = {"n": n, "mode": "minimal-image-probe", "seed": seed, "sample": sample}
        yield _hit("minimal-image-probe", f, recipe, case=name)
    yield {"mode": "minimal-image-probe", "summary": True, "n": n, "seed": seed, "samples": samples,
           "drawn": dict(sorted(drawn.items())), "apn_hits": dict(sorted(found.items()))}


def run_search(mode: str, n: int, seed: int | None = None, samples: int = 1000) -> Iterator[dict]:
    if mode not in MODES:
        raise HypothesisError("known mode", f"unknown search mode {mode!r}; choose from {', '.join(MODES)}")
    if mode == "monomial-exhaustive":
        return monomial_exhaustive(n)
    if seed is None:
        raise HypothesisError("seed", f"mode {mode} needs an explicit --seed")
    if samples < 1:
        raise HypothesisError("samples >= 1", f"samples must be positive, got {samples}")
    if mode == "quadratic-random":
        return quadratic_random(n, seed, samples)
    return minimal_image_probe(n, seed, samples)


def replay(recipe: dict) -> MapTable:
    """Rebuild the map a search hit describes."""
    field = _binary_field(int(recipe["n"]))
    if "expr" in recipe:
        k = int(recipe["expr"].removeprefix("x^"))
        return MapTable(field, field.power(field.elements(), k))
    mode = recipe.get("mode")
    if mode == "quadratic-random":
        return random_quadratic(field, int(recipe["seed"]), int(recipe["sample"])).evaluate()
    if mode == "minimal-image-probe":
        return _probe_sample(field, int(recipe["seed"]), int(recipe["sample"]))[1]
    raise HypothesisError("known recipe", f"cannot replay recipe {recipe!r}")
