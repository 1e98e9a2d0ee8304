"""Constructors for the named map families.

Each constructor checks its family's hypotheses up front and raises
HypothesisError naming the violated clause. Univariate families return a
MapTable; the bivariate families (Zhou-Pott, Goloğlu) return a BivariateMap
over the half field of an even-degree binary field, leaving the basis for
univariate conversion to the caller.
"""

from dataclasses import asdict, dataclass
from math import gcd
from typing import Callable

import numpy as np
from mcp.server.fastmcp.utilities.logging import get_logger

from .errors import HypothesisError
from .finite_field import FieldSpec, build_field
from .map_repr import BivariateMap, MapTable, from_expression

logger = get_logger(__name__)


def _binary(field: FieldSpec) -> None:
    if field.p != 2:
        raise HypothesisError("p = 2", f"family is defined over binary fields, got p={field.p}")


def _nonzero(name: str, value: int) -> None:
    if not value:
        raise HypothesisError(f"{name} != 0")


def _even_half(field: FieldSpec) -> int:
    _binary(field)
    if field.n % 2:
        raise HypothesisError("n = 2m", f"bivariate families need an even degree, got n={field.n}")
    return field.n // 2


# -- univariate families ---------------------------------------------------------

def monomial(field: FieldSpec, k: int) -> MapTable:
    return MapTable(field, field.power(field.elements(), k))


def gold(field: FieldSpec, k: int) -> MapTable:
    """x^(2^k + 1)."""
    _binary(field)
    if gcd(k, field.n) != 1:
        logger.warning("Gold exponent 2^%d+1 with gcd(k, n)=%d on F_2^%d is not APN",
                       k, gcd(k, field.n), field.n)
    return monomial(field, 2**k + 1)


def binomial_x3_x4(field: FieldSpec) -> MapTable:
    _binary(field)
    return from_expression(field, "x^3 + x^4")


def cube_plus_trace(field: FieldSpec) -> MapTable:
    _binary(field)
    return from_expression(field, "x^3 + Tr(x^9)")


def kyureghyan_2to1(field: FieldSpec, a: int) -> MapTable:
    """x^3 + a^-1 Tr(a^3 x^9), 2-to-1 for odd n."""
    _binary(field)
    if field.n % 2 == 0:
        raise HypothesisError("n odd")
    _nonzero("a", a)
    return from_expression(field, "x^3 + a^-1*Tr(a^3*x^9)", {"a": a})


def _budaghyan_gate(field: FieldSpec, a: int) -> None:
    _binary(field)
    if field.n % 3:
        raise HypothesisError("n = 3m", f"n={field.n} is not divisible by 3")
    _nonzero("a", a)


def budaghyan_f1(field: FieldSpec, a: int) -> MapTable:
    _budaghyan_gate(field, a)
    return from_expression(field, "x^3 + a^-1*Tr_3(a^3*x^9 + a^6*x^18)", {"a": a})


def budaghyan_f2(field: FieldSpec, a: int) -> MapTable:
    _budaghyan_gate(field, a)
    return from_expression(field, "x^3 + a^-1*Tr_3(a^3*x^9 + a^6*x^18)^2", {"a": a})


def budaghyan_f1_inner(field: FieldSpec, a: int) -> MapTable:
    """f1' with f1 = f1'(x^3)."""
    _budaghyan_gate(field, a)
    return from_expression(field, "x + a^-1*Tr_3(a^3*x^3 + a^6*x^6)", {"a": a})


def budaghyan_f2_inner(field: FieldSpec, a: int) -> MapTable:
    _budaghyan_gate(field, a)
    return from_expression(field, "x + a^-1*Tr_3(a^3*x^3 + a^6*x^6)^2", {"a": a})


def dobbertin(field: FieldSpec, g: int) -> MapTable:
    """x^d with d = 2^4g + 2^3g + 2^2g + 2^g - 1 on F_2^(5g)."""
    _binary(field)
    if field.n != 5 * g:
        raise HypothesisError("n = 5g", f"n={field.n} but g={g}")
    return monomial(field, 2**(4 * g) + 2**(3 * g) + 2**(2 * g) + 2**g - 1)


def _chk_gate(field: FieldSpec, alpha: int, beta: int, gamma: int) -> None:
    _binary(field)
    if field.n % 2:
        raise HypothesisError("n even")
    for name, value in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        _nonzero(name, value)
    if field.absolute_trace(field.mul(beta, alpha)) != 1:
        raise HypothesisError("Tr(beta alpha) = 1")
    xs = field.elements()
    linear_image = field.add(field.power(xs, 2), field.mul(alpha, xs))
    if np.any(linear_image == gamma):
        raise HypothesisError("gamma not in {x^2 + alpha x}")


def chk_apn_inner(field: FieldSpec, alpha: int, beta: int, gamma: int) -> MapTable:
    """x^2 + alpha x + gamma Tr(alpha^-3 x^3 + beta x), a permutation."""
    _chk_gate(field, alpha, beta, gamma)
    inner = from_expression(field, "x^2 + alpha*x + gamma*Tr(alpha^-3*x^3 + beta*x)",
                            {"alpha": alpha, "beta": beta, "gamma": gamma})
    if not inner.is_permutation():
        raise AssertionError(f"inner map for (alpha, beta, gamma)=({alpha}, {beta}, {gamma}) is not bijective")
    return inner


def chk_apn(field: FieldSpec, alpha: int, beta: int, gamma: int) -> MapTable:
    """x^6 + alpha x^3 + gamma Tr(alpha^-3 x^9 + beta x^3)."""
    chk_apn_inner(field, alpha, beta, gamma)
    return from_expression(field, "x^6 + alpha*x^3 + gamma*Tr(alpha^-3*x^9 + beta*x^3)",
                           {"alpha": alpha, "beta": beta, "gamma": gamma})


def find_chk_parameters(field: FieldSpec) -> tuple[int, int, int]:
    """First admissible (alpha, beta, gamma) in code order."""
    _binary(field)
    xs = field.elements()
    for alpha in range(1, field.q):
        traces = np.asarray(field.absolute_trace(field.mul(alpha, xs)))
        betas = np.nonzero(traces == 1)[0]
        linear_image = np.zeros(field.q, dtype=bool)
        linear_image[field.add(field.power(xs, 2), field.mul(alpha, xs))] = True
        gammas = np.nonzero(~linear_image)[0]
        gammas = gammas[gammas != 0]
        if betas.size and gammas.size:
            return alpha, int(betas[0]), int(gammas[0])
    raise HypothesisError("admissible (alpha, beta, gamma)", f"no admissible triple on {field.record()}")


# -- bivariate families ------------------------------------------------------------

def first_non_cube(field: FieldSpec, m: int) -> int:
    half = field.subfield_elements(m)
    candidates = half[~np.asarray(field.is_cube(half, m))]
    if candidates.size == 0:
        raise HypothesisError("alpha not a cube", f"every element of the subfield of degree {m} is a cube")
    return int(candidates[0])


def _zhou_pott_gate(field: FieldSpec, i: int, k: int, alpha: int | None) -> tuple[int, int]:
    m = _even_half(field)
    if m < 2 or m % 2:
        raise HypothesisError("m >= 2 even", f"m={m}")
    if i < 2 or i % 2:
        raise HypothesisError("i >= 2 even", f"i={i}")
    if gcd(k, m) != 1:
        raise HypothesisError("gcd(k, m) = 1", f"gcd({k}, {m}) = {gcd(k, m)}")
    if alpha is None:
        return m, first_non_cube(field, m)
    if not 0 <= alpha < field.q or not field.in_subfield(alpha, m):
        raise HypothesisError("alpha in F_2^m", f"alpha={alpha} is not in the half field")
    if field.is_cube(alpha, m):
        raise HypothesisError("alpha not a cube", f"alpha={alpha} is a cube in F_2^{m}")
    return m, alpha


def zhou_pott_f(field: FieldSpec, i: int, k: int, alpha: int | None = None) -> BivariateMap:
    """(x^(2^k+1) + alpha y^((2^k+1) 2^i), x y) on F_2^m x F_2^m, m = n/2."""
    m, alpha = _zhou_pott_gate(field, i, k, alpha)
    e = 2**k + 1

    def components(x, y):
        g = field.add(field.power(x, e), field.mul(alpha, field.power(y, e * 2**i)))
        return g, field.mul(x, y)

    return BivariateMap.from_functions(field, components)


def zhou_pott_g(field: FieldSpec, i: int, k: int, alpha: int | None = None) -> BivariateMap:
    """(x^(2^k+1) + alpha y^(2^k+1), x y^(2^(m-i)))."""
    m, alpha = _zhou_pott_gate(field, i, k, alpha)
    e = 2**k + 1
    twist = 2**((m - i) % m)

    def components(x, y):
        g = field.add(field.power(x, e), field.mul(alpha, field.power(y, e)))
        return g, field.mul(x, field.power(y, twist))

    return BivariateMap.from_functions(field, components)


def _gologlu_gate(field: FieldSpec, k: int, odd_m: bool) -> int:
    m = _even_half(field)
    if gcd(3 * k, m) != 1:
        raise HypothesisError("gcd(3k, m) = 1", f"gcd({3 * k}, {m}) = {gcd(3 * k, m)}")
    if odd_m and m % 2 == 0:
        raise HypothesisError("m odd", f"m={m}")
    return m


def _gologlu_first(field: FieldSpec, x, y, k: int):
    e = 2**k
    return field.add(field.add(field.power(x, e + 1), field.mul(x, field.power(y, e))),
                     field.power(y, e + 1))


def gologlu_f1(field: FieldSpec, k: int) -> BivariateMap:
    _gologlu_gate(field, k, odd_m=False)
    e = 2**(2 * k)

    def components(x, y):
        h = field.add(field.add(field.power(x, e + 1), field.mul(field.power(x, e), y)),
                      field.power(y, e + 1))
        return _gologlu_first(field, x, y, k), h

    return BivariateMap.from_functions(field, components)


def gologlu_f2(field: FieldSpec, k: int) -> BivariateMap:
    _gologlu_gate(field, k, odd_m=True)
    e = 2**(3 * k)

    def components(x, y):
        h = field.add(field.mul(field.power(x, e), y), field.mul(x, field.power(y, e)))
        return _gologlu_first(field, x, y, k), h

    return BivariateMap.from_functions(field, components)


# -- pinned examples -------------------------------------------------------------

NAMED_EXAMPLES: dict[str, tuple[int, str]] = {
    "min7": (7, "x^3 + x^64 + x^16 + x^4"),
    "min11": (11, "x^3 + x^256"),
    "dobbertin-g2": (10, "x^339"),
    "binomial": (4, "x^3 + x^4"),
}


def named_examples(name: str) -> MapTable:
    if name not in NAMED_EXAMPLES:
        raise HypothesisError("known example", f"unknown example {name!r}; choose from {sorted(NAMED_EXAMPLES)}")
    n, expr = NAMED_EXAMPLES[name]
    return from_expression(build_field(2, n), expr)


# -- registry ------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int | None = None
    m: int | None = None
    i: int | None = None
    k: int | None = None
    g: int | None = None
    a: int | None = None
    alpha: int | None = None
    beta: int | None = None
    gamma: int | None = None
    name: str | None = None

    def params(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None and k != "family"}

    def require(self, *names: str) -> list[int]:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise HypothesisError(f"parameter {missing[0]}", f"family {self.family} needs {', '.join(missing)}")
        return [getattr(self, n) for n in names]


@dataclass(frozen=True)
class Family:
    id: str
    summary: str
    params: tuple[str, ...]
    build: Callable[[FamilySpec], MapTable | BivariateMap]
    bivariate: bool = False


def _field_n(spec: FamilySpec) -> FieldSpec:
    (n,) = spec.require("n")
    return build_field(2, n)


def _field_times(spec: FamilySpec, attr: str, factor: int) -> FieldSpec:
    (v,) = spec.require(attr)
    return build_field(2, factor * v)


def _build_chk(spec: FamilySpec) -> MapTable:
    field = _field_n(spec)
    if spec.alpha is None and spec.beta is None and spec.gamma is None:
        return chk_apn(field, *find_chk_parameters(field))
    return chk_apn(field, *spec.require("alpha", "beta", "gamma"))


FAMILIES: dict[str, Family] = {f.id: f for f in (
    Family("gold", "x^(2^k+1)", ("n", "k"),
           lambda s: gold(_field_n(s), *s.require("k"))),
    Family("monomial", "x^k", ("n", "k"),
           lambda s: monomial(_field_n(s), *s.require("k"))),
    Family("binomial", "x^3 + x^4", ("n",),
           lambda s: binomial_x3_x4(_field_n(s))),
    Family("cube_plus_trace", "x^3 + Tr(x^9)", ("n",),
           lambda s: cube_plus_trace(_field_n(s))),
    Family("kyureghyan_2to1", "x^3 + a^-1 Tr(a^3 x^9), n odd", ("n", "a"),
           lambda s: kyureghyan_2to1(_field_n(s), *s.require("a"))),
    Family("budaghyan_f1", "x^3 + a^-1 Tr_3(a^3 x^9 + a^6 x^18) on F_2^(3m)", ("m", "a"),
           lambda s: budaghyan_f1(_field_times(s, "m", 3), *s.require("a"))),
    Family("budaghyan_f2", "x^3 + a^-1 Tr_3(a^3 x^9 + a^6 x^18)^2 on F_2^(3m)", ("m", "a"),
           lambda s: budaghyan_f2(_field_times(s, "m", 3), *s.require("a"))),
    Family("dobbertin", "x^(2^4g + 2^3g + 2^2g + 2^g - 1) on F_2^(5g)", ("g",),
           lambda s: dobbertin(_field_times(s, "g", 5), *s.require("g"))),
    Family("chk_apn", "x^6 + alpha x^3 + gamma Tr(alpha^-3 x^9 + beta x^3), n even", ("n", "alpha", "beta", "gamma"),
           _build_chk),
    Family("zhou_pott_f", "(x^(2^k+1) + alpha y^((2^k+1)2^i), xy) on F_2^m x F_2^m", ("m", "i", "k", "alpha"),
           lambda s: zhou_pott_f(_field_times(s, "m", 2), *s.require("i", "k"), alpha=s.alpha), bivariate=True),
    Family("zhou_pott_g", "(x^(2^k+1) + alpha y^(2^k+1), x y^(2^(m-i)))", ("m", "i", "k", "alpha"),
           lambda s: zhou_pott_g(_field_times(s, "m", 2), *s.require("i", "k"), alpha=s.alpha), bivariate=True),
    Family("gologlu_f1", "Goloğlu f1 on F_2^m x F_2^m, gcd(3k, m) = 1", ("m", "k"),
           lambda s: gologlu_f1(_field_times(s, "m", 2), *s.require("k")), bivariate=True),
    Family("gologlu_f2", "Goloğlu f2 on F_2^m x F_2^m, gcd(3k, m) = 1, m odd", ("m", "k"),
           lambda s: gologlu_f2(_field_times(s, "m", 2), *s.require("k")), bivariate=True),
    Family("named", "pinned examples: " + ", ".join(NAMED_EXAMPLES), ("name",),
           lambda s: named_examples(*s.require("name"))),
)}


def build_family(spec: FamilySpec) -> MapTable | BivariateMap:
    if spec.family not in FAMILIES:
        raise HypothesisError("known family", f"unknown family {spec.family!r}; choose from {sorted(FAMILIES)}")
    logger.debug("building family %s with %s", spec.family, spec.params())
    return FAMILIES[spec.family].build(spec)
