"""Representations of maps F_q -> F_q and conversions between them.

A :class:`MapTable` (the full lookup table) is the substrate every analysis
works on. :class:`PolyRepr` is the unique interpolating polynomial of degree
< q, and :class:`BivariateMap` a pair of component tables over the half field
F_{p^m} of F_{p^{2m}}.

Half-field elements are taken from the subfield F_{p^m} inside the ambient
field; the half-field code of such an element is its rank in the sorted list
of subfield codes, and a pair (x, y) is stored at ``rank(x) * p^m + rank(y)``.
"""

import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
from mcp.server.fastmcp.utilities.logging import get_logger

from .errors import ExpressionError, FieldError
from .expressions import evaluate_expression
from .finite_field import FieldSpec, parse_field_record

logger = get_logger(__name__)


def _frozen(values, q: int) -> np.ndarray:
    arr = np.array(values, dtype=np.int64).reshape(-1)
    if arr.size and (arr.min() < 0 or arr.max() >= q):
        raise FieldError(f"table entries must lie in 0..{q - 1}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MapTable:
    field: FieldSpec
    table: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.table, self.field.q)
        if arr.size != self.field.q:
            raise FieldError(f"table has {arr.size} entries, expected q={self.field.q}")
        object.__setattr__(self, "table", arr)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MapTable) and self.field == other.field
                and np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash(self.digest())

    def __len__(self) -> int:
        return self.field.q

    def __call__(self, x):
        out = self.table[np.asarray(x, dtype=np.int64)]
        return int(out) if np.ndim(x) == 0 else out

    @property
    def q(self) -> int:
        return self.field.q

    def image(self) -> np.ndarray:
        return np.unique(self.table)

    def image_size(self) -> int:
        return int(self.image().size)

    def is_permutation(self) -> bool:
        return self.image_size() == self.q

    def digest(self) -> str:
        h = hashlib.sha256(self.field.record().encode())
        h.update(self.table.astype("<i8").tobytes())
        return h.hexdigest()

    def compose_power(self, k: int) -> "MapTable":
        """x -> f(x^k)."""
        return MapTable(self.field, self.table[self.field.power(self.field.elements(), k)])

    def restrict(self, elements: np.ndarray) -> np.ndarray:
        return self.table[np.asarray(elements, dtype=np.int64)]


def identity_map(field: FieldSpec) -> MapTable:
    return MapTable(field, field.elements())


def from_expression(field: FieldSpec, expr: str, bindings: dict[str, int] | None = None) -> MapTable:
    """Tabulate an expression such as ``x^3 + Tr_1(x^9)``."""
    return MapTable(field, evaluate_expression(field, expr, bindings))


def shift_normalize(f: MapTable, c: int = 0, u: int = 0) -> MapTable:
    """x -> f(x + c) + u."""
    field = f.field
    shifted = f.table[field.add(field.elements(), c)]
    return MapTable(field, field.add(shifted, u))


# -- polynomials --------------------------------------------------------------

@dataclass(frozen=True)
class PolyRepr:
    field: FieldSpec
    coeffs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        exps = [e for e, _ in self.coeffs]
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise ExpressionError("exponents must be strictly increasing")
        if any(e < 0 or e >= self.field.q for e in exps):
            raise ExpressionError(f"exponents must lie in 0..{self.field.q - 1}")
        if any(c == 0 or not 0 < c < self.field.q for _, c in self.coeffs):
            raise ExpressionError("coefficients must be nonzero element codes")

    @property
    def exponents(self) -> list[int]:
        return [e for e, _ in self.coeffs]

    def evaluate(self) -> MapTable:
        field = self.field
        xs = field.elements()
        acc = np.zeros(field.q, dtype=np.int64)
        for e, c in self.coeffs:
            acc = field.add(acc, field.mul(c, field.power(xs, e)))
        return MapTable(field, acc)

    def coefficients_in_subfield(self, m: int) -> bool:
        return all(self.field.in_subfield(c, m) for _, c in self.coeffs)


def interpolate(f: MapTable) -> PolyRepr:
    """Unique polynomial of degree < q agreeing with f everywhere.

    Uses the Lagrange form over all q points: c_0 = f(0) and
    c_j = -sum_a f(a) a^(q-1-j) for 1 <= j <= q-1 (with 0^0 = 1).
    """
    field = f.field
    q = field.q
    values = f.table
    coeffs = []
    if values[0]:
        coeffs.append((0, int(values[0])))
    fa = values[1:]
    nz = fa != 0
    log_f = field.log[fa[nz]]
    log_a = field.log[np.arange(1, q, dtype=np.int64)[nz]]
    for j in range(1, q):
        e = q - 1 - j
        terms = field.exp[(log_f + e * log_a) % (q - 1)]
        s = field.field_sum(terms)
        if j == q - 1:
            s = field.add(s, int(values[0]))
        c = field.neg(s)
        if c:
            coeffs.append((j, c))
    logger.debug("interpolated %d-point table: %d terms", q, len(coeffs))
    return PolyRepr(field, tuple(coeffs))


def degree(pr: PolyRepr) -> int:
    return max(pr.exponents, default=0)


def _p_weight(e: int, p: int) -> int:
    total = 0
    while e:
        e, d = divmod(e, p)
        total += d
    return total


def is_DO(pr: PolyRepr) -> bool:
    """Every exponent is p^i + p^j (i != j when p = 2)."""
    return all(_p_weight(e, pr.field.p) == 2 for e in pr.exponents)


def is_quadratic(pr: PolyRepr) -> bool:
    """DO part plus an F_p-affine part: every exponent has p-weight <= 2."""
    return all(_p_weight(e, pr.field.p) <= 2 for e in pr.exponents)


def is_k_divisible(f: MapTable, k: int) -> bool:
    """f(x) = f(wx) for every w of order dividing k."""
    field = f.field
    if k < 1 or (field.q - 1) % k:
        raise FieldError(f"k={k} does not divide q-1={field.q - 1}")
    if k == 1:
        return True
    omega = field.power(field.generator, (field.q - 1) // k)
    return bool(np.array_equal(f.table[field.mul(omega, field.elements())], f.table))


# -- bivariate maps ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BivariateMap:
    field: FieldSpec
    G: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        if self.field.n % 2:
            raise FieldError(f"bivariate maps need an even extension degree, got n={self.field.n}")
        for name in ("G", "H"):
            arr = _frozen(getattr(self, name), self.field.q)
            if arr.size != self.field.q:
                raise FieldError(f"{name} must have q={self.field.q} entries")
            if not np.all(self.field.in_subfield(arr, self.m)):
                raise FieldError(f"{name} takes values outside the half field")
            object.__setattr__(self, name, arr)

    @property
    def m(self) -> int:
        return self.field.n // 2

    @cached_property
    def half(self) -> np.ndarray:
        return self.field.subfield_elements(self.m)

    @cached_property
    def rank(self) -> np.ndarray:
        r = np.full(self.field.q, -1, dtype=np.int64)
        r[self.half] = np.arange(self.half.size, dtype=np.int64)
        return r

    def pair_code(self, x, y):
        return self.rank[x] * self.half.size + self.rank[y]

    def evaluate(self, x, y):
        idx = self.pair_code(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        return self.G[idx], self.H[idx]

    @classmethod
    def from_functions(cls, field: FieldSpec,
                       func: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]) -> "BivariateMap":
        """Tabulate func(x, y) -> (G, H) over all pairs of half-field elements."""
        half = field.subfield_elements(field.n // 2)
        xs = np.repeat(half, half.size)
        ys = np.tile(half, half.size)
        g, h = func(xs, ys)
        return cls(field, np.broadcast_to(g, xs.shape), np.broadcast_to(h, xs.shape))


def check_basis(field: FieldSpec, u1: int, u2: int) -> tuple[int, int]:
    """Return the dual basis, raising FieldError when (u1, u2) is not a basis."""
    if field.n % 2:
        raise FieldError("a basis over the half field needs n even")
    return field.dual_basis(u1, u2, field.n // 2)


def default_basis(field: FieldSpec) -> tuple[int, int]:
    """(1, g) with g the table generator, which never lies in a proper subfield."""
    return 1, field.generator


def bivariate_to_univariate(bv: BivariateMap, u1: int, u2: int) -> MapTable:
    field, m = bv.field, bv.m
    v1, v2 = check_basis(field, u1, u2)
    zs = field.elements()
    x = field.trace_relative(field.mul(v1, zs), m)
    y = field.trace_relative(field.mul(v2, zs), m)
    g, h = bv.evaluate(x, y)
    return MapTable(field, field.add(field.mul(g, u1), field.mul(h, u2)))


def univariate_to_bivariate(f: MapTable, u1: int, u2: int) -> BivariateMap:
    """Inverse of :func:`bivariate_to_univariate` for the same basis."""
    field = f.field
    m = field.n // 2
    v1, v2 = check_basis(field, u1, u2)

    def components(x, y):
        w = f.table[field.add(field.mul(x, u1), field.mul(y, u2))]
        return field.trace_relative(field.mul(v1, w), m), field.trace_relative(field.mul(v2, w), m)

    return BivariateMap.from_functions(field, components)


# -- text formats -------------------------------------------------------------

def dump_lut(f: MapTable) -> str:
    return f"{f.field.record()}\n{' '.join(str(int(v)) for v in f.table)}\n"


def load_lut(text: str, cap: int | None = None) -> MapTable:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2:
        raise ExpressionError("LUT text must have a field record line and a table line")
    field = parse_field_record(lines[0], cap=cap)
    try:
        values = [int(tok) for tok in lines[1].split()]
    except ValueError:
        raise ExpressionError("LUT table line must hold integers")
    return MapTable(field, values)


def format_poly(pr: PolyRepr) -> str:
    return " ".join(f"{e}:{c}" for e, c in pr.coeffs)


def parse_poly(field: FieldSpec, text: str) -> PolyRepr:
    pairs = []
    for tok in text.split():
        try:
            e, c = (int(v) for v in tok.split(":"))
        except ValueError:
            raise ExpressionError(f"polynomial terms are e:c pairs, got {tok!r}")
        pairs.append((e, c))
    return PolyRepr(field, tuple(sorted(pairs)))


def dump_biv(bv: BivariateMap) -> str:
    """Field record of F_{p^{2m}}, then the G line, then the H line.

    Entry k of each line is the value at the pair (x, y) with
    k = rank(x) * p^m + rank(y), where rank is the position of an element in
    the ascending list of F_{p^{2m}} codes that lie in the subfield F_{p^m}.
    Values are F_{p^{2m}} codes of subfield elements.
    """
    g = " ".join(str(int(v)) for v in bv.G)
    h = " ".join(str(int(v)) for v in bv.H)
    return f"{bv.field.record()}\n{g}\n{h}\n"


def load_biv(text: str, cap: int | None = None) -> BivariateMap:
    """Parse the layout written by :func:`dump_biv`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 3:
        raise ExpressionError("bivariate text must have a field record line and two table lines")
    field = parse_field_record(lines[0], cap=cap)
    try:
        g, h = ([int(tok) for tok in ln.split()] for ln in lines[1:])
    except ValueError:
        raise ExpressionError("bivariate table lines must hold integers")
    return BivariateMap(field, g, h)
