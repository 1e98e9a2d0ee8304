"""Image/preimage and differential analytics of a MapTable.

The difference distribution table is never materialised: rows are streamed in
batches of directions, each batch reduced to a histogram with one
``np.bincount``.
"""

from dataclasses import dataclass, field as dc_field
from math import ceil

import numpy as np
from mcp.server.fastmcp.utilities.logging import get_logger

from .errors import FieldError
from .finite_field import FieldSpec
from .map_repr import MapTable, shift_normalize

logger = get_logger(__name__)

_BATCH_CELLS = 1 << 20

LINEAR = "linear-subspace"
AFFINE = "affine-subspace"
NEITHER = "neither"


@dataclass(frozen=True)
class PreimageProfile:
    q: int
    image_size: int
    M: dict[int, int]
    N: int
    omega: np.ndarray = dc_field(repr=False)

    def M_r(self, r: int) -> int:
        return self.M.get(r, 0)

    @property
    def max_preimages(self) -> int:
        return max(self.M, default=0)

    def minimal_image_data(self, d: int) -> tuple[list[int], int] | None:
        """(D, eps) when |Image| = ceil(q/(d+1)) = (q+eps)/(d+1), 1 <= eps <= d."""
        if self.image_size != ceil(self.q / (d + 1)):
            return None
        eps = self.image_size * (d + 1) - self.q
        if not 1 <= eps <= d:
            return None
        D = np.nonzero((self.omega > 0) & (self.omega != d + 1))[0]
        return [int(y) for y in D], eps

    def summary(self) -> dict:
        return {
            "image_size": self.image_size,
            "M": {str(r): c for r, c in self.M.items()},
            "N": self.N,
            "omega_zero": int(self.omega[0]),
            "is_permutation": self.image_size == self.q,
        }


def _ensure(condition: bool, message: str) -> None:
    if not condition:
        raise AssertionError(message)


def preimage_profile(f: MapTable) -> PreimageProfile:
    q = f.q
    omega = np.bincount(f.table, minlength=q).astype(np.int64)
    sizes, counts = np.unique(omega[omega > 0], return_counts=True)
    M = {int(r): int(c) for r, c in zip(sizes, counts)}
    N = int((omega * omega).sum())
    image_size = int((omega > 0).sum())
    omega.setflags(write=False)
    _ensure(sum(M.values()) == image_size, "sum M_r != |Image(f)|")
    _ensure(sum(r * c for r, c in M.items()) == q, "sum r M_r != q")
    _ensure(sum(r * r * c for r, c in M.items()) == N, "sum r^2 M_r != N(f)")
    return PreimageProfile(q, image_size, M, N, omega)


def is_k_to_1(pp: PreimageProfile, k: int) -> bool:
    return k >= 1 and pp.M == {k: pp.image_size}


def is_almost_k_to_1(pp: PreimageProfile, k: int) -> bool:
    if k < 2:
        return False
    expected = {1: 1}
    if pp.image_size > 1:
        expected[k] = pp.image_size - 1
    return pp.M == expected


def cauchy_schwarz_bound(pp: PreimageProfile) -> int:
    """ceil(q^2 / N(f)), a lower bound on |Image(f)|."""
    return -(-pp.q * pp.q // pp.N)


def normalize_zero(f: MapTable) -> tuple[MapTable, int, int] | None:
    """Shift f to g(x) = f(x + c) - y0 with g(0) = 0 and omega_g(0) = 1.

    y0 is the smallest value with exactly one preimage c; returns (g, c, -y0),
    or None when no value has a single preimage.
    """
    omega = np.bincount(f.table, minlength=f.q)
    singles = np.nonzero(omega == 1)[0]
    if singles.size == 0:
        return None
    y0 = int(singles[0])
    c = int(np.nonzero(f.table == y0)[0][0])
    u = f.field.neg(y0)
    return shift_normalize(f, c, u), c, u


# -- differential analytics -----------------------------------------------------

@dataclass(frozen=True)
class DifferentialProfile:
    q: int
    d: int
    t0: int
    zero_solutions: np.ndarray = dc_field(repr=False)
    max_row: np.ndarray = dc_field(repr=False)

    def summary(self) -> dict:
        zs = self.zero_solutions[1:]
        return {
            "d": self.d,
            "t0": self.t0,
            "zero_solution_counts": {str(int(v)): int(c) for v, c in zip(*np.unique(zs, return_counts=True))},
            "apn": self.d == 2,
        }


def _difference_rows(f: MapTable, directions: np.ndarray) -> np.ndarray:
    """f(x + a) - f(x) for every a in directions (rows) and every x."""
    field = f.field
    xs = field.elements()
    if field.p == 2:
        return f.table[xs[None, :] ^ directions[:, None]] ^ f.table[None, :]
    shifted = field.add(xs[None, :], directions[:, None])
    return field.sub(f.table[shifted], np.broadcast_to(f.table, shifted.shape))


def _row_batches(q: int):
    batch = max(1, _BATCH_CELLS // q)
    for start in range(1, q, batch):
        yield np.arange(start, min(q, start + batch), dtype=np.int64)


def differential_profile(f: MapTable) -> DifferentialProfile:
    q = f.q
    zero = np.zeros(q, dtype=np.int64)
    max_row = np.zeros(q, dtype=np.int64)
    for directions in _row_batches(q):
        diffs = _difference_rows(f, directions)
        rows = directions.size
        offsets = (np.arange(rows, dtype=np.int64) * q)[:, None]
        hist = np.bincount((diffs + offsets).ravel(), minlength=rows * q).reshape(rows, q)
        zero[directions] = hist[:, 0]
        max_row[directions] = hist.max(axis=1)
    d = int(max_row[1:].max()) if q > 1 else 0
    t0 = int((zero[1:] > 0).sum())
    zero.setflags(write=False)
    max_row.setflags(write=False)
    logger.debug("differential profile over q=%d: d=%d t0=%d", q, d, t0)
    return DifferentialProfile(q, d, t0, zero, max_row)


def ddt_naive(f: MapTable) -> np.ndarray:
    """Full q x q difference distribution table by direct double loop."""
    field = f.field
    q = f.q
    ddt = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for x in range(q):
            ddt[a, field.sub(int(f.table[field.add(x, a)]), int(f.table[x]))] += 1
    return ddt


def is_zero_difference_balanced(f: MapTable, d: int, dp: DifferentialProfile | None = None,
                                pp: PreimageProfile | None = None) -> bool:
    dp = dp or differential_profile(f)
    balanced = bool(np.all(dp.zero_solutions[1:] == d))
    if balanced:
        pp = pp or preimage_profile(f)
        _ensure(pp.N == (d + 1) * f.q - d, "zero-difference balanced map with N(f) != (d+1)q - d")
    return balanced


def is_d_vanishing(dp: DifferentialProfile, d: int) -> bool:
    zs = dp.zero_solutions[1:]
    return bool(np.all((zs > 0) & (zs <= d)))


@dataclass(frozen=True)
class DifferentialSet:
    a: int
    elements: np.ndarray = dc_field(repr=False)

    @property
    def size(self) -> int:
        return int(self.elements.size)

    @property
    def contains_zero(self) -> bool:
        return bool(self.elements.size and self.elements[0] == 0)


def differential_set(f: MapTable, a: int) -> DifferentialSet:
    if a == 0:
        raise FieldError("differential sets need a nonzero direction")
    row = _difference_rows(f, np.array([a], dtype=np.int64))[0]
    return DifferentialSet(a, np.unique(row))


def _fp_rank(field: FieldSpec, elements: np.ndarray, stop_above: int | None = None) -> int:
    """Rank over F_p of elements viewed as digit vectors."""
    p, n = field.p, field.n
    powers = p ** np.arange(n, dtype=np.int64)
    mat = (elements[:, None] // powers[None, :]) % p
    rank = 0
    for col in range(n):
        nz = np.nonzero(mat[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        mat[[rank, piv]] = mat[[piv, rank]]
        pivot_row = (mat[rank] * pow(int(mat[rank, col]), -1, p)) % p
        mat[rank] = pivot_row
        factors = mat[:, col].copy()
        factors[rank] = 0
        mat = (mat - factors[:, None] * pivot_row[None, :]) % p
        rank += 1
        if stop_above is not None and rank > stop_above:
            break
    return rank


def _is_linear(field: FieldSpec, elements: np.ndarray) -> bool:
    size = int(elements.size)
    dim = 0
    while field.p**dim < size:
        dim += 1
    if field.p**dim != size:
        return False
    return _fp_rank(field, elements, stop_above=dim) == dim


def subspace_type(field: FieldSpec, ds: DifferentialSet) -> str:
    elements = ds.elements
    if elements.size == 0:
        return NEITHER
    if ds.contains_zero and _is_linear(field, elements):
        return LINEAR
    if _is_linear(field, np.asarray(field.sub(elements, int(elements[0])))):
        return AFFINE
    return NEITHER


def iter_differential_sets(f: MapTable):
    """Yield D_a(f) for a = 1, ..., q-1."""
    for directions in _row_batches(f.q):
        for a, row in zip(directions, _difference_rows(f, directions)):
            yield DifferentialSet(int(a), np.unique(row))


def all_differential_sets_linear(f: MapTable) -> bool:
    return all(subspace_type(f.field, ds) == LINEAR for ds in iter_differential_sets(f))


def is_crooked(f: MapTable) -> bool:
    """Every differential set is an affine hyperplane."""
    field = f.field
    if field.p != 2:
        raise FieldError("crookedness is defined for binary fields only")
    half = f.q // 2
    for ds in iter_differential_sets(f):
        if ds.size != half or subspace_type(field, ds) == NEITHER:
            return False
    return True
