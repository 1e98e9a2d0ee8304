"""Walsh spectra of maps on binary fields.

W(b, a) = sum_x (-1)^(Tr(b f(x)) + Tr(a x)). The trace form Tr(a x) is the
parity of ``mask(a) & x`` where mask(a) has bit i equal to Tr(a 2^i), so one
fast Walsh-Hadamard transform of the +-1 vector of a component gives the
whole row: W(b, a) = H[mask(a)].
"""

import csv
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from pathlib import Path

import numpy as np
from mcp.server.fastmcp.utilities.logging import get_logger

from .config import get_settings
from .errors import CapExceededError, FieldError, HypothesisError, ImageSetsError
from .finite_field import FieldSpec
from .map_repr import MapTable

logger = get_logger(__name__)

NOT_PLATEAUED = -1


def _require_binary(field: FieldSpec) -> None:
    if field.p != 2:
        raise FieldError("Walsh analysis is implemented for binary fields only")


@lru_cache(maxsize=32)
def trace_masks(field: FieldSpec) -> np.ndarray:
    """mask(a) for every a, with Tr(a x) = parity(mask(a) & x)."""
    xs = field.elements()
    masks = np.zeros(field.q, dtype=np.int64)
    for i in range(field.n):
        masks |= np.asarray(field.absolute_trace(field.mul(xs, 1 << i)), dtype=np.int64) << i
    masks.setflags(write=False)
    return masks


def _parity(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def fwht(vectors: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis (length 2^n)."""
    h = np.array(vectors, dtype=np.int64)
    size = h.shape[-1]
    lead = h.shape[:-1]
    step = 1
    while step < size:
        view = h.reshape(*lead, size // (2 * step), 2, step)
        lo = view[..., 0, :].copy()
        hi = view[..., 1, :]
        view[..., 0, :] = lo + hi
        view[..., 1, :] = lo - hi
        step *= 2
    return h


def _component_signs(f: MapTable, bs: np.ndarray) -> np.ndarray:
    masks = trace_masks(f.field)
    return 1 - 2 * _parity(masks[bs][:, None] & f.table[None, :])


def component_spectrum(f: MapTable, b: int) -> np.ndarray:
    """W(b, a) for every a, indexed by a."""
    _require_binary(f.field)
    if b == 0:
        raise FieldError("component index b must be nonzero")
    h = fwht(_component_signs(f, np.array([b], dtype=np.int64)))[0]
    return h[trace_masks(f.field)]


def naive_walsh(f: MapTable, b: int) -> np.ndarray:
    """Direct O(q^2) evaluation of W(b, a), one a at a time."""
    field = f.field
    _require_binary(field)
    xs = field.elements()
    tb = np.asarray(field.absolute_trace(field.mul(b, f.table)))
    out = np.zeros(field.q, dtype=np.int64)
    for a in range(field.q):
        exponent = tb ^ np.asarray(field.absolute_trace(field.mul(a, xs)))
        out[a] = int((1 - 2 * exponent).sum())
    return out


def walsh_zero_values(f: MapTable) -> np.ndarray:
    """W(b, 0) for every b (b = 0 included), from one transform of the preimage counts."""
    field = f.field
    _require_binary(field)
    cap = get_settings().walsh_zero_cap
    if field.n > cap:
        raise CapExceededError(f"W(b,0) mode is capped at n={cap}, got n={field.n}")
    omega = np.bincount(f.table, minlength=field.q).astype(np.int64)
    return fwht(omega)[trace_masks(field)]


def component_amplitude(spectrum: np.ndarray, n: int) -> int:
    """Amplitude t if every |W| lies in {0, 2^((n+t)/2)}, else NOT_PLATEAUED."""
    values = np.unique(np.abs(spectrum))
    values = values[values != 0]
    if values.size != 1:
        return NOT_PLATEAUED
    v = int(values[0])
    e = v.bit_length() - 1
    if v != 1 << e or 2 * e < n:
        return NOT_PLATEAUED
    return 2 * e - n


@dataclass(frozen=True)
class WalshProfile:
    n: int
    zero_values: np.ndarray = dc_field(repr=False)
    amplitudes: np.ndarray | None = dc_field(default=None, repr=False)
    spectrum: dict[int, int] | None = None

    @property
    def full(self) -> bool:
        return self.amplitudes is not None

    def _need_full(self) -> np.ndarray:
        if self.amplitudes is None:
            raise ImageSetsError("this property needs the full spectrum, not W(b,0) only")
        return self.amplitudes

    @property
    def balanced_count(self) -> int:
        return int((self.zero_values[1:] == 0).sum())

    def zero_value_counts(self) -> tuple[int, int, int]:
        """(N0, N+, N-): W(b,0) equal to 0, +2^((n+1)/2), -2^((n+1)/2) over b != 0."""
        w = self.zero_values[1:]
        level = 1 << ((self.n + 1) // 2)
        return int((w == 0).sum()), int((w == level).sum()), int((w == -level).sum())

    @property
    def bent_count(self) -> int:
        return int((self._need_full()[1:] == 0).sum())

    def amplitude_counts(self) -> dict[int, int]:
        amps = self._need_full()[1:]
        values, counts = np.unique(amps, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    @property
    def plateaued(self) -> bool:
        return bool(np.all(self._need_full()[1:] != NOT_PLATEAUED))

    def summary(self) -> dict:
        out = {
            "n": self.n,
            "balanced_count": self.balanced_count,
            "zero_values": {str(int(v)): int(c) for v, c in zip(*np.unique(self.zero_values[1:], return_counts=True))},
        }
        if self.n % 2:
            out["N0"], out["Nplus"], out["Nminus"] = self.zero_value_counts()
        if self.full:
            out["bent_count"] = self.bent_count
            out["amplitudes"] = {str(k): v for k, v in self.amplitude_counts().items()}
            out["spectrum"] = {str(k): v for k, v in sorted(self.spectrum.items())}
            out["plateaued"] = self.plateaued
            if self.n % 2:
                out["almost_bent"] = is_almost_bent(self)
            else:
                out["classical"] = is_classical_spectrum(self)
        return out


def _ensure(condition: bool, message: str) -> None:
    if not condition:
        raise AssertionError(message)


def full_profile(f: MapTable, zero_only: bool = False) -> WalshProfile:
    """Per-component amplitudes, W(b,0) and the |W| multiset of a binary map."""
    field = f.field
    _require_binary(field)
    n, q = field.n, field.q
    settings = get_settings()
    zero_values = walsh_zero_values(f)
    omega0 = int((f.table == 0).sum())
    _ensure(int(zero_values[1:].sum()) == q * (omega0 - 1), "sum_b W(b,0) != 2^n (omega(0) - 1)")
    omega = np.bincount(f.table, minlength=q).astype(np.int64)
    _ensure(int((zero_values * zero_values).sum()) == q * int((omega * omega).sum()),
            "sum_b W(b,0)^2 != 2^n N(f)")
    zero_values.setflags(write=False)
    if zero_only:
        return WalshProfile(n, zero_values)
    if n > settings.walsh_cap:
        raise CapExceededError(f"full Walsh spectra are capped at n={settings.walsh_cap}, got n={n}")
    amplitudes = np.full(q, NOT_PLATEAUED, dtype=np.int64)
    spectrum: Counter = Counter()
    batch = settings.walsh_batch
    for start in range(1, q, batch):
        bs = np.arange(start, min(q, start + batch), dtype=np.int64)
        rows = fwht(_component_signs(f, bs))
        _ensure(bool(np.all((rows * rows).sum(axis=1) == q * q)), "Parseval identity failed")
        _ensure(bool(np.array_equal(rows[:, 0], zero_values[bs])), "FWHT disagrees with W(b,0)")
        for b, row in zip(bs, rows):
            amplitudes[b] = component_amplitude(row, n)
        values, counts = np.unique(np.abs(rows), return_counts=True)
        spectrum.update({int(v): int(c) for v, c in zip(values, counts)})
        logger.debug("Walsh batch %d..%d of %d done", start, bs[-1], q - 1)
    amplitudes.setflags(write=False)
    return WalshProfile(n, zero_values, amplitudes, dict(sorted(spectrum.items())))


def is_almost_bent(wp: WalshProfile) -> bool:
    if wp.n % 2 == 0:
        raise FieldError("almost bent is defined for odd n")
    return bool(np.all(wp._need_full()[1:] == 1))


def classical_multiplicities(n: int) -> dict[int, int]:
    """|W| -> multiplicity over all b != 0 and a for the classical spectrum."""
    q = 1 << n
    counts = {
        0: (q - 1) * (q >> 2),
        1 << (n // 2): 2 * (q - 1) * q // 3,
        1 << ((n + 2) // 2): (q - 1) * (q >> 2) // 3,
    }
    _ensure(sum(counts.values()) == (q - 1) * q, "classical multiplicities do not sum to (2^n - 1) 2^n")
    return counts


def is_classical_spectrum(wp: WalshProfile) -> bool:
    if wp.n % 2:
        raise FieldError("the classical spectrum is defined for even n")
    wp._need_full()
    return wp.spectrum == classical_multiplicities(wp.n)


def bent_component_count(wp: WalshProfile) -> int:
    if wp.n % 2:
        raise FieldError("bent components exist only for even n")
    return wp.bent_count


def ab_closed_forms(n: int, N: int, omega0: int) -> tuple[int, int, int]:
    """(N0, N+, N-) predicted from N(f) and omega(0) for an almost bent map."""
    half = 1 << ((n - 3) // 2)
    n0 = (1 << n) - 1 + (1 << (n - 1)) - N // 2
    base = N // 4 - (1 << (n - 2))
    return n0, base + half * (omega0 - 1), base - half * (omega0 - 1)


def ab_statistics(f: MapTable, wp: WalshProfile | None = None) -> tuple[int, int, int]:
    """Directly counted (N0, N+, N-), checked against their closed forms."""
    n = f.field.n
    if n % 2 == 0 or n < 3:
        raise FieldError("AB statistics need odd n >= 3")
    wp = wp or full_profile(f)
    if not is_almost_bent(wp):
        raise HypothesisError("almost bent", "AB statistics need an almost bent map")
    counts = wp.zero_value_counts()
    omega = np.bincount(f.table, minlength=f.q).astype(np.int64)
    N = int((omega * omega).sum())
    _ensure(N % 4 == 0, "N(f) of an almost bent map is not divisible by 4")
    expected = ab_closed_forms(n, N, int(omega[0]))
    _ensure(counts == expected, f"direct counts {counts} differ from closed forms {expected}")
    return counts


def write_spectrum_csv(f: MapTable, path: str | Path, components=None) -> int:
    """Write rows ``b,a,W`` for the given components (all b != 0 by default)."""
    _require_binary(f.field)
    if f.field.n > get_settings().walsh_cap:
        raise CapExceededError(f"spectrum export is capped at n={get_settings().walsh_cap}")
    bs = range(1, f.q) if components is None else components
    rows = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["b", "a", "W"])
        for b in bs:
            for a, w in enumerate(component_spectrum(f, int(b))):
                writer.writerow([int(b), a, int(w)])
                rows += 1
    return rows
