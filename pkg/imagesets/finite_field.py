"""Exact arithmetic in F_{p^n}.

Elements are canonical integer codes 0..q-1: the base-p digits of a code are
the coefficients (low to high) of the residue polynomial modulo the field's
defining polynomial. Addition is digit-wise mod p (plain XOR for p = 2);
multiplication goes through log/exp tables over a fixed generator.

Every arithmetic method accepts a Python int or a numpy integer array and
returns the same kind, so whole tables are processed in one call.
"""

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import galois
import numpy as np
from mcp.server.fastmcp.utilities.logging import get_logger

from .config import get_settings
from .errors import CapExceededError, FieldError

logger = get_logger(__name__)

_CHUNK = 1 << 16


def is_prime(p: int) -> bool:
    return p >= 2 and bool(galois.is_prime(p))


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of m, ascending."""
    if m < 2:
        return []
    primes, _ = galois.factors(m)
    return sorted(int(f) for f in primes)


def gcd_power_lemma(i: int, r: int) -> tuple[int, int]:
    """Closed forms of (gcd(2^i - 1, 2^r + 1), gcd(2^i + 1, 2^r + 1))."""
    g = gcd(i, r)
    minus = 2**g + 1 if (i // g) % 2 == 0 else 1
    plus = 2**g + 1 if (i // g) % 2 == 1 and (r // g) % 2 == 1 else 1
    return minus, plus


# -- polynomials over F_p, coefficient lists low-to-high ---------------------

def _digits_of(code: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        code, d = divmod(code, p)
        out.append(d)
    return out


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial b."""
    a = list(a)
    db = len(b) - 1
    for top in range(len(a) - 1, db - 1, -1):
        c = a[top] % p
        if c:
            shift = top - db
            for j, bj in enumerate(b):
                a[shift + j] = (a[shift + j] - c * bj) % p
    rem = [x % p for x in a[:db]]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def _gf2_rem(a: int, b: int) -> int:
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def is_irreducible(modulus: list[int] | tuple[int, ...], p: int) -> bool:
    """Irreducibility over F_p of a polynomial given low-to-high."""
    if len(modulus) < 2 or not modulus[-1]:
        return False
    return bool(galois.Poly(list(modulus), field=galois.GF(p), order="asc").is_irreducible())


def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree n with the smallest base-p integer encoding."""
    poly = galois.irreducible_poly(p, n, method="min")
    coeffs = tuple(int(c) for c in poly.coeffs[::-1])
    logger.debug("default modulus for F_%d^%d: %s", p, n, list(coeffs))
    return coeffs


@dataclass(frozen=True)
class FieldSpec:
    """A concrete field F_{p^n} with a fixed irreducible modulus.

    Construct through :func:`build_field`, which validates the parameters.
    Tables are built on first use and never mutated afterwards.
    """
    p: int
    n: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.n

    def __repr__(self) -> str:
        return f"FieldSpec({self.record()!r})"

    def record(self) -> str:
        """Single-line field record ``p n c_0 ... c_n``."""
        return " ".join(str(v) for v in (self.p, self.n, *self.modulus))

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # -- scalar polynomial arithmetic, used to bootstrap the tables --------

    def _mulmod(self, a: int, b: int) -> int:
        p, n = self.p, self.n
        if p == 2:
            prod = 0
            while b:
                if b & 1:
                    prod ^= a
                a <<= 1
                b >>= 1
            mod = sum(c << i for i, c in enumerate(self.modulus))
            return _gf2_rem(prod, mod)
        da, db = _digits_of(a, p, n), _digits_of(b, p, n)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        rem = _poly_rem(prod, list(self.modulus), p)
        return sum(c * p**i for i, c in enumerate(rem))

    def _powmod(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mulmod(result, a)
            a = self._mulmod(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        factors = prime_factors(q - 1)
        for g in range(2, q):
            if all(self._powmod(g, (q - 1) // f) != 1 for f in factors):
                return g
        raise FieldError(f"no generator found for modulus {self.modulus}")

    def _mul_const(self, vec: np.ndarray, c: int) -> np.ndarray:
        """Multiply every entry of vec by the constant c (F_p-linear map)."""
        p, n = self.p, self.n
        images = [self._mulmod(c, p**i) for i in range(n)]
        out = np.zeros_like(vec)
        if p == 2:
            for i, img in enumerate(images):
                out ^= np.where((vec >> i) & 1, img, 0)
            return out
        pw = 1
        for img in images:
            digit = (vec // pw) % p
            out = self.add(out, self._scale(digit, img))
            pw *= p
        return out

    def _scale(self, digit: np.ndarray, element: int) -> np.ndarray:
        """digit * element for an array of F_p scalars."""
        p = self.p
        out = np.zeros_like(digit)
        pw = 1
        for e in _digits_of(element, p, self.n):
            out += ((digit * e) % p) * pw
            pw *= p
        return out

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray, int]:
        q = self.q
        g = self._find_generator()
        exp = np.empty(q, dtype=np.int64)
        exp[0] = 1
        filled = 1
        while filled < q - 1:
            take = min(filled, q - 1 - filled)
            step = self._powmod(g, filled)
            for start in range(0, take, _CHUNK):
                stop = min(take, start + _CHUNK)
                exp[filled + start:filled + stop] = self._mul_const(exp[start:stop], step)
            filled += take
        exp[q - 1] = 1
        if np.unique(exp[: q - 1]).size != q - 1:
            raise FieldError(f"modulus {self.modulus} does not define a field")
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1, dtype=np.int64)
        logger.debug("built log/exp tables for %s with generator %d", self.record(), g)
        return exp, log, g

    @property
    def exp(self) -> np.ndarray:
        return self._tables[0]

    @property
    def log(self) -> np.ndarray:
        return self._tables[1]

    @property
    def generator(self) -> int:
        return self._tables[2]

    # -- vectorised arithmetic ---------------------------------------------

    def _check(self, x):
        arr = np.asarray(x, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise FieldError(f"element code out of range 0..{self.q - 1}")
        return arr

    @staticmethod
    def _out(arr: np.ndarray, like):
        if np.ndim(like) == 0 and arr.ndim == 0:
            return int(arr)
        return arr

    def add(self, a, b):
        x, y = self._check(a), self._check(b)
        if self.p == 2:
            return self._out(np.bitwise_xor(x, y), a if np.ndim(b) == 0 else b)
        x, y = np.broadcast_arrays(x, y)
        out = np.zeros(x.shape, dtype=np.int64)
        pw = 1
        for _ in range(self.n):
            out += (((x // pw) + (y // pw)) % self.p) * pw
            pw *= self.p
        return self._out(out, a if np.ndim(b) == 0 else b)

    def neg(self, a):
        x = self._check(a)
        if self.p == 2:
            return self._out(x.copy(), a)
        out = np.zeros(x.shape, dtype=np.int64)
        pw = 1
        for _ in range(self.n):
            out += ((-(x // pw)) % self.p) * pw
            pw *= self.p
        return self._out(out, a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        x, y = self._check(a), self._check(b)
        x, y = np.broadcast_arrays(x, y)
        out = np.zeros(x.shape, dtype=np.int64)
        nz = (x != 0) & (y != 0)
        out[nz] = self.exp[(self.log[x[nz]] + self.log[y[nz]]) % (self.q - 1)]
        return self._out(out, a if np.ndim(b) == 0 else b)

    def inv(self, a):
        x = self._check(a)
        if np.any(x == 0):
            raise FieldError("inversion of zero")
        return self._out(self.exp[(-self.log[x]) % (self.q - 1)], a)

    def power(self, a, e: int):
        x = self._check(a)
        if e < 0:
            x, e = self._check(self.inv(x)), -e
        if e == 0:
            return self._out(np.ones(x.shape, dtype=np.int64), a)
        out = np.zeros(x.shape, dtype=np.int64)
        nz = x != 0
        out[nz] = self.exp[(self.log[x[nz]] * (e % (self.q - 1))) % (self.q - 1)]
        return self._out(out, a)

    def frobenius(self, a, k: int = 1):
        """x -> x^(p^k)."""
        return self.power(a, self.p ** (k % self.n))

    def field_sum(self, values) -> int:
        """Additive reduction of a 1-d array of element codes."""
        v = self._check(values)
        if v.size == 0:
            return 0
        if self.p == 2:
            return int(np.bitwise_xor.reduce(v))
        total, pw = 0, 1
        for _ in range(self.n):
            total += int(((v // pw) % self.p).sum() % self.p) * pw
            pw *= self.p
        return total

    def arith(self, op: str, *operands):
        """Dispatch ``add``/``mul``/``inv``/``pow``/``neg`` by name."""
        ops = {"add": self.add, "mul": self.mul, "inv": self.inv,
               "pow": self.power, "neg": self.neg, "sub": self.sub}
        if op not in ops:
            raise FieldError(f"unknown operation {op!r}")
        return ops[op](*operands)

    # -- traces, subfields, cubes, bases -----------------------------------

    def _require_divisor(self, t: int, what: str) -> None:
        if t < 1 or self.n % t:
            raise FieldError(f"{what} {t} does not divide n={self.n}")

    def trace_relative(self, x, t: int):
        """Tr_{p^n/p^t}(x) = sum_{k=0}^{n/t-1} x^{(p^t)^k}."""
        self._require_divisor(t, "trace degree")
        acc = self._check(x)
        term = acc
        for _ in range(self.n // t - 1):
            term = self._check(self.frobenius(term, t))
            acc = self._check(self.add(acc, term))
        return self._out(acc, x)

    def absolute_trace(self, x):
        return self.trace_relative(x, 1)

    def subfield_elements(self, m: int) -> np.ndarray:
        """Sorted codes of the subfield of order p^m."""
        self._require_divisor(m, "subfield degree")
        xs = self.elements()
        return xs[self.frobenius(xs, m) == xs]

    def in_subfield(self, x, m: int):
        self._require_divisor(m, "subfield degree")
        arr = self._check(x)
        res = self.frobenius(arr, m) == arr
        return bool(res) if np.ndim(x) == 0 else res

    def is_cube(self, x, m: int | None = None):
        """Cube test in F_{p^n}, or in the subfield of degree m when given."""
        order = self.q if m is None else self.p**m
        arr = self._check(x)
        if m is not None and not np.all(self.in_subfield(arr, m)):
            raise FieldError(f"element not in the subfield of degree {m}")
        if (order - 1) % 3:
            res = np.ones(arr.shape, dtype=bool)
        else:
            res = (arr == 0) | (np.asarray(self.power(arr, (order - 1) // 3)) == 1)
        return bool(res) if np.ndim(x) == 0 else res

    def dual_basis(self, u1: int, u2: int, m: int) -> tuple[int, int]:
        """Dual basis of (u1, u2) for F_{p^{2m}} over F_{p^m}."""
        if self.n != 2 * m:
            raise FieldError(f"dual basis needs n = 2m, got n={self.n}, m={m}")
        c1, c2 = self.frobenius(u1, m), self.frobenius(u2, m)
        delta = self.sub(self.mul(u1, c2), self.mul(c1, u2))
        if delta == 0:
            raise FieldError(f"({u1}, {u2}) is not a basis over the subfield of degree {m}")
        d_inv = self.inv(delta)
        v1 = self.mul(c2, d_inv)
        v2 = self.neg(self.mul(c1, d_inv))
        for u, v, want in ((u1, v1, 1), (u1, v2, 0), (u2, v1, 0), (u2, v2, 1)):
            if self.trace_relative(self.mul(u, v), m) != want:
                raise FieldError("dual basis post-check failed")
        return v1, v2


def build_field(p: int, n: int, modulus=None, cap: int | None = None) -> FieldSpec:
    """Validate parameters and return the field F_{p^n}.

    Without a modulus, the monic irreducible of degree n with the smallest
    integer encoding sum(c_i p^i) is used, e.g. x^3+x+1 for (2, 3).
    """
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if n < 1:
        raise FieldError(f"extension degree must be >= 1, got {n}")
    cap = get_settings().table_cap if cap is None else cap
    if p**n > cap:
        raise CapExceededError(f"field order {p}^{n} exceeds the table cap {cap}")
    if modulus is None:
        coeffs = smallest_irreducible(p, n)
    else:
        coeffs = tuple(int(c) for c in modulus)
        if len(coeffs) != n + 1 or coeffs[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {n}: {list(coeffs)}")
        if any(c < 0 or c >= p for c in coeffs):
            raise FieldError(f"modulus coefficients must be base-{p} digits")
        if not is_irreducible(coeffs, p):
            raise FieldError(f"modulus {list(coeffs)} is reducible over F_{p}")
    return FieldSpec(p, n, coeffs)


def parse_field_record(text: str, cap: int | None = None) -> FieldSpec:
    try:
        values = [int(tok) for tok in text.split()]
    except ValueError:
        raise FieldError(f"malformed field record: {text!r}")
    if len(values) < 3:
        raise FieldError(f"malformed field record: {text!r}")
    p, n, *coeffs = values
    return build_field(p, n, coeffs, cap=cap)
