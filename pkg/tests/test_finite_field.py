from math import gcd

import numpy as np
import pytest

from imagesets.errors import CapExceededError, FieldError
from imagesets.finite_field import (build_field, gcd_power_lemma, is_irreducible, parse_field_record,
                                    prime_factors, smallest_irreducible)


def test_default_modulus_is_smallest_irreducible():
    assert build_field(2, 3).modulus == (1, 1, 0, 1)
    assert build_field(2, 4).modulus == (1, 1, 0, 0, 1)
    assert smallest_irreducible(3, 2) == (1, 0, 1)
    assert not is_irreducible((1, 0, 0, 0, 1), 2)


def test_rejects_bad_parameters():
    with pytest.raises(FieldError):
        build_field(4, 2)
    with pytest.raises(FieldError):
        build_field(2, 0)
    with pytest.raises(FieldError):
        build_field(2, 4, modulus=[1, 0, 0, 0, 1])
    with pytest.raises(FieldError):
        build_field(2, 3, modulus=[1, 1, 1])


def test_cap_is_enforced(monkeypatch):
    with pytest.raises(CapExceededError):
        build_field(2, 10, cap=512)
    from imagesets.config import get_settings

    monkeypatch.setenv("IMAGESETS_TABLE_CAP", "64")
    get_settings.cache_clear()
    with pytest.raises(CapExceededError):
        build_field(2, 7)


def test_record_round_trip(F16, F9):
    assert parse_field_record(F16.record()) == F16
    assert parse_field_record(F9.record()) == F9
    with pytest.raises(FieldError):
        parse_field_record("2 x 1")


@pytest.mark.parametrize("p,n", [(2, 3), (2, 4), (3, 2), (5, 2), (3, 3)])
def test_field_axioms(p, n):
    field = build_field(p, n)
    xs = field.elements()
    nz = xs[1:]
    assert np.all(field.mul(nz, field.inv(nz)) == 1)
    assert np.all(field.add(xs, field.neg(xs)) == 0)
    a, b = 1 % field.q, field.generator
    assert np.array_equal(field.mul(field.add(xs, a), b), field.add(field.mul(xs, b), field.mul(a, b)))
    assert np.array_equal(field.frobenius(field.add(xs, b)), field.add(field.frobenius(xs), field.frobenius(b)))
    assert np.all(field.power(nz, field.q - 1) == 1)


def test_scalar_and_array_arguments(F16):
    assert isinstance(F16.mul(3, 7), int)
    assert isinstance(F16.mul(np.array([3, 4]), 7), np.ndarray)
    assert F16.arith("add", 5, 5) == 0
    with pytest.raises(FieldError):
        F16.arith("div", 1, 2)
    with pytest.raises(FieldError):
        F16.inv(0)
    with pytest.raises(FieldError):
        F16.add(16, 1)


def test_generator_has_full_order(F16):
    powers = {F16.power(F16.generator, e) for e in range(15)}
    assert len(powers) == 15


def test_traces(F16, F9):
    tr = np.asarray(F16.absolute_trace(F16.elements()))
    assert set(np.unique(tr)) == {0, 1}
    assert int(tr.sum()) == 8
    rel = np.asarray(F16.trace_relative(F16.elements(), 2))
    assert np.all(F16.in_subfield(rel, 2))
    tr9 = np.asarray(F9.absolute_trace(F9.elements()))
    assert np.all(tr9 < 3)
    with pytest.raises(FieldError):
        F16.trace_relative(3, 3)


def test_subfields(F16, F64):
    assert F16.subfield_elements(2).size == 4
    assert F16.subfield_elements(1).tolist() == [0, 1]
    assert F64.subfield_elements(3).size == 8
    assert F16.in_subfield(1, 2)
    assert not F16.in_subfield(F16.generator, 2)


def test_cubes(F16):
    cubes = F16.is_cube(F16.elements())
    assert int(cubes.sum()) == 1 + 15 // 3
    half = F16.subfield_elements(2)
    in_half = F16.is_cube(half, 2)
    assert int(in_half.sum()) == 2
    with pytest.raises(FieldError):
        F16.is_cube(F16.generator, 2)


def test_dual_basis(F16):
    u1, u2 = 1, F16.generator
    v1, v2 = F16.dual_basis(u1, u2, 2)
    assert F16.trace_relative(F16.mul(u1, v1), 2) == 1
    assert F16.trace_relative(F16.mul(u1, v2), 2) == 0
    assert F16.trace_relative(F16.mul(u2, v2), 2) == 1
    with pytest.raises(FieldError):
        F16.dual_basis(1, 1, 2)


@pytest.mark.parametrize("i", range(1, 9))
@pytest.mark.parametrize("r", range(1, 9))
def test_gcd_power_lemma(i, r):
    minus, plus = gcd_power_lemma(i, r)
    assert minus == gcd(2**i - 1, 2**r + 1)
    assert plus == gcd(2**i + 1, 2**r + 1)


def test_prime_factors():
    assert prime_factors(1023) == [3, 11, 31]
    assert prime_factors(255) == [3, 5, 17]


@pytest.mark.parametrize("p,n", [(2, 4), (2, 6), (3, 3), (5, 2), (2, 12)])
def test_trace_is_additive(p, n, rng):
    field = build_field(p, n)
    xs = field.elements()
    ys = xs if field.q <= 256 else rng.choice(xs, size=64, replace=False)
    x, y = (a.ravel() for a in np.meshgrid(xs, ys))
    for t in (d for d in range(1, n + 1) if n % d == 0):
        lhs = field.trace_relative(field.add(x, y), t)
        rhs = field.add(field.trace_relative(x, t), field.trace_relative(y, t))
        assert np.array_equal(lhs, rhs)


def subfield_trace(field, y, t, s):
    """Tr from F_{p^{ts}} down to F_{p^t} of subfield elements y."""
    acc = y
    for k in range(1, s):
        acc = field.add(acc, field.frobenius(y, t * k))
    return acc


@pytest.mark.parametrize("p,n,t,s", [(2, 4, 1, 2), (2, 6, 1, 3), (2, 6, 2, 3), (2, 6, 1, 2), (2, 8, 2, 2), (3, 4, 1, 2)])
def test_trace_is_transitive(p, n, t, s):
    field = build_field(p, n)
    xs = field.elements()
    inner = field.trace_relative(xs, t * s)
    assert np.all(field.in_subfield(inner, t * s))
    assert np.array_equal(field.trace_relative(xs, t), subfield_trace(field, inner, t, s))


@pytest.mark.parametrize("p,n", [(2, 3), (2, 5), (3, 2), (3, 3), (7, 2)])
def test_log_of_product(p, n):
    field = build_field(p, n)
    nz = field.elements()[1:]
    x, y = (a.ravel() for a in np.meshgrid(nz, nz))
    assert np.array_equal(field.log[field.mul(x, y)], (field.log[x] + field.log[y]) % (field.q - 1))
    assert np.array_equal(field.exp[field.log[nz]], nz)


@pytest.mark.parametrize("p,n", [(2, 4), (2, 5), (2, 6), (2, 10), (3, 3), (7, 2), (13, 2)])
def test_is_cube_matches_brute_force(p, n):
    field = build_field(p, n)
    xs = field.elements()
    cubes = np.zeros(field.q, dtype=bool)
    cubes[field.power(xs, 3)] = True
    assert np.array_equal(field.is_cube(xs), cubes)


def test_default_modulus_for_larger_fields():
    assert build_field(2, 8).modulus == (1, 1, 0, 1, 1, 0, 0, 0, 1)
    assert build_field(5, 2).modulus == (2, 0, 1)
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((0, 1, 1), 2)
