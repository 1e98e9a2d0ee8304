"""End-to-end checks on the published examples and the catalog sweep."""

import numpy as np
import pytest

from imagesets.families import (FamilySpec, budaghyan_f1, budaghyan_f1_inner, budaghyan_f2, budaghyan_f2_inner,
                                build_family, dobbertin, gologlu_f2, named_examples, zhou_pott_f, zhou_pott_g)
from imagesets.finite_field import build_field
from imagesets.map_repr import (BivariateMap, MapTable, bivariate_to_univariate, default_basis, from_expression,
                                interpolate, is_DO, is_k_divisible)
from imagesets.search import run_search
from imagesets.spectra import ddt_naive, differential_profile, is_almost_k_to_1, preimage_profile
from imagesets.theorems import Profiles, check_upper_bounds
from imagesets.walsh import component_spectrum, full_profile, is_classical_spectrum, naive_walsh


def univariate(built):
    if isinstance(built, BivariateMap):
        return bivariate_to_univariate(built, *default_basis(built.field))
    return built


@pytest.mark.parametrize("n", [4, 6, 8])
def test_cube_even_is_almost_three_to_one(n):
    pp = preimage_profile(from_expression(build_field(2, n), "x^3"))
    assert pp.image_size == (2**n + 2) // 3
    assert is_almost_k_to_1(pp, 3)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_cube_odd_is_a_permutation(n):
    assert from_expression(build_field(2, n), "x^3").is_permutation()


def test_minimal_odd_catalog():
    assert named_examples("min7").image_size() == 57
    assert named_examples("min11").image_size() == 1013


@pytest.mark.parametrize("m", [1, 3])
@pytest.mark.parametrize("build", [budaghyan_f1, budaghyan_f2])
def test_budaghyan_preimage_counts(build, m):
    pp = preimage_profile(build(build_field(2, 3 * m), 1))
    assert pp.M_r(1) == 2 ** (3 * m - 1)
    assert pp.M_r(4) == 2 ** (3 * m - 3)
    assert pp.image_size == 5 * 2 ** (3 * m - 3)


@pytest.mark.parametrize("inner", [budaghyan_f1_inner, budaghyan_f2_inner])
def test_budaghyan_inner_maps_at_m2_are_bijections(inner):
    assert inner(build_field(2, 6), 1).is_permutation()


def test_gologlu_f2_is_almost_three_to_one():
    f = univariate(gologlu_f2(build_field(2, 10), 1))
    assert is_almost_k_to_1(preimage_profile(f), 3)


def test_zhou_pott_interpolations():
    field = build_field(2, 8)
    g = univariate(zhou_pott_g(field, 2, 1))
    pr = interpolate(g)
    assert is_DO(pr)
    assert not is_k_divisible(g, 3)
    f = univariate(zhou_pott_f(field, 2, 1))
    assert not is_DO(interpolate(f))


def test_classical_spectrum_at_r1():
    wp = full_profile(from_expression(build_field(2, 4), "x^3"))
    assert wp.bent_count == 10
    assert wp.amplitude_counts()[2] == 5
    assert set(wp.zero_values[1:].tolist()) == {4, -8}
    assert wp.spectrum == {0: 60, 4: 160, 8: 20}
    assert is_classical_spectrum(wp)


def test_walsh_counts_at_r2():
    wp = full_profile(from_expression(build_field(2, 4), "x^5"))
    assert wp.bent_count == 2**4 - 2**2
    assert wp.amplitude_counts()[4] == 3


def test_ab_statistics_normalized():
    f = from_expression(build_field(2, 5), "x^3 + x^4")
    pp = preimage_profile(f)
    assert pp.omega[0] == 2
    assert pp.N == 64 and pp.N % 4 == 0
    wp = full_profile(f)
    assert wp.zero_value_counts() == (15, 10, 6)
    assert wp.balanced_count % 2 == 1


CATALOG = [
    *(FamilySpec("gold", n=n, k=1) for n in range(3, 11)),
    *(FamilySpec("binomial", n=n) for n in range(3, 11)),
    *(FamilySpec("cube_plus_trace", n=n) for n in (4, 6, 8)),
    *(FamilySpec("kyureghyan_2to1", n=n, a=1) for n in (5, 7, 9)),
    *(FamilySpec(fam, m=m, a=1) for fam in ("budaghyan_f1", "budaghyan_f2") for m in (1, 2, 3)),
    FamilySpec("dobbertin", g=1),
    FamilySpec("dobbertin", g=2),
    FamilySpec("chk_apn", n=4),
    *(FamilySpec(fam, m=m, i=2, k=1) for fam in ("zhou_pott_f", "zhou_pott_g") for m in (2, 4)),
    FamilySpec("gologlu_f1", m=2, k=1),
    FamilySpec("gologlu_f1", m=4, k=1),
    FamilySpec("gologlu_f2", m=5, k=1),
    FamilySpec("named", name="min7"),
]


@pytest.mark.slow
@pytest.mark.parametrize("spec", CATALOG, ids=lambda s: "-".join(str(v) for v in (s.family, *s.params().values())))
def test_upper_bounds_are_sound(spec):
    f = univariate(build_family(spec))
    P = Profiles(f)
    for report in check_upper_bounds(f, P.pp, P.dp, P.full_walsh, P.pr):
        assert not report.failed, report.to_dict()
        if report.status == "pass":
            assert report.witnesses["bound"] >= P.pp.image_size


ORACLE_FIELDS = [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2)]


@pytest.mark.slow
@pytest.mark.parametrize("p,n", ORACLE_FIELDS)
def test_oracle_equivalence(p, n):
    field = build_field(p, n)
    rng = np.random.default_rng([p, n])
    for _ in range(100):
        f = MapTable(field, rng.integers(0, field.q, size=field.q))
        pp = preimage_profile(f)
        assert sum(pp.M.values()) == pp.image_size
        assert sum(r * c for r, c in pp.M.items()) == field.q
        assert sum(r * r * c for r, c in pp.M.items()) == pp.N
        dp = differential_profile(f)
        ddt = ddt_naive(f)
        assert dp.d == int(ddt[1:].max())
        assert np.array_equal(dp.zero_solutions[1:], ddt[1:, 0])
        assert interpolate(f).evaluate() == f
        if p == 2:
            b = int(rng.integers(1, field.q))
            assert np.array_equal(component_spectrum(f, b), naive_walsh(f, b))


@pytest.mark.slow
@pytest.mark.parametrize("n,expected", [(4, 3), (5, 1), (6, 3), (8, 3)])
def test_monomial_corollary(n, expected):
    records = list(run_search("monomial-exhaustive", n))
    summary = records[-1]
    assert summary["apn_exponents"]
    assert summary["gcds"] == [expected]


@pytest.mark.slow
def test_dobbertin_is_not_classical():
    f = dobbertin(build_field(2, 10), 2)
    assert f == named_examples("dobbertin-g2")
    assert is_almost_k_to_1(preimage_profile(f), 3)
    assert not is_classical_spectrum(full_profile(f))
