import logging

import pytest

from imagesets.errors import HypothesisError
from imagesets.finite_field import build_field
from imagesets.map_repr import BivariateMap, bivariate_to_univariate, default_basis, from_expression
from imagesets.families import (FAMILIES, FamilySpec, binomial_x3_x4, budaghyan_f1, budaghyan_f1_inner,
                                budaghyan_f2, budaghyan_f2_inner, build_family, chk_apn, chk_apn_inner,
                                cube_plus_trace, dobbertin, find_chk_parameters, first_non_cube, gold,
                                gologlu_f1, kyureghyan_2to1, monomial, named_examples, zhou_pott_f, zhou_pott_g)
from imagesets.spectra import differential_profile, is_almost_k_to_1, is_k_to_1, preimage_profile


def test_gold(F16, cube16, caplog):
    assert gold(F16, 1) == cube16
    with caplog.at_level(logging.WARNING):
        assert gold(F16, 2) == monomial(F16, 5)
    assert "not APN" in caplog.text
    with pytest.raises(HypothesisError):
        gold(build_field(3, 2), 1)


def test_binomial_and_cube_plus_trace(F16, binomial16):
    assert binomial_x3_x4(F16) == binomial16
    f = cube_plus_trace(F16)
    assert differential_profile(f).d == 2


@pytest.mark.parametrize("a", [1, 2, 7])
def test_kyureghyan_is_two_to_one(F32, a):
    f = kyureghyan_2to1(F32, a)
    assert is_k_to_1(preimage_profile(f), 2)
    assert differential_profile(f).d == 2


def test_kyureghyan_gates(F16, F32):
    with pytest.raises(HypothesisError):
        kyureghyan_2to1(F16, 1)
    with pytest.raises(HypothesisError) as info:
        kyureghyan_2to1(F32, 0)
    assert info.value.clause == "a != 0"


@pytest.mark.parametrize("build", [budaghyan_f1, budaghyan_f2])
def test_budaghyan_image_m1(build):
    pp = preimage_profile(build(build_field(2, 3), 1))
    assert pp.M_r(1) == 4
    assert pp.M_r(4) == 1
    assert pp.image_size == 5


@pytest.mark.parametrize("inner", [budaghyan_f1_inner, budaghyan_f2_inner])
def test_budaghyan_inner_bijective_for_even_m(inner, F64):
    assert inner(F64, 1).is_permutation()


def test_budaghyan_outer_is_inner_of_cube(F64):
    assert budaghyan_f1(F64, 3) == budaghyan_f1_inner(F64, 3).compose_power(3)
    with pytest.raises(HypothesisError):
        budaghyan_f1(build_field(2, 4), 1)


def test_dobbertin_gate(F32):
    assert dobbertin(F32, 1) == monomial(F32, 16 + 8 + 4 + 2 - 1)
    with pytest.raises(HypothesisError):
        dobbertin(F32, 2)


def test_chk_parameters_build_an_apn_map(F16):
    alpha, beta, gamma = find_chk_parameters(F16)
    assert chk_apn_inner(F16, alpha, beta, gamma).is_permutation()
    f = chk_apn(F16, alpha, beta, gamma)
    assert differential_profile(f).d == 2
    assert is_almost_k_to_1(preimage_profile(f), 3)


def test_chk_gate(F16):
    alpha, beta, gamma = find_chk_parameters(F16)
    with pytest.raises(HypothesisError):
        chk_apn(F16, alpha, beta, 0)
    with pytest.raises(HypothesisError):
        chk_apn(build_field(2, 5), 1, 1, 1)


def test_first_non_cube(F16):
    alpha = first_non_cube(F16, 2)
    assert F16.in_subfield(alpha, 2)
    assert not F16.is_cube(alpha, 2)


@pytest.mark.parametrize("build", [zhou_pott_f, zhou_pott_g])
def test_zhou_pott_is_almost_three_to_one(build, F16):
    bv = build(F16, 2, 1)
    assert isinstance(bv, BivariateMap)
    f = bivariate_to_univariate(bv, *default_basis(F16))
    assert is_almost_k_to_1(preimage_profile(f), 3)
    assert differential_profile(f).d == 2


def test_zhou_pott_gates(F16):
    with pytest.raises(HypothesisError):
        zhou_pott_f(F16, 1, 1)
    with pytest.raises(HypothesisError):
        zhou_pott_f(F16, 2, 2)
    with pytest.raises(HypothesisError) as info:
        zhou_pott_f(F16, 2, 1, alpha=1)
    assert info.value.clause == "alpha not a cube"
    with pytest.raises(HypothesisError):
        zhou_pott_f(build_field(2, 6), 2, 1)


def test_zhou_pott_g_equals_f_when_i_is_m(F16):
    f = zhou_pott_f(F16, 2, 1)
    g = zhou_pott_g(F16, 2, 1)
    assert (f.G == g.G).all() and (f.H == g.H).all()


def test_gologlu_f1(F16):
    f = bivariate_to_univariate(gologlu_f1(F16, 1), *default_basis(F16))
    assert is_almost_k_to_1(preimage_profile(f), 3)
    with pytest.raises(HypothesisError):
        gologlu_f1(build_field(2, 6), 1)


def test_named_examples():
    assert named_examples("binomial") == from_expression(build_field(2, 4), "x^3 + x^4")
    with pytest.raises(HypothesisError):
        named_examples("nope")


def test_registry(cube16):
    assert build_family(FamilySpec("gold", n=4, k=1)) == cube16
    assert build_family(FamilySpec("budaghyan_f1", m=1, a=1)).field.n == 3
    assert isinstance(build_family(FamilySpec("zhou_pott_g", m=2, i=2, k=1)), BivariateMap)
    assert build_family(FamilySpec("chk_apn", n=4)).field.n == 4
    with pytest.raises(HypothesisError):
        build_family(FamilySpec("gold", n=4))
    with pytest.raises(HypothesisError):
        build_family(FamilySpec("kasami", n=4))
    assert {"gold", "zhou_pott_f", "gologlu_f2", "named"} <= set(FAMILIES)
