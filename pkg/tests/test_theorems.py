import pytest

from imagesets.families import cube_plus_trace, gologlu_f1
from imagesets.finite_field import build_field
from imagesets.map_repr import bivariate_to_univariate, default_basis, from_expression, identity_map, interpolate
from imagesets.spectra import differential_profile, preimage_profile
from imagesets.theorems import (THEOREM_IDS, WALSH_NONE, WALSH_ZERO, Profiles, TheoremReport, check_ab_properties,
                                check_ab_statistics, check_apn_lower_bound_cases, check_coulter_senger,
                                check_do_equivalence, check_lower_bound, check_Mr_inequalities, check_subfield_permutation,
                                check_upper_bounds, classify_minimal_case, run_all, select_checks, sqrt_deficit)


def statuses(reports):
    return {r.theorem_id: r.status for r in reports}


def by_id(reports, theorem_id):
    return next(r for r in reports if r.theorem_id == theorem_id)


def test_sqrt_deficit():
    assert sqrt_deficit(121) == (5, True)
    assert sqrt_deficit(41) == (3, False)
    assert sqrt_deficit(1) == (0, True)


def test_report_status():
    assert TheoremReport("x", False, False, False).status == "inapplicable"
    assert TheoremReport("x", True, False, False).status == "hypotheses-unmet"
    assert TheoremReport("x", True, True, True).status == "pass"
    failed = TheoremReport("x", True, True, False)
    assert failed.failed and failed.to_dict()["status"] == "FAIL"


def test_cube_on_16_full_suite(cube16):
    reports = run_all(cube16)
    assert [r.theorem_id for r in reports] == THEOREM_IDS
    s = statuses(reports)
    assert not any(r.failed for r in reports)
    for theorem_id in ("lb.duniform", "lb.cauchy-schwarz", "lb.nf-t0", "lb.mr-inequalities", "apn.cor-1-2",
                       "apn.minimal-cases", "apn.monomial-gcd", "apn.almost3-sufficient", "do.equivalence",
                       "do.divisible-to-almost", "ub.coulter-senger", "ub.bent-count", "ub.plateaued-apn",
                       "ub.wan", "walsh.k-to-1-spectrum", "walsh.classical-r1", "walsh.bent-proposition",
                       "walsh.crooked-classical"):
        assert s[theorem_id] == "pass", theorem_id
    for theorem_id in ("do.subfield-permutation", "ab.corollary", "ab.lemma-stats", "ub.almost-bent",
                       "walsh.m1-converse"):
        assert s[theorem_id] == "inapplicable", theorem_id
    assert by_id(reports, "apn.minimal-cases").witnesses["case"] == "case-1"
    assert by_id(reports, "apn.monomial-gcd").witnesses["gcd"] == 3
    spectrum = by_id(reports, "walsh.k-to-1-spectrum").witnesses
    assert spectrum["bent_count"] == 10 and spectrum["amplitude_2r_count"] == 5
    assert spectrum["zero_values"] == [-8, 4]


def test_lower_bound_witnesses(cube16, binomial16, F16):
    report = check_lower_bound(preimage_profile(cube16), differential_profile(cube16))
    assert report.witnesses["bound"] == 6
    assert report.witnesses["D"] == [0] and report.witnesses["eps"] == 2
    assert report.witnesses["D_sum"] == report.witnesses["D_target"] == 1
    strict = check_lower_bound(preimage_profile(binomial16), differential_profile(binomial16))
    assert strict.status == "pass" and strict.witnesses["image_size"] == 12
    ident = identity_map(F16)
    trivial = check_lower_bound(preimage_profile(ident), differential_profile(ident))
    assert trivial.status == "pass" and trivial.witnesses["bound"] == 1


def test_mr_inequalities(cube16, binomial16, F9):
    report = check_Mr_inequalities(preimage_profile(cube16), differential_profile(cube16))
    assert report.status == "pass"
    assert report.witnesses["first_sum"] == 2
    assert report.witnesses["second_sum"] == 18
    strict = check_Mr_inequalities(preimage_profile(binomial16), differential_profile(binomial16))
    assert strict.status == "pass"
    assert strict.witnesses["N"] == 30
    assert strict.witnesses["first_sum"] > 2
    planar = from_expression(F9, "x^2")
    report = check_Mr_inequalities(preimage_profile(planar), differential_profile(planar))
    assert report.status == "pass"
    assert report.witnesses["first_sum"] == 1


def test_minimal_case_classification(cube16, F64):
    assert classify_minimal_case(4, preimage_profile(cube16)) == "case-1"
    cube4 = from_expression(build_field(2, 2), "x^3")
    assert classify_minimal_case(2, preimage_profile(cube4)) == "case-1"
    f = cube_plus_trace(F64)
    report = check_apn_lower_bound_cases(f, preimage_profile(f), differential_profile(f))
    assert report.witnesses["case"] == "case-1"
    x5 = from_expression(build_field(2, 4), "x^5")
    assert check_apn_lower_bound_cases(x5, preimage_profile(x5), differential_profile(x5)).status == "hypotheses-unmet"


def test_do_equivalence(F16, F64, F9):
    x5 = from_expression(F16, "x^5")
    report = check_do_equivalence(x5, interpolate(x5), preimage_profile(x5), differential_profile(x5))
    assert report.status == "pass"
    assert report.witnesses["orders"][0]["k"] == 5
    assert report.witnesses["orders"][0]["d_is_power_of_p"]
    x9 = from_expression(F64, "x^9")
    dp = differential_profile(x9)
    report = check_do_equivalence(x9, interpolate(x9), preimage_profile(x9), dp)
    assert report.status == "pass"
    assert dp.d > 2
    three = next(o for o in report.witnesses["orders"] if o["k"] == 3)
    assert not three["d_uniform"] and not three["almost_k_to_1"]
    sq = from_expression(F9, "x^2")
    report = check_do_equivalence(sq, interpolate(sq), preimage_profile(sq), differential_profile(sq))
    assert report.status == "pass"
    assert report.witnesses["orders"][0]["linear_differential_sets"]
    not_do = from_expression(F16, "x^3 + x^4")
    assert check_do_equivalence(not_do, interpolate(not_do), preimage_profile(not_do),
                                differential_profile(not_do)).status == "inapplicable"


def test_subfield_permutation(F64, cube16):
    cube = from_expression(F64, "x^3")
    report = check_subfield_permutation(cube, interpolate(cube), differential_profile(cube))
    assert report.status == "pass"
    assert report.witnesses["m"] == 3 and report.witnesses["permutation"]
    f = cube_plus_trace(F64)
    assert check_subfield_permutation(f, interpolate(f), differential_profile(f)).status == "pass"
    assert check_subfield_permutation(cube16, interpolate(cube16),
                                      differential_profile(cube16)).status == "inapplicable"


def test_almost_bent_checks(binomial32):
    P = Profiles(binomial32)
    wp = P.full_walsh
    corollary = check_ab_properties(binomial32, P.pp, P.dp, wp)
    assert corollary.status == "pass"
    assert corollary.witnesses["N"] == 64
    assert corollary.witnesses["balanced_count"] == 15
    stats = check_ab_statistics(binomial32, P.pp, wp)
    assert stats.status == "pass"
    assert stats.witnesses["direct"] == [15, 10, 6]
    assert check_ab_statistics(binomial32, P.pp, None).status == "inapplicable"


def test_upper_bounds(cube16, binomial32):
    P = Profiles(cube16)
    reports = check_upper_bounds(cube16, P.pp, P.dp, P.full_walsh, P.pr)
    assert [r.theorem_id for r in reports] == ["ub.coulter-senger", "ub.almost-bent", "ub.bent-count",
                                               "ub.plateaued-apn", "ub.wan"]
    bounds = {r.theorem_id: r.witnesses.get("bound") for r in reports}
    assert bounds["ub.coulter-senger"] == 11
    assert bounds["ub.bent-count"] == 13
    assert bounds["ub.plateaued-apn"] == 13
    assert bounds["ub.wan"] == 11
    assert by_id(reports, "ub.bent-count").witnesses["N_lower"] == 26
    assert by_id(reports, "ub.coulter-senger").witnesses["sqrt_exact"]
    P = Profiles(binomial32)
    ab = by_id(check_upper_bounds(binomial32, P.pp, P.dp, P.full_walsh, P.pr), "ub.almost-bent")
    assert ab.status == "pass"
    assert ab.witnesses["bound"] == 28 and ab.witnesses["image_size"] == 16


def test_coulter_senger_on_permutation(F16):
    report = check_coulter_senger(preimage_profile(identity_map(F16)))
    assert report.witnesses["bound"] == 16
    assert report.status == "pass"


def test_x5_walsh_checks(F16):
    reports = run_all(from_expression(F16, "x^5"), suite=["walsh.*"])
    s = statuses(reports)
    assert s["walsh.k-to-1-spectrum"] == "pass"
    assert s["walsh.m1-converse"] == "pass"
    spectrum = by_id(reports, "walsh.k-to-1-spectrum").witnesses
    assert spectrum["r"] == 2 and spectrum["m"] == 1
    assert spectrum["bent_count"] == 12 and spectrum["amplitude_2r_count"] == 3
    assert spectrum["zero_values"] == [-4, 16]


def test_gologlu_classical(F16):
    f = bivariate_to_univariate(gologlu_f1(F16, 1), *default_basis(F16))
    s = statuses(run_all(f, suite=["walsh.classical-r1", "walsh.k-to-1-spectrum"]))
    assert s == {"walsh.k-to-1-spectrum": "pass", "walsh.classical-r1": "pass"}


def test_suite_selection():
    assert [tid for tid, _ in select_checks(["ab.*"])] == ["ab.corollary", "ab.lemma-stats"]
    assert len(select_checks(None)) == len(THEOREM_IDS)
    assert len(select_checks(["all"])) == len(THEOREM_IDS)
    assert select_checks(["nothing"]) == []


def test_walsh_modes(cube16, cube32):
    zero = statuses(run_all(cube16, walsh=WALSH_ZERO))
    assert zero["walsh.classical-r1"] == "inapplicable"
    none = statuses(run_all(cube32, walsh=WALSH_NONE))
    assert none["ab.corollary"] == "inapplicable"
    assert none["lb.duniform"] == "pass"


def test_ab_suite_on_even_map_is_inapplicable(cube16):
    assert set(statuses(run_all(cube16, suite=["ab.*"])).values()) == {"inapplicable"}


@pytest.mark.parametrize("n", [3, 4, 5])
def test_random_maps_never_fail(n, random_map):
    field = build_field(2, n)
    for _ in range(5):
        reports = run_all(random_map(field))
        assert not [r.theorem_id for r in reports if r.failed]
        s = statuses(reports)
        assert s["lb.duniform"] == "pass"
        assert s["ub.coulter-senger"] == "pass"
