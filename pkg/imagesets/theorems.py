"""Mechanical checks of the image-set theorems against a concrete map.

Every checker returns a :class:`TheoremReport` that keeps three questions
apart: does the statement apply to this kind of map at all, do its
hypotheses hold, and if so does its conclusion hold. A conclusion failure
under satisfied hypotheses is logged as an error and makes ``verify`` exit
nonzero.
"""

from dataclasses import asdict, dataclass, field as dc_field
from fnmatch import fnmatch
from functools import cached_property
from math import gcd, isqrt
from typing import Callable

import numpy as np
from mcp.server.fastmcp.utilities.logging import get_logger

from .finite_field import gcd_power_lemma, prime_factors
from .map_repr import MapTable, PolyRepr, degree, interpolate, is_DO, is_k_divisible
from .spectra import (DifferentialProfile, PreimageProfile, all_differential_sets_linear,
                      differential_profile, is_almost_k_to_1, is_crooked, normalize_zero,
                      preimage_profile)
from .walsh import (WalshProfile, ab_closed_forms, full_profile, is_almost_bent,
                    is_classical_spectrum, walsh_zero_values)

logger = get_logger(__name__)

WALSH_FULL = "full"
WALSH_ZERO = "zero"
WALSH_NONE = "none"

INTERPOLATION_LIMIT = 1 << 14


@dataclass
class TheoremReport:
    theorem_id: str
    applicable: bool
    hypotheses_hold: bool
    conclusion_holds: bool
    witnesses: dict = dc_field(default_factory=dict)
    reason: str = ""

    @property
    def status(self) -> str:
        if not self.applicable:
            return "inapplicable"
        if not self.hypotheses_hold:
            return "hypotheses-unmet"
        return "pass" if self.conclusion_holds else "FAIL"

    @property
    def failed(self) -> bool:
        return self.status == "FAIL"

    def to_dict(self) -> dict:
        out = asdict(self)
        out["status"] = self.status
        return out


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def _report(theorem_id: str, holds, witnesses: dict, reason: str = "") -> TheoremReport:
    report = TheoremReport(theorem_id, True, True, bool(holds), _jsonable(witnesses), reason)
    if report.failed:
        logger.error("%s: conclusion failed with witnesses %s", theorem_id, report.witnesses)
    return report


def _inapplicable(theorem_id: str, reason: str) -> TheoremReport:
    return TheoremReport(theorem_id, False, False, False, {}, reason)


def _unmet(theorem_id: str, reason: str, witnesses: dict | None = None) -> TheoremReport:
    return TheoremReport(theorem_id, True, False, False, _jsonable(witnesses or {}), reason)


def sqrt_deficit(D: int) -> tuple[int, bool]:
    """ceil((sqrt(D) - 1) / 2) and whether sqrt(D) is exact."""
    s = isqrt(D)
    exact = s * s == D
    return (s // 2 if exact else (s + 1) // 2), exact


def _is_power_of(value: int, p: int) -> bool:
    while value > 1 and value % p == 0:
        value //= p
    return value == 1


def _divisors(m: int) -> list[int]:
    divs = [1]
    for prime in prime_factors(m):
        power, mult = prime, 0
        while m % power == 0:
            mult += 1
            power *= prime
        divs = [d * prime**e for d in divs for e in range(mult + 1)]
    return sorted(divs)


class Profiles:
    """Lazily computed profiles of one map, shared by all checkers."""

    def __init__(self, f: MapTable, walsh: str = WALSH_FULL, interpolation_limit: int = INTERPOLATION_LIMIT):
        self.f = f
        self.walsh = walsh
        self.interpolation_limit = interpolation_limit

    @property
    def field(self):
        return self.f.field

    @cached_property
    def pp(self) -> PreimageProfile:
        return preimage_profile(self.f)

    @cached_property
    def dp(self) -> DifferentialProfile:
        return differential_profile(self.f)

    @cached_property
    def pr(self) -> PolyRepr | None:
        if self.f.q > self.interpolation_limit:
            return None
        return interpolate(self.f)

    @cached_property
    def wp(self) -> WalshProfile | None:
        if self.field.p != 2 or self.walsh == WALSH_NONE:
            return None
        return full_profile(self.f, zero_only=self.walsh == WALSH_ZERO)

    @cached_property
    def divisible_orders(self) -> list[int]:
        """Every k >= 2 dividing q-1 for which f is k-divisible."""
        return [k for k in _divisors(self.f.q - 1) if k >= 2 and is_k_divisible(self.f, k)]

    @property
    def full_walsh(self) -> WalshProfile | None:
        wp = self.wp
        return wp if wp is not None and wp.full else None


# -- preimage bounds ---------------------------------------------------------------

def check_lower_bound(pp: PreimageProfile, dp: DifferentialProfile) -> TheoremReport:
    d, q = dp.d, pp.q
    bound = -(-q // (d + 1))
    witnesses = {"d": d, "bound": bound, "image_size": pp.image_size}
    holds = pp.image_size >= bound
    minimal = pp.minimal_image_data(d)
    if minimal is not None:
        D, eps = minimal
        img = pp.omega[pp.omega > 0]
        square_sum = int(((img - (d + 1)) ** 2).sum())
        square_limit = (d + 1) * (eps - 1) + 1
        d_sum = int(pp.omega[D].sum()) if D else 0
        d_target = len(D) * (d + 1) - eps
        witnesses.update(D=D, eps=eps, square_sum=square_sum, square_limit=square_limit,
                         D_sum=d_sum, D_target=d_target)
        holds = holds and square_sum <= square_limit and d_sum == d_target
    return _report("lb.duniform", holds, witnesses)


def check_cauchy_schwarz(pp: PreimageProfile) -> TheoremReport:
    q = pp.q
    lhs = pp.image_size * pp.N
    equality = lhs == q * q
    k_to_1 = len(pp.M) == 1
    witnesses = {"image_size": pp.image_size, "N": pp.N, "bound": -(-q * q // pp.N),
                 "equality": equality, "k_to_1": k_to_1}
    return _report("lb.cauchy-schwarz", lhs >= q * q and equality == k_to_1, witnesses)


def check_nf_t0(pp: PreimageProfile, dp: DifferentialProfile) -> TheoremReport:
    q, d, N = pp.q, dp.d, pp.N
    zs = dp.zero_solutions[1:]
    pairs = q + int(zs.sum())
    all_d_where_solvable = bool(np.all(zs[zs > 0] == d))
    balanced = bool(np.all(zs == d))
    clauses = {
        "pair_count": pairs == N,
        "N_le_q_plus_d_t0": N <= q + d * dp.t0,
        "t0_equality_iff": (N == q + d * dp.t0) == all_d_where_solvable,
        "N_le_balanced": N <= (d + 1) * q - d,
        "balanced_equality_iff": (N == (d + 1) * q - d) == balanced,
    }
    witnesses = {"N": N, "d": d, "t0": dp.t0, "zero_difference_balanced": balanced, **clauses}
    return _report("lb.nf-t0", all(clauses.values()), witnesses)


def check_Mr_inequalities(pp: PreimageProfile, dp: DifferentialProfile) -> TheoremReport:
    q, d, N = pp.q, dp.d, pp.N
    s1 = sum(r * (d + 1 - r) * c for r, c in pp.M.items() if r <= d)
    s2 = sum(r * (d + 2 - r) * c for r, c in pp.M.items() if r <= d + 1)
    balanced_N = N == (d + 1) * q - d
    no_tail_1 = all(r < d + 2 for r in pp.M)
    no_tail_2 = all(r <= d + 2 for r in pp.M)
    reduction = s1 == (d + 2) * pp.M_r(d + 2) + d
    clauses = {
        "first_inequality": s1 >= d,
        "second_inequality": s2 >= q + d,
        "first_equality_iff": (s1 == d) == (balanced_N and no_tail_1),
        "second_equality_iff": (s2 == q + d) == (balanced_N and no_tail_2) and (s2 != q + d or reduction),
    }
    witnesses = {"d": d, "N": N, "first_sum": s1, "second_sum": s2, "M": pp.M, **clauses}
    return _report("lb.mr-inequalities", all(clauses.values()), witnesses)


# -- APN specific ------------------------------------------------------------------

def _apn_gate(theorem_id: str, field, dp: DifferentialProfile) -> TheoremReport | None:
    if field.p != 2:
        return _inapplicable(theorem_id, "binary fields only")
    if dp.d != 2:
        return _unmet(theorem_id, f"map is {dp.d}-uniform, not APN", {"d": dp.d})
    return None


def check_apn_cor_1_2(f: MapTable, pp: PreimageProfile, dp: DifferentialProfile) -> TheoremReport:
    gate = _apn_gate("apn.cor-1-2", f.field, dp)
    if gate:
        return gate
    n, q, M = f.field.n, pp.q, pp.M_r
    first = M(1) + M(2)
    if n % 2 == 0:
        sharp_shape = is_almost_k_to_1(pp, 3)
    else:
        sharp_shape = pp.M == {k: v for k, v in {2: 1, 3: pp.image_size - 1}.items() if v}
    second = 3 * M(1) + 4 * M(2) + 3 * M(3)
    cond = pp.N == 3 * q - 2 and all(r <= 4 for r in pp.M)
    clauses = {
        "one_or_two_preimages": first >= 1,
        "first_sharp_iff": (first == 1) == sharp_shape,
        "second_inequality": second >= q + 2,
        "second_equality_iff": (second == q + 2) == cond,
        "equality_identity": second != q + 2 or first == 2 * M(4) + 1,
    }
    return _report("apn.cor-1-2", all(clauses.values()),
                   {"M1_plus_M2": first, "weighted_sum": second, **clauses})


def apn_minimum(n: int) -> int:
    return (2**n + 1) // 3 if n % 2 else (2**n + 2) // 3


def minimal_shapes(n: int) -> dict[str, dict[int, int]]:
    """Preimage distributions an APN map at the minimum image size may have.

    Shapes that need more values than the minimum allows (case-3 at n=2)
    are left out. Zero counts are dropped.
    """
    size = apn_minimum(n)
    if n % 2:
        candidates = {"odd": {2: 1, 3: size - 1}}
    else:
        candidates = {
            "case-1": {1: 1, 3: size - 1},
            "case-2": {2: 2, 3: size - 2},
            "case-3": {2: 3, 4: 1, 3: size - 4},
        }
    return {name: {r: c for r, c in shape.items() if c}
            for name, shape in candidates.items() if min(shape.values()) >= 0}


def classify_minimal_case(n: int, pp: PreimageProfile) -> str | None:
    """Which preimage distribution an APN map at the minimum image size has."""
    for name, expected in minimal_shapes(n).items():
        if pp.M == expected:
            return name
    return None


def check_apn_lower_bound_cases(f: MapTable, pp: PreimageProfile, dp: DifferentialProfile) -> TheoremReport:
    gate = _apn_gate("apn.minimal-cases", f.field, dp)
    if gate:
        return gate
    n = f.field.n
    bound = apn_minimum(n)
    witnesses = {"bound": bound, "image_size": pp.image_size, "case": None}
    if pp.image_size < bound:
        return _report("apn.minimal-cases", False, witnesses, "image below the APN minimum")
    if pp.image_size > bound:
        return _report("apn.minimal-cases", True, witnesses, "not at the minimum")
    case = classify_minimal_case(n, pp)
    witnesses["case"] = case
    if case in ("case-2", "case-3"):
        logger.warning("APN map at the minimum with preimage distribution %s", case)
    return _report("apn.minimal-cases", case is not None, witnesses)


def check_monomial_gcd(f: MapTable, pr: PolyRepr | None, dp: DifferentialProfile) -> TheoremReport:
    field = f.field
    if field.p != 2 or pr is None or len(pr.coeffs) != 1 or pr.coeffs[0][1] != 1:
        return _inapplicable("apn.monomial-gcd", "not a binary monomial x^k")
    k = pr.coeffs[0][0]
    if dp.d != 2:
        return _unmet("apn.monomial-gcd", f"x^{k} is not APN", {"k": k, "d": dp.d})
    g = gcd(k, field.q - 1)
    expected = 1 if field.n % 2 else 3
    return _report("apn.monomial-gcd", g == expected, {"k": k, "gcd": g, "expected": expected})


def check_almost3_sufficient(f: MapTable, pp: PreimageProfile, dp: DifferentialProfile) -> TheoremReport:
    field = f.field
    if field.p != 2 or field.n % 2:
        return _inapplicable("apn.almost3-sufficient", "needs a binary field of even degree")
    gate = _apn_gate("apn.almost3-sufficient", field, dp)
    if gate:
        return gate
    omega = pp.omega.copy()
    omega[0] = 0
    hyps = {"f0_is_zero": int(f.table[0]) == 0, "nonzero_images_have_3": bool(np.all((omega == 0) | (omega >= 3)))}
    if not all(hyps.values()):
        return _unmet("apn.almost3-sufficient", "hypotheses not met", hyps)
    return _report("apn.almost3-sufficient", is_almost_k_to_1(pp, 3), hyps)


# -- DO maps -----------------------------------------------------------------------

def check_do_equivalence(f: MapTable, pr: PolyRepr | None, pp: PreimageProfile, dp: DifferentialProfile,
                         divisible_orders: list[int] | None = None) -> TheoremReport:
    if pr is None:
        return _inapplicable("do.equivalence", "no polynomial representation available")
    if not is_DO(pr):
        return _inapplicable("do.equivalence", "not a Dembowski-Ostrom polynomial")
    orders = divisible_orders if divisible_orders is not None else Profiles(f).divisible_orders
    if not orders:
        return _inapplicable("do.equivalence", "not k-divisible for any k >= 2")
    p = f.field.p
    entries, holds = [], True
    for k in orders:
        uniform = dp.d == k - 1
        almost = is_almost_k_to_1(pp, k)
        entry = {"k": k, "d_uniform": uniform, "almost_k_to_1": almost}
        ok = uniform == almost
        if almost:
            entry["zero_difference_balanced"] = bool(np.all(dp.zero_solutions[1:] == k - 1))
            entry["linear_differential_sets"] = all_differential_sets_linear(f)
            entry["d_is_power_of_p"] = _is_power_of(k - 1, p)
            ok = ok and entry["zero_difference_balanced"] and entry["linear_differential_sets"] and entry["d_is_power_of_p"]
        entries.append(entry)
        holds = holds and ok
    return _report("do.equivalence", holds, {"d": dp.d, "orders": entries})


def check_divisible_to_almost(pp: PreimageProfile, dp: DifferentialProfile, divisible_orders: list[int]) -> TheoremReport:
    if not divisible_orders:
        return _inapplicable("do.divisible-to-almost", "not k-divisible for any k >= 2")
    matching = [k for k in divisible_orders if dp.d == k - 1]
    if not matching:
        return _unmet("do.divisible-to-almost", "no divisibility order k with d = k - 1",
                      {"d": dp.d, "orders": divisible_orders})
    k = matching[0]
    return _report("do.divisible-to-almost", is_almost_k_to_1(pp, k), {"k": k, "d": dp.d})


def check_subfield_permutation(f: MapTable, pr: PolyRepr | None, dp: DifferentialProfile) -> TheoremReport:
    field = f.field
    if field.p != 2:
        return _inapplicable("do.subfield-permutation", "binary fields only")
    n, i = field.n, 0
    while n % 2 == 0:
        n //= 2
        i += 1
    m = n
    if i < 1 or m < 3:
        return _inapplicable("do.subfield-permutation", f"n={field.n} is not 2^i m with i >= 1 and odd m >= 3")
    if pr is None:
        return _inapplicable("do.subfield-permutation", "no polynomial representation available")
    hyps = {
        "DO": is_DO(pr),
        "coefficients_in_subfield": pr.coefficients_in_subfield(m),
        "three_divisible": is_k_divisible(f, 3),
        "apn": dp.d == 2,
    }
    if not all(hyps.values()):
        return _unmet("do.subfield-permutation", "hypotheses not met", {"m": m, **hyps})
    sub = field.subfield_elements(m)
    values = f.restrict(sub)
    permutation = bool(np.array_equal(np.sort(values), sub))
    worst = 0
    for a in sub[1:]:
        diffs = f.table[sub ^ a] ^ values
        worst = max(worst, int(np.unique(diffs, return_counts=True)[1].max()))
    return _report("do.subfield-permutation", permutation and worst <= 2,
                   {"m": m, "permutation": permutation, "subfield_uniformity": worst, **hyps})


# -- almost bent maps ------------------------------------------------------------------

def _ab_gate(theorem_id: str, f: MapTable, wp: WalshProfile | None) -> TheoremReport | None:
    field = f.field
    if field.p != 2 or field.n % 2 == 0 or field.n < 3:
        return _inapplicable(theorem_id, "needs a binary field of odd degree n >= 3")
    if wp is None or not wp.full:
        return _inapplicable(theorem_id, "needs the full Walsh spectrum")
    if not is_almost_bent(wp):
        return _unmet(theorem_id, "map is not almost bent")
    return None


def check_ab_properties(f: MapTable, pp: PreimageProfile, dp: DifferentialProfile, wp: WalshProfile | None) -> TheoremReport:
    gate = _ab_gate("ab.corollary", f, wp)
    if gate:
        return gate
    q, N = pp.q, pp.N
    clauses = {
        "N_divisible_by_4": N % 4 == 0,
        "balanced_count_odd": wp.balanced_count % 2 == 1,
        "N_at_most_3q_minus_4": N <= 3 * q - 4,
        "not_zero_difference_2_balanced": not bool(np.all(dp.zero_solutions[1:] == 2)),
        "image_above_apn_minimum": 3 * pp.image_size > q + 1,
        "apn": dp.d == 2,
    }
    return _report("ab.corollary", all(clauses.values()),
                   {"N": N, "balanced_count": wp.balanced_count, "image_size": pp.image_size, **clauses})


def check_ab_statistics(f: MapTable, pp: PreimageProfile, wp: WalshProfile | None) -> TheoremReport:
    gate = _ab_gate("ab.lemma-stats", f, wp)
    if gate:
        return gate
    counts = wp.zero_value_counts()
    omega0 = int(pp.omega[0])
    expected = ab_closed_forms(f.field.n, pp.N, omega0) if pp.N % 4 == 0 else None
    return _report("ab.lemma-stats", counts == expected,
                   {"N": pp.N, "omega0": omega0, "direct": counts, "closed_form": expected})


# -- upper bounds ------------------------------------------------------------------------

def _bound_report(theorem_id: str, bound: int, image_size: int, extra: dict) -> TheoremReport:
    return _report(theorem_id, image_size <= bound,
                   {"bound": bound, "image_size": image_size, "slack": bound - image_size, **extra})


def check_coulter_senger(pp: PreimageProfile) -> TheoremReport:
    q, N = pp.q, pp.N
    D = 4 * N - 4 * q + 1
    deficit, exact = sqrt_deficit(D)
    return _bound_report("ub.coulter-senger", q - deficit, pp.image_size,
                         {"N": N, "discriminant": D, "sqrt_exact": exact})


def check_ab_upper_bound(f: MapTable, pp: PreimageProfile, wp: WalshProfile | None) -> TheoremReport:
    gate = _ab_gate("ub.almost-bent", f, wp)
    if gate:
        return gate
    n, q = f.field.n, pp.q
    k = pp.max_preimages
    bound = (k * q - (k - 1) * 2 ** ((n + 1) // 2)) // k
    extra = {"k": k, "max_preimage_bound": bound}
    if not pp.image_size == q:
        bound = min(bound, q - 2 ** ((n - 1) // 2))
    return _bound_report("ub.almost-bent", bound, pp.image_size, extra)


def check_bent_count_bound(f: MapTable, pp: PreimageProfile, wp: WalshProfile | None) -> TheoremReport:
    field = f.field
    if field.p != 2 or field.n % 2:
        return _inapplicable("ub.bent-count", "needs a binary field of even degree")
    if wp is None or not wp.full:
        return _inapplicable("ub.bent-count", "needs the full Walsh spectrum")
    q, t = pp.q, wp.bent_count
    deficit, exact = sqrt_deficit(4 * t + 1)
    report = _bound_report("ub.bent-count", q - deficit, pp.image_size,
                           {"bent_count": t, "N": pp.N, "N_lower": t + q, "sqrt_exact": exact})
    if pp.N < t + q:
        report.conclusion_holds = False
        logger.error("ub.bent-count: N(f)=%d below t + 2^n = %d", pp.N, t + q)
    return report


def check_plateaued_apn_bound(f: MapTable, pp: PreimageProfile, dp: DifferentialProfile,
                              wp: WalshProfile | None) -> TheoremReport:
    field = f.field
    if field.p != 2:
        return _inapplicable("ub.plateaued-apn", "binary fields only")
    if wp is None or not wp.full:
        return _inapplicable("ub.plateaued-apn", "needs the full Walsh spectrum")
    n, q = field.n, pp.q
    hyps = {"plateaued": wp.plateaued, "apn": dp.d == 2}
    if n % 2:
        hyps["non_bijective"] = pp.image_size < q
    if not all(hyps.values()):
        return _unmet("ub.plateaued-apn", "hypotheses not met", hyps)
    if n % 2:
        return _bound_report("ub.plateaued-apn", q - 2 ** ((n - 1) // 2), pp.image_size, hyps)
    deficit, exact = sqrt_deficit(8 * (q - 1) // 3 + 1)
    return _bound_report("ub.plateaued-apn", q - deficit, pp.image_size, {**hyps, "sqrt_exact": exact})


def check_wan_bound(pp: PreimageProfile, pr: PolyRepr | None) -> TheoremReport:
    if pr is None:
        return _inapplicable("ub.wan", "no polynomial representation available")
    q = pp.q
    deg = degree(pr)
    if pp.image_size == q:
        return _unmet("ub.wan", "map is a permutation", {"degree": deg})
    if deg < 1:
        return _inapplicable("ub.wan", "constant map")
    return _bound_report("ub.wan", (deg * q - (q - 1)) // deg, pp.image_size, {"degree": deg})


def check_upper_bounds(f: MapTable, pp: PreimageProfile, dp: DifferentialProfile,
                       wp: WalshProfile | None, pr: PolyRepr | None) -> list[TheoremReport]:
    return [
        check_coulter_senger(pp),
        check_ab_upper_bound(f, pp, wp),
        check_bent_count_bound(f, pp, wp),
        check_plateaued_apn_bound(f, pp, dp, wp),
        check_wan_bound(pp, pr),
    ]


# -- Walsh spectra of almost-k-to-1 maps ----------------------------------------------

def _even_full_gate(theorem_id: str, f: MapTable, wp: WalshProfile | None) -> TheoremReport | None:
    field = f.field
    if field.p != 2 or field.n % 2:
        return _inapplicable(theorem_id, "needs a binary field of even degree")
    if wp is None or not wp.full:
        return _inapplicable(theorem_id, "needs the full Walsh spectrum")
    return None


def check_k_to_1_spectrum(f: MapTable, pp: PreimageProfile, wp: WalshProfile | None) -> TheoremReport:
    gate = _even_full_gate("walsh.k-to-1-spectrum", f, wp)
    if gate:
        return gate
    n, q = f.field.n, pp.q
    half = n // 2
    rs = [r for r in range(1, half + 1) if half % r == 0 and is_almost_k_to_1(pp, 2**r + 1)]
    if not rs:
        return _inapplicable("walsh.k-to-1-spectrum", "not almost-(2^r+1)-to-1 with 2r | n")
    r = rs[0]
    m = n // (2 * r)
    if not wp.plateaued:
        return _unmet("walsh.k-to-1-spectrum", "not component-wise plateaued", {"r": r, "m": m})
    g, shift, offset = normalize_zero(f)
    zero_values = walsh_zero_values(g)[1:]
    allowed = {(-1) ** m * 2 ** (r * m), (-1) ** (m + 1) * 2 ** (r * (m + 1))}
    observed = sorted({int(v) for v in zero_values})
    k = 2**r + 1
    expected_bent = 2**r * (q - 1) // k
    expected_amp = (q - 1) // k
    bent = wp.bent_count
    amp = wp.amplitude_counts().get(2 * r, 0)
    witnesses = {
        "r": r, "m": m, "shift": shift, "offset": offset,
        "k_divides_q_minus_1": gcd_power_lemma(n, r)[0] == k,
        "bent_count": bent, "expected_bent": expected_bent,
        "amplitude_2r_count": amp, "expected_amplitude_2r": expected_amp,
        "zero_values": observed, "allowed_zero_values": sorted(allowed),
    }
    holds = bent == expected_bent and amp == expected_amp and set(observed) <= allowed
    return _report("walsh.k-to-1-spectrum", holds, witnesses)


def check_m1_converse(f: MapTable, pp: PreimageProfile, wp: WalshProfile | None) -> TheoremReport:
    gate = _even_full_gate("walsh.m1-converse", f, wp)
    if gate:
        return gate
    r = f.field.n // 2
    if not is_almost_k_to_1(pp, 2**r + 1):
        return _inapplicable("walsh.m1-converse", f"not almost-{2**r + 1}-to-1")
    target = pp.q - 2**r
    plateaued, bent = wp.plateaued, wp.bent_count
    return _report("walsh.m1-converse", plateaued == (bent == target),
                   {"plateaued": plateaued, "bent_count": bent, "max_bent": target})


def check_classical_r1(f: MapTable, pp: PreimageProfile, dp: DifferentialProfile, wp: WalshProfile | None) -> TheoremReport:
    gate = _even_full_gate("walsh.classical-r1", f, wp)
    if gate:
        return gate
    if not is_almost_k_to_1(pp, 3):
        return _inapplicable("walsh.classical-r1", "not almost-3-to-1")
    if not wp.plateaued:
        return _unmet("walsh.classical-r1", "not component-wise plateaued")
    classical = is_classical_spectrum(wp)
    return _report("walsh.classical-r1", dp.d == 2 and classical, {"d": dp.d, "classical": classical})


def check_bent_proposition(f: MapTable, dp: DifferentialProfile, wp: WalshProfile | None) -> TheoremReport:
    gate = _even_full_gate("walsh.bent-proposition", f, wp)
    if gate:
        return gate
    q = f.q
    amps = wp.amplitude_counts()
    hyps = {"plateaued": wp.plateaued, "bent": amps.get(0, 0) == 2 * (q - 1) // 3,
            "amplitude_2": amps.get(2, 0) == (q - 1) // 3}
    if not all(hyps.values()):
        return _unmet("walsh.bent-proposition", "component counts differ", hyps)
    classical = is_classical_spectrum(wp)
    return _report("walsh.bent-proposition", dp.d == 2 and classical, {"d": dp.d, "classical": classical, **hyps})


def check_crooked_classical(f: MapTable, pp: PreimageProfile, wp: WalshProfile | None) -> TheoremReport:
    gate = _even_full_gate("walsh.crooked-classical", f, wp)
    if gate:
        return gate
    if not is_almost_k_to_1(pp, 3):
        return _inapplicable("walsh.crooked-classical", "not almost-3-to-1")
    if not is_crooked(f):
        return _unmet("walsh.crooked-classical", "not crooked")
    return _report("walsh.crooked-classical", is_classical_spectrum(wp), {"crooked": True})


# -- suite ---------------------------------------------------------------------------

CHECKS: list[tuple[str, Callable[[Profiles], TheoremReport]]] = [
    ("lb.duniform", lambda P: check_lower_bound(P.pp, P.dp)),
    ("lb.cauchy-schwarz", lambda P: check_cauchy_schwarz(P.pp)),
    ("lb.nf-t0", lambda P: check_nf_t0(P.pp, P.dp)),
    ("lb.mr-inequalities", lambda P: check_Mr_inequalities(P.pp, P.dp)),
    ("apn.cor-1-2", lambda P: check_apn_cor_1_2(P.f, P.pp, P.dp)),
    ("apn.minimal-cases", lambda P: check_apn_lower_bound_cases(P.f, P.pp, P.dp)),
    ("apn.monomial-gcd", lambda P: check_monomial_gcd(P.f, P.pr, P.dp)),
    ("apn.almost3-sufficient", lambda P: check_almost3_sufficient(P.f, P.pp, P.dp)),
    ("do.equivalence", lambda P: check_do_equivalence(P.f, P.pr, P.pp, P.dp, P.divisible_orders)),
    ("do.divisible-to-almost", lambda P: check_divisible_to_almost(P.pp, P.dp, P.divisible_orders)),
    ("do.subfield-permutation", lambda P: check_subfield_permutation(P.f, P.pr, P.dp)),
    ("ab.corollary", lambda P: check_ab_properties(P.f, P.pp, P.dp, P.full_walsh)),
    ("ab.lemma-stats", lambda P: check_ab_statistics(P.f, P.pp, P.full_walsh)),
    ("ub.coulter-senger", lambda P: check_coulter_senger(P.pp)),
    ("ub.almost-bent", lambda P: check_ab_upper_bound(P.f, P.pp, P.full_walsh)),
    ("ub.bent-count", lambda P: check_bent_count_bound(P.f, P.pp, P.full_walsh)),
    ("ub.plateaued-apn", lambda P: check_plateaued_apn_bound(P.f, P.pp, P.dp, P.full_walsh)),
    ("ub.wan", lambda P: check_wan_bound(P.pp, P.pr)),
    ("walsh.k-to-1-spectrum", lambda P: check_k_to_1_spectrum(P.f, P.pp, P.full_walsh)),
    ("walsh.m1-converse", lambda P: check_m1_converse(P.f, P.pp, P.full_walsh)),
    ("walsh.classical-r1", lambda P: check_classical_r1(P.f, P.pp, P.dp, P.full_walsh)),
    ("walsh.bent-proposition", lambda P: check_bent_proposition(P.f, P.dp, P.full_walsh)),
    ("walsh.crooked-classical", lambda P: check_crooked_classical(P.f, P.pp, P.full_walsh)),
]

THEOREM_IDS = [theorem_id for theorem_id, _ in CHECKS]


def select_checks(suite: list[str] | None) -> list[tuple[str, Callable[[Profiles], TheoremReport]]]:
    """Checks whose id matches any of the glob patterns (all when suite is empty or 'all')."""
    if not suite or "all" in suite:
        return list(CHECKS)
    return [(tid, check) for tid, check in CHECKS if any(fnmatch(tid, pattern) for pattern in suite)]


def run_all(f: MapTable, suite: list[str] | None = None, walsh: str = WALSH_FULL,
            profiles: Profiles | None = None) -> list[TheoremReport]:
    profiles = profiles or Profiles(f, walsh=walsh)
    reports = []
    for theorem_id, check in select_checks(suite):
        report = check(profiles)
        logger.debug("%s: %s", theorem_id, report.status)
        reports.append(report)
    return reports
