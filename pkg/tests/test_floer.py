from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from qhball import floer
from qhball.floer import (UNKNOT, VSequence, cable_v, d_lens, d_surgery, m_range, semigroup_count,
                          slope_bounds, square_surgery_test, torus_v)
from oracles import d_lens_q1, semigroup_elements, v_from_semigroup

T23 = torus_v(2, 3)


def coprime(limit):
    return [(p, q) for q in range(2, limit + 1) for p in range(2, q) if gcd(p, q) == 1]


@pytest.mark.parametrize("args, count", [((2, 3, 1), 1), ((2, 3, 0), 0), ((3, 5, 8), 4)])
def test_semigroup_count(args, count):
    assert semigroup_count(*args) == count


def test_semigroup_count_rejects_non_coprime():
    with pytest.raises(ValueError):
        semigroup_count(4, 6, 10)


def test_semigroup_count_oracle():
    for p, q in coprime(15):
        for n in range(0, p * q + 5):
            assert semigroup_count(p, q, n) == len(semigroup_elements(p, q, n))


@pytest.mark.parametrize("pq, values", [((2, 3), (1,)), ((3, 5), (2, 1, 1, 1)), ((2, 1), ())])
def test_torus_v_examples(pq, values):
    assert torus_v(*pq).values == values


def test_vsequence_validation():
    with pytest.raises(ValueError):
        VSequence((2, 0))
    with pytest.raises(ValueError):
        VSequence((3, 1))
    with pytest.raises(ValueError):
        VSequence((1, 2))
    v = VSequence((2, 1, 1))
    assert v.nu_plus == 3 and v.v0 == 2 and v.at(10) == 0 and v.at(-2) == 3


def test_torus_sweep():
    for p, q in coprime(25):
        v = torus_v(p, q)
        assert v.nu_plus == (p - 1) * (q - 1) // 2
        assert v == floer.torus_v_from_thresholds(p, q)
        assert list(v.values) == v_from_semigroup((p, q))
        assert v == torus_v(q, p)


def test_cable_examples():
    assert cable_v(UNKNOT, 2, 3) == T23
    assert cable_v(T23, 2, 3).nu_plus == 3
    assert cable_v(T23, 3, 13).nu_plus == 15


def test_cable_rejects_small_p():
    with pytest.raises(ValueError):
        cable_v(T23, 1, 3)


def test_cable_nu_law_and_steps():
    for base_pq in [(2, 3), (2, 5), (3, 4), (3, 5)]:
        base = torus_v(*base_pq)
        for p in range(2, 6):
            for q in range(1, 40):
                if gcd(p, q) != 1:
                    continue
                v = cable_v(base, p, q)  # VSequence validates the step law
                assert v.nu_plus == p * base.nu_plus + (p - 1) * (q - 1) // 2


def test_cable_of_unknot_is_torus_knot():
    for p in range(2, 7):
        for q in range(1, 30):
            if gcd(p, q) == 1:
                assert cable_v(UNKNOT, p, q) == torus_v(p, q)


def test_lspace_cables_match_semigroup():
    # the (p, q)-cable of T(a, b) with q > pab is an algebraic knot whose
    # semigroup is generated by pa, pb and q
    for a, b in [(2, 3), (2, 5), (3, 4)]:
        base = torus_v(a, b)
        for p in (2, 3):
            for q in range(p * a * b + 1, p * a * b + 15):
                if gcd(p, q) == 1:
                    assert list(cable_v(base, p, q).values) == v_from_semigroup((p * a, p * b, q))


@pytest.mark.parametrize("args, d", [((9, 1, 3), 0), ((9, 1, 0), 2), ((2, 1, 0), Fraction(1, 4))])
def test_d_lens_examples(args, d):
    assert d_lens(*args) == d


def test_d_lens_q1_oracle():
    for n in range(1, 60):
        for i in range(n):
            assert d_lens(n, 1, i) == d_lens_q1(n, i)


def test_d_lens_index_errors():
    with pytest.raises(IndexError):
        d_lens(5, 2, 5)
    with pytest.raises(IndexError):
        d_surgery(T23, 4, 4)
    with pytest.raises(ValueError):
        d_lens(4, 2, 1)


def test_d_lens_known_values():
    # L(p, q) correction terms change sign under orientation reversal:
    # d(p, p - q, i) = -d(p, q, i') for the matching label; the sums agree up to sign
    for p in range(2, 25):
        for q in range(1, p):
            if gcd(p, q) == 1:
                assert sum(d_lens(p, q, i) for i in range(p)) == -sum(d_lens(p, p - q, i) for i in range(p))


def test_d_surgery_examples():
    assert d_surgery(T23, 9, 0) == 0
    assert d_surgery(T23, 4, 1) == 0
    for i in range(7):
        assert d_surgery(UNKNOT, 7, i) == d_lens(7, 1, i)


def test_d_reciprocity():
    for p, q in coprime(12):
        v = torus_v(p, q)
        for n in range(1, 40):
            for i in range(1, n):
                assert d_surgery(v, n, i) == d_surgery(v, n, n - i)


def test_square_test_examples():
    assert square_surgery_test(T23, 4).passed
    assert square_surgery_test(T23, 9).passed
    bad = square_surgery_test(T23, 16)
    assert not bad.passed
    assert bad.failures[0] == (1, 1, 0)
    assert bad.routes_agree


def test_square_test_non_square_is_structured():
    v = square_surgery_test(T23, 7)
    assert v.m is None and not v.passed and v.failures == ()


def test_square_test_routes_agree_everywhere():
    for p, q in coprime(18):
        v = torus_v(p, q)
        for m in range(1, 30):
            r = square_surgery_test(v, m * m)
            assert r.routes_agree
            assert r.passed == (not r.label_failures)
            assert sorted(r.labels) == sorted((m * (m - 1) // 2 - k * m) % (m * m) for k in range(m))


@pytest.mark.parametrize("nu, ms", [(1, [2, 3]), (0, [1, 2]), (3, [3, 4])])
def test_m_range_examples(nu, ms):
    assert list(m_range(nu)) == ms


@given(st.integers(0, 10 ** 6))
def test_m_range_exact(nu):
    # (1 + sqrt(1 + 8 nu))/2 <= m  <=>  (2m - 1)^2 >= 1 + 8 nu with 2m - 1 >= 0
    # m < (3 + sqrt(9 + 8 nu))/2   <=>  2m - 3 < 0 or (2m - 3)^2 < 9 + 8 nu
    r = m_range(nu)
    for m in range(max(0, r.start - 2), r.stop + 2):
        inside = (2 * m - 1 >= 0 and (2 * m - 1) ** 2 >= 1 + 8 * nu) and (
            2 * m - 3 < 0 or (2 * m - 3) ** 2 < 9 + 8 * nu)
        assert (m in r) == inside


def test_m_range_contains_passing_m():
    for p, q in coprime(20):
        v = torus_v(p, q)
        for m in range(1, 40):
            if square_surgery_test(v, m * m).passed:
                assert m in m_range(v.nu_plus)


def test_slope_bounds_examples():
    b = slope_bounds(1, 1, False)
    assert (b.lower, b.upper) == (Fraction(1, 9), Fraction(20))
    assert not b.contains(Fraction(1, 9)) and b.contains(Fraction(1, 8)) and not b.contains(20)
    b1 = slope_bounds(1, 1, True)
    assert b1.radicand == 9 and b1.lower_value() == pytest.approx(0.2)
    assert b1.contains(Fraction(1, 5)) and not b1.contains(Fraction(1, 6))


def test_slope_bounds_errors():
    with pytest.raises(ValueError):
        slope_bounds(0, 0, False)
    with pytest.raises(ValueError):
        slope_bounds(1, 2, False)


def _passing_cables(p_max, ratio_cap):
    hits = []
    for p in range(2, p_max + 1):
        for q in range(1, ratio_cap * p + 1):
            if gcd(p, q) != 1 or (7 * q > p and q < 10 * p):
                continue
            v = cable_v(T23, p, q)
            ok = [m for m in m_range(v.nu_plus) if square_surgery_test(v, m * m).passed]
            if ok:
                hits.append((p, q, ok))
    return hits


def test_trefoil_cables_outside_window():
    # Small slopes (q/p <= 1/7) never pass; among large slopes (q >= 10p)
    # exactly three cables pass the correction-term test, all with q/p < 12.
    # The d-invariants alone therefore do not force q/p < 10.
    assert _passing_cables(12, 15) == [(3, 34, [10]), (4, 43, [13]), (6, 67, [20])]
