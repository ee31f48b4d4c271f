from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eacomm.bounds import (
    BOUND_IDS,
    absolute_bound,
    classify,
    crossing,
    ea_singleton,
    ea_singleton_kc,
    ea_singleton_proven,
    format_fraction,
    frontier,
    frontier_delta,
    our_bound,
    q_singleton,
)
from eacomm.codes import rs_code
from eacomm.errors import KTooLarge, UnknownVariant, ValidationError
from eacomm.field import field_new
from eacomm.protocol import SchemeParams, scheme_from_code


class TestFiniteBounds:
    def test_q_singleton(self):
        assert q_singleton(5, 1) == 3
        assert q_singleton(7, 7) == 1
        assert q_singleton(9, 1) == 5

    def test_ea_singleton(self):
        assert ea_singleton(5, 1, 1) == 3
        assert ea_singleton(9, 1, 1) == 5
        assert ea_singleton(8, 2, 0) == q_singleton(8, 2)

    def test_absolute(self):
        assert absolute_bound(5, 1) == 5
        assert absolute_bound(4, 4) == 1

    def test_our_bound(self):
        assert our_bound(5, 1) == 4
        assert our_bound(6, 3) == 1
        assert our_bound(9, 1) == 8  # 9 - 2 + 1; the Griesmer-optimal [9,2,6]_2 reaches 6 < 8
        with pytest.raises(KTooLarge):
            our_bound(5, 3)

    def test_kc(self):
        assert ea_singleton_kc(5) == 3
        assert ea_singleton_kc(2) == 2
        assert ea_singleton_kc(10) == 6
        # maximising ea_singleton(5, k, k) over k gives the same value
        assert max(ea_singleton(5, k, k) for k in range(6)) == 3

    def test_proven_regime(self):
        assert ea_singleton_proven(5, 3)
        assert not ea_singleton_proven(5, 4)

    def test_invalid(self):
        with pytest.raises(ValidationError):
            q_singleton(3, 4)
        with pytest.raises(ValidationError):
            ea_singleton(5, 1, -1)


@given(st.integers(1, 60), st.data())
def test_monotone_in_k(n, data):
    k = data.draw(st.integers(0, n - 1))
    c = data.draw(st.integers(0, n))
    assert q_singleton(n, k + 1) <= q_singleton(n, k)
    assert ea_singleton(n, k + 1, c) <= ea_singleton(n, k, c)
    assert absolute_bound(n, k + 1) <= absolute_bound(n, k)
    if 2 * (k + 1) <= n:
        assert our_bound(n, k + 1) <= our_bound(n, k)


@given(st.integers(1, 60), st.data())
def test_monotone_in_c_and_reductions(n, data):
    k = data.draw(st.integers(0, n))
    c = data.draw(st.integers(0, n))
    assert ea_singleton(n, k, c + 1) >= ea_singleton(n, k, c)
    assert ea_singleton(n, k, 0) == q_singleton(n, k)
    assert ea_singleton(n, k, n - k) == absolute_bound(n, k)


class TestClassify:
    def test_5_1_4_1(self):
        r = classify(SchemeParams(5, 1, 4, 1, 4))
        assert r.per_bound["eaSingleton"].max_d == 3
        assert r.per_bound["eaSingleton"].status == "violates"
        assert r.per_bound["ourBound"].status == "meets"
        assert r.per_bound["absolute"].status == "satisfies"
        assert r.c_ge_k
        assert any("outside the proven regime" in note for note in r.notes)

    def test_9_1_6_1(self):
        r = classify(SchemeParams(9, 1, 6, 1, 2))
        assert r.per_bound["eaSingleton"].max_d == 5
        assert r.violates("eaSingleton")
        assert r.per_bound["ourBound"].status == "satisfies"
        assert r.c_ge_k

    def test_5_1_3_0(self):
        r = classify(SchemeParams(5, 1, 3, 0, 2))
        assert r.per_bound["qSingleton"].status == "meets"
        assert not r.violates("eaSingleton")

    def test_our_bound_inapplicable(self):
        r = classify(SchemeParams(5, 3, 1, 3, 2))
        assert r.per_bound["ourBound"].status == "inapplicable"
        assert r.per_bound["ourBound"].max_d is None

    def test_absolute_violation_note(self):
        r = classify(SchemeParams(5, 1, 6, 5, 2))
        assert r.violates("absolute")

    def test_json_shape(self):
        doc = classify(SchemeParams(5, 1, 4, 1, 4)).to_json()
        assert list(doc["bounds"]) == list(BOUND_IDS)
        assert doc["bounds"]["eaSingleton"] == {"maxD": 3, "status": "violates"}
        assert doc["cGeK"] is True

    def test_text(self):
        text = classify(SchemeParams(5, 1, 4, 1, 4)).to_text()
        assert text.splitlines()[0] == "[[5,1,4;1]]_4"
        assert "violates" in text

    @pytest.mark.parametrize("p,m,n,kappa", [(2, 2, 5, 2), (2, 3, 9, 4), (3, 2, 10, 2), (5, 1, 6, 4), (2, 2, 4, 2)])
    def test_constructed_schemes(self, p, m, n, kappa):
        r = classify(scheme_from_code(rs_code(field_new(p, m), n, kappa)))
        assert r.per_bound["ourBound"].status == "meets"
        assert not r.violates("absolute")

    def test_violation_implies_c_ge_k(self):
        # every constructed scheme that beats the EA bound uses c >= k pairs
        seen = 0
        for p, m in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2)]:
            F = field_new(p, m)
            for n in range(2, F.q + 2):
                for kappa in range(2, n + 1, 2):
                    r = classify(scheme_from_code(rs_code(F, n, kappa)))
                    if r.violates("eaSingleton"):
                        seen += 1
                        assert r.c_ge_k
        assert seen > 10

    def test_c_flag_reported_honestly(self):
        assert not classify(SchemeParams(6, 2, 4, 0, 2)).c_ge_k


class TestFrontier:
    def test_endpoints(self):
        assert frontier_delta("absolute", 0) == 1
        assert frontier_delta("qecc", 0) == Fraction(1, 2)
        assert frontier_delta("eaHalf", 0) == Fraction(3, 4)
        assert frontier_delta("ours", Fraction(1, 2)) == 0
        assert frontier_delta("eaKC", Fraction(1, 2)) == Fraction(1, 2)

    def test_crossings(self):
        assert crossing("ours", "eaHalf") == (Fraction(1, 5), Fraction(3, 5))
        assert crossing("ours", "eaKC") == (Fraction(1, 4), Fraction(1, 2))
        assert crossing("qecc", "eaHalf") == (Fraction(1), Fraction(0))
        assert crossing("absolute", "absolute") is None

    def test_ours_values(self):
        assert frontier_delta("ours", Fraction(1, 5)) == Fraction(3, 5)
        assert frontier_delta("ours", "1/4") == Fraction(1, 2)

    def test_grid(self):
        pts = frontier("ours", 3)
        assert [(p.R, p.delta) for p in pts] == [(0, 1), (Fraction(1, 4), Fraction(1, 2)), (Fraction(1, 2), 0)]

    def test_domain(self):
        with pytest.raises(ValidationError):
            frontier_delta("ours", Fraction(3, 4))
        with pytest.raises(UnknownVariant):
            frontier("nope", 3)
        with pytest.raises(ValidationError):
            frontier("ours", 1)

    def test_eaHalf_from_finite_bound(self):
        # delta = lim ea_singleton(n, Rn, (n - Rn)/2) / n
        n = 4000
        for R in (Fraction(0), Fraction(1, 5), Fraction(1, 2)):
            k = int(R * n)
            approx = Fraction(ea_singleton(n, k, (n - k) // 2), n)
            assert abs(approx - frontier_delta("eaHalf", R)) < Fraction(1, 1000)

    def test_format(self):
        assert format_fraction(Fraction(1, 4)) == "0.25"
        assert format_fraction(Fraction(0)) == "0"
        assert format_fraction(Fraction(3)) == "3"
        assert format_fraction(Fraction(1, 3)) == "0.33333333333333333"
        assert format_fraction(Fraction(-1, 8)) == "-0.125"
