from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest

from embednum.services.bounds import Assumption, Bound, Mode
from embednum.services.manifolds import (
    CALLER_D_ZERO,
    OS_D_ZERO,
    Brieskorn,
    LensSpace,
    branched_link_components,
    brieskorn_bounds,
    brieskorn_mu,
    connected_sum,
    dbc_upper,
    fintushel_stern_exact_two,
    fintushel_stern_family,
    fintushel_stern_signs,
    fintushel_stern_triples,
    in_two_three_family,
    is_square,
    lens_basic_lower,
    lens_bounds,
    milnor_fiber,
    orientation_reverse,
    set_rational_ball_predicate,
    sum_with_reverse,
    surgery_eps_bounds,
    tange_families,
    tange_index,
    tange_lower,
    torus_knot_surgery,
)
from embednum.services.obstruct import SpinFilling


def milnor_signature_oracle(p: int, q: int, r: int) -> int:
    """Signature by the triple count, done in Fraction arithmetic."""
    sigma = 0
    for i in range(1, p):
        for j in range(1, q):
            for k in range(1, r):
                s = (Fraction(i, p) + Fraction(j, q) + Fraction(k, r)) % 2
                if 0 < s < 1:
                    sigma += 1
                elif 1 < s < 2:
                    sigma -= 1
    return sigma


@pytest.fixture
def rational_ball_slot():
    try:
        yield set_rational_ball_predicate
    finally:
        set_rational_ball_predicate(None)


class TestLensSpace:
    def test_normalizes(self):
        assert LensSpace.of(5, 7) == LensSpace(5, 2)
        assert str(LensSpace(5, 2)) == "L(5,2)"

    @pytest.mark.parametrize("p, q", [(4, 2), (1, 0), (5, 5), (5, 0)])
    def test_rejects(self, p, q):
        with pytest.raises(ValueError):
            LensSpace(p, q)

    def test_of_rejects_common_factor(self):
        with pytest.raises(ValueError):
            LensSpace.of(4, 6)

    def test_reverse(self):
        assert LensSpace(5, 2).reverse() == LensSpace(5, 3)

    def test_branched_cover_components(self):
        assert branched_link_components(LensSpace(7, 2)) == 1
        assert branched_link_components(LensSpace(12, 5)) == 2
        assert lens_basic_lower(LensSpace(7, 2)).lower == 1

    def test_diffeomorphism(self):
        assert LensSpace(5, 2).is_diffeomorphic(LensSpace(5, 3))
        assert not LensSpace(7, 2).is_diffeomorphic(LensSpace(7, 3))
        assert not LensSpace(7, 2).is_diffeomorphic(LensSpace(5, 2))


class TestLensBounds:
    @pytest.mark.parametrize("p, q, value", [(3, 1, 2), (7, 1, 6), (12, 11, 1), (5, 2, 2)])
    def test_exact(self, p, q, value):
        bound = lens_bounds(LensSpace(p, q))
        assert bound.exact
        assert bound.lower == value
        assert bound.assumption is Assumption.UNCONDITIONAL

    def test_interval(self):
        bound = lens_bounds(LensSpace(9, 2))
        assert (bound.lower, bound.upper) == (1, 2)

    def test_notes_per_spin_structure(self):
        bound = lens_bounds(LensSpace(12, 11))
        assert sum("splitting search lower" in note for note in bound.notes) == 2

    def test_trace_adds_search_lines(self):
        bound = lens_bounds(LensSpace(3, 1), trace=True)
        assert any("m=0: infeasible" in note for note in bound.notes)

    def test_rational_ball_predicate(self, rational_ball_slot):
        rational_ball_slot(lambda L: True)
        bound = lens_bounds(LensSpace(9, 2))
        assert bound.exact and bound.lower == 1
        assert bound.upper_assumption is Assumption.CITED_CONSTRUCTION

    def test_no_rational_ball_predicate(self, rational_ball_slot):
        rational_ball_slot(lambda L: False)
        bound = lens_bounds(LensSpace(9, 2))
        assert bound.exact and bound.lower == 2
        assert bound.assumption is Assumption.CITED_CONSTRUCTION

    def test_predicate_ignored_for_even_p(self, rational_ball_slot):
        calls = []
        rational_ball_slot(lambda L: calls.append(L) or True)
        lens_bounds(LensSpace(12, 11))
        assert calls == []


class TestMilnorFiber:
    @pytest.mark.parametrize("triple, expected", [
        ((2, 3, 5), (8, -8)),
        ((2, 3, 7), (12, -8)),
        ((2, 3, 11), (20, -16)),
    ])
    def test_examples(self, triple, expected):
        f = milnor_fiber(Brieskorn.of(*triple))
        assert (f.b2, f.sigma) == expected

    @pytest.mark.parametrize("triple", [(2, 3, 13), (2, 5, 7), (3, 4, 5), (3, 5, 7), (2, 7, 9)])
    def test_matches_fraction_oracle(self, triple):
        assert milnor_fiber(Brieskorn.of(*triple)).sigma == milnor_signature_oracle(*triple)

    def test_mu_of_two_three_family(self):
        for n in range(1, 7):
            assert brieskorn_mu(Brieskorn(2, 3, 6 * n + 1)) == 8 * (n % 2)

    def test_every_coprime_triple_up_to_twelve(self):
        checked = 0
        for p, q, r in combinations(range(2, 13), 3):
            if gcd(p, q) != 1 or gcd(p, r) != 1 or gcd(q, r) != 1:
                continue
            f = milnor_fiber(Brieskorn(p, q, r))
            assert abs(f.sigma) <= f.b2, (p, q, r)
            assert (f.b2 - f.sigma) % 2 == 0, (p, q, r)
            assert f.sigma == milnor_signature_oracle(p, q, r), (p, q, r)
            checked += 1
        assert checked == 45


class TestBrieskorn:
    def test_sorted_and_coprime(self):
        assert Brieskorn.of(5, 2, 3).triple == (2, 3, 5)
        assert str(Brieskorn.of(5, 2, 3)) == "Sigma(2,3,5)"
        with pytest.raises(ValueError):
            Brieskorn.of(2, 4, 5)

    def test_poincare_sphere(self):
        bound = brieskorn_bounds(Brieskorn(2, 3, 5))
        assert bound.exact and bound.lower == 8

    @pytest.mark.parametrize("r", [7, 19, 31])
    def test_d_zero_family_is_ten(self, r):
        bound = brieskorn_bounds(Brieskorn(2, 3, r), d_zero=True)
        assert bound.exact and bound.lower == 10
        assert OS_D_ZERO in bound.lower_citation

    def test_d_zero_outside_family_is_caller_supplied(self):
        bound = brieskorn_bounds(Brieskorn(2, 3, 11), d_zero=True)
        assert CALLER_D_ZERO in bound.lower_citation
        assert (bound.lower, bound.upper) == (2, 2)

    def test_even_torus_knot_surgery(self):
        B = Brieskorn(2, 3, 13)
        assert brieskorn_mu(B) == 0
        bound = brieskorn_bounds(B)
        assert (bound.lower, bound.upper) == (0, 2)

    def test_torus_knot_recognition(self):
        assert torus_knot_surgery(Brieskorn(2, 3, 13)) == (2, 1)
        assert torus_knot_surgery(Brieskorn(2, 3, 5)) == (1, -1)
        assert torus_knot_surgery(Brieskorn(3, 5, 7)) is None
        assert in_two_three_family(Brieskorn(2, 3, 19))
        assert not in_two_three_family(Brieskorn(2, 3, 5))

    def test_sign_pattern_gives_exact_two(self):
        bound = brieskorn_bounds(Brieskorn(3, 5, 7))
        assert bound.exact and bound.lower == 2
        assert bound.assumption is Assumption.UNCONDITIONAL
        assert "Fintushel-Stern" in bound.upper_citation

    @pytest.mark.parametrize("p", [7, 9, 11])
    def test_sign_family_members_are_exact_two(self, p):
        B = Brieskorn.of(*(abs(v) for v in fintushel_stern_family(p)))
        bound = brieskorn_bounds(B)
        assert bound.exact and bound.lower == 2

    def test_sign_patterns(self):
        assert fintushel_stern_signs(Brieskorn(3, 5, 7)).exact
        assert fintushel_stern_signs(Brieskorn(3, 5, 11)) is None
        assert fintushel_stern_signs(Brieskorn(2, 3, 5)) is None

    def test_assume_11_8_tags_lower(self):
        bound = brieskorn_bounds(Brieskorn(2, 3, 5), mode=Mode.ASSUME_11_8)
        assert bound.lower_assumption is Assumption.ASSUMES_11_8


class TestTange:
    def test_families_for_one(self):
        assert Brieskorn(2, 3, 5) in tange_families(1)
        assert Brieskorn(3, 4, 7) in tange_families(1)

    def test_index(self):
        assert tange_index(Brieskorn(6, 7, 13)) == 2
        assert tange_index(Brieskorn(2, 3, 7)) is None

    @pytest.mark.parametrize("n, expected", [(1, 2), (10, 10)])
    def test_lower(self, n, expected):
        assert tange_lower(n).lower == expected

    def test_lower_unbounded(self):
        values = [tange_lower(n).lower for n in range(1, 60)]
        assert values == sorted(values)
        assert values[-1] > values[0] + 40

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            tange_families(0)
        with pytest.raises(ValueError):
            tange_lower(0)

    def test_member_gets_extra_filling_note(self):
        bound = brieskorn_bounds(Brieskorn(3, 4, 7))
        assert any("n = 1" in note for note in bound.notes)


class TestFintushelStern:
    @pytest.mark.parametrize("p, expected", [
        (5, (-3, 5, 7)),
        (7, (-5, 7, 17)),
        (9, (-7, 9, 31)),
        (11, (-9, 11, 49)),
    ])
    def test_family(self, p, expected):
        assert fintushel_stern_family(p) == expected
        bound = fintushel_stern_exact_two(*expected)
        assert bound.exact and bound.lower == 2

    def test_identity_fails(self):
        assert fintushel_stern_exact_two(3, 5, 7) is None

    @pytest.mark.parametrize("triple", [(2, 5, 7), (-3, 5, 9), (1, 5, 7)])
    def test_rejects(self, triple):
        with pytest.raises(ValueError):
            fintushel_stern_exact_two(*triple)

    def test_family_rejects_even(self):
        with pytest.raises(ValueError):
            fintushel_stern_family(6)

    def test_triples(self):
        found = fintushel_stern_triples(50)
        for triple in [(-3, 5, 7), (-5, 7, 17), (-7, 9, 31), (-9, 11, 49)]:
            assert triple in found
        for a, b, c in found:
            assert a * b + a * c + b * c == -1


class TestSurgery:
    @pytest.mark.parametrize("p, q, lower, upper", [
        (2, 1, 1, 1),
        (4, 1, 1, 1),
        (3, 1, 2, None),
        (-3, 1, 2, None),
        (9, 1, 1, None),
        (5, 2, 1, None),
        (1, 2, 0, 2),
        (-1, -4, 0, 2),
        (1, 3, 0, None),
        (0, 1, 0, None),
    ])
    def test_examples(self, p, q, lower, upper):
        bound = surgery_eps_bounds(p, q)
        assert (bound.lower, bound.upper) == (lower, upper)

    def test_no_bound_cases_carry_note(self):
        assert surgery_eps_bounds(0, 1).notes
        assert surgery_eps_bounds(1, 3).notes

    @pytest.mark.parametrize("p, q", [(2, 0), (4, 2)])
    def test_rejects(self, p, q):
        with pytest.raises(ValueError):
            surgery_eps_bounds(p, q)

    def test_integral_surgery_squares(self):
        for a in range(2, 10001):
            bound = surgery_eps_bounds(a, 1)
            if a % 2 == 0:
                assert bound.exact and bound.lower == 1
            else:
                assert bound.lower == (1 if is_square(a) else 2)


class TestGeneralRules:
    def test_dbc(self):
        assert dbc_upper(1, 1).upper == 2
        assert dbc_upper(3, 1).upper == 2
        with pytest.raises(ValueError):
            dbc_upper(-1, 0)

    def test_connected_sum(self):
        total = connected_sum(Bound(upper=2), Bound(upper=3,
                                                    upper_assumption=Assumption.CITED_CONSTRUCTION))
        assert total.upper == 5
        assert total.upper_assumption is Assumption.CITED_CONSTRUCTION

    def test_connected_sum_needs_both(self):
        assert connected_sum(Bound(upper=2), Bound()).upper is None

    def test_reversal(self):
        bound = Bound(lower=1, upper=4)
        assert orientation_reverse(bound) == bound
        assert sum_with_reverse(bound).upper == 4
        assert sum_with_reverse(Bound()).upper is None

    def test_spin_filling_type(self):
        assert milnor_fiber(Brieskorn(2, 3, 5)) == SpinFilling(8, -8)
