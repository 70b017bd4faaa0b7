import itertools
from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CHERRY_CAT4, CHERRY_E4, MIXED_TERNARY, TRIPLE_CAT3
from inducibility.bounds import (
    best_lower,
    best_upper,
    complete_inducibility,
    equal_branch_bounds,
    eta,
    even_inducibility,
    exact_inducibility,
    inducibility_report,
    lower_bound_star,
    lower_bound_thm11,
    phi,
    upper_bound_balanced,
    upper_bound_cor5,
    upper_bound_prop4,
)
from inducibility.counting import density
from inducibility.errors import DomainError
from inducibility.search import max_density
from inducibility.supremum import (
    PROVEN,
    REFUTED,
    certify_supremum_condition,
    multinomial,
    sigma,
    z_function,
    z_supremum,
)
from inducibility.trees import branches, caterpillar, complete_tree, enumerate_trees, even_tree, parse_tree, star

# Ternary even-tree inducibilities k = 1..12. The k = 10 entry is computed
# independently below; it differs from a commonly quoted 1575/255886.
TERNARY_EVEN = [
    Fraction(1), Fraction(1), Fraction(1, 4), Fraction(6, 13), Fraction(3, 8), Fraction(15, 121),
    Fraction(15, 208), Fraction(35, 2186), Fraction(7, 5248), Fraction(1575, 255866),
    Fraction(4725, 453596), Fraction(1247400, 194594881),
]


def test_ternary_even_values():
    assert [even_inducibility(3, k) for k in range(1, 13)] == TERNARY_EVEN


def test_even_value_equals_eta_of_even_tree():
    for d in (2, 3, 4):
        for k in range(1, 16):
            assert even_inducibility(d, k) == eta(even_tree(d, k), d)


def test_ternary_ten_leaf_value_by_extrapolation():
    # densities in complete ternary trees approach the limit at rate 1/3 per level
    D = even_tree(3, 10)
    a, b = density(D, complete_tree(3, 9), 3), density(D, complete_tree(3, 10), 3)
    limit = (3 * b - a) / 2
    assert abs(limit - Fraction(1575, 255866)) < Fraction(1, 10**7)
    assert abs(limit - Fraction(1575, 255886)) > Fraction(4, 10**7)


def test_complete_product_formula():
    assert complete_inducibility(2, 2) == Fraction(3, 7)
    for d, h in [(2, 0), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (4, 2)]:
        assert complete_inducibility(d, h) == even_inducibility(d, d**h)


def test_worked_examples():
    assert eta(CHERRY_E4, 2) == Fraction(45, 217)
    assert eta(MIXED_TERNARY, 3) == Fraction(15, 121)
    assert eta(TRIPLE_CAT3, 3) == Fraction(189, 5248)
    assert equal_branch_bounds(TRIPLE_CAT3, 3) == (Fraction(560, 6561), Fraction(7, 82))
    assert lower_bound_thm11(CHERRY_CAT4, 2) == Fraction(80, 243)
    assert eta(CHERRY_CAT4, 2) == Fraction(60, 217)
    assert upper_bound_prop4(CHERRY_CAT4, 2).value == Fraction(15, 31)


def test_phi_and_small_bounds():
    assert phi(even_tree(3, 3), 3) == Fraction(1, 3)
    assert upper_bound_cor5(even_tree(3, 6), 3).value == 1
    assert upper_bound_prop4(even_tree(3, 4), 3).value == Fraction(6, 13)
    assert upper_bound_balanced(even_tree(3, 9), 3).value == Fraction(7, 5248)
    with pytest.raises(DomainError):
        upper_bound_balanced(CHERRY_CAT4, 2)


def test_phi_is_multiplicative():
    # phi(D) = Z_D(uniform) * prod phi(branch)
    for d in (2, 3):
        for k in range(2, 8):
            for D in enumerate_trees(d, k):
                expected = z_function(D, d).uniform_value
                for b in branches(D, d):
                    expected *= phi(b, d)
                assert phi(D, d) == expected


def test_exact_certificates():
    assert exact_inducibility(even_tree(3, 8), 3) == (Fraction(35, 2186), "EvenTree")
    assert exact_inducibility(caterpillar(6), 2) == (1, "Caterpillar")
    assert exact_inducibility(parse_tree("(*,*)"), 2)[1] == "TwoLeaf"
    assert exact_inducibility(CHERRY_E4, 2) == (Fraction(45, 217), "SupremumCondition")
    assert exact_inducibility(TRIPLE_CAT3, 3) is None


def test_star_bound():
    for k in (2, 3, 4):
        assert lower_bound_star(k, k) == eta(star(k), k)
    with pytest.raises(DomainError):
        lower_bound_star(1, 2)


def test_sigma_literal():
    # zero-padded branch sizes (2, 2, 0): every vector of 3 entries in [0, 4)
    # summing to 4 with at least one zero
    D = parse_tree("((*,*),(*,*))")
    vectors = [v for v in itertools.product(range(4), repeat=3) if sum(v) == 4 and 0 in v]
    expected = sum(factorial(4) // (factorial(a) * factorial(b) * factorial(c)) for a, b, c in vectors)
    assert sigma(D, 3) == expected == 42
    assert upper_bound_balanced(D, 3).source == "thm8:sigma"
    zf = z_function(D, 3)
    assert zf.exact((Fraction(1, 2), Fraction(1, 2), 0)) == Fraction(2 * 3, 42) / 2


def test_binary_supremum_on_grid():
    zf = z_function(CHERRY_CAT4, 2)
    assert zf.exponents == (4, 2)
    x = np.linspace(0.0, 1.0, 100001)[:-1]
    grid = zf(np.stack([x, 1 - x], axis=-1))
    assert np.nanmax(grid) <= 1 / 31 + 1e-12
    assert zf.exact((Fraction(1, 2), Fraction(1, 2))) == Fraction(1, 31)
    assert zf.coefficient_cap() == Fraction(1, 15)
    assert z_supremum(zf).value == Fraction(1, 31)


def test_supremum_certificates():
    assert certify_supremum_condition(CHERRY_E4, 2).status == PROVEN
    assert certify_supremum_condition(even_tree(3, 7), 3).status == PROVEN
    # one branch holds a single leaf: Z tends to 1/k near a corner
    assert certify_supremum_condition(parse_tree("(*,(*,(*,(*,(*,*)))))"), 2).status in (PROVEN, REFUTED)


def test_equal_branch_ratio():
    for d in (2, 3):
        for B in list(enumerate_trees(d, 3)) + list(enumerate_trees(d, 2)):
            D = parse_tree("(" + ",".join([B.key] * d) + ")")
            pair = equal_branch_bounds(D, d)
            if best_lower(B, d) == best_upper(B, d):
                k = D.n_leaves
                assert pair[1] / pair[0] == Fraction(d**k, d**k - d)


def test_uniform_value_of_z():
    for d in (2, 3, 4):
        for k in range(2, 8):
            for D in enumerate_trees(d, k):
                zf = z_function(D, d)
                assert zf.exact((Fraction(1, d),) * d) == Fraction(zf.m_size, d**k - d)


@pytest.mark.parametrize("d,k_max", [(2, 8), (3, 7)])
def test_bounds_are_consistent(d, k_max):
    for k in range(2, k_max + 1):
        for D in enumerate_trees(d, k):
            lo, hi = best_lower(D, d), best_upper(D, d)
            assert eta(D, d) <= lo <= hi <= 1, D
            rep = inducibility_report(D, d)
            for b in rep.upper:
                if b.rigorous:
                    assert b.value >= lo, (D, b)
            for b in rep.lower:
                assert b.value <= hi, (D, b)


@pytest.mark.parametrize("d,k_max,n", [(2, 6, 12), (3, 5, 10)])
def test_lower_bounds_below_finite_maxima(d, k_max, n):
    # max densities decrease in n, so every valid lower bound sits below each of them
    for k in range(2, k_max + 1):
        for D in enumerate_trees(d, k):
            assert best_lower(D, d) <= max_density(D, d, n).max_density, D


def test_report_json_roundtrip():
    import json

    rep = inducibility_report(TRIPLE_CAT3, 3)
    data = json.loads(rep.to_json())
    assert data["best_lower"] == {"num": "560", "den": "6561"}
    assert data["best_upper"] == {"num": "7", "den": "82"}
    assert data["exact"] is None


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.data())
def test_z_below_cap_at_random_points(d, data):
    k = data.draw(st.integers(2, 7))
    D = data.draw(st.sampled_from(list(enumerate_trees(d, k))))
    zf = z_function(D, d)
    raw = data.draw(st.lists(st.integers(1, 50), min_size=d, max_size=d))
    x = tuple(Fraction(r, sum(raw)) for r in raw)
    assert zf.exact(x) <= zf.coefficient_cap()
    assert zf.exact(x) <= z_supremum(zf, numeric=False).rigorous_upper
