from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpideg.errors import BudgetExceeded
from qpideg.pideg import image_cardinality, pideg_oracle, pideg_quotient, pideg_snf
from test_skew import M_PRIME, SO5, skew_matrices


@pytest.mark.parametrize("ell,want", [(3, 3), (5, 5), (6, 3), (7, 7), (9, 9), (2, 1), (4, 2)])
def test_so5_quotient(ell, want):
    rep = pideg_quotient(SO5, [1], ell)
    assert rep.value == want
    assert rep.method_oracle == want and rep.agree
    assert rep.h_image_cardinality == want * want


def test_m_prime_snf_route():
    assert pideg_snf(M_PRIME, 5) == 5
    assert pideg_snf(M_PRIME, 2) == 1


def test_ell_one_and_empty():
    assert pideg_snf(SO5, 1) == 1
    assert pideg_oracle(SO5, 1) == (1, 1)
    assert pideg_quotient(SO5, [0, 1, 2, 3], 5).value == 1


def test_zero_matrix_is_commutative():
    z = ((0, 0), (0, 0))
    assert pideg_snf(z, 7) == 1 and pideg_oracle(z, 7) == (1, 1)


def test_enumerate_budget():
    with pytest.raises(BudgetExceeded):
        image_cardinality(SO5, 7, budget=100, method="enumerate")
    assert image_cardinality(SO5, 3, budget=100, method="enumerate") == (9, "enumerate")


def test_falls_back_to_smith_over_budget():
    h, how = image_cardinality(SO5, 5, budget=3)
    assert (h, how) == (25, "smith")
    rep = pideg_quotient(SO5, [], 5, budget=3)
    assert rep.method_oracle is None and rep.agree and rep.value == 5


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("QPI_BUDGET", "3")
    assert image_cardinality(SO5, 5)[1] == "smith"


@settings(max_examples=150)
@given(skew_matrices(), st.integers(min_value=1, max_value=8))
def test_three_routes_agree(m, ell):
    h_walk, _ = image_cardinality(m, ell, method="enumerate")
    h_closure, how = image_cardinality(m, ell, method="closure")
    h_smith, _ = image_cardinality(m, ell, method="smith")
    assert h_walk == h_closure == h_smith
    r = isqrt(h_walk)
    assert r * r == h_walk
    assert r == pideg_snf(m, ell)


@given(skew_matrices(max_n=4), st.permutations(range(4)), st.integers(min_value=2, max_value=8))
def test_permutation_invariance(m, perm, ell):
    n = len(m)
    p = [i for i in perm if i < n]
    pm = tuple(tuple(m[p[i]][p[j]] for j in range(n)) for i in range(n))
    assert pideg_snf(pm, ell) == pideg_snf(m, ell)


@given(skew_matrices(), st.integers(min_value=2, max_value=8))
def test_pideg_divides_power_of_ell(m, ell):
    d = pideg_snf(m, ell)
    assert ell ** len(m) % (d * d) == 0
