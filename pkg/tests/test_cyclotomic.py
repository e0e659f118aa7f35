import cmath
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpideg.cyclotomic import (
    CycNum,
    LaurentPoly,
    QLaurentRatio,
    cyclotomic_polynomial,
    eval_qratio,
    q_power,
    qbinomial,
)
from qpideg.errors import DenominatorVanishes, DivisionByZero, EllMismatch


def as_complex(x: CycNum) -> complex:
    z = cmath.exp(2j * cmath.pi / x.ell)
    return sum(float(c) * z**k for k, c in enumerate(x.coeffs))


def close(a, b):
    return abs(a - b) < 1e-8 * (1 + abs(b))


ells = st.integers(min_value=1, max_value=12)
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def cycnums(draw, ell=None):
    ell = draw(ells) if ell is None else ell
    coeffs = draw(st.lists(fracs, max_size=2 * ell))
    return CycNum(ell, coeffs)


@st.composite
def cyc_pairs(draw):
    ell = draw(ells)
    return draw(cycnums(ell)), draw(cycnums(ell))


@st.composite
def cyc_triples(draw):
    ell = draw(ells)
    return draw(cycnums(ell)), draw(cycnums(ell)), draw(cycnums(ell))


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == [-1, 1]
    assert cyclotomic_polynomial(5) == [1, 1, 1, 1, 1]
    assert cyclotomic_polynomial(6) == [1, -1, 1]
    assert cyclotomic_polynomial(12) == [1, 0, -1, 0, 1]


def test_zeta_power_sum_is_zero():
    for ell in range(2, 13):
        assert sum((q_power(ell, k) for k in range(ell)), CycNum.zero(ell)).is_zero()
        assert q_power(ell, ell) == 1
        assert q_power(ell, 1) != 1


def test_half_power_is_minus_one():
    assert q_power(6, 3) == -1
    assert q_power(10, 5) == -1


def test_ell_one_is_rational_field():
    z = CycNum.zeta(1)
    assert z == 1 and z.degree == 1


def test_mixed_ell_rejected():
    with pytest.raises(EllMismatch):
        CycNum.zeta(5) + CycNum.zeta(7)


def test_zero_has_no_inverse():
    with pytest.raises(DivisionByZero):
        CycNum.zero(5).inverse()


def test_json_round_trip_and_shape():
    x = CycNum(5, [Fraction(1, 3), -2, 0, 7])
    data = x.to_json()
    assert data["ell"] == 5
    assert all(isinstance(a, str) and isinstance(b, str) for a, b in data["coeffs"])
    assert CycNum.from_json(json.loads(json.dumps(data))) == x


@given(cyc_pairs())
def test_field_ops_match_complex_evaluation(pair):
    a, b = pair
    assert close(as_complex(a + b), as_complex(a) + as_complex(b))
    assert close(as_complex(a - b), as_complex(a) - as_complex(b))
    assert close(as_complex(a * b), as_complex(a) * as_complex(b))


@given(cycnums())
def test_inverse(a):
    if a.is_zero():
        return
    inv = a.inverse()
    assert a * inv == 1
    assert close(as_complex(inv), 1 / as_complex(a))


@given(cyc_triples())
def test_ring_axioms(triple):
    a, b, c = triple
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a + b) - b == a


@given(cycnums())
def test_hash_consistent_with_eq(a):
    b = CycNum(a.ell, list(a.coeffs) + [0, 0])
    assert a == b and hash(a) == hash(b)


def test_laurent_arithmetic():
    q = LaurentPoly.q()
    qi = LaurentPoly(-1, (1,))
    assert q * qi == 1
    assert (q + qi) ** 2 == q**2 + 2 + qi**2
    assert (q - 1) * (q + 1) == q**2 - 1
    assert LaurentPoly.from_terms({-2: 3, 1: -1}).terms() == {-2: 3, 1: -1}


def test_laurent_evaluate():
    q = LaurentPoly.q()
    assert (q**3 + 2).evaluate(5) == q_power(5, 3) + 2
    assert LaurentPoly(-1, (1,)).evaluate(7) == q_power(7, -1)


def test_ratio_evaluation_and_vanishing_denominator():
    q = LaurentPoly.q()
    qi = LaurentPoly(-1, (1,))
    r = QLaurentRatio(q**2 - 1, q + qi)
    assert eval_qratio(r, 5) == (q_power(5, 2) - 1) / (q_power(5, 1) + q_power(5, -1))
    # q + q^-1 vanishes at a primitive 4th root of unity
    with pytest.raises(DenominatorVanishes):
        eval_qratio(r, 4)
    assert eval_qratio(QLaurentRatio(3, 2), 4) == Fraction(3, 2)


def test_ratio_json_round_trip():
    q = LaurentPoly.q()
    r = QLaurentRatio(q**4 - q, q + 1)
    back = QLaurentRatio.from_json(json.loads(json.dumps(r.to_json())))
    assert back == r


def gaussian_binomial_formal(n, i):
    """Coefficients of (n choose i)_q by counting subsets by inversions."""
    from itertools import combinations

    out = {}
    for s in combinations(range(n), i):
        inv = sum(1 for a in s for b in range(a) if b not in s)
        out[inv] = out.get(inv, 0) + 1
    return LaurentPoly.from_terms(out)


@pytest.mark.parametrize("ell", [3, 4, 5, 6])
def test_qbinomial_against_subset_count(ell):
    for n in range(7):
        for i in range(n + 1):
            assert qbinomial(n, i, q_power(ell, 1)) == gaussian_binomial_formal(n, i).evaluate(ell)


def test_qbinomial_vanishes_at_root_of_unity():
    # (ell choose i)_q = 0 for 0 < i < ell at a primitive ell-th root
    for ell in (3, 5, 7):
        for i in range(1, ell):
            assert qbinomial(ell, i, q_power(ell, 1)).is_zero()
    assert qbinomial(4, 2, 1) == 6
