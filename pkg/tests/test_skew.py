from itertools import combinations
from math import gcd

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpideg.errors import IndexOutOfRange, NotSkewSymmetric
from qpideg.skew import (
    delete_rows_cols,
    determinant,
    integer_inverse,
    integer_rank,
    mat_mul,
    skew_normal_form,
    smith_normal_form,
    transpose,
)

SO5 = ((0, 2, 0, -2), (-2, 0, 2, 0), (0, -2, 0, 2), (2, 0, -2, 0))
M_PRIME = ((0, 0, -2), (0, 0, 2), (2, -2, 0))


@st.composite
def skew_matrices(draw, max_n=5, bound=4):
    n = draw(st.integers(min_value=0, max_value=max_n))
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = draw(st.integers(min_value=-bound, max_value=bound))
            m[j][i] = -m[i][j]
    return tuple(tuple(r) for r in m)


def laplace_det(a):
    if not a:
        return 1
    return sum((-1) ** j * a[0][j] * laplace_det([r[:j] + r[j + 1:] for r in a[1:]])
               for j in range(len(a)) if a[0][j])


def determinantal_divisors(m):
    """Elementary divisors as quotients of gcds of k x k minors."""
    n = len(m)
    d_prev, out = 1, []
    for k in range(1, n + 1):
        g = 0
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                g = gcd(g, laplace_det([[m[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        out.append(g // d_prev)
        d_prev = g
    return out


def check_form(m, s):
    n = len(m)
    assert mat_mul(mat_mul(s.E, m), transpose(s.E)) == s.S
    assert abs(determinant(s.E)) == 1
    hs = s.invariant_factors
    assert all(h > 0 for h in hs)
    assert all(hs[i + 1] % hs[i] == 0 for i in range(len(hs) - 1))
    assert 2 * len(hs) + s.kernel_dim == n
    want = [[0] * n for _ in range(n)]
    for i, h in enumerate(hs):
        want[2 * i][2 * i + 1], want[2 * i + 1][2 * i] = h, -h
    assert s.S == tuple(tuple(r) for r in want)


def test_m_prime_normal_form():
    s = skew_normal_form(M_PRIME)
    assert s.S == ((0, 2, 0), (-2, 0, 0), (0, 0, 0))
    assert s.invariant_factors == (2,) and s.kernel_dim == 1
    check_form(M_PRIME, s)


def test_zero_matrix():
    s = skew_normal_form(((0, 0, 0), (0, 0, 0), (0, 0, 0)))
    assert s.invariant_factors == () and s.kernel_dim == 3
    assert s.E == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_so5_matrix():
    s = skew_normal_form(SO5)
    assert s.invariant_factors == (2,) and s.kernel_dim == 2
    assert integer_rank(SO5) == 2 == np.linalg.matrix_rank(np.array(SO5))
    check_form(SO5, s)


def test_empty_matrix():
    s = skew_normal_form(())
    assert s.invariant_factors == () and s.kernel_dim == 0


def test_divisibility_repair():
    # blocks 2 and 3 out of order must merge into 1 and 6
    m = ((0, 2, 0, 0), (-2, 0, 0, 0), (0, 0, 0, 3), (0, 0, -3, 0))
    s = skew_normal_form(m)
    assert s.invariant_factors == (1, 6)
    check_form(m, s)


def test_not_skew_rejected():
    with pytest.raises(NotSkewSymmetric):
        skew_normal_form(((0, 1), (1, 0)))
    with pytest.raises(NotSkewSymmetric):
        skew_normal_form(((1, 0), (0, 0)))
    with pytest.raises(NotSkewSymmetric):
        skew_normal_form(((0, 1, 2), (-1, 0, 3)))


def test_delete_rows_cols():
    assert delete_rows_cols(SO5, [1]) == M_PRIME
    assert delete_rows_cols(SO5, []) == SO5
    assert delete_rows_cols(SO5, [0, 1, 2, 3]) == ()
    with pytest.raises(IndexOutOfRange):
        delete_rows_cols(SO5, [4])


def test_integer_inverse():
    s = skew_normal_form(M_PRIME)
    e_inv = integer_inverse(s.E)
    assert mat_mul(s.E, e_inv) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    with pytest.raises(ValueError):
        integer_inverse(((2, 0), (0, 1)))


@given(skew_matrices())
def test_normal_form_invariants(m):
    check_form(m, skew_normal_form(m))


@given(skew_matrices())
def test_rank_matches_numpy(m):
    s = skew_normal_form(m)
    rank = int(np.linalg.matrix_rank(np.array(m, dtype=float))) if m else 0
    assert integer_rank(m) == rank == 2 * len(s.invariant_factors)


@given(skew_matrices(max_n=4))
def test_factors_against_determinantal_divisors(m):
    hs = skew_normal_form(m).invariant_factors
    assert determinantal_divisors(m) == sorted(h for h in hs for _ in range(2))


@given(skew_matrices())
def test_smith_pairs_skew_factors(m):
    s = skew_normal_form(m)
    sm = smith_normal_form(m)
    n = len(m)
    assert mat_mul(mat_mul(sm.U, m), sm.V) == sm.D
    assert all(sm.D[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    nonzero = [d for d in sm.elementary_divisors if d]
    assert nonzero == sorted(h for h in s.invariant_factors for _ in range(2))


@given(skew_matrices(), st.permutations(range(5)))
def test_congruence_invariance(m, perm):
    """Factors are unchanged by simultaneous row/column permutation."""
    n = len(m)
    p = [i for i in perm if i < n]
    pm = tuple(tuple(m[p[i]][p[j]] for j in range(n)) for i in range(n))
    assert skew_normal_form(pm).invariant_factors == skew_normal_form(m).invariant_factors


def test_smith_rectangular():
    sm = smith_normal_form(((2, 4, 4), (-6, 6, 12)))
    assert [d for d in sm.elementary_divisors if d] == [2, 6]
