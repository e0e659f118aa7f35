"""Integer skew-symmetric matrices: congruence normal form and friends.

Matrices are plain nested sequences of Python ints; results use tuples of
tuples so they can be hashed and compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import IndexOutOfRange, NotSkewSymmetric

__all__ = [
    "SkewNormalForm",
    "SmithForm",
    "check_skew",
    "delete_rows_cols",
    "integer_inverse",
    "integer_rank",
    "mat_mul",
    "skew_normal_form",
    "smith_normal_form",
    "transpose",
]

Matrix = tuple[tuple[int, ...], ...]


def _freeze(rows) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a) -> Matrix:
    return tuple(zip(*a)) if a else ()


def mat_mul(a, b) -> Matrix:
    if not a:
        return ()
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in bt) for r in a)


def check_skew(m) -> Matrix:
    """Validate a square skew-symmetric integer matrix and freeze it."""
    m = _freeze(m)
    n = len(m)
    if any(len(r) != n for r in m):
        raise NotSkewSymmetric("matrix is not square")
    for i in range(n):
        for j in range(i, n):
            if m[i][j] != -m[j][i]:
                raise NotSkewSymmetric(f"entry ({i + 1},{j + 1}) breaks skew-symmetry")
    return m


def integer_rank(m) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    rank, prev = 0, 1
    for c in range(cols):
        p = next((r for r in range(rank, rows) if a[r][c]), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        piv = a[rank][c]
        for r in range(rank + 1, rows):
            for k in range(c + 1, cols):
                a[r][k] = (piv * a[r][k] - a[r][c] * a[rank][k]) // prev
            a[r][c] = 0
        prev = piv
        rank += 1
    return rank


@dataclass(frozen=True)
class SkewNormalForm:
    """Result of :func:`skew_normal_form`; ``E @ M @ E.T == S``."""

    S: Matrix
    E: Matrix
    invariant_factors: tuple[int, ...]
    kernel_dim: int

    @property
    def n(self) -> int:
        return len(self.S)

    @property
    def pairs(self) -> int:
        return len(self.invariant_factors)

    def to_json(self) -> dict:
        return {
            "S": [list(r) for r in self.S],
            "E": [list(r) for r in self.E],
            "factors": list(self.invariant_factors),
            "kernel_dim": self.kernel_dim,
        }


class _Congruence:
    """Working state: A == E M E^T maintained under simultaneous moves."""

    def __init__(self, m):
        self.a = [list(r) for r in m]
        self.e = [list(r) for r in identity(len(m))]

    def swap(self, i, j):
        if i == j:
            return
        a = self.a
        a[i], a[j] = a[j], a[i]
        for r in a:
            r[i], r[j] = r[j], r[i]
        self.e[i], self.e[j] = self.e[j], self.e[i]

    def negate(self, i):
        a = self.a
        a[i] = [-x for x in a[i]]
        for r in a:
            r[i] = -r[i]
        self.e[i] = [-x for x in self.e[i]]

    def add(self, t, s, c):
        """Basis move b_t += c * b_s."""
        if not c:
            return
        a = self.a
        a[t] = [x + c * y for x, y in zip(a[t], a[s])]
        for r in a:
            r[t] += c * r[s]
        self.e[t] = [x + c * y for x, y in zip(self.e[t], self.e[s])]

    def reduce(self, lo, hi):
        """Bring indices lo..hi-1 to block form; returns the factors found."""
        a = self.a
        factors = []
        k = lo
        while k + 1 < hi:
            best = None
            for i in range(k, hi):
                for j in range(i + 1, hi):
                    v = a[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, i, j = best
            self.swap(k, i)
            self.swap(k + 1, j)
            if a[k][k + 1] < 0:
                self.negate(k + 1)
            h = a[k][k + 1]
            clean = True
            for t in range(k + 2, hi):
                # b_t -= (A[k][t] // h) b_{k+1} shrinks row k; b_t += (A[k+1][t] // h) b_k row k+1
                self.add(t, k + 1, -(a[k][t] // h))
                self.add(t, k, a[k + 1][t] // h)
                if a[k][t] or a[k + 1][t]:
                    clean = False
            if clean:
                factors.append(h)
                k += 2
        return factors


def skew_normal_form(m) -> SkewNormalForm:
    """Congruence normal form of a skew-symmetric integer matrix.

    Returns block-diagonal S = E M E^T with blocks [[0, h], [-h, 0]],
    h_1 | h_2 | ... all positive, followed by a zero block, and the unimodular
    transform E.
    """
    m = check_skew(m)
    n = len(m)
    st = _Congruence(m)
    factors = st.reduce(0, n)
    # divisibility repair: re-reduce any adjacent pair of blocks out of order
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            h1, h2 = factors[i], factors[i + 1]
            if h2 % h1:
                st.add(2 * i, 2 * i + 2, 1)
                factors[i : i + 2] = st.reduce(2 * i, 2 * i + 4)
                changed = True
    s_mat, e_mat = _freeze(st.a), _freeze(st.e)
    if mat_mul(mat_mul(e_mat, m), transpose(e_mat)) != s_mat:
        raise ArithmeticError("congruence check failed")
    return SkewNormalForm(s_mat, e_mat, tuple(factors), n - 2 * len(factors))


def delete_rows_cols(m, w) -> Matrix:
    """Submatrix on the indices (0-based) not in ``w``, order preserved."""
    m = _freeze(m)
    n = len(m)
    w = set(w)
    bad = [i for i in w if not 0 <= i < n]
    if bad:
        raise IndexOutOfRange(f"indices {sorted(bad)} outside 0..{n - 1}")
    keep = [i for i in range(n) if i not in w]
    return tuple(tuple(m[i][j] for j in keep) for i in keep)


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V == D`` with D diagonal; divisors include trailing zeros."""

    D: Matrix
    U: Matrix
    V: Matrix
    elementary_divisors: tuple[int, ...]


def smith_normal_form(m) -> SmithForm:
    m = _freeze(m)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def row_op(t, s, c):  # row_t += c row_s
        a[t] = [x + c * y for x, y in zip(a[t], a[s])]
        u[t] = [x + c * y for x, y in zip(u[t], u[s])]

    def col_op(t, s, c):  # col_t += c col_s
        for r in a:
            r[t] += c * r[s]
        for r in v:
            r[t] += c * r[s]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    for k in range(min(rows, cols)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(k, rows) for j in range(k, cols) if a[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(k, i)
            swap_cols(k, j)
            p = a[k][k]
            done = True
            for i in range(k + 1, rows):
                row_op(i, k, -(a[i][k] // p))
                done &= a[i][k] == 0
            for j in range(k + 1, cols):
                col_op(j, k, -(a[k][j] // p))
                done &= a[k][j] == 0
            if not done:
                continue
            # pivot must divide the rest of the block
            bad = next(
                ((i, j) for i in range(k + 1, rows) for j in range(k + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_op(k, bad[0], 1)
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
    divisors = tuple(a[i][i] for i in range(min(rows, cols)))
    res = SmithForm(_freeze(a), _freeze(u), _freeze(v), divisors)
    if rows and mat_mul(mat_mul(res.U, m), res.V) != res.D:
        raise ArithmeticError("Smith form check failed")
    return res


def determinant(m) -> int:
    """Integer determinant by Bareiss elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        for r in range(c + 1, n):
            for k in range(c + 1, n):
                a[r][k] = (a[c][c] * a[r][k] - a[r][c] * a[c][k]) // prev
        prev = a[c][c]
    return sign * a[n - 1][n - 1]


def gcd_list(xs) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g


def integer_inverse(m) -> Matrix:
    """Inverse of a unimodular integer matrix, by Gauss-Jordan over Q."""
    m = _freeze(m)
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    inv = [r[n:] for r in a]
    if any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return _freeze([[int(x) for x in r] for r in inv])
