"""Dense matrices over Q(zeta_ell) and the exact linear algebra built on them."""

from __future__ import annotations

from .cyclotomic import CycNum
from .errors import DimensionMismatch, EllMismatch, Singular

__all__ = ["CycMatrix", "commutant_dimension", "rank_of_rows"]


class CycMatrix:
    """An immutable rows x cols matrix with CycNum entries sharing one ell."""

    __slots__ = ("ell", "rows", "cols", "_e")

    def __init__(self, ell: int, entries):
        grid = []
        for row in entries:
            r = []
            for x in row:
                if isinstance(x, CycNum):
                    if x.ell != ell:
                        raise EllMismatch(ell, x.ell)
                    r.append(x)
                else:
                    r.append(CycNum.from_rational(ell, x))
            grid.append(tuple(r))
        if not grid or not grid[0]:
            raise DimensionMismatch("matrices must be at least 1x1")
        if any(len(r) != len(grid[0]) for r in grid):
            raise DimensionMismatch("ragged rows")
        self.ell = ell
        self.rows = len(grid)
        self.cols = len(grid[0])
        self._e = tuple(grid)

    @classmethod
    def _wrap(cls, ell, grid):
        obj = object.__new__(cls)
        obj.ell = ell
        obj.rows = len(grid)
        obj.cols = len(grid[0])
        obj._e = tuple(tuple(r) for r in grid)
        return obj

    @classmethod
    def zeros(cls, ell: int, rows: int, cols: int | None = None) -> CycMatrix:
        z = CycNum.zero(ell)
        return cls._wrap(ell, [[z] * (cols or rows) for _ in range(rows)])

    @classmethod
    def identity(cls, ell: int, d: int) -> CycMatrix:
        return cls.diag(ell, [CycNum.one(ell)] * d)

    @classmethod
    def diag(cls, ell: int, values) -> CycMatrix:
        values = [v if isinstance(v, CycNum) else CycNum.from_rational(ell, v) for v in values]
        z = CycNum.zero(ell)
        d = len(values)
        grid = [[z] * d for _ in range(d)]
        for i, v in enumerate(values):
            grid[i][i] = v
        return cls._wrap(ell, grid)

    @classmethod
    def scalar(cls, ell: int, d: int, value) -> CycMatrix:
        return cls.diag(ell, [value] * d)

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._e[i][j]

    def tolist(self) -> list[list[CycNum]]:
        return [list(r) for r in self._e]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(x for r in self._e for x in r)

    def scalar_value(self):
        """The c with self == c * Id, or None."""
        if not self.is_square():
            return None
        c = self._e[0][0]
        for i, r in enumerate(self._e):
            for j, x in enumerate(r):
                if (x != c) if i == j else bool(x):
                    return None
        return c

    # arithmetic -----------------------------------------------------------
    def _check_same(self, other):
        if other.ell != self.ell:
            raise EllMismatch(self.ell, other.ell)
        if other.shape != self.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: CycMatrix) -> CycMatrix:
        self._check_same(other)
        return CycMatrix._wrap(
            self.ell, [[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)]
        )

    def __sub__(self, other: CycMatrix) -> CycMatrix:
        self._check_same(other)
        return CycMatrix._wrap(
            self.ell, [[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)]
        )

    def __neg__(self):
        return CycMatrix._wrap(self.ell, [[-a for a in r] for r in self._e])

    def scale(self, c) -> CycMatrix:
        if not isinstance(c, CycNum):
            c = CycNum.from_rational(self.ell, c)
        if c.ell != self.ell:
            raise EllMismatch(self.ell, c.ell)
        return CycMatrix._wrap(self.ell, [[c * a if a else a for a in r] for r in self._e])

    def __matmul__(self, other: CycMatrix) -> CycMatrix:
        if other.ell != self.ell:
            raise EllMismatch(self.ell, other.ell)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        # sparse row view of the right factor; most images are monomial matrices
        right = [[(j, x) for j, x in enumerate(r) if x] for r in other._e]
        zero = CycNum.zero(self.ell)
        out = []
        for r in self._e:
            acc = {}
            for k, a in enumerate(r):
                if a:
                    for j, b in right[k]:
                        p = a * b
                        acc[j] = acc[j] + p if j in acc else p
            out.append([acc.get(j, zero) for j in range(other.cols)])
        return CycMatrix._wrap(self.ell, out)

    def __mul__(self, other):
        if isinstance(other, CycMatrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> CycMatrix:
        if not self.is_square():
            raise DimensionMismatch("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = CycMatrix.identity(self.ell, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def __eq__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        return self.ell == other.ell and self._e == other._e

    def __hash__(self):
        return hash((self.ell, self._e))

    def transpose(self) -> CycMatrix:
        return CycMatrix._wrap(self.ell, [list(c) for c in zip(*self._e)])

    def kron(self, other: CycMatrix) -> CycMatrix:
        """Kronecker product, ``self`` acting on the outer index."""
        if other.ell != self.ell:
            raise EllMismatch(self.ell, other.ell)
        zero = CycNum.zero(self.ell)
        out = []
        for r in self._e:
            for s in other._e:
                out.append([a * b if a and b else zero for a in r for b in s])
        return CycMatrix._wrap(self.ell, out)

    # elimination ----------------------------------------------------------
    def inverse(self) -> CycMatrix:
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        one, zero = CycNum.one(self.ell), CycNum.zero(self.ell)
        aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self._e)]
        for c in range(n):
            p = next((r for r in range(c, n) if aug[r][c]), None)
            if p is None:
                raise Singular("matrix is singular")
            aug[c], aug[p] = aug[p], aug[c]
            inv = aug[c][c].inverse()
            aug[c] = [x * inv if x else x for x in aug[c]]
            for r in range(n):
                f = aug[r][c]
                if r != c and f:
                    aug[r] = [x - f * y if y else x for x, y in zip(aug[r], aug[c])]
        return CycMatrix._wrap(self.ell, [r[n:] for r in aug])

    def rank(self) -> int:
        return rank_of_rows(
            [{j: x for j, x in enumerate(r) if x} for r in self._e]
        )

    def kernel_dim(self) -> int:
        """Dimension of the right null space."""
        return self.cols - self.rank()

    # serialisation --------------------------------------------------------
    def to_json(self) -> list:
        return [[x.to_json() for x in r] for r in self._e]

    @classmethod
    def from_json(cls, ell: int, data) -> CycMatrix:
        return cls(ell, [[CycNum.from_json(x) for x in r] for r in data])

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._e)
        return f"CycMatrix(ell={self.ell}, [{body}])"


def rank_of_rows(rows: list[dict]) -> int:
    """Rank of a system given as sparse rows ``{column: CycNum}``.

    Gaussian elimination over the field; rows are consumed.
    """
    pivots: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            if c not in pivots:
                inv = row[c].inverse()
                pivots[c] = {k: v * inv for k, v in row.items()}
                break
            f = row[c]
            for k, v in pivots[c].items():
                nv = row[k] - f * v if k in row else -(f * v)
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(pivots)


def commutant_dimension(images, d: int | None = None) -> int:
    """Dimension over Q(zeta_ell) of {X : X A = A X for every A in images}.

    Solves the d^2-unknown linear system directly.
    """
    images = list(images)
    if d is None:
        if not images:
            raise ValueError("matrix size required when no images are given")
        d = images[0].rows
    for a in images:
        if a.shape != (d, d):
            raise DimensionMismatch(f"expected {d}x{d} images, got {a.shape}")
    eqs = []
    for a in images:
        # (X A - A X)[i][j] = sum_k X[i][k] A[k][j] - A[i][k] X[k][j]
        for i in range(d):
            for j in range(d):
                row = {}
                for k in range(d):
                    x = a[k, j]
                    if x:
                        key = i * d + k
                        row[key] = row[key] + x if key in row else x
                    y = a[i, k]
                    if y:
                        key = k * d + j
                        row[key] = row[key] - y if key in row else -y
                row = {k: v for k, v in row.items() if v}
                if row:
                    eqs.append(row)
    return d * d - rank_of_rows(eqs)
