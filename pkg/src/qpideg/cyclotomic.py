"""Exact arithmetic in the cyclotomic field Q(zeta_ell).

Elements are stored as integer coefficient vectors over a common positive
denominator, reduced modulo the ell-th cyclotomic polynomial.  Rationals are
plain :class:`fractions.Fraction` values.

Also here: Laurent polynomials in a formal ``q`` with integer coefficients and
their quotients, used for the structure constants of presentations, and the
q-binomial coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from .errors import DenominatorVanishes, DivisionByZero, EllMismatch

__all__ = [
    "CycNum",
    "LaurentPoly",
    "QLaurentRatio",
    "cyclotomic_polynomial",
    "eval_qratio",
    "q_power",
    "qbinomial",
]


def _exact_div(num, den):
    """Divide integer polynomial ``num`` by monic ``den``; remainder must vanish."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dd]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def _cyclo(ell: int) -> tuple[int, ...]:
    poly = [-1] + [0] * (ell - 1) + [1]
    for d in range(1, ell):
        if ell % d == 0:
            poly = _exact_div(poly, _cyclo(d))
    return tuple(poly)


def cyclotomic_polynomial(ell: int) -> list[int]:
    """Coefficients (constant term first) of the ell-th cyclotomic polynomial."""
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    return list(_cyclo(ell))


@lru_cache(maxsize=None)
def _power_table(ell: int):
    """Sparse rows of x^k mod Phi_ell for 0 <= k < ell."""
    phi = _cyclo(ell)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(ell):
        rows.append(tuple((i, c) for i, c in enumerate(cur) if c))
        # multiply by x, then fold the overflow coefficient back
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


def _reduce(ell: int, coeffs) -> list[int]:
    """Reduce an integer polynomial in zeta (any length) to its canonical vector."""
    table = _power_table(ell)
    deg = len(_cyclo(ell)) - 1
    out = [0] * deg
    for k, c in enumerate(coeffs):
        if c:
            if k < deg:
                out[k] += c
            else:
                for i, t in table[k % ell]:
                    out[i] += c * t
    return out


# --- rational polynomial helpers for inversion ------------------------------

def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, bi in enumerate(b):
                a[k + i] -= c * bi
    return _trim(q), _trim(a[: len(b) - 1])


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    for i, y in enumerate(b):
        a[i] -= y
    return _trim(a)


def _inverse_mod(a, m):
    """s with s*a = 1 modulo m, by the extended Euclidean algorithm over Q."""
    r0, r1 = [Fraction(c) for c in m], _trim([Fraction(c) for c in a])
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        quo, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(quo, s1))
    if not r1:
        raise DivisionByZero("element is not invertible")
    c = r1[0]
    return [x / c for x in s1]


class CycNum:
    """An element of Q(zeta_ell) in canonical form.

    >>> z = CycNum.zeta(5)
    >>> z * z**-1 == 1
    True
    """

    __slots__ = ("ell", "_num", "_den", "_hash")

    def __init__(self, ell: int, coeffs=()):
        if ell < 1:
            raise ValueError("ell must be a positive integer")
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        nums = [int(c * den) for c in fr]
        self._set(ell, _reduce(ell, nums), den)

    def _set(self, ell, nums, den):
        g = den
        for c in nums:
            g = gcd(g, c)
        if not any(nums):
            den, g = 1, 1
        if g != 1:
            nums = [c // g for c in nums]
            den //= g
        self.ell = ell
        self._num = tuple(nums)
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, ell, nums, den):
        obj = object.__new__(cls)
        obj._set(ell, nums, den)
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, ell: int) -> CycNum:
        return cls._raw(ell, [0] * (len(_cyclo(ell)) - 1), 1)

    @classmethod
    def one(cls, ell: int) -> CycNum:
        return cls.from_rational(ell, 1)

    @classmethod
    def from_rational(cls, ell: int, r) -> CycNum:
        r = Fraction(r)
        nums = [0] * (len(_cyclo(ell)) - 1)
        nums[0] = r.numerator
        return cls._raw(ell, nums, r.denominator)

    @classmethod
    def zeta(cls, ell: int, k: int = 1) -> CycNum:
        k %= ell
        nums = [0] * (len(_cyclo(ell)) - 1)
        for i, t in _power_table(ell)[k]:
            nums[i] = t
        return cls._raw(ell, nums, 1)

    # accessors ------------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def degree(self) -> int:
        return len(self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self):
        return any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.ell != self.ell:
                raise EllMismatch(self.ell, other.ell)
            return other
        if isinstance(other, (int, Rational)):
            return CycNum.from_rational(self.ell, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._den, other._den
        nums = [x * b + y * a for x, y in zip(self._num, other._num)]
        return CycNum._raw(self.ell, nums, a * b)

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self.ell, [-x for x in self._num], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._num, other._num
        conv = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return CycNum._raw(self.ell, _reduce(self.ell, conv), self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> CycNum:
        if self.is_zero():
            raise DivisionByZero("division by zero in Q(zeta_%d)" % self.ell)
        if self.is_rational():
            return CycNum.from_rational(self.ell, Fraction(self._den, self._num[0]))
        s = _inverse_mod(self._num, _cyclo(self.ell))
        return CycNum(self.ell, [c * self._den for c in s])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum.one(self.ell)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycNum):
            return self.ell == other.ell and self._num == other._num and self._den == other._den
        if isinstance(other, (int, Rational)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ell, self._num, self._den))
        return self._hash

    # presentation ---------------------------------------------------------
    def __repr__(self):
        return f"CycNum({self.ell}, {self})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data) -> CycNum:
        ell = int(data["ell"])
        coeffs = [Fraction(int(n), int(d)) for n, d in data["coeffs"]]
        if len(coeffs) != len(_cyclo(ell)) - 1:
            raise ValueError(f"expected {len(_cyclo(ell)) - 1} coefficients for ell={ell}")
        return cls(ell, coeffs)


def q_power(ell: int, k: int) -> CycNum:
    """zeta_ell ** k; negative exponents allowed."""
    return CycNum.zeta(ell, k)


# --- Laurent polynomials in a formal q ------------------------------------

class LaurentPoly:
    """Integer Laurent polynomial ``sum c_k q^(shift+k)``.

    Stored trimmed: ``coeffs`` has nonzero first and last entries; the zero
    polynomial is ``shift=0, coeffs=()``.
    """

    __slots__ = ("shift", "coeffs")

    def __init__(self, shift: int = 0, coeffs=()):
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        coeffs = coeffs[lead:]
        self.shift = shift + lead if coeffs else 0
        self.coeffs = tuple(coeffs)

    @classmethod
    def q(cls) -> LaurentPoly:
        return cls(1, (1,))

    @classmethod
    def constant(cls, c: int) -> LaurentPoly:
        return cls(0, (c,))

    @classmethod
    def from_terms(cls, terms: dict[int, int]) -> LaurentPoly:
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls(lo, [terms.get(k, 0) for k in range(lo, hi + 1)])

    def terms(self) -> dict[int, int]:
        return {self.shift + k: c for k, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = self.terms()
        for k, c in other.terms().items():
            t[k] = t.get(k, 0) + c
        return LaurentPoly.from_terms(t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.shift, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, QLaurentRatio):
            return QLaurentRatio(self) * other
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return LaurentPoly(self.shift + other.shift, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.coeffs) != 1 or abs(self.coeffs[0]) != 1:
                return QLaurentRatio(LaurentPoly.constant(1), self ** (-k))
            return LaurentPoly(self.shift * k, (self.coeffs[0] ** (-k),))
        out = LaurentPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        return QLaurentRatio(self) / other

    def __rtruediv__(self, other):
        return QLaurentRatio(other) / self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.shift == other.shift and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.shift, self.coeffs))

    def evaluate(self, ell: int) -> CycNum:
        """Substitute q := zeta_ell."""
        nums = [0] * ell
        for k, c in self.terms().items():
            nums[k % ell] += c
        return CycNum(ell, nums)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in sorted(self.terms().items(), reverse=True):
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"shift": self.shift, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, data) -> LaurentPoly:
        return cls(int(data["shift"]), [int(c) for c in data["coeffs"]])


class QLaurentRatio:
    """A quotient ``num/den`` of integer Laurent polynomials in q."""

    __slots__ = ("num", "den")

    def __init__(self, num=1, den=1):
        num = LaurentPoly.constant(num) if isinstance(num, int) else num
        den = LaurentPoly.constant(den) if isinstance(den, int) else den
        if isinstance(num, QLaurentRatio) or isinstance(den, QLaurentRatio):
            num = num if isinstance(num, QLaurentRatio) else QLaurentRatio(num)
            den = den if isinstance(den, QLaurentRatio) else QLaurentRatio(den)
            num, den = num.num * den.den, num.den * den.num
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @staticmethod
    def _coerce(other):
        if isinstance(other, QLaurentRatio):
            return other
        if isinstance(other, (int, LaurentPoly)):
            return QLaurentRatio(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QLaurentRatio(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QLaurentRatio(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QLaurentRatio(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QLaurentRatio(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("QLaurentRatio is not hashable; compare by value")

    def evaluate(self, ell: int) -> CycNum:
        d = self.den.evaluate(ell)
        if d.is_zero():
            raise DenominatorVanishes(ell)
        return self.num.evaluate(ell) / d

    def __repr__(self):
        return f"QLaurentRatio({self})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data) -> QLaurentRatio:
        if isinstance(data, int):
            return cls(data)
        return cls(LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"]))


def eval_qratio(c: QLaurentRatio, ell: int) -> CycNum:
    """Value of ``c`` at q = zeta_ell; raises DenominatorVanishes."""
    if isinstance(c, int):
        return CycNum.from_rational(ell, c)
    return c.evaluate(ell)


def qbinomial(n: int, i: int, q_value):
    """Gaussian binomial coefficient (n choose i)_q evaluated at ``q_value``.

    Built by the recursion C(n, i) = C(n-1, i-1) + q^i C(n-1, i), which never
    divides and so stays valid when q-factorials vanish at roots of unity.
    """
    if not 0 <= i <= n:
        raise ValueError("need 0 <= i <= n")
    one = q_value ** 0
    row = [one]
    for m in range(1, n + 1):
        new = [one] * (m + 1)
        for k in range(1, m):
            new[k] = row[k - 1] + q_value ** k * row[k]
        row = new
    return row[i]
