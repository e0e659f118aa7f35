"""PI degrees of quantum affine spaces and of their Cauchon quotients.

Two independent routes are provided:

* :func:`pideg_snf` -- product of ell / gcd(h_i, ell) over the invariant
  factors of the skew normal form;
* :func:`pideg_oracle` -- sqrt of the size of the image of Z^n -> (Z/ell)^n
  under the exponent matrix, counted by listing it when affordable and from
  Smith elementary divisors otherwise.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from math import gcd, isqrt

import numpy as np

from .errors import BudgetExceeded, NotPerfectSquare
from .skew import check_skew, delete_rows_cols, skew_normal_form, smith_normal_form

__all__ = [
    "DEFAULT_BUDGET",
    "PiDegreeReport",
    "image_cardinality",
    "pideg_oracle",
    "pideg_quotient",
    "pideg_snf",
]

DEFAULT_BUDGET = 10**6


def default_budget() -> int:
    return int(os.environ.get("QPI_BUDGET", DEFAULT_BUDGET))


def pideg_snf(m, ell: int) -> int:
    if ell < 1:
        raise ValueError("ell must be >= 1")
    out = 1
    for h in skew_normal_form(m).invariant_factors:
        out *= ell // gcd(h, ell)
    return out


def _enumerate_image(m, ell):
    n = len(m)
    seen = set()
    v = [0] * n
    while True:
        seen.add(tuple(sum(r[k] * v[k] for k in range(n)) % ell for r in m))
        k = 0
        while k < n and v[k] == ell - 1:
            v[k] = 0
            k += 1
        if k == n:
            return len(seen)
        v[k] += 1


def _closure_image(m, ell, budget):
    """Subgroup of (Z/ell)^n generated by the columns, listed element by element.

    Adjoining a generator g to a subgroup H gives the disjoint union of the
    cosets H + t g for 0 <= t < k, with k the least positive multiple of g
    landing in H.  Returns None as soon as the listing would exceed ``budget``.
    """
    n = len(m)
    elems = np.zeros((1, n), dtype=np.int64)
    members = {elems[0].tobytes()}
    for j in range(n):
        g = np.array([m[i][j] % ell for i in range(n)], dtype=np.int64)
        k, kg = 1, g.copy()
        while kg.tobytes() not in members:
            k += 1
            kg = (kg + g) % ell
        if k == 1:
            continue
        if len(elems) * k > budget:
            return None
        elems = np.concatenate([(elems + t * g) % ell for t in range(k)])
        members = {row.tobytes() for row in elems}
    return len(elems)


def image_cardinality(m, ell: int, budget: int | None = None, method: str = "auto"):
    """Size of the image of M mod ell and the method that produced it.

    ``method`` is one of ``enumerate`` (all ell^n vectors), ``closure``
    (list the image subgroup generated by the images of basis vectors),
    ``smith`` (elementary divisors) or ``auto``: closure while the listing
    stays within the budget, smith beyond it.
    """
    m = check_skew(m)
    n = len(m)
    budget = default_budget() if budget is None else budget
    if n == 0 or ell == 1:
        return 1, "enumerate"
    if method == "enumerate":
        if ell**n > budget:
            raise BudgetExceeded(f"{ell}^{n} vectors exceed the budget {budget}")
        return _enumerate_image(m, ell), "enumerate"
    if method in ("auto", "closure"):
        h = _closure_image(m, ell, budget)
        if h is not None:
            return h, "closure"
        if method == "closure":
            return None, "closure"
    h = 1
    for d in smith_normal_form(m).elementary_divisors:
        h *= ell // gcd(d, ell)  # gcd(0, ell) == ell: zero divisors add nothing
    return h, "smith"


def pideg_oracle(m, ell: int, budget: int | None = None, method: str = "auto"):
    """Return ``(h, sqrt(h))`` for the image-cardinality characterisation."""
    h, _ = image_cardinality(m, ell, budget, method)
    r = isqrt(h)
    if r * r != h:
        raise NotPerfectSquare(f"image cardinality {h} is not a square")
    return h, r


@dataclass(frozen=True)
class PiDegreeReport:
    ell: int
    method_snf: int
    method_oracle: int | None
    h_image_cardinality: int | None
    oracle_method: str | None = None
    deleted: tuple[int, ...] = ()

    @property
    def agree(self) -> bool:
        return self.method_oracle is None or self.method_oracle == self.method_snf

    @property
    def value(self) -> int:
        return self.method_snf

    def to_json(self) -> dict:
        d = asdict(self)
        d["deleted"] = [i + 1 for i in self.deleted]
        d["agree"] = self.agree
        return d


def pideg_quotient(m, w, ell: int, budget: int | None = None) -> PiDegreeReport:
    """Both PI-degree routes applied to M with rows/columns in ``w`` removed.

    The oracle is reported only when it came from image counting; a result
    obtained from Smith divisors leaves ``method_oracle`` empty.
    """
    sub = delete_rows_cols(check_skew(m), w)
    snf = pideg_snf(sub, ell)
    h, how = image_cardinality(sub, ell, budget)
    if how == "smith":
        return PiDegreeReport(ell, snf, None, None, None, tuple(sorted(w)))
    r = isqrt(h)
    if r * r != h:
        raise NotPerfectSquare(f"image cardinality {h} is not a square")
    return PiDegreeReport(ell, snf, r, h, how, tuple(sorted(w)))
