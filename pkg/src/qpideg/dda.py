"""The deleting derivations algorithm, run on matrix images of generators.

Generators are indexed from 0 internally.  A presentation describes the
iterated Ore extension

    X_i X_l = q^{M[i][l]} X_l X_i + delta_i(X_l)      (l < i)

together with the higher derivations d_{j,n} (d_{j,1} = delta_j).  Step j of
the algorithm replaces x_l (l < j) by

    y_l = sum_n q_j^{n(n+1)/2} (q_j - 1)^{-n} lambda_{j,l}^{-n} d_{j,n}(x_l) x_j^{-n}

and leaves x_l (l >= j) alone.  Running the steps j = N-1, ..., 1 ends in a
quantum affine space with exponent matrix M.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .cyclotomic import CycNum, LaurentPoly, QLaurentRatio, eval_qratio, q_power, qbinomial
from .cycmatrix import CycMatrix
from .errors import (
    DimensionMismatch,
    NonInvertibleLocalizer,
    NotScalarPower,
    PullbackDiverged,
    RelationResidual,
    RoundTripFailed,
    Singular,
)
from .representation import GeneratorImages, ResidualReport, matrix_norm
from .skew import check_skew

__all__ = [
    "DdaTrace",
    "HypothesisReport",
    "NCPolynomial",
    "OrePresentation",
    "check_hypothesis",
    "dda_full",
    "dda_pullback",
    "dda_step",
    "infer_q_exponent",
    "verify_presentation_relations",
]


def _ratio(c) -> QLaurentRatio:
    if isinstance(c, QLaurentRatio):
        return c
    return QLaurentRatio(c)


def _is_zero(c: QLaurentRatio) -> bool:
    return c.num.is_zero()


class NCPolynomial:
    """Noncommutative polynomial built from ``(coefficient, word)`` pairs;
    words are tuples of generator indices, like terms are merged and zero
    terms dropped."""

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        acc: dict[tuple, QLaurentRatio] = {}
        for coeff, word in terms:
            word = tuple(int(k) for k in word)
            coeff = _ratio(coeff)
            acc[word] = acc[word] + coeff if word in acc else coeff
        self._terms = {w: c for w, c in acc.items() if not _is_zero(c)}

    @classmethod
    def generator(cls, k: int) -> NCPolynomial:
        return cls([(1, (k,))])

    @property
    def terms(self) -> list[tuple[QLaurentRatio, tuple[int, ...]]]:
        return [(c, w) for w, c in sorted(self._terms.items())]

    def is_zero(self) -> bool:
        return not self._terms

    def letters(self) -> set[int]:
        return {k for w in self._terms for k in w}

    def __add__(self, other: NCPolynomial) -> NCPolynomial:
        return NCPolynomial(self.terms + other.terms)

    def __sub__(self, other: NCPolynomial) -> NCPolynomial:
        return self + other.scale(-1)

    def scale(self, c) -> NCPolynomial:
        c = _ratio(c)
        return NCPolynomial([(c * a, w) for a, w in self.terms])

    def __mul__(self, other: NCPolynomial) -> NCPolynomial:
        return NCPolynomial([(a * b, u + v) for a, u in self.terms for b, v in other.terms])

    def map_words(self, fn) -> NCPolynomial:
        """Multiply each term's coefficient by ``fn(word)``."""
        return NCPolynomial([(a * fn(w), w) for a, w in self.terms])

    def __eq__(self, other):
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def evaluate(self, images, ell: int, dim: int) -> CycMatrix:
        """Substitute matrices for generators, multiplying words left to right."""
        out = CycMatrix.zeros(ell, dim)
        for c, word in self.terms:
            val = eval_qratio(c, ell)
            if val.is_zero():
                continue
            acc = None
            for k in word:
                acc = images[k] if acc is None else acc @ images[k]
                if acc.is_zero():
                    break
            term = CycMatrix.scalar(ell, dim, val) if acc is None else acc.scale(val)
            out = out + term
        return out

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for c, w in self.terms:
            mono = "*".join(f"X{k + 1}" for k in w) or "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self) -> list:
        return [{"coeff": c.to_json(), "word": [k + 1 for k in w]} for c, w in self.terms]

    @classmethod
    def from_json(cls, data) -> NCPolynomial:
        return cls([(QLaurentRatio.from_json(t["coeff"]), [k - 1 for k in t["word"]]) for t in data])


@dataclass
class OrePresentation:
    """Iterated Ore extension data; all indices 0-based."""

    N: int
    M: tuple
    q_exponents: dict = field(default_factory=dict)  # j -> e_j, q_j = q^{e_j}
    deltas: dict = field(default_factory=dict)  # (j, l) -> NCPolynomial
    higher: dict = field(default_factory=dict)  # (j, n, l) -> NCPolynomial, n >= 2
    elements: dict = field(default_factory=dict)  # name -> NCPolynomial
    name: str = ""

    def __post_init__(self):
        self.M = check_skew(self.M)
        if len(self.M) != self.N:
            raise DimensionMismatch(f"M is {len(self.M)}x{len(self.M)} but N = {self.N}")
        self.deltas = {k: v for k, v in self.deltas.items() if not v.is_zero()}
        self.higher = {k: v for k, v in self.higher.items() if not v.is_zero()}
        for (j, l), poly in self.deltas.items():
            if not 0 <= l < j < self.N:
                raise ValueError(f"delta_{j + 1}(X_{l + 1}) needs l < j")
            if any(k >= j for k in poly.letters()):
                raise ValueError(f"delta_{j + 1}(X_{l + 1}) uses generators of index >= {j + 1}")
        for (j, n, l), poly in self.higher.items():
            if n < 2 or not 0 <= l < j < self.N or any(k >= j for k in poly.letters()):
                raise ValueError(f"bad higher derivation entry d_{j + 1},{n}(X_{l + 1})")

    def d(self, j: int, n: int, l: int) -> NCPolynomial:
        """d_{j,n}(X_l); zero when absent from the tables."""
        if n == 0:
            return NCPolynomial.generator(l)
        if n == 1:
            return self.deltas.get((j, l), NCPolynomial())
        return self.higher.get((j, n, l), NCPolynomial())

    def orders(self, j: int) -> list[int]:
        """The n >= 1 with some nonzero d_{j,n}(X_l), ascending."""
        ns = {1 for (jj, _) in self.deltas if jj == j}
        ns |= {n for (jj, n, _) in self.higher if jj == j}
        return sorted(ns)

    def has_derivation(self, j: int) -> bool:
        return bool(self.orders(j))

    # serialisation --------------------------------------------------------
    def to_json(self) -> dict:
        deltas: dict = {}
        for (j, l), p in sorted(self.deltas.items()):
            deltas.setdefault(str(j + 1), {})[str(l + 1)] = p.to_json()
        higher: dict = {}
        for (j, n, l), p in sorted(self.higher.items()):
            higher.setdefault(str(j + 1), {}).setdefault(str(n), {})[str(l + 1)] = p.to_json()
        return {
            "name": self.name,
            "N": self.N,
            "M": {"n": self.N, "entries": [list(r) for r in self.M]},
            "q_exponents": {str(j + 1): e for j, e in sorted(self.q_exponents.items())},
            "deltas": deltas,
            "higher": higher,
            "elements": {k: v.to_json() for k, v in sorted(self.elements.items())},
        }

    @classmethod
    def from_json(cls, data) -> OrePresentation:
        if isinstance(data, str):
            data = json.loads(data)
        m = data["M"]
        entries = m["entries"] if isinstance(m, dict) else m
        deltas = {
            (int(j) - 1, int(l) - 1): NCPolynomial.from_json(p)
            for j, inner in data.get("deltas", {}).items()
            for l, p in inner.items()
        }
        higher = {
            (int(j) - 1, int(n), int(l) - 1): NCPolynomial.from_json(p)
            for j, by_n in data.get("higher", {}).items()
            for n, inner in by_n.items()
            for l, p in inner.items()
        }
        return cls(
            N=int(data["N"]),
            M=entries,
            q_exponents={int(j) - 1: int(e) for j, e in data.get("q_exponents", {}).items()},
            deltas=deltas,
            higher=higher,
            elements={k: NCPolynomial.from_json(v) for k, v in data.get("elements", {}).items()},
            name=data.get("name", ""),
        )


# --- symbolic checks --------------------------------------------------------

def _q_monomial(e: int) -> LaurentPoly:
    return LaurentPoly(e, (1,))


def _sigma_power(p: OrePresentation, j: int, k: int, poly: NCPolynomial) -> NCPolynomial:
    """sigma_j^k acting on a polynomial in generators below j."""
    if k == 0:
        return poly
    return poly.map_words(lambda w: _q_monomial(k * sum(p.M[j][r] for r in w)))


def _apply_d(p: OrePresentation, j: int, n: int, poly: NCPolynomial) -> NCPolynomial:
    """d_{j,n} extended to words by d_n(rs) = sum_i sigma^{n-i}(d_i(r)) d_{n-i}(s)."""
    cache: dict = {}

    def on_word(w, n):
        key = (w, n)
        if key in cache:
            return cache[key]
        if not w:
            out = NCPolynomial([(1, ())]) if n == 0 else NCPolynomial()
        elif len(w) == 1:
            out = p.d(j, n, w[0])
        else:
            out = NCPolynomial()
            for i in range(n + 1):
                left = _sigma_power(p, j, n - i, p.d(j, i, w[0]))
                if left.is_zero():
                    continue
                out = out + left * on_word(w[1:], n - i)
        cache[key] = out
        return out

    result = NCPolynomial()
    for c, w in poly.terms:
        result = result + on_word(w, n).scale(c)
    return result


def infer_q_exponent(p: OrePresentation, j: int) -> int | None:
    """The e with delta_j sigma_j = q^e sigma_j delta_j forced by the data, or
    None when delta_j vanishes or the terms disagree."""
    found = set()
    for (jj, l), poly in p.deltas.items():
        if jj != j:
            continue
        for _, w in poly.terms:
            found.add(p.M[j][l] - sum(p.M[j][r] for r in w))
    return found.pop() if len(found) == 1 else None


@dataclass
class HypothesisReport:
    checks: list = field(default_factory=list)  # (kind, detail, passed)

    def add(self, kind, detail, passed):
        self.checks.append((kind, detail, bool(passed)))

    @property
    def ok(self) -> bool:
        return all(c[2] for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c[2]]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"kind": k, "detail": d, "passed": ok} for k, d, ok in self.checks],
        }


def check_hypothesis(p: OrePresentation, ell: int | None = None) -> HypothesisReport:
    """Check the presentation contract on generators.

    (a) q-skew: delta_j(sigma_j(X_l)) == q_j sigma_j(delta_j(X_l));
    (b) sigma_l d_{i,n} == lambda_{l,i}^n d_{i,n} sigma_l for l > i;
    (c) d_n d_m == (n+m choose m)_{q_j} d_{n+m} on each X_l, for
        n + m up to one past the largest tabulated order.
    Exponent identities are compared as integers, or modulo ``ell`` if given.
    """
    rep = HypothesisReport()

    def same(a, b):
        return (a - b) % ell == 0 if ell else a == b

    for j in range(p.N):
        if not p.has_derivation(j):
            continue
        e = p.q_exponents.get(j)
        if e is None:
            rep.add("q_exponent", f"j={j + 1}: missing", False)
            continue
        rep.add("q_j != 1", f"j={j + 1}: q_j = q^{e}", not same(e, 0))
        # (a)
        for l in range(j):
            for _, w in p.d(j, 1, l).terms:
                lhs = p.M[j][l]
                rhs = e + sum(p.M[j][r] for r in w)
                rep.add("q-skew", f"j={j + 1}, l={l + 1}, word={[r + 1 for r in w]}", same(lhs, rhs))
        # (b)
        for n in p.orders(j):
            for l in range(j):
                for _, w in p.d(j, n, l).terms:
                    for s in range(j + 1, p.N):
                        lhs = sum(p.M[s][r] for r in w)
                        rhs = n * p.M[s][j] + p.M[s][l]
                        rep.add(
                            "sigma-compatibility",
                            f"s={s + 1}, j={j + 1}, n={n}, l={l + 1}",
                            same(lhs, rhs),
                        )
        # (c)
        top = max(p.orders(j))
        qj = _q_monomial(e)
        for total in range(2, top + 2):
            for n in range(1, total):
                m = total - n
                coeff = qbinomial(total, m, qj)
                for l in range(j):
                    lhs = _apply_d(p, j, n, p.d(j, m, l))
                    rhs = p.d(j, total, l).scale(coeff)
                    rep.add("iterativity", f"j={j + 1}, n={n}, m={m}, l={l + 1}", lhs == rhs)
    return rep


# --- numeric steps ----------------------------------------------------------

def _step_coefficient(p: OrePresentation, j: int, n: int, l: int, ell: int) -> CycNum:
    """q_j^{n(n+1)/2} (q_j - 1)^{-n} lambda_{j,l}^{-n} at q = zeta_ell."""
    e = p.q_exponents[j]
    num = LaurentPoly(e * n * (n + 1) // 2 - n * p.M[j][l], (1,))
    den = (_q_monomial(e) - 1) ** n
    return eval_qratio(QLaurentRatio(num, den), ell)


def _full_images(imgs) -> list[CycMatrix]:
    return list(imgs.images if isinstance(imgs, GeneratorImages) else imgs)


def _ore_residual(p, i, l, imgs, ell, dim):
    a, b = imgs[i], imgs[l]
    res = a @ b - (b @ a).scale(q_power(ell, p.M[i][l]))
    delta = p.deltas.get((i, l))
    if delta is not None:
        res = res - delta.evaluate(imgs, ell, dim)
    return res


def _step_relations(p, j, imgs, ell, dim):
    """Residuals for the relations that must hold after step j."""
    fails = {}
    checked = 0
    for l in range(p.N):
        if l == j:
            continue
        a, b = imgs[j], imgs[l]
        checked += 1
        res = a @ b - (b @ a).scale(q_power(ell, p.M[j][l]))
        if not res.is_zero():
            fails[(j, l)] = matrix_norm(res)
    for i in range(j):
        for l in range(i):
            checked += 1
            res = _ore_residual(p, i, l, imgs, ell, dim)
            if not res.is_zero():
                fails[(i, l)] = matrix_norm(res)
    return ResidualReport(checked, fails)


def _apply_step(p, j, base, at, inv_powers, ell, dim, sign):
    """base_l + sign * sum_n c_n d_{j,n}(X_l)(at) x_j^{-n} for l < j."""
    out = list(base)
    for l in range(j):
        acc = base[l]
        for n in p.orders(j):
            poly = p.d(j, n, l)
            if poly.is_zero():
                continue
            val = poly.evaluate(at, ell, dim)
            if val.is_zero():
                continue
            term = (val @ inv_powers[n]).scale(_step_coefficient(p, j, n, l, ell))
            acc = acc + term if sign > 0 else acc - term
        out[l] = acc
    return out


def _inverse_powers(p, j, xj):
    try:
        inv = xj.inverse()
    except Singular:
        raise NonInvertibleLocalizer(j) from None
    powers = {}
    for n in p.orders(j):
        powers[n] = inv**n
    return powers


def dda_step(p: OrePresentation, j: int, imgs: GeneratorImages, verify: bool = True):
    """One change of variables; returns the new images (and checks them)."""
    xs = _full_images(imgs)
    ell, dim = imgs.ell, imgs.dim
    if len(xs) != p.N:
        raise DimensionMismatch(f"{len(xs)} images for {p.N} generators")
    if not p.has_derivation(j) or xs[j].is_zero():
        ys = xs
    else:
        ys = _apply_step(p, j, xs, xs, _inverse_powers(p, j, xs[j]), ell, dim, +1)
    out = GeneratorImages(ell, ys, imgs.names)
    if verify:
        rep = _step_relations(p, j, ys, ell, dim)
        if not rep.ok:
            raise RelationResidual(j, min(rep.failures))
    return out


@dataclass
class StepRecord:
    j: int
    before: GeneratorImages
    after: GeneratorImages
    residuals: ResidualReport

    def to_json(self) -> dict:
        return {
            "step": self.j + 1,
            "changed": [k + 1 for k in range(len(self.before)) if self.before[k] != self.after[k]],
            "residuals": self.residuals.to_json(),
        }


@dataclass
class DdaTrace:
    steps: list = field(default_factory=list)
    final: ResidualReport | None = None

    @property
    def ok(self) -> bool:
        return all(s.residuals.ok for s in self.steps) and (self.final is None or self.final.ok)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "steps": [s.to_json() for s in self.steps],
            "final": self.final.to_json() if self.final else None,
        }


def dda_full(p: OrePresentation, imgs: GeneratorImages):
    """Steps j = N-1 down to 1; the result satisfies the affine relations of M."""
    from .representation import verify_affine_relations

    trace = DdaTrace()
    cur = imgs
    for j in range(p.N - 1, 0, -1):
        nxt = dda_step(p, j, cur, verify=False)
        rep = _step_relations(p, j, nxt.images, cur.ell, cur.dim)
        trace.steps.append(StepRecord(j, cur, nxt, rep))
        if not rep.ok:
            raise RelationResidual(j, min(rep.failures))
        cur = nxt
    trace.final = verify_affine_relations(cur, p.M)
    if not trace.final.ok:
        raise RelationResidual(1, min(trace.final.failures))
    return cur, trace


def _check_scalar_power(img: CycMatrix, ell: int, k: int):
    if img.is_zero():
        return
    if (img**ell).scalar_value() is None:
        raise NotScalarPower(f"image of t{k + 1} to the power {ell} is not scalar")


def dda_pullback(p: OrePresentation, w, t_imgs: GeneratorImages, ell: int | None = None):
    """Undo the algorithm: images of T_i (zero for i in ``w``) to images of X_i.

    ``t_imgs`` holds either one image per surviving index or all N images.
    """
    w = sorted(set(w))
    ell = t_imgs.ell if ell is None else ell
    dim = t_imgs.dim
    keep = [i for i in range(p.N) if i not in w]
    if len(t_imgs) == len(keep) and len(keep) != p.N:
        full = [CycMatrix.zeros(ell, dim)] * p.N
        for k, img in zip(keep, t_imgs.images):
            full[k] = img
    elif len(t_imgs) == p.N:
        full = list(t_imgs.images)
        for i in w:
            if not full[i].is_zero():
                raise ValueError(f"image of t{i + 1} must vanish on the quotient")
    else:
        raise DimensionMismatch(f"{len(t_imgs)} images for {len(keep)} surviving generators")
    for k in keep:
        _check_scalar_power(full[k], ell, k)
    names = [f"X{k + 1}" for k in range(p.N)]
    cur = full
    for j in range(1, p.N):
        ys = cur
        if not p.has_derivation(j) or ys[j].is_zero():
            continue
        inv = _inverse_powers(p, j, ys[j])
        # x_l = y_l - sum_n c_n d_{j,n}(X_l)(x) y_j^{-n}, solved from x = y
        xs = list(ys)
        for _ in range(p.N):
            nxt = _apply_step(p, j, ys, xs, inv, ell, dim, -1)
            if nxt == xs:
                break
            xs = nxt
        else:
            raise PullbackDiverged(j)
        back = dda_step(p, j, GeneratorImages(ell, xs, names), verify=False)
        if list(back.images) != list(ys):
            raise RoundTripFailed(j)
        cur = xs
    return GeneratorImages(ell, cur, names)


def verify_presentation_relations(p: OrePresentation, imgs: GeneratorImages, ell: int | None = None):
    """Residuals of X_i X_l - lambda_{i,l} X_l X_i - delta_i(X_l) for l < i,
    plus the value of every named element (expected to vanish on a quotient)."""
    ell = imgs.ell if ell is None else ell
    if len(imgs) != p.N:
        raise DimensionMismatch(f"{len(imgs)} images for {p.N} generators")
    fails, checked = {}, 0
    for i in range(p.N):
        for l in range(i):
            checked += 1
            res = _ore_residual(p, i, l, imgs.images, ell, imgs.dim)
            if not res.is_zero():
                fails[(i, l)] = matrix_norm(res)
    elements = {}
    for name, poly in sorted(p.elements.items()):
        val = poly.evaluate(imgs.images, ell, imgs.dim)
        elements[name] = val
    return ResidualReport(checked, fails), elements
