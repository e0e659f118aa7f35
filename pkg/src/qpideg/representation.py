"""Irreducible representations of quantum tori at roots of unity.

A skew normal form S = E M E^T splits the torus into independent pairs
(x_i, y_i) with x_i y_i = q^{h_i} y_i x_i plus central generators z_k.  Each
pair is realised by a clock/shift pair, the pairs are combined by tensor
product, and the images of the original generators are read off the rows of
E^{-1}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclotomic import CycNum, q_power
from .cycmatrix import CycMatrix, commutant_dimension
from .errors import DegenerateParams, DimensionMismatch, EllMismatch
from .skew import SkewNormalForm, check_skew, integer_inverse, skew_normal_form

__all__ = [
    "GeneratorImages",
    "IrreducibilityCertificate",
    "ResidualReport",
    "TorusRepParams",
    "certify_irreducible",
    "clock_shift_pair",
    "compose_with_Einv",
    "quantum_torus_representation",
    "torus_rep_from_snf",
    "verify_affine_relations",
]


class GeneratorImages:
    """An ordered list of d x d matrices, one per generator, over Q(zeta_ell)."""

    __slots__ = ("ell", "dim", "images", "names")

    def __init__(self, ell: int, images, names=None):
        images = list(images)
        if not images:
            raise DimensionMismatch("at least one generator image is required")
        dim = images[0].rows
        for a in images:
            if a.ell != ell:
                raise EllMismatch(ell, a.ell)
            if a.shape != (dim, dim):
                raise DimensionMismatch(f"expected {dim}x{dim} images, got {a.shape}")
        self.ell = ell
        self.dim = dim
        self.images = tuple(images)
        self.names = tuple(names) if names else tuple(f"t{k + 1}" for k in range(len(images)))
        if len(self.names) != len(self.images):
            raise DimensionMismatch("one name per image required")

    def __len__(self):
        return len(self.images)

    def __getitem__(self, k) -> CycMatrix:
        return self.images[k]

    def __iter__(self):
        return iter(self.images)

    def __eq__(self, other):
        if not isinstance(other, GeneratorImages):
            return NotImplemented
        return self.ell == other.ell and self.images == other.images

    def renamed(self, names) -> GeneratorImages:
        return GeneratorImages(self.ell, self.images, names)

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "dim": self.dim,
            "generators": [
                {"name": nm, "matrix": a.to_json()} for nm, a in zip(self.names, self.images)
            ],
        }

    @classmethod
    def from_json(cls, data) -> GeneratorImages:
        if isinstance(data, str):
            data = json.loads(data)
        ell = int(data["ell"])
        gens = data["generators"]
        out = cls(ell, [CycMatrix.from_json(ell, g["matrix"]) for g in gens], [g["name"] for g in gens])
        if "dim" in data and int(data["dim"]) != out.dim:
            raise DimensionMismatch(f"declared dim {data['dim']} but matrices are {out.dim}x{out.dim}")
        return out


@dataclass(frozen=True)
class TorusRepParams:
    """Free scalars of the construction: one lambda per pair, one xi per
    central generator.  Missing values default to 1."""

    lambdas: tuple = ()
    xis: tuple = ()

    def resolved(self, ell, pairs, kernel):
        def fill(values, count, what):
            values = list(values) + [1] * (count - len(values))
            if len(values) != count:
                raise DegenerateParams(f"expected {count} {what}, got {len(values)}")
            out = [v if isinstance(v, CycNum) else CycNum.from_rational(ell, v) for v in values]
            if any(v.is_zero() for v in out):
                raise DegenerateParams(f"{what} must be nonzero")
            return out

        return fill(self.lambdas, pairs, "lambdas"), fill(self.xis, kernel, "xis")


def clock_shift_pair(ell_i: int, lam, q_block: CycNum):
    """``clock = diag(lam * q_block^k)`` and the cyclic shift sending basis
    vector k to k + 1; they satisfy clock @ shift == q_block * shift @ clock."""
    ell = q_block.ell
    if not isinstance(lam, CycNum):
        lam = CycNum.from_rational(ell, lam)
    clock = CycMatrix.diag(ell, [lam * q_block**k for k in range(ell_i)])
    one, zero = CycNum.one(ell), CycNum.zero(ell)
    grid = [[zero] * ell_i for _ in range(ell_i)]
    for k in range(ell_i):
        grid[(k + 1) % ell_i][k] = one
    return clock, CycMatrix(ell, grid)


def _embed(ell, factor, k, sizes):
    """Identity on every tensor slot except slot ``k``, which carries ``factor``."""
    out = None
    for i, d in enumerate(sizes):
        piece = factor if i == k else CycMatrix.identity(ell, d)
        out = piece if out is None else out.kron(piece)
    return out


def torus_rep_from_snf(snf: SkewNormalForm, ell: int, params: TorusRepParams | None = None):
    """Images of the canonical generators x_1, y_1, ..., x_s, y_s, z_1, ...

    The order follows the rows of S.  Pair i acts on a factor of dimension
    ell / gcd(h_i, ell) with q_block = q^{h_i}.
    """
    params = params or TorusRepParams()
    lams, xis = params.resolved(ell, snf.pairs, snf.kernel_dim)
    sizes = [ell // gcd(h, ell) for h in snf.invariant_factors]
    dim = 1
    for s in sizes:
        dim *= s
    images, names = [], []
    for k, h in enumerate(snf.invariant_factors):
        clock, shift = clock_shift_pair(sizes[k], lams[k], q_power(ell, h))
        images += [_embed(ell, clock, k, sizes), _embed(ell, shift, k, sizes)]
        names += [f"x{k + 1}", f"y{k + 1}"]
    for k, xi in enumerate(xis):
        images.append(CycMatrix.scalar(ell, dim, xi))
        names.append(f"z{k + 1}")
    if not images:
        raise DimensionMismatch("empty matrix has no generators to represent")
    return GeneratorImages(ell, images, names)


def compose_with_Einv(canonical: GeneratorImages, e_inv, names=None) -> GeneratorImages:
    """t_k = product of canonical images to the powers in row k of E^{-1}.

    Factors are multiplied x_1, x_2, ..., then y_1, y_2, ..., then z_1, ...;
    a different order changes each t_k only by a power of q.
    """
    n = len(canonical)
    e_inv = [list(r) for r in e_inv]
    if len(e_inv) != n or any(len(r) != n for r in e_inv):
        raise DimensionMismatch(f"E^-1 must be {n}x{n}")
    pairs = sum(1 for nm in canonical.names if nm.startswith("x"))
    order = [2 * i for i in range(pairs)] + [2 * i + 1 for i in range(pairs)] + list(
        range(2 * pairs, n)
    )
    ell, d = canonical.ell, canonical.dim
    inverses = {}
    out = []
    for row in e_inv:
        acc = CycMatrix.identity(ell, d)
        for a in order:
            e = row[a]
            if e == 0:
                continue
            base = canonical[a]
            if e < 0:
                if a not in inverses:
                    inverses[a] = base.inverse()
                base, e = inverses[a], -e
            acc = acc @ base**e
        out.append(acc)
    return GeneratorImages(ell, out, names)


def quantum_torus_representation(m, ell: int, params: TorusRepParams | None = None, names=None):
    """Images t_1..t_n for the quantum torus of M, via its skew normal form."""
    snf = skew_normal_form(m)
    return compose_with_Einv(torus_rep_from_snf(snf, ell, params), integer_inverse(snf.E), names)


@dataclass(frozen=True)
class ResidualReport:
    """Largest absolute coefficient of each nonzero relation residual."""

    checked: int
    failures: dict

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def max_norm(self) -> Fraction:
        return max(self.failures.values(), default=Fraction(0))

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "ok": self.ok,
            "max_norm": str(self.max_norm),
            "failures": [
                {"pair": [k[0] + 1, k[1] + 1] if isinstance(k, tuple) else k, "norm": str(v)}
                for k, v in sorted(self.failures.items(), key=lambda kv: str(kv[0]))
            ],
        }


def matrix_norm(a: CycMatrix) -> Fraction:
    return max((abs(c) for r in a.tolist() for x in r for c in x.coeffs), default=Fraction(0))


def verify_affine_relations(images: GeneratorImages, m, ell: int | None = None) -> ResidualReport:
    """Residuals A_i A_j - q^{M_ij} A_j A_i for every i < j."""
    m = check_skew(m)
    ell = images.ell if ell is None else ell
    if ell != images.ell:
        raise EllMismatch(ell, images.ell)
    if len(m) != len(images):
        raise DimensionMismatch(f"{len(images)} images for a {len(m)}x{len(m)} matrix")
    failures, checked = {}, 0
    for i in range(len(m)):
        for j in range(i + 1, len(m)):
            a, b = images[i], images[j]
            res = a @ b - (b @ a).scale(q_power(ell, m[i][j]))
            checked += 1
            if not res.is_zero():
                failures[(i, j)] = matrix_norm(res)
    return ResidualReport(checked, failures)


@dataclass(frozen=True)
class IrreducibilityCertificate:
    dim: int
    dim_commutant: int

    @property
    def certified(self) -> bool:
        return self.dim_commutant == 1

    def to_json(self) -> dict:
        return {"dim": self.dim, "dim_commutant": self.dim_commutant, "certified": self.certified}


def certify_irreducible(images: GeneratorImages) -> IrreducibilityCertificate:
    """Commutant dimension over Q(zeta_ell); 1 certifies irreducibility."""
    return IrreducibilityCertificate(images.dim, commutant_dimension(images.images, images.dim))
