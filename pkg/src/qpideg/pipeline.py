"""End-to-end construction of a maximal irreducible representation of A/P_w.

Steps: delete the rows/columns in w from M, build the torus representation
from the skew normal form of what remains, map it to the t-generators
through E^{-1}, pull it back through the deleting derivations algorithm and
certify the result.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cycmatrix import CycMatrix
from .dda import DdaTrace, OrePresentation, dda_full, dda_pullback, verify_presentation_relations
from .pideg import PiDegreeReport, pideg_quotient
from .representation import (
    GeneratorImages,
    IrreducibilityCertificate,
    ResidualReport,
    TorusRepParams,
    certify_irreducible,
    quantum_torus_representation,
)
from .skew import delete_rows_cols

__all__ = ["PullbackResult", "pullback_representation", "torus_images"]


def torus_images(p: OrePresentation, w, ell: int, params: TorusRepParams | None = None):
    """Images of all N t-generators on the quotient by <T_i : i in w>.

    Generators in ``w`` map to zero; when nothing survives the quotient is
    the ground field and every image is the 1x1 zero matrix.
    """
    w = sorted(set(w))
    keep = [i for i in range(p.N) if i not in w]
    names = [f"t{i + 1}" for i in range(p.N)]
    if not keep:
        return GeneratorImages(ell, [CycMatrix.zeros(ell, 1)] * p.N, names)
    sub = quantum_torus_representation(delete_rows_cols(p.M, w), ell, params)
    full = [CycMatrix.zeros(ell, sub.dim)] * p.N
    for k, img in zip(keep, sub.images):
        full[k] = img
    return GeneratorImages(ell, full, names)


@dataclass
class PullbackResult:
    w: tuple
    t_images: GeneratorImages
    x_images: GeneratorImages
    trace: DdaTrace
    round_trip: bool
    relations: ResidualReport
    elements: dict
    certificate: IrreducibilityCertificate
    pideg: PiDegreeReport

    @property
    def ok(self) -> bool:
        return (
            self.round_trip
            and self.trace.ok
            and self.relations.ok
            and self.certificate.certified
            and self.certificate.dim == self.pideg.value
        )

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "cauchon": [i + 1 for i in self.w],
            "ell": self.x_images.ell,
            "dim": self.x_images.dim,
            "pideg": self.pideg.to_json(),
            "round_trip": self.round_trip,
            "trace": self.trace.to_json(),
            "relations": self.relations.to_json(),
            "elements_vanish": {k: v.is_zero() for k, v in self.elements.items()},
            "certificate": self.certificate.to_json(),
            "representation": self.x_images.to_json(),
        }


def pullback_representation(
    p: OrePresentation, w, ell: int, params: TorusRepParams | None = None, budget=None
) -> PullbackResult:
    w = tuple(sorted(set(w)))
    t = torus_images(p, w, ell, params)
    x = dda_pullback(p, w, t, ell)
    back, trace = dda_full(p, x)
    relations, elements = verify_presentation_relations(p, x, ell)
    return PullbackResult(
        w=w,
        t_images=t,
        x_images=x,
        trace=trace,
        round_trip=back == t,
        relations=relations,
        elements=elements,
        certificate=certify_irreducible(x),
        pideg=pideg_quotient(p.M, w, ell, budget),
    )
