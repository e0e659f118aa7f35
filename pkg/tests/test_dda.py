import json

import pytest

from qpideg.cycmatrix import CycMatrix
from qpideg.cyclotomic import LaurentPoly, QLaurentRatio
from qpideg.dda import (
    NCPolynomial,
    OrePresentation,
    check_hypothesis,
    dda_full,
    dda_pullback,
    dda_step,
    infer_q_exponent,
    verify_presentation_relations,
)
from qpideg.errors import DenominatorVanishes, NotScalarPower, RelationResidual
from qpideg.pipeline import pullback_representation, torus_images
from qpideg.presets import preset, qm_presentation, uq_so5
from qpideg.qmatrices import enumerate_diagrams, is_cauchon_le
from qpideg.representation import GeneratorImages

q = LaurentPoly.q()


def test_ncpolynomial_basics():
    x, y = NCPolynomial.generator(0), NCPolynomial.generator(1)
    assert (x * y - y * x) != NCPolynomial()
    assert (x * y + x * y - (x * y).scale(2)).is_zero()
    assert (x * y).letters() == {0, 1}
    back = NCPolynomial.from_json(json.loads(json.dumps((x * y).scale(q + 1).to_json())))
    assert back == (x * y).scale(q + 1)


def test_ncpolynomial_evaluate_order():
    a = CycMatrix(5, [[0, 1], [0, 0]])
    b = CycMatrix(5, [[0, 0], [1, 0]])
    word = NCPolynomial([(1, (0, 1))])
    assert word.evaluate([a, b], 5, 2) == a @ b
    assert NCPolynomial().evaluate([a, b], 5, 2).is_zero()


def test_presentation_validation():
    with pytest.raises(ValueError):
        OrePresentation(N=2, M=((0, 1), (-1, 0)), deltas={(0, 1): NCPolynomial.generator(0)})
    with pytest.raises(ValueError):
        OrePresentation(N=2, M=((0, 1), (-1, 0)), deltas={(1, 0): NCPolynomial.generator(1)})


@pytest.mark.parametrize("name", ["uq_so5", "qm(2,2)", "qm(2,3)", "qm:3,3"])
def test_presets_satisfy_contract(name):
    rep = check_hypothesis(preset(name))
    assert rep.ok, rep.failures


def test_inferred_exponents():
    so5 = uq_so5()
    assert [infer_q_exponent(so5, j) for j in range(4)] == [None, None, 2, 4]
    assert infer_q_exponent(qm_presentation(2, 2), 3) == 2


def test_hypothesis_catches_wrong_exponent():
    p = qm_presentation(2, 2)
    bad = OrePresentation(N=p.N, M=p.M, q_exponents={3: 4}, deltas=p.deltas)
    assert not check_hypothesis(bad).ok


def test_presentation_json_round_trip():
    p = uq_so5()
    back = OrePresentation.from_json(json.loads(json.dumps(p.to_json())))
    assert back.to_json() == p.to_json()
    assert check_hypothesis(back).ok


def test_step_without_derivation_is_identity():
    p = uq_so5()
    t = torus_images(p, [], 5)
    assert dda_step(p, 1, t) == t  # X2 has no derivation


def test_step_with_zero_localizer_is_identity():
    p = uq_so5()
    t = torus_images(p, [3], 5)
    assert dda_step(p, 3, t, verify=False) == t


@pytest.mark.parametrize("ell", [3, 5, 7])
@pytest.mark.parametrize("w", [[], [1]])
def test_so5_round_trip(ell, w):
    p = uq_so5()
    t = torus_images(p, w, ell)
    x = dda_pullback(p, w, t, ell)
    back, trace = dda_full(p, x)
    assert back == t and trace.ok
    assert verify_presentation_relations(p, x)[0].ok


def test_surviving_only_images_accepted():
    p = uq_so5()
    full = torus_images(p, [1], 5)
    short = GeneratorImages(5, [full[k] for k in (0, 2, 3)])
    assert dda_pullback(p, [1], short) == dda_pullback(p, [1], full)


def test_quotient_element_vanishes():
    res = pullback_representation(uq_so5(), [1], 5)
    assert res.ok and res.elements["z'"].is_zero()
    assert not pullback_representation(uq_so5(), [], 5).elements["z'"].is_zero()


@pytest.mark.parametrize("ell", [2, 4])
def test_so5_rejects_even_orders_where_denominators_vanish(ell):
    with pytest.raises(DenominatorVanishes):
        pullback_representation(uq_so5(), [1], ell)


def test_non_scalar_power_rejected():
    p = uq_so5()
    t = torus_images(p, [], 5)
    odd = CycMatrix(5, [[1, 1, 0, 0, 0]] + [[0] * 5] * 4) + CycMatrix.identity(5, 5)
    bad = GeneratorImages(5, [odd, t[1], t[2], t[3]])
    with pytest.raises(NotScalarPower):
        dda_pullback(p, [], bad)


def test_full_run_rejects_non_representation():
    p = qm_presentation(2, 2)
    t = torus_images(p, [], 3)
    swapped = GeneratorImages(3, [t[1], t[0], t[2], t[3]])
    with pytest.raises(RelationResidual):
        dda_full(p, swapped)


@pytest.mark.parametrize("ell", [3, 5])
def test_qm22_all_diagrams(ell):
    p = qm_presentation(2, 2)
    for d in enumerate_diagrams(2, 2):
        res = pullback_representation(p, d.indices(), ell)
        # round trip and step residuals hold on every diagram ...
        assert res.round_trip and res.trace.ok
        assert res.certificate.certified and res.certificate.dim == res.pideg.value
        # ... but the images satisfy the defining relations only on Le diagrams
        assert res.relations.ok == is_cauchon_le(d)


def test_step_coefficient_formula():
    """With only a first-order derivation the step is x_l + c d(x_l) x_j^-1,
    c = q_j / (q_j - 1) / lambda_{j,l}; here lambda_{4,1} = 1 and q_j = q^2."""
    p = qm_presentation(2, 2)
    t = torus_images(p, [], 5)
    x = dda_pullback(p, [], t)
    y = dda_step(p, 3, x)
    c = QLaurentRatio(q**2, q**2 - 1)
    delta = (q - LaurentPoly(-1, (1,))).evaluate(5)
    expect = x[0] - (x[1] @ x[2] @ x[3].inverse()).scale(c.evaluate(5) * delta)
    assert y[0] == expect
