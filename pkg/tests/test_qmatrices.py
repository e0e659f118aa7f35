import json
from math import comb, factorial
from pathlib import Path

import pytest

from qpideg.errors import BudgetExceeded, EvenEll, OddExponent
from qpideg.pideg import pideg_quotient
from qpideg.qmatrices import (
    CALIBRATED_CONVENTION,
    CauchonDiagram,
    calibration_report,
    deleted_exponent_matrix,
    enumerate_diagrams,
    is_cauchon_le,
    kernel_vs_odd_cycles,
    pideg_qm_formula,
    qm_exponent_matrix,
    toric_permutation,
)
from qpideg.skew import skew_normal_form

DIAGRAM_3X5 = CauchonDiagram(3, 5, {(1, 2), (1, 4), (2, 2), (3, 1), (3, 2), (3, 3)})
REPORT = Path(__file__).resolve().parents[1] / "reports" / "qm_calibration.json"


def test_exponent_matrix_2x2():
    # order (1,1), (1,2), (2,1), (2,2): same row or column gives q, else commute
    # except (1,1) with (2,2)
    assert qm_exponent_matrix(2, 2) == (
        (0, 1, 1, 0),
        (-1, 0, 0, 1),
        (-1, 0, 0, 1),
        (0, -1, -1, 0),
    )


def test_exponent_matrix_is_skew():
    for m, n in [(1, 3), (2, 3), (3, 3)]:
        a = qm_exponent_matrix(m, n)
        assert all(a[i][j] == -a[j][i] for i in range(m * n) for j in range(m * n))


def test_3x5_example_permutation():
    tau = toric_permutation(DIAGRAM_3X5)
    assert tau.cycle_notation() == "(1 7)(2 6 3 8 4)"
    assert tau(5) == 5


def test_all_black_is_identity():
    for m, n in [(1, 1), (2, 3), (3, 3)]:
        tau = toric_permutation(CauchonDiagram.full(m, n))
        assert all(tau(k) == k for k in range(1, m + n + 1))


def test_single_white_cell():
    assert toric_permutation(CauchonDiagram(1, 1, set())).cycle_notation() == "(1 2)"


def test_bijection_on_all_small_diagrams():
    for m, n in [(1, 2), (2, 2), (2, 3), (3, 3)]:
        for d in enumerate_diagrams(m, n):
            tau = toric_permutation(d)
            assert sorted(tau(k) for k in range(1, m + n + 1)) == list(range(1, m + n + 1))


def test_transpose_conjugates_by_label_reversal():
    for m, n in [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3)]:
        big = m + n + 1
        for d in enumerate_diagrams(m, n):
            tau, tau_t = toric_permutation(d), toric_permutation(d.transpose())
            assert all(tau_t(big - k) == big - tau(k) for k in range(1, big))


def test_text_and_json_round_trip():
    assert DIAGRAM_3X5.to_text() == ".#.#.\n.#...\n###.."
    assert CauchonDiagram.from_text(DIAGRAM_3X5.to_text()) == DIAGRAM_3X5
    assert CauchonDiagram.from_json(json.loads(json.dumps(DIAGRAM_3X5.to_json()))) == DIAGRAM_3X5
    with pytest.raises(ValueError):
        CauchonDiagram.from_text("#.\n#")


def test_indices_are_lexicographic():
    assert CauchonDiagram(2, 3, {(1, 2), (2, 1)}).indices() == [1, 3]


def poly_bernoulli(n, k):
    """Number of n x k Le diagrams (poly-Bernoulli numbers B_n^(-k))."""

    def stirling2(a, b):
        return sum((-1) ** i * comb(b, i) * (b - i) ** a for i in range(b + 1)) // factorial(b)

    return sum(factorial(j) ** 2 * stirling2(n + 1, j + 1) * stirling2(k + 1, j + 1)
               for j in range(min(n, k) + 1))


@pytest.mark.parametrize("m,n", [(1, 1), (1, 3), (2, 2), (2, 3), (3, 3)])
def test_le_count(m, n):
    assert sum(1 for _ in enumerate_diagrams(m, n, le_only=True)) == poly_bernoulli(m, n)


def test_le_predicate_examples():
    assert not is_cauchon_le(CauchonDiagram(2, 2, {(2, 2)}))
    assert is_cauchon_le(CauchonDiagram(2, 2, {(1, 2), (2, 2)}))
    assert is_cauchon_le(CauchonDiagram.full(2, 2))


def test_enumerate_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_diagrams(3, 3, budget=100))


def test_kernel_and_factor_counts():
    for m, n in [(1, 2), (2, 2), (2, 3), (3, 3), (3, 4)]:
        for d in enumerate_diagrams(m, n):
            rep = kernel_vs_odd_cycles(d)
            assert rep.factors_powers_of_two
            assert rep.kernel_dim + 2 * len(rep.invariant_factors) == m * n - len(d.black)


def test_kernel_equals_even_length_cycles():
    for m, n in [(2, 2), (2, 3), (3, 3)]:
        for d in enumerate_diagrams(m, n):
            assert kernel_vs_odd_cycles(d).kernel_dim == toric_permutation(d).odd_cycles(
                CALIBRATED_CONVENTION
            )


def test_3x5_example_kernel():
    rep = kernel_vs_odd_cycles(DIAGRAM_3X5)
    assert rep.kernel_dim == 1 and rep.invariant_factors == (1, 1, 1, 2)
    assert rep.odd_with_fixed == 2 and rep.odd_without_fixed == 1 and rep.even_cycles == 1
    assert pideg_quotient(qm_exponent_matrix(3, 5), DIAGRAM_3X5.indices(), 5).value == 625


def test_formula_examples():
    empty = CauchonDiagram(2, 2, set())
    assert pideg_qm_formula(empty, 3) == 3
    assert pideg_qm_formula(empty, 3, base="deleted") == 3
    full = CauchonDiagram.full(2, 2)
    # exact value is 1; only the deleted-size exponent reproduces it
    assert pideg_qm_formula(full, 3, base="deleted") == 1
    assert pideg_qm_formula(full, 3) == 9
    assert pideg_qm_formula(DIAGRAM_3X5, 5, base="deleted") == 625
    with pytest.raises(EvenEll):
        pideg_qm_formula(empty, 4)
    with pytest.raises(OddExponent):
        pideg_qm_formula(CauchonDiagram(2, 2, {(1, 1)}), 3)


def test_deleted_matrix_size():
    assert len(deleted_exponent_matrix(DIAGRAM_3X5)) == 9
    assert skew_normal_form(deleted_exponent_matrix(CauchonDiagram(2, 2, set()))).kernel_dim == 2


def test_committed_report_is_current():
    assert calibration_report() == json.loads(REPORT.read_text())


def test_report_content():
    rep = json.loads(REPORT.read_text())
    conv = rep["conventions"]
    assert rep["exact_routes_agree"] and rep["factors_powers_of_two"] and rep["oracle_missing"] == 0
    assert conv["even_length"]["kernel_identity"]
    assert not conv["with_fixed"]["kernel_identity"] and not conv["without_fixed"]["kernel_identity"]
    assert conv["even_length"]["mismatch_counts"] == {"grid": 1052, "deleted": 0}
    # the grid exponent agrees only at the all-white diagrams
    matched = 2 * rep["diagrams"] - conv["even_length"]["mismatch_counts"]["grid"]
    assert matched == 4
    assert all("#" in x["diagram"] for x in conv["even_length"]["mismatches"]["grid"])
