"""Built-in presentations: U_q^+(so_5) and quantum matrices O_q(M_{m,n})."""

from __future__ import annotations

from .cyclotomic import LaurentPoly, QLaurentRatio
from .dda import NCPolynomial, OrePresentation
from .qmatrices import qm_exponent_matrix

__all__ = ["builtin_presentations", "preset", "qm_presentation", "uq_so5"]

q = LaurentPoly.q()
q_inv = LaurentPoly(-1, (1,))


def uq_so5() -> OrePresentation:
    """Generators X1 = E1, X2 = E4, X3 = E3, X4 = E2 (root vectors in PBW order)."""
    qq = q + q_inv
    deltas = {
        (2, 0): NCPolynomial([(-qq, (1,))]),
        (3, 0): NCPolynomial([(-(q**2), (2,))]),
        (3, 1): NCPolynomial([(QLaurentRatio(-(q**2 - 1), qq), (2, 2))]),
    }
    # central element generating the Cauchon ideal for w = {2}
    z = NCPolynomial(
        [(-(q**2 - q_inv**2) * qq, (1, 3)), (q**2 * (q**2 - 1), (2, 2))]
    )
    return OrePresentation(
        N=4,
        M=((0, 2, 0, -2), (-2, 0, 2, 0), (0, -2, 0, 2), (2, 0, -2, 0)),
        q_exponents={2: 2, 3: 4},
        deltas=deltas,
        elements={"z'": z},
        name="uq_so5",
    )


def qm_presentation(m: int, n: int) -> OrePresentation:
    """O_q(M_{m,n}) with generators in lexicographic order.

    For (i,j) < (s,t) with i < s and j < t:
    X_{s,t} X_{i,j} = X_{i,j} X_{s,t} - (q - q^-1) X_{i,t} X_{s,j}.
    """
    idx = lambda i, j: i * n + j  # noqa: E731
    coeff = -(q - q_inv)
    deltas, q_exp = {}, {}
    for s in range(m):
        for t in range(n):
            for i in range(s):
                for j in range(t):
                    deltas[(idx(s, t), idx(i, j))] = NCPolynomial([(coeff, (idx(i, t), idx(s, j)))])
                    q_exp[idx(s, t)] = 2
    return OrePresentation(
        N=m * n,
        M=qm_exponent_matrix(m, n),
        q_exponents=q_exp,
        deltas=deltas,
        name=f"qm({m},{n})",
    )


def builtin_presentations() -> dict:
    return {"uq_so5": uq_so5(), "qm(2,2)": qm_presentation(2, 2)}


def preset(name: str) -> OrePresentation:
    """``uq_so5`` or ``qm(m,n)`` / ``qm:m,n``."""
    name = name.strip()
    if name == "uq_so5":
        return uq_so5()
    if name.startswith("qm"):
        body = name[2:].strip("():")
        try:
            m, n = (int(x) for x in body.split(","))
        except ValueError:
            raise ValueError(f"cannot parse preset {name!r}; expected qm(m,n)") from None
        return qm_presentation(m, n)
    raise ValueError(f"unknown preset {name!r}")
