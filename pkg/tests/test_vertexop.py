from fractions import Fraction

import pytest

from latva.errors import CocycleMismatch
from latva.fock import FockSpace, FockVector, apply_h
from latva.lattice import LatticeLevel, SignCocycle, build_cocycle
from latva.vertexop import (
    cocycle_roundtrip,
    koszul_sign,
    locality_residual,
    modified_vertex_apply,
    ode_residual,
    ope_leading,
    top_scalar,
    vertex_apply,
)

C1 = LatticeLevel([[1]])
C2 = LatticeLevel([[2]])
A2 = LatticeLevel([[2, 1], [1, 2]])


def setup(L):
    return FockSpace(L), build_cocycle(L)


def test_ope_examples():
    F, eps = setup(C2)
    assert ope_leading(F, (1,), (1,), eps) == (2, F.vacuum((2,)))
    assert ope_leading(F, (1,), (-1,), eps) == (-2, F.vacuum((0,)))
    assert ope_leading(F, (1,), (0,), eps) == (0, F.vacuum((1,)))
    F, eps = setup(C1)
    assert ope_leading(F, (1,), (-1,), eps) == (-1, F.vacuum((0,)) * -1)
    assert ope_leading(F, (1,), (1,), eps) == (1, F.vacuum((2,)) * -1)


def test_pole_law_on_box():
    F, eps = setup(A2)
    for g1 in A2.box(2):
        for g2 in A2.box(2):
            q, mu = top_scalar(F, g1, g2, eps)
            assert q == A2.pairing(g1, g2)
            assert mu == eps(g1, g2) * (-1) ** (q % 2)


def test_vertex_on_e1():
    F, eps = setup(C2)
    x = vertex_apply((1,), F.vacuum((1,)), (-2, 4), eps)
    assert x.exponents() == [2, 3, 4]
    assert x.leading() == (2, F.vacuum((2,)))
    assert x[3] == apply_h((1,), -1, F.vacuum((2,)))


def test_vertex_of_zero_is_identity():
    F, eps = setup(A2)
    v = F.ket([(1, 0), (2, 1)], (1, -1))
    x = vertex_apply((0, 0), v, (-4, 4), eps)
    assert x.terms == {0: v}


def test_heisenberg_covariance():
    F, eps = setup(A2)
    gamma = (1, 0)
    for v in (F.vacuum((0, 1)), F.ket([(1, 1)], (1, 0))):
        V = vertex_apply(gamma, v, (-6, 4), eps)
        for alpha in A2.basis():
            c = A2.pairing(gamma, alpha)
            for n in (-2, -1, 0, 1, 2):
                Vh = vertex_apply(gamma, apply_h(alpha, n, v), (-6, 4), eps)
                for q in range(-2, 3):
                    lhs = apply_h(alpha, n, V[q]) - Vh[q]
                    assert lhs == V[q - n] * c


def test_ode_examples():
    F, eps = setup(C2)
    tests = [FockVector(F, {k: 1}) for k in F.basis(3)]
    for _, res in ode_residual((1,), tests, (-4, 4), eps):
        assert res.is_zero()
    for _, res in ode_residual((0,), tests[:4], (-4, 4), eps):
        assert res.is_zero()


def test_ode_negative_control():
    F, eps = setup(C2)
    v = F.vacuum((1,))
    broken = lambda w, top: vertex_apply((1,), w, (-4, top), eps, drop_creation=(1,))  # noqa: E731
    ((_, res),) = ode_residual((1,), [v], (-4, 4), eps, op=broken)
    assert not res.is_zero()


def test_ode_recursion_determines_expansion():
    # (q - lam) C_q = sum_{n>0} h_-n C_(q-n) from the top coefficient alone
    for L, gamma, g2 in ((C2, (1,), (1,)), (C1, (1,), (-1,)), (A2, (1, -1), (0, 1))):
        F, eps = setup(L)
        v = F.vacuum(g2)
        lam, top = ope_leading(F, gamma, g2, eps)
        C = {lam: top}
        for q in range(lam + 1, lam + 7):
            acc = FockVector(F)
            for n in range(1, q - lam + 1):
                acc = acc + apply_h(gamma, -n, C[q - n])
            C[q] = acc * Fraction(1, q - lam)
        V = vertex_apply(gamma, v, (lam - 2, lam + 6), eps)
        for q in range(lam - 2, lam + 7):
            assert V[q] == C.get(q, FockVector(F))


def test_locality_examples():
    F, eps = setup(C2)
    vac = F.vacuum()
    assert locality_residual((1,), (1,), 0, vac, 4, eps).is_zero()
    assert locality_residual((1,), (-1,), 2, vac, 3, eps).is_zero()
    res = locality_residual((1,), (-1,), 1, vac, 3, eps)
    assert not res.is_zero() and res.witness() is not None

    F, eps = setup(C1)
    assert koszul_sign(C1, (1,), (1,)) == -1
    assert locality_residual((1,), (1,), 0, F.vacuum(), 4, eps).is_zero()
    assert not locality_residual((1,), (1,), 0, F.vacuum(), 4, eps, sign=1).is_zero()


def test_locality_rank_two():
    F, eps = setup(A2)
    v = apply_h((1, 0), -1, F.vacuum())
    for g1 in A2.box(1):
        for g2 in A2.box(1):
            N = max(0, -A2.pairing(g1, g2))
            assert locality_residual(g1, g2, N, v, 2, eps).is_zero()


def test_modified_operator_on_vacuum():
    F, eps = setup(A2)
    x = modified_vertex_apply((1, 1), F.vacuum(), (-3, 3), eps)
    assert x.exponents() == [0]
    assert x[0] == F.vacuum((1, 1))
    y = modified_vertex_apply((0, 0), F.ket([(2, 0)], (1, 0)), (-3, 3), eps)
    assert y.terms == {0: F.ket([(2, 0)], (1, 0))}


def test_roundtrip_examples():
    assert cocycle_roundtrip(C2, build_cocycle(C2)).eps_basis == ((1,),)
    assert cocycle_roundtrip(A2, build_cocycle(A2)) == build_cocycle(A2)


def test_roundtrip_rejects_corrupted_cocycle():
    with pytest.raises(CocycleMismatch) as info:
        cocycle_roundtrip(A2, SignCocycle([[1, 1], [1, 1]]))
    g1, g2 = info.value.witness
    # the trivial table commutes everywhere, so the witness must anticommute
    assert build_cocycle(A2).commutator(g1, g2) == -1


def test_expansion_json():
    F, eps = setup(C2)
    data = vertex_apply((1,), F.vacuum((-1,)), (-3, -1), eps).to_json()
    assert data["window"] == [-3, -1]
    assert data["terms"][0][0] == -2
