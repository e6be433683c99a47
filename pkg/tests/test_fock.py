from fractions import Fraction

import pytest

from latva.errors import ConfigError, DegenerateLatticeError, TruncationError
from latva.fock import (
    FockSpace,
    FockVector,
    apply_h,
    apply_shift,
    colored_partitions,
    sugawara_L,
)
from latva.lattice import LatticeLevel, build_cocycle

C2 = LatticeLevel([[2]])
A2 = LatticeLevel([[2, 1], [1, 2]])


@pytest.fixture
def F():
    return FockSpace(C2)


def test_heisenberg_examples(F):
    vac = F.vacuum()
    assert apply_h((1,), 1, apply_h((1,), -1, vac)) == vac * 2
    assert apply_h((1,), 0, F.vacuum((1,))) == F.vacuum((1,)) * 2
    assert apply_h((1,), 5, vac) == 0


def test_creation_appends_mode(F):
    v = apply_h((1,), -2, apply_h((1,), -1, F.vacuum()))
    assert v == F.ket([(1, 0), (2, 0)], (0,))
    assert v.weights() == [3]


def test_rational_direction(F):
    v = apply_h((Fraction(1, 2),), -1, F.vacuum())
    assert v == F.ket([(1, 0)], (0,), Fraction(1, 2))


def test_shift_examples():
    F = FockSpace(A2)
    eps = build_cocycle(A2)
    e = F.vacuum((1, 0))
    assert apply_shift((0, 1), e, eps) == F.vacuum((1, 1)) * eps((0, 1), (1, 0))
    assert apply_shift((0, 1), e, eps) == F.vacuum((1, 1)) * -1
    assert apply_shift((0, 0), e, eps) == e
    for g1 in A2.box(1):
        for g2 in A2.box(1):
            both = apply_shift(g1, apply_shift(g2, e, eps), eps)
            direct = apply_shift(tuple(a + b for a, b in zip(g1, g2)), e, eps)
            assert both == direct * eps(g1, g2)


def test_shift_commutes_with_nonzero_modes():
    F = FockSpace(A2)
    eps = build_cocycle(A2)
    v = F.ket([(1, 0), (2, 1)], (1, -1))
    for n in (-2, -1, 1, 2):
        for alpha in A2.basis():
            lhs = apply_shift((0, 1), apply_h(alpha, n, v), eps)
            rhs = apply_h(alpha, n, apply_shift((0, 1), v, eps))
            assert lhs == rhs


def test_shift_changes_momentum_by_c_gamma():
    F = FockSpace(A2)
    eps = build_cocycle(A2)
    ket = ((), (1, 0))
    moved = apply_shift((1, 1), FockVector(F, {ket: 1}), eps)
    (k2,) = moved.terms
    assert F.momentum(k2) == tuple(a + b for a, b in zip(F.momentum(ket), A2.to_dual((1, 1))))


def test_sugawara_examples(F):
    e1 = F.vacuum((1,))
    assert sugawara_L(0, e1) == e1
    h = apply_h((1,), -1, F.vacuum())
    assert sugawara_L(0, h) == h
    assert sugawara_L(-1, e1) == apply_h((1,), -1, e1)
    for n in (1, 2, 3):
        assert sugawara_L(n, e1) == 0


def test_sugawara_needs_nondegenerate():
    F = FockSpace(LatticeLevel([[1, 1], [1, 1]]))
    with pytest.raises(DegenerateLatticeError):
        sugawara_L(0, F.vacuum())


def test_weight_grading():
    F = FockSpace(A2)
    for ket in F.basis(3):
        v = FockVector(F, {ket: 1})
        w = F.weight(ket)
        assert sugawara_L(0, v) == v * w
        for n in (-2, -1, 1, 2):
            for alpha in A2.basis():
                out = apply_h(alpha, n, v)
                assert all(F.weight(k) == w - n for k in out.terms)


def test_basis_counts():
    # charges 0 (weight 0), +-1 (weight 1) and partitions of the remainder
    F = FockSpace(C2)
    counts = {}
    for ket in F.basis(3):
        w = F.weight(ket)
        counts[w] = counts.get(w, 0) + 1
    assert counts == {0: 1, 1: 3, 2: 4, 3: 7}
    assert len(list(colored_partitions(3, 2))) == 10


def test_parity():
    F = FockSpace(LatticeLevel([[1]]))
    assert F.parity(((), (1,))) == 1
    assert F.parity(((), (2,))) == 0


def test_json_round_trip():
    F = FockSpace(A2)
    v = F.ket([(1, 0), (3, 1)], (1, -1), Fraction(-3, 4)) + F.vacuum((0, 2))
    assert FockVector.from_json(F, v.to_json()) == v


def test_bad_modes_rejected(F):
    with pytest.raises(ConfigError):
        F.ket([(0, 0)], (0,))


def test_cutoff_guard():
    F = FockSpace(C2, cutoff=2)
    eps = build_cocycle(C2)
    with pytest.raises(TruncationError):
        apply_shift((2,), F.vacuum(), eps)
    with pytest.raises(TruncationError):
        apply_h((1,), -3, F.vacuum())
