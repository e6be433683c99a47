import itertools
import random

import pytest

from latva.errors import ConfigError, DegenerateLatticeError
from latva.lattice import (
    LatticeLevel,
    SignCocycle,
    baer_sum,
    build_cocycle,
    commutator_sign,
    dual_quotient,
    smith_normal_form,
)


def test_pairing_and_parity():
    assert LatticeLevel([[1]]).parity((1,)) == 1
    assert LatticeLevel([[2]]).parity((1,)) == 0
    A2 = LatticeLevel([[2, 1], [1, 2]])
    assert A2.pairing((1, 0), (0, 1)) == 1
    assert A2.pairing((1, -1), (2, 3)) == -1
    with pytest.raises(ConfigError):
        A2.pairing((1,), (0, 1))


def test_gram_validation():
    with pytest.raises(ConfigError):
        LatticeLevel([[1, 2], [0, 1]])
    with pytest.raises(ConfigError):
        LatticeLevel([])


def test_coker_examples():
    assert dual_quotient(LatticeLevel([[2]])).coker_factors == [2]
    assert dual_quotient(LatticeLevel([[2, 1], [1, 2]])).coker_factors == [3]
    assert dual_quotient(LatticeLevel([[1]])).coker_factors == []
    assert dual_quotient(LatticeLevel([[2, 0], [0, 4]])).coker_factors == [2, 4]


def test_section_projects_back():
    for gram in ([[2]], [[2, 1], [1, 2]], [[4, 2], [2, 6]], [[2, 0], [0, 4]]):
        dq = dual_quotient(LatticeLevel(gram))
        assert len(dq.classes()) == dq.order
        for cls in dq.classes():
            assert dq.project(dq.section(cls)) == cls


def test_degenerate_cokernel_is_infinite():
    dq = dual_quotient(LatticeLevel([[1, 1], [1, 1]]))
    with pytest.raises(DegenerateLatticeError):
        dq.classes()


def _det(m):
    r = len(m)
    if r == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(r))


def test_cokernel_order_is_abs_det():
    rng = random.Random(5)
    seen = 0
    while seen < 60:
        r = rng.randint(1, 3)
        m = [[0] * r for _ in range(r)]
        for i in range(r):
            for j in range(i, r):
                m[i][j] = m[j][i] = rng.randint(-4, 4)
        d = _det(m)
        if d == 0:
            continue
        seen += 1
        assert dual_quotient(LatticeLevel(m)).order == abs(d)


def test_smith_form_diagonalizes():
    from latva.lattice import mat_vec

    a = [[4, 2, 0], [2, 6, 2], [0, 2, 8]]
    U, diag, V = smith_normal_form(a)
    for j in range(3):
        col = mat_vec(a, [V[i][j] for i in range(3)])
        image = mat_vec(U, col)
        assert list(image) == [diag[j] if i == j else 0 for i in range(3)]
    assert all(diag[i + 1] % diag[i] == 0 for i in range(2))


def test_cocycle_table_examples():
    A2 = LatticeLevel([[2, 1], [1, 2]])
    eps = build_cocycle(A2)
    assert eps((1, 0), (0, 1)) == 1
    assert eps((0, 1), (1, 0)) == -1
    assert build_cocycle(LatticeLevel([[3]])).eps_basis == ((1,),)
    for g in A2.box(2):
        assert eps((0, 0), g) == eps(g, (0, 0)) == 1


GRAMS = [
    [[1]],
    [[2]],
    [[3]],
    [[2, 1], [1, 2]],
    [[1, 0], [0, 1]],
    [[1, 1], [1, 3]],
    [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    [[1, 1, 0], [1, 3, 1], [0, 1, 1]],
]


@pytest.mark.parametrize("gram", GRAMS, ids=str)
def test_cocycle_invariants_on_box(gram):
    L = LatticeLevel(gram)
    radius = 3 if L.rank < 3 else 2
    assert list(build_cocycle(L).violations(L, radius)) == []


def test_cocycle_deterministic():
    L = LatticeLevel([[2, 1, 0], [1, 3, 1], [0, 1, 1]])
    assert build_cocycle(L) == build_cocycle(L)


def test_cocycles_differ_by_symmetric_sign():
    # every valid table on rank <= 2 differs from build_cocycle by a symmetric one
    for gram in ([[2]], [[1]], [[2, 1], [1, 2]], [[1, 0], [0, 3]], [[0, 1], [1, 0]]):
        L = LatticeLevel(gram)
        base = build_cocycle(L)
        r = L.rank
        for signs in itertools.product((1, -1), repeat=r * r):
            cand = SignCocycle([signs[i * r:(i + 1) * r] for i in range(r)])
            valid = not any(True for _ in cand.violations(L, 1))
            ratio = cand * base
            symmetric = all(ratio(a, b) == ratio(b, a) for a in L.box(1) for b in L.box(1))
            assert valid == symmetric


def test_baer_sum_examples():
    c1 = LatticeLevel([[1]])
    c2 = LatticeLevel([[2]])
    s = baer_sum(c1, build_cocycle(c1), c1, build_cocycle(c1))
    assert list(s.violations(c2, 3)) == []

    L = LatticeLevel([[2, 1], [1, 2]])
    zero = LatticeLevel([[0, 0], [0, 0]])
    trivial = SignCocycle([[1, 1], [1, 1]])
    assert baer_sum(L, build_cocycle(L), zero, trivial) == build_cocycle(L)

    for gram in ([[1, 1], [1, 3]], [[2, 1], [1, 2]], [[1, 0], [0, 2]]):
        L = LatticeLevel(gram)
        neg = LatticeLevel([[-x for x in row] for row in gram])
        s = baer_sum(L, build_cocycle(L), neg, build_cocycle(neg))
        assert all(s.commutator(a, b) == 1 for a in L.box(2) for b in L.box(2))


def test_baer_sum_mixed_diagonals():
    # odd/even diagonal cross terms need the symmetric correction
    A = LatticeLevel([[1, 0], [0, 2]])
    B = LatticeLevel([[2, 0], [0, 1]])
    total = LatticeLevel([[3, 0], [0, 3]])
    s = baer_sum(A, build_cocycle(A), B, build_cocycle(B))
    assert list(s.violations(total, 2)) == []


def test_commutator_sign_formula():
    L = LatticeLevel([[1, 1], [1, 3]])
    assert commutator_sign(L, (1, 0), (0, 1)) == 1  # 1 + 1*3 even
    assert commutator_sign(L, (1, 0), (1, 0)) == 1  # 1 + 1
    assert commutator_sign(L, (1, 1), (0, 1)) == 1  # 4 + 6*3
    assert commutator_sign(LatticeLevel([[1, 0], [0, 1]]), (1, 0), (0, 1)) == -1  # 0 + 1*1
