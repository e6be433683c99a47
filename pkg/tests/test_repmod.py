from fractions import Fraction

import pytest

from latva.errors import ConfigError, DegenerateLatticeError
from latva.fock import FockVector, apply_shift
from latva.lattice import LatticeLevel, build_cocycle
from latva.repmod import (
    build_module,
    h0_spectrum,
    module_classes,
    nilpotency_certificate,
    reconstruct_shift,
    spectrum_coset_ok,
    vbar_properties,
)

C2 = LatticeLevel([[2]])
A2 = LatticeLevel([[2, 1], [1, 2]])


def test_classes():
    assert module_classes(C2) == [(0,), (1,)]
    assert len(module_classes(A2)) == 3
    assert module_classes(LatticeLevel([[1]])) == [()]


def test_trivial_class_is_the_algebra():
    M = build_module(C2, (0,), 3)
    assert M.offset == (0,)
    assert M.graded_dimension() == {0: 1, 1: 3, 2: 4, 3: 7}


def test_generator_weight_quarter():
    M = build_module(C2, (1,), 3)
    assert M.offset == (1,)
    assert M.space.weight(((), (0,))) == Fraction(1, 4)
    assert M.graded_dimension() == {
        Fraction(1, 4): 2,
        Fraction(5, 4): 2,
        Fraction(9, 4): 6,
    }


def test_degenerate_rejected():
    with pytest.raises(DegenerateLatticeError):
        build_module(LatticeLevel([[1, 1], [1, 1]]), (), 3)


def test_representative_independence():
    M = build_module(C2, (1,), 4)
    M2 = build_module(C2, (1,), 4, representative=(3,))
    assert M2.graded_dimension() == M.graded_dimension()
    with pytest.raises(ConfigError):
        build_module(C2, (1,), 4, representative=(2,))


def test_nilpotency_examples():
    M = build_module(C2, (0,), 3)
    rep = nilpotency_certificate(M, (1,), 3)
    assert rep.ok
    assert rep.max_index == {1: 4, 2: 2, 3: 2}
    # vacuum dies under one h_1, a weight-3 ket under (h_1)^4 and no fewer
    from latva.repmod import _killing_power

    assert _killing_power((1,), 1, M.generator(), 1) == 1
    v = M.space.ket([(1, 0), (1, 0), (1, 0)], (0,))
    assert _killing_power((1,), 1, v, 4) == 4
    assert not nilpotency_certificate(M, (1,), 3, modes=[-1]).ok


def test_spectrum_examples():
    even = h0_spectrum(build_module(C2, (0,), 4), (1,))
    assert all(x % 2 == 0 for x in even)
    odd = h0_spectrum(build_module(C2, (1,), 4), (1,))
    assert all(x % 2 == 1 for x in odd)
    assert set(h0_spectrum(build_module(C2, (1,), 4), (0,))) == {0}


def test_spectrum_cosets_rank_two():
    for chi in module_classes(A2):
        M = build_module(A2, chi, 3)
        for alpha in A2.basis():
            assert spectrum_coset_ok(M, alpha, h0_spectrum(M, alpha))


@pytest.mark.parametrize("chi", [(0,), (1,)])
def test_vbar_properties(chi):
    M = build_module(C2, chi, 4)
    found = vbar_properties(M, (1,), build_cocycle(C2), max_weight=3)
    assert {k: v for k, v in found.items() if v} == {}


def test_vbar_on_vacuum_single_term():
    from latva.vertexop import modified_vertex_apply

    M = build_module(C2, (1,), 4)
    x = modified_vertex_apply((1,), M.generator(), (-4, 4), build_cocycle(C2))
    assert len(x.exponents()) == 1


def test_shift_reconstruction():
    eps = build_cocycle(A2)
    M = build_module(A2, module_classes(A2)[1], 3)
    for v in M.basis_vectors(2):
        for g in A2.basis():
            assert reconstruct_shift(g, v, eps) == apply_shift(g, v, eps)
    assert isinstance(M.generator(), FockVector)
