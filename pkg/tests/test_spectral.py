import random
from fractions import Fraction

import pytest

from latva.errors import ConfigError, NotEigenvectorError
from latva.fock import FockSpace, apply_h
from latva.laurent import parse_series
from latva.lattice import LatticeLevel
from latva.repmod import build_module, module_classes
from latva.spectral import (
    ConnectionJet,
    FockAction,
    SpectralPoint,
    apply_gauge,
    jet_class,
    sections_at_point,
    support_of_module,
    twist_action,
)
from latva.verify import random_jet

C2 = LatticeLevel([[2]])
A2 = LatticeLevel([[2, 1], [1, 2]])
F = Fraction


def test_jet_parsing():
    nu = ConnectionJet.parse(1, "1/3*t^-1 + 2*t^-2")
    assert nu.lam(0) == (F(1, 3),) and nu.lam(1) == (F(2),)
    assert ConnectionJet.parse(2, '[[0, ["1/2", 0]]]').lam(0) == (F(1, 2), 0)
    with pytest.raises(ConfigError):
        ConnectionJet.parse(1, "1 + t^-1")
    with pytest.raises(ConfigError):
        ConnectionJet.parse(2, "t^-1")


def test_pairing_is_residue():
    nu = ConnectionJet.from_dict(2, {0: [1, 2], 2: [F(1, 2), 0]})
    assert nu.pairing((1, 1), 0) == 3
    assert nu.pairing((2, 0), 2) == 1
    assert nu.pairing((1, 1), 1) == 0
    assert nu.pairing((1, 1), -1) == 0


def test_twist_examples():
    space = FockSpace(C2)
    base = FockAction(space)
    v = apply_h((1,), -1, space.vacuum((1,)))
    rho = ConnectionJet.from_dict(1, {0: [F(1, 3)]})
    tw = twist_action(rho, base)
    assert tw.h((1,), 0, v) == base.h((1,), 0, v) + v * F(1, 3)
    for n in (-2, -1, 1, 2):
        assert tw.h((1,), n, v) == base.h((1,), n, v)
    b = ConnectionJet.from_dict(1, {1: [5]})
    tw = twist_action(b, base)
    assert tw.h((1,), 1, v) == base.h((1,), 1, v) + v * 5
    assert tw.h((1,), 0, v) == base.h((1,), 0, v)
    zero = twist_action(ConnectionJet.zero(1), base)
    assert zero.h((1,), 0, v) == base.h((1,), 0, v)


def test_twisted_commutators_unchanged():
    space = FockSpace(A2)
    base = FockAction(space)
    tw = twist_action(ConnectionJet.from_dict(2, {0: [1, 2], 1: [3, F(1, 2)]}), base)
    v = apply_h((0, 1), -2, space.vacuum((1, 0)))
    for m in range(-2, 3):
        for n in range(-2, 3):
            for a in A2.basis():
                for b in A2.basis():
                    lhs = tw.h(a, m, tw.h(b, n, v)) - tw.h(b, n, tw.h(a, m, v))
                    rhs = base.h(a, m, base.h(b, n, v)) - base.h(b, n, base.h(a, m, v))
                    assert lhs == rhs


def test_gauge_examples():
    nu = ConnectionJet.from_dict(1, {0: [F(1, 2)], 2: [3]})
    moved = apply_gauge((2,), [], nu)
    assert moved.lam(0) == (F(5, 2),) and moved.lam(2) == (3,)
    unchanged = apply_gauge((0,), [((1,), parse_series("1+t").with_trunc(8))], nu)
    assert unchanged == nu
    assert apply_gauge((0,), [], nu) == nu
    with pytest.raises(ConfigError):
        apply_gauge((0,), [((1,), parse_series("t"))], nu)


def test_gauge_keeps_residue_class():
    nu = ConnectionJet.from_dict(1, {0: [F(1, 2)]})
    before, after = jet_class(nu, C2), jet_class(apply_gauge((3,), [], nu), C2)
    assert after.residue == (F(7, 2),)
    assert after.residue_class == before.residue_class == (F(1, 2),)


def test_support_examples():
    space = FockSpace(C2)
    s = support_of_module(FockAction(space), space.vacuum())
    assert s == SpectralPoint.from_coefficients(C2, {})
    assert s.irregular == () and s.central_character == (0,)
    for L in (C2, A2):
        for chi in module_classes(L):
            M = build_module(L, chi, 2)
            p = support_of_module(FockAction(M.space), M.generator())
            assert p.irregular == ()
            assert not any(p.residue_class)
            assert p.central_character == chi


def test_support_rejects_non_eigenvector():
    space = FockSpace(C2)
    v = space.vacuum() + apply_h((1,), -1, space.vacuum())
    with pytest.raises(NotEigenvectorError):
        support_of_module(FockAction(space), v)


def test_sections_at_point():
    space = FockSpace(C2)
    assert isinstance(sections_at_point(space, ConnectionJet.zero(1)), FockAction)
    rho = ConnectionJet.from_dict(1, {0: [F(1, 2)]})
    act = sections_at_point(space, rho)
    e = space.vacuum((1,))
    assert act.h((1,), 0, e) == e * F(5, 2)
    assert support_of_module(act, space.vacuum()) == jet_class(rho, C2)


def test_twist_covariance_random():
    rng = random.Random(9)
    for L in (C2, A2):
        for _ in range(20):
            chi = rng.choice(module_classes(L))
            M = build_module(L, chi, 2)
            base = FockAction(M.space)
            nu1, nu2 = random_jet(rng, L.rank), random_jet(rng, L.rank)
            s0 = support_of_module(base, M.generator())
            got = support_of_module(twist_action(nu1, base), M.generator())
            assert got == s0.add(jet_class(nu1, L), L)
            two = support_of_module(twist_action(nu1, twist_action(nu2, base)), M.generator())
            assert two == support_of_module(twist_action(nu1 + nu2, base), M.generator())
