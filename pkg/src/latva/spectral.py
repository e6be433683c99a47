"""Connection jets, the twist of the Heisenberg action, gauge moves and supports.

A jet nu = sum_{n>=0} lambda_n t^(-n-1) dt pairs with a = alpha t^n through
Res(a nu) = <lambda_n, alpha>.  Twisting by nu shifts h^alpha_n by that
scalar.  The support of a module is read from the joint eigenvalues of the
annihilation modes on a generating vector.

Residues are split against the fundamental domain [0, 1)^r of Gamma^dual:
residue = floor part + fractional part.  The fractional part is the class in
t^dual / Gamma^dual; the floor part's class in Gamma^dual / c(Gamma) is the
central character.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, NotEigenvectorError
from .fock import apply_h
from .laurent import QQ, dlog, parse_series
from .lattice import dot, dual_quotient


def _cov(x):
    return tuple(Fraction(a) for a in x)


@dataclass(frozen=True)
class ConnectionJet:
    """Polar part of a t^dual-valued 1-form: {n: lambda_n}."""

    rank: int
    polar: tuple  # sorted ((n, covector), ...), no zero covectors

    @classmethod
    def from_dict(cls, rank, data):
        out = {}
        for n, cov in dict(data).items():
            n = int(n)
            if n < 0:
                raise ConfigError("polar index must be >= 0")
            cov = _cov(cov)
            if len(cov) != rank:
                raise ConfigError("covector %r has wrong length" % (cov,))
            if any(cov):
                out[n] = cov
        return cls(rank, tuple(sorted(out.items())))

    @classmethod
    def zero(cls, rank):
        return cls(rank, ())

    @classmethod
    def parse(cls, rank, text):
        """JSON ``[[n, [..]], ...]`` or, for rank 1, a series literal like ``1/2*t^-1 + t^-2``."""
        text = text.strip()
        if text.startswith("["):
            data = json.loads(text)
            return cls.from_dict(rank, {n: [Fraction(str(x)) for x in cov] for n, cov in data})
        if rank != 1:
            raise ConfigError("series-literal jets are rank 1 only; use [[n, covector], ...]")
        f = parse_series(text, QQ)
        bad = [k for k in f.coeffs if k >= 0]
        if bad:
            raise ConfigError("jet literal must be polar (only t^-1, t^-2, ...)")
        return cls.from_dict(1, {-k - 1: [c.constant] for k, c in f.coeffs.items()})

    def to_json(self):
        return [[n, [str(x) for x in cov]] for n, cov in self.polar]

    def lam(self, n):
        return dict(self.polar).get(n, (Fraction(0),) * self.rank)

    def pairing(self, alpha, n):
        """Res(alpha t^n nu)."""
        if n < 0:
            return Fraction(0)
        return dot(self.lam(n), alpha)

    @property
    def degree(self):
        return max((n for n, _ in self.polar), default=-1)

    def __add__(self, other):
        out = dict(self.polar)
        for n, cov in other.polar:
            out[n] = tuple(a + b for a, b in zip(out.get(n, (0,) * self.rank), cov))
        return ConnectionJet.from_dict(self.rank, out)

    def __neg__(self):
        return ConnectionJet.from_dict(self.rank, {n: [-x for x in c] for n, c in self.polar})


@dataclass(frozen=True)
class SpectralPoint:
    irregular: tuple  # ((n, covector), ...) for n >= 1
    residue: tuple
    residue_class: tuple
    central_character: tuple

    @classmethod
    def from_coefficients(cls, lattice, coeffs):
        """coeffs: {n: covector} for n >= 0."""
        rank = lattice.rank
        res = _cov(coeffs.get(0, (0,) * rank))
        floor = tuple(math.floor(x) for x in res)
        frac = tuple(x - f for x, f in zip(res, floor))
        irr = tuple(sorted((n, _cov(c)) for n, c in coeffs.items() if n >= 1 and any(c)))
        if lattice.nondegenerate:
            chi = dual_quotient(lattice).project(floor)
        else:
            chi = floor
        return cls(irr, res, frac, chi)

    def add(self, other, lattice):
        coeffs = dict(self.irregular)
        for n, c in other.irregular:
            coeffs[n] = tuple(a + b for a, b in zip(coeffs.get(n, (0,) * len(c)), c))
        coeffs[0] = tuple(a + b for a, b in zip(self.residue, other.residue))
        return SpectralPoint.from_coefficients(lattice, coeffs)

    def to_json(self):
        return {
            "irregular": [[n, [str(x) for x in c]] for n, c in self.irregular],
            "residue": [str(x) for x in self.residue],
            "residue_class": [str(x) for x in self.residue_class],
            "central_character": list(self.central_character),
        }


def jet_class(nu, lattice):
    """The spectral point of the jet itself."""
    return SpectralPoint.from_coefficients(lattice, dict(nu.polar))


class FockAction:
    """Untwisted Heisenberg action on a Fock space."""

    def __init__(self, space):
        self.space = space
        self.lattice = space.lattice

    def h(self, alpha, n, v):
        return apply_h(alpha, n, v)

    def twist_degree(self):
        return -1


class TwistedAction:
    """h^alpha_n -> h^alpha_n + <lambda_n, alpha> for n >= 0."""

    def __init__(self, base, nu):
        if nu.rank != base.lattice.rank:
            raise ConfigError("jet rank does not match lattice")
        self.base = base
        self.nu = nu
        self.space = base.space
        self.lattice = base.lattice

    def h(self, alpha, n, v):
        out = self.base.h(alpha, n, v)
        shift = self.nu.pairing(alpha, n)
        return out + v * shift if shift else out

    def twist_degree(self):
        return max(self.nu.degree, self.base.twist_degree())


def twist_action(nu, action):
    return TwistedAction(action, nu)


def sections_at_point(space, nu):
    """The point-supported module at nu: same space, nu-twisted action."""
    base = FockAction(space)
    if not nu.polar:
        return base
    return TwistedAction(base, nu)


def apply_gauge(coweight, units, nu):
    """nu + coweight dt/t + sum_beta beta * polar(dlog u_beta).

    ``units`` is a list of (covector beta, series u) with u(0) a unit; the
    regular part of dlog u dies in the polar quotient.
    """
    rank = nu.rank
    coweight = _cov(coweight)
    if len(coweight) != rank:
        raise ConfigError("coweight has wrong length")
    if any(x.denominator != 1 for x in coweight):
        raise ConfigError("coweight must be integral")
    shift = {0: coweight}
    for beta, u in units:
        beta = _cov(beta)
        if u.val != 0:
            raise ConfigError("gauge unit must have valuation 0 (got %s)" % u.val)
        dl = dlog(u)
        for k, c in dl.coeffs.items():
            if k < 0:
                if c.ring != QQ:
                    raise ConfigError("gauge units must have rational coefficients")
                n = -k - 1
                prev = shift.get(n, (Fraction(0),) * rank)
                shift[n] = tuple(p + b * c.constant for p, b in zip(prev, beta))
    return nu + ConnectionJet.from_dict(rank, shift)


def support_of_module(action, v, probe=None):
    """Spectral point read from the joint eigenvalues of h^{b_i}_n, n >= 0."""
    if not v:
        raise NotEigenvectorError("zero vector")
    L = action.lattice
    if probe is None:
        depth = max(sum(n for n, _ in k[0]) for k in v.terms)
        probe = max(action.twist_degree(), depth) + 2
    ref_ket, ref_c = v.sorted_terms()[0]
    coeffs = {}
    for n in range(0, probe + 1):
        cov = []
        for i, b in enumerate(L.basis()):
            w = action.h(b, n, v)
            lam = w.coefficient(ref_ket) / ref_c
            if w != v * lam:
                raise NotEigenvectorError(
                    "not a joint eigenvector: h^b%d_%d" % (i + 1, n), (i, n)
                )
            cov.append(lam)
        if any(cov) or n == 0:
            coeffs[n] = tuple(cov)
    return SpectralPoint.from_coefficients(L, coeffs)
