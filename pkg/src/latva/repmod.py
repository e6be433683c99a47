"""Irreducible modules presented by a momentum offset, and their certificates.

Classes of Gamma^dual / c(Gamma) label the modules; the chosen section
(least nonnegative Smith representative) turns a class into an offset.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import ConfigError
from .fock import FockSpace, FockVector, apply_h
from .lattice import dot, dual_quotient
from .vertexop import _exp_coefficients, h0_eigen, modified_vertex_apply, vertex_apply


@dataclass
class InducedModule:
    lattice: object
    chi: tuple
    offset: tuple
    cutoff: int
    space: FockSpace = field(repr=False)

    def basis(self):
        return self.space.basis(self.cutoff)

    def graded_dimension(self):
        return dict(sorted(Counter(self.space.weight(k) for k in self.basis()).items()))

    def generator(self):
        return self.space.vacuum()

    def basis_vectors(self, max_weight=None):
        W = self.cutoff if max_weight is None else max_weight
        return [FockVector(self.space, {k: 1}) for k in self.space.basis(W)]


def module_classes(L):
    L.require_nondegenerate()
    return dual_quotient(L).classes()


def build_module(L, chi, cutoff, representative=None):
    """Module for the class chi, offset s(chi) (or an explicit representative)."""
    L.require_nondegenerate()
    dq = dual_quotient(L)
    chi = tuple(chi)
    if representative is None:
        offset = dq.section(chi)
    else:
        offset = tuple(int(x) for x in L.check(representative))
        if dq.project(offset) != tuple(k % d for k, (_, d) in zip(chi, dq._moduli)):
            raise ConfigError("representative %r is not in class %r" % (offset, chi))
    return InducedModule(L, chi, offset, cutoff, FockSpace(L, offset))


@dataclass
class NilpotencyReport:
    direction: tuple
    max_index: dict  # n -> largest k with (h_n)^(k-1) ket != 0, i.e. killing power
    bound_ok: bool
    failures: list

    @property
    def ok(self):
        return self.bound_ok and not self.failures


def _killing_power(alpha, n, v, limit):
    """Smallest k <= limit with (h^alpha_n)^k v = 0, else None."""
    w = v
    for k in range(1, limit + 1):
        w = apply_h(alpha, n, w)
        if not w:
            return k
    return None


def nilpotency_certificate(M, gamma, W=None, modes=None):
    """(h^gamma_n)^(floor(W/n)+1) kills every basis ket of weight <= W."""
    W = M.cutoff if W is None else W
    modes = range(1, W + 1) if modes is None else modes
    free = FockSpace(M.lattice, M.offset)
    max_index = {}
    failures = []
    for ket in free.basis(W):
        v = FockVector(free, {ket: 1})
        for n in modes:
            if n <= 0:
                limit = W + 1
                k = _killing_power(gamma, n, v, limit)
                if k is None:
                    failures.append(("non-nilpotent", n, ket))
                continue
            bound = W // n + 1
            k = _killing_power(gamma, n, v, bound)
            if k is None:
                failures.append(("bound", n, ket))
            else:
                max_index[n] = max(max_index.get(n, 0), k)
    bound_ok = all(k <= W // n + 1 for n, k in max_index.items())
    return NilpotencyReport(tuple(gamma), max_index, bound_ok, failures)


def h0_spectrum(M, alpha):
    """Eigenvalue multiset of h^alpha_0 on the weight <= cutoff truncation."""
    return Counter(dot(alpha, M.space.momentum(k)) for k in M.basis())


def spectrum_coset_ok(M, alpha, spectrum):
    """Every eigenvalue lies in <alpha, s(chi)> + <alpha, c(Gamma)>."""
    base = dot(alpha, M.offset)
    calpha = M.lattice.to_dual(alpha)
    g = 0
    for x in calpha:
        g = gcd(g, int(x))
    for lam in spectrum:
        d = Fraction(lam - base)
        if g == 0:
            if d != 0:
                return False
        elif d.denominator != 1 or d.numerator % g:
            return False
    return True


def vbar_properties(M, gamma, eps, max_weight=4, modes=range(-3, 4)):
    """Check the three properties of the modified vertex operator.

    Returns a dict property -> list of witnesses (empty means it holds).
    """
    L = M.lattice
    tests = M.basis_vectors(max_weight)
    HI = 10 ** 6
    cgg = L.pairing(gamma, gamma)
    out = {"commutes_positive": [], "covariance_nonpositive": [], "ode": [], "definition": []}

    def vbar(v):
        return modified_vertex_apply(gamma, v, (0, HI), eps)

    for v in tests:
        Vv = vbar(v)
        for gp in L.basis():
            cg = L.pairing(gamma, gp)
            for n in modes:
                lhs = Vv.map(lambda w: apply_h(gp, n, w))
                rhs = vbar(apply_h(gp, n, v))
                shift = n if n <= 0 else None
                qs = set(lhs.terms) | set(rhs.terms)
                if shift is not None:
                    qs |= {q + shift for q in Vv.terms}
                for q in sorted(qs):
                    d = lhs[q] - rhs[q]
                    if shift is not None:
                        d = d - Vv[q - shift] * cg
                    if d:
                        key = "commutes_positive" if n > 0 else "covariance_nonpositive"
                        out[key].append((v.sorted_terms()[0][0], gp, n, q))
                        break
        # z d/dz Vbar v = Vbar(sum_{n>=0} h_n z^-n v) = (sum h_n z^-n - c(g,g)) Vbar v
        depth = max(sum(n for n, _ in k[0]) for k in v.terms)
        right = {}
        left = {}
        for n in range(0, depth + 1):
            for q, w in vbar(apply_h(gamma, n, v)).terms.items():
                right[q - n] = right[q - n] + w if q - n in right else w
        for q, w in Vv.terms.items():
            for n in range(0, depth + 1):
                hw = apply_h(gamma, n, w)
                if hw:
                    left[q - n] = left[q - n] + hw if q - n in left else hw
            left[q] = left[q] - w * cgg if q in left else -w * cgg
        for q in set(Vv.terms) | set(right) | set(left):
            a = Vv[q] * q
            if a != right.get(q, a.zero()) or a != left.get(q, a.zero()):
                out["ode"].append((v.sorted_terms()[0][0], q))
        # independent route: exp(-sum h_{-n} z^n / n) applied to V(z) v
        top = max(Vv.terms, default=0) + 3
        V = vertex_apply(gamma, v, (Vv.lo, top), eps)
        recon = {}
        for q, w in V.terms.items():
            inv_plus = _exp_coefficients(lambda n, x: apply_h(gamma, -n, x), w, int(top - q), -1)
            for k, x in enumerate(inv_plus):
                if x:
                    recon[q + k] = recon[q + k] + x if q + k in recon else x
        for q in set(recon) | set(Vv.terms):
            if q <= top and recon.get(q, Vv[q].zero()) != Vv[q]:
                out["definition"].append((v.sorted_terms()[0][0], q))
    return out


def reconstruct_shift(gamma, v, eps):
    """Shift operator rebuilt as Vtilde^gamma(z) (-z)^(-h_0).

    Vtilde = Vbar exp(sum h_n z^-n / n).  The result must be independent of
    z; a z-dependent result raises ConfigError.
    """
    space = v.space
    out = {}
    for ket, c in v.terms.items():
        s = h0_eigen(space, gamma, ket)
        sign = -1 if s % 2 else 1
        depth = sum(n for n, _ in ket[0])
        w = FockVector(space, {ket: c * sign})
        plus = _exp_coefficients(lambda n, x: apply_h(gamma, n, x), w, depth, 1)
        for k, x in enumerate(plus):
            if not x:
                continue
            vb = modified_vertex_apply(gamma, x, (0, 10 ** 6), eps)
            for q, y in vb.terms.items():
                # z^-k from the exponential, z^-s from (-z)^-h0
                e = q - k - s
                out[e] = out[e] + y if e in out else y
    out = {e: y for e, y in out.items() if y}
    if set(out) - {0}:
        raise ConfigError("reconstructed shift depends on z: exponents %r" % sorted(out))
    return out.get(0, FockVector(space))
