"""Lattice vertex operators as exact truncated formal distributions.

    V^gamma(z) = exp(sum_{n>0} h^gamma_{-n} z^n / n) * shift(gamma)
                 * exp(-sum_{n>0} h^gamma_n z^-n / n) * kappa * z^{h^gamma_0}

kappa = (-1)^{h^gamma_0} is the sign part of (-z)^{h_0}; momenta lie in
Gamma^dual, so h^gamma_0 is an integer on every module built here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import CocycleMismatch, ConfigError, TruncationError
from .fock import FockSpace, FockVector, apply_h
from .lattice import SignCocycle, commutator_sign, dot


@dataclass
class VertexExpansion:
    """sum_q terms[q] z^q, exact for exponents <= hi; zero below lo."""

    space: FockSpace
    terms: dict
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        self.terms = {q: v for q, v in self.terms.items() if v}

    @property
    def window(self):
        return (self.lo, self.hi)

    def __getitem__(self, q):
        if q > self.hi:
            raise TruncationError("exponent %s beyond certified window %s" % (q, self.window))
        return self.terms.get(q) or FockVector(self.space)

    def exponents(self):
        return sorted(self.terms)

    def is_zero(self):
        return not self.terms

    def leading(self):
        if not self.terms:
            return None, FockVector(self.space)
        q = min(self.terms)
        return q, self.terms[q]

    def restrict(self, lo=None, hi=None):
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else min(hi, self.hi)
        return VertexExpansion(
            self.space, {q: v for q, v in self.terms.items() if lo <= q <= hi}, lo, hi
        )

    def __sub__(self, other):
        hi = min(self.hi, other.hi)
        lo = min(self.lo, other.lo)
        qs = {q for q in self.terms if q <= hi} | {q for q in other.terms if q <= hi}
        return VertexExpansion(self.space, {q: self[q] - other[q] for q in qs}, lo, hi)

    def map(self, op):
        return VertexExpansion(
            self.space, {q: op(v) for q, v in self.terms.items()}, self.lo, self.hi
        )

    def to_json(self):
        return {
            "window": [_num(self.lo), _num(self.hi)],
            "terms": [[_num(q), self.terms[q].to_json()] for q in self.exponents()],
        }


def _num(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)


def _exp_coefficients(op_n, v, kmax, sign):
    """[A_0 v, ..., A_kmax v] for A = exp(sign * sum_{n>0} X_n z^(+-n) / n).

    Uses k A_k = sign * sum_{n=1}^k X_n A_{k-n}, valid since the X_n commute.
    Stops early once the tail vanishes for annihilators.
    """
    out = [v]
    for k in range(1, kmax + 1):
        acc = FockVector(v.space)
        for n in range(1, k + 1):
            prev = out[k - n]
            if prev:
                acc = acc + op_n(n, prev)
        out.append(acc * Fraction(sign, k))
    return out


def h0_eigen(space, gamma, ket):
    s = dot(gamma, space.momentum(ket))
    if Fraction(s).denominator != 1:
        raise ConfigError(
            "h0 eigenvalue %s is not integral; offsets must lie in Gamma^dual" % s
        )
    return int(s)


def vertex_apply(gamma, v, window, eps, drop_creation=()):
    """Coefficients of V^gamma(z) v for every exponent <= window[1].

    Everything below the natural floor vanishes, so the returned window's
    ``lo`` is min(requested lo, floor).  ``drop_creation`` removes the named
    h_{-n} terms from the creation exponential; it exists only to build
    deliberately broken operators for negative controls.
    """
    space = v.space
    gamma = space.lattice.check(gamma)
    lo_req, hi = window
    lo_req, hi = Fraction(lo_req), Fraction(hi)
    drop = set(drop_creation)

    def annih(n, w):
        return apply_h(gamma, n, w)

    def creat(n, w):
        if n in drop:
            return FockVector(w.space)
        return apply_h(gamma, -n, w)

    terms = {}
    floor = None
    by_ket = {}
    for ket, c in v.terms.items():
        by_ket.setdefault(h0_eigen(space, gamma, ket), {})[ket] = c
    for s, kets in by_ket.items():
        part = FockVector(space, kets)
        depth = max(sum(n for n, _ in k[0]) for k in kets)
        minus = _exp_coefficients(annih, part, depth, -1)
        kappa = -1 if s % 2 else 1
        for km, vec in enumerate(minus):
            if not vec:
                continue
            base = s - km
            floor = base if floor is None else min(floor, base)
            if base > hi:
                continue
            shifted = FockVector(space)
            for (modes, charge), cc in vec.terms.items():
                nk = (modes, tuple(a + b for a, b in zip(gamma, charge)))
                space._guard(nk)
                shifted = shifted + FockVector(space, {nk: cc * eps(gamma, charge) * kappa})
            kplus = int(hi - base)
            plus = _exp_coefficients(creat, shifted, kplus, 1)
            for kp, w in enumerate(plus):
                if w:
                    q = base + kp
                    terms[q] = terms[q] + w if q in terms else w
    if floor is None:
        floor = lo_req
    return VertexExpansion(space, terms, Fraction(min(lo_req, floor)), hi)


def modified_vertex_apply(gamma, v, window, eps):
    """exp(-sum h^gamma_{-n} z^n/n) V^gamma(z) v = shift * E_-(z) * kappa z^{h0} v.

    This expansion is finite in z.
    """
    space = v.space
    gamma = space.lattice.check(gamma)
    lo_req, hi = Fraction(window[0]), Fraction(window[1])
    terms = {}
    floor = lo_req
    for ket, c in v.terms.items():
        s = h0_eigen(space, gamma, ket)
        part = FockVector(space, {ket: c})
        depth = sum(n for n, _ in ket[0])
        minus = _exp_coefficients(lambda n, w: apply_h(gamma, n, w), part, depth, -1)
        kappa = -1 if s % 2 else 1
        for km, vec in enumerate(minus):
            if not vec:
                continue
            q = s - km
            floor = min(floor, q)
            if q > hi:
                continue
            out = FockVector(space)
            for (modes, charge), cc in vec.terms.items():
                nk = (modes, tuple(a + b for a, b in zip(gamma, charge)))
                out = out + FockVector(space, {nk: cc * eps(gamma, charge) * kappa})
            terms[q] = terms[q] + out if q in terms else out
    return VertexExpansion(space, terms, Fraction(floor), hi)


def ope_leading(space, gamma1, gamma2, eps):
    """(leading exponent, top coefficient) of V^gamma1(z) e^gamma2."""
    e2 = space.vacuum(gamma2)
    floor = h0_eigen(space, gamma1, ((), tuple(gamma2)))
    exp = vertex_apply(gamma1, e2, (floor, floor), eps)
    return exp.leading()


def top_scalar(space, gamma1, gamma2, eps):
    q, vec = ope_leading(space, gamma1, gamma2, eps)
    target = ((), tuple(a + b for a, b in zip(gamma1, gamma2)))
    if set(vec.terms) != {target}:
        raise CocycleMismatch("top coefficient is not on the e^(g1+g2) line", (gamma1, gamma2))
    return q, vec.terms[target]


def ode_residual(gamma, tests, window, eps, op=None):
    """LHS - RHS of z d/dz V = sum_{n>0} h_{-n} V z^n + sum_{n>=0} V h_n z^-n.

    ``op(v, hi)`` computes V^gamma(z) v up to exponent hi; defaults to
    :func:`vertex_apply`.  Returns one residual expansion per test vector.
    """
    lo, hi = Fraction(window[0]), Fraction(window[1])
    if op is None:
        op = lambda v, top: vertex_apply(gamma, v, (lo, top), eps)  # noqa: E731
    out = []
    for v in tests:
        V = op(v, hi)
        rhs_terms = {}
        depth = max((sum(n for n, _ in k[0]) for k in v.terms), default=0)
        # V h_n z^-n, n >= 0; h_n v = 0 once n exceeds the mode weight
        for n in range(0, depth + 1):
            hv = apply_h(gamma, n, v)
            if not hv:
                continue
            for q, w in op(hv, hi + n).terms.items():
                qq = q - n
                if lo <= qq <= hi:
                    rhs_terms[qq] = rhs_terms[qq] + w if qq in rhs_terms else w
        res = {}
        for q in V.terms:
            if lo <= q <= hi:
                res[q] = V.terms[q] * q
        for q, w in list(V.terms.items()):
            for m in range(1, int(hi - q) + 1):
                if lo <= q + m <= hi:
                    hw = apply_h(gamma, -m, w)
                    qq = q + m
                    rhs_terms[qq] = rhs_terms[qq] + hw if qq in rhs_terms else hw
        for q, w in rhs_terms.items():
            res[q] = res[q] - w if q in res else -w
        out.append((v, VertexExpansion(v.space, res, lo, hi)))
    return out


@dataclass
class LocalityResidual:
    """Coefficients of (z-w)^N [V1(z)V2(w) - s V2(w)V1(z)] v keyed by (w-exp, z-exp)."""

    terms: dict
    box: tuple
    N: int
    sign: int
    meta: dict = field(default_factory=dict)

    def is_zero(self):
        return not self.terms

    def witness(self):
        if not self.terms:
            return None
        key = min(self.terms)
        return key, self.terms[key]


def koszul_sign(lattice, gamma1, gamma2):
    return -1 if (lattice.pairing(gamma1, gamma1) * lattice.pairing(gamma2, gamma2)) % 2 else 1


def locality_residual(gamma1, gamma2, N, v, order, eps, sign=None):
    """Check mutual locality of V^gamma1, V^gamma2 on v coefficientwise.

    The box is z-exponents within ``order`` of <gamma1, p> and w-exponents
    within ``order`` of <gamma2, p>, p the momentum of v (v homogeneous).
    """
    space = v.space
    L = space.lattice
    if sign is None:
        sign = koszul_sign(L, gamma1, gamma2)
    moms = {space.momentum(k) for k in v.terms}
    if len(moms) != 1:
        raise ConfigError("locality test vectors must have a single momentum")
    p = moms.pop()
    a0, b0 = dot(gamma1, p), dot(gamma2, p)
    a_lo, a_hi = a0 - order, a0 + order
    b_lo, b_hi = b0 - order, b0 + order

    # P[(b, a)] from V1(z) V2(w) v, Q[(b, a)] from V2(w) V1(z) v
    P, Q = {}, {}
    V2 = vertex_apply(gamma2, v, (b_lo - N, b_hi), eps)
    for b, w in V2.terms.items():
        for a, x in vertex_apply(gamma1, w, (a_lo - N, a_hi), eps).terms.items():
            P[(b, a)] = x
    V1 = vertex_apply(gamma1, v, (a_lo - N, a_hi), eps)
    for a, w in V1.terms.items():
        for b, x in vertex_apply(gamma2, w, (b_lo - N, b_hi), eps).terms.items():
            Q[(b, a)] = x
    zero = FockVector(space)
    res = {}
    for b in range(int(b_lo), int(b_hi) + 1):
        for a in range(int(a_lo), int(a_hi) + 1):
            acc = zero
            for j in range(N + 1):
                key = (b - j, a - N + j)
                diff = P.get(key, zero) - Q.get(key, zero) * sign
                if diff:
                    acc = acc + diff * (comb(N, j) * (-1) ** j)
            if acc:
                res[(b, a)] = acc
    return LocalityResidual(res, ((b_lo, b_hi), (a_lo, a_hi)), N, sign)


def cocycle_roundtrip(lattice, eps, radius=1):
    """Rebuild the sign table from OPE top coefficients.

    The top scalar of V^{b_i}(z) e^{b_j} is eps(b_i, b_j) (-1)^{c_ij}; removing
    the (symmetric) kappa sign gives the basis table back.  The commutator of
    the reconstructed top scalars is then compared with
    (-1)^{c(a,b) + c(a,a) c(b,b)} on the box; a mismatch raises with a witness.
    """
    lattice.require_nondegenerate()
    space = FockSpace(lattice)
    r = lattice.rank
    basis = lattice.basis()
    table = []
    for i in range(r):
        row = []
        for j in range(r):
            q, mu = top_scalar(space, basis[i], basis[j], eps)
            kappa = -1 if q % 2 else 1
            row.append(int(mu * kappa))
        table.append(row)
    rebuilt = SignCocycle(table)
    box = lattice.box(radius)
    tops = {}
    for g1 in box:
        for g2 in box:
            tops[(g1, g2)] = top_scalar(space, g1, g2, eps)[1]
    for g1 in box:
        for g2 in box:
            comm = tops[(g1, g2)] / tops[(g2, g1)]
            if comm != commutator_sign(lattice, g1, g2):
                raise CocycleMismatch(
                    "OPE commutator %s != (-1)^(c(g1,g2)+c(g1,g1)c(g2,g2)) at %r"
                    % (comm, (g1, g2)),
                    (g1, g2),
                )
    return rebuilt
