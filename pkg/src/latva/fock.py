"""Gamma^dual-graded Fock space: Heisenberg modes, shift operators, Sugawara L_n.

A ket is ``(modes, charge)``: ``modes`` is a sorted tuple of pairs ``(n, i)``
standing for the creation operator h^{b_i}_{-n}, ``charge`` is a lattice
vector.  A :class:`FockSpace` fixes the lattice and the momentum offset mu
(zero for the vertex algebra itself); the h_0 momentum of a ket is
c(charge) + mu.

Virasoro convention: L_0 e^gamma = +1/2 c(gamma, gamma) e^gamma and
L_-1 e^gamma = h^gamma_-1 e^gamma.  The geometric operators t^(a+1) d/dt are
the negatives of these.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ConfigError, TruncationError
from .lattice import dot, mat_vec

Ket = tuple  # (modes, charge)


def _insert(modes, pair):
    lst = list(modes)
    lst.append(pair)
    lst.sort()
    return tuple(lst)


def _remove(modes, pair):
    lst = list(modes)
    lst.remove(pair)
    return tuple(lst)


def colored_partitions(total, colors, max_part=None):
    """Multisets of (n, i), n >= 1, 0 <= i < colors, with sum of n == total.

    Each multiset is a sorted tuple.
    """
    if total == 0:
        yield ()
        return
    if max_part is None:
        max_part = (total, colors - 1)
    n0, i0 = max_part
    for n in range(min(n0, total), 0, -1):
        top = i0 if n == n0 else colors - 1
        for i in range(top, -1, -1):
            for rest in colored_partitions(total - n, colors, (n, i)):
                yield tuple(sorted(rest + ((n, i),)))


class FockSpace:
    """Fock module over a lattice with fixed momentum offset."""

    def __init__(self, lattice, offset=None, cutoff=None):
        self.lattice = lattice
        if offset is None:
            offset = (0,) * lattice.rank
        if len(offset) != lattice.rank:
            raise ConfigError("offset has wrong length")
        self.offset = tuple(Fraction(x) for x in offset)
        self.cutoff = cutoff
        self._cache = {}

    def __eq__(self, other):
        return (
            isinstance(other, FockSpace)
            and self.lattice == other.lattice
            and self.offset == other.offset
        )

    def __hash__(self):
        return hash((self.lattice, self.offset))

    def __repr__(self):
        return "FockSpace(%r, offset=%r)" % (self.lattice.gram, self.offset)

    def with_cutoff(self, cutoff):
        return FockSpace(self.lattice, self.offset, cutoff)

    # -- ket data ------------------------------------------------------
    def momentum(self, ket):
        c = self.lattice.to_dual(ket[1])
        return tuple(x + m for x, m in zip(c, self.offset))

    def charge_weight(self, charge):
        mom = tuple(x + m for x, m in zip(self.lattice.to_dual(charge), self.offset))
        if not any(self.offset):
            return Fraction(self.lattice.pairing(charge, charge), 2)
        return Fraction(self.lattice.dual_norm(mom)) / 2

    def weight(self, ket):
        return sum(n for n, _ in ket[0]) + self.charge_weight(ket[1])

    def parity(self, ket):
        return self.lattice.parity(ket[1])

    def vacuum(self, charge=None, coeff=1):
        charge = self.lattice.zero() if charge is None else self.lattice.check(charge)
        return FockVector(self, {((), tuple(charge)): coeff})

    def ket(self, modes, charge, coeff=1):
        modes = tuple(sorted((int(n), int(i)) for n, i in modes))
        if any(n < 1 or not 0 <= i < self.lattice.rank for n, i in modes):
            raise ConfigError("bad creation modes %r" % (modes,))
        return FockVector(self, {(modes, tuple(self.lattice.check(charge))): coeff})

    def basis(self, max_weight, charges=None):
        """All kets of weight <= max_weight (positive definite level)."""
        L = self.lattice
        center = mat_vec(L.inverse, self.offset) if any(self.offset) else None
        if charges is None:
            charges = L.vectors_of_norm_at_most(max_weight, center)
        out = []
        for g in charges:
            g = tuple(g)
            cw = self.charge_weight(g)
            if cw > max_weight:
                continue
            room = max_weight - cw
            for m in range(0, int(room) + 1):
                for modes in colored_partitions(m, L.rank):
                    out.append((modes, g))
        out.sort(key=lambda k: (self.weight(k), k[1], k[0]))
        return out

    def _guard(self, ket):
        if self.cutoff is not None and self.weight(ket) > self.cutoff:
            raise TruncationError(
                "ket of weight %s exceeds cutoff %s" % (self.weight(ket), self.cutoff)
            )
        return ket

    # -- ket-level operators -----------------------------------------
    def h_ket(self, alpha, n, ket):
        """h^alpha_n on a single ket -> dict ket -> coefficient."""
        key = ("h", alpha, n, ket)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        modes, charge = ket
        out = {}
        if n < 0:
            for i, a in enumerate(alpha):
                if a:
                    k = (self._guard((_insert(modes, (-n, i)), charge)))
                    out[k] = out.get(k, 0) + Fraction(a)
        elif n == 0:
            val = dot(alpha, self.momentum(ket))
            if val:
                out[ket] = Fraction(val)
        else:
            calpha = mat_vec(self.lattice.gram, alpha)
            seen = set()
            for pair in modes:
                if pair[0] != n or pair in seen:
                    continue
                seen.add(pair)
                mult = modes.count(pair)
                coeff = n * calpha[pair[1]] * mult
                if coeff:
                    k = (_remove(modes, pair), charge)
                    out[k] = out.get(k, 0) + Fraction(coeff)
        out = {k: c for k, c in out.items() if c}
        self._cache[key] = out
        return out

    def L_ket(self, n, ket):
        key = ("L", n, ket)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        L = self.lattice
        cinv = L.inverse
        r = L.rank
        modes = ket[0]
        right = {0} | {m for m, _ in modes}
        ks = set()
        for q in right:
            ks.add(n - q)
            ks.add(q)
        ks.update(range(n + 1, 0))
        basis = L.basis()
        out = {}
        for k in sorted(ks):
            l = n - k
            if l < 0 and k >= 0:
                first, second = k, l  # apply h_k first, then h_l
                order = "swap"
            else:
                first, second = l, k
                order = "plain"
            for i in range(r):
                for j in range(r):
                    w = cinv[i][j]
                    if not w:
                        continue
                    # :h^{b_i}_k h^{b_j}_l:
                    if order == "plain":
                        a1, a2 = basis[j], basis[i]
                    else:
                        a1, a2 = basis[i], basis[j]
                    for k1, c1 in self.h_ket(a1, first, ket).items():
                        for k2, c2 in self.h_ket(a2, second, k1).items():
                            out[k2] = out.get(k2, 0) + c1 * c2 * w / 2
        out = {k: c for k, c in out.items() if c}
        self._cache[key] = out
        return out


class FockVector:
    """Finite rational combination of kets in a :class:`FockSpace`."""

    __slots__ = ("space", "terms")

    def __init__(self, space, terms=None):
        self.space = space
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    def _same(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        if other.space != self.space:
            raise ConfigError("vectors live in different Fock spaces")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return FockVector(self.space, out)

    def __sub__(self, other):
        return self + other * -1

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar):
        if isinstance(scalar, FockVector):
            return NotImplemented
        s = Fraction(scalar)
        return FockVector(self.space, {k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def zero(self):
        return FockVector(self.space)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, ket):
        return self.terms.get(ket, Fraction(0))

    def weights(self):
        return sorted({self.space.weight(k) for k in self.terms})

    def max_weight(self):
        return max((self.space.weight(k) for k in self.terms), default=Fraction(0))

    def map_kets(self, fn):
        """Linear extension of ``fn: ket -> dict``."""
        out = {}
        for k, c in self.terms.items():
            for k2, c2 in fn(k).items():
                out[k2] = out.get(k2, 0) + c * c2
        return FockVector(self.space, out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kc: (kc[0][1], kc[0][0]))

    def to_json(self):
        return [
            {
                "modes": [list(p) for p in modes],
                "charge": list(charge),
                "coeff": [c.numerator, c.denominator],
            }
            for (modes, charge), c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, space, data):
        out = FockVector(space)
        for item in data:
            num, den = item.get("coeff", [1, 1])
            out = out + space.ket(item.get("modes", []), item["charge"], Fraction(num, den))
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (modes, charge), c in self.sorted_terms():
            ops = "".join("h%d_%d " % (i + 1, -n) for n, i in modes)
            parts.append("%s*%s|%s>" % (c, ops, ",".join(map(str, charge))))
        return " + ".join(parts)

    __repr__ = __str__


def _direction(space, alpha):
    # integral entries as ints: cheaper to hash in the operator cache
    alpha = tuple(int(a) if Fraction(a).denominator == 1 else Fraction(a) for a in alpha)
    if len(alpha) != space.lattice.rank:
        raise ConfigError("direction %r has wrong length" % (alpha,))
    return alpha


def apply_h(alpha, n, v):
    """Heisenberg mode h^alpha_n; alpha in Gamma (x) Q."""
    space = v.space
    alpha = _direction(space, alpha)
    return v.map_kets(lambda k: space.h_ket(alpha, n, k))


def apply_shift(gamma, v, eps):
    """Charge translation: (modes, g2) -> eps(gamma, g2) (modes, gamma + g2)."""
    gamma = v.space.lattice.check(gamma)
    out = {}
    for (modes, g2), c in v.terms.items():
        k = (modes, tuple(a + b for a, b in zip(gamma, g2)))
        v.space._guard(k)
        out[k] = out.get(k, 0) + c * eps(gamma, g2)
    return FockVector(v.space, out)


def sugawara_L(n, v):
    """Virasoro L_n from the quadratic Heisenberg construction."""
    space = v.space
    space.lattice.require_nondegenerate()
    return v.map_kets(lambda k: space.L_ket(n, k))


def ket_parity(space, ket):
    return space.parity(ket)
