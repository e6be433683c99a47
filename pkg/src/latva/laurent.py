"""Exact truncated Laurent series over Q and over truncated nilpotent Q-algebras.

A series stores finitely many coefficients below a truncation exponent
``trunc``; coefficients at exponents ``>= trunc`` are unknown.  ``trunc`` may
be ``EXACT`` (infinity) for Laurent polynomials known exactly.  Every
operation propagates the truncation pessimistically and raises
:class:`TruncationError` instead of inventing coefficients.

1-forms ``f dt`` are represented by the series ``f``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from itertools import product as _cartesian

from .errors import (
    ConfigError,
    DomainError,
    NotInvertibleError,
    RingMismatchError,
    TruncationError,
)

EXACT = math.inf


class ScalarRing:
    """Q[e1, ..., ek] / (e1^d1, ..., ek^dk).

    With no generators this is the rational field.
    """

    __slots__ = ("names", "orders", "_table")

    def __init__(self, names=(), orders=None):
        names = tuple(names)
        if orders is None:
            orders = (2,) * len(names)
        orders = tuple(int(d) for d in orders)
        if len(orders) != len(names):
            raise ConfigError("one nilpotency order per generator")
        if any(d < 1 for d in orders):
            raise ConfigError("nilpotency orders must be >= 1")
        if len(set(names)) != len(names):
            raise ConfigError("duplicate generator names")
        self.names = names
        self.orders = orders
        self._table = None

    def product_table(self):
        """m1 -> {m2: m1*m2} over nonvanishing products of monomials."""
        if self._table is None:
            monos = self.monomials()
            table = {}
            for m1 in monos:
                row = {}
                for m2 in monos:
                    m = tuple(a + b for a, b in zip(m1, m2))
                    if all(e < d for e, d in zip(m, self.orders)):
                        row[m2] = m
                table[m1] = row
            self._table = table
        return self._table

    @classmethod
    def parse(cls, text):
        """``"e1:2,e2:3"`` -> ring; empty string -> Q."""
        text = (text or "").strip()
        if not text or text.upper() == "Q":
            return QQ
        names, orders = [], []
        for part in text.split(","):
            name, _, order = part.strip().partition(":")
            names.append(name.strip())
            orders.append(int(order) if order else 2)
        return cls(names, orders)

    def describe(self):
        if not self.names:
            return "Q"
        return ",".join("%s:%d" % (n, d) for n, d in zip(self.names, self.orders))

    def __eq__(self, other):
        return isinstance(other, ScalarRing) and (self.names, self.orders) == (
            other.names,
            other.orders,
        )

    def __hash__(self):
        return hash((self.names, self.orders))

    def __repr__(self):
        return "ScalarRing(%r, %r)" % (self.names, self.orders)

    @property
    def rank(self):
        return len(self.names)

    @property
    def nilpotency_degree(self):
        """Largest total degree of a nonzero monomial (m^(D+1) = 0)."""
        return sum(d - 1 for d in self.orders)

    @property
    def unit_monomial(self):
        return (0,) * len(self.names)

    def __call__(self, value):
        if isinstance(value, Scalar):
            if value.ring != self:
                raise RingMismatchError("scalar from %r used in %r" % (value.ring, self))
            return value
        q = Fraction(value)
        return Scalar(self, {self.unit_monomial: q} if q else {})

    def zero(self):
        return Scalar(self, {})

    def one(self):
        return Scalar(self, {self.unit_monomial: Fraction(1)})

    def gen(self, name):
        try:
            i = self.names.index(name)
        except ValueError:
            raise ConfigError("unknown generator %r" % name) from None
        if self.orders[i] == 1:
            return self.zero()
        mono = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return Scalar(self, {mono: Fraction(1)})

    def gens(self):
        return [self.gen(n) for n in self.names]

    def monomials(self):
        return list(_cartesian(*(range(d) for d in self.orders)))


QQ = ScalarRing()


class Scalar:
    """Element of a :class:`ScalarRing`, kept in reduced normal form."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {m: Fraction(c) for m, c in terms.items() if c}

    @classmethod
    def _raw(cls, ring, terms):
        """Trusted constructor: values are already nonzero Fractions."""
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingMismatchError("%r vs %r" % (self.ring, other.ring))
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring(other)
        return NotImplemented

    @property
    def constant(self):
        return self.terms.get(self.ring.unit_monomial, Fraction(0))

    def is_zero(self):
        return not self.terms

    def is_unit(self):
        return self.constant != 0

    def is_nilpotent(self):
        return self.constant == 0

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if set(self.terms) <= {self.ring.unit_monomial}:
            return hash(self.constant)
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                x = out[m] + c
                if x:
                    out[m] = x
                else:
                    del out[m]
            else:
                out[m] = c
        return Scalar._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        table = self.ring.product_table()
        out = {}
        for m1, c1 in self.terms.items():
            row = table[m1]
            for m2, c2 in other.terms.items():
                m = row.get(m2)
                if m is None:
                    continue
                x = c1 * c2
                out[m] = out[m] + x if m in out else x
        return Scalar._raw(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def inverse(self):
        a = self.constant
        if not a:
            raise NotInvertibleError("%s is not a unit" % self)
        # 1/(a(1+n)) = a^-1 sum (-n)^k, finite since n is nilpotent
        n = self * Fraction(1, a) - 1
        out = self.ring.one()
        power = self.ring.one()
        for _ in range(self.ring.nilpotency_degree):
            power = power * (-n)
            if power.is_zero():
                break
            out = out + power
        return out * Fraction(1, a)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.ring(other) * self.inverse()

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def reduce(self):
        """Augmentation: kill every nilpotent generator."""
        return self.constant

    def exp(self):
        """exp of a nilpotent scalar (finite sum)."""
        if not self.is_nilpotent():
            raise DomainError("exp needs a nilpotent scalar, got %s" % self)
        out = self.ring.one()
        power = self.ring.one()
        for k in range(1, self.ring.nilpotency_degree + 1):
            power = power * self * Fraction(1, k)
            if power.is_zero():
                break
            out = out + power
        return out

    def log(self):
        """log of 1 + nilpotent (finite sum)."""
        n = self - 1
        if not n.is_nilpotent():
            raise DomainError("log needs 1 + nilpotent, got %s" % self)
        out = self.ring.zero()
        power = self.ring.one()
        for k in range(1, self.ring.nilpotency_degree + 1):
            power = power * n
            if power.is_zero():
                break
            out = out + power * Fraction((-1) ** (k + 1), k)
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (sum(mc[0]), tuple(-e for e in mc[0])))

    def monomial_str(self, mono):
        parts = []
        for name, e in zip(self.ring.names, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append("%s^%d" % (name, e))
        return "*".join(parts)

    def __str__(self):
        return _join_terms(
            (c, self.monomial_str(m)) for m, c in self.sorted_terms()
        )

    def __repr__(self):
        return "Scalar(%s)" % self


def _join_terms(pairs):
    """Render (coefficient, monomial-string) pairs as a literal sum."""
    out = []
    for c, mono in pairs:
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono:
            body = mono if a == 1 else "%s*%s" % (a, mono)
        else:
            body = str(a)
        out.append((sign, body))
    if not out:
        return "0"
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += " %s %s" % (sign, body)
    return text


class TruncatedLaurentSeries:
    """sum_k coeffs[k] t^k, known exactly for exponents below ``trunc``."""

    __slots__ = ("ring", "coeffs", "trunc")

    def __init__(self, coeffs=None, trunc=EXACT, ring=QQ):
        if trunc != EXACT:
            trunc = int(trunc)
        self.ring = ring
        self.trunc = trunc
        out = {}
        for k, c in (coeffs or {}).items():
            k = int(k)
            if k >= trunc:
                continue
            c = ring(c)
            if c:
                out[k] = c
        self.coeffs = out

    # -- constructors -------------------------------------------------
    @classmethod
    def monomial(cls, k, coeff=1, trunc=EXACT, ring=QQ):
        return cls({k: coeff}, trunc, ring)

    @classmethod
    def constant(cls, c, trunc=EXACT, ring=QQ):
        return cls({0: c}, trunc, ring)

    def with_trunc(self, trunc):
        """Forget every coefficient at or above ``trunc`` (never raises precision)."""
        return TruncatedLaurentSeries(self.coeffs, min(trunc, self.trunc), self.ring)

    # -- inspection ---------------------------------------------------
    @property
    def is_exact(self):
        return self.trunc == EXACT

    @property
    def lo(self):
        """Least stored exponent; ``trunc`` for a series known to vanish below it."""
        return min(self.coeffs) if self.coeffs else self.trunc

    @property
    def val(self):
        """Numerical valuation: least exponent with a unit coefficient, or None."""
        units = [k for k, c in self.coeffs.items() if c.is_unit()]
        return min(units) if units else None

    def __getitem__(self, k):
        if k >= self.trunc:
            raise TruncationError("coefficient t^%d unknown (trunc %s)" % (k, self.trunc))
        return self.coeffs.get(k, self.ring.zero())

    def is_zero(self):
        return not self.coeffs

    def part(self, lo=None, hi=None):
        """Exact piece with exponents in [lo, hi)."""
        lo = -math.inf if lo is None else lo
        hi = EXACT if hi is None else hi
        if hi > self.trunc:
            raise TruncationError("part up to %s exceeds trunc %s" % (hi, self.trunc))
        return TruncatedLaurentSeries(
            {k: c for k, c in self.coeffs.items() if lo <= k < hi}, EXACT, self.ring
        )

    def reduce(self):
        """Kill nilpotents: image over Q."""
        return TruncatedLaurentSeries(
            {k: c.reduce() for k, c in self.coeffs.items()}, self.trunc, QQ
        )

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TruncatedLaurentSeries):
            if other.ring != self.ring:
                raise RingMismatchError("%r vs %r" % (self.ring, other.ring))
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return TruncatedLaurentSeries.constant(self.ring(other), EXACT, self.ring)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return TruncatedLaurentSeries(out, min(self.trunc, other.trunc), self.ring)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedLaurentSeries(
            {k: -c for k, c in self.coeffs.items()}, self.trunc, self.ring
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return series_mul(self, series_inv(other))

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return series_inv(self) ** (-k)
        out = TruncatedLaurentSeries.constant(1, EXACT, self.ring)
        for _ in range(k):
            out = series_mul(out, self)
        return out

    def shift(self, k):
        """Multiply by t^k."""
        return TruncatedLaurentSeries(
            {e + k: c for e, c in self.coeffs.items()}, self.trunc + k, self.ring
        )

    def derivative(self):
        return TruncatedLaurentSeries(
            {k - 1: c * k for k, c in self.coeffs.items() if k}, self.trunc - 1, self.ring
        )

    def __eq__(self, other):
        """Coefficientwise equality below the common truncation."""
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        bound = min(self.trunc, other.trunc)
        keys = {k for k in self.coeffs if k < bound} | {k for k in other.coeffs if k < bound}
        return all(self[k] == other[k] for k in keys)

    __hash__ = None

    def __str__(self):
        pairs = []
        for k in sorted(self.coeffs):
            tpart = "" if k == 0 else ("t" if k == 1 else "t^%d" % k)
            for m, c in self.coeffs[k].sorted_terms():
                mono = "*".join(x for x in (self.coeffs[k].monomial_str(m), tpart) if x)
                pairs.append((c, mono))
        body = _join_terms(pairs)
        if self.trunc != EXACT:
            body += " + O(t^%d)" % self.trunc
        return body

    def __repr__(self):
        return "TruncatedLaurentSeries(%s)" % self


Series = TruncatedLaurentSeries


# -- core operations -------------------------------------------------------


def _mul_cut(a, b, cut, orders=None):
    """Product of exponent->Scalar dicts, dropping exponents >= cut."""
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            e = i + j
            if e >= cut:
                continue
            p = x * y
            if p:
                out[e] = out[e] + p if e in out else p
    return {e: c for e, c in out.items() if c}


def series_mul(f, g):
    """Exact product; truncation min(f.trunc + lo(g), g.trunc + lo(f))."""
    if f.ring != g.ring:
        raise RingMismatchError("%r vs %r" % (f.ring, g.ring))
    trunc = min(f.trunc + g.lo, g.trunc + f.lo)
    return TruncatedLaurentSeries(_mul_cut(f.coeffs, g.coeffs, trunc), trunc, f.ring)


def _polar_depth(r):
    """How far products of polar terms of r can lower an exponent.

    Cancellation is ignored: we close the set of (exponent, monomial) pairs
    reachable by multiplying polar terms, dropping monomials that vanish.
    Every polar coefficient is nilpotent, so the closure is finite.
    """
    ring = r.ring
    polar = [(k, m) for k, c in r.coeffs.items() if k < 0 for m in c.terms]
    if not polar:
        return 0
    start = (0, ring.unit_monomial)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for e, m in frontier:
            for k, m2 in polar:
                prod = tuple(a + b for a, b in zip(m, m2))
                if any(x >= d for x, d in zip(prod, ring.orders)):
                    continue
                state = (e + k, prod)
                if state not in seen:
                    seen.add(state)
                    nxt.append(state)
        frontier = nxt
    return -min(e for e, _ in seen)


def _check_small(r, what):
    for k, c in r.coeffs.items():
        if k <= 0 and not c.is_nilpotent():
            raise DomainError(
                "%s: coefficient of t^%d is not nilpotent; series does not converge" % (what, k)
            )


def _apply_power_series(r, weights, prec):
    """sum_k weights(k) r^k for ``small`` r (positive exponents or nilpotent).

    Products are cut at the working bound W; terms dropped there can only be
    lowered by the polar depth afterwards, so the result is certified below
    W - depth.
    """
    drop = _polar_depth(r)
    W = r.trunc
    if W == EXACT:
        if all(c.is_nilpotent() for c in r.coeffs.values()):
            # at most (ring degree) nonzero factors in any product: finite sum
            W = r.ring.nilpotency_degree * max(max(r.coeffs, default=0), 0) + 1
            exact = True
        elif prec is None:
            raise TruncationError("infinite expansion of an exact series needs prec")
        else:
            W = int(prec) + drop
            exact = False
    else:
        exact = False
        if prec is not None:
            W = min(W, int(prec) + drop)
    certified = W - drop
    # positive factors raise the exponent, nilpotent ones are few
    kmax = int(W) + drop + r.ring.nilpotency_degree + 1
    out = {}
    c0 = weights(0)
    if c0:
        out[0] = r.ring(c0)
    power = {0: r.ring.one()}
    for k in range(1, kmax + 1):
        power = _mul_cut(power, r.coeffs, W)
        if not power:
            break
        w = weights(k)
        for e, c in power.items():
            t = c * w
            out[e] = out[e] + t if e in out else t
    return TruncatedLaurentSeries(out, EXACT if exact else certified, r.ring)


def _log_weights(k):
    return Fraction((-1) ** (k + 1), k) if k else 0


def _regular_inverse(a, W):
    """Coefficients below W of 1/a for a = a0 + a1 t + ... with a0 a unit."""
    inv0 = a[0].inverse()
    g = {0: inv0}
    for n in range(1, W):
        acc = None
        for k in range(1, n + 1):
            c = a.get(k)
            if c is not None and (n - k) in g:
                t = c * g[n - k]
                acc = t if acc is None else acc + t
        if acc:
            acc = -acc * inv0
            if acc:
                g[n] = acc
    return g


def log1(u, prec=None):
    """log(u) for u = 1 + (positive-exponent or nilpotent-coefficient part).

    Writes u = A (1 + M) with A the regular part and M = N/A, N the polar
    part: log A = log A(0) + integral of A'/A, and M has nilpotent
    coefficients so log(1 + M) is a finite sum.
    """
    r = u - 1
    _check_small(r, "log1")
    ring = u.ring
    if all(c.is_nilpotent() for c in r.coeffs.values()) or not u.coeffs.get(0):
        return _apply_power_series(r, _log_weights, prec)
    drop = _polar_depth(r)
    W = u.trunc
    if W == EXACT:
        if prec is None:
            raise TruncationError("infinite expansion of an exact series needs prec")
        W = int(prec) + drop
    elif prec is not None:
        W = min(W, int(prec) + drop)
    W = int(W)
    A = {k: c for k, c in u.coeffs.items() if k >= 0}
    N = {k: c for k, c in u.coeffs.items() if k < 0}
    Ainv = _regular_inverse(A, W)
    dA = {k - 1: c * k for k, c in A.items() if k > 0}
    q = _mul_cut(dA, Ainv, W)
    out = {0: A[0].log()} if A[0].log() else {}
    for k, c in q.items():
        if 0 <= k < W - 1:
            out[k + 1] = c * Fraction(1, k + 1)
    if N:
        M = _mul_cut(N, Ainv, W)
        power = {0: ring.one()}
        for k in range(1, ring.nilpotency_degree + 1):
            power = _mul_cut(power, M, W)
            if not power:
                break
            w = _log_weights(k)
            for e, c in power.items():
                t = c * w
                out[e] = out[e] + t if e in out else t
    # unknown coefficients sit at >= W; polar factors lower them by <= drop
    return TruncatedLaurentSeries(out, W - drop, ring)


def exp0(x, prec=None):
    """exp(x) for x with positive exponents or nilpotent coefficients."""
    _check_small(x, "exp0")
    return _apply_power_series(x, lambda k: Fraction(1, math.factorial(k)), prec)


def _normalized(f):
    """(v, b, u) with f = t^v * b * u, u(0) = 1 + nilpotents."""
    if f.is_zero():
        raise NotInvertibleError("zero series")
    v = f.val
    if v is None:
        raise NotInvertibleError("no unit coefficient below trunc: %s" % f)
    b = f[v]
    return v, b, f.shift(-v) * b.inverse()


def polar_depth(f):
    """Lower bound (negated) on the exponents of the polar part of log f."""
    return _polar_depth(_normalized(f)[2] - 1)


def unit_log_parts(f, prec=None):
    """(v, f0, log fplus, log fminus) for invertible f.

    log fminus is exact; log fplus is certified below its trunc.
    """
    v, b, u = _normalized(f)
    ring = f.ring
    if u.lo >= 0 and len(u.coeffs) == 1:
        zero = TruncatedLaurentSeries({}, EXACT, ring)
        return v, b, zero.with_trunc(u.trunc), zero
    L = log1(u, prec)
    if L.trunc <= 0:
        raise TruncationError(
            "truncation %s too low to separate the polar nilpotent factor" % f.trunc
        )
    neg = TruncatedLaurentSeries({k: c for k, c in L.coeffs.items() if k < 0}, EXACT, ring)
    pos = TruncatedLaurentSeries({k: c for k, c in L.coeffs.items() if k > 0}, L.trunc, ring)
    return v, b * L[0].exp(), pos, neg


def unit_factors(f, prec=None):
    """Factor an invertible f as t^v * f0 * fplus * fminus.

    fplus in 1 + t Q[[t]]-part, fminus in 1 + (nilpotent) t^-1 part (exact),
    f0 a ring unit.  Requires a local ring (always true here).
    Returns (v, f0, fplus, fminus).
    """
    one = TruncatedLaurentSeries.constant(1, EXACT, f.ring)
    v, b, u = _normalized(f)
    if u.is_exact and (u.lo >= 0 or max(u.coeffs) <= 0):
        # one-sided: the factor is read off without logarithms
        c0 = u[0]
        w = u * c0.inverse()
        return (v, b * c0, w, one) if u.lo >= 0 else (v, b * c0, one, w)
    v, f0, pos, neg = unit_log_parts(f, prec)
    if pos.coeffs or not pos.is_exact:
        fplus = exp0(pos, prec) if pos.coeffs else one.with_trunc(pos.trunc)
    else:
        fplus = one
    fminus = exp0(neg) if neg.coeffs else one
    return v, f0, fplus, fminus


def series_inv(f, prec=None):
    """Multiplicative inverse.

    ``prec`` bounds the (relative) precision used when ``f`` is exact and its
    inverse is an infinite series.
    """
    if f.is_zero():
        raise NotInvertibleError("zero series has no inverse")
    v = f.val
    if v is None:
        raise NotInvertibleError("leading coefficient is not a unit: %s" % f)
    ring = f.ring
    if f.lo == v:
        b = f[v]
        u = f.shift(-v)
        binv = b.inverse()
        if len(u.coeffs) == 1:
            return TruncatedLaurentSeries({-v: binv}, u.trunc - v, ring)
        T = u.trunc
        if T == EXACT:
            r = u * binv - 1
            if all(c.is_nilpotent() for c in r.coeffs.values()):
                # geometric series in a nilpotent: finite and exact
                return (_apply_power_series(r, lambda k: (-1) ** k, None) * binv).shift(-v)
            if prec is None:
                raise TruncationError("inverse of exact non-monomial needs prec")
            T = int(prec)
        g = {0: binv}
        for n in range(1, T):
            acc = ring.zero()
            for k in range(1, n + 1):
                c = u.coeffs.get(k)
                if c is not None and (n - k) in g:
                    acc = acc + c * g[n - k]
            acc = -acc * binv
            if acc:
                g[n] = acc
        return TruncatedLaurentSeries(g, T, ring).shift(-v)
    v, f0, fplus, fminus = unit_factors(f, prec)
    inv_plus = series_inv(fplus, prec)
    inv_minus = exp0(-log1(fminus))
    return (inv_plus * inv_minus * f0.inverse()).shift(-v)


def residue(f):
    """Coefficient of t^-1 dt."""
    return f[-1]


def residue_pairing(f, g):
    """Res(f dg)."""
    if f.ring != g.ring:
        raise RingMismatchError("%r vs %r" % (f.ring, g.ring))
    if f.trunc + g.lo <= 0 or g.trunc + f.lo <= 0:
        raise TruncationError(
            "Res(f dg) undetermined: trunc(f)=%s lo(g)=%s trunc(g)=%s lo(f)=%s"
            % (f.trunc, g.lo, g.trunc, f.lo)
        )
    acc = f.ring.zero()
    for k, c in g.coeffs.items():
        if k and -k in f.coeffs:
            acc = acc + f.coeffs[-k] * c * k
    return acc


def dlog(f, prec=None):
    """f'/f as the coefficient series of dt."""
    return f.derivative() * series_inv(f, prec)


# -- literals and JSON ------------------------------------------------------

_FACTOR = re.compile(
    r"^(?:(?P<num>\d+)(?:/(?P<den>\d+))?|(?P<t>t)(?:\^(?P<texp>-?\d+))?"
    r"|(?P<sym>[A-Za-su-z_][A-Za-z0-9_]*)(?:\^(?P<sexp>\d+))?)$"
)


def _split_terms(text):
    terms, cur, prev = [], "", ""
    for ch in text:
        if ch in "+-" and prev not in ("^", "") and cur:
            terms.append(cur)
            cur = ch
        elif ch in "+-" and prev == "" and not cur:
            cur = ch
        else:
            cur += ch
        if not ch.isspace():
            prev = ch
    if cur:
        terms.append(cur)
    return terms


def _parse_raw(text):
    """Literal -> list of (t exponent, {symbol: power}, Fraction)."""
    text = text.replace(" ", "")
    if not text:
        raise ConfigError("empty series literal")
    out = []
    for term in _split_terms(text):
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        if not term:
            raise ConfigError("dangling sign in %r" % text)
        coeff = Fraction(sign)
        texp = 0
        syms = {}
        for factor in term.split("*"):
            m = _FACTOR.match(factor)
            if not m:
                raise ConfigError("cannot parse factor %r in %r" % (factor, text))
            if m.group("num"):
                coeff *= Fraction(int(m.group("num")), int(m.group("den") or 1))
            elif m.group("t"):
                texp += int(m.group("texp") or 1)
            else:
                name = m.group("sym")
                syms[name] = syms.get(name, 0) + int(m.group("sexp") or 1)
        out.append((texp, syms, coeff))
    return out


def literal_symbols(text):
    return sorted({s for _, syms, _ in _parse_raw(text) for s in syms})


def parse_series(text, ring=None, trunc=EXACT):
    """Parse ``3/2*t^-2 + t + e1*t^3``.

    Without ``ring`` the nilpotent symbols found get nilpotency order 2.
    """
    raw = _parse_raw(text)
    if ring is None:
        ring = ScalarRing(sorted({s for _, syms, _ in raw for s in syms}))
    coeffs = {}
    for texp, syms, c in raw:
        s = ring(c)
        for name, e in syms.items():
            s = s * ring.gen(name) ** e
        coeffs[texp] = coeffs[texp] + s if texp in coeffs else s
    return TruncatedLaurentSeries(coeffs, trunc, ring)


def parse_scalar(text, ring=None):
    f = parse_series(text, ring)
    if any(k != 0 for k in f.coeffs):
        raise ConfigError("scalar literal may not contain t: %r" % text)
    return f[0] if f.coeffs else f.ring.zero()


def scalar_to_json(c):
    return [[list(m), q.numerator, q.denominator] for m, q in sorted(c.terms.items())]


def scalar_from_json(data, ring):
    terms = {}
    for mono, num, den in data:
        mono = tuple(mono)
        if len(mono) != ring.rank or any(e >= d for e, d in zip(mono, ring.orders)):
            raise ConfigError("monomial %r not reduced in %r" % (mono, ring))
        terms[mono] = Fraction(num, den)
    return Scalar(ring, terms)


def series_to_json(f):
    return [[k, scalar_to_json(f.coeffs[k])] for k in sorted(f.coeffs)]


def series_from_json(data, ring=QQ, trunc=EXACT):
    return TruncatedLaurentSeries(
        {int(k): scalar_from_json(c, ring) for k, c in data}, trunc, ring
    )
