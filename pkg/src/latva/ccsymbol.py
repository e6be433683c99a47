"""Tame and Contou-Carrere symbols, and the level-c commutator pairing.

The symbol is built by bimultiplicative extension from the factorization
f = t^v * a * f+ * f-:

    <f, g> = (-1)^(v w) * a^w / b^v * E(f+, g-) / E(g+, f-)

with E(p, q) = exp Res(log p * dlog q).  Over Q this is the tame symbol
(-1)^(v w) (f^w / g^v)(0).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import RingMismatchError
from .laurent import (
    Scalar,
    TruncatedLaurentSeries,
    dlog,
    log1,
    polar_depth,
    residue_pairing,
    series_mul,
    unit_factors,
    unit_log_parts,
)


@dataclass(frozen=True)
class UnitDecomposition:
    v: int
    f0: Scalar
    fplus: TruncatedLaurentSeries
    fminus: TruncatedLaurentSeries

    def recompose(self):
        return series_mul(self.fplus, self.fminus).shift(self.v) * self.f0


def decompose_unit(f, prec=None):
    return UnitDecomposition(*unit_factors(f, prec))


def _series_key(f):
    return (
        f.ring,
        f.trunc,
        tuple(sorted((k, tuple(sorted(c.terms.items()))) for k, c in f.coeffs.items())),
    )


_LOG_CACHE = {}


def _log_parts(f, prec):
    key = (_series_key(f), prec)
    hit = _LOG_CACHE.get(key)
    if hit is None:
        if len(_LOG_CACHE) > 4096:
            _LOG_CACHE.clear()
        hit = _LOG_CACHE[key] = unit_log_parts(f, prec)
    return hit


def _exp_res(logp, logq):
    """exp Res(log p * dlog q) for log p regular and log q polar, nilpotent."""
    if not logq.coeffs:
        return logp.ring.one()
    return residue_pairing(logp, logq).exp()


def _log_pair(f, g):
    """Log parts of both arguments; exact inputs get just enough precision.

    log(fplus) is only paired against log(gminus), whose pole order is at
    most the polar depth of g.
    """
    pf = 1 + polar_depth(g) if f.is_exact else None
    pg = 1 + polar_depth(f) if g.is_exact else None
    return _log_parts(f, pf), _log_parts(g, pg)


def cc_symbol(f, g):
    """Contou-Carrere symbol <f, g> of two invertible series."""
    if f.ring != g.ring:
        raise RingMismatchError("%r vs %r" % (f.ring, g.ring))
    (v, a, fp, fm), (w, b, gp, gm) = _log_pair(f, g)
    sign = -1 if (v * w) % 2 else 1
    tame = a ** w * b ** (-v) * sign
    return tame * _exp_res(fp, gm) / _exp_res(gp, fm)


def tame_symbol(f, g):
    """(-1)^(v(f) v(g)) (f^v(g) / g^v(f))(0) over Q, read off leading terms."""
    v, w = f.val, g.val
    a, b = f[v], g[w]
    sign = -1 if (v * w) % 2 else 1
    return sign * a ** w / b ** v


def commutator_pairing(gamma1, f1, gamma2, f2, lattice):
    """{f1, f2}^(-c(gamma1, gamma2))."""
    k = lattice.pairing(gamma1, gamma2)
    return cc_symbol(f1, f2) ** (-k)


def exp_res_oracle(f, g, prec=None):
    """exp Res(log f * dlog g) computed directly, for f in 1 + t(...).

    Independent of the factorization route: dlog g goes through series
    inversion.
    """
    if prec is None and (f.is_exact or g.is_exact):
        # Res only sees log f up to the pole order of dlog g
        prec = 2 - min(0, dlog(g, 2).lo)
    return series_mul(log1(f, prec), dlog(g, prec))[-1].exp()
