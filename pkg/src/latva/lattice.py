"""Lattices with an integral symmetric level form.

Covers the Gram form c, parity, the dual quotient Gamma^dual / c(Gamma) via
the Smith normal form, and the bimultiplicative sign cocycle whose
commutator is (-1)^(c(a,b) + c(a,a) c(b,b)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, DegenerateLatticeError


def _det(m):
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i] != 0), None)
        if piv is None:
            return 0
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            if f:
                for k in range(i, n):
                    a[r][k] -= f * a[i][k]
    return int(det) if det.denominator == 1 else det


def mat_inverse(m):
    """Inverse over Q as a tuple of tuples of Fractions."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i] != 0), None)
        if piv is None:
            raise DegenerateLatticeError("matrix is singular")
        a[i], a[piv] = a[piv], a[i]
        p = a[i][i]
        a[i] = [x / p for x in a[i]]
        for r in range(n):
            if r != i and a[r][i]:
                f = a[r][i]
                a[r] = [x - f * y for x, y in zip(a[r], a[i])]
    return tuple(tuple(row[n:]) for row in a)


def mat_vec(m, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def smith_normal_form(a):
    """Return (U, D, V) with U * a * V = D diagonal, U and V unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    n, m = len(a), len(a[0]) if a else 0
    A = [list(map(int, row)) for row in a]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(n, m)):
        while True:
            nz = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, m) if A[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            done = True
            for i in range(t + 1, n):
                q = A[i][t] // p
                if q:
                    add_row(t, i, -q)
                if A[i][t]:
                    done = False
            for j in range(t + 1, m):
                q = A[t][j] // p
                if q:
                    add_col(t, j, -q)
                if A[t][j]:
                    done = False
            if not done:
                continue
            # divisibility: fold a non-multiple entry into row t and retry
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, m) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    D = [A[i][i] if i < m else 0 for i in range(min(n, m))]
    return tuple(map(tuple, U)), tuple(D), tuple(map(tuple, V))


class LatticeLevel:
    """Lattice Z^r with integral symmetric Gram form c."""

    def __init__(self, gram, labels=None):
        gram = tuple(tuple(int(x) for x in row) for row in gram)
        r = len(gram)
        if r == 0 or any(len(row) != r for row in gram):
            raise ConfigError("gram must be a nonempty square matrix")
        if any(gram[i][j] != gram[j][i] for i in range(r) for j in range(r)):
            raise ConfigError("gram must be symmetric")
        self.gram = gram
        self.rank = r
        self.labels = tuple(labels) if labels else tuple("b%d" % (i + 1) for i in range(r))
        self.det = _det(gram)

    @classmethod
    def from_config(cls, block):
        if "gram" not in block:
            raise ConfigError("lattice block needs 'gram'")
        gram = block["gram"]
        rank = block.get("rank")
        if rank is not None and len(gram) != rank:
            raise ConfigError("rank %s does not match gram" % rank)
        return cls(gram, block.get("labels"))

    def to_config(self):
        return {"rank": self.rank, "gram": [list(r) for r in self.gram]}

    def __eq__(self, other):
        return isinstance(other, LatticeLevel) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return "LatticeLevel(%r)" % (self.gram,)

    def __add__(self, other):
        if other.rank != self.rank:
            raise ConfigError("rank mismatch")
        return LatticeLevel(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.gram, other.gram)]
        )

    @property
    def nondegenerate(self):
        return self.det != 0

    @property
    def positive_definite(self):
        return all(_det([row[:k] for row in self.gram[:k]]) > 0 for k in range(1, self.rank + 1))

    def require_nondegenerate(self):
        if not self.nondegenerate:
            raise DegenerateLatticeError("level form %r is degenerate" % (self.gram,))

    def check(self, v):
        v = tuple(v)
        if len(v) != self.rank:
            raise ConfigError("vector %r has length %d, lattice rank is %d" % (v, len(v), self.rank))
        return v

    def pairing(self, g1, g2):
        g1, g2 = self.check(g1), self.check(g2)
        return dot(g1, mat_vec(self.gram, g2))

    def parity(self, g):
        return self.pairing(g, g) % 2

    def to_dual(self, g):
        """c(gamma) as a covector."""
        return mat_vec(self.gram, self.check(g))

    @property
    def inverse(self):
        self.require_nondegenerate()
        if not hasattr(self, "_inv"):
            self._inv = mat_inverse(self.gram)
        return self._inv

    def dual_norm(self, covector):
        """(m, c^-1 m) for a covector m."""
        return dot(covector, mat_vec(self.inverse, covector))

    def zero(self):
        return (0,) * self.rank

    def basis(self):
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def box(self, radius):
        return list(itertools.product(range(-radius, radius + 1), repeat=self.rank))

    def vectors_of_norm_at_most(self, bound, center=None):
        """Integral gamma with (1/2) (gamma + x, c (gamma + x)) <= bound.

        ``center`` is the rational shift x; the form must be positive definite.
        """
        if not self.positive_definite:
            raise DegenerateLatticeError("enumeration needs a positive definite form")
        x = tuple(Fraction(0) for _ in range(self.rank)) if center is None else tuple(map(Fraction, center))
        # (y, c y) >= |y|^2 / tr(c^-1)
        tr = sum(self.inverse[i][i] for i in range(self.rank))
        rad2 = 2 * Fraction(bound) * tr
        R = math.isqrt(math.ceil(rad2)) + 1
        ranges = [range(math.floor(-xi - R), math.ceil(-xi + R) + 1) for xi in x]
        out = []
        for g in itertools.product(*ranges):
            y = tuple(gi + xi for gi, xi in zip(g, x))
            if Fraction(dot(y, mat_vec(self.gram, y)), 2) <= bound:
                out.append(g)
        return out


@dataclass(frozen=True)
class DualQuotient:
    """Gamma^dual / c(Gamma) presented through U c V = diag(d)."""

    U: tuple
    diag: tuple
    V: tuple

    @property
    def coker_factors(self):
        return [d for d in self.diag if d != 1]

    @property
    def order(self):
        if any(d == 0 for d in self.diag):
            return math.inf
        return math.prod(self.diag)

    @property
    def _moduli(self):
        return [(i, d) for i, d in enumerate(self.diag) if d != 1]

    def project(self, covector):
        """Class of an integral covector, as a tuple of Smith coordinates."""
        y = mat_vec(self.U, covector)
        for i, d in enumerate(self.diag):
            if Fraction(y[i]).denominator != 1:
                raise ConfigError("covector %r is not integral" % (covector,))
        return tuple(int(y[i]) % d if d else int(y[i]) for i, d in self._moduli)

    def section(self, cls):
        """Least nonnegative Smith representative, mapped back to Gamma^dual."""
        cls = tuple(cls)
        mods = self._moduli
        if len(cls) != len(mods):
            raise ConfigError("class %r has wrong length (expected %d)" % (cls, len(mods)))
        y = [0] * len(self.diag)
        for (i, d), k in zip(mods, cls):
            y[i] = k % d if d else k
        Uinv = mat_inverse(self.U)
        return tuple(int(x) for x in mat_vec(Uinv, y))

    def classes(self):
        if self.order == math.inf:
            raise DegenerateLatticeError("infinite cokernel")
        return list(itertools.product(*(range(d) for _, d in self._moduli)))


def dual_quotient(L):
    return DualQuotient(*smith_normal_form(L.gram))


def commutator_sign(L, g1, g2):
    """(-1)^(c(g1,g2) + c(g1,g1) c(g2,g2))."""
    e = L.pairing(g1, g2) + L.pairing(g1, g1) * L.pairing(g2, g2)
    return -1 if e % 2 else 1


class SignCocycle:
    """Bimultiplicative +-1 cocycle given by its values on ordered basis pairs."""

    def __init__(self, eps_basis):
        eps_basis = tuple(tuple(int(x) for x in row) for row in eps_basis)
        if any(x not in (1, -1) for row in eps_basis for x in row):
            raise ConfigError("cocycle entries must be +-1")
        self.eps_basis = eps_basis
        self.rank = len(eps_basis)
        self._odd = tuple((i, j) for i in range(self.rank) for j in range(self.rank) if eps_basis[i][j] == -1)

    def __call__(self, g1, g2):
        e = 0
        for i, j in self._odd:
            e += g1[i] * g2[j]
        return -1 if e % 2 else 1

    def commutator(self, g1, g2):
        return self(g1, g2) * self(g2, g1)

    def __eq__(self, other):
        return isinstance(other, SignCocycle) and self.eps_basis == other.eps_basis

    def __hash__(self):
        return hash(self.eps_basis)

    def __mul__(self, other):
        return SignCocycle(
            [[a * b for a, b in zip(r1, r2)] for r1, r2 in zip(self.eps_basis, other.eps_basis)]
        )

    def __repr__(self):
        return "SignCocycle(%r)" % (self.eps_basis,)

    def violations(self, L, radius=2):
        """Yield (invariant, witness) for every failed invariant in the box."""
        box = L.box(radius)
        for g1 in box:
            for g2 in box:
                if self.commutator(g1, g2) != commutator_sign(L, g1, g2):
                    yield "commutator", (g1, g2)
                neg = (tuple(-x for x in g1), tuple(-x for x in g2))
                if self(*neg) != self(g1, g2):
                    yield "symmetry", (g1, g2)
        for g1, g2, g3 in itertools.product(L.box(min(radius, 1)), repeat=3):
            s12 = tuple(a + b for a, b in zip(g1, g2))
            s23 = tuple(a + b for a, b in zip(g2, g3))
            if self(g1, g2) * self(s12, g3) != self(g2, g3) * self(g1, s23):
                yield "cocycle", (g1, g2, g3)


def build_cocycle(L):
    """eps(b_i, b_j) = (-1)^(c_ij + c_ii c_jj) for i > j, 1 otherwise."""
    c = L.gram
    r = L.rank
    return SignCocycle(
        [
            [(-1) ** ((c[i][j] + c[i][i] * c[j][j]) % 2) if i > j else 1 for j in range(r)]
            for i in range(r)
        ]
    )


def baer_sum(L1, e1, L2, e2):
    """Cocycle for the level c1 + c2 extension.

    The pointwise product has the wrong commutator by
    (-1)^(c1(a,a) c2(b,b) + c2(a,a) c1(b,b)); the lower-triangular sign
    (-1)^(c1_ii c2_jj + c2_ii c1_jj), i > j, corrects it.
    """
    if L1.rank != L2.rank or e1.rank != e2.rank or e1.rank != L1.rank:
        raise ConfigError("rank mismatch in Baer sum")
    c1, c2 = L1.gram, L2.gram
    r = L1.rank
    fix = SignCocycle(
        [
            [(-1) ** ((c1[i][i] * c2[j][j] + c2[i][i] * c1[j][j]) % 2) if i > j else 1 for j in range(r)]
            for i in range(r)
        ]
    )
    return e1 * e2 * fix
