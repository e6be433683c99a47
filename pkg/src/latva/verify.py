"""Conformance suites: each property is checked exhaustively over a finite box
(or over seeded random samples) and reported with its first counterexample.

Enumeration orders are fixed, so the first failure found is the smallest in
that order and reports are reproducible byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .ccsymbol import cc_symbol, exp_res_oracle, tame_symbol
from .errors import CocycleMismatch, LatvaError
from .fock import FockSpace, FockVector, apply_h, apply_shift, sugawara_L
from .laurent import EXACT, Scalar, ScalarRing, TruncatedLaurentSeries
from .lattice import build_cocycle
from .repmod import (
    build_module,
    h0_spectrum,
    module_classes,
    nilpotency_certificate,
    reconstruct_shift,
    spectrum_coset_ok,
    vbar_properties,
)
from .spectral import (
    ConnectionJet,
    FockAction,
    apply_gauge,
    jet_class,
    support_of_module,
    twist_action,
)
from .vertexop import (
    cocycle_roundtrip,
    koszul_sign,
    locality_residual,
    ode_residual,
    top_scalar,
    vertex_apply,
)

SUITES = ("heisenberg", "virasoro", "ope", "ode", "locality", "symbol", "module", "spectral")

# nilpotent towers of total degree 4
SYMBOL_RINGS = ("e1:5", "e1:3,e2:3", "e1:2,e2:2,e3:2,e4:2")


@dataclass
class VerifyConfig:
    lattice: object
    cutoff: int = 6
    window: tuple = (-6, 6)
    trunc: int = 12
    seed: int = 0
    n_shift: int = 0
    symbol_cases: int = 200
    spectral_cases: int = 100
    ode_weight: int = 4
    ope_radius: int = 3
    locality_radius: int = 1


@dataclass
class PropertyResult:
    suite: str
    name: str
    checked: int = 0
    counterexample: object = None
    skipped: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.counterexample is None

    def fail(self, witness):
        if self.counterexample is None:
            self.counterexample = witness

    def to_json(self):
        out = {
            "property": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": _jsonable(self.counterexample),
        }
        if self.skipped:
            out["skipped"] = self.skipped
        return out


def _jsonable(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


def _ket_json(ket):
    modes, charge = ket
    return {"modes": [list(p) for p in modes], "charge": list(charge)}


# -- heisenberg -------------------------------------------------------------

def _compose(space, ops, ket):
    """Apply (alpha, n) pairs right to left to one ket, as a dict."""
    cur = {ket: Fraction(1)}
    for alpha, n in reversed(ops):
        nxt = {}
        for k, c in cur.items():
            for k2, c2 in space.h_ket(alpha, n, k).items():
                x = nxt.get(k2, 0) + c * c2
                if x:
                    nxt[k2] = x
                else:
                    nxt.pop(k2, None)
        cur = nxt
    return cur


def suite_heisenberg(cfg):
    L = cfg.lattice
    space = FockSpace(L)
    prop = PropertyResult("heisenberg", "commutator [h^a_m, h^b_n] = m c(a,b) delta")
    B = L.basis()
    for ket in space.basis(cfg.cutoff):
        for i, a in enumerate(B):
            for j, b in enumerate(B):
                for m in range(-4, 5):
                    for n in range(-4, 5):
                        ab = _compose(space, [(a, m), (b, n)], ket)
                        ba = _compose(space, [(b, n), (a, m)], ket)
                        for k, c in ba.items():
                            x = ab.get(k, 0) - c
                            if x:
                                ab[k] = x
                            else:
                                ab.pop(k, None)
                        want = m * L.gram[i][j] if m + n == 0 else 0
                        prop.checked += 1
                        if ab != ({ket: Fraction(want)} if want else {}):
                            prop.fail({"ket": _ket_json(ket), "i": i, "j": j, "m": m, "n": n})
    return [prop]


# -- virasoro ---------------------------------------------------------------

def suite_virasoro(cfg, rng_m=3, box=3):
    L = cfg.lattice
    space = FockSpace(L)
    r = L.rank
    alg = PropertyResult("virasoro", "[L_m, L_n] = (m-n) L_(m+n) + rank/12 (m^3-m) delta")
    for ket in space.basis(cfg.cutoff):
        v = FockVector(space, {ket: 1})
        Ln = {n: sugawara_L(n, v) for n in range(-rng_m, rng_m + 1)}
        for m in range(-rng_m, rng_m + 1):
            for n in range(-rng_m, rng_m + 1):
                lhs = sugawara_L(m, Ln[n]) - sugawara_L(n, Ln[m])
                rhs = sugawara_L(m + n, v) * (m - n)
                if m + n == 0:
                    rhs = rhs + v * (Fraction(r, 12) * (m ** 3 - m))
                alg.checked += 1
                if lhs != rhs:
                    alg.fail({"ket": _ket_json(ket), "m": m, "n": n})
    l0 = PropertyResult("virasoro", "L_0 e^g = c(g,g)/2 e^g")
    l1 = PropertyResult("virasoro", "L_-1 e^g = h^g_-1 e^g")
    lp = PropertyResult("virasoro", "L_n e^g = 0 for n >= 1")
    for g in L.box(box):
        e = space.vacuum(g)
        l0.checked += 1
        if sugawara_L(0, e) != e * Fraction(L.pairing(g, g), 2):
            l0.fail({"gamma": list(g)})
        l1.checked += 1
        if sugawara_L(-1, e) != apply_h(g, -1, e):
            l1.fail({"gamma": list(g)})
        for n in (1, 2):
            lp.checked += 1
            if sugawara_L(n, e):
                lp.fail({"gamma": list(g), "n": n})
    return [alg, l0, l1, lp]


# -- ope --------------------------------------------------------------------

def suite_ope(cfg):
    L = cfg.lattice
    eps = build_cocycle(L)
    space = FockSpace(L)
    order = PropertyResult("ope", "leading exponent of V^g1(z) e^g2 is c(g1,g2)")
    top = PropertyResult("ope", "top coefficient eps(g1,g2)(-1)^c(g1,g2) e^(g1+g2)")
    box = L.box(cfg.ope_radius)
    for g1 in box:
        for g2 in box:
            order.checked += 1
            top.checked += 1
            c = L.pairing(g1, g2)
            try:
                q, mu = top_scalar(space, g1, g2, eps)
            except CocycleMismatch as exc:
                top.fail({"g1": list(g1), "g2": list(g2), "error": str(exc)})
                continue
            if q != c:
                order.fail({"g1": list(g1), "g2": list(g2), "exponent": q, "expected": c})
            want = eps(g1, g2) * (-1 if c % 2 else 1)
            if mu != want:
                top.fail({"g1": list(g1), "g2": list(g2), "coefficient": mu, "expected": want})
    rt = PropertyResult("ope", "cocycle round trip from top coefficients")
    rt.checked = 1
    try:
        rebuilt = cocycle_roundtrip(L, eps)
        if rebuilt != eps:
            rt.fail({"rebuilt": rebuilt.eps_basis, "expected": eps.eps_basis})
    except CocycleMismatch as exc:
        rt.fail({"witness": exc.witness, "error": str(exc)})
    return [order, top, rt]


# -- ode --------------------------------------------------------------------

def _directions(L):
    out = list(L.basis())
    if L.rank > 1:
        out.append(tuple(1 for _ in range(L.rank)))
    out.append(tuple(-x for x in L.basis()[0]))
    return out


def suite_ode(cfg):
    L = cfg.lattice
    eps = build_cocycle(L)
    space = FockSpace(L)
    tests = [FockVector(space, {k: 1}) for k in space.basis(cfg.ode_weight)]
    main = PropertyResult("ode", "z d/dz V(z) v = sum h_-n V z^n + sum V h_n z^-n")
    neg = PropertyResult("ode", "negative control: dropping h_-1 breaks the equation")
    for g in _directions(L):
        for v, res in ode_residual(g, tests, cfg.window, eps):
            main.checked += 1
            if not res.is_zero():
                q = min(res.terms)
                main.fail({"gamma": list(g), "state": v.to_json(), "exponent": q,
                           "residual": res.terms[q].to_json()})

        def broken(v, top, g=g):
            return vertex_apply(g, v, (cfg.window[0], top), eps, drop_creation=(1,))

        hits = sum(not r.is_zero() for _, r in ode_residual(g, tests, cfg.window, eps, op=broken))
        neg.checked += 1
        if not hits:
            neg.fail({"gamma": list(g), "detail": "broken operator passed"})
    return [main, neg]


# -- locality ---------------------------------------------------------------

def _locality_tests(space):
    L = space.lattice
    out = [space.vacuum(g) for g in L.box(1)]
    out.append(apply_h(L.basis()[0], -1, space.vacuum()))
    return out


def suite_locality(cfg, order=2):
    L = cfg.lattice
    eps = build_cocycle(L)
    space = FockSpace(L)
    tests = _locality_tests(space)
    label = "(z-w)^N [V1(z), V2(w)]_sign = 0 at N = max(0, -c(g1,g2))"
    if cfg.n_shift:
        label += " (N shifted by %+d)" % cfg.n_shift
    main = PropertyResult("locality", label)
    sharp = PropertyResult("locality", "nonzero at N-1 when N >= 1")
    box = L.box(cfg.locality_radius)
    for g1 in box:
        for g2 in box:
            N0 = max(0, -L.pairing(g1, g2))
            N = N0 + cfg.n_shift
            sign = koszul_sign(L, g1, g2)
            for v in tests:
                if N < 0:
                    main.skipped += 1
                    continue
                main.checked += 1
                res = locality_residual(g1, g2, N, v, order, eps, sign)
                if not res.is_zero():
                    (b, a), w = res.witness()
                    main.fail({"g1": list(g1), "g2": list(g2), "N": N, "state": v.to_json(),
                               "w_exponent": b, "z_exponent": a, "coefficient": w.to_json()})
            if N0 >= 1:
                sharp.checked += 1
                res = locality_residual(g1, g2, N0 - 1, space.vacuum(), order, eps, sign)
                if res.is_zero():
                    sharp.fail({"g1": list(g1), "g2": list(g2), "N": N0 - 1})
    return [main, sharp]


# -- symbol -----------------------------------------------------------------

def _rand_rational(rng, lo=-5, hi=5, den=4):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def _rand_scalar(rng, ring, nilpotent=False, terms=2):
    """Random ring element; a unit unless ``nilpotent``."""
    c = ring.zero()
    if not nilpotent:
        a = 0
        while not a:
            a = _rand_rational(rng)
        c = c + a
    monos = [m for m in ring.monomials() if any(m)]
    for _ in range(rng.randint(1 if nilpotent else 0, terms)):
        m = rng.choice(monos)
        c = c + Scalar(ring, {m: _rand_rational(rng)})
    return c


def random_unit(rng, ring, trunc=None, max_val=2, pos_len=3, polar=2):
    """t^v * a * (1 + positive part) * (1 + nilpotent polar part).

    Exact unless ``trunc`` is given, in which case it is known ``trunc``
    above its valuation.
    """
    v = rng.randint(-max_val, max_val)
    a = _rand_scalar(rng, ring)
    pos = {0: ring.one()}
    for k in range(1, pos_len + 1):
        if rng.random() < 0.7:
            pos[k] = _rand_scalar(rng, ring) if rng.random() < 0.5 else ring(_rand_rational(rng))
    neg = {0: ring.one()}
    gens = ring.gens()
    for k in range(1, polar + 1):
        if rng.random() < 0.6:
            neg[-k] = rng.choice(gens) * _rand_rational(rng)
    f = TruncatedLaurentSeries(pos, EXACT, ring) * TruncatedLaurentSeries(neg, EXACT, ring)
    f = f.shift(v) * a
    return f if trunc is None else f.with_trunc(v + trunc)


def random_plus(rng, ring, trunc=EXACT, pos_len=3):
    pos = {0: ring.one()}
    for k in range(1, pos_len + 1):
        pos[k] = _rand_scalar(rng, ring) if rng.random() < 0.5 else ring(_rand_rational(rng))
    return TruncatedLaurentSeries(pos, trunc, ring)


def suite_symbol(cfg):
    rng = random.Random(cfg.seed)
    props = {
        k: PropertyResult("symbol", k)
        for k in (
            "bimultiplicativity <fh,g> = <f,g><h,g>",
            "antisymmetry <f,g><g,f> = 1, <f,f> = (-1)^v",
            "Steinberg <f,1-f> = 1",
            "tame reduction mod nilpotents",
            "exp-Res oracle for f in 1 + tQ[[t]]",
        )
    }
    bim, anti, stein, tame, orac = props.values()
    rings = [ScalarRing.parse(s) for s in SYMBOL_RINGS]
    for case in range(cfg.symbol_cases):
        ring = rings[case % len(rings)]
        f = random_unit(rng, ring)
        g = random_unit(rng, ring)
        h = random_unit(rng, ring)
        wit = {"case": case, "ring": ring.describe(), "f": str(f), "g": str(g)}
        try:
            fg = cc_symbol(f, g)
            bim.checked += 1
            if cc_symbol(f * h, g) != fg * cc_symbol(h, g):
                bim.fail(dict(wit, h=str(h)))
            anti.checked += 1
            if fg * cc_symbol(g, f) != ring.one():
                anti.fail(wit)
            elif cc_symbol(f, f) != ring(-1 if f.val % 2 else 1):
                anti.fail(dict(wit, g=str(f)))
            tame.checked += 1
            if fg.reduce() != tame_symbol(f.reduce(), g.reduce()).reduce():
                tame.fail(wit)
            s = f if (f.val != 0 or f[0].constant != 1) else f * 2
            stein.checked += 1
            if cc_symbol(s, 1 - s) != ring.one():
                stein.fail(dict(wit, f=str(s)))
            p = random_plus(rng, ring)
            orac.checked += 1
            if cc_symbol(p, g) != exp_res_oracle(p, g):
                orac.fail(dict(wit, f=str(p)))
        except LatvaError as exc:
            for prop in props.values():
                prop.fail(dict(wit, error="%s: %s" % (type(exc).__name__, exc)))
    return list(props.values())


# -- module -----------------------------------------------------------------

def suite_module(cfg, vbar_weight=4):
    L = cfg.lattice
    eps = build_cocycle(L)
    W = cfg.cutoff
    nil = PropertyResult("module", "(h_n)^(floor(W/n)+1) = 0 on weight <= W")
    ctrl = PropertyResult("module", "negative control: h_-1 is not nilpotent")
    spec = PropertyResult("module", "h_0 spectrum in <a,s(chi)> + <a,c(Gamma)>")
    vbar = PropertyResult("module", "Vbar commutes with h_n>0, covariant for h_n<=0, ODE, definition")
    shift = PropertyResult("module", "shift = Vtilde(z)(-z)^(-h_0)")
    indep = PropertyResult("module", "graded dimension independent of representative")
    for chi in module_classes(L):
        M = build_module(L, chi, W)
        for b in L.basis():
            nil.checked += 1
            rep = nilpotency_certificate(M, b, W)
            if not rep.ok:
                nil.fail({"chi": list(chi), "direction": list(b), "failure": _jsonable(rep.failures[0])})
            ctrl.checked += 1
            rep = nilpotency_certificate(M, b, min(W, 2), modes=[-1])
            if rep.ok:
                ctrl.fail({"chi": list(chi), "direction": list(b)})
            sp = h0_spectrum(M, b)
            spec.checked += 1
            if not spectrum_coset_ok(M, b, sp):
                spec.fail({"chi": list(chi), "alpha": list(b), "spectrum": sorted(sp)})
            vbar.checked += 1
            found = vbar_properties(M, b, eps, max_weight=min(vbar_weight, W))
            bad = {k: v for k, v in found.items() if v}
            if bad:
                key = sorted(bad)[0]
                vbar.fail({"chi": list(chi), "gamma": list(b), "property": key, "witness": _jsonable(bad[key][0])})
            for v in M.basis_vectors(min(vbar_weight, W)):
                shift.checked += 1
                try:
                    if reconstruct_shift(b, v, eps) != apply_shift(b, v, eps):
                        shift.fail({"chi": list(chi), "gamma": list(b), "state": v.to_json()})
                except LatvaError as exc:
                    shift.fail({"chi": list(chi), "gamma": list(b), "state": v.to_json(), "error": str(exc)})
        other = tuple(int(a + b) for a, b in zip(M.offset, L.to_dual(L.basis()[0])))
        M2 = build_module(L, chi, W, representative=other)
        indep.checked += 1
        if M2.graded_dimension() != M.graded_dimension():
            indep.fail({"chi": list(chi), "representative": list(other)})
    return [nil, ctrl, spec, vbar, shift, indep]


# -- spectral ---------------------------------------------------------------

def random_jet(rng, rank, max_n=3, den=6):
    data = {}
    for n in range(0, max_n + 1):
        if rng.random() < 0.7:
            data[n] = [Fraction(rng.randint(-12, 12), rng.randint(1, den)) for _ in range(rank)]
    return ConnectionJet.from_dict(rank, data)


def suite_spectral(cfg):
    L = cfg.lattice
    rng = random.Random(cfg.seed)
    cov = PropertyResult("spectral", "support(twist_nu M) = support(M) + class(nu)")
    comp = PropertyResult("spectral", "twist_nu1 twist_nu2 = twist_(nu1+nu2) on supports")
    gauge = PropertyResult("spectral", "gauge by t^coweight: residue += coweight, class unchanged")
    classes = module_classes(L)
    for case in range(cfg.spectral_cases):
        chi = classes[rng.randrange(len(classes))]
        M = build_module(L, chi, cfg.cutoff)
        base = FockAction(M.space)
        v = M.generator()
        nu1, nu2 = random_jet(rng, L.rank), random_jet(rng, L.rank)
        wit = {"case": case, "chi": list(chi), "nu": nu1.to_json()}
        s0 = support_of_module(base, v)
        cov.checked += 1
        got = support_of_module(twist_action(nu1, base), v)
        if got != s0.add(jet_class(nu1, L), L):
            cov.fail(dict(wit, got=got.to_json()))
        comp.checked += 1
        lhs = support_of_module(twist_action(nu1, twist_action(nu2, base)), v)
        rhs = support_of_module(twist_action(nu1 + nu2, base), v)
        if lhs != rhs:
            comp.fail(dict(wit, nu2=nu2.to_json()))
        cw = tuple(rng.randint(-3, 3) for _ in range(L.rank))
        beta = tuple(Fraction(rng.randint(-3, 3)) for _ in range(L.rank))
        unit = TruncatedLaurentSeries(
            {0: Fraction(rng.randint(1, 5)), 1: Fraction(rng.randint(-3, 3)), 2: Fraction(rng.randint(-3, 3))}
        ).with_trunc(8)
        moved = jet_class(apply_gauge(cw, [(beta, unit)], nu1), L)
        before = jet_class(nu1, L)
        gauge.checked += 1
        if (
            moved.residue != tuple(a + b for a, b in zip(before.residue, cw))
            or moved.residue_class != before.residue_class
            or moved.irregular != before.irregular
        ):
            gauge.fail(dict(wit, coweight=list(cw), got=moved.to_json()))
    return [cov, comp, gauge]


_RUNNERS = {
    "heisenberg": suite_heisenberg,
    "virasoro": suite_virasoro,
    "ope": suite_ope,
    "ode": suite_ode,
    "locality": suite_locality,
    "symbol": suite_symbol,
    "module": suite_module,
    "spectral": suite_spectral,
}


def verify_suite(name, cfg):
    """Run one suite (or ``all``) and return the JSON-ready report."""
    names = SUITES if name == "all" else (name,)
    if any(n not in _RUNNERS for n in names):
        raise KeyError(name)
    suites = {}
    for n in names:
        suites[n] = [p.to_json() for p in _RUNNERS[n](cfg)]
    passed = all(p["passed"] for props in suites.values() for p in props)
    return {
        "seed": cfg.seed,
        "config": {
            "gram": [list(r) for r in cfg.lattice.gram],
            "cutoff": cfg.cutoff,
            "window": list(cfg.window),
            "trunc": cfg.trunc,
            "n_shift": cfg.n_shift,
        },
        "suites": suites,
        "passed": passed,
    }


__all__ = [
    "SUITES",
    "VerifyConfig",
    "PropertyResult",
    "verify_suite",
    "random_unit",
    "random_plus",
    "random_jet",
]
