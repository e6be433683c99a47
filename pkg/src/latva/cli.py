"""Command-line front end.

Exit codes: 0 success, 1 a ``verify`` property failed, 2 bad input or
configuration (including unknown flags), 3 a truncation too small for the
requested result.  JSON output is sorted and byte-stable; text output is
for people and may change.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .ccsymbol import cc_symbol
from .errors import CocycleMismatch, ConfigError, LatvaError, TruncationError
from .fock import FockSpace, FockVector, apply_h, apply_shift, sugawara_L
from .laurent import ScalarRing, literal_symbols, parse_series, scalar_to_json
from .lattice import LatticeLevel, build_cocycle, dual_quotient, smith_normal_form
from .repmod import (
    build_module,
    h0_spectrum,
    module_classes,
    nilpotency_certificate,
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
from .verify import SUITES, VerifyConfig, verify_suite
from .vertexop import (
    koszul_sign,
    locality_residual,
    ope_leading,
    top_scalar,
    vertex_apply,
)

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

DEFAULTS = {"gram": [[2]], "cutoff": 6, "window": [-6, 6], "trunc": 12, "seed": 0, "format": "json"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, "%s: error: %s\n" % (self.prog, message))


# -- parsing helpers --------------------------------------------------------

def parse_vector(text, rank=None):
    """``1``, ``1,-2`` or ``[1,-2]`` -> tuple of Fractions (ints when integral)."""
    text = str(text).strip()
    try:
        if text.startswith("["):
            items = json.loads(text)
        else:
            items = [x for x in text.split(",") if x.strip()]
        vec = tuple(Fraction(str(x).strip()) for x in items)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError("cannot parse vector %r" % text) from exc
    if rank is not None and len(vec) != rank:
        raise ConfigError("vector %r has length %d, lattice rank is %d" % (text, len(vec), rank))
    return tuple(int(x) if x.denominator == 1 else x for x in vec)


def parse_lattice_vector(text, L):
    vec = parse_vector(text, L.rank)
    if any(isinstance(x, Fraction) for x in vec):
        raise ConfigError("lattice vector %r must be integral" % text)
    return vec


def parse_window(text):
    try:
        a, b = text.split(":")
        lo, hi = int(a), int(b)
    except ValueError as exc:
        raise ConfigError("window must look like a:b with integers, got %r" % text) from exc
    if lo > hi:
        raise ConfigError("window lower bound exceeds upper bound")
    return [lo, hi]


def load_config(path):
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc)) from exc
    try:
        if p.suffix == ".toml":
            data = tomllib.loads(raw.decode())
        else:
            data = json.loads(raw)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError("cannot parse config %s: %s" % (path, exc)) from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a table/object")
    return data


def _read_json_arg(text):
    """Inline JSON, or ``@path`` to read it from a file, or ``-`` for stdin."""
    try:
        if text == "-":
            return json.load(sys.stdin)
        if text.startswith("@"):
            return json.loads(Path(text[1:]).read_text())
        return json.loads(text)
    except (OSError, ValueError) as exc:
        raise ConfigError("cannot read JSON from %r: %s" % (text, exc)) from exc


def resolve_job(args):
    """Merge defaults < config file < flags into a job dict."""
    job = dict(DEFAULTS)
    if args.config:
        cfg = load_config(args.config)
        lat = cfg.get("lattice", {})
        if "gram" in lat:
            job["gram"] = lat["gram"]
            if "rank" in lat and lat["rank"] != len(lat["gram"]):
                raise ConfigError("lattice.rank does not match lattice.gram")
        tr = cfg.get("truncation", {})
        for key in ("cutoff", "window", "trunc"):
            if key in tr:
                job[key] = tr[key]
        for key in ("seed", "format"):
            if key in cfg:
                job[key] = cfg[key]
        job["params"] = cfg.get("params", {})
    if args.gram is not None:
        try:
            job["gram"] = json.loads(args.gram)
        except ValueError as exc:
            raise ConfigError("--gram must be JSON, e.g. [[2,1],[1,2]]") from exc
    if args.cutoff is not None:
        job["cutoff"] = args.cutoff
    if args.window is not None:
        job["window"] = parse_window(args.window)
    if args.trunc is not None:
        job["trunc"] = args.trunc
    if args.seed is not None:
        job["seed"] = args.seed
    if args.format is not None:
        job["format"] = args.format
    if int(job["cutoff"]) <= 0 or int(job["trunc"]) <= 0:
        raise ConfigError("cutoff and trunc must be positive")
    w = job["window"]
    if len(w) != 2 or int(w[0]) > int(w[1]):
        raise ConfigError("window must be [lo, hi] with lo <= hi")
    if job["format"] not in ("json", "text"):
        raise ConfigError("format must be json or text")
    job["lattice"] = LatticeLevel(job["gram"])
    return job


# -- output -----------------------------------------------------------------

def _plain(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def emit(result, fmt, out):
    if fmt == "json":
        out.write(json.dumps(_plain(result), sort_keys=True, indent=2) + "\n")
        return
    _emit_text(_plain(result), out, 0)


def _emit_text(obj, out, depth):
    pad = "  " * depth
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                out.write("%s%s:\n" % (pad, k))
                _emit_text(v, out, depth + 1)
            else:
                out.write("%s%s: %s\n" % (pad, k, json.dumps(v, sort_keys=True)))
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                out.write("%s-\n" % pad)
                _emit_text(v, out, depth + 1)
            else:
                out.write("%s- %s\n" % (pad, json.dumps(v, sort_keys=True)))
    else:
        out.write("%s%s\n" % (pad, obj))


def _flat(v):
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, (dict, list)) or not x for x in items) and len(json.dumps(v)) < 80


# -- commands ---------------------------------------------------------------

def cmd_lattice(args, job):
    L = job["lattice"]
    U, D, V = smith_normal_form(L.gram)
    basis = L.basis()
    out = {
        "gram": L.gram,
        "rank": L.rank,
        "det": L.det,
        "nondegenerate": L.nondegenerate,
        "parity": {L.labels[i]: L.parity(b) for i, b in enumerate(basis)},
        "smith": {"U": U, "D": D, "V": V},
    }
    if L.nondegenerate:
        dq = dual_quotient(L)
        out["coker"] = dq.coker_factors
        out["classes"] = {
            ",".join(map(str, chi)) or "0": list(dq.section(chi)) for chi in dq.classes()
        }
        eps = build_cocycle(L)
        out["cocycle"] = eps.eps_basis
        out["commutator"] = [[eps.commutator(a, b) for b in basis] for a in basis]
    else:
        out["coker"] = [d for d in D if d != 1]
    return out, 0


def cmd_symbol(args, job):
    text = args.ring
    if text is None:
        names = sorted(set(literal_symbols(args.f)) | set(literal_symbols(args.g)))
        ring = ScalarRing(names) if names else ScalarRing.parse("")
    else:
        ring = ScalarRing.parse(text)
    trunc = args.series_trunc
    f = parse_series(args.f, ring) if trunc is None else parse_series(args.f, ring, trunc)
    g = parse_series(args.g, ring) if trunc is None else parse_series(args.g, ring, trunc)
    val = cc_symbol(f, g)
    return {"ring": ring.describe(), "f": str(f), "g": str(g), "symbol": str(val),
            "json": scalar_to_json(val)}, 0


def _state(args, space):
    if args.state:
        return FockVector.from_json(space, _read_json_arg(args.state))
    charge = parse_lattice_vector(args.charge, space.lattice) if args.charge else None
    return space.vacuum(charge)


def _apply_op(op, v):
    """``h:alpha:n``, ``L:n`` or ``shift:gamma``."""
    L = v.space.lattice
    kind, _, rest = op.partition(":")
    try:
        if kind == "h":
            alpha, _, n = rest.rpartition(":")
            return apply_h(parse_vector(alpha, L.rank), int(n), v)
        if kind == "L":
            return sugawara_L(int(rest), v)
        if kind == "shift":
            return apply_shift(parse_lattice_vector(rest, L), v, build_cocycle(L))
    except ValueError as exc:
        raise ConfigError("bad operator %r: %s" % (op, exc)) from exc
    raise ConfigError("unknown operator %r (use h:alpha:n, L:n or shift:gamma)" % op)


def cmd_state(args, job):
    space = FockSpace(job["lattice"], cutoff=args.hard_cutoff)
    v = _state(args, space)
    for op in args.op or []:
        v = _apply_op(op, v)
    return {"state": v.to_json(), "weights": [str(w) for w in v.weights()]}, 0


def cmd_vertex(args, job):
    L = job["lattice"]
    space = FockSpace(L)
    gamma = parse_lattice_vector(args.gamma, L)
    v = _state(args, space)
    lo, hi = job["window"]
    exp = vertex_apply(gamma, v, (lo, hi), build_cocycle(L))
    return {"gamma": gamma, "expansion": exp.restrict(lo, hi).to_json()}, 0


def cmd_ope(args, job):
    L = job["lattice"]
    space = FockSpace(L)
    g1, g2 = parse_lattice_vector(args.g1, L), parse_lattice_vector(args.g2, L)
    eps = build_cocycle(L)
    q, vec = ope_leading(space, g1, g2, eps)
    _, mu = top_scalar(space, g1, g2, eps)
    return {"g1": g1, "g2": g2, "pole_order": q, "top": vec.to_json(), "top_scalar": mu,
            "cocycle": eps(g1, g2)}, 0


def cmd_locality(args, job):
    L = job["lattice"]
    space = FockSpace(L)
    g1, g2 = parse_lattice_vector(args.g1, L), parse_lattice_vector(args.g2, L)
    N = args.N if args.N is not None else max(0, -L.pairing(g1, g2))
    v = _state(args, space)
    res = locality_residual(g1, g2, N, v, args.order, build_cocycle(L))
    out = {"g1": g1, "g2": g2, "N": N, "sign": koszul_sign(L, g1, g2), "zero": res.is_zero()}
    if not res.is_zero():
        (b, a), w = res.witness()
        out["witness"] = {"w_exponent": b, "z_exponent": a, "coefficient": w.to_json()}
    return out, 0


def _module(args, job):
    L = job["lattice"]
    chi = parse_vector(args.chi) if args.chi else ()
    rep = parse_vector(args.representative, L.rank) if getattr(args, "representative", None) else None
    return build_module(L, chi, job["cutoff"], rep)


def cmd_module(args, job):
    M = _module(args, job)
    L = M.lattice
    head = {"chi": M.chi, "offset": M.offset, "cutoff": M.cutoff}
    if args.action == "build":
        dims = M.graded_dimension()
        return dict(head, classes=[list(c) for c in module_classes(L)],
                    graded_dimension={str(w): n for w, n in dims.items()}), 0
    if args.action == "spectrum":
        alpha = parse_vector(args.alpha, L.rank) if args.alpha else L.basis()[0]
        sp = h0_spectrum(M, alpha)
        return dict(head, alpha=alpha, spectrum={str(k): sp[k] for k in sorted(sp)},
                    coset_ok=spectrum_coset_ok(M, alpha, sp)), 0
    eps = build_cocycle(L)
    report = {}
    ok = True
    for b in L.basis():
        nil = nilpotency_certificate(M, b)
        vb = vbar_properties(M, b, eps, max_weight=min(4, M.cutoff))
        sp = h0_spectrum(M, b)
        entry = {
            "nilpotency": {"ok": nil.ok, "max_index": {str(k): v for k, v in sorted(nil.max_index.items())}},
            "spectrum_coset_ok": spectrum_coset_ok(M, b, sp),
            "vbar": {k: (not v) for k, v in sorted(vb.items())},
        }
        ok = ok and nil.ok and entry["spectrum_coset_ok"] and all(entry["vbar"].values())
        report[",".join(map(str, b))] = entry
    return dict(head, certificates=report, ok=ok), (0 if ok else 1)


def _jet(text, L):
    return ConnectionJet.parse(L.rank, text) if text else ConnectionJet.zero(L.rank)


def cmd_support(args, job):
    M = _module(args, job)
    L = M.lattice
    v = FockVector.from_json(M.space, _read_json_arg(args.vector)) if args.vector else M.generator()
    action = FockAction(M.space)
    if args.nu:
        action = twist_action(_jet(args.nu, L), action)
    return {"chi": M.chi, "support": support_of_module(action, v).to_json()}, 0


def cmd_twist(args, job):
    L = job["lattice"]
    nu = _jet(args.nu, L)
    out = {"nu": nu.to_json(), "class": jet_class(nu, L).to_json()}
    if args.apply_to is not None:
        args.chi = args.apply_to
        M = _module(args, job)
        base = FockAction(M.space)
        before = support_of_module(base, M.generator())
        after = support_of_module(twist_action(nu, base), M.generator())
        out.update(chi=M.chi, support_before=before.to_json(), support_after=after.to_json(),
                   covariant=after == before.add(jet_class(nu, L), L))
    return out, 0


def cmd_gauge(args, job):
    L = job["lattice"]
    nu = _jet(args.nu, L)
    cw = parse_vector(args.gamma_check, L.rank) if args.gamma_check else L.zero()
    units = []
    for spec in args.unit or []:
        beta, sep, series = spec.partition(":")
        if not sep:
            raise ConfigError("--unit wants beta:series, e.g. 1:1+t")
        units.append((parse_vector(beta, L.rank), parse_series(series, trunc=job["trunc"])))
    moved = apply_gauge(cw, units, nu)
    return {"nu": nu.to_json(), "gauged": moved.to_json(),
            "class_before": jet_class(nu, L).to_json(), "class_after": jet_class(moved, L).to_json()}, 0


def cmd_verify(args, job):
    cfg = VerifyConfig(
        job["lattice"],
        cutoff=job["cutoff"],
        window=tuple(job["window"]),
        trunc=job["trunc"],
        seed=job["seed"],
        n_shift=args.n_shift,
    )
    if args.cases is not None:
        cfg.symbol_cases = cfg.spectral_cases = args.cases
    report = verify_suite(args.suite, cfg)
    return report, (0 if report["passed"] else 1)


# -- argument parser --------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("job")
    g.add_argument("--config", help="JSON or TOML job file; flags override it")
    g.add_argument("--gram", help="Gram matrix as JSON, e.g. [[2,1],[1,2]]")
    g.add_argument("--cutoff", type=int, help="weight cutoff W (default 6)")
    g.add_argument("--window", help="z-exponent window a:b (default -6:6)")
    g.add_argument("--trunc", type=int, help="series truncation K (default 12)")
    g.add_argument("--format", choices=("json", "text"), help="output format (default json)")
    g.add_argument("--seed", type=int, help="seed for randomized suites (default 0)")
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="latva", description="Lattice Heisenberg vertex algebras, exactly.")
    parser.add_argument("--version", action="version", version="latva " + __version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("lattice", parents=[common], help="lattice data")
    p.add_argument("action", choices=("info",))
    p.set_defaults(run=cmd_lattice)

    p = sub.add_parser("symbol", parents=[common], help="Contou-Carrere symbol <f, g>")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--ring", help="nilpotent symbols, e.g. e1:2,e2:3 (default: inferred, order 2)")
    p.add_argument("--series-trunc", type=int, help="treat both series as known below t^K")
    p.set_defaults(run=cmd_symbol)

    p = sub.add_parser("state", parents=[common], help="apply operators to a Fock state")
    p.add_argument("action", choices=("apply",))
    p.add_argument("--state", help="FockVector JSON, @file or - (default: vacuum)")
    p.add_argument("--charge", help="charge of the default vacuum state")
    p.add_argument("--op", action="append", help="h:alpha:n, L:n or shift:gamma; applied in order")
    p.add_argument("--hard-cutoff", type=int, help="refuse to create kets above this weight")
    p.set_defaults(run=cmd_state)

    p = sub.add_parser("vertex", parents=[common], help="expand V^gamma(z) v")
    p.add_argument("--gamma", required=True)
    p.add_argument("--state")
    p.add_argument("--charge")
    p.set_defaults(run=cmd_vertex)

    p = sub.add_parser("ope", parents=[common], help="leading term of V^g1(z) e^g2")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.set_defaults(run=cmd_ope)

    p = sub.add_parser("locality", parents=[common], help="(z-w)^N locality residual")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--N", type=int, help="default max(0, -c(g1,g2))")
    p.add_argument("--order", type=int, default=2, help="half-width of the coefficient box")
    p.add_argument("--state")
    p.add_argument("--charge")
    p.set_defaults(run=cmd_locality)

    p = sub.add_parser("module", parents=[common], help="irreducible modules")
    p.add_argument("action", choices=("build", "spectrum", "certify"))
    p.add_argument("--chi", help="class in Gamma^dual/c(Gamma), Smith coordinates")
    p.add_argument("--representative", help="explicit offset in the class")
    p.add_argument("--alpha", help="direction for 'spectrum'")
    p.set_defaults(run=cmd_module)

    p = sub.add_parser("support", parents=[common], help="spectral support of a module vector")
    p.add_argument("--module", dest="chi", help="module class chi")
    p.add_argument("--vector", help="FockVector JSON (default: generator)")
    p.add_argument("--nu", help="optional twist jet")
    p.set_defaults(run=cmd_support)

    p = sub.add_parser("twist", parents=[common], help="twist by a connection jet")
    p.add_argument("--nu", required=True, help="[[n, covector], ...] or rank-1 literal like 1/2*t^-1")
    p.add_argument("--apply-to", help="module class whose support to move")
    p.set_defaults(run=cmd_twist, representative=None)

    p = sub.add_parser("gauge", parents=[common], help="gauge move on a jet")
    p.add_argument("--nu", help="jet (default zero)")
    p.add_argument("--gamma-check", help="integral coweight of t^coweight")
    p.add_argument("--unit", action="append", help="beta:series, a valuation-0 unit")
    p.set_defaults(run=cmd_gauge)

    p = sub.add_parser("verify", parents=[common], help="conformance suites")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--n-shift", type=int, default=0,
                   help="offset added to the locality order N (negative control: -1)")
    p.add_argument("--cases", type=int, help="randomized cases for symbol/spectral suites")
    p.set_defaults(run=cmd_verify)
    return parser


# flags whose values may start with "-" (negative vectors, windows, jets)
_VALUE_FLAGS = {
    "--window", "--gamma", "--g1", "--g2", "--charge", "--chi", "--module", "--alpha",
    "--representative", "--gamma-check", "--nu", "--unit", "--gram", "--n-shift",
}


def _glue(argv):
    """Rewrite ``--flag -3:0`` as ``--flag=-3:0`` so argparse keeps the value."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else "%s=%s" % (tok, nxt))
        else:
            out.append(tok)
    return out


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue(argv))
    try:
        job = resolve_job(args)
        result, code = args.run(args, job)
    except TruncationError as exc:
        sys.stderr.write("latva: truncation insufficient: %s\n" % exc)
        return 3
    except LatvaError as exc:
        kind = "cocycle mismatch" if isinstance(exc, CocycleMismatch) else type(exc).__name__
        sys.stderr.write("latva: %s: %s\n" % (kind, exc))
        return 2
    emit(result, job["format"], out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
