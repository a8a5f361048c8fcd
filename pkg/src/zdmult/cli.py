"""``zdmult`` command line.

Structured results go to stdout as JSON (``--json`` for one compact line),
short human-readable summaries to stderr.  Exit codes: 0 verdict computed,
1 usage error, 2 search exhausted, 3 hypothesis violated.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Sequence

from . import certificates as certs
from . import constructions as C
from . import genpoly as gp
from .algebra import is_commutative, left_rep, right_rep
from .catalog import shipped_catalog
from .errors import HypothesisViolation, SearchExhausted, StraddleError, ZdmultError
from .largeness import ADDITIVE, Box, FiniteSet, cube, v2_parity_set
from .largeness import contains_ipr, density_estimate, psstar_window_check, syndetic_witness, thick_witness
from .specfile import (
    SpecError,
    dumps,
    load_spec,
    make_spec,
    multiplication_of,
    parse_matrix,
    parse_numbers,
    parse_vector,
    parse_vector_list,
    spec_hash,
)
from .structure import decompose_normalizer, in_centralizer, in_normalizer, is_automorphism, preserves_class

EXIT_OK, EXIT_USAGE, EXIT_EXHAUSTED, EXIT_HYPOTHESIS = 0, 1, 2, 3
DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(message)


class _Out:
    def __init__(self, compact: bool):
        self.compact = compact

    def emit(self, obj) -> None:
        sys.stdout.write(dumps(obj, self.compact) + "\n")

    @staticmethod
    def say(text: str) -> None:
        sys.stderr.write(text.rstrip() + "\n")


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# ring / repr / structure


def _cmd_ring(a, out: _Out) -> int:
    if a.ring_cmd == "catalog":
        rows = []
        for name, m in shipped_catalog().items():
            rows.append({"name": name, "label": m.label, "dim": m.dim, "proper": m.is_proper,
                         "status": m.zero_divisor_status.kind})
            out.say(f"{name:12s} d={m.dim}  {m.zero_divisor_status.kind}")
        out.emit({"catalog": rows})
        return EXIT_OK
    if a.ring_cmd == "show":
        m, doc = load_spec(a.spec)
        info = {
            "spec": doc,
            "sha256": spec_hash(doc),
            "dim": m.dim,
            "label": m.label,
            "associative": m.assoc_checked,
            "commutative": is_commutative(m),
            "zero_divisors": m.zero_divisor_status.to_dict(),
            "proper": m.is_proper,
            "tensor": m.sc,
        }
        out.say(f"{m.label or a.spec}: d={m.dim}, {'proper' if m.is_proper else m.zero_divisor_status.kind}")
        out.emit(info)
        return EXIT_OK
    # define
    kind = a.kind
    if kind == "polynomial":
        if not a.coeffs:
            raise UsageError("--coeffs is required for kind polynomial")
        coeffs = list(parse_vector(a.coeffs))
        payload, dim = {"coefficients": coeffs}, len(coeffs) - 1
    elif kind == "quaternion":
        payload, dim = {}, 4
    elif kind == "scaled_z":
        if a.n is None:
            raise UsageError("--n is required for kind scaled_z")
        payload, dim = {"n": a.n}, 1
    elif kind == "raw":
        if not a.tensor:
            raise UsageError("--tensor is required for kind raw")
        tensor = parse_numbers(a.tensor)
        payload, dim = {"tensor": tensor}, len(tensor)
    else:
        if not (a.base and a.matrix):
            raise UsageError("--base and --matrix are required for kind acted")
        _, base_doc = load_spec(a.base)
        T = parse_matrix(a.matrix)
        payload, dim = {"base": base_doc, "matrix": T}, base_doc["dim"]
    doc = make_spec(kind, payload, dim, a.label or "")
    m = multiplication_of(doc)
    if a.output:
        _write(a.output, dumps(doc) + "\n")
        out.say(f"wrote {a.output}")
    out.say(f"defined {kind} multiplication, d={m.dim}, {'proper' if m.is_proper else m.zero_divisor_status.kind}")
    out.emit({"spec": doc, "sha256": spec_hash(doc), "proper": m.is_proper})
    return EXIT_OK


def _cmd_repr(a, out: _Out) -> int:
    m, doc = load_spec(a.spec)
    x = parse_vector(a.vector)
    res = {"x": list(x), "left": left_rep(m, x), "right": right_rep(m, x), "spec_sha256": spec_hash(doc)}
    out.say(f"representations of {list(x)} under {m.label or a.spec}")
    out.emit(res)
    return EXIT_OK


def _emit_cert(out: _Out, cert: dict, path: str | None) -> None:
    if path:
        _write(path, dumps(cert) + "\n")
        out.say(f"certificate written to {path}")
    out.emit(cert)


def _cmd_align(a, out: _Out) -> int:
    A, da = load_spec(a.spec_a)
    B, db = load_spec(a.spec_b)
    payload = certs.alignment_payload(A, B)
    cert = certs.certificate("alignment", {"A": da, "B": db}, payload)
    if payload["verdict"] == "aligned":
        out.say(f"aligned: v = {payload['v']}, w = {payload['w']}")
    else:
        out.say(f"not aligned: intersection rank {payload['intersection_rank']} < {A.dim}")
    _emit_cert(out, cert, a.output)
    return EXIT_OK


def _cmd_membership(a, out: _Out) -> int:
    m, doc = load_spec(a.spec)
    T = parse_matrix(a.matrix)
    if T.shape != (m.dim, m.dim):
        raise UsageError(f"matrix must be {m.dim}x{m.dim}")
    payload: dict = {"matrix": T}
    if a.cmd == "centralizer":
        v = in_centralizer(m, T)
        payload.update(member=v is not None, v=list(v) if v is not None else None)
    elif a.cmd == "automorphism":
        payload["member"] = is_automorphism(m, T)
    else:
        member = in_normalizer(m, T)
        payload["member"] = member
        if member:
            A, v = decompose_normalizer(m, T)
            payload["decomposition"] = {"A": A, "v": list(v)}
    out.say(f"{a.cmd}: {'member' if payload['member'] else 'not a member'}")
    _emit_cert(out, certs.certificate(a.cmd, {"ring": doc}, payload), a.output)
    return EXIT_OK


def _cmd_preserves(a, out: _Out) -> int:
    m, doc = load_spec(a.spec)
    T = parse_matrix(a.matrix)
    verdict, reason = preserves_class(m, T, a.cls)
    out.say(f"{a.cls}: {'preserved' if verdict else 'not preserved'} ({reason})")
    payload = {"matrix": T, "class": a.cls, "preserves": verdict, "reason": reason}
    _emit_cert(out, certs.certificate("preserves", {"ring": doc}, payload), a.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# constructions


def _specs(names: Sequence[str], prefix: str) -> tuple[dict, dict]:
    mults, docs = {}, {}
    for i, name in enumerate(names):
        m, doc = load_spec(name)
        mults[f"{prefix}{i}"] = m
        docs[f"{prefix}{i}"] = doc
    return mults, docs


def _cmd_construct(a, out: _Out) -> int:
    k = a.construct_cmd
    if k == "avoid":
        base, bdoc = load_spec(a.base)
        mults, docs = _specs(a.avoid, "avoid")
        G = parse_vector_list(a.G) if a.G else cube(a.cube, base.dim)
        x = C.find_avoiding_dilator(base, list(mults.values()), G, radius=a.radius)
        payload = {"G": [list(g) for g in G], "x": list(x)}
        out.say(f"avoiding dilator x = {list(x)}")
        cert = certs.certificate("avoid", {"base": bdoc, **docs}, payload)
    elif k == "thick":
        tm, tdocs = _specs(a.thick, "thick")
        am, adocs = _specs(a.avoid, "avoid")
        S = C.build_thick_avoiding(list(tm.values()), list(am.values()), a.stages, radius=a.radius)
        payload = certs.staged_payload(S, certs.role_ref({**tm, **am}))
        out.say("stages x_n: " + ", ".join(str(list(s.x)) for s in S.stages))
        cert = certs.certificate("thick", {**tdocs, **adocs}, payload)
    elif k == "ipstar-nonsyn":
        mm, mdocs = _specs(a.mults, "mult")
        S = C.build_ipstar_nonsyndetic(list(mm.values()), a.stages, radius=a.radius)
        payload = certs.staged_payload(S, certs.role_ref(mm))
        if a.window:
            payload["difference_report"] = C.verify_difference_bound(S, a.window).to_dict()
        out.say("stages x_n: " + ", ".join(str(list(s.x)) for s in S.stages))
        cert = certs.certificate("ipstar-nonsyn", mdocs, payload)
    elif k == "ip-sep":
        A, da = load_spec(a.A)
        B, db = load_spec(a.B)
        seq = C.build_ip_separating(A, B, a.n, radius=a.radius)
        rep = C.verify_ip_separating(A, B, seq.generators)
        payload = {**seq.to_dict(certs.role_ref({"A": A, "B": B})), "verification": rep.to_dict()}
        out.say(f"generators {[list(g) for g in seq.generators]}; {rep.triples} triples, "
                f"{'no' if rep.ok else len(rep.solutions)} solutions")
        cert = certs.certificate("ip-sep", {"A": da, "B": db}, payload)
    else:
        m, doc = load_spec(a.ring)
        seq = C.build_ip_order_separating(m, a.n, radius=a.radius)
        rep = C.verify_ip_order(m, seq.generators)
        payload = {**seq.to_dict(certs.role_ref({"ring": m})), "verification": rep.to_dict()}
        out.say(f"generators {[list(g) for g in seq.generators]}; ordered: {rep.ok}")
        cert = certs.certificate("ip-order", {"ring": doc}, payload)
    _emit_cert(out, cert, a.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# largeness checks


def _load_set(text: str, dim: int | None):
    if text in ("v2:even", "v2:odd"):
        return v2_parity_set(0 if text.endswith("even") else 1)
    if not os.path.isfile(text):
        raise UsageError(f"set {text!r} is neither a file nor v2:even / v2:odd")
    return FiniteSet.read(text, dim)


def _op(text: str):
    if text == ADDITIVE:
        return ADDITIVE, None
    m, doc = load_spec(text)
    return m, doc


def _cmd_check(a, out: _Out) -> int:
    op, doc = _op(a.op)
    dim = None if op == ADDITIVE else op.dim
    A = _load_set(a.set, dim)
    d = A.dim
    k = a.check_cmd
    if k == "syndetic":
        shifts = parse_vector_list(a.shifts) if a.shifts else Box.cube(a.shift_box, d).points(exclude_zero=op != ADDITIVE)
        rep = syndetic_witness(A, op, shifts, Box.cube(a.window, d), kmax=a.kmax)
    elif k == "thick":
        box = Box.cube(a.search_box, d) if a.search_box else None
        rep = thick_witness(A, op, parse_vector_list(a.F), box)
    elif k == "psstar":
        if op == ADDITIVE:
            raise UsageError("psstar needs a multiplication")
        if a.samples:
            xs = parse_vector_list(a.samples)
        else:
            rng = random.Random(a.seed)
            xs = []
            while len(xs) < a.sample_count:
                v = tuple(rng.randint(-a.sample_radius, a.sample_radius) for _ in range(d))
                if any(v):
                    xs.append(v)
        rep = psstar_window_check(A, op, parse_vector_list(a.F), a.N, xs)
    elif k == "ipr":
        rep = contains_ipr(A, op, a.r, Box.cube(a.box, d), max_tuples=a.max_tuples)
    else:
        value = density_estimate(A, op, parse_vector_list(a.F), Box.cube(a.box, d), with_shift=a.with_shift)
        out.say(f"density lower bound along the sampled dilates: {value}")
        out.emit({"property": "density", "value": value, "approx": float(value), "box": a.box,
                  "op_sha256": spec_hash(doc) if doc else ADDITIVE})
        return EXIT_OK
    out.say(f"{rep.property}: {rep.verdict}")
    res = rep.to_dict()
    res["op_sha256"] = spec_hash(doc) if doc else ADDITIVE
    out.emit(res)
    return EXIT_OK


# ---------------------------------------------------------------------------
# generalized polynomials


def _parse_box(text: str, dim: int):
    parts = [p.strip() for p in text.split(",")]
    pairs = []
    for p in parts:
        lo, sep, hi = p.partition(":")
        if not sep:
            raise UsageError("box syntax is lo:hi[,lo:hi...]")
        pairs.append((int(lo), int(hi)))
    if len(pairs) == 1:
        pairs = pairs * dim
    if len(pairs) != dim:
        raise UsageError(f"box has {len(pairs)} ranges for {dim} variable(s)")
    return Box(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))


def _cmd_genpoly(a, out: _Out) -> int:
    f = gp.parse(a.expr, a.dim)
    k = a.genpoly_cmd
    if k == "parse":
        out.say(f"depth {f.depth}, variables {', '.join(f.variables)}")
        out.emit({"expression": gp.pretty(f), "depth": f.depth, "variables": list(f.variables)})
        return EXIT_OK
    if k == "eval":
        x = parse_vector(a.x)
        val = gp.evaluate(f, x, a.precision, a.max_precision)
        dist = gp.nearest_int_distance(f, x, a.precision, a.max_precision)
        out.say(f"f({list(x)}) ~ {val.midpoint():.12g}, distance to Z ~ {dist.midpoint():.6g}")
        out.emit({"x": list(x), "value": val.to_dict(), "distance": dist.to_dict()})
        return EXIT_OK
    if k == "scan":
        res = gp.return_set_scan(f, a.eps, _parse_box(a.box, f.dim), precision=a.precision,
                                 max_precision=a.max_precision)
        if a.output:
            _write(a.output, res.members.to_text())
        if a.straddles:
            _write(a.straddles, "".join(json.dumps(s, sort_keys=True) + "\n" for s in res.straddles))
        out.say(f"{len(res.members)} certified members, {res.excluded} excluded, {len(res.straddles)} straddles")
        out.emit(res.to_dict())
        return EXIT_OK
    gens = parse_vector_list(a.gens)
    rep = gp.fs_intersection_check(f, a.eps, gens, precision=a.precision, max_precision=a.max_precision)
    out.say(f"{len(rep.details['below'])} of {rep.details['fs_size']} finite sums certified below {a.eps}")
    out.emit(rep.to_dict())
    return EXIT_OK


def _cmd_verify(a, out: _Out) -> int:
    with open(a.certificate, encoding="utf-8") as fh:
        try:
            cert = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"certificate is not JSON: {exc.msg}") from None
    res = certs.verify_certificate(cert)
    out.say(f"{res['kind']} certificate: {'verified' if res['verified'] else 'FAILED'}")
    out.emit(res)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zdmult", description="Multiplications on Z^d: structure, constructions, certificates.")
    p.add_argument("--json", action="store_true", help="compact single-line JSON output (allowed anywhere)")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    ring = sub.add_parser("ring", help="define, show or list multiplications")
    rs = ring.add_subparsers(dest="ring_cmd", required=True, parser_class=_Parser)
    d = rs.add_parser("define")
    d.add_argument("--kind", required=True, choices=["polynomial", "quaternion", "scaled_z", "raw", "acted"])
    d.add_argument("--coeffs", help="polynomial coefficients, lowest degree first, e.g. [1,0,1]")
    d.add_argument("--n", type=int)
    d.add_argument("--tensor")
    d.add_argument("--base")
    d.add_argument("--matrix")
    d.add_argument("--label")
    d.add_argument("-o", "--output")
    s = rs.add_parser("show")
    s.add_argument("spec")
    rs.add_parser("catalog")

    r = sub.add_parser("repr", help="left and right representation matrices")
    r.add_argument("spec")
    r.add_argument("vector")

    al = sub.add_parser("align", help="decide alignment of two multiplications")
    al.add_argument("spec_a")
    al.add_argument("spec_b")
    al.add_argument("-o", "--output")

    for name in ("normalizer", "centralizer", "automorphism"):
        q = sub.add_parser(name, help=f"{name} membership")
        q.add_argument("spec")
        q.add_argument("matrix")
        q.add_argument("-o", "--output")

    pr = sub.add_parser("preserves", help="does T preserve a largeness class")
    pr.add_argument("spec")
    pr.add_argument("matrix")
    pr.add_argument("cls", metavar="class")
    pr.add_argument("-o", "--output")

    c = sub.add_parser("construct", help="explicit constructions")
    cs = c.add_subparsers(dest="construct_cmd", required=True, parser_class=_Parser)
    av = cs.add_parser("avoid")
    av.add_argument("--base", required=True)
    av.add_argument("--avoid", nargs="*", default=[])
    g = av.add_mutually_exclusive_group(required=True)
    g.add_argument("--G")
    g.add_argument("--cube", type=int)
    th = cs.add_parser("thick")
    th.add_argument("--thick", nargs="+", required=True)
    th.add_argument("--avoid", nargs="*", default=[])
    th.add_argument("--stages", type=int, required=True)
    ip = cs.add_parser("ipstar-nonsyn")
    ip.add_argument("--mults", nargs="+", required=True)
    ip.add_argument("--stages", type=int, required=True)
    ip.add_argument("--window", type=int, default=0, help="attach a difference report over cube(window)")
    sp = cs.add_parser("ip-sep")
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--n", type=int, required=True)
    od = cs.add_parser("ip-order")
    od.add_argument("--ring", required=True)
    od.add_argument("--n", type=int, required=True)
    for q in (av, th, ip, sp, od):
        q.add_argument("--radius", type=int, help="candidate sup-norm bound (default: ZDMULT_SEARCH_RADIUS or 10000)")
        q.add_argument("-o", "--output")

    ch = sub.add_parser("check", help="finite-window largeness checks")
    chs = ch.add_subparsers(dest="check_cmd", required=True, parser_class=_Parser)
    sy = chs.add_parser("syndetic")
    sy.add_argument("--shifts")
    sy.add_argument("--shift-box", type=int, default=2)
    sy.add_argument("--window", type=int, default=10)
    sy.add_argument("--kmax", type=int, default=3)
    tk = chs.add_parser("thick")
    tk.add_argument("--F", required=True)
    tk.add_argument("--search-box", type=int)
    ps = chs.add_parser("psstar")
    ps.add_argument("--F", required=True)
    ps.add_argument("--N", type=int, default=3)
    ps.add_argument("--samples")
    ps.add_argument("--sample-count", type=int, default=20)
    ps.add_argument("--sample-radius", type=int, default=20)
    ps.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ir = chs.add_parser("ipr")
    ir.add_argument("--r", type=int, required=True)
    ir.add_argument("--box", type=int, required=True)
    ir.add_argument("--max-tuples", type=int, default=10 ** 6)
    de = chs.add_parser("density")
    de.add_argument("--F", required=True)
    de.add_argument("--box", type=int, required=True)
    de.add_argument("--with-shift", action="store_true")
    for q in (sy, tk, ps, ir, de):
        q.add_argument("--set", required=True, help="FiniteSet file, v2:even or v2:odd")
        q.add_argument("--op", required=True, help="spec file, catalog name, or 'additive'")

    gpp = sub.add_parser("genpoly", help="generalized polynomials")
    gps = gpp.add_subparsers(dest="genpoly_cmd", required=True, parser_class=_Parser)
    def gsub(name: str):
        q = gps.add_parser(name)
        q.add_argument("expr")
        q.add_argument("--dim", type=int)
        q.add_argument("--precision", type=int, default=gp.DEFAULT_PRECISION)
        q.add_argument("--max-precision", type=int, default=gp.MAX_PRECISION)
        return q

    gsub("parse")
    gsub("eval").add_argument("x")
    gsc = gsub("scan")
    gsc.add_argument("--eps", type=str, required=True)
    gsc.add_argument("--box", required=True, help="lo:hi (all coordinates) or lo:hi,lo:hi,...")
    gsc.add_argument("-o", "--output", help="FiniteSet file for the members")
    gsc.add_argument("--straddles", help="side-channel file for unresolved points")
    gfs = gsub("fs")
    gfs.add_argument("--eps", type=str, required=True)
    gfs.add_argument("--gens", required=True)

    v = sub.add_parser("verify", help="re-verify a certificate")
    v.add_argument("certificate")
    return p


_DISPATCH = {
    "ring": _cmd_ring,
    "repr": _cmd_repr,
    "align": _cmd_align,
    "normalizer": _cmd_membership,
    "centralizer": _cmd_membership,
    "automorphism": _cmd_membership,
    "preserves": _cmd_preserves,
    "construct": _cmd_construct,
    "check": _cmd_check,
    "genpoly": _cmd_genpoly,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    compact = "--json" in argv  # accepted anywhere on the line
    argv = [t for t in argv if t != "--json"]
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _Out.say(f"usage error: {exc}")
        return EXIT_USAGE
    out = _Out(compact)
    try:
        return _DISPATCH[args.cmd](args, out)
    except SearchExhausted as exc:
        stage = f" (stage {exc.stage})" if exc.stage is not None else ""
        _Out.say(f"search exhausted{stage}: {exc}")
        out.emit({"error": "search-exhausted", "message": str(exc), "stage": exc.stage, "constraint": exc.constraint})
        return EXIT_EXHAUSTED
    except HypothesisViolation as exc:
        _Out.say(f"hypothesis violation: {exc}")
        out.emit({"error": "hypothesis-violation", "message": str(exc)})
        return EXIT_HYPOTHESIS
    except StraddleError as exc:
        _Out.say(f"unresolved: {exc}")
        out.emit({"error": "straddle", "message": str(exc), "precision": exc.precision})
        return EXIT_EXHAUSTED
    except (UsageError, SpecError, certs.CertificateError, ZdmultError, ValueError, KeyError, OSError) as exc:
        _Out.say(f"usage error: {exc}")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
