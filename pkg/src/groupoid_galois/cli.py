"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 theorem violation (or golden mismatch),
3 failed precondition or axiom, 4 unreadable or malformed input.
"""

import argparse
import difflib
import json
import sys
from pathlib import Path

from . import io
from .action import predicates
from .algebra import BaseRing, PartitionSubalgebra, bracket_parse, bracket_render
from .catalog import CATALOG, random_action
from .constructions import globalize, orthogonalize, verify_globalization
from .correspondence import (
    is_strongly_galois,
    render_table,
    run_global_correspondence,
    run_orthogonal_correspondence,
    run_strong_correspondence,
)
from .errors import (
    GroupoidGaloisError,
    NotWide,
    ParseError,
    PreconditionError,
    TheoremViolation,
    ValidationError,
)
from .galois import invariants, is_galois, stabilizer, strength_failures
from .groupoid import (
    DEFAULT_CAP,
    Subgroupoid,
    coarse_groupoid,
    enumerate_wide_subgroupoids,
    product_with_group,
)
from .properties import CHECKS, FuzzConfig, fuzz

EXIT_OK, EXIT_USAGE, EXIT_THEOREM, EXIT_PRECONDITION, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class GoldenMismatch(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- helpers -------------------------------------------------------------------------

def _load_action(args):
    doc = io.read_json(args.input)
    return io.load_action(doc, args.base, None if args.input in (None, "-") else args.input)


def _subgroupoid(action, specs):
    """Wide subgroupoid from morphism names; objects are added implicitly."""
    G = action.groupoid
    names = [n for spec in specs or [] for n in _split(spec)]
    try:
        members = frozenset(G.objects) | {G.index(n) for n in names}
    except KeyError as exc:
        raise ParseError(f"unknown morphism {exc}") from None
    H = Subgroupoid(G, members)
    if not H.is_subgroupoid:
        raise NotWide(f"{sorted(H.names)} is not closed under composition and inverses")
    return H


def _base(text):
    try:
        return BaseRing.parse(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _split(spec):
    return [s.strip() for s in spec.split(";") if s.strip()]


def _subalgebra(action, text):
    if text is None:
        return PartitionSubalgebra.discrete(action.algebra)
    return bracket_parse(text, action.algebra)


def _names(G, members):
    return [G.names[g] for g in sorted(members)]


def _emit(args, out, doc=None, text=None):
    if args.format == "json" or text is None:
        body = io.dumps(doc)
    else:
        body = io.normalize(text)
    golden = getattr(args, "golden", None)
    if golden:
        path = Path(golden)
        if getattr(args, "update_golden", False):
            path.write_text(body, encoding="utf-8", newline="\n")
        else:
            expected = io.normalize(io.read_text(golden))
            if body != expected:
                diff = "".join(difflib.unified_diff(expected.splitlines(True), body.splitlines(True),
                                                    "golden", "output"))
                out.write(body)
                raise GoldenMismatch(diff)
    out.write(body)


# -- commands ------------------------------------------------------------------------

def cmd_validate(args, out):
    doc = io.read_json(args.input)
    kind = io.kind_of(doc)
    if kind == "action":
        a = io.load_action(doc, args.base, None if args.input in (None, "-") else args.input)
        res = {"valid": True, "kind": "action", "m": a.m, "morphisms": len(a.groupoid),
               "predicates": predicates(a)}
    else:
        G = io.load_groupoid(doc)
        res = {"valid": True, "kind": kind, "morphisms": len(G), "objects": _names(G, G.objects)}
    _emit(args, out, res, f"valid {res['kind']}")


def cmd_orthogonalize(args, out):
    a = _load_action(args)
    o = orthogonalize(a)
    G = a.groupoid
    emb = {G.names[e]: [[i + 1, k + 1] for i, k in sorted(mp.items())] for e, mp in o.embeddings.items()}
    _emit(args, out, io.action_document(o.action, {"embedding": emb}))


def cmd_globalize(args, out):
    a = _load_action(args)
    g = globalize(a, order_seed=args.seed)
    G = a.groupoid
    emb = {G.names[e]: [[i + 1, k + 1] for i, k in sorted(mp.items())] for e, mp in g.embeddings.items()}
    rep = verify_globalization(a, g.action, g.embeddings)
    _emit(args, out, io.action_document(g.action, {"embedding": emb, "verification": rep.as_dict()}))


def cmd_invariants(args, out):
    a = _load_action(args)
    H = _subgroupoid(a, args.subgroupoid) if args.subgroupoid else None
    C = invariants(a, H)
    label = "𝒢" if H is None else H.label()
    doc = {"subgroupoid": _names(a.groupoid, H.members) if H else None,
           "subalgebra": C.to_json(), "brackets": bracket_render(C)}
    _emit(args, out, doc, f"{label} ↔ {bracket_render(C) or 'A'}")


def cmd_galois_check(args, out):
    a = _load_action(args)
    res = is_galois(a)
    if res:
        doc = {"galois": True, "witness": [[x.to_json(), y.to_json()] for x, y in res.witness.pairs]}
        text = f"Galois; coordinates x_i = y_i = e_i, i = 1..{a.m}"
    else:
        g, k = res.obstruction
        doc = {"galois": False, "obstruction": {"g": a.groupoid.names[g], "index": k + 1}}
        text = f"not Galois: {a.groupoid.names[g]} fixes index {k + 1}"
    if args.strongly:
        rep = is_strongly_galois(a, args.cap)
        doc["strongly_galois"] = rep.strongly_galois
        doc["reason"] = rep.reason
        if rep.pair:
            doc["pair"] = [H.names for H in rep.pair]
        text += f"\n{'strongly Galois' if rep else 'not strongly Galois: ' + rep.reason}"
    _emit(args, out, doc, text)


def cmd_strong_check(args, out):
    a = _load_action(args)
    C = _subalgebra(a, args.subalgebra)
    st = stabilizer(a, C)
    bad = strength_failures(a, C, st)
    G = a.groupoid
    doc = {
        "subalgebra": bracket_render(C),
        "alpha_strong": not bad,
        "failures": [{"g": G.names[g], "h": G.names[h], "index": j + 1} for g, h, j in bad[:20]],
        "stabilizer": _names(G, st.members),
    }
    text = "alpha-strong" if not bad else "not alpha-strong: " + ", ".join(
        f"({G.names[g]}, {G.names[h]}) at {j + 1}" for g, h, j in bad[:5])
    _emit(args, out, doc, text)


def cmd_stabilizer(args, out):
    a = _load_action(args)
    C = _subalgebra(a, args.subalgebra)
    st = stabilizer(a, C)
    G = a.groupoid
    doc = {"subalgebra": bracket_render(C), "members": _names(G, st.members),
           "is_wide_subgroupoid": st.is_wide_subgroupoid}
    label = st.as_subgroupoid(G).label() if st.is_wide_subgroupoid else "{" + ", ".join(doc["members"]) + "}"
    _emit(args, out, doc, label)


def cmd_enumerate(args, out):
    doc = io.read_json(args.input)
    if io.kind_of(doc) == "action":
        G = io.load_action(doc, args.base, None if args.input in (None, "-") else args.input).groupoid
    else:
        G = io.load_groupoid(doc)
    W = enumerate_wide_subgroupoids(G, args.cap)
    res = {"count": len(W), "subgroupoids": [H.names for H in W]}
    text = "\n".join(H.label() for H in W) + f"\n{len(W)} wide subgroupoids"
    _emit(args, out, res, text)


RUNNERS = {
    "orthogonal": run_orthogonal_correspondence,
    "strong": run_strong_correspondence,
    "global": run_global_correspondence,
}


def cmd_correspondence(args, out):
    a = _load_action(args)
    table = RUNNERS[args.mode](a, args.cap)
    body = render_table(table, args.format)
    if args.format == "json":
        _emit(args, out, json.loads(body))
    else:
        _emit(args, out, None, body)


def cmd_example(args, out):
    if args.coarse is not None or args.product is not None:
        n = 1 if args.coarse is None else args.coarse
        if n < 1:
            raise UsageError("--coarse needs n >= 1")
        G = coarse_groupoid(n, [f"f{k + 1}" for k in range(n)])
        if args.product is not None:
            H = io.load_groupoid(io.read_json(args.product), args.product)
            if len(H.objects) != 1:
                raise PreconditionError("--product needs a group (one object)")
            G = product_with_group(G, H)
        _emit(args, out, G.to_json())
        return
    if args.name is None:
        raise UsageError("example needs a name, --coarse or --product")
    kw = {} if args.base is None else {"base": _base(args.base)}
    if args.name == "random":
        a = random_action(args.seed, args.max_m, args.max_morphisms, **kw)
    elif args.name in CATALOG:
        a = CATALOG[args.name](**kw)
    else:
        raise UsageError(f"unknown example {args.name!r}; choose from {', '.join(list(CATALOG) + ['random'])}")
    _emit(args, out, a.to_json())


def cmd_fuzz(args, out):
    checks = tuple(c for spec in args.checks or [] for c in spec.split(",") if c) or None
    if checks:
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise UsageError(f"unknown checks {unknown}")
    tri = {"yes": True, "no": False, "any": None}
    cfg = FuzzConfig(instances=args.instances, seed=args.seed, max_m=args.max_m,
                     max_morphisms=args.max_morphisms, checks=checks,
                     orthogonal=tri[args.orthogonal], global_=tri[args.global_], free=tri[args.free],
                     base=None if args.base is None else _base(args.base))
    rep = fuzz(cfg)
    lines = [f"{n}: ran {s['ran']}, skipped {s['skipped']}, failed {s['failed']}" for n, s in rep.stats.items()]
    lines += [f"FAIL seed={f['seed']} {f['check']}: {f['detail']}" for f in rep.failures]
    _emit(args, out, rep.as_dict(), "\n".join(lines) if lines else "no instances")


# -- parser --------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="groupoid-galois", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help, fmt="json", inp=True):
        sp = sub.add_parser(name, help=help)
        if inp:
            sp.add_argument("input", nargs="?", default="-", help="JSON file, '-' for stdin")
        sp.add_argument("--base", default=None, help="Q or Fp:p (overrides the input)")
        sp.add_argument("--format", choices=("text", "json"), default=fmt)
        sp.add_argument("--golden", default=None, help="compare output byte-exactly with this file")
        sp.add_argument("--update-golden", action="store_true", help="write the golden file instead")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "validate a groupoid or action")
    add("orthogonalize", cmd_orthogonalize, "orthogonalization as an action document")
    sp = add("globalize", cmd_globalize, "globalization with its (G1)-(G4) report")
    sp.add_argument("--seed", type=int, default=None, help="shuffle the germ order")
    sp = add("invariants", cmd_invariants, "invariant subalgebra of a wide subgroupoid")
    sp.add_argument("--subgroupoid", action="append", help="morphism names, ';'-separated or repeated")
    sp = add("galois-check", cmd_galois_check, "decide the Galois property")
    sp.add_argument("--strongly", action="store_true", help="also decide strongly Galois")
    sp = add("strong-check", cmd_strong_check, "decide alpha-strength of a subalgebra")
    sp.add_argument("--subalgebra", default=None, help='bracket notation, e.g. "[1,2][3,4]"')
    sp = add("stabilizer", cmd_stabilizer, "stabilizer of a subalgebra")
    sp.add_argument("--subalgebra", default=None, help="bracket notation")
    add("enumerate-subgroupoids", cmd_enumerate, "list wide subgroupoids", fmt="text")
    sp = add("correspondence", cmd_correspondence, "tabulate a Galois correspondence", fmt="text")
    sp.add_argument("--mode", choices=tuple(RUNNERS), default="strong")
    sp = add("example", cmd_example, "print a built-in example or build a groupoid", inp=False)
    sp.add_argument("name", nargs="?", default=None, help=f"one of {', '.join(CATALOG)}, random")
    sp.add_argument("--seed", type=int, default=0, help="seed for 'random'")
    sp.add_argument("--max-m", type=int, default=8)
    sp.add_argument("--max-morphisms", type=int, default=16)
    sp.add_argument("--coarse", type=int, default=None, help="coarse groupoid on n objects")
    sp.add_argument("--product", default=None, help="group file; multiplies the coarse groupoid")
    sp = add("fuzz", cmd_fuzz, "run the property checks on random actions", inp=False)
    sp.add_argument("--instances", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-m", type=int, default=8)
    sp.add_argument("--max-morphisms", type=int, default=16)
    sp.add_argument("--checks", action="append", help=f"comma-separated subset of: {', '.join(CHECKS)}")
    for flag, dest in (("--orthogonal", "orthogonal"), ("--global", "global_"), ("--free", "free")):
        sp.add_argument(flag, dest=dest, choices=("yes", "no", "any"), default="any")
    return p


def _exit_code(exc):
    if isinstance(exc, (TheoremViolation, GoldenMismatch)):
        return EXIT_THEOREM
    if isinstance(exc, (ParseError, OSError, UnicodeDecodeError)):
        return EXIT_IO
    if isinstance(exc, ValidationError) and exc.kinds <= {"Malformed"}:
        return EXIT_IO
    if isinstance(exc, (PreconditionError, GroupoidGaloisError)):
        return EXIT_PRECONDITION
    return EXIT_PRECONDITION


def _report_error(exc, code, fmt, err):
    if fmt == "json":
        doc = {"error": type(exc).__name__, "message": str(exc), "exit": code}
        if isinstance(exc, ValidationError):
            doc["violations"] = [v.as_dict() for v in exc.violations]
        if isinstance(exc, TheoremViolation) and exc.witness is not None:
            doc["witness"] = json.loads(json.dumps(exc.witness, default=str))
        if isinstance(exc, GoldenMismatch):
            doc["diff"] = str(exc)
        err.write(io.dumps(doc))
    else:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        if isinstance(exc, ValidationError):
            for v in exc.violations:
                err.write(f"  {v.kind}: {v.detail} {list(v.witness)}\n")


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    if args.command is None:
        parser.print_help(err)
        return EXIT_USAGE
    try:
        args.func(args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (GroupoidGaloisError, GoldenMismatch, OSError, UnicodeDecodeError) as exc:
        code = _exit_code(exc)
        _report_error(exc, code, args.format, err)
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
