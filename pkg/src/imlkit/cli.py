"""Command-line front end.

Exit status: 0 when the query is answered, 1 when it is answered negatively
(formula false, countermodel found, proof rejected), 2 on usage, input or
precondition errors.
"""

import argparse
import json
import sys

from .errors import ImlError
from .formula import atoms, depth, length, parse, show
from .io import frame_from_json, model_from_json, model_to_json, read_json
from .semantics import VARIANTS, countervaluation, extension, variant_name
from .structures import all_properties

VARIANT_CHOICES = ("new", "fs", "wij") + VARIANTS


class Usage(Exception):
    pass


def _names(frame, mask):
    return [frame.names[s] for s in range(frame.n) if mask >> s & 1]


def cmd_parse(args):
    f = parse(args.formula)
    doc = {"formula": show(f), "length": length(f), "depth": depth(f), "atoms": sorted(atoms(f))}
    return 0, doc, show(f)


def cmd_sat(args):
    m = model_from_json(read_json(args.model))
    s = m.frame.index(args.state)
    f = parse(args.formula)
    ok = bool(extension(m, f, args.variant) >> s & 1)
    doc = {"state": m.frame.names[s], "formula": show(f), "variant": variant_name(args.variant),
           "sat": ok}
    return (0 if ok else 1), doc, "true" if ok else "false"


def cmd_valid(args):
    doc = read_json(args.path)
    f = parse(args.formula)
    if "val" in doc and not args.frame:
        m = model_from_json(doc)
        ext = extension(m, f, args.variant)
        bad = _names(m.frame, m.frame.full & ~ext)
        ok = not bad
        out = {"kind": "model", "formula": show(f), "valid": ok, "failing_states": bad}
        text = "true" if ok else "false (fails at %s)" % ", ".join(bad)
        return (0 if ok else 1), out, text
    fr = frame_from_json(doc)
    w = countervaluation(fr, f, args.variant)
    out = {"kind": "frame", "formula": show(f), "valid": w is None}
    if w is None:
        return 0, out, "true"
    out["countermodel"] = model_to_json(w.model(fr))
    out["state"] = fr.names[w.state]
    val = ", ".join("%s={%s}" % (p, ",".join(_names(fr, x))) for p, x in w.val)
    return 1, out, "false (at %s with %s)" % (fr.names[w.state], val or "empty valuation")


def cmd_props(args):
    fr = frame_from_json(read_json(args.frame))
    props = all_properties(fr)
    text = "\n".join("%s: %s" % (k, "true" if v else "false") for k, v in props.items())
    return 0, props, text


def _progress(k, count):
    where = "" if k is None else " (through %d states)" % k
    print("examined %d frames%s" % (count, where), file=sys.stderr)


def cmd_decide(args):
    from .decide import SearchBudget, countermodel_search
    budget = SearchBudget(args.max_states, args.dedup, args.max_frames, args.time_limit)
    out = countermodel_search(parse(args.formula), args.spec, budget, args.variant,
                              progress=None if args.quiet else _progress)
    doc = out.as_dict()
    if out.found:
        text = "countermodel at %s (%d states)" % (doc["state"], out.model.n)
    else:
        text = out.verdict
    return (1 if out.found else 0), doc, text


def cmd_defcheck(args):
    from .decide import definability_check
    res = definability_check(parse(args.formula), args.predicate, args.max_states)
    doc = res.as_dict()
    if res.holds:
        text = "holds on all %d frames" % res.frames
    elif res.refuted_in_class:
        text = "fails: a %s frame refutes the formula" % res.predicate
    else:
        text = "fails: a frame outside %s validates the formula" % res.predicate
    return (0 if res.holds else 1), doc, text


def cmd_filter(args):
    from .filtration import is_filtration, largest_filtration, smallest_filtration
    m = model_from_json(read_json(args.model))
    f = parse(args.formula)
    build = largest_filtration if args.largest else smallest_filtration
    fm, class_of = build(m, f)
    conds = is_filtration(fm, m, f, class_of)
    doc = {"model": model_to_json(fm),
           "classes": {m.frame.names[s]: fm.frame.names[c] for s, c in enumerate(class_of)},
           "conditions": conds}
    return 0, doc, json.dumps(doc["model"])


def cmd_transform(args):
    from . import transform as tr
    m = model_from_json(read_json(args.model))
    smap = None
    if args.op == "intersect":
        out = tr.intersectional_update(m)
    elif args.op == "double":
        out, smap = tr.double_strict(m)
    elif args.op == "double-refl":
        out, smap = tr.double_reflexive(m)
    elif args.op == "partition":
        out, smap = tr.partitionize(m)
    else:
        if not args.other or args.state is None or args.other_state is None:
            raise Usage("join needs --other, --state and --other-state")
        m2 = model_from_json(read_json(args.other))
        out, _, _ = tr.rooted_join(m, args.state, m2, args.other_state)
    doc = {"model": model_to_json(out)}
    if smap is not None:
        doc["origin"] = {out.frame.names[i]: m.frame.names[s] for i, s in enumerate(smap.origin)}
    return 0, doc, json.dumps(doc["model"])


def cmd_prove(args):
    from .proofsys import check_derivation, derivation_from_json
    d = derivation_from_json(read_json(args.script))
    rep = check_derivation(d)
    doc = rep.as_dict()
    if not rep.ok:
        return 1, doc, "failed at line %d: %s" % (rep.failed_line, rep.reason)
    text = "ok"
    if args.semantic:
        from .decide import derivation_soundness
        sound = derivation_soundness(d, args.semantic)
        doc["semantic"] = sound.as_dict()
        if not sound.ok:
            return 1, doc, "ok, but line %d fails on a frame" % sound.failure[0]
        text = "ok (lines hold on all frames up to %d states)" % args.semantic
    return 0, doc, text


def build_parser():
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "text"), default=None,
                     help="output format (default depends on the command)")

    p = argparse.ArgumentParser(prog="imlkit", description="Intuitionistic modal logic toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[fmt], help="parse and pretty-print a formula")
    s.add_argument("formula")
    s.set_defaults(func=cmd_parse, default_format="text")

    s = sub.add_parser("sat", parents=[fmt], help="truth of a formula at a state")
    s.add_argument("model")
    s.add_argument("state")
    s.add_argument("formula")
    s.add_argument("--variant", choices=VARIANT_CHOICES, default="new")
    s.set_defaults(func=cmd_sat, default_format="text")

    s = sub.add_parser("valid", parents=[fmt],
                       help="truth in a model (file with 'val') or validity in a frame")
    s.add_argument("path")
    s.add_argument("formula")
    s.add_argument("--frame", action="store_true", help="ignore 'val' and check the frame")
    s.add_argument("--variant", choices=VARIANT_CHOICES, default="new")
    s.set_defaults(func=cmd_valid, default_format="text")

    s = sub.add_parser("props", parents=[fmt], help="frame predicates")
    s.add_argument("frame")
    s.set_defaults(func=cmd_props, default_format="json")

    s = sub.add_parser("decide", parents=[fmt], help="bounded countermodel search")
    s.add_argument("formula")
    s.add_argument("--class", dest="spec", default="all")
    s.add_argument("--max-states", type=int, default=4)
    s.add_argument("--dedup", action="store_true", help="one frame per isomorphism class")
    s.add_argument("--max-frames", type=int)
    s.add_argument("--time-limit", type=float)
    s.add_argument("--variant", choices=VARIANT_CHOICES, default="new")
    s.add_argument("--quiet", action="store_true", help="no progress on stderr")
    s.set_defaults(func=cmd_decide, default_format="json")

    s = sub.add_parser("filter", parents=[fmt], help="filtration through the closure of a formula")
    s.add_argument("model")
    s.add_argument("formula")
    s.add_argument("--largest", action="store_true")
    s.set_defaults(func=cmd_filter, default_format="json")

    s = sub.add_parser("transform", parents=[fmt], help="model constructions")
    s.add_argument("model")
    s.add_argument("--op", required=True,
                   choices=("intersect", "double", "double-refl", "partition", "join"))
    s.add_argument("--other", help="second model for join")
    s.add_argument("--state", help="state of the first model for join")
    s.add_argument("--other-state", help="state of the second model for join")
    s.set_defaults(func=cmd_transform, default_format="json")

    s = sub.add_parser("prove", parents=[fmt], help="check a proof script")
    s.add_argument("script")
    s.add_argument("--semantic", type=int, metavar="N",
                   help="also check every line on frames up to N states")
    s.set_defaults(func=cmd_prove, default_format="text")

    s = sub.add_parser("defcheck", parents=[fmt], help="modal definability on small frames")
    s.add_argument("formula")
    s.add_argument("--predicate", required=True)
    s.add_argument("--max-states", type=int, default=3)
    s.set_defaults(func=cmd_defcheck, default_format="json")
    return p


def run(argv=None):
    """Returns (exit code, output text, error text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0), "", ""
    try:
        if getattr(args, "max_states", 1) is not None and getattr(args, "max_states", 1) < 1:
            raise Usage("--max-states must be at least 1")
        code, doc, text = args.func(args)
    except (ImlError, OSError, ValueError, Usage) as e:
        return 2, "", "error: %s" % e
    fmt = args.format or args.default_format
    out = json.dumps(doc, indent=2, ensure_ascii=False) if fmt == "json" else text
    return code, out, ""


def main(argv=None):
    code, out, err = run(argv)
    if out:
        print(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
