"""Batch front end: instance ingestion, verification orchestration,
machine-readable reporting.

Config files are JSON with schema id "iqgklo-config/1":

    {
      "schema": "iqgklo-config/1",
      "catalog": "qsA2-v11",            # or "instance": {...} inline
      "relations": ["BB3", "Serre3"],   # optional kind filter
      "trials": 20, "seed": 0, "order": 8,
      "bb1_convention": "taui"
    }

An inline instance gives the Cartan matrix by type letter + rank, the
involution as a cycle list, and the two coweights by pairing vectors; the
per-node multiplicities are always recomputed from those, never read from
the input:

    {"type": "A", "rank": 2, "tau": [[1, 2]],
     "framing": [1, 1], "shift": [0, 0], "theta": [0, 0]}
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .errors import IQGKLOError, ParseError, ValidationError
from .gklo import build_B_image, build_Xi
from .oracle import randomized_equal, truncated_series_check
from .relations import (
    ALL_KINDS, RelationChecker, identity_suite,
)
from .satake import (
    build_catalog, cartan_A, catalog_by_name, make_instance, validate_diagram,
)

SCHEMA_ID = "iqgklo-config/1"
REPORT_SCHEMA_ID = "iqgklo-report/1"


def _tau_from_cycles(rank, cycles):
    tau = list(range(1, rank + 1))
    for cyc in cycles or []:
        if len(cyc) != 2:
            raise ValidationError(f"involution cycle {cyc} must be a 2-cycle")
        a, b = cyc
        tau[a - 1], tau[b - 1] = b, a
    return tuple(tau)


def instance_from_description(desc):
    if desc.get("type", "A") != "A":
        raise ValidationError("only type A diagrams are supported")
    rank = int(desc["rank"])
    tau = _tau_from_cycles(rank, desc.get("tau"))
    diagram = validate_diagram(cartan_A(rank),
                               None if tau == tuple(range(1, rank + 1))
                               else tau)
    return make_instance(desc.get("name", f"inline-A{rank}"), diagram,
                         tuple(desc["framing"]), tuple(desc["shift"]),
                         desc.get("theta"), desc.get("orientation"))


def load_config(path=None, text=None):
    try:
        raw = text if text is not None else open(path).read()
    except OSError as e:
        raise ParseError(f"cannot read config: {e}")
    try:
        doc = json.loads(raw)
    except ValueError as e:
        raise ParseError(f"config is not valid JSON: {e}")
    if doc.get("schema") != SCHEMA_ID:
        raise ParseError(f"config schema must be {SCHEMA_ID!r}")
    if "catalog" in doc:
        inst = catalog_by_name(doc["catalog"])
    elif "instance" in doc:
        inst = instance_from_description(doc["instance"])
    else:
        raise ParseError("config needs a 'catalog' name or inline 'instance'")
    kinds = doc.get("relations")
    if kinds:
        bad = set(kinds) - set(ALL_KINDS)
        if bad:
            raise ValidationError(f"unknown relation kinds {sorted(bad)}")
    return {
        "instance": inst,
        "relations": kinds,
        "trials": int(doc.get("trials", 20)),
        "seed": int(doc.get("seed", 0)),
        "order": int(doc.get("order", 8)),
        "bb1_convention": doc.get("bb1_convention", "taui"),
    }


def _describe(inst):
    tau = [(i, inst.diagram.t(i)) for i in inst.diagram.nodes()
           if i < inst.diagram.t(i)]
    return {
        "name": inst.name,
        "rank": inst.diagram.rank,
        "involution_cycles": tau,
        "framing": list(inst.framing),
        "shift": list(inst.shift),
        "multiplicities": list(inst.mult),
        "theta": list(inst.theta),
    }


def _emit(doc, fmt, out=None):
    if out is None:
        out = sys.stdout
    if fmt == "structured":
        json.dump(doc, out, indent=2, default=str)
        out.write("\n")
        return
    _emit_text(doc, out)


def _emit_text(doc, out, indent=0):
    pad = "  " * indent
    if isinstance(doc, dict):
        for k, v in doc.items():
            if isinstance(v, (dict, list)):
                out.write(f"{pad}{k}:\n")
                _emit_text(v, out, indent + 1)
            else:
                out.write(f"{pad}{k}: {v}\n")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)):
                _emit_text(v, out, indent)
            else:
                out.write(f"{pad}- {v}\n")
    else:
        out.write(f"{pad}{doc}\n")


def _result_entry(r):
    entry = {
        "check": r.name if r.pair else r.kind,
        "status": r.status,
        "seconds": round(r.seconds, 3),
    }
    if r.detail:
        entry["detail"] = r.detail
    if r.failures:
        entry["discrepancies"] = [
            {"support": {v: repr(M) for v, M in (pins or {}).items()},
             "shift_part": repr(dmon), "lhs": repr(cl), "rhs": repr(cr)}
            for pins, dmon, cl, cr in r.failures]
    return entry


def cmd_catalog(args):
    doc = {"schema": REPORT_SCHEMA_ID,
           "catalog": [_describe(inst) for inst in build_catalog()]}
    _emit(doc, args.format)
    return 0


def _resolve_instance(args):
    if args.config:
        cfg = load_config(args.config)
    elif args.instance:
        cfg = {"instance": catalog_by_name(args.instance), "relations": None,
               "trials": 20, "seed": 0, "order": 8,
               "bb1_convention": "taui"}
    else:
        raise ParseError("give --instance NAME or --config FILE")
    for key in ("trials", "seed", "order", "bb1_convention"):
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    return cfg


def cmd_validate(args):
    cfg = _resolve_instance(args)
    doc = {"schema": REPORT_SCHEMA_ID, "valid": True,
           "instance": _describe(cfg["instance"])}
    _emit(doc, args.format)
    return 0


def cmd_image(args):
    cfg = _resolve_instance(args)
    inst = cfg["instance"]
    wanted = args.generator
    gens = {}
    for i in inst.diagram.nodes():
        gens[f"Theta{i}"] = lambda i=i: repr(build_Xi(inst, i))
        gens[f"B{i}"] = lambda i=i: repr(build_B_image(inst, i))
    if wanted:
        if wanted not in gens:
            raise ValidationError(
                f"unknown generator {wanted!r}; choose from {sorted(gens)}")
        images = {wanted: gens[wanted]()}
    else:
        images = {name: fn() for name, fn in sorted(gens.items())}
    doc = {"schema": REPORT_SCHEMA_ID, "instance": inst.name,
           "images": images}
    _emit(doc, args.format)
    return 0


def cmd_check(args):
    cfg = _resolve_instance(args)
    inst = cfg["instance"]
    kinds = cfg["relations"]
    if args.relations:
        kinds = args.relations.split(",")
        bad = set(kinds) - set(ALL_KINDS)
        if bad:
            raise ValidationError(f"unknown relation kinds {sorted(bad)}")
    t0 = time.monotonic()
    checker = RelationChecker(inst, bb1_convention=cfg["bb1_convention"])
    report = checker.run(kinds)
    series_ok = all(truncated_series_check(g, order=cfg["order"])
                    for g in checker.gamma_log)
    oracle = _oracle_crosscheck(checker, report, cfg, kinds)
    doc = {
        "schema": REPORT_SCHEMA_ID,
        "instance": _describe(inst),
        "bb1_convention": cfg["bb1_convention"],
        "seed": cfg["seed"],
        "trials": cfg["trials"],
        "series_order": cfg["order"],
        "results": [_result_entry(r) for r in report.results],
        "series_soundness": "pass" if series_ok else "fail",
        "oracle_concordance": oracle,
        "seconds": round(time.monotonic() - t0, 3),
    }
    _emit(doc, args.format)
    ok = report.ok() and series_ok and oracle == "pass"
    return 0 if ok else 1


def _oracle_crosscheck(checker, report, cfg, kinds):
    """Re-derive each pairwise verdict numerically and compare."""
    for r in report.results:
        if r.kind in ("HH", "HB", "DEG") or len(r.pair) != 2:
            continue
        lhs, rhs = checker.eval_pair(r.kind, *r.pair)
        if rhs is None:
            continue
        verdict, _ = randomized_equal(lhs, rhs, trials=cfg["trials"],
                                      seed=cfg["seed"])
        if verdict != (r.status == "pass"):
            return "fail"
    return "pass"


def cmd_identities(args):
    results = identity_suite()
    doc = {"schema": REPORT_SCHEMA_ID,
           "results": [_result_entry(r) for r in results]}
    _emit(doc, args.format)
    return 0 if all(r.status == "pass" for r in results) else 1


def build_parser():
    p = argparse.ArgumentParser(
        prog="iqgklo",
        description="Exact verification of difference-operator "
                    "representations of shifted quasi-split current algebras")
    sub = p.add_subparsers(dest="verb", required=True)
    defs = dict(
        config=dict(flags=("--config",), help="JSON config file"),
        instance=dict(flags=("--instance",), help="built-in catalog name"),
        relations=dict(flags=("--relations",),
                       help="comma-separated relation kinds"),
        trials=dict(flags=("--trials",), type=int),
        seed=dict(flags=("--seed",), type=int),
        order=dict(flags=("--order",), type=int),
        bb1=dict(flags=("--bb1-convention",), dest="bb1_convention",
                 choices=("taui", "i")),
        fmt=dict(flags=("--format",), dest="format",
                 choices=("text", "structured"), default="text"),
    )

    def add(sp, *names):
        for n in names:
            d = dict(defs[n])
            flags = d.pop("flags")
            sp.add_argument(*flags, **d)

    sp = sub.add_parser("catalog", help="list built-in instances")
    add(sp, "fmt")
    sp.set_defaults(fn=cmd_catalog)

    sp = sub.add_parser("validate", help="validate an instance")
    add(sp, "config", "instance", "trials", "seed", "order", "bb1", "fmt")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("image", help="print generator images")
    sp.add_argument("generator", nargs="?",
                    help="e.g. B1 or Theta2 (default: all)")
    add(sp, "config", "instance", "trials", "seed", "order", "bb1", "fmt")
    sp.set_defaults(fn=cmd_image)

    sp = sub.add_parser("check", help="verify defining relations")
    add(sp, "config", "instance", "relations", "trials", "seed", "order",
        "bb1", "fmt")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("identities", help="run the identity suite")
    add(sp, "order", "fmt")
    sp.set_defaults(fn=cmd_identities)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidationError, IQGKLOError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
