"""Command-line front end: ``dkbv check | parse | encode | fixtures``.

Exit codes: 0 when every requested verdict holds, 1 when one fails, 2 for
usage and input errors, 3 when the reasoner hits its closure limit.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema

from . import __version__
from .datatypes import STRING, PrimitiveDatatype, Value, format_value, num, parse_number, string
from .dkbfile import DkbError, emit_axiom, emit_dkb, parse_concept, parse_dkb
from .encoding import Dkb, EncodingError, _dkb_signature, encode_dkb
from .fixtures import FIXTURES, fixture_text
from .owl import dkb_to_owl
from .reasoner import DEFAULT_CLOSURE_LIMIT, ResourceLimitError
from .sfeel import _unquote
from .tasks import (
    Example, MaskedRule, OutputGap, RulePair, Session, Task, TaskVerdict, check_any_hit,
    check_completeness, check_coverage, check_determinability, check_io, check_priority_hit,
    check_unique_hit, describe_region,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

TASK_NAMES = [t.value for t in Task]


class UsageError(Exception):
    pass


def report_schema() -> dict:
    text = resources.files(__package__).joinpath("report.schema.json").read_text("utf-8")
    return json.loads(text)


# -- loading ------------------------------------------------------------------

def read_source(name: str) -> tuple:
    """File contents, or a packaged fixture when no such file exists."""
    path = Path(name)
    if path.exists():
        return path.read_text(encoding="utf-8"), str(path)
    if name in FIXTURES:
        return fixture_text(name), name
    raise UsageError(f"no such file or fixture: {name}")


def load(name: str, today: Optional[int]) -> tuple:
    text, label = read_source(name)
    return parse_dkb(text, today), text, label


def parse_value(text: str, dt: PrimitiveDatatype) -> Value:
    if dt is STRING:
        if len(text) >= 2 and text[0] == text[-1] == '"':
            return string(_unquote(text))
        return string(text)
    try:
        return num(dt, parse_number(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{text!r} is not a {dt.value} value") from exc


# -- check ----------------------------------------------------------------------

def _tables(d: Dkb, wanted: Optional[str], outputs_only: bool) -> list:
    g = d.drg
    names = [t.name for t in g.tables if not outputs_only or t.name in g.outputs]
    if wanted is None:
        return names
    if wanted not in [t.name for t in g.tables]:
        raise UsageError(f"no table named {wanted}")
    if outputs_only and wanted not in g.outputs:
        raise UsageError(f"{wanted} is not an output table")
    return [wanted]


def _attrs(d: Dkb, table: str, wanted: Optional[str]) -> list:
    t = d.drg.table(table)
    if wanted is None:
        return list(t.outputs)
    if wanted not in t.outputs:
        raise UsageError(f"{wanted} is not an output attribute of {table}")
    return [wanted]


def _templates(d: Dkb, text: Optional[str]) -> list:
    if text is None:
        return list(d.templates.items())
    if text in d.templates:
        return [(text, d.templates[text])]
    try:
        return [(text, parse_concept(text, _dkb_signature(d).features))]
    except DkbError as exc:
        raise UsageError(f"bad template: {exc}") from exc


def run_checks(d: Dkb, tasks: list, args) -> list:
    opts = dict(background=not args.no_ontology, closure_limit=args.closure_limit)
    idkb = d.with_abox(())
    session = Session(idkb, **opts)
    verdicts = []
    everything = "all" in tasks
    wanted = set(TASK_NAMES) if everything else set(tasks)

    for name in _tables(d, args.table, False):
        for task, check in ((Task.UniqueHit, check_unique_hit), (Task.AnyHit, check_any_hit),
                            (Task.PriorityHit, check_priority_hit)):
            if task.value in wanted:
                verdicts.append(check(idkb, name, session=session))

    if Task.OutputCoverage.value in wanted:
        for name in _tables(d, args.table, True):
            for b in _attrs(d, name, args.attr):
                t = d.drg.table(name)
                values = [parse_value(args.value, t.atype[b])] if args.value is not None \
                    else list(t.orange[b])
                for v in values:
                    verdicts.append(check_coverage(idkb, name, b, v, session=session))

    if Task.Completeness.value in wanted:
        verdicts.append(check_completeness(idkb, session=session,
                                           max_witnesses=args.max_witnesses))

    if Task.OutputDeterminability.value in wanted:
        templates = _templates(d, args.template)
        if not templates and not everything:
            raise UsageError("determinability needs --template or a template in the file")
        for label, concept in templates:
            v = check_determinability(idkb, concept, session=session,
                                      max_witnesses=args.max_witnesses)
            v.subject = label
            verdicts.append(v)

    if Task.IoRelationship.value in wanted:
        if args.object is None:
            if not everything:
                raise UsageError("io needs --object")
        else:
            verdicts += _io(d, args, opts)
    return verdicts


def _io(d: Dkb, args, opts) -> list:
    if args.object not in {o for f in d.abox for o in _objects(f)}:
        raise UsageError(f"the file has no facts about {args.object}")
    out = []
    for name in _tables(d, args.table, True):
        t = d.drg.table(name)
        for b in _attrs(d, name, args.attr):
            if args.value is not None:
                v = parse_value(args.value, t.atype[b])
                out.append(check_io(d, name, args.object, b, v, **opts))
                continue
            found = None
            for v in t.orange[b]:
                verdict = check_io(d, name, args.object, b, v, **opts)
                if verdict.holds:
                    found = verdict
                    break
            if found is None:
                found = TaskVerdict(Task.IoRelationship, False, f"{name}.{b}({args.object})")
            out.append(found)
    return out


def _objects(fact) -> tuple:
    if hasattr(fact, "subj"):
        return (fact.subj, fact.obj)
    return (fact.obj,)


def witness_json(w) -> dict:
    if isinstance(w, RulePair):
        return {"kind": "overlap", "text": str(w), "table": w.table, "rules": [w.first, w.second]}
    if isinstance(w, MaskedRule):
        return {"kind": "masked", "text": str(w), "table": w.table, "rule": w.rule, "by": w.by}
    if isinstance(w, OutputGap):
        region = {ref: (None if dt is None else describe_region(dt)) for ref, dt in w.region}
        return {"kind": "gap", "text": str(w), "table": w.table, "attribute": w.attribute,
                "region": region, "values": {r: format_value(v) for r, v in w.values}}
    if isinstance(w, Example):
        return {"kind": "example", "text": str(w),
                "values": {r: format_value(v) for r, v in w.values}}
    raise TypeError(f"unknown witness {w!r}")


def verdict_json(v: TaskVerdict) -> dict:
    return {"task": v.task.value, "subject": v.subject, "holds": v.holds,
            "summary": v.summary(), "witnesses": [witness_json(w) for w in v.witnesses],
            "stats": {"reasonerCalls": int(v.stats["reasonerCalls"]),
                      "elapsed": float(v.stats["elapsed"])}}


def build_report(verdicts: list, text: str, label: str, options: dict, total: float) -> dict:
    report = {
        "tool": "dkbv",
        "version": __version__,
        "input": {"name": label, "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest()},
        "options": options,
        "holds": all(v.holds for v in verdicts),
        "verdicts": [verdict_json(v) for v in verdicts],
        "timing": {"total": total},
    }
    jsonschema.validate(report, report_schema())
    return report


def render_text(verdicts: list) -> str:
    lines = []
    for v in verdicts:
        lines.append(v.summary())
        lines += [f"  {w}" for w in v.witnesses]
    held = sum(v.holds for v in verdicts)
    lines.append(f"{held} of {len(verdicts)} verdicts hold")
    return "\n".join(lines)


def cmd_check(args, out) -> int:
    d, text, label = load(args.file, args.today)
    tasks = args.task or ["all"]
    start = time.perf_counter()
    verdicts = run_checks(d, tasks, args)
    total = time.perf_counter() - start
    if args.format == "json":
        options = {"tasks": tasks, "noOntology": args.no_ontology,
                   "closureLimit": args.closure_limit}
        for key in ("table", "attr", "value", "object", "template", "today"):
            if getattr(args, key) is not None:
                options[key] = getattr(args, key)
        report = build_report(verdicts, text, label, options, total)
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write(render_text(verdicts) + "\n")
    return EXIT_OK if all(v.holds for v in verdicts) else EXIT_FAILED


def cmd_parse(args, out) -> int:
    d, _, _ = load(args.file, args.today)
    out.write(emit_dkb(d))
    return EXIT_OK


def cmd_encode(args, out) -> int:
    d, _, _ = load(args.file, args.today)
    if args.no_ontology:
        d = d.without_background()
    if args.owl:
        out.write(dkb_to_owl(d))
        return EXIT_OK
    k = encode_dkb(d)
    out.write("\n".join(emit_axiom(ax) for ax in k.tbox) + "\n")
    return EXIT_OK


def cmd_fixtures(args, out) -> int:
    if args.show:
        out.write(fixture_text(args.show))
    else:
        out.write("\n".join(FIXTURES) + "\n")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dkbv", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"dkbv {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run verification tasks")
    c.add_argument("file", help="a .dkb file or the name of a packaged fixture")
    c.add_argument("--task", action="append", choices=TASK_NAMES + ["all"],
                   help="task to run; repeatable (default: all)")
    c.add_argument("--table")
    c.add_argument("--attr")
    c.add_argument("--value")
    c.add_argument("--object")
    c.add_argument("--template", help="a template name from the file or a concept")
    c.add_argument("--no-ontology", action="store_true", help="drop the background axioms")
    c.add_argument("--today", type=int)
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.add_argument("--closure-limit", type=int, default=DEFAULT_CLOSURE_LIMIT)
    c.add_argument("--max-witnesses", type=int, default=1,
                   help="gaps to report per output attribute")
    c.set_defaults(run=cmd_check)

    r = sub.add_parser("parse", help="parse, validate and print in canonical form")
    r.add_argument("file")
    r.add_argument("--today", type=int)
    r.set_defaults(run=cmd_parse)

    e = sub.add_parser("encode", help="print the description-logic encoding")
    e.add_argument("file")
    e.add_argument("--owl", action="store_true", help="OWL 2 functional syntax")
    e.add_argument("--no-ontology", action="store_true")
    e.add_argument("--today", type=int)
    e.set_defaults(run=cmd_encode)

    f = sub.add_parser("fixtures", help="list or print the packaged fixtures")
    f.add_argument("--show", choices=FIXTURES)
    f.set_defaults(run=cmd_fixtures)
    return p


def main(argv: Optional[list] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.run(args, out)
    except (UsageError, DkbError, EncodingError, KeyError) as exc:
        err.write(f"dkbv: {exc}\n")
        return EXIT_USAGE
    except ResourceLimitError as exc:
        err.write(f"dkbv: {exc}\n")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
