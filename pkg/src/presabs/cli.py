"""Command-line entry point.

Exit codes: 0 success, 1 input/IO/parse error, 2 reasoning error,
3 oracle disagreement.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib.resources import files
from pathlib import Path

from .el import ReasoningError, reason
from .eq import AnnotationError, NameCollisionError
from .fuzz import check_classify, check_inversion, random_anatomy, random_el_ontology
from .matrix import MatrixError, infer_matrix, load_matrix, matrix_stats, write_matrix
from .model import Ontology, OntologyError, merge_ontologies
from .pipeline import complement_axioms, run_pipeline
from .syntax import OwlSyntaxError, parse_ontology, serialize_ontology
from .vocabulary import Vocabulary

log = logging.getLogger("presabs")

EXIT_OK, EXIT_INPUT, EXIT_REASONING, EXIT_DIFF = 0, 1, 2, 3

DEMO_FILES = ("demo.ofn", "demo_phenotypes.ofn", "toy_matrix.json")


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror or e}") from None


def _vocabulary(args) -> Vocabulary:
    v = Vocabulary.from_config(args.vocab_config) if args.vocab_config else Vocabulary.default()
    overrides = {}
    for item in args.vocab or ():
        slot, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--vocab expects slot=IRI, got {item!r}")
        overrides[slot.strip()] = value.strip()
    return v.override(overrides) if overrides else v


def _load(path: str, v: Vocabulary) -> Ontology:
    try:
        return parse_ontology(_read(path), negates=v.negates)
    except OwlSyntaxError as e:
        raise InputError(f"{path}: {e}") from None


def _report_text(report: dict) -> str:
    lines = []
    for k, val in report.items():
        if isinstance(val, dict):
            lines.extend(f"{k}.{k2}: {v2}" for k2, v2 in val.items())
        elif isinstance(val, list):
            lines.append(f"{k}: {', '.join(map(str, val))}")
        else:
            lines.append(f"{k}: {val}")
    return "\n".join(lines) + "\n"


def _write_report(path: str, report: dict):
    if path.endswith(".json"):
        _write(path, json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        _write(path, _report_text(report))


def cmd_classify(args) -> int:
    v = _vocabulary(args)
    o = _load(args.anatomy, v)
    c = reason(o)
    for w in c.normalized.warnings:
        log.warning(w)
    _write(args.out, serialize_ontology(o, c.hierarchy.to_axioms()))
    return EXIT_OK


def cmd_pipeline(args) -> int:
    v = _vocabulary(args)
    anatomy = _load(args.anatomy, v)
    phenotypes = ()
    if args.phenotypes:
        ph = _load(args.phenotypes, v)
        anatomy = merge_ontologies([anatomy, Ontology((), ph.prefixes)])
        phenotypes = ph.axioms
    result = run_pipeline(anatomy, phenotypes, v, fixpoint=args.fixpoint, base=args.base)
    for w in result.report.warnings:
        log.warning(w)
    _write(args.out, serialize_ontology(result.ontology))
    if args.hierarchy:
        _write(args.hierarchy, serialize_ontology(result.ontology, result.hierarchy.to_axioms()))
    if args.report:
        _write_report(args.report, result.report.as_dict())
    if args.complement_out:
        _write(args.complement_out,
               serialize_ontology(result.ontology, complement_axioms(result.names, v)))
    return EXIT_OK


def cmd_infer_matrix(args) -> int:
    v = _vocabulary(args)
    anatomy = _load(args.anatomy, v)
    try:
        m = load_matrix(_read(args.matrix), allow_polymorphic=args.allow_polymorphic,
                        prefixes=anatomy.prefixes)
    except MatrixError as e:
        raise InputError(f"{args.matrix}: {e}") from None
    pm, report = infer_matrix(m, anatomy, v, fixpoint=args.fixpoint, base=args.base)
    for w in report.warnings:
        log.warning(w)
    _write(args.out, write_matrix(pm, args.format))
    if args.stats:
        _write(args.stats, json.dumps(matrix_stats(pm).as_dict(), indent=2) + "\n")
    if args.report:
        _write_report(args.report, report.as_dict())
    return EXIT_OK


def cmd_fuzz(args) -> int:
    v = _vocabulary(args)
    failures = 0
    for seed in range(args.start_seed, args.start_seed + args.seeds):
        d = check_classify(random_el_ontology(seed, v=v))
        if not d.empty:
            failures += 1
            print(f"seed {seed}: classification differs from oracle\n{d}", file=sys.stderr)
        inv = check_inversion(random_anatomy(seed, v=v), v, fixpoint=args.fixpoint)
        if not inv.diff.empty:
            failures += 1
            print(f"seed {seed}: inversion differs from oracle\n{inv.diff}", file=sys.stderr)
        if not inv.single_vs_fixpoint.empty:
            failures += 1
            print(f"seed {seed}: single pass and fixpoint disagree\n{inv.single_vs_fixpoint}",
                  file=sys.stderr)
    print(f"{args.seeds} seeds from {args.start_seed}: {failures} failure(s)", file=sys.stderr)
    return EXIT_DIFF if failures else EXIT_OK


def cmd_demo(args) -> int:
    out = Path(args.directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise InputError(f"cannot create {out}: {e.strerror or e}") from None
    data = files("presabs").joinpath("data")
    for name in DEMO_FILES:
        _write(str(out / name), data.joinpath(name).read_text(encoding="utf-8"))
        print(out / name, file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--vocab", action="append", metavar="SLOT=IRI",
                        help="override one vocabulary slot (repeatable)")
    common.add_argument("--vocab-config", metavar="FILE",
                        help="INI file with [vocabulary] and optional [prefixes] sections")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="presabs",
                                description="Presence/absence reasoning over anatomy ontologies.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="direct hierarchy of an ontology")
    c.add_argument("anatomy")
    c.add_argument("--out", "-o", help="output file (default: stdout)")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("pipeline", parents=[common], help="run the absence workflow")
    c.add_argument("--anatomy", required=True)
    c.add_argument("--phenotypes", help="ontology file with phenotype class axioms")
    c.add_argument("--out", "-o", help="enriched ontology (default: stdout)")
    c.add_argument("--hierarchy", help="final direct hierarchy")
    c.add_argument("--report", help="report file; JSON when the name ends in .json")
    c.add_argument("--complement-out", help="debug export of the complement axioms")
    c.add_argument("--fixpoint", action="store_true", help="repeat inversion until stable")
    c.add_argument("--base", help="namespace for generated names")
    c.set_defaults(func=cmd_pipeline)

    c = sub.add_parser("infer-matrix", parents=[common], help="presence/absence matrix")
    c.add_argument("--anatomy", required=True)
    c.add_argument("--matrix", required=True)
    c.add_argument("--out", "-o", help="matrix output (default: stdout)")
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--stats", help="statistics JSON")
    c.add_argument("--report", help="pipeline report")
    c.add_argument("--allow-polymorphic", action="store_true")
    c.add_argument("--fixpoint", action="store_true")
    c.add_argument("--base")
    c.set_defaults(func=cmd_infer_matrix)

    c = sub.add_parser("fuzz", parents=[common], help="compare against the oracle")
    c.add_argument("--seeds", type=int, default=200)
    c.add_argument("--start-seed", type=int, default=0)
    c.add_argument("--fixpoint", action="store_true")
    c.set_defaults(func=cmd_fuzz)

    c = sub.add_parser("demo", parents=[common], help="write the bundled fixtures")
    c.add_argument("directory")
    c.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ReasoningError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_REASONING
    except (InputError, OntologyError, MatrixError, AnnotationError,
            NameCollisionError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
