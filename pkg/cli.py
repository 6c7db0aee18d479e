"""
Command-line frontend for the contact engine.

Subcommands: bracket, contact-table, universal, classify, verify-model,
search-3nondeg and regress. Reports are JSON (canonical key order) or
Markdown derived from the same document.

Exit status: 0 when every check passes, 1 when a check fails, 2 on
malformed input.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from builtin_models import builtin_models, get_model
from classify7 import enumerate_tables, tables_to_markdown
from contact import ContactAlgebra, ContactElement, SymplecticSpace, get_contact_algebra
from cralg import build_universal_u, freeman_sequence, tanaka_sequence
from element_syntax import ElementSyntaxError, format_element, format_key, parse_value
from engine_config import EngineConfig, load_config
from exactla import ContactEngineError, format_scalar
from models import bounded_prolongation_check, load_model_document, verify_model
from regression import run_regression
from threenondeg_search import search_3nondeg_models

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_MALFORMED = 2


class UsageError(ContactEngineError):
    """Inconsistent command-line options."""


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def to_json(document: Any) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_output(text: str, path: Optional[str] = None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
        logger.info(f"Report written to {path}")
    else:
        sys.stdout.write(text)


def _checks_markdown(title: str, document: Mapping[str, Any]) -> str:
    lines = [f"## {title}", ""]
    for key in sorted(document):
        value = document[key]
        if key == "checks" or isinstance(value, (dict, list)):
            continue
        lines.append(f"- **{key}**: {value}")
    checks = document.get("checks", [])
    if checks:
        lines += ["", "| check | status | detail |", "|---|---|---|"]
        for check in checks:
            lines.append(f"| {check['name']} | {check['status']} | {check.get('detail', '')} |")
    return "\n".join(lines) + "\n"


def render(title: str, document: Mapping[str, Any], output_format: str) -> str:
    if output_format == "markdown":
        if "items" in document:
            return "".join(_checks_markdown(item["name"], item) for item in document["items"])
        return _checks_markdown(title, document)
    return to_json(document)


# ---------------------------------------------------------------------------
# Context
# ---------------------------------------------------------------------------


def parse_signature(text: str) -> Tuple[int, int]:
    try:
        r, s = (int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"--sgn expects 'r,s', got {text!r}")
    if r < 0 or s < 0:
        raise UsageError(f"--sgn entries must be non-negative, got {text!r}")
    return r, s


def resolve_context(args: argparse.Namespace, config: EngineConfig) -> Dict[str, Any]:
    """n, signature and max_degree: flags first, then configuration."""
    signature = parse_signature(args.sgn) if args.sgn else None
    n = args.n if args.n is not None else (sum(signature) if signature else config.n)
    if signature is None:
        signature = tuple(config.signature) if sum(config.signature) == n else (n, 0)
    if sum(signature) != n:
        raise UsageError(f"signature {signature} does not fit n = {n}")
    max_degree = args.max_degree if args.max_degree is not None else config.max_degree
    if max_degree < 2:
        raise UsageError(f"--max-degree must be >= 2, got {max_degree}")
    return {"n": n, "signature": list(signature), "max_degree": max_degree}


def _algebra(context: Mapping[str, Any]) -> ContactAlgebra:
    space = SymplecticSpace.complex_symplectic(context["n"], tuple(context["signature"]))
    return get_contact_algebra(space)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_bracket(args, config: EngineConfig) -> int:
    context = resolve_context(args, config)
    algebra = _algebra(context)
    value = parse_value(args.expression, algebra)
    is_element = isinstance(value, ContactElement)
    text = format_element(value) if is_element else format_scalar(value)
    if args.format == "json":
        degree = value.degree if is_element else None
        write_output(to_json({"expression": args.expression, "result": text, "degree": degree}), args.out)
    else:
        write_output(text + "\n", args.out)
    return EXIT_OK


def contact_table(algebra: ContactAlgebra, max_degree: int) -> Dict[str, Any]:
    """Nonzero brackets of basis elements with p <= q and p + q <= max_degree."""
    entries = []
    for p in range(-2, max_degree + 1):
        for q in range(p, max_degree + 1):
            if p + q > max_degree:
                continue
            for k1 in algebra.basis(p):
                for k2 in algebra.basis(q):
                    if p == q and algebra.index(p)[k2] <= algebra.index(p)[k1]:
                        continue
                    value = algebra.bracket(algebra.basis_element(p, k1), algebra.basis_element(q, k2))
                    if value.is_zero():
                        continue
                    entries.append(
                        {
                            "x": format_key(algebra, p, k1),
                            "y": format_key(algebra, q, k2),
                            "bracket": format_element(value),
                        }
                    )
    return {
        "dims": {str(p): algebra.dim(p) for p in range(-2, max_degree + 1)},
        "brackets": entries,
    }


def _table_markdown(document: Mapping[str, Any]) -> str:
    lines = ["| X | Y | [X, Y] |", "|---|---|---|"]
    lines += [f"| {e['x']} | {e['y']} | {e['bracket']} |" for e in document["brackets"]]
    return "\n".join(lines) + "\n"


def cmd_contact_table(args, config: EngineConfig) -> int:
    context = resolve_context(args, config)
    document = contact_table(_algebra(context), context["max_degree"])
    document["context"] = context
    text = _table_markdown(document) if args.format == "markdown" else to_json(document)
    write_output(text, args.out)
    return EXIT_OK


def _string_keys(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(key): _string_keys(item) for key, item in value.items()}
    return value


def cmd_universal(args, config: EngineConfig) -> int:
    context = resolve_context(args, config)
    pair = build_universal_u(_algebra(context), context["max_degree"])
    checks = pair.check_closure()
    chain = freeman_sequence(pair, config.freeman_extra_steps)
    document = {
        "context": context,
        "passed": checks.passed,
        "dims": _string_keys(pair.dims()),
        "freeman": chain.to_dict(),
        "tanaka": tanaka_sequence(pair).to_dict(),
        "checks": checks.to_list(),
    }
    write_output(render("universal", document, args.format), args.out)
    return EXIT_OK if checks.passed else EXIT_FAILED


def cmd_classify(args, config: EngineConfig) -> int:
    signatures = [parse_signature(args.sgn)] if args.sgn else [(2, 0), (1, 1)]
    for signature in signatures:
        if signature not in ((2, 0), (1, 1)):
            raise UsageError(f"classification is available for signatures (2,0) and (1,1), got {signature}")
    document = enumerate_tables(signatures)
    if args.format == "markdown":
        write_output(tables_to_markdown(document), args.out)
    else:
        write_output(to_json(document), args.out)
    verified = all(row["verified"] for table in document["tables"] for row in table["rows"])
    return EXIT_OK if verified else EXIT_FAILED


def load_candidate(target: str):
    path = Path(target)
    if path.exists():
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise UsageError(f"{target}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")
        return load_model_document(document)
    if target in builtin_models():
        return get_model(target)
    raise UsageError(f"{target!r} is neither a model document nor a builtin model ({sorted(builtin_models())})")


def cmd_verify_model(args, config: EngineConfig) -> int:
    candidate = load_candidate(args.target)
    report = verify_model(candidate, extra_steps=config.freeman_extra_steps)
    document = report.to_dict()
    passed = report.passed
    if args.maximality:
        degree = args.max_degree if args.max_degree is not None else config.bounded_check_degree
        maximality = bounded_prolongation_check(candidate, degree)
        document["maximality"] = maximality.to_dict()
    write_output(render(f"model {candidate.name or args.target}", document, args.format), args.out)
    return EXIT_OK if passed else EXIT_FAILED


def cmd_search(args, config: EngineConfig) -> int:
    report = search_3nondeg_models(args.max_degree if args.max_degree is not None else config.max_degree)
    write_output(render("search-3nondeg", report.to_dict(), args.format), args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_regress(args, config: EngineConfig) -> int:
    summary = run_regression(config)
    write_output(render("regress", summary.to_dict(), args.format), args.out)
    return EXIT_OK if summary.passed else EXIT_FAILED


COMMANDS = {
    "bracket": cmd_bracket,
    "contact-table": cmd_contact_table,
    "universal": cmd_universal,
    "classify": cmd_classify,
    "verify-model": cmd_verify_model,
    "search-3nondeg": cmd_search,
    "regress": cmd_regress,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="half the dimension of the degree -1 component")
    common.add_argument("--sgn", default=None, help="signature r,s of the hermitian form")
    common.add_argument("--max-degree", dest="max_degree", type=int, default=None)
    common.add_argument("--format", choices=("json", "markdown"), default=None)
    common.add_argument("--out", default=None, help="write the report to this path")
    common.add_argument("--config", default=None, help="JSON configuration file")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(description="Exact graded contact algebra engine.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    bracket = subparsers.add_parser("bracket", parents=[common], help="evaluate an element expression")
    bracket.add_argument("expression")
    subparsers.add_parser("contact-table", parents=[common], help="structure constants up to --max-degree")
    subparsers.add_parser("universal", parents=[common], help="universal pair and its Freeman chain")
    subparsers.add_parser("classify", parents=[common], help="canonical forms of 7-dimensional cores")
    verify = subparsers.add_parser("verify-model", parents=[common], help="verify a model document or builtin model")
    verify.add_argument("target", help="path to a JSON model document or a builtin model name")
    verify.add_argument("--maximality", action="store_true", help="also run the bounded maximality check")
    subparsers.add_parser("search-3nondeg", parents=[common], help="uniqueness search for the 3-nondegenerate model")
    subparsers.add_parser("regress", parents=[common], help="run every regression check")
    return parser


def configure_logging(level: str, verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, level, logging.INFO),
        format="%(asctime)s - %(levelname)s:%(name)s:%(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_MALFORMED

    try:
        config = load_config(args.config)
    except ContactEngineError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_MALFORMED
    configure_logging(config.log_level, args.verbose)
    if args.format is None:
        args.format = "text" if args.command == "bracket" else config.output_format

    try:
        return COMMANDS[args.command](args, config)
    except ElementSyntaxError as e:
        logger.error(f"Syntax error at line {e.line}, column {e.column}: {e}")
        return EXIT_MALFORMED
    except (ContactEngineError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
