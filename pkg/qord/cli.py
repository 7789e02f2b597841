"""
Command line front end for qord.

Every verb reads a parameterization document (a path or inline JSON), runs
one computation and writes JSON (default) or text to standard output.
Diagnostics go to standard error as {"error": code, "message": text}.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .branch import Parameterization, is_normalized, normalize_columns, psi
from .classify import TopClass, census, is_quasi_simple, normal_form
from .config import ConfigManager
from .errors import InputError, QordError
from .reduce import apply_change, normalize_coefficients, quasi_short_reduce, random_admissible_change
from .semigroup import build_semigroup, multiplicity
from .serialization import (ResultStore, change_to_dict, class_query_from_dict,
                            dumps, load_document, parameterization_from_dict,
                            parameterization_to_dict, rform_from_dict,
                            rform_to_dict, terms_to_list)
from .zariski import zariski_exponents

logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    """Output of one verb: a mapping, or a list of rows for line-oriented output."""
    data: Any
    success: bool = True
    rows: List[Dict[str, Any]] = field(default_factory=list)


def _parse_exponent(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"invalid exponent {text!r}, expected comma separated integers")


def _load_parameterization(args, manager: ConfigManager) -> Parameterization:
    data = load_document(args.input)
    # the derived default needs lambda_1, read from the untruncated series
    exact = parameterization_from_dict(dict(data, trunc=None))
    trunc = manager.effective_trunc(exact.n, exact.lambda1, args.trunc, data.get("trunc"))
    return parameterization_from_dict(data, trunc=trunc)


def cmd_validate(args, manager: ConfigManager) -> CommandResult:
    P = _load_parameterization(args, manager)
    ok, reasons = is_normalized(P)
    return CommandResult({
        "valid": True,
        "r": P.r,
        "n": P.n,
        "lambdas": [list(l) for l in P.lambdas],
        "multiplicity": multiplicity(P.semigroup),
        "normalized": ok,
        "reasons": reasons,
        "valid_degree": P.trunc,
    })


def cmd_semigroup(args, manager: ConfigManager) -> CommandResult:
    data = load_document(args.input)
    valid_degree = None
    if "terms" in data:
        P = _load_parameterization(args, manager)
        G, valid_degree = P.semigroup, P.trunc
    else:
        try:
            G = build_semigroup(int(data["r"]), int(data["n"]), data["lambdas"])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"a semigroup document needs r, n and lambdas: {e}")
    result = G.to_dict()
    result["multiplicity"] = multiplicity(G)
    result["valid_degree"] = valid_degree
    return CommandResult(result)


def cmd_zariski(args, manager: ConfigManager) -> CommandResult:
    P = _load_parameterization(args, manager)
    compute = manager.get_config().compute
    return CommandResult(zariski_exponents(P, margin=compute.margin,
                                           max_iterations=compute.max_iterations).to_dict())


def cmd_reduce(args, manager: ConfigManager) -> CommandResult:
    P = _load_parameterization(args, manager)
    compute = manager.get_config().compute
    changes = []
    if args.perturb is not None:
        change = random_admissible_change(P, seed=args.perturb)
        P = apply_change(P, change)
        changes.append(change)
    reduced, applied = quasi_short_reduce(P, max_iterations=compute.max_iterations,
                                          residual_iterations=compute.residual_iterations)
    changes.extend(applied)
    return CommandResult({
        "parameterization": parameterization_to_dict(reduced),
        "changes": [change_to_dict(c) for c in changes],
        "valid_degree": reduced.trunc,
    })


def cmd_normalize(args, manager: ConfigManager) -> CommandResult:
    P = _load_parameterization(args, manager)
    P, order = normalize_columns(P)
    targets = [_parse_exponent(t) for t in (args.target or [])]
    result, certificate = normalize_coefficients(P, targets)
    return CommandResult({
        "parameterization": parameterization_to_dict(result),
        "permutation": order,
        "normalized": certificate is None,
        "certificate": certificate,
        "valid_degree": result.trunc,
    })


def cmd_classify(args, manager: ConfigManager) -> CommandResult:
    config = manager.get_config()
    if args.input:
        P = _load_parameterization(args, manager)
        form = normal_form(P, margin=config.compute.margin,
                           max_iterations=config.compute.max_iterations,
                           residual_iterations=config.compute.residual_iterations)
        result = form.verdict.to_dict()
        result["params"] = form.parameters
        if form.case_label is not None:
            result["normal_form"] = terms_to_list(form.series.series)
            result["certificate"] = form.certificate
            result["changes"] = len(form.changes)
        result["valid_degree"] = form.valid_degree
        return CommandResult(result)
    if args.n is None or args.lambda1 is None:
        raise InputError("classify needs a parameterization file or both --n and --lambda")
    query = class_query_from_dict({"n": args.n, "lambda1": list(_parse_exponent(args.lambda1))})
    verdict = is_quasi_simple(TopClass(query.n, query.lambda1), config.compute.oracle_box)
    return CommandResult(verdict.to_dict())


def cmd_census(args, manager: ConfigManager) -> CommandResult:
    config = manager.get_config()
    n_max = args.n_max if args.n_max is not None else config.census.n_max
    box = args.box if args.box is not None else config.census.lambda_box
    # census rows are exact, nothing in them depends on a truncation
    rows = [dict(row.to_dict(), valid_degree=None)
            for row in census(n_max, box, box=config.compute.oracle_box, progress=args.verbose)]
    if args.save:
        path = ResultStore(config.results_dir).save_result(args.save, rows)
        logger.info(f"census saved to {path}")
    return CommandResult({"classes": len(rows), "valid_degree": None}, rows=rows)


def cmd_psi(args, manager: ConfigManager) -> CommandResult:
    P = _load_parameterization(args, manager)
    if not args.form:
        raise InputError("psi needs --form")
    omega = rform_from_dict(load_document(args.form), P.r)
    image = psi(P, omega)
    return CommandResult({
        "form": rform_to_dict(omega),
        "terms": terms_to_list(image),
        "valid_degree": image.trunc,
    })


COMMANDS = {
    "validate": cmd_validate,
    "semigroup": cmd_semigroup,
    "zariski": cmd_zariski,
    "reduce": cmd_reduce,
    "normalize": cmd_normalize,
    "classify": cmd_classify,
    "census": cmd_census,
    "psi": cmd_psi,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['json', 'text'], default=None,
                        help='Output format (default from config, json)')
    common.add_argument('--trunc', type=int, default=None,
                        help='Truncation order; overrides the document, QORD_TRUNC and config')
    common.add_argument('--config', default=None, help='Configuration file (JSON or YAML)')
    common.add_argument('--output', default=None, help='Write the result to this file')
    common.add_argument('--verbose', action='store_true', help='Log progress')
    common.add_argument('--debug', action='store_true', help='Log debugging detail')

    parser = argparse.ArgumentParser(
        prog="qord",
        description="Invariants and normal forms of quasi-ordinary surface branches",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  qord zariski data/examples/example_hc.json
  qord validate data/examples/not_quasi_ordinary.json
  qord classify --n 6 --lambda 2,1
  qord census --n-max 7 --box 12 --save census
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("validate", "semigroup", "zariski", "psi"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument('input', help='Document path or inline JSON')
        if name == "psi":
            p.add_argument('--form', help='Differential form document')

    p = sub.add_parser("reduce", parents=[common])
    p.add_argument('input', help='Document path or inline JSON')
    p.add_argument('--perturb', type=int, default=None, metavar='SEED',
                   help='Apply a random admissible change before reducing')

    p = sub.add_parser("normalize", parents=[common])
    p.add_argument('input', help='Document path or inline JSON')
    p.add_argument('--target', action='append', metavar='E1,E2',
                   help='Support exponent to make monic (repeatable)')

    p = sub.add_parser("classify", parents=[common])
    p.add_argument('input', nargs='?', help='Parameterization to reduce to normal form')
    p.add_argument('--n', type=int, default=None, help='Multiplicity of the class')
    p.add_argument('--lambda', dest='lambda1', default=None, metavar='L1,L2',
                   help='First characteristic exponent of the class')

    p = sub.add_parser("census", parents=[common])
    p.add_argument('--n-max', type=int, default=None, help='Largest multiplicity')
    p.add_argument('--box', type=int, default=None, help='Bound on lambda_1 coordinates')
    p.add_argument('--save', default=None, metavar='NAME', help='Store the table in the results directory')
    return parser


def _format_text(result: CommandResult) -> str:
    lines = []
    if isinstance(result.data, dict):
        for key, value in result.data.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value)
            lines.append(f"{key}: {value}")
    for row in result.rows:
        case = row.get("case") or "-"
        reason = row.get("reason") or ""
        lines.append(f"n={row['n']:<3} lambda1={str(tuple(row['lambda1'])):<10} "
                     f"{'quasi-simple' if row['quasi_simple'] else 'not':<13} {case:<3} {reason}")
    return "\n".join(lines)


def _format_json(result: CommandResult) -> str:
    if result.rows:
        return "\n".join(dumps(row) for row in result.rows)
    return dumps(result.data)


def _report(error: QordError) -> None:
    print(dumps(error.to_dict()), file=sys.stderr)


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]

    Returns:
        0 on success, 1 on a domain rejection, 2 on malformed input
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    try:
        manager = ConfigManager(args.config)
    except QordError as e:
        _report(e)
        return 2
    config = manager.get_config()
    level = logging.DEBUG if args.debug else logging.INFO if args.verbose else \
        getattr(logging, str(config.log_level).upper(), logging.WARNING)
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s')

    try:
        result = COMMANDS[args.command](args, manager)
    except InputError as e:
        _report(e)
        return 2
    except QordError as e:
        logger.debug(f"{args.command} rejected: {e.code}")
        _report(e)
        return 1

    output_format = args.format or config.output_format
    text = _format_text(result) if output_format == "text" else _format_json(result)
    if args.output:
        try:
            with open(args.output, "w") as f:
                f.write(text + "\n")
        except OSError as e:
            _report(InputError(f"cannot write {args.output}: {e.strerror}"))
            return 2
    else:
        print(text)
    return 0 if result.success else 1


def main():
    sys.exit(run())
