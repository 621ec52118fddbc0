import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from bent_toolkit.config import INLINE_MAX_VARIABLES, LOG_FORMAT, default_jobs, log_level
from bent_toolkit.errors import (
    BentToolkitError,
    CapacityError,
    DimensionError,
    FormatError,
    IntegrityError,
    PreconditionError,
    RefusalError,
)
from bent_toolkit.tools.boolean_function import BooleanFunction, hamming_weight, moebius, parse_truth_table
from bent_toolkit.tools.constructions import (
    BentTriple,
    HodzicVariant,
    RothausVariant,
    affine_shift_triple,
    hodzic,
    inner_product_quadratic,
    mm_bent,
    parse_permutation,
    random_mm_bent,
    render_permutation,
    rothaus,
)
from bent_toolkit.tools.file_system_tool import read_triple, read_truth_table, write_triple, write_truth_table
from bent_toolkit.tools.iteration import run_iteration
from bent_toolkit.tools.spectral_tool import bent_census, bentness, wht_fast, wht_naive
from bent_toolkit.tools.sweep import SweepMode
from bent_toolkit.tools.theorems import (
    FIRST_LEVEL,
    HODZIC_LEVEL,
    MAJORITY_IDENTITY,
    ROTHAUS_NECESSITY,
    SECOND_LEVEL,
    VERIFIERS,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_FAILURE = 3

# verify claims, with the short aliases accepted on the command line
CLAIMS = {
    ROTHAUS_NECESSITY: ROTHAUS_NECESSITY,
    "theorem1": ROTHAUS_NECESSITY,
    MAJORITY_IDENTITY: MAJORITY_IDENTITY,
    "theorem2": MAJORITY_IDENTITY,
    FIRST_LEVEL: FIRST_LEVEL,
    SECOND_LEVEL: SECOND_LEVEL,
    HODZIC_LEVEL: HODZIC_LEVEL,
}


class CommandOutcome:
    """Exit code plus the stdout payload of one command."""

    def __init__(self, exit_code: int, stdout: str = ""):
        self.exit_code = exit_code
        self.stdout = stdout

    def __repr__(self) -> str:
        return f"CommandOutcome(exit_code={self.exit_code}, stdout={self.stdout!r})"


def exit_code_for(error: BentToolkitError) -> int:
    if isinstance(error, PreconditionError):
        return EXIT_NEGATIVE
    if isinstance(error, (FormatError, DimensionError)):
        return EXIT_USAGE
    if isinstance(error, (CapacityError, IntegrityError, RefusalError)):
        return EXIT_FAILURE
    return EXIT_FAILURE


def read_function_arg(arg: str) -> BooleanFunction:
    """Inline truth table (up to INLINE_MAX_VARIABLES variables) or '@path' to a table file."""
    if arg.startswith("@"):
        return read_truth_table(arg[1:])
    f = parse_truth_table(arg)
    if f.n > INLINE_MAX_VARIABLES:
        raise FormatError(f"Inline tables are limited to {INLINE_MAX_VARIABLES} variables; pass @file instead")
    return f


def _mask_arg(text: str) -> List[int]:
    if not text or set(text) - {"0", "1"}:
        raise FormatError(f"Mask must be a bit string (l1 first), got '{text}'")
    return [int(ch) for ch in text]


def _table_text(f: BooleanFunction, fmt: str) -> str:
    return f.render(fmt if f.n >= 3 else 'binary')


def _function_payload(f: BooleanFunction, fmt: str) -> Dict[str, Any]:
    verdict = bentness(f)
    return {"n": f.n, "table": _table_text(f, fmt), "bent": verdict.is_bent, "reason": verdict.reason}


def _emit_function(args: argparse.Namespace, command: str, f: BooleanFunction,
                   extra: Optional[Dict[str, Any]] = None) -> CommandOutcome:
    payload = _function_payload(f, args.format)
    payload["command"] = command
    payload.update(extra or {})
    if getattr(args, "output", None):
        payload["written"] = write_truth_table(args.output, f, args.format)
    if args.machine:
        return CommandOutcome(EXIT_OK, json.dumps(payload, sort_keys=True))
    lines = [payload["table"], "bent" if payload["bent"] else "not bent"]
    if "written" in payload:
        lines.append(payload["written"])
    return CommandOutcome(EXIT_OK, "\n".join(lines))


def _triple_from(args: argparse.Namespace) -> BentTriple:
    """Either --triple @path or all three of --a, --b, --c."""
    members = (args.a, args.b, args.c)
    if args.triple:
        if any(members):
            raise FormatError("--triple cannot be combined with --a, --b or --c")
        if not args.triple.startswith("@"):
            raise FormatError(f"--triple takes @path, got '{args.triple}'")
        return read_triple(args.triple[1:])
    if not all(members):
        raise FormatError("Give --triple @path or all of --a, --b and --c")
    return BentTriple(*(read_function_arg(arg) for arg in members))


# --- commands ---

def cmd_wht(args: argparse.Namespace) -> CommandOutcome:
    f = read_function_arg(args.table)
    spectrum = wht_naive(f) if args.naive else wht_fast(f)
    if args.machine:
        return CommandOutcome(EXIT_OK, json.dumps({"command": "wht", "n": f.n, "spectrum": spectrum.to_list()}))
    return CommandOutcome(EXIT_OK, spectrum.render(compact=not args.lines))


def cmd_anf(args: argparse.Namespace) -> CommandOutcome:
    f = read_function_arg(args.table)
    anf = moebius(f)
    if args.machine:
        payload = {"command": "anf", "n": f.n, "anf": anf.render(), "coefficients": _table_text(anf.as_function(), args.format),
                   "degree": anf.degree, "is_zero": anf.is_zero}
        return CommandOutcome(EXIT_OK, json.dumps(payload, sort_keys=True))
    return CommandOutcome(EXIT_OK, f"{anf.render()}\ndegree: {anf.degree}")


def cmd_degree(args: argparse.Namespace) -> CommandOutcome:
    anf = moebius(read_function_arg(args.table))
    if args.machine:
        return CommandOutcome(EXIT_OK, json.dumps({"command": "degree", "degree": anf.degree, "is_zero": anf.is_zero}, sort_keys=True))
    return CommandOutcome(EXIT_OK, str(anf.degree))


def cmd_is_bent(args: argparse.Namespace) -> CommandOutcome:
    verdict = bentness(read_function_arg(args.table))
    code = EXIT_OK if verdict.is_bent else EXIT_NEGATIVE
    if args.machine:
        payload = {"command": "is-bent", "bent": verdict.is_bent, "reason": verdict.reason}
        return CommandOutcome(code, json.dumps(payload, sort_keys=True))
    return CommandOutcome(code, "bent" if verdict.is_bent else "not bent")


def cmd_weight(args: argparse.Namespace) -> CommandOutcome:
    weight = hamming_weight(read_function_arg(args.table))
    if args.machine:
        return CommandOutcome(EXIT_OK, json.dumps({"command": "weight", "weight": weight}))
    return CommandOutcome(EXIT_OK, str(weight))


def cmd_rothaus(args: argparse.Namespace) -> CommandOutcome:
    return _emit_function(args, "rothaus", rothaus(_triple_from(args), RothausVariant(args.variant)))


def cmd_hodzic(args: argparse.Namespace) -> CommandOutcome:
    return _emit_function(args, "hodzic", hodzic(_triple_from(args), HodzicVariant(args.variant)))


def cmd_iterate(args: argparse.Namespace) -> CommandOutcome:
    states = run_iteration(_triple_from(args), args.k, verify=not args.no_verify)
    blocks = [state.to_dict(include_tables=args.tables, fmt=args.format) for state in states]
    if args.machine:
        return CommandOutcome(EXIT_OK, json.dumps({"command": "iterate", "levels": blocks}, sort_keys=True))
    lines = []
    for block in blocks:
        lines.append(f"level {block['level']}: {block['variables']} variables")
        for name, digest in zip(("g", "g'", "g''"), block["digests"]):
            lines.append(f"  {name} md5 {digest}")
        if "bent" in block:
            lines.append("  " + ", ".join(f"{k} {'bent' if v else 'NOT bent'}" for k, v in block["bent"].items()))
        else:
            lines.append("  unverified")
        for name, table in zip(("g", "g'", "g''"), block.get("tables", [])):
            lines.append(f"  {name} {table}")
    return CommandOutcome(EXIT_OK, "\n".join(lines))


def cmd_verify(args: argparse.Namespace) -> CommandOutcome:
    if args.exhaustive:
        mode = SweepMode.exhaustive()
    elif args.samples is not None and args.seed is not None:
        mode = SweepMode.sampled(args.samples, args.seed)
    else:
        raise FormatError("verify needs --exhaustive or both --samples and --seed")
    jobs = args.jobs if args.jobs is not None else default_jobs()
    report = VERIFIERS[CLAIMS[args.claim]](args.n, mode, jobs)
    code = EXIT_OK if report.success else EXIT_NEGATIVE
    return CommandOutcome(code, report.to_json() if args.machine else report.render_text())


def cmd_gen(args: argparse.Namespace) -> CommandOutcome:
    if args.kind == "quadratic":
        return _emit_function(args, "gen quadratic", inner_product_quadratic(args.n))
    if args.pi is not None:
        if args.rho is None or args.seed is not None:
            raise FormatError("--pi needs --rho and excludes --seed")
        pi = parse_permutation(args.pi)
        f = mm_bent(pi, read_function_arg(args.rho))
        if args.m is not None and 2 * args.m != f.n:
            raise DimensionError(f"--m {args.m} disagrees with a permutation of {len(pi)} points")
        return _emit_function(args, "gen mm", f, {"pi": render_permutation(pi)})
    if args.m is None or args.seed is None:
        raise FormatError("gen mm needs --m with --seed, or --pi with --rho")
    return _emit_function(args, "gen mm", random_mm_bent(args.m, args.seed))


def cmd_triple(args: argparse.Namespace) -> CommandOutcome:
    a = read_function_arg(args.a)
    triple = affine_shift_triple(a, _mask_arg(args.l1), _mask_arg(args.l2))
    written = write_triple(args.output, triple, args.format) if args.output else None
    if args.machine:
        payload = {"command": "triple affine-shift", "n": triple.n,
                   "tables": triple.render(args.format).splitlines(), "flags": triple.flags()}
        if written:
            payload["written"] = written
        return CommandOutcome(EXIT_OK, json.dumps(payload, sort_keys=True))
    lines = [triple.render(args.format)]
    if written:
        lines.append(written)
    return CommandOutcome(EXIT_OK, "\n".join(lines))


def cmd_census(args: argparse.Namespace) -> CommandOutcome:
    count = bent_census(args.n)
    if args.machine:
        return CommandOutcome(EXIT_OK, json.dumps({"command": "census", "n": args.n, "bent": count}))
    return CommandOutcome(EXIT_OK, str(count))


# --- parser ---

def _common_options(suppress: bool) -> argparse.ArgumentParser:
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["binary", "hex"], default=default("binary"),
                        help="Truth-table rendering (hex needs n >= 3, falls back to binary)")
    common.add_argument("--machine", action="store_true", default=default(False),
                        help="Emit one JSON document on stdout")
    common.add_argument("--lines", action="store_true", default=default(False),
                        help="Spectrum output one value per line instead of comma-separated")
    common.add_argument("--log-level", default=default(log_level()),
                        help="Logging level for stderr diagnostics")
    return common


def _triple_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", help="Truth table of A (inline or @file)")
    parser.add_argument("--b", help="Truth table of B (inline or @file)")
    parser.add_argument("--c", help="Truth table of C (inline or @file)")
    parser.add_argument("--triple", help="@path to a file with the tables of A, B and C on three lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bent_manager", description="Bent function analysis and verification",
                                     parents=[_common_options(False)])
    common = _common_options(True)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, handler, help_text in (
        ("wht", cmd_wht, "Walsh-Hadamard spectrum"),
        ("anf", cmd_anf, "Algebraic normal form"),
        ("degree", cmd_degree, "Algebraic degree"),
        ("is-bent", cmd_is_bent, "Bentness test"),
        ("weight", cmd_weight, "Hamming weight"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("table", help="Truth table (binary, 0x-hex, or @file)")
        p.set_defaults(handler=handler)
        if name == "wht":
            p.add_argument("--naive", action="store_true", help="Use the direct-summation transform")

    p = sub.add_parser("rothaus", parents=[common], help="Rothaus construction on n + 2 variables")
    _triple_options(p)
    p.add_argument("--variant", choices=[v.value for v in RothausVariant], default="f")
    p.add_argument("--output", help="Also write the table to this file")
    p.set_defaults(handler=cmd_rothaus)

    p = sub.add_parser("hodzic", parents=[common], help="Hodzic construction on n + 4 variables")
    _triple_options(p)
    p.add_argument("--variant", choices=[v.value for v in HodzicVariant], default="g")
    p.add_argument("--output", help="Also write the table to this file")
    p.set_defaults(handler=cmd_hodzic)

    p = sub.add_parser("iterate", parents=[common], help="Iterate the Hodzic construction k times")
    _triple_options(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--no-verify", action="store_true", help="Skip the transform checks at each level")
    p.add_argument("--tables", action="store_true", help="Print full tables, not only digests")
    p.set_defaults(handler=cmd_iterate)

    p = sub.add_parser("verify", parents=[common], help="Run a verification sweep")
    p.add_argument("claim", choices=list(CLAIMS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, help="Worker processes for exhaustive sweeps")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("gen", parents=[common], help="Generate bent functions")
    gen = p.add_subparsers(dest="kind", required=True)
    mm = gen.add_parser("mm", parents=[common], help="Random Maiorana-McFarland bent function on 2m variables")
    mm.add_argument("--m", type=int, help="Half the variable count (with --seed)")
    mm.add_argument("--seed", type=int, help="Seed for a random permutation and rho")
    mm.add_argument("--pi", help="Explicit permutation of 0..2^m-1, comma-separated")
    mm.add_argument("--rho", help="Truth table of rho on m variables (with --pi)")
    mm.add_argument("--output")
    quad = gen.add_parser("quadratic", parents=[common], help="x1x2 + x3x4 + ... on n variables")
    quad.add_argument("--n", type=int, required=True)
    quad.add_argument("--output")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("triple", parents=[common], help="Build a triple satisfying the four bentness conditions")
    kind = p.add_subparsers(dest="kind", required=True)
    shift = kind.add_parser("affine-shift", parents=[common])
    shift.add_argument("--a", required=True)
    shift.add_argument("--l1", required=True, help="Linear mask as a bit string, l1 first")
    shift.add_argument("--l2", required=True)
    shift.add_argument("--output", help="Also write the three tables to this file")
    p.set_defaults(handler=cmd_triple)

    p = sub.add_parser("census", parents=[common], help="Count bent functions exhaustively (n <= 4)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=cmd_census)
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT, stream=sys.stderr)


def run(argv: List[str]) -> CommandOutcome:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already wrote usage to stderr
        return CommandOutcome(e.code if isinstance(e.code, int) else EXIT_USAGE)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except BentToolkitError as e:
        print(f"Error: {e}", file=sys.stderr)
        code = exit_code_for(e)
        if args.machine:
            command = " ".join(part for part in (args.command, getattr(args, "kind", None)) if part)
            doc = {"command": command, "error": str(e), "error_type": type(e).__name__, "exit_code": code}
            return CommandOutcome(code, json.dumps(doc, sort_keys=True))
        return CommandOutcome(code)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    outcome = run(sys.argv[1:] if argv is None else argv)
    if outcome.stdout:
        print(outcome.stdout)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
