# main.py: batch command-line front end
import argparse
import os
import sys
from dataclasses import asdict
from typing import Any, Callable, List, Optional

from config import Config, config
from error_handler import ErrorSeverity, ErrorType, RealizabilityError, error_handler, fail
from formula import Disj, Exists, is_delta0, parse_formula
from hfset import format_set, parse_set
from realizability import CodeUniverse, extract_disjunct, extract_witness, phi_universal, verify, verify_uniform
from rterm import format_realizer, format_value, parse_realizer
from set_codec import build_code, build_code_scrambled, decode_set, format_code, parse_code
from tape_codec import decode_ordset, encode_ordset, format_tape, parse_ordset, parse_tape
from truth_engine import eval_bruteforce, eval_delta0, parse_assignment, truth_universe

# Exit codes
OK, REFUSED, USAGE = 0, 1, 2

USAGE_ERRORS = {ErrorType.USAGE, ErrorType.PARSE_ERROR, ErrorType.CONFIGURATION, ErrorType.FILE_SYSTEM,
                ErrorType.UNKNOWN_AXIOM, ErrorType.UNKNOWN_RULE, ErrorType.UNBOUND_VARIABLE}


def read_argument(text: str) -> str:
    """``@path`` reads the value from a file."""
    if not text.startswith('@'):
        return text
    path = text[1:]
    if not os.path.exists(path):
        raise fail(ErrorType.FILE_SYSTEM, f"file not found: {path}", ErrorSeverity.HIGH, path=path)
    with open(path, 'r') as f:
        return f.read().strip()


def with_fuel_retry(run: Callable[[Optional[int]], Any], fuel: Optional[int]) -> Any:
    """Run once; on fuel exhaustion let the error handler retry with doubled budgets."""
    try:
        return run(fuel)
    except RealizabilityError as e:
        if e.error_type != ErrorType.OUT_OF_FUEL:
            raise
        e.context.update(retry_function=run, fuel=fuel or config.DEFAULT_FUEL)
        recovered = error_handler.handle_error(e)
        if recovered is None:
            raise
        return recovered


# -- subcommands ------------------------------------------------------------

def cmd_encode(args) -> int:
    if args.ordset:
        print(format_tape(encode_ordset(parse_ordset(args.ordset))))
    elif args.seed is not None:
        print(format_code(build_code_scrambled(parse_set(args.set), args.seed)))
    else:
        print(format_code(build_code(parse_set(args.set))))
    return OK


def cmd_decode(args) -> int:
    if args.tape:
        print(decode_ordset(parse_tape(args.tape)))
    else:
        print(format_set(decode_set(parse_code(args.code))))
    return OK


def cmd_eval(args) -> int:
    phi = parse_formula(read_argument(args.formula))
    assignment = parse_assignment(args.assign) if args.assign else {}
    mode = args.mode or ('delta0' if is_delta0(phi) else 'brute')
    if mode == 'delta0':
        value = eval_delta0(phi, assignment)
    else:
        value = eval_bruteforce(phi, truth_universe(args.truth_rank), assignment)
    print(value)
    return OK


def cmd_realize(args) -> int:
    if args.axiom:
        from axioms import instance_arity, realize_axiom
        instance = parse_formula(read_argument(args.formula)) if args.formula else None
        variables = tuple(int(v) for v in args.vars.split(',')) if args.vars else instance_arity(args.axiom)
        r = realize_axiom(args.axiom, instance, variables)
    else:
        if not args.formula:
            raise fail(ErrorType.USAGE, "realize needs --formula or --axiom", ErrorSeverity.LOW)
        phi = parse_formula(read_argument(args.formula))
        r = phi_universal(phi, parse_assignment(args.assign) if args.assign else None)
    if r is None:
        print("❌ no realiser: the formula is false")
        return REFUSED
    print(format_realizer(r))
    return OK


def cmd_verify(args) -> int:
    r = parse_realizer(read_argument(args.realizer))
    phi = parse_formula(read_argument(args.formula))
    check = verify_uniform if args.uniform else verify
    result = check(r, phi, CodeUniverse())
    print(result)
    return OK if result == 1 else REFUSED


def cmd_extract(args) -> int:
    r = parse_realizer(read_argument(args.realizer))
    phi = parse_formula(read_argument(args.formula))
    if isinstance(phi, Disj):
        index, inner = with_fuel_retry(lambda fuel: extract_disjunct(r, phi, fuel), args.fuel)
        print(f"branch {index}")
        print(format_value(inner))
    elif isinstance(phi, Exists):
        code, values, inner = with_fuel_retry(lambda fuel: extract_witness(r, phi, fuel), args.fuel)
        print(f"witness {format_code(code)}")
        print(' '.join(format_set(v) for v in values))
        print(format_value(inner))
    else:
        raise fail(ErrorType.USAGE, "extract needs a disjunction or an existential", ErrorSeverity.LOW)
    return OK


def cmd_run_otm(args) -> int:
    from ordinal import parse_ordinal
    from otm import Halted, load_program, otm_run
    prog = load_program(args.program)
    param = parse_tape(args.param) if args.param else parse_tape('')
    trace = (lambda cfg: print(cfg.dump())) if args.trace else None
    result = otm_run(prog, parse_tape(args.input), param, parse_ordinal(args.budget), trace)
    if isinstance(result, Halted):
        print(f"✅ halted at stage {result.config.stage}")
        print(format_tape(result.output))
        return OK
    print(f"⚠️ {type(result).__name__}: {result.reason}")
    return REFUSED


def _oracle(args):
    from glued import ProvabilityOracle
    return ProvabilityOracle.from_file(args.oracle)


def cmd_glued_verify(args) -> int:
    from glued import verify_glued
    r = parse_realizer(read_argument(args.realizer))
    phi = parse_formula(read_argument(args.formula))
    result = verify_glued(r, phi, _oracle(args), CodeUniverse())
    print('unknown' if result is None else result)
    return OK if result == 1 else REFUSED


def cmd_dp_extract(args) -> int:
    from glued import dp_extract
    r = parse_realizer(read_argument(args.realizer))
    phi = parse_formula(read_argument(args.formula))
    oracle = _oracle(args)
    try:
        index, inner = with_fuel_retry(lambda fuel: dp_extract(r, phi, oracle, fuel, CodeUniverse()), args.fuel)
    except RealizabilityError as e:
        if e.error_type != ErrorType.PRED_FAILURE:
            raise
        print(f"❌ {e}")
        return REFUSED
    print(f"branch {index}")
    print(format_value(inner))
    return OK


def cmd_suite(args) -> int:
    from suite import AcceptanceSuite
    only = [int(n) for n in args.only.split(',')] if args.only else None
    print(f"🧪 Running acceptance suite at rank {args.rank or config.UNIVERSE_RANK}...")
    report = AcceptanceSuite(args.rank, args.seed, args.scale).run(only)
    print(report.as_text())
    paths = report.save(args.output or config.OUTPUT_DIR, config.STABLE_REPORTS)
    print(f"💾 Report saved to {paths['text']} and {paths['json']}")
    return OK if report.passed else REFUSED


def cmd_corpus(args) -> int:
    from corpus import corpus_generate, write_corpus
    entries = corpus_generate(args.seed, args.depth, args.rank, args.count)
    path = write_corpus(entries, args.output)
    print(f"💾 {len(entries)} sentences written to {path}")
    return OK


# -- parser -----------------------------------------------------------------

def _add_budget_options(p: argparse.ArgumentParser) -> None:
    """The global budget flags, also accepted after the subcommand."""
    p.add_argument('--fuel', type=int, default=argparse.SUPPRESS)
    p.add_argument('--universe-rank', type=int, dest='universe_rank', default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='realizability',
                                     description="Realisability for infinitary set theory at desk scale")
    parser.add_argument('--config', help="YAML file layered over the environment configuration")
    parser.add_argument('--fuel', type=int, help="interpreter fuel per application")
    parser.add_argument('--universe-rank', type=int, dest='universe_rank', help="rank of the code universe")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('encode', help="code a set of ordinals as a tape, or a set as a code")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--ordset', help="ordinal set literal, e.g. {0,3,[w,w*2)}")
    group.add_argument('--set', help="set literal, e.g. {{},{{}}}")
    p.add_argument('--seed', type=int, help="scramble seed for --set")
    p.set_defaults(handler=cmd_encode)

    p = sub.add_parser('decode', help="decode a tape or a code")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--tape', help="tape literal, e.g. (01)^w011")
    group.add_argument('--code', help="code literal, e.g. code(0; ; 1)")
    p.set_defaults(handler=cmd_decode)

    p = sub.add_parser('eval', help="truth value of a formula")
    p.add_argument('--formula', required=True)
    p.add_argument('--assign', help='assignment, e.g. "x0={};x1={{}}"')
    p.add_argument('--mode', choices=('delta0', 'brute'))
    p.add_argument('--rank', type=int, dest='truth_rank', help="brute-force universe rank")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser('realize', help="realiser of a true formula or of an axiom")
    p.add_argument('--formula')
    p.add_argument('--assign')
    p.add_argument('--axiom')
    p.add_argument('--vars', help="distinguished variables of a schema instance, e.g. 0,1")
    _add_budget_options(p)
    p.set_defaults(handler=cmd_realize)

    for name, handler, text in (('verify', cmd_verify, "check a realiser against a sentence"),
                                ('extract', cmd_extract, "branch or witness of a realised sentence"),
                                ('glued-verify', cmd_glued_verify, "glued check against an oracle database"),
                                ('dp-extract', cmd_dp_extract, "branch of a glued-realised disjunction")):
        p = sub.add_parser(name, help=text)
        p.add_argument('--realizer', required=True, help="(realizer PROGRAM PARAM) or @file")
        p.add_argument('--formula', required=True)
        _add_budget_options(p)
        if name == 'verify':
            p.add_argument('--uniform', action='store_true')
        if name in ('glued-verify', 'dp-extract'):
            p.add_argument('--oracle', help="oracle database file")
        p.set_defaults(handler=handler)

    p = sub.add_parser('run-otm', help="run an ordinal Turing machine program")
    p.add_argument('--program', required=True, help="program name under specs/machines or a path")
    p.add_argument('--input', required=True, help="input tape literal")
    p.add_argument('--param', help="parameter tape literal")
    p.add_argument('--budget', default='w*2', help="stage budget as an ordinal")
    p.add_argument('--trace', action='store_true', help="print stage-stamped configurations")
    p.set_defaults(handler=cmd_run_otm)

    p = sub.add_parser('suite', help="run the acceptance suite")
    p.add_argument('--rank', type=int)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--scale', type=float, default=1.0, help="fraction of the full instance counts")
    p.add_argument('--only', help="comma-separated criterion numbers")
    p.add_argument('--output', help="report directory")
    p.set_defaults(handler=cmd_suite)

    p = sub.add_parser('corpus', help="write a deterministic formula corpus")
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--depth', type=int, default=2)
    p.add_argument('--rank', type=int, default=2)
    p.add_argument('--count', type=int, default=50)
    p.add_argument('--output')
    p.set_defaults(handler=cmd_corpus)
    return parser


def apply_global_options(args) -> None:
    try:
        if args.config:
            if not os.path.exists(args.config):
                raise fail(ErrorType.FILE_SYSTEM, f"config file not found: {args.config}", ErrorSeverity.HIGH,
                           path=args.config)
            config.apply(asdict(Config.from_yaml(args.config, config)))
        overrides = {}
        if args.fuel is not None:
            overrides['DEFAULT_FUEL'] = args.fuel
        if args.universe_rank is not None:
            overrides['UNIVERSE_RANK'] = args.universe_rank
        if overrides:
            config.apply(overrides)
    except ValueError as e:
        raise fail(ErrorType.CONFIGURATION, f"invalid configuration: {e}", ErrorSeverity.HIGH)


def cmd_dispatch(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run the subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        apply_global_options(args)
        return args.handler(args)
    except RealizabilityError as e:
        error_handler.handle_error(e)
        print(f"❌ {e.error_type.value}: {e}")
        return USAGE if e.error_type in USAGE_ERRORS else REFUSED


def main():
    sys.exit(cmd_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
