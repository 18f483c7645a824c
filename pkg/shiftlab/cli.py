"""
Command-line front end.

Plain-text line protocol by default; --json prints one JSON record per line.
Exit codes: 0 success, 1 a checked property failed, 2 usage or input error.
"""
import argparse
import json
import logging
import random
import re
import sys
from typing import Any, Callable, List, Optional, Sequence, Tuple

from shiftlab import conf
from shiftlab.arre_invert import (
    Inconclusive,
    NotInImage,
    barrier_h_y,
    compute_r,
    invert,
    phi_not_finite_degree_witness,
    solve_chain,
)
from shiftlab.biseq import (
    cantor_distance,
    first_disagreement,
    format_biseq,
    format_word,
    parse_biseq,
    shift,
    symbol_at,
)
from shiftlab.constants import Side
from shiftlab.cylinder import format_finmap
from shiftlab.degree import degree_probe, parse_grid
from shiftlab.examples import list_examples, run_all, run_example
from shiftlab.exceptions import FormatError, ShiftlabError, UnknownExample
from shiftlab.lemma import (
    ConstantFamily,
    DistinguishedFamily,
    NoImageFamily,
    ZeroDriftFamily,
    build_trace,
    classify,
    nice_check,
    verify_trace,
)
from shiftlab.morphism import (
    check_shift_commuting,
    eval_full,
    eval_window,
    morphism_by_name,
    widen,
)
from shiftlab.shiftspace import (
    allowed_blocks,
    finiteness_probe,
    follower_set,
    parse_space,
    predecessor_set,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# "-3,3" would otherwise be read as an option by argparse.
_DASHED_LIST_RE = re.compile(r"^-\d+(,-?\d+)+$")


class Output:
    """Writes plain lines, or JSON records when --json is set."""

    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def emit(self, text: str, **record: Any) -> None:
        if self.as_json:
            self.stream.write(json.dumps(record, default=str) + "\n")
        else:
            self.stream.write(text + "\n")


def _window(text: str) -> Tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be 'a,b', got {text!r}")
    return a, b


def _symbols(text: str) -> List[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad symbol list {text!r}")


def _family(args) -> DistinguishedFamily:
    if args.family == NoImageFamily.name:
        return NoImageFamily()
    if args.family == ZeroDriftFamily.name:
        return ZeroDriftFamily(args.n, drift=not args.no_drift)
    if args.seq is None:
        raise FormatError("--seq is required for the constant family")
    return ConstantFamily(parse_biseq(args.seq))


# seq


def cmd_seq_eval(args, out: Output) -> int:
    x = parse_biseq(args.seq)
    value = symbol_at(x, args.at)
    out.emit(str(value), position=args.at, symbol=value)
    return EXIT_OK


def cmd_seq_dist(args, out: Output) -> int:
    x, y = parse_biseq(args.seq), parse_biseq(args.other)
    distance = cantor_distance(x, y)
    k = first_disagreement(x, y)
    out.emit(f"d={distance} k={k}", distance=str(distance), first_disagreement=k)
    return EXIT_OK


def cmd_seq_shift(args, out: Output) -> int:
    y = shift(parse_biseq(args.seq), args.by)
    out.emit(format_biseq(y), seq=format_biseq(y))
    return EXIT_OK


# morph


def cmd_morph_apply(args, out: Output) -> int:
    Psi = morphism_by_name(args.rule, args.memory)
    x = parse_biseq(args.seq)
    if args.window is None:
        image = eval_full(Psi, x)
        if not image:
            sys.stderr.write(f"full image unavailable: {image.reason}\n")
            return EXIT_FAILED
        out.emit(format_biseq(image), seq=format_biseq(image))
        return EXIT_OK
    a, b = args.window
    word = eval_window(Psi, x, a, b)
    out.emit(format_word(word), window=[a, b], word=list(word))
    return EXIT_OK


def cmd_morph_commute_check(args, out: Output) -> int:
    Psi = morphism_by_name(args.rule, args.memory)
    a, b = args.window
    ok = check_shift_commuting(Psi, parse_biseq(args.seq), args.k, a, b)
    out.emit(f"commutes={str(ok).lower()}", commutes=ok, k=args.k, window=[a, b])
    return EXIT_OK if ok else EXIT_FAILED


def cmd_morph_widen(args, out: Output) -> int:
    Psi = morphism_by_name(args.rule, args.memory)
    wide = widen(Psi, args.to_memory, args.to_anticipation)
    x = parse_biseq(args.seq)
    a, b = args.window
    before, after = eval_window(Psi, x, a, b), eval_window(wide, x, a, b)
    same = before == after
    out.emit(
        f"{format_word(after)}\nsame={str(same).lower()}",
        word=list(after), same=same,
    )
    return EXIT_OK if same else EXIT_FAILED


# degree


def cmd_degree_probe(args, out: Output) -> int:
    Psi = morphism_by_name(args.rule, args.memory)
    report = degree_probe(Psi, args.value, parse_grid(args.grid))
    for row, line in zip(report.rows, report.lines()):
        out.emit(
            line, value=report.value, symbol_bound=row.symbol_bound,
            domain_bound=row.domain_bound, count=row.count,
            verdict=report.verdict,
        )
    if report.witness:
        out.emit(f"witness: {report.witness}", witness=report.witness)
    for note in report.notes:
        out.emit(f"note: {note}", note=note)
    return EXIT_OK


# lemma


def _trace(args):
    fam = _family(args)
    Psi = morphism_by_name(args.rule, args.memory)
    sample = range(1, args.sample_size + 1) if args.sample_size else None
    return fam, Psi, build_trace(fam, Psi, L_max=args.lmax, sample=sample)


def cmd_lemma_trace(args, out: Output) -> int:
    fam, Psi, trace = _trace(args)
    for level in trace.levels:
        out.emit(
            level.line(), ell=level.ell, h=format_finmap(level.h),
            S=level.index_text, y=list(level.y_word),
        )
    if not args.verify:
        return EXIT_OK
    problems = verify_trace(trace, fam, Psi, random.Random(args.seed))
    for problem in problems:
        out.emit(f"violation: {problem}", violation=problem)
    return EXIT_FAILED if problems else EXIT_OK


def cmd_lemma_classify(args, out: Output) -> int:
    _, _, trace = _trace(args)
    observation = classify(trace)
    out.emit(
        observation.line(),
        domain_class=observation.domain_class, tag=observation.tag,
        window=list(observation.window),
        h=format_finmap(observation.truncated_map),
    )
    return EXIT_OK


def cmd_lemma_nice(args, out: Output) -> int:
    result = nice_check(_family(args), args.window_radius, args.kmax)
    witness = format_biseq(result.witness) if result.witness else None
    text = f"verdict={result.verdict} tag={result.tag}"
    if witness:
        text += f" witness={witness}"
    out.emit(text, verdict=result.verdict, tag=result.tag, witness=witness)
    return EXIT_OK


# arre


def cmd_arre_solve(args, out: Output) -> int:
    solutions = solve_chain(args.window)
    for line in solutions.lines():
        out.emit(line, solution=line)
    out.emit(f"N={solutions.N} count={len(solutions)}", N=solutions.N,
             count=len(solutions))
    return EXIT_OK


def cmd_arre_r(args, out: Output) -> int:
    r = compute_r(parse_biseq(args.seq), args.nmax)
    out.emit(f"r={r if r is not None else 'none'}", r=r)
    return EXIT_OK


def cmd_arre_invert(args, out: Output) -> int:
    result = invert(parse_biseq(args.seq), args.nmax)
    if isinstance(result, NotInImage):
        out.emit("NOT-IN-IMAGE", result="NOT-IN-IMAGE", reason=result.reason)
    elif isinstance(result, Inconclusive):
        candidate = format_biseq(result.candidate) if result.candidate else None
        out.emit(
            f"INCONCLUSIVE {result.reason}",
            result="INCONCLUSIVE", reason=result.reason, candidate=candidate,
        )
    else:
        out.emit(format_biseq(result), result="preimage", seq=format_biseq(result))
    return EXIT_OK


def cmd_arre_barrier(args, out: Output) -> int:
    h = barrier_h_y(parse_biseq(args.seq), args.nmax)
    out.emit(format_finmap(h), h=format_finmap(h))
    return EXIT_OK


def cmd_arre_witness(args, out: Output) -> int:
    report = phi_not_finite_degree_witness(args.bound, args.nmax)
    for row, line in zip(report.rows, report.lines()):
        out.emit(line, **vars(row))
    ok = report.counts_increase and all(
        row.values_zero and row.witnesses_in_image and row.escapes
        for row in report.rows
    )
    return EXIT_OK if ok else EXIT_FAILED


# lang


def cmd_lang_blocks(args, out: Output) -> int:
    blocks = sorted(allowed_blocks(parse_space(args.space), args.length, args.bound))
    for word in blocks:
        out.emit(format_word(word), block=list(word))
    out.emit(f"count={len(blocks)}", count=len(blocks))
    return EXIT_OK


def cmd_lang_followers(args, out: Output) -> int:
    X = parse_space(args.space)
    lookup = predecessor_set if args.predecessors else follower_set
    result = lookup(X, args.symbol, args.bound)
    symbols = sorted(result.symbols)
    out.emit(
        f"symbols={format_word(symbols)} "
        f"exhaustive={str(result.exhaustive).lower()} "
        f"infinite={str(result.infinite).lower()}",
        symbols=symbols, exhaustive=result.exhaustive, infinite=result.infinite,
    )
    return EXIT_OK


def cmd_lang_finiteness(args, out: Output) -> int:
    report = finiteness_probe(parse_space(args.space), args.side, args.bound)
    for line in report.lines():
        out.emit(line, line=line)
    if report.grew_with_bound:
        out.emit("followers grew with the bound", grew_with_bound=True)
    return EXIT_OK


# examples


def cmd_examples_list(args, out: Output) -> int:
    for case in list_examples():
        out.emit(f"{case.example_id} {case.title}", id=case.example_id,
                 title=case.title)
    return EXIT_OK


def cmd_examples_run(args, out: Output) -> int:
    if args.example_id == "all":
        reports = run_all(args.seed)
    else:
        reports = [run_example(args.example_id, args.seed)]
    for report in reports:
        if out.as_json:
            out.emit("", **report.to_dict())
        else:
            for line in report.lines():
                out.emit(line)
    return EXIT_OK if all(report.passed for report in reports) else EXIT_FAILED


def _add_rule(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--rule", required=True,
        help="arre, sum-window, two-point, zero-locator or windowed:<table file>",
    )
    parser.add_argument(
        "--memory", type=int, default=None,
        help="memory of a windowed table (default: centered window)",
    )


def _add_family(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--family", required=True,
        choices=[NoImageFamily.name, ZeroDriftFamily.name, ConstantFamily.name],
    )
    parser.add_argument("--n", type=int, default=0, help="zero position")
    parser.add_argument("--no-drift", action="store_true")
    parser.add_argument("--seq", default=None, help="point of the constant family")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftlab",
        description="Shift spaces over countable alphabets and their morphisms.",
    )
    parser.add_argument("--json", action="store_true", help="one JSON record per line")
    parser.add_argument("--seed", type=int, default=None, help="seed for sampling")
    parser.add_argument("--verbose", "-v", action="store_true")
    groups = parser.add_subparsers(dest="group", required=True)

    seq = groups.add_parser("seq").add_subparsers(dest="command", required=True)
    p = seq.add_parser("eval")
    p.add_argument("--seq", required=True)
    p.add_argument("--at", type=int, required=True)
    p.set_defaults(handler=cmd_seq_eval)
    p = seq.add_parser("dist")
    p.add_argument("--seq", required=True)
    p.add_argument("--other", required=True)
    p.set_defaults(handler=cmd_seq_dist)
    p = seq.add_parser("shift")
    p.add_argument("--seq", required=True)
    p.add_argument("--by", type=int, default=1)
    p.set_defaults(handler=cmd_seq_shift)

    morph = groups.add_parser("morph").add_subparsers(dest="command", required=True)
    p = morph.add_parser("apply")
    _add_rule(p)
    p.add_argument("--seq", required=True)
    p.add_argument("--window", type=_window, default=None,
                   help="a,b; omit for the whole image")
    p.set_defaults(handler=cmd_morph_apply)
    p = morph.add_parser("commute-check")
    _add_rule(p)
    p.add_argument("--seq", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--window", type=_window, required=True)
    p.set_defaults(handler=cmd_morph_commute_check)
    p = morph.add_parser("widen")
    _add_rule(p)
    p.add_argument("--seq", required=True)
    p.add_argument("--to-memory", type=int, required=True)
    p.add_argument("--to-anticipation", type=int, required=True)
    p.add_argument("--window", type=_window, required=True)
    p.set_defaults(handler=cmd_morph_widen)

    degree = groups.add_parser("degree").add_subparsers(dest="command", required=True)
    p = degree.add_parser("probe")
    _add_rule(p)
    p.add_argument("--value", type=int, required=True)
    p.add_argument("--grid", required=True, help="s:d,... or s:d1..d2")
    p.set_defaults(handler=cmd_degree_probe)

    lemma = groups.add_parser("lemma").add_subparsers(dest="command", required=True)
    for name, handler in (("trace", cmd_lemma_trace), ("classify", cmd_lemma_classify)):
        p = lemma.add_parser(name)
        _add_family(p)
        _add_rule(p)
        p.add_argument("--lmax", type=int, default=3)
        p.add_argument("--sample-size", type=int, default=None)
        if name == "trace":
            p.add_argument("--verify", action="store_true")
        p.set_defaults(handler=handler)
    p = lemma.add_parser("nice")
    _add_family(p)
    p.add_argument("--window-radius", type=int, default=3)
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(handler=cmd_lemma_nice)

    arre = groups.add_parser("arre").add_subparsers(dest="command", required=True)
    p = arre.add_parser("solve")
    p.add_argument("--window", type=_symbols, required=True,
                   help="y_-N,...,y_N")
    p.set_defaults(handler=cmd_arre_solve)
    for name, handler in (
        ("r", cmd_arre_r), ("invert", cmd_arre_invert), ("barrier", cmd_arre_barrier),
    ):
        p = arre.add_parser(name)
        p.add_argument("--seq", required=True)
        p.add_argument("--nmax", type=int, default=None)
        p.set_defaults(handler=handler)
    p = arre.add_parser("witness")
    p.add_argument("--bound", type=int, default=5)
    p.add_argument("--nmax", type=int, default=None)
    p.set_defaults(handler=cmd_arre_witness)

    lang = groups.add_parser("lang").add_subparsers(dest="command", required=True)
    p = lang.add_parser("blocks")
    p.add_argument("--space", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(handler=cmd_lang_blocks)
    p = lang.add_parser("followers")
    p.add_argument("--space", required=True)
    p.add_argument("--symbol", type=int, required=True)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--predecessors", action="store_true")
    p.set_defaults(handler=cmd_lang_followers)
    p = lang.add_parser("finiteness")
    p.add_argument("--space", required=True)
    p.add_argument("--side", choices=Side.get_all_sides(), default=Side.RIGHT)
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(handler=cmd_lang_finiteness)

    examples = groups.add_parser("examples").add_subparsers(dest="command", required=True)
    examples.add_parser("list").set_defaults(handler=cmd_examples_list)
    p = examples.add_parser("run")
    p.add_argument("example_id", help="registered id or 'all'")
    p.set_defaults(handler=cmd_examples_run)
    return parser


def _join_dashed_values(argv: Sequence[str]) -> List[str]:
    joined: List[str] = []
    for token in argv:
        if joined and joined[-1].startswith("--") and "=" not in joined[-1] and (
            _DASHED_LIST_RE.match(token)
        ):
            joined[-1] = f"{joined[-1]}={token}"
        else:
            joined.append(token)
    return joined


def main(argv: Optional[Sequence[str]] = None, stream=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(_join_dashed_values(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s %(message)s",
    )
    if args.seed is None:
        args.seed = conf.get_seed_default()
    handler: Callable[..., int] = args.handler
    out = Output(args.json, stream)
    try:
        return handler(args, out)
    except (FormatError, UnknownExample, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except ShiftlabError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
