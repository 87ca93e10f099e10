"""Command-line front end.

Exit codes: 0 success, 1 a mathematical check failed (mismatch, violation,
missing witness), 2 usage or input error.  Results go to stdout and
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .codes import Code, CodeError, classify_code, load_code
from .invariants import (InvariantError, find_forbidden_config, gen_tn, rotation_lower_bound,
                         substitute_blocks, unboundedness_certificates)
from .oracle import (OracleError, crosscheck_gap_bound, crosscheck_offaxis, crosscheck_onaxis,
                     crosscheck_rot_rot, simulate_compose_rots)
from .treeengine import EngineError
from .typecalc import (RotationFixing, TypeCalcError, compose_rot_rot,
                       compose_rot_trans_offaxis, make_type, offaxis_types, onaxis_outcomes,
                       parse_word)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2

SCENARIOS = {
    "rot-rot": crosscheck_rot_rot,
    "off-axis": crosscheck_offaxis,
    "on-axis": crosscheck_onaxis,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits on bad flags; raise instead so run() can return a code
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text: str) -> int:
    v = _nonneg(text)
    if v >= 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--code", help="code file (colors: line, then '<ci> <cj> <degree>')")
    shared.add_argument("--machine", action="store_true", help="key=value output")
    shared.add_argument("--seed", type=_seed, default=0)
    shared.add_argument("--jobs", type=_positive, default=1, help="worker processes for trials")

    p = _Parser(prog="treesimple", description="Bounded simplicity toolkit for colored trees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("analyze-code", parents=[shared], help="classify a code")

    comp = sub.add_parser("compose", help="compose types symbolically")
    csub = comp.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    rr = csub.add_parser("rot-rot", parents=[shared])
    rr.add_argument("--path", required=True, help="colors of the connecting path")
    rt = csub.add_parser("rot-trans", parents=[shared])
    rt.add_argument("--spur", required=True, help="colors from the axis to the fixed vertex")
    rt.add_argument("--type", required=True)
    rt.add_argument("--anchor", required=True, help="color of the projection on the axis")
    rt.add_argument("--occurrence", type=_nonneg, help="which anchor occurrence to read from")
    oa = csub.add_parser("on-axis", parents=[shared])
    oa.add_argument("--type", required=True)
    oa.add_argument("--anchor", required=True)

    lb = sub.add_parser("lower-bound", parents=[shared], help="rotation-count certificate")
    lb.add_argument("--type", required=True)

    gt = sub.add_parser("gen-tn", parents=[shared], help="print the witness word t_n")
    gt.add_argument("--n", type=int, required=True)
    gt.add_argument("--blocks", help="file with '<color> = <word>' block images")

    wi = sub.add_parser("witness", parents=[shared], help="unboundedness certificates")
    wi.add_argument("--up-to", type=int, default=10)

    si = sub.add_parser("simulate", parents=[shared], help="concrete automorphism trials")
    si.add_argument("what", choices=["compose-rots"])
    si.add_argument("--radius", type=_positive, default=10)
    si.add_argument("--trials", type=_positive, default=100)

    cc = sub.add_parser("crosscheck", parents=[shared], help="symbolic vs concrete")
    cc.add_argument("--scenario", required=True, choices=[*SCENARIOS, "lemma39"])
    cc.add_argument("--radius", type=_positive, default=10)
    cc.add_argument("--trials", type=_positive, default=1000)
    cc.add_argument("--K", type=int, default=2, choices=[2, 3], help="gap-bound sweep only")
    cc.add_argument("--alphabet", type=_positive, default=4, help="gap-bound sweep only")
    cc.add_argument("--max-len", type=_positive, default=6, help="gap-bound sweep only")
    return p


# -- helpers -----------------------------------------------------------------

def _load(args, required: bool = False) -> Code | None:
    if args.code is None:
        if required:
            raise UsageError(f"{args.command}: --code is required")
        return None
    return load_code(args.code)


def _names(code: Code | None):
    return None if code is None else [code.name(i) for i in code.colors]


def _word(text: str, code: Code | None):
    return parse_word(text, _names(code))


def _color(text: str, code: Code | None) -> int:
    w = _word(text, code)
    if len(w) != 1:
        raise UsageError(f"expected a single color, got {text!r}")
    return w[0]


def _render(word, code: Code | None) -> str:
    if code is None:
        return ",".join(map(str, word))
    return ",".join(code.name(c) for c in word)


def _emit(lines) -> None:
    for line in lines:
        print(line)


# -- subcommands ---------------------------------------------------------------

def cmd_analyze(args) -> int:
    code = _load(args, required=True)
    report = classify_code(code)
    _emit(report.machine_lines() if args.machine else report.lines())
    return EXIT_OK


def cmd_compose(args) -> int:
    code = _load(args)
    if args.mode == "rot-rot":
        t = compose_rot_rot(_word(args.path, code))
        _emit([f"type={_render(t, code)}" if args.machine else _render(t, code)])
        return EXIT_OK
    t = make_type(_word(args.type, code))
    anchor = _color(args.anchor, code)
    if args.mode == "rot-trans":
        spur = _word(args.spur, code)
        if args.occurrence is not None:
            types = [compose_rot_trans_offaxis(spur, t, anchor, args.occurrence)]
        else:
            types = sorted(offaxis_types(spur, t, anchor))
        _emit((f"type={_render(x, code)}" if args.machine else _render(x, code)) for x in types)
        return EXIT_OK
    outcomes = onaxis_outcomes(t, anchor)
    trans = sorted((o for o in outcomes if not isinstance(o, RotationFixing)),
                   key=lambda o: (o.depth, o.type))
    rots = sorted((o for o in outcomes if isinstance(o, RotationFixing)), key=lambda o: o.color)
    lines = []
    for o in trans:
        lines.append(f"outcome=translation depth={o.depth} type={_render(o.type, code)}"
                     if args.machine else _render(o.type, code))
    for o in rots:
        c = _render([o.color], code)
        lines.append(f"outcome=rotation color={c}" if args.machine else f"rotation-fixing:{c}")
    _emit(lines)
    return EXIT_OK


def cmd_lower_bound(args) -> int:
    code = _load(args)
    cert = rotation_lower_bound(_word(args.type, code))
    fields = [("type", _render(cert.type, code)), ("color", _render([cert.color], code)),
              ("N", cert.N), ("Linf", cert.Linf), ("raw", cert.raw), ("bound", cert.bound)]
    sep = "=" if args.machine else ": "
    _emit(f"{k}{sep}{v}" for k, v in fields)
    return EXIT_OK


def _read_blocks(path: str) -> dict[int, tuple[int, ...]]:
    blocks = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected '<color> = <word>'")
            try:
                color = int(key)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: block color must be 0, 1 or 2") from None
            value = value.strip()
            blocks[color] = () if value in ("", "-") else parse_word(value)
    return blocks


def cmd_gen_tn(args) -> int:
    t = gen_tn(args.n)
    if args.blocks:
        t = substitute_blocks(t, _read_blocks(args.blocks)).canonical
    text = ",".join(map(str, t))
    _emit([f"n={args.n} word={text}" if args.machine else text])
    return EXIT_OK


def cmd_witness(args) -> int:
    code = _load(args, required=True)
    cfg = find_forbidden_config(code)
    if cfg is None:
        print("no forbidden configuration found; no witness family", file=sys.stderr)
        return EXIT_CHECK_FAILED
    certs = unboundedness_certificates(cfg, args.up_to)
    if args.machine:
        _emit(f"{c.line()} raw={c.cert.raw} z_N={c.z_N} z_Linf={c.z_Linf}" for c in certs)
    else:
        _emit(c.line() for c in certs)
    bounds = [c.cert.bound for c in certs]
    if any(b2 < b1 for b1, b2 in zip(bounds, bounds[1:])):
        print("certificate bounds are not monotone", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_simulate(args) -> int:
    code = _load(args, required=True)
    for p in simulate_compose_rots(code, args.trials, args.seed, args.radius, args.jobs):
        t = p.type if p.type == "-" else _render(parse_word(p.type), code)
        length = "-" if p.length is None else p.length
        print(f"trial={p.trial} class={p.kind} length={length} type={t}" if args.machine
              else f"class={p.kind} length={length} type={t}")
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    if args.scenario == "lemma39":
        s = crosscheck_gap_bound(args.alphabet, args.max_len, args.K)
        _emit([s.line()])
        for tag, i, N, slack in s.examples:
            print(f"violation instance={tag} color={i} N={N} slack={slack}")
        return EXIT_CHECK_FAILED if s.mismatches else EXIT_OK
    code = _load(args, required=True)
    s = SCENARIOS[args.scenario](code, args.trials, args.seed, args.radius, args.jobs)
    _emit(s.lines())
    return EXIT_CHECK_FAILED if s.mismatches else EXIT_OK


COMMANDS = {
    "analyze-code": cmd_analyze,
    "compose": cmd_compose,
    "lower-bound": cmd_lower_bound,
    "gen-tn": cmd_gen_tn,
    "witness": cmd_witness,
    "simulate": cmd_simulate,
    "crosscheck": cmd_crosscheck,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CodeError, TypeCalcError, InvariantError, EngineError, OracleError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
