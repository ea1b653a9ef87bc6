"""Command-line front end.

Exit codes: 0 success, 1 a binding inequality (or check) failed, 2 usage
or input/output error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

from . import __version__
from .analysis import analyze_fv, analyze_sideinfo, analyze_vv, parse_lambdas, report_rows
from .encoder import (EncoderSpecError, check_il, enumerate_small_il_encoders, format_encoder_spec,
                      load_encoder_spec, run)
from .generate import KINDS, generate
from .lz78 import LZDecodeError, compress, decompress, incremental_parse, lz_encode
from .seq import Alphabet, Parsing, SequenceError, SymbolSequence, load_sequence
from .verify import FAULTS, run_verify

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
DEFAULT_LAMBDAS = "1/4,1/2,1,2,4"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input helpers

def _alphabet(path: Optional[str], size: Optional[int], fallback: Optional[Alphabet] = None) -> Alphabet:
    if path:
        return Alphabet.from_file(path)
    if size is not None:
        return Alphabet.of_size(size)
    return fallback or Alphabet.of_size(2)


def _read_sequence(path: str, alphabet: Alphabet, fmt: str) -> SymbolSequence:
    if path == "-":
        raw = sys.stdin.buffer.read()
    else:
        with open(path, "rb") as fh:
            raw = fh.read()
    return load_sequence(raw, alphabet, fmt)


def _read_parsing(path: str, x: SymbolSequence, fmt: str) -> Parsing:
    """Phrases separated by '|', each written like the input sequence."""
    with open(path, "rb") as fh:
        text = fh.read().decode("utf-8")
    phrases = [load_sequence(part.encode("utf-8"), x.alphabet, fmt).symbols for part in text.split("|")]
    if any(not p for p in phrases):
        raise SequenceError("parsing file contains an empty phrase")
    if tuple(s for p in phrases for s in p) != x.symbols:
        raise SequenceError("parsing phrases do not concatenate to the input sequence")
    return Parsing.from_phrase_lengths([len(p) for p in phrases], distinct=True,
                                       last_incomplete=phrases[-1] in phrases[:-1])


def _lambdas(text: str) -> list[str]:
    vals = [v.strip() for v in text.split(",") if v.strip()]
    if not vals:
        raise UsageError("empty lambda list")
    return vals


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# output helpers

def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str | bytes, out: Optional[str]):
    if out:
        mode = "wb" if isinstance(text, bytes) else "w"
        with open(out, mode, **({} if isinstance(text, bytes) else {"encoding": "utf-8", "newline": ""})) as fh:
            fh.write(text)
    elif isinstance(text, bytes):
        sys.stdout.buffer.write(text)
        sys.stdout.buffer.flush()
    else:
        sys.stdout.write(text)


def _emit_report(report: dict, args) -> int:
    if args.format == "csv":
        _emit(_rows_csv(report_rows(report)), args.out)
    else:
        _emit(dumps(report), args.out)
    return EXIT_VIOLATION if report["violations"] else EXIT_OK


# ---------------------------------------------------------------------------
# commands

def cmd_analyze_fv(args) -> int:
    enc = load_encoder_spec(args.encoder) if args.encoder else None
    coder = args.coder or ("encoder" if enc else "tilted-block")
    alphabet = _alphabet(args.alphabet, args.alpha, enc.alphabet if enc else None)
    x = _read_sequence(args.input, alphabet, args.input_format)
    report = analyze_fv(x, args.ell, _lambdas(args.lambdas), args.states, coder, enc, args.truncate,
                        args.initial_state, args.input)
    return _emit_report(report, args)


def cmd_analyze_vv(args) -> int:
    enc = load_encoder_spec(args.encoder) if args.encoder else None
    alphabet = _alphabet(args.alphabet, args.alpha, enc.alphabet if enc else None)
    x = _read_sequence(args.input, alphabet, args.input_format)
    parsing = _read_parsing(args.parsing, x, args.input_format) if args.parsing else None
    report = analyze_vv(x, _lambdas(args.lambdas), args.states or 1, parsing, enc, args.initial_state, args.input)
    return _emit_report(report, args)


def cmd_sideinfo(args) -> int:
    enc = load_encoder_spec(args.encoder) if args.encoder else None
    x = _read_sequence(args.input, _alphabet(args.alphabet, args.alpha, enc.alphabet if enc else None),
                       args.input_format)
    u = _read_sequence(args.side, _alphabet(args.side_alphabet, args.side_alpha,
                                            enc.side_alphabet if enc else None), args.input_format)
    report = analyze_sideinfo(x, u, _lambdas(args.lambdas), args.states or 1, args.ell, enc,
                              args.initial_state, (args.input, args.side))
    return _emit_report(report, args)


def cmd_lz(args) -> int:
    if args.action == "decode":
        with open(args.input, "rb") as fh:
            data = fh.read()
        alphabet = Alphabet.from_file(args.alphabet) if args.alphabet else None
        x = decompress(data, alphabet)
        sep = " " if any(len(lab) != 1 for lab in x.alphabet.labels) else ""
        _emit(x.to_string(sep), args.out)
        return EXIT_OK
    x = _read_sequence(args.input, _alphabet(args.alphabet, args.alpha), args.input_format)
    if args.action == "parse":
        p, _ = incremental_parse(x)
        sep = " " if any(len(lab) != 1 for lab in x.alphabet.labels) else ""
        report = {"format_version": "1.0", "command": "lz parse", "n": x.n, "alpha": x.alpha, "c": p.c,
                  "boundaries": list(p.boundaries), "last_incomplete": p.last_incomplete,
                  "phrases": [SymbolSequence(x.alphabet, ph).to_string(sep) for ph in p.phrases(x)],
                  "lengths": lz_encode(x)[1] if x.n else []}
        _emit(dumps(report), args.out)
    elif args.bits:
        _emit(lz_encode(x)[0] + "\n", args.out)
    else:
        _emit(compress(x), args.out)
    return EXIT_OK


def cmd_encoder(args) -> int:
    if args.action == "enumerate":
        encs = enumerate_small_il_encoders(args.states or 1, args.alpha or 2, args.max_output_len, args.depth)
        texts = []
        for enc in encs:
            if args.limit is not None and len(texts) >= args.limit:
                break
            texts.append(format_encoder_spec(enc))
        _emit(dumps({"count": len(texts), "depth": args.depth, "encoders": texts}), args.out)
        return EXIT_OK
    enc = load_encoder_spec(args.spec)
    if args.action == "check-il":
        res = check_il(enc, args.depth)
        _emit(dumps({"result": res.describe(), "certified": res.certified, "depth": res.depth,
                     "witness": None if res.witness is None else [list(w) if isinstance(w, tuple) else w
                                                                  for w in res.witness]}), args.out)
        return EXIT_OK if res.certified else EXIT_VIOLATION
    if not args.input:
        raise UsageError("encoder run needs an input sequence")
    x = _read_sequence(args.input, _alphabet(args.alphabet, args.alpha, enc.alphabet), args.input_format)
    u = None
    if enc.has_side:
        if not args.side:
            raise UsageError("encoder has a side alphabet: pass --side FILE")
        u = _read_sequence(args.side, enc.side_alphabet, args.input_format)
    r = run(enc, x, args.initial_state, u)
    _emit(dumps({"states": list(r.states), "outputs": list(r.outputs), "lengths": list(r.lengths),
                 "total": r.total, "bits": r.bits}), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    x = generate(args.kind, args.n, args.alpha or 2, args.seed, args.pattern, args.stay)
    _emit(x.to_string(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify(seed=args.seed, trials=args.trials, sizes=_ints(args.sizes), alphas=_ints(args.alphas),
                        lambdas=[float(v) for v in parse_lambdas(_lambdas(args.lambdas))], depth=args.depth,
                        max_states=args.states or 1, oracle_n=args.oracle_n, fault=args.fault)
    if args.format == "csv":
        rows = [{k: r[k] for k in ("suite", "name", "relation", "scale", "binding", "cases", "violations", "holds")}
                for r in report["checks"]]
        _emit(_rows_csv(rows), args.out)
    else:
        _emit(dumps(report), args.out)
    for name in report["failing"]:
        print(f"FAILED: {name}", file=sys.stderr)
    return EXIT_VIOLATION if report["violations"] else EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _add_input(p, side: bool = False):
    p.add_argument("--alphabet", metavar="FILE", help="alphabet declaration, one label per line")
    p.add_argument("--alpha", type=int, help="alphabet 0..alpha-1 when no --alphabet file (default 2)")
    p.add_argument("--input-format", choices=["tokenized-text", "raw-bytes"], default="tokenized-text")
    if side:
        p.add_argument("--side-alphabet", metavar="FILE")
        p.add_argument("--side-alpha", type=int)


def _add_output(p, formats=("json", "csv")):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", metavar="FILE", help="write here instead of stdout")


def _add_grid(p):
    p.add_argument("--lambda", dest="lambdas", default=DEFAULT_LAMBDAS, metavar="LIST",
                   help="comma-separated, rationals allowed (default %(default)s)")
    p.add_argument("--states", type=int, help="number of encoder states s in the bounds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lzcgf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze-fv", help="F-V CGF of a block coder against the block converses")
    p.add_argument("input")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--coder", choices=["tilted-block", "block-lz", "encoder"])
    p.add_argument("--encoder", metavar="SPEC", help="encoder spec file (implies --coder encoder)")
    p.add_argument("--initial-state", type=int, default=0)
    p.add_argument("--truncate", action="store_true", help="drop trailing symbols when ell does not divide n")
    _add_grid(p)
    _add_input(p)
    _add_output(p)
    p.set_defaults(func=cmd_analyze_fv)

    p = sub.add_parser("analyze-vv", help="V-V CGF of LZ78 (or an encoder) against the phrase bounds")
    p.add_argument("input")
    p.add_argument("--parsing", metavar="FILE", help="phrases separated by '|' instead of incremental parsing")
    p.add_argument("--encoder", metavar="SPEC")
    p.add_argument("--initial-state", type=int, default=0)
    _add_grid(p)
    _add_input(p)
    _add_output(p)
    p.set_defaults(func=cmd_analyze_vv)

    p = sub.add_parser("sideinfo", help="conditional LZ with side information against its bounds")
    p.add_argument("input")
    p.add_argument("side")
    p.add_argument("--ell", type=int, help="block length for the F-V side-information bound")
    p.add_argument("--encoder", metavar="SPEC", help="encoder with a side alphabet for the F-V check")
    p.add_argument("--initial-state", type=int, default=0)
    _add_grid(p)
    _add_input(p, side=True)
    _add_output(p)
    p.set_defaults(func=cmd_sideinfo)

    p = sub.add_parser("lz", help="LZ78 incremental parsing and codec")
    p.add_argument("action", choices=["parse", "encode", "decode"])
    p.add_argument("input")
    p.add_argument("--bits", action="store_true", help="encode: print the bit string instead of the stream")
    _add_input(p)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_lz)

    p = sub.add_parser("encoder", help="finite-state encoder tools")
    p.add_argument("action", choices=["run", "check-il", "enumerate"])
    p.add_argument("spec", nargs="?", help="encoder spec file (run, check-il)")
    p.add_argument("input", nargs="?", help="input sequence (run)")
    p.add_argument("--side", metavar="FILE", help="side sequence (run)")
    p.add_argument("--initial-state", type=int, default=0)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--states", type=int, help="enumerate: number of states")
    p.add_argument("--max-output-len", type=int, default=1)
    p.add_argument("--limit", type=int)
    _add_input(p)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_encoder)

    p = sub.add_parser("gen", help="write a synthetic sequence")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pattern", default="01", help="periodic: one period")
    p.add_argument("--stay", type=float, default=0.9, help="markov: probability of repeating a symbol")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--sizes", default="100,1000")
    p.add_argument("--alphas", default="2,3,4")
    p.add_argument("--lambda", dest="lambdas", default=DEFAULT_LAMBDAS, metavar="LIST")
    p.add_argument("--depth", type=int, default=6, help="IL certification depth for enumerated encoders")
    p.add_argument("--states", type=int, help="enumerate encoders with up to this many states (default 1)")
    p.add_argument("--oracle-n", type=int, default=10, help="exhaustive oracle up to this length")
    p.add_argument("--fault", choices=FAULTS, help="inject a known bug (mutation test)")
    _add_output(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SequenceError, EncoderSpecError, LZDecodeError, ValueError, OSError) as exc:
        print(f"lzcgf {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
