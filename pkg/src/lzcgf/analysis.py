"""Analysis reports: measured CGFs next to every applicable bound.

Reports are plain dicts (JSON-ready) with a format version, the parameter
grid, coder metadata and, per grid cell, the measured values, the bound
reports and one row per inequality. A row carries both sides with their
scale tags, so it can be re-checked from the report alone. Rows marked
``binding`` are guaranteed by the theory for the coder at hand; the others
are informational and never count as violations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import bounds as B
from .blockcoder import as_fraction, build_tilted_code, encode_blocks
from .cgf import conditional_vv_cgf, exp_sum, fv_cgf, mean_length, vv_cgf
from .empirical import block_stats, joint_block_stats, renyi_entropy, shannon_entropy
from .encoder import EncoderSpec, run
from .lz78 import (BRUTE_FORCE_LIMIT, block_restarted_counts, incremental_parse, lz_encode,
                   lz_phrase_lengths)
from .numerics import leq
from .seq import Parsing, SequenceError, SymbolSequence, verify_parsing
from .sideinfo import conditional_lz_lengths, joint_incremental_parse, per_context_lengths

FORMAT_VERSION = "1.0"


def parse_lambdas(values: Iterable) -> list[Fraction]:
    """Accept numbers or strings like ``"1/2"``; keep them as exact rationals."""
    out = []
    for v in values:
        f = as_fraction(v)
        if f < 0:
            raise ValueError(f"lambda must be nonnegative, got {v}")
        out.append(f)
    return out


def _lam_fields(lam: Fraction) -> dict:
    return {"lambda": str(lam), "lambda_value": float(lam)}


def inequality(name: str, lhs_name: str, lhs: float, rhs_name: str, rhs: float, scale: str,
               binding: bool = True) -> dict:
    """Row asserting ``lhs <= rhs`` within the global slack."""
    return {"name": name, "relation": "<=",
            "lhs": {"name": lhs_name, "value": lhs, "scale": scale},
            "rhs": {"name": rhs_name, "value": rhs, "scale": scale},
            "holds": leq(lhs, rhs), "binding": binding}


def count_violations(report: dict) -> int:
    return sum(1 for cell in report["cells"] for row in cell["checks"]
               if row["binding"] and not row["holds"])


def _finish(report: dict) -> dict:
    report["violations"] = count_violations(report)
    return report


def _input_desc(x: SymbolSequence, name: Optional[str]) -> dict:
    return {"file": name, "alpha": x.alpha, "n": x.n}


# ---------------------------------------------------------------------------
# fixed-to-variable

def analyze_fv(x: SymbolSequence, ell: int, lambdas: Sequence, s: Optional[int] = None,
               coder: str = "tilted-block", encoder: Optional[EncoderSpec] = None,
               truncate: bool = False, z1: int = 0, name: Optional[str] = None) -> dict:
    notes = []
    if ell < 1:
        raise SequenceError("block length must be positive")
    if x.n % ell:
        if not truncate:
            raise SequenceError(f"block length {ell} does not divide n={x.n} (use truncate)")
        dropped = x.n % ell
        x = x[: x.n - dropped]
        notes.append(f"truncated trailing {dropped} symbol(s)")
    if x.n == 0:
        raise SequenceError("empty sequence")
    if coder == "encoder":
        if encoder is None:
            raise ValueError("coder 'encoder' needs an encoder spec")
        if encoder.has_side:
            raise ValueError("use the sideinfo command for encoders with side input")
        if s is None:
            s = encoder.states
    s = 1 if s is None else s
    lambdas = parse_lambdas(lambdas)
    stats = block_stats(x, ell)
    method = "max-distinct" if ell <= BRUTE_FORCE_LIMIT else "incremental"
    counts = block_restarted_counts(x, ell, method)
    meta = {"coder": coder, "block_count": stats.m, "distinct_blocks": len(stats.counts),
            "c_t": list(counts.counts), "c_t_method": method}

    fixed_lengths = None
    if coder == "encoder":
        lens = run(encoder, x, z1).lengths
        fixed_lengths = [sum(lens[i:i + ell]) for i in range(0, x.n, ell)]
        meta["initial_state"] = z1
        meta["encoder_states"] = encoder.states
    elif coder == "block-lz":
        fixed_lengths = [sum(lz_encode(x[i:i + ell])[1]) for i in range(0, x.n, ell)]
        meta["c_t_incremental"] = list(block_restarted_counts(x, ell, "incremental").counts)
    elif coder != "tilted-block":
        raise ValueError(f"unknown coder {coder!r}")

    cells = []
    for lam in lambdas:
        lv = float(lam)
        cell = _lam_fields(lam)
        if lam == 0:
            if fixed_lengths is None:
                raise ValueError("lambda=0 needs a fixed coder; the tilted code requires lambda > 0")
            cell.update(measured={"mean_length": mean_length(fixed_lengths, x.n),
                                  "shannon_entropy": shannon_entropy(stats)},
                        bounds=[], checks=[], note="lambda=0: mean length only")
            cells.append(cell)
            continue
        measured = {}
        if coder == "tilted-block":
            code = build_tilted_code(stats, lam)
            prof, _ = encode_blocks(x, code)
            lengths = list(prof.lengths)
            measured["header_bits"] = code.header_bits
            measured["worst_case_header_bits"] = code.worst_case_header_bits
            measured["kraft_sum"] = float(code.kraft_sum())
        else:
            lengths = fixed_lengths
        fv = fv_cgf(lengths, lv, x.n, ell).value
        h = renyi_entropy(stats, lv)
        measured.update(block_lengths=lengths, fv_cgf=fv, renyi_entropy=h,
                        shannon_entropy=shannon_entropy(stats), mean_length=mean_length(lengths, x.n))
        t1 = B.thm1_lower_bound(stats, ell, lv, s)
        blz = B.block_lz_lower_bound(counts, lv, s, x.n)
        checks = [
            inequality("thm1_lower_bound <= fv_cgf", t1.name, t1.value, "fv_cgf", fv, B.CGF),
            inequality("block_lz_lower_bound <= fv_cgf", blz.name, blz.value, "fv_cgf", fv, B.CGF,
                       binding=(coder == "encoder")),
        ]
        if coder == "tilted-block":
            checks.append(inequality("fv_cgf <= renyi_entropy + 1/ell", "fv_cgf", fv,
                                     "renyi_entropy + 1/ell", h + 1 / ell, B.CGF))
            checks.append(inequality("kraft_sum <= 1", "kraft_sum", measured["kraft_sum"], "one", 1.0, "kraft"))
        cell.update(measured=measured, bounds=[t1.as_dict(), blz.as_dict()], checks=checks)
        cells.append(cell)

    report = {"format_version": FORMAT_VERSION, "command": "analyze-fv",
              "input": _input_desc(x, name),
              "grid": {"lambda": [str(v) for v in lambdas], "ell": [ell], "s": [s]},
              "coder": meta, "notes": notes, "cells": cells}
    return _finish(report)


# ---------------------------------------------------------------------------
# variable-to-variable

def analyze_vv(x: SymbolSequence, lambdas: Sequence, s: int = 1, parsing: Optional[Parsing] = None,
               encoder: Optional[EncoderSpec] = None, z1: int = 0, name: Optional[str] = None) -> dict:
    if x.n == 0:
        raise SequenceError("empty sequence")
    lambdas = parse_lambdas(lambdas)
    notes = []
    if parsing is None:
        parsing, _ = incremental_parse(x)
        source = "incremental"
    else:
        ok, msg = verify_parsing(x, parsing)
        if not ok:
            raise SequenceError(f"invalid parsing: {msg}")
        if not parsing.distinct:
            raise SequenceError("parsing must be into distinct phrases")
        source = "file"
    c = parsing.c
    if encoder is not None:
        s = max(s, encoder.states)
        lens = run(encoder, x, z1).lengths
        lengths = [sum(lens[a:b]) for a, b in parsing.spans()]
        coder = "encoder"
    elif source == "incremental":
        lengths = lz_encode(x)[1]
        coder = "lz78"
    else:
        lengths = None
        coder = None
        notes.append("no coder for a file parsing without --encoder: bounds only")
    meta = {"coder": coder, "parsing": source, "c": c, "last_incomplete": parsing.last_incomplete,
            "main_term_clogc_over_n": B.lz_main_term(c, x.n)}
    cells = []
    for lam in lambdas:
        lv = float(lam)
        cell = _lam_fields(lam)
        if lam == 0:
            cell.update(measured={"mean_length": None if lengths is None else mean_length(lengths, x.n)},
                        bounds=[], checks=[], note="lambda=0: mean length only")
            cells.append(cell)
            continue
        bl = [B.thm2_lower_bound(c, s, lv)]
        if c >= 2:
            bl.append(B.thm2_alternative_lower_bound(c, s, lv, x.alpha))
        if source == "incremental":
            bl.append(B.thm3_upper_bound(c, x.alpha, lv))
        measured, checks = {}, []
        if lengths is not None:
            total = exp_sum(lengths, lv)
            measured = {"phrase_lengths": lengths, "exp_sum": total,
                        "rho": vv_cgf(lengths, lv, x.n).value, "mean_length": mean_length(lengths, x.n)}
            for b in bl:
                if b.name == "thm3_upper_bound":
                    checks.append(inequality("exp_sum <= thm3_upper_bound", "exp_sum", total, b.name, b.value,
                                             B.EXP_SUM, binding=(coder == "lz78")))
                else:
                    checks.append(inequality(f"{b.name} <= exp_sum", b.name, b.value, "exp_sum", total, B.EXP_SUM))
        cell.update(measured=measured, bounds=[b.as_dict() for b in bl], checks=checks)
        cells.append(cell)
    report = {"format_version": FORMAT_VERSION, "command": "analyze-vv",
              "input": _input_desc(x, name),
              "grid": {"lambda": [str(v) for v in lambdas], "ell": [], "s": [s]},
              "coder": meta, "notes": notes, "cells": cells}
    return _finish(report)


# ---------------------------------------------------------------------------
# side information

def analyze_sideinfo(x: SymbolSequence, u: SymbolSequence, lambdas: Sequence, s: int = 1,
                     ell: Optional[int] = None, encoder: Optional[EncoderSpec] = None, z1: int = 0,
                     names: tuple = (None, None)) -> dict:
    if x.n != u.n:
        raise SequenceError(f"length mismatch: |x|={x.n}, |u|={u.n}")
    if x.n == 0:
        raise SequenceError("empty sequence")
    lambdas = parse_lambdas(lambdas)
    jp = joint_incremental_parse(x, u)
    prof = conditional_lz_lengths(jp, x.alpha)
    lengths = list(prof.lengths)
    notes = []
    meta = {"coder": "conditional-lz", "c": jp.c, "c_u": jp.c_u,
            "u_phrases": ["".join(u.alphabet.labels[v] for v in w) for w in jp.u_phrases],
            "c_k": list(jp.counts), "contexts": list(jp.contexts),
            "conditional_compressibility": B.conditional_compressibility(jp.counts, x.n)}
    fv_lengths = None
    if ell is not None:
        if x.n % ell:
            notes.append(f"ell={ell} does not divide n={x.n}: F-V bound skipped")
            ell = None
        elif encoder is not None:
            if not encoder.has_side:
                raise ValueError("encoder for sideinfo needs a side alphabet")
            s = max(s, encoder.states)
            lens = run(encoder, x, z1, u).lengths
            fv_lengths = [sum(lens[i:i + ell]) for i in range(0, x.n, ell)]
    cells = []
    for lam in lambdas:
        lv = float(lam)
        cell = _lam_fields(lam)
        if lam == 0:
            cell.update(measured={"mean_length": mean_length(lengths, x.n)}, bounds=[], checks=[],
                        note="lambda=0: mean length only")
            cells.append(cell)
            continue
        total = exp_sum(lengths, lv)
        lo = B.sideinfo_vv_lower_bound(jp.counts, s, lv)
        alt = B.sideinfo_vv_alternative(jp.counts, s, lv, x.alpha)
        up = B.sideinfo_vv_upper_bound(jp.counts, x.alpha, lv)
        measured = {"phrase_lengths": lengths, "exp_sum": total,
                    "conditional_rho": conditional_vv_cgf(prof, lv, x.n).value,
                    "main_term": B.conditional_cgf_main_term(jp.counts, x.n, lv),
                    "per_context_exp_sum": [exp_sum(v, lv) for v in per_context_lengths(jp, x.alpha)]}
        checks = [
            inequality("sideinfo_vv_lower_bound <= exp_sum", lo.name, lo.value, "exp_sum", total, B.EXP_SUM),
            inequality("sideinfo_vv_alternative <= exp_sum", alt.name, alt.value, "exp_sum", total, B.EXP_SUM),
            inequality("exp_sum <= sideinfo_vv_upper_bound", "exp_sum", total, up.name, up.value, B.EXP_SUM),
        ]
        for k, (ck, es) in enumerate(zip(jp.counts, measured["per_context_exp_sum"])):
            t3 = B.thm3_upper_bound(ck, x.alpha, lv)
            checks.append(inequality(f"context {k}: exp_sum <= thm3_upper_bound", "exp_sum", es,
                                     t3.name, t3.value, B.EXP_SUM))
        blist = [lo.as_dict(), alt.as_dict(), up.as_dict()]
        if ell is not None:
            fvb = B.sideinfo_fv_lower_bound(joint_block_stats(x, u, ell), lv, s)
            blist.append(fvb.as_dict())
            if fv_lengths is not None:
                avg = exp_sum(fv_lengths, lv) * ell / x.n
                measured["fv_average"] = avg
                measured["fv_cgf"] = fv_cgf(fv_lengths, lv, x.n, ell).value
                checks.append(inequality("sideinfo_fv_lower_bound <= fv_average", fvb.name, fvb.value,
                                         "fv_average", avg, B.FV_AVERAGE))
        cell.update(measured=measured, bounds=blist, checks=checks)
        cells.append(cell)
    report = {"format_version": FORMAT_VERSION, "command": "sideinfo",
              "input": {"x": _input_desc(x, names[0]), "u": _input_desc(u, names[1])},
              "grid": {"lambda": [str(v) for v in lambdas], "ell": [ell] if ell else [], "s": [s]},
              "coder": meta, "notes": notes, "cells": cells}
    return _finish(report)


def report_rows(report: dict) -> list[dict]:
    """Flatten the inequality rows of a report, for CSV export."""
    rows = []
    for cell in report["cells"]:
        for chk in cell["checks"]:
            rows.append({"lambda": cell["lambda"], "check": chk["name"],
                         "lhs_name": chk["lhs"]["name"], "lhs": chk["lhs"]["value"],
                         "rhs_name": chk["rhs"]["name"], "rhs": chk["rhs"]["value"],
                         "scale": chk["lhs"]["scale"], "holds": chk["holds"], "binding": chk["binding"]})
    return rows
