"""Command line entry point: ``skolem {classify,bound,decompose,solve} FILE``.

Reports are single JSON documents on standard output.  Exit status is 0 for
a complete answer, 2 for an incomplete or undecided one and 1 for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

import jsonschema
import mpmath

from . import __version__
from .bounds import BoundConfig, DEFAULT_YU, fixed_yu, tail_threshold
from .classifier import NOT_IN_MSTV, arch_dominance, nonarch_dominance, select_witness
from .errors import ConfigurationError, SkolemError
from .lrs import LRS, char_roots, decompose, degeneracy, exp_poly, minimize_order
from .problem import SCHEMA_VERSION, element_json, frac_str, load_schema, parse
from .search import SolveConfig, enumerate_zeros, solve

EXIT_OK, EXIT_ERROR, EXIT_INCOMPLETE = 0, 1, 2

CONFIG_KEYS = {
    "primes": int,
    "period_cap": int,
    "eval_budget_bits": int,
    "candidate_cap": int,
    "fallback_limit": int,
    "precision_ceiling": int,
    "max_enumerate": int,
    "yu_constant": str,
}


# ---------------------------------------------------------------------------
# configuration


def load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"cannot read config {path}: {e}") from None
    if not isinstance(data, dict):
        raise ConfigurationError("config file must hold a JSON object")
    out = {}
    for k, v in data.items():
        key = k.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"unknown config key {k!r}")
        try:
            out[key] = CONFIG_KEYS[key](v)
        except (TypeError, ValueError):
            raise ConfigurationError(f"bad value for {k!r}: {v!r}") from None
    return out


def _settings(args) -> dict:
    s = load_config(args.config)
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            s[key] = v
    return s


def bound_config(settings: dict) -> BoundConfig:
    if settings.get("yu_constant") is None:
        return BoundConfig(DEFAULT_YU)
    try:
        C = Fraction(str(settings["yu_constant"]))
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"--yu-constant: {settings['yu_constant']!r} is not a number") from None
    if C <= 0:
        raise ConfigurationError("--yu-constant must be positive")
    return BoundConfig(fixed_yu(C))


def solve_config(settings: dict) -> SolveConfig:
    cfg = SolveConfig(bound=bound_config(settings))
    for key in ("primes", "period_cap", "eval_budget_bits", "candidate_cap",
                "fallback_limit", "precision_ceiling"):
        if settings.get(key) is not None:
            setattr(cfg, key, settings[key])
    return cfg


# ---------------------------------------------------------------------------
# JSON views


def _jsonable(x):
    if isinstance(x, Fraction):
        return frac_str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float):
        return x if x == x and abs(x) != float("inf") else str(x)
    return x


def place_label(place, kind: str) -> str:
    return f"arch:{place.index}" if kind == "arch" else f"p={place.p}:{place.index}"


def witness_json(w) -> Optional[dict]:
    if not w:
        return None
    out = {"kind": w.kind, "r": w.r, "p": w.p, "place": place_label(w.place, w.kind),
           "dominant": list(w.dominant)}
    if w.kind == "nonarch":
        out.update(e=w.place.e, f=w.place.f)
    return out


def roots_json(rd) -> list:
    out = []
    for a, m in zip(rd.roots, rd.multiplicities):
        z = a.approx(64)
        out.append({"minpoly": list(a.minpoly.coeffs), "index": a.index, "multiplicity": m,
                    "approx": [mpmath.nstr(z.real, 15), mpmath.nstr(z.imag, 15)]})
    return out


def lrs_json(lrs: LRS) -> dict:
    return {"order": lrs.order, "shift": lrs.shift,
            "coeffs": [element_json(a) for a in lrs.coeffs],
            "initial": [element_json(u) for u in lrs.initial],
            "prefix": [element_json(u) for u in lrs.prefix]}


def _classify_core(core: LRS, settings: dict, bcfg: BoundConfig) -> dict:
    rd = char_roots(core)
    ceiling = settings.get("precision_ceiling")
    rep = exp_poly(core, rd)
    dom = []
    for r in arch_dominance(rd):
        dom.append({"kind": "arch", "place": place_label(r.place, "arch"),
                    "local_degree": r.place.local_degree, "dominant": list(r.dominant)})
    na = nonarch_dominance(rd, ceiling)
    for r in na.reports:
        dom.append({"kind": "nonarch", "p": r.place.p, "e": r.place.e, "f": r.place.f,
                    "place": place_label(r.place, "nonarch"), "dominant": list(r.dominant),
                    "valuations": [frac_str(v) for v in r.valuations]})
    # membership is read off the roots as given; degenerate inputs still
    # report the place certifying it, bounds then work branch by branch
    w = select_witness(rd, None if degeneracy(rd) else rep, bcfg, ceiling)
    return {"rd": rd, "rep": rep, "witness": w, "report": {
        "roots": roots_json(rd),
        "splitting_field_degree": rd.field.D,
        "degeneracy": [list(t) for t in degeneracy(rd)],
        "degenerate": bool(degeneracy(rd)),
        "relevant_primes": list(na.primes),
        "dominance": dom,
        "witness": witness_json(w),
        "mstv": w is not NOT_IN_MSTV,
    }}


def _tail_json(tb) -> dict:
    return {"N": tb.N, "witness": witness_json(tb.witness), "reason": tb.reason,
            "h_data": _jsonable(tb.h_data), "audit": _jsonable(tb.audit)}


def cmd_classify(lrs: LRS, settings: dict, with_bound: bool = False):
    bcfg = bound_config(settings)
    core = lrs.core()
    out = {"lrs": lrs_json(lrs)}
    if core.order == 0:
        out.update(zero_sequence=True, witness=None, mstv=True)
        return out, EXIT_OK
    info = _classify_core(core, settings, bcfg)
    out.update(info["report"])
    code = EXIT_OK if info["witness"] is not NOT_IN_MSTV else EXIT_INCOMPLETE
    if info["report"]["degenerate"]:
        dec = decompose(core, info["rd"])
        out["L"] = dec.L
        branches = []
        for br in dec.branches:
            b = {"residue": br.residue, "zero": br.zero}
            if not br.zero:
                sub = _classify_core(br.lrs, settings, bcfg)
                b["witness"] = witness_json(sub["witness"])
                if sub["witness"] is NOT_IN_MSTV:
                    code = EXIT_INCOMPLETE
                elif with_bound:
                    tb = tail_threshold(sub["witness"], sub["rep"], sub["rd"], bcfg)
                    b["tail_bound"] = _tail_json(tb)
                    if tb.N is None:
                        code = EXIT_INCOMPLETE
            branches.append(b)
        out["branches"] = branches
        if with_bound:
            out["tail_bound"] = None
            out["tail_bound_note"] = "degenerate sequence: tail bounds are per branch"
    elif with_bound:
        if info["witness"] is NOT_IN_MSTV:
            out["tail_bound"] = None
        else:
            tb = tail_threshold(info["witness"], info["rep"], info["rd"], bcfg)
            out["tail_bound"] = _tail_json(tb)
            if tb.N is None:
                code = EXIT_INCOMPLETE
        out["yu_provider"] = (bcfg.yu or DEFAULT_YU).name
    return out, code


def cmd_bound(lrs: LRS, settings: dict):
    return cmd_classify(lrs, settings, with_bound=True)


def cmd_decompose(lrs: LRS, settings: dict):
    dec = decompose(lrs)
    out = {"L": dec.L, "shift": dec.shift,
           "branches": [dict(residue=b.residue, zero=b.zero, **lrs_json(b.lrs)) for b in dec.branches]}
    return out, EXIT_OK


def cmd_solve(lrs: LRS, settings: dict):
    cfg = solve_config(settings)
    rep = solve(lrs, cfg)
    out = {
        "progressions": [{"offset": o, "modulus": m} for o, m in rep.progressions],
        "finite_zeros": rep.finite_zeros,
        "unresolved": _jsonable(rep.unresolved),
        "status": rep.status,
        "L": rep.L,
        "shift": rep.shift,
        "branches": [{"residue": b.residue, "zero": b.zero, "witness": witness_json(b.witness),
                      "N": b.N, "searched_to": b.searched_to, "sieve_primes": list(b.sieve_primes),
                      "candidates": b.candidates, "note": b.note} for b in rep.branches],
        "notes": rep.notes,
    }
    code = EXIT_OK if rep.status == "complete" else EXIT_INCOMPLETE
    limit = settings.get("max_enumerate")
    if limit is not None:
        brute = enumerate_zeros(lrs, limit)
        mine = sorted({n for n in rep.finite_zeros if n <= limit} |
                      {n for o, m in rep.progressions for n in range(o, limit + 1, m)})
        undecided = [n for n in brute if rep.contains(n) is None]
        agrees = [n for n in brute if n not in undecided] == [n for n in mine if n not in undecided]
        out["cross_check"] = {"limit": limit, "agrees": agrees, "enumerated_zeros": brute[:1000]}
        if not agrees:
            raise SkolemError(f"solver disagrees with enumeration up to {limit}")
    return out, code


COMMANDS = {"classify": cmd_classify, "bound": cmd_bound, "decompose": cmd_decompose, "solve": cmd_solve}


# ---------------------------------------------------------------------------
# driver


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skolem", description="Decide zeros of algebraic linear recurrences.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("problem", help="problem file (JSON)")
    ap.add_argument("--primes", type=int, help="number of sieving primes (default 25)")
    ap.add_argument("--period-cap", dest="period_cap", type=int, help="skip primes with a longer period")
    ap.add_argument("--eval-budget-bits", dest="eval_budget_bits", type=int,
                    help="bit budget for exact evaluation of a survivor")
    ap.add_argument("--candidate-cap", dest="candidate_cap", type=int, help="maximum sieve survivors")
    ap.add_argument("--fallback-limit", dest="fallback_limit", type=int,
                    help="search range when no tail bound is available")
    ap.add_argument("--yu-constant", dest="yu_constant", help="fixed constant C for the p-adic bound")
    ap.add_argument("--precision-ceiling", dest="precision_ceiling", type=int,
                    help="maximum p-adic working precision")
    ap.add_argument("--max-enumerate", dest="max_enumerate", type=int,
                    help="cross-check solve against brute force up to this index")
    ap.add_argument("--config", help="JSON file with default values for the options above")
    ap.add_argument("--indent", type=int, default=None, help="pretty-print the report")
    return ap


def validate_report(report: dict) -> None:
    jsonschema.validate(report, load_schema("report"))


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    report = {"schema_version": SCHEMA_VERSION, "command": args.command}
    try:
        settings = _settings(args)
        lrs = parse(args.problem)
        if args.command != "solve":
            lrs = minimize_order(lrs.field, lrs.coeffs, lrs.initial)
        body, code = COMMANDS[args.command](lrs, settings)
        report.update(body)
    except SkolemError as e:
        report["error"] = {"code": e.code, "message": str(e), "offset": getattr(e, "offset", None)}
        code = EXIT_ERROR
        print(f"skolem: {e}", file=sys.stderr)
    report = _jsonable(report)
    validate_report(report)
    stdout.write(json.dumps(report, indent=args.indent) + "\n")
    stdout.flush()
    return code


def main() -> None:  # pragma: no cover - console script
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
