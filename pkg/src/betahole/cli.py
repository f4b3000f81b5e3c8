"""Command-line front end.  Output is JSON (default) or CSV, byte-stable across runs."""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import re
import sys
from fractions import Fraction

from . import bifurcation as bif
from .errors import DomainError, HypothesisViolation, InvariantViolation
from .expansion import eval_expansion, greedy_expand, is_delta_valid, quasi_greedy_expand
from .field import FieldElement, MultinacciBeta, make_beta
from .lyndon import coverage_measure, enumerate_lyndon, is_lyndon_word, make_interval, verify_disjoint
from .oracle import brute_count, orbit_survives
from .sft import count_blocks, survivor_sft_for_word
from .symbolic import EPSequence, TruncatedWord

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2

_LITERAL = re.compile(r"^[01]*\([01]+\)$")
_DECIMAL = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_literal(node) -> int:
    sign = 1
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        sign, node = -1, node.operand
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return sign * node.value
    raise DomainError("exponents must be integer literals")


def _poly(node, beta: MultinacciBeta) -> FieldElement:
    """Evaluate a small arithmetic expression in the symbol ``b``."""
    if isinstance(node, ast.Expression):
        return _poly(node.body, beta)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return beta(node.value)
    if isinstance(node, ast.Name) and node.id in ("b", "beta"):
        return beta.gen
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _poly(node.operand, beta)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left = _poly(node.left, beta)
        if isinstance(node.op, ast.Pow):
            return left ** _int_literal(node.right)
        right = _poly(node.right, beta)
        ops = {ast.Add: lambda: left + right, ast.Sub: lambda: left - right, ast.Mult: lambda: left * right}
        if type(node.op) in ops:
            return ops[type(node.op)]()
        if isinstance(node.op, ast.Div):
            if right.is_zero:
                raise DomainError("division by zero")
            return left / right
    raise DomainError("unsupported expression; use digits, b, + - * / ** and parentheses")


def parse_value(text: str, beta: MultinacciBeta) -> FieldElement:
    """A decimal, ``p/q``, an expression in ``b``, or a digit literal ``u(v)``."""
    text = text.strip()
    if _LITERAL.match(text):
        return eval_expansion(beta, EPSequence.parse(text))
    if _DECIMAL.match(text):
        return beta(Fraction(text))
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"cannot parse value {text!r}") from exc
    return _poly(tree, beta)


def _seq(x) -> dict | str:
    if isinstance(x, TruncatedWord):
        return {"truncated": x.digits, "horizon": x.horizon}
    return str(x)


def _fe(x: FieldElement, args) -> dict:
    return x.to_json(args.precision_digits)


def _dim_payload(t: FieldElement, est: bif.DimensionEstimate, args) -> dict:
    return {"t": _fe(t, args), **est.to_json()}


def _unit(args, beta) -> FieldElement:
    t = parse_value(args.t, beta)
    if t.sign() < 0 or t >= 1:
        raise DomainError("t must lie in [0, 1)")
    return t


def cmd_delta(args, beta):
    return {"delta": str(beta.delta)}


def cmd_expand(args, beta):
    x = parse_value(args.t, beta)
    out = {"t": _fe(x, args)}
    if args.quasi:
        out["quasi_greedy"] = _seq(quasi_greedy_expand(x, args.horizon))
    else:
        out["greedy"] = _seq(greedy_expand(x, args.horizon))
    return out


def cmd_lyndon_check(args, beta):
    ok = is_lyndon_word(args.word, beta)
    out = {"lyndon": ok}
    if ok:
        out["interval"] = make_interval(args.word, beta).to_json(args.precision_digits)
    return out


def cmd_lyndon_enum(args, beta):
    ivs = enumerate_lyndon(beta, args.depth, args.jobs)
    return [
        {
            "word": iv.word,
            "length": iv.length,
            "t_left": iv.t_left.decimal(args.precision_digits),
            "t_right": iv.t_right.decimal(args.precision_digits),
        }
        for iv in ivs
    ]


def cmd_dim(args, beta):
    t = _unit(args, beta)
    enumerate_lyndon(beta, args.depth, args.jobs)
    est = bif.dimension(t, beta, args.depth, args.tol, args.horizon)
    if args.emit_graph and est.word is not None and est.word != "0":
        with open(args.emit_graph, "w") as fh:
            fh.write(survivor_sft_for_word(beta, est.word).to_dot())
    return _dim_payload(t, est, args)


def cmd_member(args, beta):
    t = _unit(args, beta)
    return {
        "t": _fe(t, args),
        "in_E": bif.in_E(t, beta, args.horizon).to_json(),
        "in_B": bif.in_B(t, beta, args.depth, args.horizon).to_json(),
        "in_E_prime": bif.in_E_prime(t, beta, args.horizon).to_json(),
        "in_B_prime": bif.in_B_prime(t, beta, args.depth, args.horizon).to_json(),
    }


def _grid(args, beta) -> list[FieldElement]:
    if args.points:
        return [parse_value(p, beta) for p in args.points.split(",")]
    start, stop, count = args.grid.split(":")
    start, stop, count = Fraction(start), Fraction(stop), int(count)
    if count < 1:
        raise DomainError("grid count must be positive")
    if count == 1:
        return [beta(start)]
    return [beta(start + (stop - start) * i / (count - 1)) for i in range(count)]


STAIRCASE_COLUMNS = ["t_decimal", "t_exact", "dim_lo", "dim_hi", "method", "depth"]


def cmd_staircase(args, beta):
    enumerate_lyndon(beta, args.depth, args.jobs)
    rows = bif.staircase(beta, _grid(args, beta), args.depth, args.tol, args.horizon)
    return [
        {
            "t_decimal": r.t.decimal(args.precision_digits),
            "t_exact": " ".join(r.t.coeff_strings()),
            "dim_lo": r.estimate.lo,
            "dim_hi": r.estimate.hi,
            "method": r.estimate.method,
            "depth": r.estimate.depth_used,
            "raw_lo": r.raw.lo,
            "raw_hi": r.raw.hi,
        }
        for r in rows
    ]


def cmd_sup_e(args, beta):
    enumerate_lyndon(beta, args.depth, args.jobs)
    rep = bif.sup_E(beta, args.depth)
    return {
        "depth": rep.depth,
        "word": rep.interval.word if rep.interval else None,
        "value": _fe(rep.value, args),
        "gap": _fe(rep.gap, args),
        "threshold": _fe(beta.threshold, args),
    }


def cmd_coverage(args, beta):
    ivs = enumerate_lyndon(beta, args.depth, args.jobs)
    total = coverage_measure(ivs, beta)
    return {
        "depth": args.depth,
        "intervals": len(ivs),
        "coverage": _fe(total, args),
        "threshold": _fe(beta.threshold, args),
        "ratio": float(total / beta.threshold),
    }


def cmd_local_dim(args, beta):
    t = _unit(args, beta)
    radii = [Fraction(r) for r in args.radii.split(",")]
    enumerate_lyndon(beta, args.depth, args.jobs)
    profile = bif.local_dimension_profile(t, beta, radii, args.depth, args.tol, args.horizon)
    return [{"r": str(p.radius), **p.estimate.to_json()} for p in profile]


def cmd_tail_dim(args, beta):
    t = _unit(args, beta)
    enumerate_lyndon(beta, args.depth, args.jobs)
    return _dim_payload(t, bif.tail_dimension(t, beta, args.depth, args.tol, args.horizon), args)


def cmd_selftest(args, beta):
    checks = []

    def check(name, ok):
        checks.append({"check": name, "ok": bool(ok)})

    check("delta_valid", is_delta_valid(beta.delta))
    check("quasi_greedy_one", quasi_greedy_expand(beta.one, args.horizon) == beta.delta)
    ivs = enumerate_lyndon(beta, min(args.depth, 10), args.jobs)
    check("disjoint_open", verify_disjoint(ivs) is True)
    check("disjoint_closed", verify_disjoint(ivs, closed=True) is True)
    for iv in ivs[:6]:
        low = EPSequence.finite(iv.word)
        sft = survivor_sft_for_word(beta, iv.word)
        check(f"count_{iv.word}", all(brute_count(low, beta, n) == count_blocks(sft, n) for n in range(1, 11)))
        check(f"orbit_{iv.word}", orbit_survives(iv.t_right, iv.t_right, beta, 3 * iv.length))
    ok = all(c["ok"] for c in checks)
    if not ok:
        raise InvariantViolation("selftest failed: " + ", ".join(c["check"] for c in checks if not c["ok"]))
    return checks


COMMANDS = {
    "delta": (cmd_delta, "print delta(beta)"),
    "expand": (cmd_expand, "greedy (or quasi-greedy) expansion of a value"),
    "lyndon-check": (cmd_lyndon_check, "test whether a word is beta-Lyndon"),
    "lyndon-enum": (cmd_lyndon_enum, "list Lyndon intervals up to --depth"),
    "dim": (cmd_dim, "dimension of the survivor set at t"),
    "member": (cmd_member, "membership of t in E, B, E', B'"),
    "staircase": (cmd_staircase, "dimension estimates over a grid"),
    "sup-e": (cmd_sup_e, "largest right endpoint below 1 - 1/beta"),
    "coverage": (cmd_coverage, "total length of the Lyndon intervals"),
    "local-dim": (cmd_local_dim, "local dimension profile of B at t"),
    "tail-dim": (cmd_tail_dim, "dimension of E on [t, 1]"),
    "selftest": (cmd_selftest, "brute-force cross-checks"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--m", default="1", help="multinacci order, or 'two' for beta = 2")
    common.add_argument("--depth", type=int, default=bif.DEFAULT_DEPTH, help="maximal Lyndon word length L")
    common.add_argument("--horizon", type=int, default=10_000, help="orbit steps before giving up")
    common.add_argument("--tol", type=float, default=1e-12, help="relative tolerance for the Perron root")
    common.add_argument("--precision-digits", type=int, default=30, help="decimal places in rendered values")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    common.add_argument("--emit-graph", metavar="PATH", help="write the SFT used by 'dim' as Graphviz DOT")

    parser = _Parser(prog="betahole", description="beta-transformation with a hole: bifurcation sets and dimension")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name in ("expand", "dim", "member", "local-dim", "tail-dim"):
            p.add_argument("--t", required=True, help="decimal, p/q, expression in b, or u(v)")
        if name == "expand":
            p.add_argument("--quasi", action="store_true", help="quasi-greedy instead of greedy")
        if name == "lyndon-check":
            p.add_argument("--word", required=True)
        if name == "staircase":
            g = p.add_mutually_exclusive_group(required=True)
            g.add_argument("--grid", help="start:stop:count, evenly spaced rationals")
            g.add_argument("--points", help="comma-separated values")
        if name == "local-dim":
            p.add_argument("--radii", default="1/10,1/100,1/1000,1/10000", help="comma-separated radii")
    return parser


def _flatten(obj, prefix: str = "") -> dict:
    out = {}
    for k, v in obj.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = " ".join(map(str, v))
        else:
            out[key] = v
    return out


def render(payload, fmt: str, command: str) -> str:
    if fmt == "json":
        return json.dumps(payload, separators=(",", ":"), ensure_ascii=False) + "\n"
    rows = payload if isinstance(payload, list) else [payload]
    rows = [_flatten(r) for r in rows]
    if command == "staircase":
        columns = STAIRCASE_COLUMNS
    else:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        beta = make_beta(args.m)
        if args.depth < 1 or args.horizon < 1 or args.tol <= 0 or args.precision_digits < 1 or args.jobs < 1:
            raise DomainError("--depth, --horizon, --tol, --precision-digits and --jobs must be positive")
        func = COMMANDS[args.command][0]
        payload = func(args, beta)
        stdout.write(render(payload, args.format, args.command))
        return EXIT_OK
    except InvariantViolation as exc:
        stderr.write(f"invariant violation: {exc}\n")
        return EXIT_INVARIANT
    except (UsageError, DomainError, HypothesisViolation, ValueError, ZeroDivisionError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
