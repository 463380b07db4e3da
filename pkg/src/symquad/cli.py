"""Command-line front end: ``symquad <subcommand> [flags]``.

Exit codes: 0 success, 2 validation error (including bad usage), 3 invariant
violation. JSON documents carry ``"schema": "1"`` and rationals as "p/q".
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from fractions import Fraction
from typing import Callable, Sequence

from . import blowup, ledgers, lines, reproduce, schubert, secant, symplectic
from .cones import primitive
from .errors import InvariantViolation, ValidationError
from .fansvg import fan_to_svg
from .matrix import QMatrix, minors, symmetric_indeterminate_matrix
from .normal_form import normal_form, verify_result
from .poly import rat_str, to_rat

SCHEMA_VERSION = "1"
FORMATS = ("text", "json", "svg")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INVARIANT = 3


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so run() owns the exit code."""

    def error(self, message):
        raise _UsageError(self.format_usage() + f"{self.prog}: error: {message}\n")


class _UsageError(Exception):
    pass


def load_schema() -> dict:
    """The published JSON schema for every document this CLI writes."""
    text = resources.files("symquad").joinpath("schema/output.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def jsonable(obj):
    if isinstance(obj, Fraction):
        return rat_str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    return str(obj)


def parse_matrix(text: str) -> QMatrix:
    """Rows separated by ';', entries by ',' (or a JSON list of lists)."""
    text = text.strip()
    try:
        if text.startswith("["):
            rows = json.loads(text)
        else:
            rows = [[e for e in row.split(",")] for row in text.split(";") if row.strip()]
        return QMatrix([[to_rat(str(e).strip()) for e in row] for row in rows])
    except (ValueError, ZeroDivisionError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot parse matrix {text!r}: {exc}") from exc


def _segre_list(text: str) -> list[Fraction]:
    try:
        return [to_rat(s.strip()) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad segre list {text!r}") from exc


def _need(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise ValidationError(f"--{n.replace('_', '-')} is required for {args.command}")


# subcommand handlers return (result, svg-or-None)


def cmd_equations(args):
    _need(args, "r")
    eqs = symplectic.orbit_equations(args.r)
    return {"r": args.r, "count": len(eqs), "equations": [str(e) for e in eqs]}


def cmd_classify(args):
    _need(args, "r", "matrix")
    label = symplectic.classify_point(args.r, parse_matrix(args.matrix))
    return {"r": args.r, "stratum": str(label), "rank": label.k}


def cmd_normal_form(args):
    _need(args, "r", "matrix")
    Z = parse_matrix(args.matrix)
    res = normal_form(args.r, Z, method=args.method)
    out = res.as_dict()
    out["check"] = jsonable(verify_result(res, Z))
    return out


def cmd_tangent_cone(args):
    _need(args, "r", "k")
    r, k = args.r, args.k
    if args.minors is not None:
        h = args.minors
        # minor(R, C) == minor(C, R) for a symmetric matrix
        eqs = list({str(m): m for m in minors(symmetric_indeterminate_matrix(2 * r - 1), h + 1)}.values())
        rep = secant.tangent_cone(eqs, r, k)
        out = {"r": r, "k": k, "source": f"minors of size {h + 1}", "multiplicity": rep.multiplicity}
        if 1 <= k < h <= 2 * r - 1:
            # degree of the tangent cone; equals the lowest degree only for the determinant
            out["secant_mult"] = secant.secant_mult(2 * r - 1, h, k)
            out["hypersurface"] = h == 2 * r - 1
        out["forms"] = [str(f) for f in rep.forms]
        return out
    rep = secant.tangent_cone(symplectic.orbit_equations(r), r, k)
    out = rep.as_dict()
    out["source"] = "orbit equations"
    if 1 <= k < r:
        out["matches_base"] = secant.orbit_cone_matches_base(r, k)["matches"]
    return out


def cmd_secant(args):
    _need(args, "n", "h")
    out = {"n": args.n, "h": args.h, "dim": secant.secant_dim(args.n, args.h), "deg": secant.secant_deg(args.n, args.h)}
    if args.k is not None:
        out["k"] = args.k
        out["mult"] = secant.secant_mult(args.n, args.h, args.k)
    return out


def cmd_sample(args):
    _need(args, "r")
    return symplectic.rank_gap_sampling(args.r, args.trials, args.seed).as_dict()


def cmd_verify_x4(args):
    return lines.verify_x4_pluecker()


def cmd_rulings(args):
    return lines.ruling_check()


def _space(args):
    if args.space is None:
        if args.r is None:
            raise ValidationError("--space (S4, S6, K(r)) or --r is required")
        return ("K", args.r)
    return args.space


def _names(models) -> dict:
    out = {}
    for name, c in models["ledger"].items():
        if c.known and name not in ("antiK", "antiK_stack"):
            out.setdefault(primitive(c.vector()), name)
    return out


def cmd_chambers(args):
    models = ledgers.cones_of_models(_space(args))
    fan = models["fan"]
    result = {"space": models["space"], "count": len(fan.chambers), "fan": fan.as_dict(), "walls": models["walls"]}
    return result, (fan_to_svg(fan, _names(models)) if args.format == "svg" else None)


def cmd_cones(args):
    models = ledgers.cones_of_models(_space(args))
    result = {
        "space": models["space"],
        "Eff": models["Eff"].as_dict(),
        "Nef": models["Nef"].as_dict(),
        "Mov": models["Mov"].as_dict(),
        "ledger": {k: v.as_dict() for k, v in models["ledger"].items()},
    }
    return result, (fan_to_svg(models["fan"], _names(models)) if args.format == "svg" else None)


def cmd_fano(args):
    _need(args, "r")
    L = ledgers.ledger_K(args.r)
    return {
        "r": args.r,
        "type": ledgers.fano_type(args.r),
        "threshold_table": ledgers.fano_threshold(args.r),
        "antiK": L["antiK"].as_dict(),
    }


def cmd_schubert(args):
    _need(args, "r")
    out = {
        "r": args.r,
        "dimension": schubert.lg_dimension(args.r),
        "graded_dimensions": schubert.ring_tables(args.r).graded_dimensions(),
    }
    if args.product:
        elt = schubert.parse_product(args.r, args.product)
        out["product"] = args.product
        out["value"] = elt.as_dict()
        out["integral"] = schubert.integrate(elt)
    else:
        out["degree"] = schubert.lg_degree(args.r)
    return out


def cmd_chern(args):
    _need(args, "r")
    d = schubert.chern_tangent(args.r)
    return {
        "r": args.r,
        "c1": d.c1.as_dict(),
        "c2": d.c2.as_dict(),
        "linear_coeff": d.linear_coeff,
        "square_coeff": d.square_coeff,
        "e2_coeff": d.e2_coeff,
    }


def cmd_moduli_dim(args):
    _need(args, "r")
    m = schubert.moduli_dimension(args.r)
    return {"r": m.r, "value": m.value, "via_lg": m.via_lg, "via_fibration": m.via_fibration, "consistent": m.consistent}


PRESETS: dict[str, Callable[[], dict]] = {
    "nine-lines": lambda: {"a": 2, "b": 1, "ambient": blowup.AmbientData(9), "segre": blowup.veronese_segre(3)},
    "chasles": lambda: {"a": 6, "b": 2, "ambient": blowup.AmbientData(5), "segre": blowup.veronese_segre(2)},
}


def cmd_intersect(args):
    if args.preset == "six-lines-symplectic":
        res = blowup.schubert_restrictions(args.seed)
        value = blowup.symplectic_tangency_number(args.seed)
        return {"value": value, "inputs": {"preset": args.preset, "a": 2, "b": 1, "n": 6, "hTop": 5, "restrictions": res.as_dict()}}
    if args.preset is not None:
        p = PRESETS[args.preset]()
        a, b, amb, seg = p["a"], p["b"], p["ambient"], p["segre"]
        n = amb.dim
    else:
        _need(args, "a", "b", "n", "segre")
        s = _segre_list(args.segre)
        n = args.n
        codim = args.codim if args.codim is not None else n - (len(s) - 1)
        seg = blowup.SegreData(len(s) - 1, codim, args.m, tuple(s))
        amb = blowup.AmbientData(n, args.htop)
        a, b = args.a, args.b
    value = blowup.blowup_power(a, b, n, amb, seg)
    inputs = {"a": a, "b": b, "n": n, "ambient": amb.as_dict(), "segre": seg.as_dict()}
    if args.preset:
        inputs["preset"] = args.preset
    return {"value": value, "inputs": inputs}


def cmd_reproduce(args):
    if args.all and args.anchor:
        raise ValidationError("use either --all or --anchor")
    names = None if args.all or not args.anchor else args.anchor
    results = reproduce.run_anchors(names)
    return {
        "anchors": [r.as_dict() for r in results],
        "passed": sum(r.passed for r in results),
        "total": len(results),
        "all_pass": all(r.passed for r in results),
    }


COMMANDS: dict[str, tuple[Callable, str]] = {
    "equations": (cmd_equations, "orbit equations of the symplectic orbit closure"),
    "classify": (cmd_classify, "stratum of a symmetric matrix"),
    "normal-form": (cmd_normal_form, "symplectic normal form with witness"),
    "tangent-cone": (cmd_tangent_cone, "lowest-degree forms at a standard point"),
    "secant": (cmd_secant, "secant variety dimension, degree, multiplicity"),
    "sample": (cmd_sample, "rank-gap sampling of orbit points"),
    "verify-x4": (cmd_verify_x4, "size-4 orbit closure against Plücker relations"),
    "rulings": (cmd_rulings, "Lagrangian ruling checks"),
    "chambers": (cmd_chambers, "chamber fan of a model"),
    "cones": (cmd_cones, "Eff, Nef, Mov cones and divisor ledger"),
    "fano": (cmd_fano, "Fano type of conics in LG(r, 2r)"),
    "schubert": (cmd_schubert, "Schubert calculus on LG(r, 2r)"),
    "chern": (cmd_chern, "first two Chern classes of LG(r, 2r)"),
    "moduli-dim": (cmd_moduli_dim, "dimension of conics in LG(r, 2r)"),
    "intersect": (cmd_intersect, "top self-intersection on a blow-up"),
    "reproduce": (cmd_reproduce, "run reproduction anchors"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", help="also write the JSON document to this path")
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="symquad", description="Exact tools for symplectic quadrics and their compactifications.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, parents=[common])
        if name in ("equations", "classify", "normal-form", "tangent-cone", "sample", "chambers", "cones",
                    "fano", "schubert", "chern", "moduli-dim"):
            p.add_argument("--r", type=int)
        if name in ("classify", "normal-form"):
            p.add_argument("--matrix", help="rows ';'-separated, entries ','-separated, rationals as p/q")
        if name == "normal-form":
            p.add_argument("--method", choices=("auto", "general", "diagonal"), default="auto")
        if name in ("tangent-cone", "secant"):
            p.add_argument("--k", type=int)
        if name == "tangent-cone":
            p.add_argument("--minors", type=int, metavar="H", help="use (H+1)-minors of the symmetric 2r x 2r matrix")
        if name == "secant":
            p.add_argument("--n", type=int)
            p.add_argument("--h", type=int)
        if name == "sample":
            p.add_argument("--trials", type=int, default=100)
        if name in ("chambers", "cones"):
            p.add_argument("--space", help="S4, S6 or K(r)")
        if name == "schubert":
            p.add_argument("--product", help="e.g. s1*s1*s21")
        if name == "intersect":
            p.add_argument("--preset", choices=("nine-lines", "six-lines-symplectic", "chasles"))
            p.add_argument("--a", type=int)
            p.add_argument("--b", type=int)
            p.add_argument("--n", type=int)
            p.add_argument("--segre", help="comma-separated s_0..s_d")
            p.add_argument("--htop", type=int, default=1)
            p.add_argument("--m", type=int, default=1)
            p.add_argument("--codim", type=int)
        if name == "reproduce":
            p.add_argument("--all", action="store_true")
            p.add_argument("--anchor", action="append", choices=reproduce.ANCHOR_NAMES)
    return parser


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in (v.values() if isinstance(v, dict) else v)):
                out.append(f"{pad}{k}:")
                out.extend(_text(v, indent + 1))
            elif isinstance(v, dict):
                out.append(f"{pad}{k}: " + ", ".join(f"{a}={b}" for a, b in v.items()))
            elif isinstance(v, list):
                out.append(f"{pad}{k}: " + ", ".join(str(x) for x in v))
            else:
                out.append(f"{pad}{k}: {v}")
        return out
    if isinstance(obj, list):
        if obj and all(isinstance(v, list) and not any(isinstance(x, (dict, list)) for x in v) for v in obj):
            return [pad + "[" + ", ".join(str(x) for x in v) + "]" for v in obj]
        out = []
        for v in obj:
            if isinstance(v, (dict, list)):
                out.append(f"{pad}-")
                out.extend(_text(v, indent + 1))
            else:
                out.append(f"{pad}- {v}")
        return out
    return [f"{pad}{obj}"]


def _reproduce_table(result: dict) -> list[str]:
    rows = [f"{'PASS' if a['pass'] else 'FAIL'}  {a['name']:<22} {json.dumps(a['value'], sort_keys=True)}" for a in result["anchors"]]
    rows.append(f"{result['passed']}/{result['total']} anchors pass")
    return rows


def render(command: str, doc: dict, fmt: str, svg: str | None) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "svg":
        if svg is None:
            raise ValidationError(f"svg output is only available for chambers and cones, not {command}")
        return svg
    if "error" in doc:
        return "\n".join(_text(doc["error"])) + "\n"
    if command == "reproduce":
        return "\n".join(_reproduce_table(doc["result"])) + "\n"
    return "\n".join(_text(doc["result"])) + "\n"


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except _UsageError as exc:
        stderr.write(str(exc))
        return EXIT_VALIDATION
    fmt = args.format
    handler = COMMANDS[args.command][0]
    code = EXIT_OK
    svg = None
    try:
        out = handler(args)
        if isinstance(out, tuple):
            out, svg = out
        doc = {"schema": SCHEMA_VERSION, "command": args.command, "result": jsonable(out)}
        if args.command == "reproduce" and not doc["result"]["all_pass"]:
            code = EXIT_INVARIANT
    except InvariantViolation as exc:
        doc = {
            "schema": SCHEMA_VERSION,
            "command": args.command,
            "error": {"kind": "invariant-violation", "message": str(exc), "witness": jsonable(exc.witness)},
        }
        code = EXIT_INVARIANT
    except ValidationError as exc:
        doc = {"schema": SCHEMA_VERSION, "command": args.command, "error": {"kind": "validation", "message": str(exc)}}
        stderr.write(f"symquad {args.command}: {exc}\n")
        return EXIT_VALIDATION
    try:
        text = render(args.command, doc, fmt, svg)
    except ValidationError as exc:
        stderr.write(f"symquad {args.command}: {exc}\n")
        return EXIT_VALIDATION
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, indent=2) + "\n")
    stdout.write(text)
    if code == EXIT_INVARIANT and "error" in doc:
        stderr.write(f"symquad {args.command}: {doc['error']['message']}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
