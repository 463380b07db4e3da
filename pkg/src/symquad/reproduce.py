"""Named reproduction anchors: each recomputes one reference value and compares."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import blowup, ledgers, lines, schubert, secant, symplectic
from .errors import ValidationError
from .matrix import QMatrix
from .normal_form import normal_form, verify_result


@dataclass(frozen=True)
class Anchor:
    name: str
    description: str
    expected: object
    compute: Callable[[], object]


@dataclass(frozen=True)
class AnchorResult:
    name: str
    description: str
    expected: object
    value: object
    passed: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "expected": self.expected,
            "value": self.value,
            "pass": self.passed,
        }


def _eq_counts():
    return [len(symplectic.orbit_equations(r)) for r in range(1, 5)]


def _rank_gap():
    rep = symplectic.rank_gap_sampling(3, 100, 0)
    return {"violations": rep.violations, "strata": sorted(k for k, v in rep.counts.items() if v)}


def _normal_form_diag():
    Z = QMatrix.diag([4, 1, Fraction(1, 4), 1])
    res = normal_form(2, Z)
    verify_result(res, Z)
    return {"witness": res.witness_strings(), "exact": res.exact}


def _tangent_cone():
    facts = secant.orbit_cone_matches_base(3, 1)
    return {"matches": facts["matches"], "vertex_dim": facts["vertex_dim"]}


def _secants():
    return {
        "deg(3,2)": secant.secant_deg(3, 2),
        "dim(3,2)": secant.secant_dim(3, 2),
        "mult(3,3,1)": secant.secant_mult(3, 3, 1),
    }


def _chambers(space):
    return lambda: len(ledgers.cones_of_models(space)["fan"].chambers)


def _k_chambers():
    return sorted({len(ledgers.cones_of_models(("K", r))["fan"].chambers) for r in range(2, 11)})


def _fano():
    return [ledgers.fano_type(r) for r in range(2, 13)]


def _chern():
    out = {}
    for r in range(2, 7):
        d = schubert.chern_tangent(r)
        out[str(r)] = [str(d.c1), str(d.c2)]
    return out


def _tangency():
    res = blowup.schubert_restrictions()
    return {"value": blowup.symplectic_tangency_number(), "restrictions": res.as_dict()}


ANCHORS: tuple[Anchor, ...] = (
    Anchor("equation-counts", "orbit equations for r = 1..4", [0, 5, 14, 27], _eq_counts),
    Anchor("rank-gap", "100 orbit samples for r = 3", {"violations": 0, "strata": [1, 2, 3, 6]}, _rank_gap),
    Anchor(
        "normal-form-diagonal",
        "exact witness for diag(4, 1, 1/4, 1)",
        {"witness": [["2", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1/2", "0"], ["0", "0", "0", "1"]], "exact": True},
        _normal_form_diag,
    ),
    Anchor("x4-pluecker", "size-4 orbit closure equals G(1,4)", True, lambda: lines.verify_x4_pluecker()["ok"]),
    Anchor("rulings", "Lagrangian ruling checks", True, lambda: lines.ruling_check()["ok"]),
    Anchor("tangent-cone", "cone at a rank-1 point for r = 3", {"matches": True, "vertex_dim": 5}, _tangent_cone),
    Anchor("secants", "secant degree, dimension and multiplicity", {"deg(3,2)": 10, "dim(3,2)": 6, "mult(3,3,1)": 3}, _secants),
    Anchor("chambers-S4", "chambers for the size-4 complete quadrics", 3, _chambers("S4")),
    Anchor("chambers-S6", "chambers for the size-6 complete quadrics", 9, _chambers("S6")),
    Anchor("chambers-K", "chamber counts for conics in LG(r, 2r), r = 2..10", [3], _k_chambers),
    Anchor(
        "fano",
        "Fano type for r = 2..12",
        ["Fano"] * 5 + ["weak-Fano"] + ["not-ample"] * 5,
        _fano,
    ),
    Anchor("lg-degree", "degrees of LG(2,4) and LG(3,6)", [2, 16], lambda: [schubert.lg_degree(2), schubert.lg_degree(3)]),
    Anchor(
        "chern",
        "c1 and c2 of LG(r, 2r), r = 2..6",
        {str(r): [f"{r + 1}*s1", f"{r * r + 2 * r}*s2"] for r in range(2, 7)},
        _chern,
    ),
    Anchor("moduli-dim", "dimension of conics in LG(2,4)", 6, lambda: schubert.moduli_dimension(2).value),
    Anchor("nine-lines", "quadric surfaces tangent to nine lines", 92, blowup.nine_lines),
    Anchor("chasles", "conics tangent to five conics", 3264, blowup.chasles),
    Anchor(
        "six-lines-symplectic",
        "symplectic quadrics tangent to six lines",
        40,
        lambda: _tangency()["value"],
    ),
)

ANCHOR_NAMES = tuple(a.name for a in ANCHORS)


def _run(anchor: Anchor) -> AnchorResult:
    value = anchor.compute()
    return AnchorResult(anchor.name, anchor.description, anchor.expected, value, value == anchor.expected)


def workers() -> int:
    try:
        n = int(os.environ.get("SYMQUAD_WORKERS", "1"))
    except ValueError as exc:
        raise ValidationError("SYMQUAD_WORKERS must be an integer") from exc
    return max(1, n)


def run_anchors(names: list[str] | None = None) -> list[AnchorResult]:
    """Run the selected anchors (all by default); results keep the table order."""
    if names is None:
        chosen = list(ANCHORS)
    else:
        unknown = [n for n in names if n not in ANCHOR_NAMES]
        if unknown:
            raise ValidationError(f"unknown anchor(s): {', '.join(unknown)}")
        chosen = [a for a in ANCHORS if a.name in names]
    n = workers()
    if n == 1:
        return [_run(a) for a in chosen]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(_run, chosen))
