"""Line-geometry checks: the size-4 orbit closure as G(1,4), and quadric rulings."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .matrix import QMatrix, same_span, span_dimension
from .poly import MPoly
from .symplectic import omega, orbit_equations


def _p(i: int, j: int) -> MPoly:
    return MPoly.var(f"p{i}{j}")


def pluecker_relations_g14() -> list[MPoly]:
    """The five quadrics p_ij p_kl - p_ik p_jl + p_il p_jk of G(1,4) in P^9."""
    return [
        _p(i, j) * _p(k, l) - _p(i, k) * _p(j, l) + _p(i, l) * _p(j, k)
        for i, j, k, l in combinations(range(5), 4)
    ]


def x4_to_pluecker() -> dict[str, MPoly]:
    """Linear change of coordinates from 4x4 symmetric matrices to Plücker space."""
    half = Fraction(1, 2)
    return {
        "z00": _p(1, 2),
        "z01": _p(0, 1),
        "z02": (_p(1, 4) - _p(2, 3)) * half,
        "z03": _p(0, 2),
        "z11": _p(1, 3),
        "z12": _p(0, 3),
        "z13": (_p(1, 4) + _p(2, 3)) * half,
        "z22": _p(3, 4),
        "z23": _p(0, 4),
        "z33": _p(2, 4),
    }


def _is_invertible_substitution(sub: dict[str, MPoly]) -> bool:
    names = sorted({v for p in sub.values() for v in p.variables()})
    rows = [[p.coefficient(((v, 1),)) for v in names] for p in sub.values()]
    return len(names) == len(sub) and QMatrix(rows).rank() == len(names)


def verify_x4_pluecker() -> dict:
    """Check that the five orbit quadrics for r=2 become the Plücker relations.

    The comparison is between spans of quadratic forms, after the linear
    substitution; the substitution itself must be invertible.
    """
    sub = x4_to_pluecker()
    transformed = [e.subs(sub) for e in orbit_equations(2)]
    relations = pluecker_relations_g14()
    report = {
        "substitution_invertible": _is_invertible_substitution(sub),
        "orbit_span": span_dimension(transformed),
        "pluecker_span": span_dimension(relations),
        "joint_span": span_dimension(transformed + relations),
    }
    report["same_span"] = same_span(transformed, relations)
    report["ok"] = bool(
        report["substitution_invertible"]
        and report["same_span"]
        and report["orbit_span"] == report["pluecker_span"] == 5
    )
    return report


# rulings of the quadric x0^2 + x1^2 - x2^2 - x3^2 = 0 in P^3


def _pluecker_of(u: list, v: list) -> list:
    """Coordinates (p01, p02, p03, p12, p13, p23) of the line spanned by u, v."""
    return [u[i] * v[j] - u[j] * v[i] for i, j in combinations(range(4), 2)]


def _omega4(u: list, v: list):
    return u[0] * v[2] + u[1] * v[3] - u[2] * v[0] - u[3] * v[1]


def ruling_lines(which: str, a: MPoly, b: MPoly) -> tuple[list, list]:
    """Spanning vectors of a line of the first ('L') or second ('R') ruling."""
    if which == "L":
        return [b, -a, -b, a], [a, b, a, b]
    if which == "R":
        return [a, -b, a, b], [b, a, -b, a]
    raise ValueError("ruling must be 'L' or 'R'")


def ruling_curve(which: str, a: MPoly, b: MPoly) -> list:
    u, v = ruling_lines(which, a, b)
    return _pluecker_of(u, v)


def ruling_check() -> dict:
    """The four checks on the two rulings, plus two sanity facts.

    (a) lines of the first ruling are Lagrangian, (b) the first ruling lies
    in the hyperplane Z1 + Z4 = 0, (c) the second does not, (d) the quadric's
    matrix M_Q satisfies M_Q^t Omega M_Q = -Omega.
    """
    s, t = MPoly.var("s"), MPoly.var("t")
    lam, mu = MPoly.var("l"), MPoly.var("m")
    uL, vL = ruling_lines("L", s, t)
    uR, vR = ruling_lines("R", s, t)
    curve_L = _pluecker_of(uL, vL)
    curve_R = _pluecker_of(uR, vR)
    hyper_L = curve_L[1] + curve_L[4]
    hyper_R = curve_R[1] + curve_R[4]

    def on_quadric(u, v) -> bool:
        x = [lam * a + mu * b for a, b in zip(u, v)]
        return (x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3]).is_zero()

    MQ = QMatrix.diag([1, 1, -1, -1])
    W = omega(2)
    at_01 = [c.eval({"s": Fraction(0), "t": Fraction(1)}) for c in curve_L]
    report = {
        "first_ruling_lagrangian": _omega4(uL, vL).is_zero(),
        "first_ruling_in_hyperplane": hyper_L.is_zero(),
        "second_ruling_off_hyperplane": not hyper_R.is_zero(),
        "mq_antisymplectic": MQ.T @ W @ MQ == -W,
        "rulings_on_quadric": on_quadric(uL, vL) and on_quadric(uR, vR),
        "lagrangian_equals_hyperplane": (_omega4(uR, vR) - hyper_R).is_zero(),
        "first_ruling_at_0_1": [str(x) for x in at_01],
        "second_ruling_hyperplane_value": str(hyper_R),
    }
    report["ok"] = all(
        report[k]
        for k in (
            "first_ruling_lagrangian",
            "first_ruling_in_hyperplane",
            "second_ruling_off_hyperplane",
            "mq_antisymplectic",
            "rulings_on_quadric",
        )
    )
    return report
