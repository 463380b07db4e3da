"""Secant varieties of quadratic Veronese embeddings, and tangent cones."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import InvariantViolation, ValidationError
from .matrix import rref, same_span, span_dimension, sym_variables
from .poly import MPoly, lowest_degree_part, var_key, zvar
from .symplectic import orbit_equations


def _check_nh(n: int, h: int) -> None:
    if not all(isinstance(x, int) for x in (n, h)) or not (1 <= h <= n):
        raise ValidationError("need integers with 1 <= h <= n")


def secant_dim(n: int, h: int) -> int:
    """Dimension of the h-secant variety of the Veronese image of P^n (rank <= h)."""
    _check_nh(n, h)
    return (2 * n * h - h * h + 3 * h - 2) // 2


def secant_deg(n: int, h: int) -> int:
    """Degree of the locus of symmetric (n+1)x(n+1) matrices of rank <= h."""
    _check_nh(n, h)
    prod = Fraction(1)
    for i in range(n - h + 1):
        prod *= Fraction(comb(n + 1 + i, n + 1 - h - i), comb(2 * i + 1, i))
    if prod.denominator != 1:
        raise InvariantViolation(f"non-integral secant degree {prod} for n={n}, h={h}")
    return prod.numerator


def secant_mult(n: int, h: int, k: int) -> int:
    """Multiplicity of the h-secant variety along the k-secant stratum, k < h."""
    _check_nh(n, h)
    if not isinstance(k, int) or not (1 <= k < h):
        raise ValidationError("need 1 <= k < h")
    return secant_deg(n - k, h - k)


@dataclass
class TangentConeReport:
    r: int
    k: int
    forms: list
    multiplicity: int
    vertex_dim: int
    base_label: str
    block_variables: list
    linear_rank: int
    predicted_linear_rank: int
    reduced_forms: list = field(default_factory=list)
    block_only: bool = False

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "k": self.k,
            "multiplicity": self.multiplicity,
            "vertex_dim": self.vertex_dim,
            "base": self.base_label,
            "linear_rank": self.linear_rank,
            "predicted_linear_rank": self.predicted_linear_rank,
            "block_only": self.block_only,
            "forms": [str(f) for f in self.forms],
            "reduced_forms": [str(f) for f in self.reduced_forms],
        }


def block_indices(r: int, k: int) -> list[int]:
    """Indices of the lower symplectic block left after removing k pairs."""
    return list(range(k, r)) + list(range(r + k, 2 * r))


def block_relabeling(r: int, k: int) -> dict[str, str]:
    """Variable renaming sending the lower block onto the coordinates of size 2(r-k)."""
    idx = block_indices(r, k)
    return {zvar(a, b): zvar(i, j) for i, a in enumerate(idx) for j, b in enumerate(idx) if i <= j}


def _eliminate_linear(linear: list[MPoly], forms: list[MPoly]) -> list[MPoly]:
    """Reduce forms modulo the ideal generated by linear forms."""
    if not linear:
        return list(forms)
    variables = sorted({v for p in linear for v in p.variables()}, key=var_key)
    rows = [[p.coefficient(((v, 1),)) for v in variables] for p in linear]
    red, piv = rref(rows)
    mapping = {}
    for i, c in enumerate(piv):
        expr = MPoly()
        for j in range(c + 1, len(variables)):
            if red[i][j] and j not in piv:
                expr = expr - MPoly.var(variables[j]) * red[i][j]
        mapping[variables[c]] = expr
    return [f.subs(mapping) for f in forms]


def tangent_cone(equations: list[MPoly], r: int, k: int) -> TangentConeReport:
    """Lowest-degree parts of the equations at the point I_k.

    Works in the chart z00 = 1 with z_ii = 1 + w for 1 <= i < k, i.e. the
    point is moved to the origin. For k = 0 the forms are returned as they
    are. Linear lowest parts cut out a linear space; the remaining forms
    are also reported modulo those linear forms.
    """
    if not isinstance(r, int) or r < 1:
        raise ValidationError("r must be a positive integer")
    if not isinstance(k, int) or not (0 <= k <= r):
        raise ValidationError("k must satisfy 0 <= k <= r")
    n = 2 * r
    if k > 0:
        point = {v: Fraction(0) for v in sym_variables(n)}
        for i in range(k):
            point[zvar(i, i)] = Fraction(1)
        for eq in equations:
            if eq.eval(lambda v: point.get(v, Fraction(0))):
                raise ValidationError("equations do not vanish at the base point")
        shift = {zvar(0, 0): MPoly.const(1)}
        for i in range(1, k):
            shift[zvar(i, i)] = MPoly.var(zvar(i, i)) + 1
        moved = [eq.subs(shift) for eq in equations]
    else:
        moved = list(equations)
    forms = [lowest_degree_part(p) for p in moved if not p.is_zero()]
    if not forms:
        raise ValidationError("all equations vanish identically in the chart")
    mult = min(f.degree() for f in forms)
    linear = [f for f in forms if f.degree() == 1]
    higher = [f for f in forms if f.degree() > 1]
    reduced = [f for f in _eliminate_linear(linear, higher) if not f.is_zero()]
    reduced = [lowest_degree_part(f) for f in reduced]
    block = {zvar(a, b) for a in block_indices(r, k) for b in block_indices(r, k)}
    block_only = all(set(f.variables()) <= block for f in reduced)
    return TangentConeReport(
        r=r,
        k=k,
        forms=forms,
        multiplicity=mult,
        vertex_dim=k * (2 * r + 1 - k) - 1,
        base_label=f"X_{2 * (r - k)}",
        block_variables=sorted(block, key=var_key),
        linear_rank=span_dimension(linear),
        predicted_linear_rank=2 * r * k - k * k if k > 0 else 0,
        reduced_forms=reduced,
        block_only=block_only,
    )


def orbit_cone_matches_base(r: int, k: int) -> dict:
    """Compare the tangent cone of the orbit equations at I_k with the smaller orbit.

    Returns the comparison facts as a dict; ``matches`` is the conjunction.
    """
    if not (1 <= k < r):
        raise ValidationError("need 1 <= k < r")
    rep = tangent_cone(orbit_equations(r), r, k)
    relabel = {a: MPoly.var(b) for a, b in block_relabeling(r, k).items()}
    translated = [f.subs(relabel) for f in rep.reduced_forms]
    base = orbit_equations(r - k)
    spans_equal = same_span(translated, base) if base else not translated
    facts = {
        "block_only": rep.block_only,
        "linear_rank": rep.linear_rank,
        "predicted_linear_rank": rep.predicted_linear_rank,
        "span_dimension": span_dimension(translated),
        "base_equations": len(base),
        "spans_equal": spans_equal,
        "vertex_dim": rep.vertex_dim,
    }
    facts["matches"] = bool(
        rep.block_only and spans_equal and rep.linear_rank == rep.predicted_linear_rank
    )
    return facts
