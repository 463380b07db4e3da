"""Cohomology ring of the Lagrangian Grassmannian LG(r, 2r).

The ring is Q[s1..sr] modulo R_i = s_i^2 + 2 sum_{k>=1} (-1)^k s_{i+k} s_{i-k}
(s_0 = 1, s_j = 0 outside 0..r). Ordering monomials by weighted degree and
then by increasing sum j^2 e_j makes s_i^2 the leading term of R_i. These
leading terms are pairwise coprime, so the R_i form a Gröbner basis and
rewriting s_i^2 gives unique square-free normal forms. An independent
per-degree linear-algebra count of the quotient is kept for cross-checks.

Strict-partition classes follow the Pfaffian rule
s_{a,b} = s_a s_b + 2 sum_{k=1}^{b} (-1)^k s_{a+k} s_{b-k}, and for longer
partitions the Pfaffian of the matrix [s_{l_i, l_j}] (a trailing 0 is
appended to odd-length partitions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from .errors import InvariantViolation, ValidationError
from .matrix import sparse_rank
from .poly import MPoly, rat_str

MAX_R = 8

Exp = tuple  # exponent vector (e_1, ..., e_r)
Poly = dict  # Exp -> Fraction


@dataclass(frozen=True, order=True)
class StrictPartition:
    parts: tuple

    def __post_init__(self):
        p = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in p) or any(a <= b for a, b in zip(p, p[1:])):
            raise ValidationError(f"{p} is not a strict partition")
        object.__setattr__(self, "parts", p)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        if not self.parts:
            return "1"
        if all(x < 10 for x in self.parts):
            return "s" + "".join(map(str, self.parts))
        return "s" + "_".join(map(str, self.parts))


def strict_partitions(r: int, weight: int | None = None) -> list[StrictPartition]:
    """Strict partitions with parts <= r, ordered by weight then reverse lexicographically."""
    out = []
    for size in range(r + 1):
        for subset in combinations(range(r, 0, -1), size):
            if weight is None or sum(subset) == weight:
                out.append(StrictPartition(subset))
    return sorted(out, key=lambda p: (p.weight, [-x for x in p.parts]))


def _check_r(r: int) -> None:
    if not isinstance(r, int) or not (1 <= r <= MAX_R):
        raise ValidationError(f"r must be between 1 and {MAX_R}")


def _wdeg(e: Exp) -> int:
    return sum((i + 1) * x for i, x in enumerate(e))


def _sq(e: Exp) -> int:
    return sum((i + 1) ** 2 * x for i, x in enumerate(e))


def _add(p: Poly, e: Exp, c: Fraction) -> None:
    v = p.get(e, 0) + c
    if v:
        p[e] = v
    else:
        p.pop(e, None)


def _mono(r: int, idx: Iterable[int]) -> Exp:
    e = [0] * r
    for i in idx:
        if i:
            e[i - 1] += 1
    return tuple(e)


def _relation(r: int, i: int) -> Poly:
    """R_i as an exponent dictionary."""
    p: Poly = {}
    _add(p, _mono(r, [i, i]), Fraction(1))
    for k in range(1, r - i + 1):
        if i - k < 0:
            break
        _add(p, _mono(r, [i + k, i - k]), Fraction(2 * (-1) ** k))
    return p


class _Reducer:
    def __init__(self, r: int):
        self.r = r
        # s_i^2 -> tail
        self.rules = {}
        for i in range(1, r + 1):
            rel = _relation(r, i)
            lead = _mono(r, [i, i])
            self.rules[i] = {e: -c for e, c in rel.items() if e != lead}
        self.cache: dict[Exp, Poly] = {}

    def monomial(self, e: Exp) -> Poly:
        if e in self.cache:
            return self.cache[e]
        i = next((j for j, x in enumerate(e) if x >= 2), None)
        if i is None:
            res = {e: Fraction(1)}
        else:
            rest = list(e)
            rest[i] -= 2
            res = {}
            for t, c in self.rules[i + 1].items():
                prod = tuple(a + b for a, b in zip(rest, t))
                for m, d in self.monomial(prod).items():
                    _add(res, m, c * d)
        self.cache[e] = res
        return res

    def reduce(self, p: Poly) -> Poly:
        out: Poly = {}
        for e, c in p.items():
            for m, d in self.monomial(e).items():
                _add(out, m, c * d)
        return out

    def mul(self, a: Poly, b: Poly) -> Poly:
        out: Poly = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                for m, d in self.monomial(tuple(x + y for x, y in zip(e1, e2))).items():
                    _add(out, m, c1 * c2 * d)
        return out


def monomials_of_weight(r: int, d: int) -> list[Exp]:
    """Exponent vectors of weighted degree d, in degree-reverse-lexicographic order."""
    out = []

    def rec(i: int, left: int, acc: list):
        if i == 0:
            if left == 0:
                out.append(tuple(reversed(acc)))
            return
        for e in range(left // i, -1, -1):
            rec(i - 1, left - e * i, acc + [e])

    rec(r, d, [])

    def degrevlex(e):
        return (sum(e), tuple(-x for x in reversed(e)))

    return sorted(out, key=degrevlex, reverse=True)


def graded_dimensions_linear_algebra(r: int) -> list[int]:
    """Dimensions of the quotient per weight, from relation multiples alone."""
    _check_r(r)
    top = r * (r + 1) // 2
    dims = []
    rels = [_relation(r, i) for i in range(1, r + 1)]
    for d in range(top + 2):
        monos = monomials_of_weight(r, d)
        index = {m: j for j, m in enumerate(monos)}
        rows = []
        for i, rel in enumerate(rels, start=1):
            if 2 * i > d:
                continue
            for m in monomials_of_weight(r, d - 2 * i):
                row: dict[int, Fraction] = {}
                for e, c in rel.items():
                    j = index[tuple(a + b for a, b in zip(e, m))]
                    row[j] = row.get(j, 0) + c
                rows.append(row)
        dims.append(len(monos) - sparse_rank(rows))
    return dims


class RingTable:
    """Normal forms, strict-partition basis and products for LG(r, 2r)."""

    def __init__(self, r: int):
        _check_r(r)
        self.r = r
        self.dimension = r * (r + 1) // 2
        self._red = _Reducer(r)
        self.top = StrictPartition(tuple(range(r, 0, -1)))
        self._pair_cache: dict[tuple[int, int], Poly] = {}
        self._pf_cache: dict[tuple, Poly] = {}
        self.basis: dict[StrictPartition, Poly] = {
            lam: self._schubert_nf(lam) for lam in strict_partitions(r)
        }
        for lam, nf in self.basis.items():
            lead = _mono(r, lam.parts)
            if nf.get(lead) != 1 or any(_sq(e) <= _sq(lead) and e != lead for e in nf):
                raise InvariantViolation(f"basis element {lam} is not unitriangular")
        top_nf = self.basis[self.top]
        self._top_mono = _mono(r, self.top.parts)
        self._top_coeff = top_nf[self._top_mono]
        dims = self.graded_dimensions()
        expected = [len(strict_partitions(r, d)) for d in range(self.dimension + 1)]
        if dims != expected:
            raise InvariantViolation(f"graded dimension mismatch {dims} vs {expected}")

    # construction

    def _special(self, i: int) -> Poly:
        if i == 0:
            return {(0,) * self.r: Fraction(1)}
        if i < 0 or i > self.r:
            return {}
        return {_mono(self.r, [i]): Fraction(1)}

    def _pair(self, a: int, b: int) -> Poly:
        key = (a, b)
        if key not in self._pair_cache:
            out: Poly = {}
            for e, c in self._red.mul(self._special(a), self._special(b)).items():
                _add(out, e, c)
            for k in range(1, b + 1):
                for e, c in self._red.mul(self._special(a + k), self._special(b - k)).items():
                    _add(out, e, 2 * (-1) ** k * c)
            self._pair_cache[key] = out
        return self._pair_cache[key]

    def _pfaffian(self, parts: tuple) -> Poly:
        if parts in self._pf_cache:
            return self._pf_cache[parts]
        if not parts:
            res = {(0,) * self.r: Fraction(1)}
        else:
            res = {}
            first, rest = parts[0], parts[1:]
            for j, b in enumerate(rest):
                sign = 1 if j % 2 == 0 else -1
                sub = self._pfaffian(rest[:j] + rest[j + 1 :])
                for e, c in self._red.mul(self._pair(first, b), sub).items():
                    _add(res, e, sign * c)
        self._pf_cache[parts] = res
        return res

    def _schubert_nf(self, lam: StrictPartition) -> Poly:
        parts = lam.parts
        if len(parts) == 1:
            return self._special(parts[0])
        if len(parts) % 2:
            parts = parts + (0,)
        return self._pfaffian(parts)

    # conversions

    def graded_dimensions(self) -> list[int]:
        """Count of square-free normal-form monomials per weight."""
        dims = [0] * (self.dimension + 1)
        for size in range(self.r + 1):
            for subset in combinations(range(1, self.r + 1), size):
                dims[sum(subset)] += 1
        return dims

    def to_partitions(self, p: Poly) -> dict[StrictPartition, Fraction]:
        """Expand a reduced polynomial in the strict-partition basis."""
        p = dict(p)
        out: dict[StrictPartition, Fraction] = {}
        while p:
            e = min(p, key=lambda m: (_sq(m), m))
            c = p[e]
            if any(x > 1 for x in e):
                raise InvariantViolation("polynomial is not reduced")
            lam = StrictPartition(tuple(i + 1 for i in reversed(range(self.r)) if e[i]))
            out[lam] = out.get(lam, 0) + c
            for m, d in self.basis[lam].items():
                _add(p, m, -c * d)
        return {k: v for k, v in out.items() if v}

    def from_partitions(self, terms: Mapping[StrictPartition, Fraction]) -> Poly:
        out: Poly = {}
        for lam, c in terms.items():
            for e, d in self.basis[lam].items():
                _add(out, e, c * d)
        return out

    def reduce(self, p: Poly) -> Poly:
        return self._red.reduce(p)

    def relation(self, i: int) -> Poly:
        return _relation(self.r, i)

    def mul_poly(self, a: Poly, b: Poly) -> Poly:
        return self._red.mul(a, b)

    def integrate_poly(self, p: Poly) -> Fraction:
        return Fraction(p.get(self._top_mono, 0)) / self._top_coeff

    def multiplication_matrix(self, i: int, d: int) -> list[list[Fraction]]:
        """Matrix of multiplication by s_i from weight d to weight d + i."""
        src = strict_partitions(self.r, d)
        dst = strict_partitions(self.r, d + i)
        cols = []
        for lam in src:
            prod = self.to_partitions(self.mul_poly(self.basis[lam], self._special(i)))
            cols.append([prod.get(mu, Fraction(0)) for mu in dst])
        return [list(row) for row in zip(*cols)] if cols and dst else []


@lru_cache(maxsize=None)
def ring_tables(r: int) -> RingTable:
    return RingTable(r)


class SchubertElt:
    """An element of H*(LG(r, 2r); Q) in the strict-partition basis."""

    __slots__ = ("r", "terms")

    def __init__(self, r: int, terms: Mapping | None = None):
        _check_r(r)
        self.r = r
        clean = {}
        for lam, c in (terms or {}).items():
            lam = lam if isinstance(lam, StrictPartition) else StrictPartition(tuple(lam))
            if any(x > r for x in lam.parts):
                raise ValidationError(f"{lam} has a part larger than {r}")
            c = Fraction(c)
            if c:
                clean[lam] = clean.get(lam, 0) + c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def one(cls, r: int) -> "SchubertElt":
        return cls(r, {StrictPartition(()): 1})

    @classmethod
    def sigma(cls, r: int, *parts: int) -> "SchubertElt":
        return cls(r, {StrictPartition(tuple(parts)): 1})

    def _same(self, other: "SchubertElt") -> None:
        if not isinstance(other, SchubertElt) or other.r != self.r:
            raise ValidationError("elements belong to different rings")

    def __add__(self, other: "SchubertElt") -> "SchubertElt":
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return SchubertElt(self.r, out)

    def __sub__(self, other: "SchubertElt") -> "SchubertElt":
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SchubertElt(self.r, {k: v * other for k, v in self.terms.items()})
        return multiply(self, other)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int) -> "SchubertElt":
        out = SchubertElt.one(self.r)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SchubertElt):
            return NotImplemented
        return self.r == other.r and self.terms == other.terms

    def __hash__(self):
        return hash((self.r, frozenset(self.terms.items())))

    def weights(self) -> set[int]:
        return {lam.weight for lam in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for lam in sorted(self.terms, key=lambda p: (p.weight, [-x for x in p.parts])):
            c = self.terms[lam]
            body = str(lam)
            txt = body if c == 1 else ("-" + body if c == -1 else f"{rat_str(c)}*{body}")
            pieces.append(txt)
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"SchubertElt({self.r}, {str(self)!r})"

    def as_dict(self) -> dict:
        return {str(k): rat_str(v) for k, v in sorted(self.terms.items(), key=lambda kv: (kv[0].weight, kv[0].parts))}


def multiply(a: SchubertElt, b: SchubertElt) -> SchubertElt:
    a._same(b)
    T = ring_tables(a.r)
    prod = T.mul_poly(T.from_partitions(a.terms), T.from_partitions(b.terms))
    return SchubertElt(a.r, T.to_partitions(prod))


def integrate(a: SchubertElt) -> Fraction:
    """Degree of the top-weight component, normalized so the point class is 1."""
    T = ring_tables(a.r)
    if a.terms and a.weights() != {T.dimension}:
        raise ValidationError(f"integrate needs weight {T.dimension}")
    return Fraction(a.terms.get(T.top, 0))


def parse_product(r: int, text: str) -> SchubertElt:
    """Parse a product such as ``s1*s1*s2`` or ``s21*s3`` (digits are parts)."""
    out = SchubertElt.one(r)
    for factor in text.replace(" ", "").split("*"):
        if not factor:
            raise ValidationError(f"malformed product {text!r}")
        if factor.isdigit():
            out = out * int(factor)
            continue
        if not factor.startswith("s") or not factor[1:]:
            raise ValidationError(f"cannot parse factor {factor!r}")
        body = factor[1:]
        parts = tuple(int(x) for x in body.split("_")) if "_" in body else tuple(int(ch) for ch in body)
        out = out * SchubertElt.sigma(r, *parts)
    return out


def lg_dimension(r: int) -> int:
    if not isinstance(r, int) or r < 1:
        raise ValidationError("r must be a positive integer")
    return r * (r + 1) // 2


def lg_degree(r: int) -> int:
    """Degree of LG(r, 2r) in its Plücker embedding: the integral of s1^dim."""
    T = ring_tables(r)
    p = {(0,) * r: Fraction(1)}
    s1 = T._special(1)
    for _ in range(T.dimension):
        p = T.mul_poly(p, s1)
    val = T.integrate_poly(p)
    if val.denominator != 1 or val <= 0:
        raise InvariantViolation(f"degree {val} is not a positive integer")
    return int(val)


def poincare_pairing(r: int) -> list[list[Fraction]]:
    """Matrix of integrate(a * b) over the whole strict-partition basis."""
    T = ring_tables(r)
    basis = strict_partitions(r)
    M = []
    for lam in basis:
        row = []
        for mu in basis:
            if lam.weight + mu.weight != T.dimension:
                row.append(Fraction(0))
            else:
                row.append(integrate(SchubertElt.sigma(r, *lam.parts) * SchubertElt.sigma(r, *mu.parts)))
        M.append(row)
    return M


@dataclass
class ChernData:
    r: int
    c1: SchubertElt
    c2: SchubertElt
    linear_coeff: Fraction
    square_coeff: Fraction
    e2_coeff: Fraction


def _truncated_product(factors: list[MPoly], degree: int) -> MPoly:
    out = MPoly.const(1)
    for f in factors:
        prod = out * f
        out = MPoly({m: c for m, c in prod.items() if sum(e for _, e in m) <= degree})
    return out


def chern_tangent(r: int) -> ChernData:
    """c1 and c2 of the tangent bundle Sym^2 of the dual tautological bundle.

    Splitting principle: roots a_1..a_r, total class prod_{i<=j}(1 + a_i + a_j)
    truncated at degree 2, rewritten in e1 and e2, then e1 -> s1, e2 -> s2.
    """
    if not isinstance(r, int) or r < 2:
        raise ValidationError("chern_tangent needs r >= 2")
    a = [MPoly.var(f"a{i}") for i in range(1, r + 1)]
    total = _truncated_product([1 + a[i] + a[j] for i in range(r) for j in range(i, r)], 2)
    e1 = sum(a, MPoly())
    e2 = sum((a[i] * a[j] for i in range(r) for j in range(i + 1, r)), MPoly())
    lin = total.homogeneous_part(1)
    quad = total.homogeneous_part(2)
    k1 = lin.coefficient((("a1", 1),))
    A = quad.coefficient((("a1", 2),))
    B = quad.coefficient((("a1", 1), ("a2", 1))) - 2 * A
    if lin != e1 * k1 or quad != e1 * e1 * A + e2 * B:
        raise InvariantViolation("total Chern class is not symmetric in the roots")
    s1 = SchubertElt.sigma(r, 1)
    s2 = SchubertElt.sigma(r, 2)
    c1 = s1 * k1
    c2 = s1 * s1 * A + s2 * B
    return ChernData(r, c1, c2, k1, A, B)


@dataclass
class ModuliDimension:
    r: int
    value: int
    via_lg: int
    via_fibration: int

    @property
    def consistent(self) -> bool:
        return self.value == self.via_lg == self.via_fibration


def moduli_dimension(r: int) -> ModuliDimension:
    """Dimension of the space of conics in LG(r, 2r), with two independent identities."""
    if not isinstance(r, int) or r < 2:
        raise ValidationError("moduli_dimension needs r >= 2")
    value = Fraction(r * r + 5 * r - 2, 2)
    via_lg = lg_dimension(r) + 2 * (r + 1) - 3
    via_fib = 2 * r * r - 4 * r - Fraction(3 * (r - 2) ** 2 - r + 2, 2) + 6
    out = ModuliDimension(r, int(value), via_lg, int(via_fib))
    if not (value.denominator == 1 and via_fib.denominator == 1 and out.consistent):
        raise InvariantViolation(f"dimension identities disagree for r={r}")
    return out
