"""Segre-class arithmetic and top self-intersections on a single blow-up.

Series in the hyperplane class h of the center are plain lists of Fractions,
truncated at the center dimension.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import InvariantViolation, ValidationError
from .lines import x4_to_pluecker
from .matrix import QMatrix, sparse_rank
from .poly import MPoly, monomials_of_degree

log = logging.getLogger(__name__)

Series = list


def _series(coeffs, length: int) -> list[Fraction]:
    out = [Fraction(c) for c in list(coeffs)[:length]]
    return out + [Fraction(0)] * (length - len(out))


def series_mul(a, b, length: int) -> list[Fraction]:
    a, b = _series(a, length), _series(b, length)
    return [sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(length)]


def series_div(a, b, length: int) -> list[Fraction]:
    """Exact truncated quotient a/b; b must have constant term 1."""
    a, b = _series(a, length), _series(b, length)
    if b[0] != 1:
        raise ValidationError("denominator series must have constant term 1")
    q: list[Fraction] = []
    for k in range(length):
        q.append(a[k] - sum((b[i] * q[k - i] for i in range(1, k + 1)), Fraction(0)))
    return q


def series_pow(a, e: int, length: int) -> list[Fraction]:
    out = _series([1], length)
    for _ in range(e):
        out = series_mul(out, a, length)
    return out


@dataclass(frozen=True)
class SegreData:
    """Segre classes of the normal bundle of a blow-up center.

    ``segre[j]`` is the coefficient of h^j, with the integral of h^centerDim
    normalized to 1; ``m`` records H restricted to the center as m*h.
    """

    centerDim: int
    codim: int
    m: int
    segre: tuple

    def __post_init__(self):
        object.__setattr__(self, "segre", tuple(Fraction(s) for s in self.segre))
        if self.centerDim < 0 or self.codim < 0:
            raise ValidationError("dimensions must be non-negative")
        if len(self.segre) != self.centerDim + 1:
            raise ValidationError("segre list must have length centerDim + 1")
        if self.segre[0] != 1:
            raise ValidationError("s_0 must be 1")

    def as_dict(self) -> dict:
        return {
            "centerDim": self.centerDim,
            "codim": self.codim,
            "m": self.m,
            "segre": [str(s) for s in self.segre],
        }


@dataclass(frozen=True)
class AmbientData:
    dim: int
    hTop: int = 1

    def __post_init__(self):
        if self.hTop < 1:
            raise ValidationError("hTop must be >= 1")
        if self.dim < 1:
            raise ValidationError("ambient dimension must be >= 1")

    def as_dict(self) -> dict:
        return {"dim": self.dim, "hTop": self.hTop}


def segre_from_chern(cTZ, cTX_restricted, centerDim: int, *, codim: int = 0, m: int = 1) -> SegreData:
    """s(N) = c(T_Z) / c(T_X|_Z), truncated at degree centerDim."""
    num = _series(cTZ, centerDim + 1)
    den = _series(cTX_restricted, centerDim + 1)
    if num[0] != 1 or den[0] != 1:
        raise ValidationError("Chern series need constant term 1")
    return SegreData(centerDim, codim, m, tuple(series_div(num, den, centerDim + 1)))


def blowup_power(a: int, b: int, n: int, ambient: AmbientData, segre: SegreData) -> int:
    """Top self-intersection (aH - bE)^n on the blow-up along the center."""
    if n != ambient.dim:
        raise ValidationError("n must equal the ambient dimension")
    if segre.codim + segre.centerDim != n:
        raise ValidationError("codim + centerDim must equal n")
    total = Fraction(a) ** n * ambient.hTop
    for j in range(segre.codim, n + 1):
        total -= comb(n, j) * Fraction(a) ** (n - j) * Fraction(b) ** j * Fraction(segre.m) ** (n - j) * segre.segre[j - segre.codim]
    if total.denominator != 1:
        raise InvariantViolation("non-integral intersection number", witness=str(total))
    return int(total)


# presets on projective space


def veronese_segre(n: int) -> SegreData:
    """Quadratic Veronese embedding of P^n: (1+h)^(n+1) / (1+2h)^N, N+1 = C(n+2, 2)."""
    N = comb(n + 2, 2) - 1
    num = series_pow([1, 1], n + 1, n + 1)
    den = series_pow([1, 2], N + 1, n + 1)
    return segre_from_chern(num, den, n, codim=N - n, m=2)


def nine_lines() -> int:
    """Quadric surfaces tangent to nine general lines."""
    return blowup_power(2, 1, 9, AmbientData(9), veronese_segre(3))


def chasles() -> int:
    """Conics tangent to five general conics, with tangency class 6H - 2E."""
    return blowup_power(6, 2, 5, AmbientData(5), veronese_segre(2))


# the Veronese 3-fold inside G(1,4)

XVARS = tuple(f"x{i}" for i in range(4))


def veronese_pluecker_map() -> dict[tuple[int, int], MPoly]:
    """Plücker coordinates p_ij (i<j<5) of the line attached to x in P^3.

    Inverts the linear identification of symmetric 4x4 matrices with
    Plücker space and evaluates it on z = x x^t.
    """
    sub = x4_to_pluecker()
    zn = list(sub)
    pn = sorted({v for p in sub.values() for v in p.variables()})
    A = QMatrix([[sub[z].coefficient(((p, 1),)) for p in pn] for z in zn])
    Ainv = A.inverse()
    x = [MPoly.var(v) for v in XVARS]
    zval = {}
    for name in zn:
        i, j = int(name[1]), int(name[2])
        zval[name] = x[i] * x[j]
    out = {}
    for a, p in enumerate(pn):
        poly = MPoly.const(0)
        for b, z in enumerate(zn):
            c = Ainv[a, b]
            if c:
                poly = poly + zval[z] * c
        out[(int(p[1]), int(p[2]))] = poly
    return out


def _pmat(p: dict) -> list[list]:
    zero = MPoly.const(0)
    P = [[zero] * 5 for _ in range(5)]
    for (i, j), v in p.items():
        P[i][j] = v
        P[j][i] = -v
    return P


def hilbert_function(gens: list[MPoly], variables, d: int) -> int:
    """dim of degree-d part of k[variables]/(gens), gens homogeneous."""
    cols = {m: i for i, m in enumerate(monomials_of_degree(variables, d))}
    rows = []
    for g in gens:
        if g == 0:
            continue
        e = d - g.degree()
        if e < 0:
            continue
        for mono in monomials_of_degree(variables, e):
            prod = g * MPoly({mono: Fraction(1)})
            rows.append({cols[k]: v for k, v in prod.terms.items()})
    return len(cols) - sparse_rank(rows)


def scheme_degree(gens: list[MPoly], variables, dim: int, top: int = 7) -> int:
    """Degree of the projective scheme cut out by ``gens``, from its Hilbert polynomial.

    Uses the dim-th finite difference of the Hilbert function, which must be
    constant on the last three degrees checked.
    """
    hf = [hilbert_function(gens, variables, d) for d in range(top + 1)]
    diff = hf
    for _ in range(dim):
        diff = [diff[i + 1] - diff[i] for i in range(len(diff) - 1)]
    tail = diff[-3:]
    if len(set(tail)) != 1:
        raise InvariantViolation("Hilbert function has not stabilized", witness=hf)
    return tail[0]


@dataclass(frozen=True)
class RestrictionData:
    """Restrictions of Schubert classes of G(1,4) to the Veronese 3-fold, as multiples of powers of h."""

    sigma1: int
    sigma2: int
    sigma11: int
    line_image_degree: int
    seed: int

    @property
    def consistent(self) -> bool:
        return self.sigma2 + self.sigma11 == self.sigma1**2 and self.line_image_degree == self.sigma1

    def as_dict(self) -> dict:
        return {
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "sigma11": self.sigma11,
            "line_image_degree": self.line_image_degree,
            "seed": self.seed,
            "consistent": self.consistent,
        }


def _rand_vec(rng: random.Random, n: int) -> list[int]:
    return [rng.randint(-9, 9) for _ in range(n)]


def schubert_restrictions(seed: int = 0) -> RestrictionData:
    """Pull back general Schubert conditions along x -> line(x) and read off degrees.

    sigma1: lines meeting a plane (one quadric, a surface).
    sigma11: lines inside a hyperplane w, i.e. P w = 0.
    sigma2: lines meeting a line c^d, i.e. p ^ c ^ d = 0.
    """
    rng = random.Random(seed)
    p = veronese_pluecker_map()
    P = _pmat(p)
    zero = MPoly.const(0)

    # sigma1: p ^ q = 0 for a general 3-plane q = c^d^e, a single linear form in p
    c, d, e = (_rand_vec(rng, 5) for _ in range(3))
    q3 = {}
    for i, j, k in combinations(range(5), 3):
        q3[(i, j, k)] = QMatrix([[c[i], c[j], c[k]], [d[i], d[j], d[k]], [e[i], e[j], e[k]]]).det()
    form = zero
    for (i, j), v in p.items():
        rest = tuple(sorted(set(range(5)) - {i, j}))
        perm = [i, j, *rest]
        sign = _perm_sign(perm)
        form = form + v * (sign * q3[rest])
    s1 = scheme_degree([form], XVARS, 2)

    w = _rand_vec(rng, 5)
    g11 = [sum((P[i][j] * w[j] for j in range(5)), zero) for i in range(5)]
    s11 = scheme_degree(g11, XVARS, 1)

    c, d = _rand_vec(rng, 5), _rand_vec(rng, 5)
    q = {(i, j): Fraction(c[i] * d[j] - c[j] * d[i]) for i, j in combinations(range(5), 2)}
    g2 = []
    for quad in combinations(range(5), 4):
        acc = zero
        for pair in combinations(quad, 2):
            other = tuple(x for x in quad if x not in pair)
            sign = _perm_sign([*pair, *other])
            acc = acc + p[pair] * (sign * q[other])
        g2.append(acc)
    s2 = scheme_degree(g2, XVARS, 1)

    # image of a general line: the restricted coordinates are binary forms of degree 2;
    # with no common factor the image curve has degree 2 in Plücker space
    u, v = _rand_vec(rng, 4), _rand_vec(rng, 4)
    s, t = MPoly.var("s"), MPoly.var("t")
    line = {f"x{i}": s * u[i] + t * v[i] for i in range(4)}
    restricted = [f.subs(line).subs({"t": 1}) for f in p.values()]
    g = _upoly_gcd_all([_to_upoly(f, "s") for f in restricted])
    line_degree = max(f.degree() for f in restricted) - (len(g) - 1)

    data = RestrictionData(s1, s2, s11, line_degree, seed)
    log.info("Schubert restrictions to the Veronese 3-fold: %s", data.as_dict())
    return data


def _to_upoly(f: MPoly, v: str) -> list[Fraction]:
    """Coefficient list (low to high) of a univariate MPoly."""
    deg = max(f.degree(), 0)
    return [f.coefficient(((v, k),) if k else ()) for k in range(deg + 1)]


def _strip(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def _upoly_gcd_all(polys: list[list[Fraction]]) -> list[Fraction]:
    g: list[Fraction] = []
    for f in polys:
        a, b = _strip(list(g)), _strip(list(f))
        while b:
            r = list(a)
            while len(r) >= len(b) and r:
                q = r[-1] / b[-1]
                shift = len(r) - len(b)
                for i, c in enumerate(b):
                    r[shift + i] -= q * c
                r = _strip(r)
            a, b = b, r
        g = a
    return g


def _perm_sign(perm: list[int]) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _sym2_reduce(f: MPoly, e1, e2) -> MPoly:
    """Rewrite a polynomial symmetric in x1, x2 through e1 = x1+x2, e2 = x1*x2, then substitute."""
    x1, x2 = MPoly.var("x1"), MPoly.var("x2")
    E1, E2 = x1 + x2, x1 * x2
    out = MPoly.const(0)
    while f != 0:
        best = None
        for mono, c in f.terms.items():
            ex = dict(mono)
            a, b = ex.get("x1", 0), ex.get("x2", 0)
            if a < b:
                continue
            key = (a + b, a)
            if best is None or key > best[0]:
                best = (key, mono, c, a, b)
        if best is None:
            raise InvariantViolation("polynomial is not symmetric in x1, x2", witness=str(f))
        _, mono, c, a, b = best
        rest = MPoly({tuple((v, k) for v, k in mono if v not in ("x1", "x2")): Fraction(1)})
        f = f - E1 ** (a - b) * E2**b * rest * c
        out = out + e1 ** (a - b) * e2**b * rest * c
    return out


def grassmannian_tangent_chern(sigma11: int, length: int = 4) -> list[Fraction]:
    """c(T_G(1,4)) restricted to the Veronese 3-fold, by splitting S^v ⊗ Q.

    c(S^v) = 1 + 2h + sigma11 h^2 and c(Q) = 1 / c(S).
    """
    h = MPoly.var("h")
    cS = [1, -2, sigma11]
    cQ = series_div([1], cS, length)
    x = [MPoly.var("x1"), MPoly.var("x2")]
    total = MPoly.const(1)
    for xi in x:
        # prod over roots y of Q of (1 + x_i + y) = sum_k c_k(Q) (1 + x_i)^(3-k)
        f = MPoly.const(0)
        for k in range(4):
            f = f + (MPoly.const(1) + xi) ** (3 - k) * (h**k * cQ[k] if k < length else MPoly.const(0))
        total = _truncate(total * f, length - 1)
    reduced = _sym2_reduce(total, 2 * h, h * h * sigma11)
    reduced = _truncate(reduced, length - 1)
    return [reduced.coefficient((("h", k),) if k else ()) for k in range(length)]


def _truncate(f: MPoly, degree: int) -> MPoly:
    return MPoly({m: c for m, c in f.terms.items() if sum(e for _, e in m) <= degree})


def symplectic_tangency_number(seed: int = 0) -> int:
    """(2H - E)^6 on G(1,4) blown up along the Veronese 3-fold."""
    res = schubert_restrictions(seed)
    if not res.consistent:
        raise InvariantViolation("restriction coefficients fail the consistency check", witness=res.as_dict())
    cTG = grassmannian_tangent_chern(res.sigma11)
    cTV = series_pow([1, 1], 4, 4)
    seg = segre_from_chern(cTV, cTG, 3, codim=3, m=res.sigma1)
    log.info("Segre classes of the normal bundle: %s", [str(s) for s in seg.segre])
    return blowup_power(2, 1, 6, AmbientData(6, 5), seg)
