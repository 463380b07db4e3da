"""Symplectic congruence normal forms for points of the orbit closure.

Every witness has the shape ``W = Q0 @ D(sigma)``, where ``Q0`` is an exact
rational symplectic matrix and ``D(sigma) = diag(sqrt(sigma_i), 1/sqrt(sigma_i))``.
Only the square roots can leave the rationals. When every sigma_i and the
scale are rational squares the witness is exact; otherwise it is evaluated
with mpmath and certified by its residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import mpmath

from .errors import InvariantViolation, ValidationError
from .matrix import ProjSymPoint, QMatrix, nullspace, rank, solve
from .poly import rat_str
from .symplectic import (
    StratumLabel,
    classify_point,
    is_symplectic,
    omega,
    standard_point,
)

APPROX_TOLERANCE = 1e-9
_DPS = 60


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    a, b = isqrt(n), isqrt(d)
    if a * a == n and b * b == d:
        return Fraction(a, b)
    return None


def _is_square(q: Fraction) -> bool:
    return rational_sqrt(q) is not None


@dataclass
class NormalFormResult:
    """``witness @ target_matrix @ witness.T == scale * input``.

    In exact mode ``witness`` is a QMatrix and ``residual`` is 0. In
    approximate mode it is a list of rows of mpmath complex numbers and
    ``residual`` bounds both the congruence and the symplectic defect.
    """

    r: int
    witness: object
    target: StratumLabel
    target_matrix: QMatrix
    scale: object
    exact: bool
    residual: object
    skeleton: QMatrix
    sigmas: list = field(default_factory=list)
    method: str = "general"

    def witness_strings(self) -> list[list[str]]:
        if self.exact:
            return self.witness.to_strings()
        return [[_mpc_str(x) for x in row] for row in self.witness]

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "target": str(self.target),
            "exact": self.exact,
            "method": self.method,
            "scale": rat_str(self.scale) if self.exact else _mpc_str(self.scale),
            "residual": "0" if self.exact else mpmath.nstr(self.residual, 5),
            "witness": self.witness_strings(),
            "skeleton": self.skeleton.to_strings(),
            "sigmas": [rat_str(s) for s in self.sigmas],
        }


def _mpc_str(z) -> str:
    z = mpmath.mpc(z)
    re_s = mpmath.nstr(z.real, 20, min_fixed=-30, max_fixed=30)
    if abs(z.imag) == 0:
        return re_s
    im = mpmath.nstr(abs(z.imag), 20, min_fixed=-30, max_fixed=30)
    sign = "-" if z.imag < 0 else "+"
    return f"{re_s}{sign}{im}j"


# bilinear helpers on column vectors stored as lists


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _matvec(M: QMatrix, v):
    return [_dot(row, v) for row in M.rows]


def _omega_form(r: int, u, v) -> Fraction:
    return _dot(u[:r], v[r:]) - _dot(u[r:], v[:r])


def _unit(n: int, i: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def _candidates(vectors):
    """Spanning vectors first, then pairwise sums and differences."""
    yield from vectors
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            yield [a + b for a, b in zip(vectors[i], vectors[j])]
            yield [a - b for a, b in zip(vectors[i], vectors[j])]


def _pick_anisotropic(vectors, quad, prefer) -> list[Fraction]:
    """A vector with nonzero quadratic value, preferring ones accepted by ``prefer``."""
    first = None
    for v in _candidates(vectors):
        if not any(v):
            continue
        g = quad(v)
        if g:
            if prefer(g):
                return v
            if first is None:
                first = v
    if first is None:
        raise InvariantViolation("no anisotropic vector: the form is degenerate")
    return first


def _mp_sqrt(q: Fraction):
    with mpmath.workdps(_DPS):
        return mpmath.sqrt(mpmath.mpc(q.numerator) / q.denominator)


def _to_mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _residual(r: int, W, T: QMatrix, Z: QMatrix, scale) -> object:
    n = 2 * r
    Wm = mpmath.matrix(W)
    Tm = mpmath.matrix([[int(x) for x in row] for row in T.rows])
    Zm = mpmath.matrix([[_to_mp(x) for x in row] for row in Z.rows])
    Om = mpmath.matrix([[int(x) for x in row] for row in omega(r).rows])
    cong = Wm * Tm * Wm.T - Zm * scale
    symp = Wm.T * Om * Wm - Om
    return max(
        max(abs(cong[i, j]) for i in range(n) for j in range(n)),
        max(abs(symp[i, j]) for i in range(n) for j in range(n)),
    )


def _assemble(r, Z, skeleton, sigmas, c, k, method) -> NormalFormResult:
    """Build W = skeleton @ D(sigma) and certify W T W^t = Z / c.

    ``c`` is a Fraction, or an mpmath number when the scale is irrational;
    in the latter case the effective sigmas are ``sigmas / c``.
    """
    n = 2 * r
    target = standard_point(r, k)
    label = StratumLabel("full-rank", n) if k == n else StratumLabel("rank", k)
    if not is_symplectic(skeleton):
        raise InvariantViolation("normal-form skeleton is not symplectic", skeleton.to_strings())
    if isinstance(c, Fraction):
        roots = [rational_sqrt(s) for s in sigmas]
        if all(x is not None for x in roots):
            D = QMatrix.diag(roots + [1 / x for x in roots])
            W = skeleton @ D
            scale = 1 / c
            if not is_symplectic(W):
                raise InvariantViolation("witness is not symplectic", W.to_strings())
            if W @ target @ W.T != Z * scale:
                raise InvariantViolation("witness does not reproduce the input", W.to_strings())
            return NormalFormResult(
                r, W, label, target, scale, True, Fraction(0), skeleton, list(sigmas), method
            )
    with mpmath.workdps(_DPS):
        cm = _to_mp(c) if isinstance(c, Fraction) else mpmath.mpc(c)
        if isinstance(c, Fraction):
            eff = [mpmath.mpc(_to_mp(s)) for s in sigmas]
        else:
            eff = [_to_mp(s) / cm for s in sigmas]
        sq = [mpmath.sqrt(mpmath.mpc(s)) for s in eff]
        dvals = sq + [1 / x for x in sq]
        W = [[_to_mp(skeleton[i, j]) * dvals[j] for j in range(n)] for i in range(n)]
        scale = 1 / cm
        residual = _residual(r, W, target, Z, scale)
    if residual > APPROX_TOLERANCE:
        raise InvariantViolation(f"approximate witness residual {residual} too large")
    return NormalFormResult(
        r, W, label, target, scale, False, residual, skeleton, list(sigmas), method
    )


def _full_rank(r: int, Z: QMatrix):
    """Skeleton, sigmas and scale for Z with Z Omega Z = lam Omega, lam != 0."""
    n = 2 * r
    Om = omega(r)
    lam = (Z @ Om @ Z)[0, r]
    c = rational_sqrt(lam)
    # K = -Z Omega / lam satisfies g(x, y) = x^t Z^{-1} y = omega(x, K y)
    K = (Z @ Om) * Fraction(-1, 1) * (1 / lam)

    def g(u, v):
        return _omega_form(r, u, _matvec(K, v))

    def prefer(gam):
        return c is not None and (_is_square(1 / (gam * c)) or _is_square(-1 / (gam * c)))

    xs, ys, gams = [], [], []
    pool = [_unit(n, i) for i in range(n)]
    for _ in range(r):
        x = _pick_anisotropic(pool, lambda v: g(v, v), prefer)
        gam = g(x, x)
        y = [t / gam for t in _matvec(K, x)]
        gy = g(y, y)
        xs.append(x)
        ys.append(y)
        gams.append(gam)
        pool = [
            [a - g(u, x) / gam * b - g(u, y) / gy * d for a, b, d in zip(u, x, y)]
            for u in pool
        ]
        pool = [u for u in pool if any(u)]
    skeleton = QMatrix([list(row) for row in zip(*(xs + ys))])
    if c is not None:
        # the sign of the square root is free; pick the one that makes sigmas squares
        for cc in (c, -c):
            sig = [1 / (gm * cc) for gm in gams]
            if all(_is_square(s) for s in sig):
                return skeleton, sig, cc
        return skeleton, [1 / (gm * c) for gm in gams], c
    # irrational scale: the effective sigmas are (1/gamma_i) / c
    return skeleton, [1 / gm for gm in gams], _mp_sqrt(lam)


def _low_rank(r: int, Z: QMatrix, k: int):
    """Skeleton, sigmas and scale for an isotropic-column-space Z of rank k."""
    n = 2 * r
    Om = omega(r)
    R = Z
    vs, ds = [], []
    for _ in range(k):
        pool = [_unit(n, i) for i in range(n)]
        quad = lambda v, R=R: _dot(v, _matvec(R, v))  # noqa: E731
        x = _pick_anisotropic(pool, quad, lambda d: bool(ds) and _is_square(ds[0] / d))
        v = _matvec(R, x)
        d = quad(x)
        vs.append(v)
        ds.append(d)
        R = R - QMatrix([[a * b / d for b in v] for a in v])
    if any(R.rows[i][j] for i in range(n) for j in range(n)):
        raise InvariantViolation("rank-one reduction did not terminate", Z.to_strings())
    # Z = sum v_i v_i^t / d_i ; choose c = 1/d_0 so that sigma_0 = 1
    c = 1 / ds[0]
    sigmas = [ds[0] / d for d in ds]
    basis = [list(v) for v in vs]
    while len(basis) < r:
        # omega(b, u) = b^t Omega u = 0 for all current b
        rows = [[sum(b[i] * Om[i, j] for i in range(n)) for j in range(n)] for b in basis]
        perp = nullspace(rows)
        for u in perp + [_unit(n, i) for i in range(n)]:
            if rank(basis + [u]) > len(basis) and all(_omega_form(r, b, u) == 0 for b in basis):
                basis.append(u)
                break
        else:
            raise InvariantViolation("could not extend to a Lagrangian basis", Z.to_strings())
    QL = QMatrix([list(row) for row in zip(*basis)])
    # solve QL^t Omega P0 = I column by column
    A = (QL.T @ Om).rows
    cols = []
    for j in range(r):
        sol = solve([list(row) for row in A], _unit(r, j))
        if sol is None:
            raise InvariantViolation("Lagrangian basis has no complement", Z.to_strings())
        cols.append(sol)
    P0 = QMatrix([list(row) for row in zip(*cols)])
    S = P0.T @ Om @ P0
    P = P0 + QL @ (S * Fraction(1, 2))
    skeleton = QMatrix([list(a) + list(b) for a, b in zip(QL.rows, P.rows)])
    return skeleton, sigmas + [Fraction(1)] * (r - k), c


def _diagonal(r: int, Z: QMatrix, k: int):
    """Explicit pair-block construction for diagonal inputs."""
    n = 2 * r
    alpha = [Z[i, i] for i in range(n)]
    if k == n:
        lam = alpha[0] * alpha[r]
        mu = rational_sqrt(lam)
        skeleton = QMatrix.identity(n)
        if mu is None:
            return skeleton, list(alpha[:r]), _mp_sqrt(lam)
        for m in (mu, -mu):
            sig = [a / m for a in alpha[:r]]
            if all(_is_square(s) for s in sig):
                return skeleton, sig, m
        return skeleton, [a / mu for a in alpha[:r]], mu
    active = [i for i in range(r) if alpha[i] or alpha[r + i]]
    idle = [i for i in range(r) if i not in active]
    order = active + idle
    B = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    vals = []
    for i in active:
        if alpha[i]:
            vals.append(alpha[i])
        else:
            # pair rotation sending e_i to e_{r+i}
            B[i][i] = B[r + i][r + i] = Fraction(0)
            B[i][r + i] = Fraction(-1)
            B[r + i][i] = Fraction(1)
            vals.append(alpha[r + i])
    Bm = QMatrix(B)
    full = order + [o + r for o in order]
    Pi = QMatrix([[int(full[j] == i) for j in range(n)] for i in range(n)])
    skeleton = Bm @ Pi
    for c in [Fraction(1)] + vals:
        sig = [v / c for v in vals]
        if all(_is_square(s) for s in sig):
            return skeleton, sig + [Fraction(1)] * (r - k), c
    return skeleton, vals + [Fraction(1)] * (r - k), Fraction(1)


def _is_diagonal(Z: QMatrix) -> bool:
    n = Z.nrows
    return all(not Z[i, j] for i in range(n) for j in range(n) if i != j)


def normal_form(r: int, Z, method: str = "auto") -> NormalFormResult:
    """Find a symplectic W and a standard target T with W T W^t = scale * Z.

    ``Z`` may be a ProjSymPoint or a raw symmetric matrix; ``scale`` refers
    to the matrix as given. ``method`` is 'auto', 'general' or 'diagonal'.
    """
    if isinstance(Z, ProjSymPoint):
        M = Z.matrix
    else:
        M = Z if isinstance(Z, QMatrix) else QMatrix(Z)
    label = classify_point(r, M)
    if label.kind == "outside-X":
        raise ValidationError("point does not satisfy the orbit equations")
    k = label.k
    if method not in ("auto", "general", "diagonal"):
        raise ValidationError(f"unknown method {method!r}")
    use_diag = method == "diagonal" or (method == "auto" and _is_diagonal(M))
    if use_diag and not _is_diagonal(M):
        raise ValidationError("diagonal method needs a diagonal matrix")
    if use_diag:
        skeleton, sigmas, c = _diagonal(r, M, k)
        name = "diagonal"
    elif k == 2 * r:
        skeleton, sigmas, c = _full_rank(r, M)
        name = "general"
    else:
        skeleton, sigmas, c = _low_rank(r, M, k)
        name = "general"
    return _assemble(r, M, skeleton, sigmas, c, k, name)


def verify_result(res: NormalFormResult, Z) -> object:
    """Recompute the residual of a result independently of how it was built.

    Returns 0 for an exact result that checks out, the float residual for an
    approximate one; raises InvariantViolation when the check fails.
    """
    M = Z.matrix if isinstance(Z, ProjSymPoint) else (Z if isinstance(Z, QMatrix) else QMatrix(Z))
    r = res.r
    if res.exact:
        W = res.witness
        if not is_symplectic(W):
            raise InvariantViolation("witness is not symplectic", W.to_strings())
        if W @ res.target_matrix @ W.T != M * res.scale:
            raise InvariantViolation("congruence fails", W.to_strings())
        return 0
    with mpmath.workdps(_DPS):
        residual = _residual(r, res.witness, res.target_matrix, M, res.scale)
    if residual > APPROX_TOLERANCE:
        raise InvariantViolation(f"residual {residual} exceeds tolerance")
    return float(residual)
