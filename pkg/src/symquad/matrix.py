"""Dense matrices over the rationals or over polynomials, plus exact linear algebra."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import ValidationError
from .poly import MPoly, Monomial, rat_str, to_rat, zvar


def _entry(x):
    if isinstance(x, MPoly):
        return x
    return to_rat(x)


class QMatrix:
    """Immutable dense matrix. Entries are ``Fraction`` or ``MPoly``."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(_entry(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValidationError("matrix must have at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValidationError("ragged matrix rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = width

    @classmethod
    def _wrap(cls, data: tuple) -> "QMatrix":
        m = cls.__new__(cls)
        m._rows = data
        m.nrows = len(data)
        m.ncols = len(data[0])
        return m

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._wrap(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, m: int, n: int | None = None) -> "QMatrix":
        n = m if n is None else n
        return cls._wrap(tuple((Fraction(0),) * n for _ in range(m)))

    @classmethod
    def diag(cls, values: Sequence) -> "QMatrix":
        vals = [_entry(v) for v in values]
        n = len(vals)
        zero = Fraction(0)
        return cls._wrap(tuple(tuple(vals[i] if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def blocks(cls, grid: Sequence[Sequence["QMatrix"]]) -> "QMatrix":
        rows = []
        for band in grid:
            for i in range(band[0].nrows):
                row = []
                for blk in band:
                    row.extend(blk._rows[i])
                rows.append(tuple(row))
        return cls._wrap(tuple(rows))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> list:
        return list(self._rows[i])

    def col(self, j: int) -> list:
        return [r[j] for r in self._rows]

    @property
    def T(self) -> "QMatrix":
        return QMatrix._wrap(tuple(zip(*self._rows)))

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self._rows[i][j] == self._rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def is_numeric(self) -> bool:
        return all(isinstance(x, Fraction) for r in self._rows for x in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        return QMatrix._wrap(tuple(tuple(self._rows[i][j] for j in cols) for i in rows))

    def map(self, f) -> "QMatrix":
        return QMatrix._wrap(tuple(tuple(f(x) for x in r) for r in self._rows))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._same_shape(other)
        return QMatrix._wrap(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._same_shape(other)
        return QMatrix._wrap(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __neg__(self) -> "QMatrix":
        return self.map(lambda x: -x)

    def __mul__(self, c) -> "QMatrix":
        if isinstance(c, QMatrix):
            raise TypeError("use @ for matrix products")
        c = _entry(c)
        return self.map(lambda x: x * c)

    __rmul__ = __mul__

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise ValidationError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other._rows))
        out = []
        for r in self._rows:
            row = []
            for c in cols:
                acc = Fraction(0)
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return QMatrix._wrap(tuple(out))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def _same_shape(self, other: "QMatrix") -> None:
        if self.shape != other.shape:
            raise ValidationError(f"shape mismatch {self.shape} vs {other.shape}")

    def to_strings(self) -> list[list[str]]:
        return [[str(x) if isinstance(x, MPoly) else rat_str(x) for x in r] for r in self._rows]

    def __repr__(self) -> str:
        return f"QMatrix({self.to_strings()})"

    # exact linear algebra for numeric matrices

    def _numeric(self) -> list[list[Fraction]]:
        if not self.is_numeric():
            raise ValidationError("operation needs a matrix of rationals")
        return [list(r) for r in self._rows]

    def rank(self) -> int:
        return len(rref(self._numeric())[1])

    def det(self):
        if not self.is_square():
            raise ValidationError("determinant of a non-square matrix")
        if self.is_numeric():
            return _det_gauss(self._numeric())
        return _det_laplace(self, tuple(range(self.nrows)), tuple(range(self.ncols)), {})

    def inverse(self) -> "QMatrix":
        if not self.is_square():
            raise ValidationError("inverse of a non-square matrix")
        n = self.nrows
        aug = [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._numeric())]
        red, piv = rref(aug)
        if piv[:n] != list(range(n)):
            raise ValidationError("matrix is singular")
        return QMatrix._wrap(tuple(tuple(r[n:]) for r in red[:n]))

    def nullspace(self) -> list[list[Fraction]]:
        return nullspace(self._numeric())

    def max_abs(self) -> Fraction:
        return max(abs(x) for r in self._numeric() for x in r)


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns, exact."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1]) if rows else 0


def _integral_row(row: dict) -> dict:
    """Scale a rational row to coprime integers."""
    den = reduce(lcm, (Fraction(v).denominator for v in row.values()), 1)
    out = {c: int(Fraction(v) * den) for c, v in row.items() if v}
    g = reduce(gcd, out.values(), 0)
    return {c: v // g for c, v in out.items()} if g > 1 else out


def sparse_rank(rows: Iterable[dict]) -> int:
    """Rank of rows given as {column: value} dictionaries.

    Rows are cleared of denominators and eliminated fraction-free, so all
    arithmetic stays in Python integers.
    """
    pivots: dict = {}
    for row in rows:
        row = _integral_row(row)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                pivots[col] = row
                break
            f, p0 = row[col], piv[col]
            g = gcd(f, p0)
            f, p0 = f // g, p0 // g
            new = {c: v * p0 for c, v in row.items()}
            for c, v in piv.items():
                nv = new.get(c, 0) - f * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            cont = reduce(gcd, new.values(), 0)
            row = {c: v // cont for c, v in new.items()} if cont > 1 else new
    return len(pivots)


def nullspace(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Basis of {x : rows @ x = 0}."""
    if not rows:
        raise ValidationError("nullspace of an empty system")
    n = len(rows[0])
    red, piv = rref(rows)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """One exact solution of A x = b, or None when inconsistent."""
    n = len(A[0])
    red, piv = rref([list(r) + [bi] for r, bi in zip(A, b)])
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = red[i][n]
    return x


def _det_gauss(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    m = [r[:] for r in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def _det_laplace(M: QMatrix, rows: tuple, cols: tuple, memo: dict):
    # expand along the first remaining row; memo keyed by the column subset
    key = (rows, cols)
    if key in memo:
        return memo[key]
    if len(rows) == 1:
        val = M[rows[0], cols[0]]
        memo[key] = val
        return val
    r0, rest = rows[0], rows[1:]
    total = MPoly()
    for idx, c in enumerate(cols):
        a = M[r0, c]
        if (isinstance(a, MPoly) and a.is_zero()) or (not isinstance(a, MPoly) and not a):
            continue
        sub = _det_laplace(M, rest, cols[:idx] + cols[idx + 1 :], memo)
        term = a * sub
        total = total + term if idx % 2 == 0 else total - term
    memo[key] = total
    return total


def symmetric_indeterminate_matrix(n: int) -> QMatrix:
    """The (n+1)x(n+1) symmetric matrix with entry z_{min(i,j),max(i,j)}."""
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n must be a positive integer")
    return QMatrix._wrap(
        tuple(tuple(MPoly.var(zvar(i, j)) for j in range(n + 1)) for i in range(n + 1))
    )


def sym_variables(size: int) -> list[str]:
    """Coordinates of a size x size symmetric matrix, row-major upper triangle."""
    return [zvar(i, j) for i in range(size) for j in range(i, size)]


def minors(M: QMatrix, k: int) -> list:
    """All k x k minors, lexicographic on row set and then column set."""
    if not isinstance(k, int) or k < 1 or k > min(M.nrows, M.ncols):
        raise ValidationError(f"minor size {k} out of range for a {M.nrows}x{M.ncols} matrix")
    numeric = M.is_numeric()
    out = []
    for rows in combinations(range(M.nrows), k):
        memo: dict = {}
        for cols in combinations(range(M.ncols), k):
            if numeric:
                out.append(_det_gauss([[M[i, j] for j in cols] for i in rows]))
            else:
                val = _det_laplace(M, rows, cols, memo)
                out.append(val if isinstance(val, MPoly) else MPoly.const(val))
    return out


def poly_coefficient_rows(polys: Sequence[MPoly]) -> tuple[list[list[Fraction]], list[Monomial]]:
    """Coefficient vectors of polynomials against their joint monomial support."""
    monos = sorted({m for p in polys for m, _ in p.items()}, key=repr)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(monos)
        for m, c in p.items():
            row[index[m]] = c
        rows.append(row)
    return rows, monos


def span_dimension(polys: Sequence[MPoly]) -> int:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return 0
    return rank(poly_coefficient_rows(polys)[0])


def same_span(a: Sequence[MPoly], b: Sequence[MPoly]) -> bool:
    """True when the two families span the same rational vector space."""
    da, db = span_dimension(a), span_dimension(b)
    return da == db == span_dimension(list(a) + list(b))


class ProjSymPoint:
    """A point of projective space given by a nonzero symmetric matrix.

    Stored in the normalized representative: integer entries with gcd 1
    and first nonzero upper-triangle entry (row-major) positive.
    """

    __slots__ = ("matrix", "size", "factor")

    def __init__(self, matrix):
        M = matrix if isinstance(matrix, QMatrix) else QMatrix(matrix)
        if not M.is_numeric():
            raise ValidationError("a point needs rational entries")
        if not M.is_symmetric():
            raise ValidationError("matrix is not symmetric")
        n = M.nrows
        upper = [M[i, j] for i in range(n) for j in range(i, n)]
        lead = next((x for x in upper if x), None)
        if lead is None:
            raise ValidationError("the zero matrix is not a projective point")
        den = reduce(lcm, (x.denominator for x in upper), 1)
        ints = [int(x * den) for x in upper]
        g = reduce(gcd, (abs(v) for v in ints if v), 0)
        sign = 1 if lead > 0 else -1
        factor = Fraction(sign * den, g)
        # factor * input = normalized
        self.matrix = M * factor
        self.size = n
        self.factor = factor

    @classmethod
    def coerce(cls, obj) -> "ProjSymPoint":
        return obj if isinstance(obj, ProjSymPoint) else cls(obj)

    def upper(self) -> list[Fraction]:
        n = self.size
        return [self.matrix[i, j] for i in range(n) for j in range(i, n)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjSymPoint):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"ProjSymPoint({self.matrix.to_strings()})"
