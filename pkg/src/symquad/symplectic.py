"""Symplectic group action on symmetric matrices: equations, sampling, strata."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvariantViolation, ValidationError
from .matrix import ProjSymPoint, QMatrix, symmetric_indeterminate_matrix
from .poly import MPoly


def _check_r(r) -> None:
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise ValidationError("r must be a positive integer")


@lru_cache(maxsize=None)
def omega(r: int) -> QMatrix:
    """Standard symplectic form [[0, I], [-I, 0]] of size 2r."""
    _check_r(r)
    I = QMatrix.identity(r)
    Z = QMatrix.zeros(r)
    return QMatrix.blocks([[Z, I], [-I, Z]])


def is_symplectic(M: QMatrix) -> bool:
    if not M.is_square() or M.nrows % 2:
        return False
    W = omega(M.nrows // 2)
    return M.T @ W @ M == W


@dataclass(frozen=True)
class SymplecticMat:
    r: int
    matrix: QMatrix

    def __post_init__(self):
        if self.matrix.shape != (2 * self.r, 2 * self.r):
            raise ValidationError("symplectic matrix has the wrong size")
        if not is_symplectic(self.matrix):
            raise InvariantViolation("matrix is not symplectic", self.matrix.to_strings())


@dataclass(frozen=True)
class StratumLabel:
    """``kind`` is 'rank', 'full-rank' or 'outside-X'; ``k`` is the matrix rank."""

    kind: str
    k: int | None = None

    def __str__(self) -> str:
        if self.kind == "rank":
            return f"rank-{self.k}"
        return self.kind


def standard_point(r: int, k: int) -> QMatrix:
    """I_k: the first k diagonal entries equal to 1 (k = 2r gives the identity)."""
    _check_r(r)
    if not (0 <= k <= 2 * r):
        raise ValidationError("k out of range")
    return QMatrix.diag([1] * k + [0] * (2 * r - k))


def _n_entry(Z, r: int, i: int, j: int):
    total = MPoly() if not isinstance(Z[0, 0], Fraction) else Fraction(0)
    for k in range(r):
        total = total + Z[i, k] * Z[k + r, j] - Z[i, k + r] * Z[k, j]
    return total


@lru_cache(maxsize=None)
def _orbit_equations(r: int) -> tuple:
    Z = symmetric_indeterminate_matrix(2 * r - 1)
    eqs = []
    for i in range(2 * r):
        for j in range(i + 1, 2 * r):
            if j != r + i:
                eqs.append(_n_entry(Z, r, i, j))
    for l in range(r - 1):
        eqs.append(_n_entry(Z, r, l, r + l) - _n_entry(Z, r, l + 1, r + l + 1))
    return tuple(eqs)


def orbit_equations(r: int) -> list[MPoly]:
    """The (2r+1)(r-1) quadrics cutting out the orbit closure of the identity.

    They express that Z Omega Z is a multiple of Omega: off-pair entries
    vanish and the paired entries N[l, r+l] all agree.
    """
    _check_r(r)
    return list(_orbit_equations(r))


def orbit_residuals(r: int, Z: QMatrix) -> list[Fraction]:
    """Values of the orbit equations at a rational matrix, same order."""
    if Z.shape != (2 * r, 2 * r):
        raise ValidationError(f"expected a {2 * r}x{2 * r} matrix")
    N = Z @ omega(r) @ Z
    vals = [N[i, j] for i in range(2 * r) for j in range(i + 1, 2 * r) if j != r + i]
    vals += [N[l, r + l] - N[l + 1, r + l + 1] for l in range(r - 1)]
    return vals


def satisfies_orbit_equations(r: int, Z: QMatrix) -> bool:
    return not any(orbit_residuals(r, Z))


def classify_point(r: int, Z) -> StratumLabel:
    _check_r(r)
    p = ProjSymPoint.coerce(Z)
    if p.size != 2 * r:
        raise ValidationError(f"point has size {p.size}, expected {2 * r}")
    if not satisfies_orbit_equations(r, p.matrix):
        return StratumLabel("outside-X")
    k = p.matrix.rank()
    if k == 2 * r:
        return StratumLabel("full-rank", k)
    if k > r:
        raise InvariantViolation(
            f"point satisfies the orbit equations but has rank {k}", p.matrix.to_strings()
        )
    return StratumLabel("rank", k)


def stratum_dimension(r: int, k: int) -> int:
    _check_r(r)
    if not isinstance(k, int) or not (1 <= k <= r):
        raise ValidationError("k must satisfy 1 <= k <= r")
    return 2 * r * k + k - k * k - 1


def x_dimension(r: int) -> int:
    _check_r(r)
    return r * (r + 1)


# random sampler


def _random_symmetric(rng: random.Random, r: int, bound: int) -> QMatrix:
    S = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            S[i][j] = S[j][i] = rng.randint(-bound, bound)
    return QMatrix(S)


def _random_unimodular(rng: random.Random, r: int) -> QMatrix:
    A = QMatrix.identity(r)
    for _ in range(r):
        i, j = rng.sample(range(r), 2) if r > 1 else (0, 0)
        if i == j:
            break
        E = [[int(a == b) for b in range(r)] for a in range(r)]
        E[i][j] = rng.choice((-1, 1))
        A = A @ QMatrix(E)
    return A


def _lower_borel(rng: random.Random, r: int) -> QMatrix:
    # [[A, 0], [A^{-t} S, A^{-t}]] is symplectic for symmetric S
    A = _random_unimodular(rng, r)
    Ait = A.inverse().T
    S = _random_symmetric(rng, r, 2)
    return QMatrix.blocks([[A, QMatrix.zeros(r)], [Ait @ S, Ait]])


def _upper_unipotent(rng: random.Random, r: int) -> QMatrix:
    I = QMatrix.identity(r)
    return QMatrix.blocks([[I, _random_symmetric(rng, r, 2)], [QMatrix.zeros(r), I]])


def _pair_swap(rng: random.Random, r: int) -> QMatrix:
    i = rng.randrange(r)
    M = [[int(a == b) for b in range(2 * r)] for a in range(2 * r)]
    M[i][i] = M[r + i][r + i] = 0
    M[i][r + i] = 1
    M[r + i][i] = -1
    return QMatrix(M)


def _block_permutation(rng: random.Random, r: int) -> QMatrix:
    perm = list(range(r))
    rng.shuffle(perm)
    full = perm + [p + r for p in perm]
    return QMatrix([[int(full[j] == i) for j in range(2 * r)] for i in range(2 * r)])


_GENERATORS = (_lower_borel, _upper_unipotent, _pair_swap, _block_permutation)


def random_symplectic(r: int, seed: int) -> SymplecticMat:
    """Deterministic random element of Sp(2r) with small integer entries.

    Seed 0 is reserved for the identity. Other seeds compose a handful of
    Borel, unipotent, pair-swap and block-permutation generators together
    with the swap Omega.
    """
    _check_r(r)
    if seed == 0:
        return SymplecticMat(r, QMatrix.identity(2 * r))
    rng = random.Random(seed)
    M = QMatrix.identity(2 * r)
    for _ in range(2 + r):
        gen = rng.choice(_GENERATORS)
        M = M @ gen(rng, r)
        if rng.random() < 0.3:
            M = M @ omega(r)
    return SymplecticMat(r, M)


def orbit_point(M: SymplecticMat | QMatrix, base: QMatrix) -> QMatrix:
    """M base M^t."""
    A = M.matrix if isinstance(M, SymplecticMat) else M
    return A @ base @ A.T


def psi_family(r: int, t) -> QMatrix:
    """diag(1,..,1, t,..,t): full rank for t != 0, degenerates to I_r at t = 0."""
    return QMatrix.diag([1] * r + [t] * r)


def lambda_family(r: int, k: int, t) -> QMatrix:
    """diag(1 (k times), t, 0, ...): rank k+1 for t != 0, degenerates to I_k."""
    if not (1 <= k <= r - 1):
        raise ValidationError("k must satisfy 1 <= k <= r-1")
    return QMatrix.diag([1] * k + [t] + [0] * (2 * r - k - 1))


@dataclass
class SamplingReport:
    r: int
    trials: int
    counts: dict
    violations: int

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "trials": self.trials,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "violations": self.violations,
        }


def orbit_samples(r: int, count: int, seed: int):
    """Seeded points of the orbit closure, cycling through the I_k and the two families."""
    _check_r(r)
    rng = random.Random(seed)
    strata = list(range(1, r + 1)) + [2 * r]
    for trial in range(count):
        sub_seed = rng.getrandbits(63) | 1
        choice = trial % (len(strata) + 2)
        if choice < len(strata):
            base = standard_point(r, strata[choice])
        else:
            t = Fraction(rng.randint(1, 9), rng.randint(1, 9)) * rng.choice((-1, 1))
            if choice == len(strata) or r == 1:
                base = psi_family(r, t)
            else:
                base = lambda_family(r, rng.randint(1, r - 1), t)
        yield orbit_point(random_symplectic(r, sub_seed), base)


def rank_gap_sampling(r: int, trials: int, seed: int) -> SamplingReport:
    """Sample points of the orbit closure and check the rank gap.

    Each trial picks a base point (some I_k, or a member of the two
    degenerating families at a random rational t) and moves it by a random
    symplectic matrix. Any point violating an orbit equation or having a
    rank strictly between r and 2r raises InvariantViolation.
    """
    _check_r(r)
    if not isinstance(trials, int) or trials < 1:
        raise ValidationError("trials must be a positive integer")
    counts = {k: 0 for k in list(range(1, r + 1)) + [2 * r]}
    for Z in orbit_samples(r, trials, seed):
        if not satisfies_orbit_equations(r, Z):
            raise InvariantViolation("sampled point violates an orbit equation", Z.to_strings())
        k = Z.rank()
        if not (1 <= k <= r or k == 2 * r):
            raise InvariantViolation(f"sampled point has forbidden rank {k}", Z.to_strings())
        counts[k] += 1
    return SamplingReport(r, trials, counts, 0)
