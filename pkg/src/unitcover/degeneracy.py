"""Degenerate directions of the solution system and the covering family
they induce.

A solution list (all-ones solution first) gives an N x (n+1) matrix of
rank at most n. A direction matrix of coprime integers deforms each
solution row by powers of an auxiliary variable; the direction is
degenerate when every maximal minor of the deformed matrix vanishes
identically. From a degenerate direction one extracts a polynomial kernel
vector, specializes it at -1, and obtains at most 2**n hyperplanes whose
union contains every non-degenerate solution of the list.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .covers import Hyperplane
from .equations import SolutionSet, point_matrix
from .errors import (
    BudgetExceeded,
    InputError,
    ShapeMismatch,
    TooFewRows,
    ZeroNormal,
)
from .exact import (
    LaurentPoly,
    RatMatrix,
    UniPoly,
    all_sign_vectors,
    det,
    laurent_det,
    laurent_matrix_rank,
    poly_kernel_vector,
    rank_of,
)

DEFAULT_DIRECTION_BUDGET = 10 ** 7


@dataclass(frozen=True)
class DirectionMatrix:
    """Integer deformation exponents, one row per solution row after the
    first; the gcd of all entries is 1, so some entry is odd."""

    c: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.c)
        object.__setattr__(self, "c", rows)
        if not rows or not rows[0]:
            raise InputError("direction matrix must be nonempty")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ShapeMismatch("ragged direction matrix")
        g = 0
        for row in rows:
            for v in row:
                g = gcd(g, abs(v))
        if g != 1:
            raise InputError(f"direction entries must have gcd 1, got {g}")

    @property
    def n_rows(self) -> int:
        return len(self.c)

    @property
    def n_cols(self) -> int:
        return len(self.c[0])

    def negated(self) -> "DirectionMatrix":
        return DirectionMatrix(tuple(tuple(-v for v in row) for row in self.c))


@dataclass(frozen=True)
class EpsilonMatrix:
    """Signs (-1)**c_ij of a direction matrix; never the all-ones matrix."""

    eps: tuple

    @staticmethod
    def from_direction(c: DirectionMatrix) -> "EpsilonMatrix":
        eps = tuple(tuple(1 if v % 2 == 0 else -1 for v in row) for row in c.c)
        if all(all(v == 1 for v in row) for row in eps):
            raise AssertionError("coprime direction cannot have all entries even")
        return EpsilonMatrix(eps)


@dataclass(frozen=True)
class BVector:
    """Specialized kernel coefficients (b_1..b_n, b_0); never all zero."""

    b: tuple
    b0: Fraction

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(Fraction(v) for v in self.b))
        object.__setattr__(self, "b0", Fraction(self.b0))
        if all(v == 0 for v in self.b) and self.b0 == 0:
            raise InputError("b-vector must not vanish entirely")


@dataclass(frozen=True)
class ClassLabel:
    """Trichotomy label for a normalized coefficient tuple, relative to the
    supplied solution list and direction-search box."""

    kind: str  # "I", "II" or "III"
    box: int
    rank: Optional[int] = None
    direction: Optional[DirectionMatrix] = None


def _require_system_rows(ss: SolutionSet) -> list:
    rows = ss.system_rows()
    if not rows or not rows[0].is_all_ones:
        raise InputError("solution set must contain the all-ones solution")
    return rows


def deformed_matrix(ss: SolutionSet, c: DirectionMatrix) -> tuple:
    """The N x (n+1) matrix with the all-ones row first and each later row
    (x_i1 * t**c_i1, ..., x_in * t**c_in, 1) in the deformation variable."""
    rows = _require_system_rows(ss)
    n = ss.equation.n
    if c.n_rows != len(rows) - 1 or c.n_cols != n:
        raise ShapeMismatch(
            f"direction matrix must be {len(rows) - 1}x{n}, got {c.n_rows}x{c.n_cols}"
        )
    one = LaurentPoly.const(1)
    out = [tuple([one] * (n + 1))]
    for sol, c_row in zip(rows[1:], c.c):
        entries = [LaurentPoly.monomial(x, k) for x, k in zip(sol.x, c_row)]
        entries.append(one)
        out.append(tuple(entries))
    return tuple(out)


def is_degenerate_direction(ss: SolutionSet, c: DirectionMatrix) -> bool:
    """True iff every (n+1) x (n+1) minor of the deformed matrix is the
    zero Laurent polynomial. TooFewRows when there are no such minors."""
    matrix = deformed_matrix(ss, c)
    n = ss.equation.n
    if len(matrix) < n + 1:
        raise TooFewRows(
            f"{len(matrix)} rows admit no ({n + 1})x({n + 1}) minors; the condition is vacuous"
        )
    if n + 1 <= 5:
        probe = Fraction(2)
        for rows in itertools.combinations(matrix, n + 1):
            # A nonzero value at any sample point certifies a nonzero minor;
            # only candidates passing the probe pay for the symbolic check.
            numeric = det(RatMatrix.from_rows([[e.eval(probe) for e in row] for row in rows]))
            if numeric != 0:
                return False
            if not laurent_det(rows).is_zero:
                return False
        return True
    return laurent_matrix_rank(matrix) <= n


def _direction_candidates(shape: tuple, box: int, first_values: Sequence[int]):
    """Direction matrices with given first flat entry values, in
    lexicographic order of the flattened entry tuple."""
    n_rows, n_cols = shape
    total = n_rows * n_cols
    for first in first_values:
        for tail in itertools.product(range(-box, box + 1), repeat=total - 1):
            flat = (first,) + tail
            g = 0
            for v in flat:
                g = gcd(g, abs(v))
            if g != 1:
                continue
            yield DirectionMatrix(
                tuple(flat[r * n_cols : (r + 1) * n_cols] for r in range(n_rows))
            )


def find_direction(
    ss: SolutionSet,
    box: int = 1,
    budget: int = DEFAULT_DIRECTION_BUDGET,
    workers: int = 1,
) -> Optional[DirectionMatrix]:
    """First degenerate direction with entries in [-box, box], scanning the
    flattened entry tuples in lexicographic order; None when the box holds
    none (which proves nothing beyond the box)."""
    rows = _require_system_rows(ss)
    n = ss.equation.n
    if len(rows) < n + 1:
        raise TooFewRows(f"need at least {n + 1} solution rows, got {len(rows)}")
    shape = (len(rows) - 1, n)
    total = (2 * box + 1) ** (shape[0] * shape[1])
    if total > budget:
        raise BudgetExceeded(total, budget, "direction search space")

    def scan(first_values):
        for cand in _direction_candidates(shape, box, first_values):
            if is_degenerate_direction(ss, cand):
                return cand
        return None

    axis = list(range(-box, box + 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = [h for h in pool.map(lambda v: scan([v]), axis) if h is not None]
        if not hits:
            return None
        flat = lambda d: tuple(v for row in d.c for v in row)
        return min(hits, key=flat)
    return scan(axis)


def lambda_kernel(ss: SolutionSet, c: DirectionMatrix) -> tuple:
    """Polynomials (b_1, ..., b_n, b_0), coprime and not all zero, with
    sum_j b_j = b_0 and, for every deformed row, sum_j b_j * t**c_ij * x_ij
    equal to b_0 identically. Verified symbolically before returning.
    FullRank propagates when the direction was not degenerate after all."""
    matrix = deformed_matrix(ss, c)
    n = ss.equation.n
    vec = poly_kernel_vector(matrix)
    blam = tuple(vec[:n]) + (-vec[n],)
    # The two defining identities, re-checked independently of the kernel
    # construction's own verification.
    total = UniPoly()
    for p in blam[:n]:
        total = total + p
    if total != blam[n]:
        raise AssertionError("kernel coefficients do not sum to the affine part")
    b0 = LaurentPoly.from_unipoly(blam[n])
    for sol, c_row in zip(ss.system_rows()[1:], c.c):
        acc = LaurentPoly()
        for bj, xj, cij in zip(blam[:n], sol.x, c_row):
            acc = acc + LaurentPoly(cij, bj).scale(xj)
        if not (acc - b0).is_zero:
            raise AssertionError("kernel identity failed on a solution row")
    return blam


def specialize_at_minus_one(blam: Sequence[UniPoly], c: DirectionMatrix) -> tuple:
    """Evaluate the kernel polynomials at -1 and reduce the direction to
    its sign pattern. Coprimality guarantees the values are not all zero,
    and gcd 1 guarantees the signs are not all +1."""
    values = [p.eval(Fraction(-1)) for p in blam]
    b, b0 = tuple(values[:-1]), values[-1]
    bv = BVector(b, b0)
    eps = EpsilonMatrix.from_direction(c)
    return bv, eps


def verify_sign_identities(ss: SolutionSet, bv: BVector, eps: EpsilonMatrix) -> bool:
    """Check sum_j b_j = b_0 and, row by row, sum_j b_j*eps_ij*x_ij = b_0."""
    rows = _require_system_rows(ss)
    if sum(bv.b, Fraction(0)) != bv.b0:
        return False
    for sol, eps_row in zip(rows[1:], eps.eps):
        total = sum(
            (bj * ej * xj for bj, ej, xj in zip(bv.b, eps_row, sol.x)), Fraction(0)
        )
        if total != bv.b0:
            return False
    return True


def check_nonproportional(a: Sequence[Fraction], bv: BVector) -> bool:
    """True iff no sign choice makes (b_1*e_1, ..., b_n*e_n, b_0)
    proportional to (a_1, ..., a_n, 1)."""
    a = tuple(Fraction(v) for v in a)
    for eps in all_sign_vectors(len(a)):
        if all(bj * ej == bv.b0 * aj for bj, ej, aj in zip(bv.b, eps, a)):
            return False
    return True


def cover_family(a: Sequence[Fraction], bv: BVector) -> list:
    """The hyperplanes b_0*(sum_j a_j X_j) - sum_j b_j*e_j X_j = 0 over all
    sign choices, deduplicated and canonicalized; at most 2**n of them.
    Requires check_nonproportional(a, bv); a zero normal would contradict
    it and raises ZeroNormal."""
    a = tuple(Fraction(v) for v in a)
    seen = {}
    for eps in all_sign_vectors(len(a)):
        normal = tuple(bv.b0 * aj - bj * ej for aj, bj, ej in zip(a, bv.b, eps))
        if all(v == 0 for v in normal):
            raise ZeroNormal("sign family produced a zero normal; claim check was bypassed")
        h = Hyperplane.from_rational(normal)
        seen.setdefault(h.normal, h)
    return sorted(seen.values(), key=Hyperplane.sort_key)


def classify_tuple(
    a: Sequence[Fraction],
    ss: SolutionSet,
    box: int = 1,
    budget: int = DEFAULT_DIRECTION_BUDGET,
    workers: int = 1,
) -> ClassLabel:
    """Trichotomy relative to the solution list: rank-deficient point sets
    first (II), then tuples whose deformed system admits a degenerate
    direction within the box (III), else rigid (I, relative to the box)."""
    rows = _require_system_rows(ss)
    n = ss.equation.n
    rank = rank_of(point_matrix(ss))
    if rank < n:
        return ClassLabel("II", box=box, rank=rank)
    direction = find_direction(ss, box=box, budget=budget, workers=workers)
    if direction is not None:
        return ClassLabel("III", box=box, rank=rank, direction=direction)
    return ClassLabel("I", box=box, rank=rank)
