"""Equations a_1*x_1 + ... + a_n*x_n = 1 with unknowns ranging over a
finitely generated multiplicative group.

Enumeration scans the generator exponent box exhaustively (complete
relative to the box), every solution is stored with its lattice witness and
its full list of vanishing subsums, and output order is canonical so runs
are diffable. Box scans may be partitioned across workers; the merge is
order-preserving, so results do not depend on the worker count.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .covers import Hyperplane
from .errors import BudgetExceeded, InputError, NotASolution
from .exact import RatMatrix, parse_rational
from .groups import FinRankGroup

DEFAULT_ENUM_BUDGET = 10 ** 8


@dataclass(frozen=True)
class Equation:
    """Coefficient tuple plus the group the unknowns range over."""

    a: tuple
    group: FinRankGroup

    def __post_init__(self):
        coeffs = tuple(parse_rational(v) if not isinstance(v, Fraction) else v for v in self.a)
        object.__setattr__(self, "a", coeffs)
        if len(coeffs) != self.group.n:
            raise InputError("coefficient count must equal the group dimension")
        if any(v == 0 for v in coeffs):
            raise InputError("coefficients must be nonzero")

    @property
    def n(self) -> int:
        return len(self.a)


def vanishing_subsets(a: Sequence[Fraction], x: Sequence[Fraction]) -> list:
    """All nonempty index sets I (1-based, sorted) with sum of a_i*x_i over
    I equal to zero. The trivial full sum equals 1 for a solution, so for
    solutions only sizes 2..n-1 can appear."""
    n = len(a)
    out = []
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            if sum((a[i] * x[i] for i in subset), Fraction(0)) == 0:
                out.append(tuple(i + 1 for i in subset))
    return out


def classify_solution(eq: Equation, x: Sequence) -> list:
    """Vanishing subsums of a solution; empty list means non-degenerate.

    Raises NotASolution when the tuple does not satisfy the equation.
    """
    xv = tuple(parse_rational(v) if not isinstance(v, Fraction) else v for v in x)
    total = sum((ai * xi for ai, xi in zip(eq.a, xv)), Fraction(0))
    if total != 1:
        raise NotASolution(f"sum a_i*x_i = {total}, expected 1")
    return vanishing_subsets(eq.a, xv)


@dataclass(frozen=True)
class Solution:
    x: tuple
    exponents: tuple
    signs: tuple
    vanishing: tuple  # tuple of 1-based sorted index tuples

    @property
    def degenerate(self) -> bool:
        return bool(self.vanishing)

    @property
    def is_all_ones(self) -> bool:
        return all(v == 1 for v in self.x)

    def sort_key(self):
        return (self.exponents, self.signs)


@dataclass(frozen=True)
class SolutionSet:
    """Solutions of one equation, sorted by witness; box 0 marks a curated
    list that did not come from an enumeration."""

    equation: Equation
    box: int
    solutions: tuple

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    @property
    def has_all_ones(self) -> bool:
        return any(s.is_all_ones for s in self.solutions)

    def system_rows(self) -> list:
        """Rows in pipeline order: the all-ones solution first when present,
        the rest in canonical witness order."""
        ones = [s for s in self.solutions if s.is_all_ones]
        rest = [s for s in self.solutions if not s.is_all_ones]
        return ones + rest

    def nondegenerate(self) -> "SolutionSet":
        return SolutionSet(
            self.equation,
            self.box,
            tuple(s for s in self.solutions if not s.degenerate),
        )

    def anchored_nondegenerate(self) -> "SolutionSet":
        """Non-degenerate solutions plus the all-ones anchor row, which the
        deformation system always keeps even when a vanishing subsum of the
        coefficients makes the anchor itself degenerate."""
        keep = tuple(
            s for s in self.solutions if s.is_all_ones or not s.degenerate
        )
        return SolutionSet(self.equation, self.box, keep)


def make_solution(eq: Equation, x: Sequence, exponents=None, signs=None) -> Solution:
    """Build a verified Solution: checks the sum, group membership, and
    classifies the vanishing subsums."""
    xv = tuple(parse_rational(v) if not isinstance(v, Fraction) else v for v in x)
    vanishing = tuple(classify_solution(eq, xv))
    if exponents is None:
        exponents = eq.group.witness(xv)
        if exponents is None:
            raise InputError(f"{tuple(map(str, xv))} is not a member of the group")
    if signs is None:
        signs = (1,) * eq.n
    return Solution(xv, tuple(exponents), tuple(signs), vanishing)


def solution_set_from_tuples(eq: Equation, xs: Sequence[Sequence], box: int = 0) -> SolutionSet:
    sols = [make_solution(eq, x) for x in xs]
    seen = {}
    for s in sols:
        seen.setdefault(s.x, s)
    ordered = sorted(seen.values(), key=Solution.sort_key)
    return SolutionSet(eq, box, tuple(ordered))


def _scan_chunk(eq: Equation, power_tables: list, box: int, first_values: Sequence[int]) -> list:
    """Scan the exponent sub-box where the first generator exponent ranges
    over first_values; returns verified solutions in scan order."""
    group = eq.group
    n = eq.n
    a = eq.a
    r = len(power_tables)
    sign_choices = (
        list(itertools.product((1, -1), repeat=n)) if group.sign_torsion else [(1,) * n]
    )
    ones = (Fraction(1),) * n
    found = []

    def emit(z: tuple, base: tuple):
        for signs in sign_choices:
            total = Fraction(0)
            for ai, xi, si in zip(a, base, signs):
                total += ai * xi if si > 0 else -ai * xi
            if total == 1:
                x = tuple(xi if si > 0 else -xi for xi, si in zip(base, signs))
                found.append(Solution(x, z, signs, tuple(vanishing_subsets(a, x))))

    def walk(level: int, z_prefix: tuple, partial: tuple):
        if level == r:
            emit(z_prefix, partial)
            return
        values = first_values if level == 0 else range(-box, box + 1)
        table = power_tables[level]
        for zk in values:
            powers = table[zk]
            walk(
                level + 1,
                z_prefix + (zk,),
                tuple(p * q for p, q in zip(partial, powers)),
            )

    walk(0, (), ones)
    return found


def enumerate_solutions(
    eq: Equation,
    box: int,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> SolutionSet:
    """All solutions whose generator exponents lie in [-box, box], under
    every allowed torsion sign choice. Complete relative to the box: equal
    to a naive scan of the full exponent product."""
    if box < 0:
        raise InputError("box must be nonnegative")
    group = eq.group
    r = len(group.generators)
    torsion_bits = eq.n if group.sign_torsion else 0
    total = (2 * box + 1) ** r * 2 ** torsion_bits
    if total > budget:
        raise BudgetExceeded(total, budget, "exponent box")
    # Per-generator tables of coordinatewise powers.
    power_tables = []
    for coords in group._gen_values:
        table = {}
        for z in range(-box, box + 1):
            table[z] = tuple(c ** z for c in coords)
        power_tables.append(table)

    first_axis = list(range(-box, box + 1)) if r > 0 else [None]
    if r == 0:
        chunks = [_scan_chunk(eq, [], box, [])]
    elif workers > 1:
        slices = [[v] for v in first_axis]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(
                pool.map(lambda vals: _scan_chunk(eq, power_tables, box, vals), slices)
            )
    else:
        chunks = [_scan_chunk(eq, power_tables, box, first_axis)]

    seen = {}
    for chunk in chunks:
        for s in chunk:
            if s.x not in seen or s.sort_key() < seen[s.x].sort_key():
                seen[s.x] = s
    ordered = sorted(seen.values(), key=Solution.sort_key)
    return SolutionSet(eq, box, tuple(ordered))


def solution_matrix(ss: SolutionSet) -> RatMatrix:
    """The N x (n+1) matrix with rows (x_1, ..., x_n, 1), the all-ones
    solution first when present. Its rank is at most n for genuine
    solutions because the columns satisfy the coefficient dependency."""
    rows = [list(s.x) + [Fraction(1)] for s in ss.system_rows()]
    if not rows:
        return RatMatrix(0, ss.equation.n + 1, ())
    return RatMatrix.from_rows(rows)


def point_matrix(ss: SolutionSet) -> RatMatrix:
    """The N x n matrix of bare solution points, same row order."""
    rows = [list(s.x) for s in ss.system_rows()]
    if not rows:
        return RatMatrix(0, ss.equation.n, ())
    return RatMatrix.from_rows(rows)


def degenerate_subsum_hyperplanes(eq: Equation) -> list:
    """The hyperplanes of vanishing subsums, one per index set of size
    2..n-1; there are exactly 2**n - n - 2 of them and every degenerate
    solution lies on at least one."""
    n = eq.n
    if n < 3:
        raise InputError("subsum hyperplanes need dimension at least 3")
    out = []
    for size in range(2, n):
        for subset in itertools.combinations(range(n), size):
            normal = [eq.a[i] if i in subset else Fraction(0) for i in range(n)]
            out.append(Hyperplane.from_rational(normal))
    return out
