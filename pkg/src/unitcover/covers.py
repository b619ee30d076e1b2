"""Exact minimal covers of finite point sets by proper linear subspaces.

Every proper subspace sits inside a hyperplane, so covers are reported as
hyperplanes with primitive integer normals. Candidates are the maximal
span-closed point subsets with proper span; the optimum is found by
branch-and-bound over those candidates with a greedy incumbent, and the
reported cover is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence

from .errors import BudgetExceeded, InputError, LimitExceeded, ZeroPoint
from .exact import (
    RatMatrix,
    kernel_basis,
    parse_rational,
    primitive_integer_vector,
)

DEFAULT_NODE_BUDGET = 10 ** 6


@dataclass(frozen=True)
class Hyperplane:
    """Codimension-1 subspace, as a primitive integer normal with positive
    first nonzero entry, so each subspace has exactly one representation."""

    normal: tuple

    def __post_init__(self):
        if not self.normal or all(v == 0 for v in self.normal):
            raise InputError("hyperplane normal must be nonzero")
        canonical = primitive_integer_vector(self.normal)
        object.__setattr__(self, "normal", canonical)

    @staticmethod
    def from_rational(vec: Sequence) -> "Hyperplane":
        return Hyperplane(tuple(Fraction(v) for v in vec))

    @property
    def dim(self) -> int:
        return len(self.normal)

    def contains_point(self, point: Sequence) -> bool:
        return sum((Fraction(n) * Fraction(p) for n, p in zip(self.normal, point)), Fraction(0)) == 0

    def sort_key(self):
        return self.normal


@dataclass(frozen=True)
class FlatCandidate:
    """A maximal span-closed subset of the input points with proper span.

    member_indices refers to the original point list (proportional
    duplicates included); span_dim is the dimension of the members' span.
    """

    member_indices: frozenset
    span_dim: int

    def sort_key(self):
        return tuple(sorted(self.member_indices))


@dataclass(frozen=True)
class Cover:
    hyperplanes: tuple
    assignment: tuple
    proven_minimal: bool

    @property
    def size(self) -> int:
        return len(self.hyperplanes)


def _parse_points(points: Sequence[Sequence]) -> list:
    out = []
    for idx, p in enumerate(points):
        vec = tuple(parse_rational(v) if not isinstance(v, Fraction) else v for v in p)
        if all(v == 0 for v in vec):
            raise ZeroPoint(f"point {idx} is the zero vector")
        out.append(vec)
    if not out:
        raise InputError("no points supplied")
    dims = {len(p) for p in out}
    if len(dims) != 1:
        raise InputError("points of mixed dimensions")
    return out


def _projective_classes(points: list) -> tuple:
    """Deduplicate points up to scalar multiples. Returns (reps, class_of)
    where reps[k] is the representative vector of class k and class_of[i]
    the class of input point i."""
    key_to_class = {}
    reps = []
    class_of = []
    for p in points:
        key = primitive_integer_vector(p)
        if key not in key_to_class:
            key_to_class[key] = len(reps)
            reps.append(tuple(Fraction(v) for v in key))
        class_of.append(key_to_class[key])
    return reps, class_of


class _SpanTester:
    """Incremental exact row reduction for span membership tests."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows = []  # echelon rows with recorded pivot columns
        self.pivots = []

    def residual(self, vec: Sequence[Fraction]) -> list:
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            if v[p] != 0:
                c = v[p] / row[p]
                for j in range(p, self.dim):
                    v[j] -= c * row[j]
        return v

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return all(c == 0 for c in self.residual(vec))

    def add(self, vec: Sequence[Fraction]) -> bool:
        v = self.residual(vec)
        pivot = next((j for j, c in enumerate(v) if c != 0), None)
        if pivot is None:
            return False
        self.rows.append(v)
        self.pivots.append(pivot)
        order = sorted(range(len(self.pivots)), key=self.pivots.__getitem__)
        self.rows = [self.rows[i] for i in order]
        self.pivots = [self.pivots[i] for i in order]
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def candidate_flats(points: Sequence[Sequence]) -> list:
    """All maximal span-closed subsets with proper span. Any minimal cover
    can be assembled from these, since a proper subspace may be enlarged to
    the span-closure of the points it covers."""
    pts = _parse_points(points)
    n = len(pts[0])
    reps, class_of = _projective_classes(pts)
    m = len(reps)
    closures = {}
    for size in range(1, min(n - 1, m) + 1):
        for subset in itertools.combinations(range(m), size):
            tester = _SpanTester(n)
            independent = True
            for idx in subset:
                if not tester.add(reps[idx]):
                    independent = False
                    break
            if not independent:
                continue  # same span arises from a smaller subset
            members = frozenset(k for k in range(m) if tester.contains(reps[k]))
            closures.setdefault(members, tester.rank)
    maximal = [
        (members, dim)
        for members, dim in closures.items()
        if not any(members < other for other in closures)
    ]
    out = []
    for members, dim in maximal:
        original = frozenset(
            i for i, cls in enumerate(class_of) if cls in members
        )
        out.append(FlatCandidate(original, dim))
    out.sort(key=FlatCandidate.sort_key)
    return out


def _flat_to_hyperplane(points: list, members: Sequence[int]) -> Hyperplane:
    """Extend a proper flat to a hyperplane containing it, deterministically:
    take the first canonical kernel-basis vector of the member matrix."""
    rows = [list(points[i]) for i in sorted(members)]
    matrix = RatMatrix.from_rows(rows)
    basis = kernel_basis(matrix)
    if not basis:
        raise InputError("flat spans the whole space, cannot extend")
    return Hyperplane(tuple(basis[0]))


def _class_candidates(points: list):
    """Candidates restated over projective classes, in deterministic order:
    descending coverage, ties by lexicographic member set."""
    reps, class_of = _projective_classes(points)
    flats = candidate_flats(points)
    class_sets = []
    for flat in flats:
        classes = frozenset(class_of[i] for i in flat.member_indices)
        class_sets.append((classes, flat))
    class_sets.sort(key=lambda t: (-len(t[0]), tuple(sorted(t[0]))))
    return reps, class_of, class_sets


def _assignment(points: list, hyperplanes: Sequence[Hyperplane]) -> tuple:
    assignment = []
    for p in points:
        pick = next(
            (k for k, h in enumerate(hyperplanes) if h.contains_point(p)), None
        )
        if pick is None:
            raise AssertionError("cover misses a point it was built for")
        assignment.append(pick)
    return tuple(assignment)


def greedy_cover(points: Sequence[Sequence]) -> Cover:
    """Repeatedly take the candidate flat covering the most uncovered
    points (ties by smallest lexicographic member set); an upper bound for
    the exact optimum and the branch-and-bound incumbent."""
    pts = _parse_points(points)
    reps, class_of, class_sets = _class_candidates(pts)
    uncovered = set(range(len(reps)))
    chosen = []
    while uncovered:
        best = min(
            class_sets,
            key=lambda t: (-len(t[0] & uncovered), tuple(sorted(t[0]))),
        )
        gain = best[0] & uncovered
        if not gain:
            raise AssertionError("greedy cover stalled")
        chosen.append(best)
        uncovered -= gain
    hyperplanes = sorted(
        (_flat_to_hyperplane(pts, flat.member_indices) for _, flat in chosen),
        key=Hyperplane.sort_key,
    )
    return Cover(tuple(hyperplanes), _assignment(pts, hyperplanes), False)


def min_cover(
    points: Sequence[Sequence],
    limit: Optional[int] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Cover:
    """A cover of provably minimal cardinality, by exact branch-and-bound
    over the candidate flats.

    Raises LimitExceeded when a limit is given and the optimum is larger;
    the exception carries the proven lower bound.
    """
    pts = _parse_points(points)
    reps, class_of, class_sets = _class_candidates(pts)
    m = len(reps)
    all_classes = frozenset(range(m))
    covering = {c: [] for c in range(m)}
    for pos, (classes, _flat) in enumerate(class_sets):
        for c in classes:
            covering[c].append(pos)

    incumbent = greedy_cover(points)
    best_sets: list = []
    best_size = incumbent.size
    max_flat = max(len(cs) for cs, _ in class_sets)
    nodes = 0

    def bound(uncovered_count: int) -> int:
        return ceil(uncovered_count / max_flat)

    def dfs(uncovered: frozenset, chosen: list):
        nonlocal best_sets, best_size, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(nodes, node_budget, "branch-and-bound nodes")
        if not uncovered:
            if len(chosen) < best_size:
                best_size = len(chosen)
                best_sets = list(chosen)
            return
        if len(chosen) + bound(len(uncovered)) >= best_size:
            return
        # Branch on the uncovered class with the fewest covering flats.
        target = min(uncovered, key=lambda c: (len(covering[c]), c))
        for pos in covering[target]:
            classes, _flat = class_sets[pos]
            chosen.append(pos)
            dfs(uncovered - classes, chosen)
            chosen.pop()

    dfs(all_classes, [])
    if best_sets:
        hyperplanes = tuple(
            sorted(
                (
                    _flat_to_hyperplane(pts, class_sets[pos][1].member_indices)
                    for pos in best_sets
                ),
                key=Hyperplane.sort_key,
            )
        )
    else:
        # No strictly smaller cover exists, so the greedy incumbent is optimal.
        hyperplanes = incumbent.hyperplanes
    cover = Cover(hyperplanes, _assignment(pts, hyperplanes), True)
    if limit is not None and cover.size > limit:
        raise LimitExceeded(cover.size, limit)
    return cover


def verify_cover(points: Sequence[Sequence], hyperplanes: Sequence[Hyperplane]) -> tuple:
    """(True, None) when every point lies on some hyperplane, otherwise
    (False, first uncovered point)."""
    pts = _parse_points(points)
    for p in pts:
        if not any(h.contains_point(p) for h in hyperplanes):
            return False, p
    return True, None
