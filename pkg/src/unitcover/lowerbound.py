"""Instances whose permuted solutions force many covering subspaces.

For a tuple u with nonzero coordinates, the n! coordinate permutations of u
solve the equation with all coefficients 1/(u_1+...+u_n). When u is generic
enough (no vanishing subset sums, no vanishing permutation determinant), no
proper subspace holds more than (n-1)! of those points, so any cover needs
at least n subspaces, while n explicit hyperplanes suffice.

Genericity is decided through the symbolic determinants of matrices whose
rows are permuted variable tuples; identically-zero testing of those
patterns is exact, and zero-ness only depends on the multiset of row
permutations, which keeps the pattern tables small.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Optional, Sequence

from .covers import Hyperplane, candidate_flats
from .equations import Equation, SolutionSet, solution_set_from_tuples
from .errors import (
    BudgetExceeded,
    InputError,
    NotFound,
    OutsideBasis,
    VerificationError,
)
from .exact import RatMatrix, all_sign_vectors, det
from .groups import FinRankGroup, is_infinite, product_group

DEFAULT_SUBSET_BUDGET = 10 ** 5
PATTERN_DIM_LIMIT = 4  # full pattern tables beyond this need an explicit budget


def all_permutations(n: int) -> tuple:
    """All permutations of range(n) as tuples, in lexicographic order."""
    return tuple(itertools.permutations(range(n)))


def perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class DetPattern:
    """Signed monomial expansion of the determinant with rows
    (X_{s_i(1)}, ..., X_{s_i(n)}), keyed by exponent tuple."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict):
        self.n = n
        self.terms = {k: v for k, v in terms.items() if v != 0}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def eval(self, u: Sequence[Fraction]) -> Fraction:
        acc = Fraction(0)
        for exps, coeff in self.terms.items():
            term = Fraction(coeff)
            for var, e in enumerate(exps):
                if e:
                    term *= Fraction(u[var]) ** e
            acc += term
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, DetPattern) and self.n == other.n and self.terms == other.terms


def expand_pattern(sigmas: Sequence[Sequence[int]]) -> DetPattern:
    """Exact expansion over all permutations tau of sgn(tau) times the
    product of X_{sigma_i(tau(i))}; cancellation happens in the map."""
    n = len(sigmas)
    for s in sigmas:
        if sorted(s) != list(range(n)):
            raise InputError(f"{s!r} is not a permutation of range({n})")
    terms: dict = {}
    for tau in itertools.permutations(range(n)):
        exps = [0] * n
        for i in range(n):
            exps[sigmas[i][tau[i]]] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + perm_sign(tau)
    return DetPattern(n, terms)


class PatternSet:
    """The permutation tuples whose determinant pattern is not identically
    zero. Zero-ness is invariant under reordering the rows (the determinant
    only changes sign), so membership is stored per sorted multiset; tuples
    with a repeated permutation have equal rows and are never members."""

    def __init__(self, n: int, nonzero_multisets: frozenset):
        self.n = n
        self.nonzero_multisets = nonzero_multisets

    def __contains__(self, sigmas) -> bool:
        sigmas = tuple(tuple(s) for s in sigmas)
        if len(sigmas) != self.n or len(set(sigmas)) != self.n:
            return False
        return tuple(sorted(sigmas)) in self.nonzero_multisets

    def __len__(self) -> int:
        # Every nonzero multiset has n distinct permutations, hence n!
        # ordered tuples.
        return len(self.nonzero_multisets) * factorial(self.n)

    def __iter__(self):
        for multiset in sorted(self.nonzero_multisets):
            yield from itertools.permutations(multiset)


_pattern_cache: dict = {}


def nonzero_patterns(n: int, allow_large: bool = False) -> PatternSet:
    """All non-vanishing determinant patterns for dimension n, cached.

    Dimension 5 is allowed only behind the explicit flag; anything larger
    is out of desk scale and always refused.
    """
    if n < 2:
        raise InputError("pattern tables need dimension at least 2")
    if n > 5:
        raise BudgetExceeded(factorial(n) ** n, 0, "pattern table")
    if n == 5 and not allow_large:
        raise BudgetExceeded(
            comb(factorial(5) + 4, 5), comb(factorial(4) + 3, 4), "pattern table"
        )
    if n in _pattern_cache:
        return _pattern_cache[n]
    perms = all_permutations(n)
    nonzero = set()
    for multiset in itertools.combinations(perms, n):
        if not expand_pattern(multiset).is_zero:
            nonzero.add(multiset)
    tset = PatternSet(n, frozenset(nonzero))
    _pattern_cache[n] = tset
    return tset


# ---------------------------------------------------------------------------
# Witness verification: every subset of permutations of size (n-1)! + 1
# contains an n-tuple with non-vanishing pattern.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    n: int
    mode: str
    subset_size: int
    subsets_checked: int
    failures: tuple
    witness_histogram: dict  # combinations tried before a witness was found
    seed: Optional[int] = None
    notes: tuple = ()


def _find_witness(subset: tuple, tset: PatternSet):
    """(tries, witness_multiset) scanning the subset's n-combinations in
    lexicographic order; witness None when every pattern vanishes."""
    tries = 0
    for combo in itertools.combinations(subset, tset.n):
        tries += 1
        if combo in tset.nonzero_multisets:
            return tries, combo
    return tries, None


def verify_pattern_witnesses(
    n: int,
    mode: str = "exhaustive",
    count: int = 10 ** 5,
    seed: int = 0,
    budget: int = DEFAULT_SUBSET_BUDGET,
    allow_large: bool = False,
) -> WitnessReport:
    """Check that subsets of size (n-1)! + 1 always contain a witness
    n-tuple with non-vanishing pattern.

    Only minimal-size subsets are checked: a witness survives into every
    superset. Exhaustive mode walks all subsets (budget-capped); sampled
    mode draws seeded random subsets. The exploratory mode instead looks at
    subsets one element smaller and reports those without any witness,
    asserting nothing.
    """
    tset = nonzero_patterns(n, allow_large=allow_large)
    perms = all_permutations(n)
    size = factorial(n - 1) + 1
    notes = []

    if mode == "explore":
        size -= 1
        total = comb(len(perms), size)
        if total > budget:
            raise BudgetExceeded(total, budget, "subset exploration")
        vanishing = []
        checked = 0
        for subset in itertools.combinations(perms, size):
            checked += 1
            _, witness = _find_witness(subset, tset)
            if witness is None:
                vanishing.append(subset)
        notes.append(
            f"{len(vanishing)} of {checked} subsets of size {size} have no witness"
        )
        return WitnessReport(
            n=n,
            mode=mode,
            subset_size=size,
            subsets_checked=checked,
            failures=tuple(vanishing[:5]),
            witness_histogram={},
            notes=tuple(notes),
        )

    if mode == "exhaustive":
        total = comb(len(perms), size)
        if total > budget:
            raise BudgetExceeded(total, budget, "exhaustive subset scan")
        subsets = itertools.combinations(perms, size)
    elif mode == "sampled":
        if count > budget:
            raise BudgetExceeded(count, budget, "sampled subset scan")
        rng = random.Random(seed)
        subsets = (
            tuple(sorted(rng.sample(perms, size))) for _ in range(count)
        )
    else:
        raise InputError(f"unknown mode {mode!r}")

    histogram: dict = {}
    failures = []
    checked = 0
    for subset in subsets:
        checked += 1
        tries, witness = _find_witness(subset, tset)
        if witness is None:
            failures.append(subset)
        else:
            histogram[tries] = histogram.get(tries, 0) + 1
    return WitnessReport(
        n=n,
        mode=mode,
        subset_size=size,
        subsets_checked=checked,
        failures=tuple(failures),
        witness_histogram=dict(sorted(histogram.items())),
        seed=seed if mode == "sampled" else None,
    )


# ---------------------------------------------------------------------------
# Generic tuples and the instances they induce.
# ---------------------------------------------------------------------------


def check_genericity(u: Sequence[Fraction], tset: PatternSet) -> tuple:
    """(ok, witness): every nonempty subset sum of u must be nonzero and
    every non-vanishing pattern must stay nonzero at u. The witness names
    the first failing subset (1-based) or pattern tuple."""
    u = tuple(Fraction(v) for v in u)
    n = len(u)
    if n != tset.n:
        raise InputError("tuple length must match the pattern table dimension")
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            if sum((u[i] for i in subset), Fraction(0)) == 0:
                return False, ("subsum", tuple(i + 1 for i in subset))
    for multiset in sorted(tset.nonzero_multisets):
        rows = [[u[s[j]] for j in range(n)] for s in multiset]
        if det(RatMatrix.from_rows(rows)) == 0:
            return False, ("pattern", multiset)
    return True, None


@dataclass(frozen=True)
class LowerBoundInstance:
    """A generic tuple u, its coordinate sum b, the equation with all
    coefficients 1/b, and the n! permuted solutions."""

    gamma1: FinRankGroup
    n: int
    u: tuple
    b: Fraction
    equation: Equation
    solutions: SolutionSet


def _scan_generic_tuples(gamma1: FinRankGroup, n: int, box: int, tset: PatternSet):
    """Yield tuples u over the n-fold product of the base group that pass
    the genericity check, scanning exponent vectors by increasing max-norm
    then lexicographically, then sign patterns."""
    r1 = len(gamma1.generators)
    dims = n * r1
    base = gamma1._gen_values
    sign_choices = all_sign_vectors(n) if gamma1.sign_torsion else [(1,) * n]
    for shell in range(box + 1):
        for z in itertools.product(range(-shell, shell + 1), repeat=dims):
            if shell > 0 and max(abs(v) for v in z) != shell:
                continue
            coords = []
            for i in range(n):
                value = Fraction(1)
                for k in range(r1):
                    e = z[i * r1 + k]
                    if e:
                        value *= base[k][0] ** e
                coords.append(value)
            for signs in sign_choices:
                u = tuple(v * s for v, s in zip(coords, signs))
                ok, _ = check_genericity(u, tset)
                if ok:
                    yield u


def generate_instance(gamma1: FinRankGroup, n: int, box: int) -> LowerBoundInstance:
    """First generic tuple in scan order, packaged with its equation and
    the n! permuted solutions (all verified non-degenerate)."""
    if gamma1.n != 1:
        raise InputError("instance generation needs a one-dimensional group")
    if not is_infinite(gamma1):
        raise InputError("the base group must be infinite")
    if n < 2:
        raise InputError("instances need dimension at least 2")
    tset = nonzero_patterns(n)
    for u in _scan_generic_tuples(gamma1, n, box, tset):
        b = sum(u, Fraction(0))
        if b == 0:
            raise AssertionError("generic tuple has zero coordinate sum")
        group = product_group(gamma1, n)
        eq = Equation(tuple(1 / b for _ in range(n)), group)
        points = [tuple(u[s[j]] for j in range(n)) for s in all_permutations(n)]
        solutions = solution_set_from_tuples(eq, points)
        if len(solutions) != factorial(n):
            raise AssertionError("permuted solutions collided; tuple was not generic")
        for sol in solutions:
            if sol.degenerate:
                raise AssertionError("a permuted solution came out degenerate")
        return LowerBoundInstance(gamma1, n, u, b, eq, solutions)
    raise NotFound(f"no generic tuple with exponents in [-{box}, {box}]; enlarge the box")


def explicit_n_cover(inst: LowerBoundInstance) -> list:
    """The n hyperplanes u_i*(x_1+...+x_{n-1}) - (b-u_i)*x_n = 0; the i-th
    one contains exactly the permuted solutions placing u_i last."""
    out = []
    for ui in inst.u:
        normal = [ui] * (inst.n - 1) + [-(inst.b - ui)]
        out.append(Hyperplane.from_rational(normal))
    return out


def max_points_per_subspace(inst: LowerBoundInstance) -> int:
    """Largest number of permuted solutions on one proper flat; must not
    exceed (n-1)!, which together with n!/(n-1)! = n certifies the lower
    bound for the minimal cover."""
    points = [sol.x for sol in inst.solutions]
    flats = candidate_flats(points)
    most = max(len(f.member_indices) for f in flats)
    if most > factorial(inst.n - 1):
        raise VerificationError(
            f"a proper flat holds {most} points, more than (n-1)! = {factorial(inst.n - 1)}"
        )
    return most


@dataclass(frozen=True)
class SumSample:
    """Coordinate sums of generic tuples, pairwise inequivalent under the
    base group; complete is False when the box ran out first."""

    values: tuple
    complete: bool


def sample_inequivalent_sums(
    gamma1: FinRankGroup, n: int, count: int, box: int
) -> SumSample:
    """Up to count coordinate sums b of generic tuples, pairwise
    inequivalent (no quotient lies in the base group)."""
    if gamma1.n != 1:
        raise InputError("sampling needs a one-dimensional group")
    if count < 1:
        raise InputError("count must be positive")
    tset = nonzero_patterns(n)
    values: list = []

    def equivalent(b1: Fraction, b2: Fraction) -> bool:
        try:
            return gamma1.contains((b1 / b2,))
        except OutsideBasis:
            # A prime outside the basis cannot be cancelled by group elements.
            return False

    for u in _scan_generic_tuples(gamma1, n, box, tset):
        b = sum(u, Fraction(0))
        if b == 0:
            raise AssertionError("generic tuple has zero coordinate sum")
        if any(equivalent(b, prev) for prev in values):
            continue
        values.append(b)
        if len(values) == count:
            return SumSample(tuple(values), True)
    return SumSample(tuple(values), False)
