"""Independent reference implementations used as test oracles.

These deliberately avoid the library's algorithms: determinants by cofactor
expansion, enumeration by a direct product scan over coordinate values,
covers by exhaustive subset search. They are slow and only run on tiny
inputs.
"""

from fractions import Fraction
from itertools import combinations, product


def naive_det(rows):
    """Cofactor expansion along the first row, Fractions throughout."""
    k = len(rows)
    if k == 0:
        return Fraction(1)
    if k == 1:
        return Fraction(rows[0][0])
    acc = Fraction(0)
    for j in range(k):
        if rows[0][j] == 0:
            continue
        minor = [[row[m] for m in range(k) if m != j] for row in rows[1:]]
        term = Fraction(rows[0][j]) * naive_det(minor)
        acc += term if j % 2 == 0 else -term
    return acc


def naive_rank(rows):
    """Rank as the largest k with a nonzero k x k minor."""
    if not rows:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    for k in range(min(n_rows, n_cols), 0, -1):
        for rsel in combinations(range(n_rows), k):
            for csel in combinations(range(n_cols), k):
                sub = [[rows[i][j] for j in csel] for i in rsel]
                if naive_det(sub) != 0:
                    return k
    return 0


def naive_enumerate(a, gen_values, sign_torsion, box):
    """Solutions by direct evaluation over the full product of generator
    powers and sign patterns; returns the set of solution tuples."""
    n = len(a)
    r = len(gen_values)
    a = [Fraction(v) for v in a]
    sign_space = list(product((1, -1), repeat=n)) if sign_torsion else [(1,) * n]
    out = set()
    for z in product(range(-box, box + 1), repeat=r):
        coords = [Fraction(1)] * n
        for zk, gen in zip(z, gen_values):
            for i in range(n):
                coords[i] *= Fraction(gen[i]) ** zk
        for signs in sign_space:
            x = tuple(c * s for c, s in zip(coords, signs))
            if sum(ai * xi for ai, xi in zip(a, x)) == 1:
                out.add(x)
    return out


def exhaustive_min_cover_size(points, candidate_member_sets):
    """Smallest number of candidate flats whose union covers all points,
    by trying every subset in increasing size order."""
    universe = set(range(len(points)))
    sets = [frozenset(s) for s in candidate_member_sets]
    for size in range(1, len(sets) + 1):
        for combo in combinations(sets, size):
            covered = set()
            for s in combo:
                covered |= s
            if covered == universe:
                return size
    raise AssertionError("candidates cannot cover the points at all")


def brute_force_member(gen_values, sign_torsion, x, bound=10):
    """Group membership by scanning all exponent vectors with entries in
    [-bound, bound] and all sign patterns."""
    n = len(x)
    r = len(gen_values)
    x = tuple(Fraction(v) for v in x)
    sign_space = list(product((1, -1), repeat=n)) if sign_torsion else [(1,) * n]
    for z in product(range(-bound, bound + 1), repeat=r):
        coords = [Fraction(1)] * n
        for zk, gen in zip(z, gen_values):
            for i in range(n):
                coords[i] *= Fraction(gen[i]) ** zk
        for signs in sign_space:
            if tuple(c * s for c, s in zip(coords, signs)) == x:
                return True
    return False
