"""Finitely generated multiplicative groups inside tuples of nonzero
rationals, represented through exponent lattices over a prime basis.

A group element is a sign pattern plus an integer exponent vector over the
basis primes. Membership, coefficient-tuple equivalence and canonical
representatives all reduce to integer lattice questions, decided exactly
with a column-style Hermite normal form; signs are handled separately as a
linear system over GF(2) because the only torsion in the rationals is -1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError, OutsideBasis
from .exact import parse_rational


def factor_int(m: int) -> dict:
    """Prime factorization of a positive integer by trial division."""
    if m <= 0:
        raise ValueError("factor_int needs a positive integer")
    out: dict = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


@dataclass(frozen=True)
class PrimeBasis:
    primes: tuple

    def __post_init__(self):
        ps = self.primes
        if list(ps) != sorted(set(ps)):
            raise InputError("prime basis must be strictly increasing")
        for p in ps:
            if p < 2 or factor_int(p) != {p: 1}:
                raise InputError(f"{p} is not prime")

    def index(self, p: int) -> int:
        return self.primes.index(p)

    def __len__(self) -> int:
        return len(self.primes)


@dataclass(frozen=True)
class GroupElement:
    """A nonzero rational as sign times a product of basis-prime powers."""

    sign: int
    exponents: tuple

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InputError("sign must be +1 or -1")

    def value(self, basis: PrimeBasis) -> Fraction:
        num, den = 1, 1
        for p, e in zip(basis.primes, self.exponents):
            if e > 0:
                num *= p ** e
            elif e < 0:
                den *= p ** (-e)
        return Fraction(self.sign * num, den)


def factorize(q, basis: PrimeBasis) -> GroupElement:
    """Factor a nonzero rational over the basis; OutsideBasis if any prime
    of the numerator or denominator is missing."""
    q = parse_rational(q) if not isinstance(q, Fraction) else q
    if q == 0:
        raise InputError("cannot factor zero over a prime basis")
    sign = 1 if q > 0 else -1
    exps = [0] * len(basis)
    for value, direction in ((abs(q.numerator), 1), (q.denominator, -1)):
        for p, e in factor_int(value).items():
            try:
                exps[basis.index(p)] += direction * e
            except ValueError:
                raise OutsideBasis(p, q) from None
    return GroupElement(sign, tuple(exps))


# ---------------------------------------------------------------------------
# Integer lattice helpers: column-style Hermite normal form with the
# unimodular transform, plus tiny GF(2) solvers for the sign bits.
# ---------------------------------------------------------------------------


def column_hnf(matrix: Sequence[Sequence[int]], cols: Optional[int] = None) -> tuple:
    """Column HNF of an integer matrix A.

    Returns (H, U, pivot_rows) with A*U = H, U unimodular, H in column
    echelon form: column j has its first nonzero entry at pivot_rows[j],
    pivot entries positive, entries left of a pivot reduced into
    [0, pivot). Columns beyond len(pivot_rows) are zero. The column count
    must be passed explicitly when the matrix has no rows.
    """
    H = [list(row) for row in matrix]
    m = len(H)
    r = len(H[0]) if H else (cols or 0)
    U = [[1 if i == j else 0 for j in range(r)] for i in range(r)]

    def col_swap(a, b):
        for row in H:
            row[a], row[b] = row[b], row[a]
        for row in U:
            row[a], row[b] = row[b], row[a]

    def col_addmul(dst, src, q):
        if q == 0:
            return
        for row in H:
            row[dst] += q * row[src]
        for row in U:
            row[dst] += q * row[src]

    def col_negate(a):
        for row in H:
            row[a] = -row[a]
        for row in U:
            row[a] = -row[a]

    pivot_rows = []
    col = 0
    for row in range(m):
        if col >= r:
            break
        nz = [j for j in range(col, r) if H[row][j] != 0]
        if not nz:
            continue
        while True:
            nz = [j for j in range(col, r) if H[row][j] != 0]
            if len(nz) == 1:
                break
            j_min = min(nz, key=lambda j: abs(H[row][j]))
            for j in nz:
                if j != j_min:
                    col_addmul(j, j_min, -(H[row][j] // H[row][j_min]))
        j = nz[0]
        if j != col:
            col_swap(j, col)
        if H[row][col] < 0:
            col_negate(col)
        for j in range(col):
            col_addmul(j, col, -(H[row][j] // H[row][col]))
        pivot_rows.append(row)
        col += 1
    return H, U, tuple(pivot_rows)


def gf2_solve(columns: Sequence[int], target: int) -> Optional[list]:
    """Solve XOR(columns[i] for chosen i) == target over GF(2).

    Vectors are bitmask ints. Returns the chosen coefficient list or None.
    """
    basis = []  # (vector, combo) pairs; vectors keep distinct leading bits
    for idx, vec in enumerate(columns):
        combo = 1 << idx
        for bvec, bcombo in basis:
            high = 1 << (bvec.bit_length() - 1)
            if vec & high:
                vec ^= bvec
                combo ^= bcombo
        if vec:
            basis.append((vec, combo))
            basis.sort(key=lambda t: -t[0].bit_length())
    combo = 0
    for bvec, bcombo in basis:
        high = 1 << (bvec.bit_length() - 1)
        if target & high:
            target ^= bvec
            combo ^= bcombo
    if target:
        return None
    return [1 if combo & (1 << i) else 0 for i in range(len(columns))]


def gf2_reduce(vector: int, vectors: Sequence[int]) -> int:
    """Canonical coset representative of vector modulo the GF(2) span."""
    basis = []
    for vec in vectors:
        for bvec in basis:
            high = 1 << (bvec.bit_length() - 1)
            if vec & high:
                vec ^= bvec
        if vec:
            basis.append(vec)
            basis.sort(key=lambda v: -v.bit_length())
    for bvec in basis:
        high = 1 << (bvec.bit_length() - 1)
        if vector & high:
            vector ^= bvec
    return vector


# ---------------------------------------------------------------------------
# The group type.
# ---------------------------------------------------------------------------


class FinRankGroup:
    """Finitely generated subgroup of n-tuples of nonzero rationals, with
    optional full sign torsion (all sign patterns allowed).

    The prime basis is fixed at construction from the generators; factoring
    later inputs over missing primes fails loudly instead of extending it.
    """

    def __init__(self, n: int, generators: Sequence[Sequence], sign_torsion: bool):
        if n < 1:
            raise InputError("group dimension must be positive")
        gen_values = []
        for gen in generators:
            coords = tuple(parse_rational(c) for c in gen)
            if len(coords) != n:
                raise InputError(f"generator {gen!r} does not have {n} coordinates")
            if any(c == 0 for c in coords):
                raise InputError(f"generator {gen!r} has a zero coordinate")
            gen_values.append(coords)
        primes = set()
        for coords in gen_values:
            for c in coords:
                primes.update(factor_int(abs(c.numerator)))
                primes.update(factor_int(c.denominator))
        self.n = n
        self.basis = PrimeBasis(tuple(sorted(primes)))
        self.sign_torsion = bool(sign_torsion)
        self.generators = tuple(
            tuple(factorize(c, self.basis) for c in coords) for coords in gen_values
        )
        self._gen_values = tuple(gen_values)
        self._build_lattice()

    # -- lattice precomputation ------------------------------------------

    def _build_lattice(self):
        n_primes = len(self.basis)
        rows = self.n * n_primes  # row (i, p) = exponent of prime p in coordinate i
        r = len(self.generators)
        A = [[0] * r for _ in range(rows)]
        sign_cols = []
        for k, gen in enumerate(self.generators):
            bits = 0
            for i, elem in enumerate(gen):
                if elem.sign < 0:
                    bits |= 1 << i
                for p_idx, e in enumerate(elem.exponents):
                    A[i * n_primes + p_idx][k] = e
            sign_cols.append(bits)
        self._exp_matrix = A
        H, U, pivot_rows = column_hnf(A, cols=r)
        self._hnf = H
        self._unimodular = U
        self._pivot_rows = pivot_rows
        rank = len(pivot_rows)
        self._rank = rank
        # Kernel of A: U columns matching the zero columns of H.
        self._kernel = [
            tuple(U[i][j] for i in range(r)) for j in range(rank, r)
        ]
        self._sign_cols = sign_cols

    @property
    def rank(self) -> int:
        """Free rank of the exponent lattice (multiplicative rank)."""
        return self._rank

    def __repr__(self) -> str:
        gens = [tuple(str(v) for v in g) for g in self._gen_values]
        return f"FinRankGroup(n={self.n}, generators={gens}, sign_torsion={self.sign_torsion})"

    # -- exponent helpers --------------------------------------------------

    def _exponent_vector(self, x: Sequence[Fraction]) -> tuple:
        """(sign bitmask, flat exponent vector) of a coordinate tuple."""
        n_primes = len(self.basis)
        f = [0] * (self.n * n_primes)
        bits = 0
        for i, coord in enumerate(x):
            elem = factorize(coord, self.basis)
            if elem.sign < 0:
                bits |= 1 << i
            for p_idx, e in enumerate(elem.exponents):
                f[i * n_primes + p_idx] = e
        return bits, f

    def _gen_sign_parity(self, z: Sequence[int]) -> int:
        bits = 0
        for k, zk in enumerate(z):
            if zk % 2:
                bits ^= self._sign_cols[k]
        return bits

    def _solve_exponents(self, f: Sequence[int]) -> Optional[list]:
        """Solve A z = f over the integers via the stored HNF, or None."""
        H, U = self._hnf, self._unimodular
        r = len(self.generators)
        y = [0] * r
        col = 0
        for row in range(len(f)):
            acc = sum(H[row][j] * y[j] for j in range(col))
            rem = f[row] - acc
            if col < self._rank and self._pivot_rows[col] == row:
                q, rr = divmod(rem, H[row][col])
                if rr:
                    return None
                y[col] = q
                col += 1
            elif rem != 0:
                return None
        return [sum(U[i][j] * y[j] for j in range(r)) for i in range(r)]

    def element(self, z: Sequence[int], signs: Optional[Sequence[int]] = None) -> tuple:
        """The group element with generator exponents z and optional extra
        torsion signs (requires sign_torsion unless all +1)."""
        if len(z) != len(self.generators):
            raise InputError("wrong number of generator exponents")
        coords = [Fraction(1)] * self.n
        for k, zk in enumerate(z):
            if zk == 0:
                continue
            for i, v in enumerate(self._gen_values[k]):
                coords[i] *= v ** zk
        if signs is not None:
            if len(signs) != self.n:
                raise InputError("wrong number of torsion signs")
            if any(s == -1 for s in signs) and not self.sign_torsion:
                raise InputError("group has no sign torsion")
            coords = [c * s for c, s in zip(coords, signs)]
        return tuple(coords)

    # -- membership and equivalence ---------------------------------------

    def witness(self, x: Sequence) -> Optional[tuple]:
        """Exponent witness z with x = torsion * product(generators**z), or
        None when x is not a member. OutsideBasis if x is not factorable."""
        coords = tuple(parse_rational(c) if not isinstance(c, Fraction) else c for c in x)
        if len(coords) != self.n:
            raise InputError(f"expected {self.n} coordinates, got {len(coords)}")
        if any(c == 0 for c in coords):
            raise InputError("group elements have nonzero coordinates")
        bits, f = self._exponent_vector(coords)
        z = self._solve_exponents(f)
        if z is None:
            return None
        if self.sign_torsion:
            return tuple(z)
        # Parity correction inside the solution coset z + ker(A).
        target = bits ^ self._gen_sign_parity(z)
        kernel_parities = [self._gen_sign_parity(k) for k in self._kernel]
        coeffs = gf2_solve(kernel_parities, target)
        if coeffs is None:
            return None
        for c, k in zip(coeffs, self._kernel):
            if c:
                z = [zi + ki for zi, ki in zip(z, k)]
        return tuple(z)

    def contains(self, x: Sequence) -> bool:
        return self.witness(x) is not None


def gamma_equivalent(group: FinRankGroup, a: Sequence, b: Sequence) -> bool:
    """True iff b = u * a coordinatewise for some group member u."""
    av = tuple(parse_rational(v) if not isinstance(v, Fraction) else v for v in a)
    bv = tuple(parse_rational(v) if not isinstance(v, Fraction) else v for v in b)
    if len(av) != group.n or len(bv) != group.n:
        raise InputError("coefficient tuples must match the group dimension")
    if any(v == 0 for v in av + bv):
        raise InputError("coefficient tuples must be nonzero coordinatewise")
    quotient = tuple(x / y for x, y in zip(bv, av))
    return group.contains(quotient)


def canonical_rep(group: FinRankGroup, a: Sequence) -> tuple:
    """Unique representative of the equivalence class of a, obtained by
    reducing the exponent vector into the fundamental domain of the
    generator lattice and normalizing signs."""
    av = tuple(parse_rational(v) if not isinstance(v, Fraction) else v for v in a)
    if len(av) != group.n:
        raise InputError("coefficient tuple must match the group dimension")
    if any(v == 0 for v in av):
        raise InputError("coefficient tuples must be nonzero coordinatewise")
    bits, f = group._exponent_vector(av)
    H = group._hnf
    rank = group._rank
    y = [0] * rank
    f_red = list(f)
    for k in range(rank):
        row = group._pivot_rows[k]
        q = f_red[row] // H[row][k]
        if q:
            y[k] = q
            for i in range(len(f_red)):
                f_red[i] -= q * H[i][k]
    r = len(group.generators)
    z = [sum(group._unimodular[i][j] * y[j] for j in range(rank)) for i in range(r)]
    if group.sign_torsion:
        bits_red = 0
    else:
        bits_red = bits ^ group._gen_sign_parity(z)
        hidden = [group._gen_sign_parity(k) for k in group._kernel]
        bits_red = gf2_reduce(bits_red, hidden)
    n_primes = len(group.basis)
    coords = []
    for i in range(group.n):
        exps = tuple(f_red[i * n_primes + p] for p in range(n_primes))
        sign = -1 if bits_red & (1 << i) else 1
        coords.append(GroupElement(sign, exps).value(group.basis))
    return tuple(coords)


def product_group(gamma1: FinRankGroup, n: int) -> FinRankGroup:
    """The n-fold coordinatewise product of a one-dimensional group."""
    if gamma1.n != 1:
        raise InputError("product_group needs a one-dimensional base group")
    gens = []
    for coords in gamma1._gen_values:
        g = coords[0]
        for i in range(n):
            tup = [Fraction(1)] * n
            tup[i] = g
            gens.append(tuple(tup))
    return FinRankGroup(n, gens, gamma1.sign_torsion)


def is_infinite(group: FinRankGroup) -> bool:
    """True iff the group has an element of infinite order, i.e. some
    generator with a nonzero exponent vector."""
    return group._rank > 0


def random_member(group: FinRankGroup, rng, bound: int = 3) -> tuple:
    """A pseudo-random member, used by the property-test harnesses."""
    z = [rng.randint(-bound, bound) for _ in group.generators]
    signs = None
    if group.sign_torsion:
        signs = [rng.choice((1, -1)) for _ in range(group.n)]
    return group.element(z, signs)


def sign_patterns(n: int):
    return itertools.product((1, -1), repeat=n)
