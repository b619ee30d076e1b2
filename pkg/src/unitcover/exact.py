"""Exact arithmetic: rationals, polynomials in one variable, Laurent
polynomials in the deformation variable, and fraction-free linear algebra.

Everything here is bit-exact over the rationals (stdlib Fraction); no
floating point is used anywhere. Matrices are small (desk scale), so the
algorithms favour exactness and determinism over asymptotics. Rank and
kernel computations go through Bareiss-style fraction-free elimination to
keep intermediate integers small.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import FullRank, InputError, ShapeMismatch

Rational = Fraction

_MINUS_SIGNS = "−‒–"  # unicode minus variants seen in hand-written files


def parse_rational(value) -> Fraction:
    """Parse an exact rational from a string like "-8/9" or an int.

    Floats are rejected: this package never accepts inexact input.
    """
    if isinstance(value, bool):
        raise InputError(f"expected exact rational, got boolean {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InputError(f"floats are not accepted as rationals: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        for ch in _MINUS_SIGNS:
            text = text.replace(ch, "-")
        if "." in text or "e" in text.lower():
            raise InputError(f"not an exact rational string: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not an exact rational string: {value!r}") from exc
    raise InputError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


# ---------------------------------------------------------------------------
# Univariate polynomials over the rationals, lowest-degree coefficient first.
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over Q; zero is the empty tuple."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("UniPoly is immutable")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero or other.is_zero:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return UniPoly(out)

    def scale(self, c) -> "UniPoly":
        c = Fraction(c)
        if c == 0:
            return UniPoly()
        return UniPoly(a * c for a in self.coeffs)

    def shift(self, k: int) -> "UniPoly":
        """Multiply by the k-th power of the variable (k >= 0)."""
        if k < 0:
            raise ValueError("shift exponent must be nonnegative")
        if self.is_zero:
            return self
        return UniPoly((Fraction(0),) * k + self.coeffs)

    def __divmod__(self, other: "UniPoly"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        den = other.coeffs
        q_len = len(rem) - len(den) + 1
        if q_len <= 0:
            return UniPoly(), UniPoly(rem)
        quo = [Fraction(0)] * q_len
        inv_lead = 1 / den[-1]
        for k in range(q_len - 1, -1, -1):
            c = rem[k + len(den) - 1] * inv_lead
            quo[k] = c
            if c != 0:
                for j, d in enumerate(den):
                    rem[k + j] -= c * d
        return UniPoly(quo), UniPoly(rem)

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ArithmeticError("polynomial division was not exact")
        return q

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def eval(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        if self.is_zero:
            return "UniPoly(0)"
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    @staticmethod
    def const(c) -> "UniPoly":
        return UniPoly((Fraction(c),))

    @staticmethod
    def variable() -> "UniPoly":
        return UniPoly((Fraction(0), Fraction(1)))


UNI_ZERO = UniPoly()
UNI_ONE = UniPoly.const(1)


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic greatest common divisor; gcd(p, 0) is the monic form of p."""
    a, b = p, q
    while not b.is_zero:
        _, r = divmod(a, b)
        a, b = b, r
    return a.monic()


# ---------------------------------------------------------------------------
# Laurent polynomials: a power-of-the-variable offset times an ordinary
# polynomial with nonzero constant term. The normal form makes zero-testing
# and equality trivial.
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Laurent polynomial, stored as offset + body with body(0) != 0."""

    __slots__ = ("offset", "body")

    def __init__(self, offset: int = 0, body: UniPoly = UNI_ZERO):
        if body.is_zero:
            offset = 0
        else:
            lead_zeros = 0
            while body.coeffs[lead_zeros] == 0:
                lead_zeros += 1
            if lead_zeros:
                body = UniPoly(body.coeffs[lead_zeros:])
                offset += lead_zeros
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "body", body)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @staticmethod
    def const(c) -> "LaurentPoly":
        return LaurentPoly(0, UniPoly.const(c))

    @staticmethod
    def monomial(c, k: int) -> "LaurentPoly":
        """c times the k-th power of the variable (k may be negative)."""
        return LaurentPoly(k, UniPoly.const(c))

    @staticmethod
    def from_unipoly(p: UniPoly) -> "LaurentPoly":
        return LaurentPoly(0, p)

    @property
    def is_zero(self) -> bool:
        return self.body.is_zero

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.offset == other.offset
            and self.body == other.body
        )

    def __hash__(self) -> int:
        return hash((self.offset, self.body))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        off = min(self.offset, other.offset)
        a = self.body.shift(self.offset - off)
        b = other.body.shift(other.offset - off)
        return LaurentPoly(off, a + b)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.offset, -self.body)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero or other.is_zero:
            return LAURENT_ZERO
        return LaurentPoly(self.offset + other.offset, self.body * other.body)

    def scale(self, c) -> "LaurentPoly":
        return LaurentPoly(self.offset, self.body.scale(c))

    def eval(self, x) -> Fraction:
        x = Fraction(x)
        if x == 0:
            raise ZeroDivisionError("Laurent polynomial evaluated at zero")
        return x ** self.offset * self.body.eval(x)

    def __repr__(self) -> str:
        if self.is_zero:
            return "LaurentPoly(0)"
        return f"LaurentPoly(offset={self.offset}, body={self.body!r})"


LAURENT_ZERO = LaurentPoly()
LAURENT_ONE = LaurentPoly.const(1)


def laurent_is_zero(p: LaurentPoly) -> bool:
    """True iff every coefficient vanishes (normal form makes this a lookup)."""
    return p.is_zero


# ---------------------------------------------------------------------------
# Exact matrices over Q.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatMatrix:
    """Immutable rational matrix, entries stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatch("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != n_cols:
                raise ShapeMismatch("ragged rows")
        flat = tuple(Fraction(v) for r in rows for v in r)
        return RatMatrix(n_rows, n_cols, flat)

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_lists(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]


def _integerize_rows(m: RatMatrix) -> list:
    """Scale each row by the lcm of its denominators; rank and right kernel
    are unchanged by row scaling."""
    out = []
    for i in range(m.rows):
        row = m.row(i)
        mult = 1
        for v in row:
            mult = lcm(mult, v.denominator)
        out.append([int(v * mult) for v in row])
    return out


def _bareiss_echelon(rows: list) -> tuple:
    """Fraction-free (Bareiss) elimination on an integer matrix, in place.

    Returns (pivot_cols, sign) where sign tracks row swaps. Afterwards the
    matrix is upper echelon with integer entries; every division taken
    during elimination was exact.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivot_cols = []
    prev = 1
    r = 0
    sign = 1
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            rows[r], rows[pivot] = rows[pivot], rows[r]
            sign = -sign
        p = rows[r][c]
        for i in range(r + 1, n_rows):
            head = rows[i][c]
            for j in range(c + 1, n_cols):
                num = p * rows[i][j] - head * rows[r][j]
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("Bareiss division was not exact")
                rows[i][j] = q
            rows[i][c] = 0
        prev = p
        pivot_cols.append(c)
        r += 1
        if r == n_rows:
            break
    return pivot_cols, sign


def rank_of(m: RatMatrix) -> int:
    """Exact rank over Q via fraction-free elimination."""
    if m.rows == 0 or m.cols == 0:
        return 0
    rows = _integerize_rows(m)
    pivot_cols, _ = _bareiss_echelon(rows)
    return len(pivot_cols)


def det(m: RatMatrix) -> Fraction:
    """Exact determinant of a square matrix."""
    if m.rows != m.cols:
        raise ShapeMismatch("determinant of a non-square matrix")
    if m.rows == 0:
        return Fraction(1)
    scale = Fraction(1)
    rows = []
    for i in range(m.rows):
        row = m.row(i)
        mult = 1
        for v in row:
            mult = lcm(mult, v.denominator)
        scale *= mult
        rows.append([int(v * mult) for v in row])
    pivot_cols, sign = _bareiss_echelon(rows)
    if len(pivot_cols) < m.rows:
        return Fraction(0)
    # For full rank the last pivot of Bareiss elimination is the determinant
    # of the integerized matrix.
    return Fraction(sign * rows[m.rows - 1][m.cols - 1], 1) / scale


def primitive_integer_vector(vec: Sequence) -> tuple:
    """Scale a nonzero rational vector to coprime integers with the first
    nonzero entry positive."""
    fracs = [Fraction(v) for v in vec]
    mult = 1
    for v in fracs:
        mult = lcm(mult, v.denominator)
    ints = [int(v * mult) for v in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    ints = [v // g for v in ints]
    first = next(v for v in ints if v != 0)
    if first < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def kernel_basis(m: RatMatrix) -> list:
    """Basis of the right kernel over Q, canonicalized to primitive integer
    vectors with positive first entry; empty iff the matrix has full column
    rank. Basis vectors are ordered by their free column."""
    if m.cols == 0:
        return []
    if m.rows == 0:
        rows = []
        pivot_cols = []
    else:
        rows = _integerize_rows(m)
        pivot_cols, _ = _bareiss_echelon(rows)
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free_cols:
        vec = [Fraction(0)] * m.cols
        vec[f] = Fraction(1)
        for k in range(len(pivot_cols) - 1, -1, -1):
            p = pivot_cols[k]
            s = sum((Fraction(rows[k][j]) * vec[j] for j in range(p + 1, m.cols)), Fraction(0))
            vec[p] = -s / rows[k][p]
        basis.append(tuple(Fraction(v) for v in primitive_integer_vector(vec)))
    return basis


# ---------------------------------------------------------------------------
# Linear algebra over the polynomial ring: used on deformed solution
# matrices whose entries are Laurent polynomials.
# ---------------------------------------------------------------------------


def _laurent_rows_to_poly(matrix: Sequence[Sequence[LaurentPoly]]) -> list:
    """Clear each row's negative powers of the variable. Row scaling by a
    unit of the Laurent ring leaves the right kernel unchanged."""
    out = []
    for row in matrix:
        offs = [e.offset for e in row if not e.is_zero]
        shift = -min(offs) if offs else 0
        out.append([
            UNI_ZERO if e.is_zero else e.body.shift(e.offset + shift) for e in row
        ])
    return out


def _poly_echelon(rows: list) -> tuple:
    """Fraction-free elimination with polynomial entries, in place.

    Returns (pivot_cols, pivot_row_origins) where pivot_row_origins[k] is the
    index of the original row supplying the k-th pivot; those original rows
    are linearly independent over the fraction field.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    origin = list(range(n_rows))
    pivot_cols = []
    pivot_origins = []
    prev = UNI_ONE
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if not rows[i][c].is_zero), None)
        if pivot is None:
            continue
        if pivot != r:
            rows[r], rows[pivot] = rows[pivot], rows[r]
            origin[r], origin[pivot] = origin[pivot], origin[r]
        p = rows[r][c]
        for i in range(r + 1, n_rows):
            head = rows[i][c]
            for j in range(c + 1, n_cols):
                num = p * rows[i][j] - head * rows[r][j]
                rows[i][j] = num.exact_div(prev)
            rows[i][c] = UNI_ZERO
        prev = p
        pivot_cols.append(c)
        pivot_origins.append(origin[r])
        r += 1
        if r == n_rows:
            break
    return pivot_cols, pivot_origins


def poly_det(rows: Sequence[Sequence[UniPoly]]) -> UniPoly:
    """Determinant of a square polynomial matrix by cofactor expansion.

    Only used on matrices of side <= 5; the degeneracy checks never need
    more at desk scale.
    """
    k = len(rows)
    if k == 0:
        return UNI_ONE
    if k == 1:
        return rows[0][0]
    acc = UNI_ZERO
    sign = 1
    minor_rows = rows[1:]
    for j in range(k):
        head = rows[0][j]
        if not head.is_zero:
            minor = [[r[m] for m in range(k) if m != j] for r in minor_rows]
            term = head * poly_det(minor)
            acc = acc + term if sign > 0 else acc - term
        sign = -sign
    return acc


def laurent_det(rows: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Determinant of a square Laurent matrix by cofactor expansion."""
    k = len(rows)
    if k == 0:
        return LAURENT_ONE
    if k == 1:
        return rows[0][0]
    acc = LAURENT_ZERO
    sign = 1
    minor_rows = rows[1:]
    for j in range(k):
        head = rows[0][j]
        if not head.is_zero:
            minor = [[r[m] for m in range(k) if m != j] for r in minor_rows]
            term = head * laurent_det(minor)
            acc = acc + term if sign > 0 else acc - term
        sign = -sign
    return acc


def laurent_matrix_rank(matrix: Sequence[Sequence[LaurentPoly]]) -> int:
    """Rank over the field of rational functions, by fraction-free
    elimination over the polynomial ring."""
    if not matrix:
        return 0
    rows = _laurent_rows_to_poly(matrix)
    pivot_cols, _ = _poly_echelon(rows)
    return len(pivot_cols)


def poly_kernel_vector(matrix: Sequence[Sequence[LaurentPoly]]) -> list:
    """One canonical right-kernel vector of a Laurent matrix, with
    polynomial entries that share no non-unit factor (hence no common zero).

    The kernel is taken over the fraction field. The vector is supported on
    the pivot columns plus the first free column, built from signed maximal
    minors of independent rows, divided by the gcd of its entries, and scaled
    so the first nonzero entry is monic. Raises FullRank when the kernel is
    trivial.
    """
    if not matrix:
        raise InputError("empty matrix has no kernel vector")
    n_cols = len(matrix[0])
    for row in matrix:
        if len(row) != n_cols:
            raise ShapeMismatch("ragged rows")
    poly_rows = _laurent_rows_to_poly(matrix)
    work = [row[:] for row in poly_rows]
    pivot_cols, pivot_origins = _poly_echelon(work)
    rank = len(pivot_cols)
    if rank == n_cols:
        raise FullRank("matrix has trivial right kernel")
    pivot_set = set(pivot_cols)
    free_col = next(c for c in range(n_cols) if c not in pivot_set)
    cols = sorted(pivot_cols + [free_col])
    base_rows = [poly_rows[i] for i in sorted(pivot_origins)]
    vec = [UNI_ZERO] * n_cols
    for pos, c in enumerate(cols):
        minor = [[row[c2] for c2 in cols if c2 != c] for row in base_rows]
        d = poly_det(minor)
        vec[c] = d if pos % 2 == 0 else -d
    # Strip the common polynomial factor, then pin the constant by making the
    # first nonzero entry monic.
    g = UNI_ZERO
    for p in vec:
        g = poly_gcd(g, p)
    if g.is_zero:
        raise FullRank("kernel construction produced the zero vector")
    if g.degree > 0:
        vec = [p.exact_div(g) if not p.is_zero else p for p in vec]
    first = next(p for p in vec if not p.is_zero)
    scale = 1 / first.leading
    vec = [p.scale(scale) for p in vec]
    # Defense in depth: the vector must annihilate every row exactly.
    for row in matrix:
        acc = LAURENT_ZERO
        for e, p in zip(row, vec):
            acc = acc + e * LaurentPoly.from_unipoly(p)
        if not acc.is_zero:
            raise AssertionError("kernel vector failed symbolic verification")
    return vec


def all_sign_vectors(n: int) -> list:
    """All sign tuples of length n in deterministic order (+1 before -1)."""
    return [tuple(s) for s in itertools.product((1, -1), repeat=n)]
