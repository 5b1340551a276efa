"""Exact matrices over Q or a prime field F_p.

Entries over Q are stored as ``int`` when integral and ``Fraction`` otherwise;
entries over F_p are plain ``int`` residues in ``[0, p)``.  Elimination over Q
clears denominators row by row and runs fraction-free on Python integers,
which is much faster than Fraction arithmetic for the small dense systems
produced by Hom computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Rationals:
    characteristic: int = 0

    def coerce(self, x):
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into Q")

    def normalize(self, x):
        # results of +,*,- on ints/Fractions; keep integers as int
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def inverse(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.normalize(Fraction(1) / x)

    def __str__(self):
        return "rational"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, math.isqrt(self.p) + 1)):
            raise ValueError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    def coerce(self, x):
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has denominator divisible by {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}")

    def normalize(self, x):
        return x % self.p

    def inverse(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def __str__(self):
        return str(self.p)


QQ = Rationals()


def field_from_spec(spec) -> Rationals | PrimeField:
    """Parse ``"rational"``/``0`` or a prime number into a field."""
    if isinstance(spec, (Rationals, PrimeField)):
        return spec
    if spec in (0, "0", "rational", "Q", "QQ", None):
        return QQ
    return PrimeField(int(spec))


# --------------------------------------------------------------------------
# elimination kernels


def _echelon_int(rows: list[list[int]], ncols: int, stop: Optional[int] = None,
                 full: bool = True) -> tuple[list[list[int]], list[int]]:
    """Fraction-free Gauss(-Jordan) elimination over Z, rows reduced by gcd.

    Only columns ``< stop`` are used as pivots.  With ``full`` every pivot
    column is cleared in all other rows.  Returns (nonzero rows, pivot cols).
    """
    if stop is None:
        stop = ncols
    rows = [r for r in rows if any(r)]
    pivots: list[int] = []
    r0 = 0
    for c in range(stop):
        if r0 == len(rows):
            break
        piv = None
        best = None
        for i in range(r0, len(rows)):
            v = rows[i][c]
            if v:
                a = abs(v)
                if best is None or a < best:
                    piv, best = i, a
                    if a == 1:
                        break
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        prow = rows[r0]
        p = prow[c]
        lo = 0 if full else r0 + 1
        for i in range(lo, len(rows)):
            if i == r0:
                continue
            row = rows[i]
            q = row[c]
            if not q:
                continue
            g = math.gcd(p, q)
            a, b = p // g, q // g
            new = [a * x - b * y for x, y in zip(row, prow)]
            d = math.gcd(*new)
            if d > 1:
                new = [x // d for x in new]
            rows[i] = new
        pivots.append(c)
        r0 += 1
    return rows[:r0] + [r for r in rows[r0:] if any(r)], pivots


def _echelon_mod(rows: list[list[int]], ncols: int, p: int, stop: Optional[int] = None,
                 full: bool = True) -> tuple[list[list[int]], list[int]]:
    if stop is None:
        stop = ncols
    rows = [r for r in rows if any(r)]
    pivots: list[int] = []
    r0 = 0
    for c in range(stop):
        if r0 == len(rows):
            break
        piv = next((i for i in range(r0, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        inv = pow(rows[r0][c], -1, p)
        prow = [x * inv % p for x in rows[r0]]
        rows[r0] = prow
        lo = 0 if full else r0 + 1
        for i in range(lo, len(rows)):
            if i == r0:
                continue
            q = rows[i][c]
            if q:
                rows[i] = [(x - q * y) % p for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r0 += 1
    return rows[:r0] + [r for r in rows[r0:] if any(r)], pivots


def _integral_rows(rows: Iterable[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        den = 1
        for x in r:
            if type(x) is Fraction:
                den = den * x.denominator // math.gcd(den, x.denominator)
        if den == 1:
            out.append([int(x) for x in r])
        else:
            out.append([int(x * den) for x in r])
    return out


def echelon(field, rows: Iterable[Sequence], ncols: int, stop: Optional[int] = None,
            full: bool = True, monic: bool = True):
    """Row-reduce ``rows`` over ``field``.

    Returns ``(rows, pivots)``.  With ``monic`` the pivot entries are 1
    (field elements); otherwise rows are only meaningful up to scaling.
    """
    if isinstance(field, PrimeField):
        return _echelon_mod([[x % field.p for x in r] for r in rows], ncols, field.p, stop, full)
    red, piv = _echelon_int(_integral_rows(rows), ncols, stop, full)
    if monic:
        out = []
        for r, c in zip(red, piv):
            lead = r[c]
            out.append([x // lead if x % lead == 0 else Fraction(x, lead) for x in r])
        red = out + red[len(piv):]
    return red, piv


def rank_of_rows(field, rows: Iterable[Sequence], ncols: int) -> int:
    return len(echelon(field, rows, ncols, full=False, monic=False)[1])


# --------------------------------------------------------------------------


class Matrix:
    """Immutable dense matrix with exact entries.

    ``Matrix(field, rows, cols, data)`` takes ``data`` as a tuple of row tuples
    already normalized for ``field``; use :meth:`from_rows` for raw input.
    """

    __slots__ = ("field", "rows", "cols", "data", "_hash")

    def __init__(self, field, rows: int, cols: int, data: tuple[tuple, ...]):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data
        self._hash = None

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [tuple(field.coerce(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged matrix rows")
        return cls(field, len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "Matrix":
        zero_row = (0,) * cols
        return cls(field, rows, cols, (zero_row,) * rows)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        return cls(field, n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = len(columns)
        data = tuple(tuple(columns[j][i] for j in range(cols)) for i in range(rows))
        return cls(field, rows, cols, data)

    @classmethod
    def block_diagonal(cls, field, blocks: Sequence["Matrix"]) -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = []
        c0 = 0
        for b in blocks:
            for r in b.data:
                out.append((0,) * c0 + r + (0,) * (cols - c0 - b.cols))
            c0 += b.cols
        return cls(field, rows, cols, tuple(out))

    @classmethod
    def hstack(cls, field, blocks: Sequence["Matrix"], rows: int) -> "Matrix":
        for b in blocks:
            if b.rows != rows:
                raise DimensionError("hstack row mismatch")
        data = tuple(sum((b.data[i] for b in blocks), ()) for i in range(rows))
        return cls(field, rows, sum(b.cols for b in blocks), data)

    @classmethod
    def vstack(cls, field, blocks: Sequence["Matrix"], cols: int) -> "Matrix":
        for b in blocks:
            if b.cols != cols:
                raise DimensionError("vstack column mismatch")
        data = tuple(r for b in blocks for r in b.data)
        return cls(field, len(data), cols, data)

    # -- basic protocol

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def entries(self) -> tuple:
        """Row-major flat tuple of entries."""
        return tuple(x for r in self.data for x in r)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.field) == (other.rows, other.cols, other.field) \
            and self.data == other.data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {[list(r) for r in self.data]})"

    def is_zero(self) -> bool:
        return not any(x for r in self.data for x in r)

    # -- arithmetic

    def _check_field(self, other: "Matrix"):
        if self.field != other.field:
            raise ValueError("field mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        n = self.field.normalize
        data = tuple(tuple(n(x + y) for x, y in zip(r, s)) for r, s in zip(self.data, other.data))
        return Matrix(self.field, self.rows, self.cols, data)

    def __neg__(self) -> "Matrix":
        n = self.field.normalize
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(n(-x) for x in r) for r in self.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        n = self.field.normalize
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(n(c * x) for x in r) for r in self.data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        n = self.field.normalize
        if self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        # row-by-row accumulation over nonzero entries; matrices here are sparse
        sparse = [[(j, b) for j, b in enumerate(r) if b] for r in other.data]
        m = other.cols
        rational = self.field.characteristic == 0
        data = []
        for r in self.data:
            acc = [0] * m
            for k, a in enumerate(r):
                if a:
                    for j, b in sparse[k]:
                        acc[j] += a * b
            if rational:
                data.append(tuple(x if type(x) is int else n(x) for x in acc))
            else:
                data.append(tuple(n(x) for x in acc))
        return Matrix(self.field, self.rows, m, tuple(data))

    def transpose(self) -> "Matrix":
        data = tuple(zip(*self.data)) if self.rows else ((),) * self.cols
        return Matrix(self.field, self.cols, self.rows, tuple(tuple(r) for r in data))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        data = tuple(r[c0:c1] for r in self.data[r0:r1])
        return Matrix(self.field, r1 - r0, c1 - c0, data)


# --------------------------------------------------------------------------
# the four kernel operations


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return rank_of_rows(m.field, m.data, m.cols)


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of {x : m x = 0}, one per free column in order."""
    field = m.field
    red, piv = echelon(field, m.data, m.cols)
    pivset = set(piv)
    n = field.normalize
    cols = []
    for j in range(m.cols):
        if j in pivset:
            continue
        v = [0] * m.cols
        v[j] = 1
        for r, c in zip(red, piv):
            if r[j]:
                v[c] = n(-r[j])
        cols.append(v)
    return Matrix.from_columns(field, cols, m.cols)


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Some x with a @ x == b, or None when the system is inconsistent."""
    if a.rows != b.rows:
        raise DimensionError(f"solve: {a.rows} rows vs {b.rows} rows")
    a._check_field(b)
    field = a.field
    if a.rows == 0:
        return Matrix.zeros(field, a.cols, b.cols)
    aug = [ra + rb for ra, rb in zip(a.data, b.data)]
    red, piv = echelon(field, aug, a.cols + b.cols, stop=a.cols)
    if len(red) > len(piv):
        return None
    x = [[0] * b.cols for _ in range(a.cols)]
    for r, c in zip(red, piv):
        x[c] = list(r[a.cols:])
    return Matrix(field, a.cols, b.cols, tuple(tuple(row) for row in x))


def column_space_membership(m: Matrix, v: Matrix) -> bool:
    if v.cols != 1 or v.rows != m.rows:
        raise DimensionError("expected a single column with matching rows")
    return solve(m, v) is not None


def solve_vectors(field, vectors: Sequence[Sequence], target: Sequence) -> Optional[list]:
    """Coefficients c with sum c_i vectors[i] == target (vectors given flat)."""
    n = len(target)
    if not vectors:
        return [] if not any(target) else None
    a = Matrix(field, n, len(vectors), tuple(zip(*vectors)) if n else ())
    b = Matrix(field, n, 1, tuple((t,) for t in target))
    x = solve(a, b)
    return None if x is None else list(x.column(0))


def independent_subset(field, vectors: Sequence[Sequence], length: int) -> list[int]:
    """Indices of a maximal independent subset, chosen greedily in order."""
    if not vectors or length == 0:
        return []
    cols = tuple(zip(*vectors))
    _, piv = echelon(field, cols, len(vectors), full=False, monic=False)
    return piv
