"""Exact scalars, sparse matrices and the validity predicates used by every model.

Rationals are :class:`fractions.Fraction`.  Unitary amplitudes live in the real
quadratic field Q(sqrt 2), represented by :class:`QuadExt`.  Matrices are stored
column-wise and sparse, which keeps permutation-like transition matrices cheap.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[Fraction, "QuadExt"]


class DimensionError(ValueError):
    def __init__(self, what: str, expected: int, got: int) -> None:
        super().__init__(f"{what}: expected dimension {expected}, got {got}")
        self.expected = expected
        self.got = got


class DegenerateStateError(ArithmeticError):
    """Raised when the weighting operator meets an affine state of l1 norm zero."""


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, QuadExt):
        if x.b != 0:
            raise ValueError(f"{x} is not rational")
        return x.a
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class QuadExt:
    """An element ``a + b*sqrt(2)`` of Q(sqrt 2) with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0) -> None:
        self.a = as_rational(a)
        self.b = as_rational(b)

    @classmethod
    def coerce(cls, x) -> QuadExt:
        if isinstance(x, QuadExt):
            return x
        return cls(x, 0)

    def __repr__(self) -> str:
        return f"QuadExt({self.a}, {self.b})"

    def __str__(self) -> str:
        return f"{self.a} + {self.b}√2"

    def __add__(self, other):
        if isinstance(other, QuadExt):
            return QuadExt(self.a + other.a, self.b + other.b)
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.a + other, self.b)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> QuadExt:
        return QuadExt(-self.a, -self.b)

    def __sub__(self, other):
        if isinstance(other, (QuadExt, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, QuadExt):
            return QuadExt(self.a * other.a + 2 * self.b * other.b,
                           self.a * other.b + self.b * other.a)
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.a * other, self.b * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> QuadExt:
        return QuadExt(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - 2 b^2``; zero only for the zero element."""
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadExt division by zero")
        return QuadExt(self.a / n, -self.b / n)

    def __truediv__(self, other):
        if isinstance(other, QuadExt):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.a / other, self.b / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int) -> QuadExt:
        if k < 0:
            return self.inverse() ** (-k)
        out, base = QuadExt(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sign(self) -> int:
        a, b = self.a, self.b
        if a >= 0 and b >= 0:
            return 0 if (a == 0 and b == 0) else 1
        if a <= 0 and b <= 0:
            return -1
        # opposite signs: compare a^2 with 2 b^2
        if a > 0:
            return 1 if a * a > 2 * b * b else -1
        return 1 if 2 * b * b > a * a else -1

    def __abs__(self) -> QuadExt:
        return -self if self.sign() < 0 else self

    def square(self) -> QuadExt:
        return QuadExt(self.a * self.a + 2 * self.b * self.b, 2 * self.a * self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadExt):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def _cmp(self, other) -> int:
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        return (self - other).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 2 ** 0.5


SQRT2 = QuadExt(0, 1)
INV_SQRT2 = QuadExt(0, Fraction(1, 2))


def normalize_scalar(x) -> Scalar:
    """Coerce ints and strings to Fraction and leave QuadExt values alone."""
    if isinstance(x, QuadExt):
        return x
    return as_rational(x)


def magnitude_squared(x: Scalar) -> Scalar:
    if isinstance(x, QuadExt):
        sq = x.square()
        return sq.a if sq.b == 0 else sq
    return x * x


def format_scalar(x) -> str:
    """Reduced fraction ``p/q`` for rationals, ``a + b√2`` otherwise."""
    if isinstance(x, QuadExt):
        if x.b == 0:
            x = x.a
        else:
            return f"{_frac(x.a)} + {_frac(x.b)}√2"
    return _frac(as_rational(x))


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


Vector = tuple


class Matrix:
    """Square or rectangular exact matrix stored as sparse columns.

    ``columns[j]`` is a tuple of ``(row, value)`` pairs with nonzero values in
    increasing row order.
    """

    __slots__ = ("rows", "cols", "columns", "_hash")

    def __init__(self, rows: int, cols: int, columns: Sequence[Iterable[tuple[int, object]]]) -> None:
        if len(columns) != cols:
            raise DimensionError("column count", cols, len(columns))
        packed = []
        for col in columns:
            acc: dict[int, Scalar] = {}
            for i, v in col:
                if not 0 <= i < rows:
                    raise IndexError(f"row index {i} outside 0..{rows - 1}")
                v = normalize_scalar(v)
                acc[i] = acc[i] + v if i in acc else v
            packed.append(tuple((i, acc[i]) for i in sorted(acc) if acc[i] != 0))
        self.rows = rows
        self.cols = cols
        self.columns = tuple(packed)
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> Matrix:
        r = len(rows)
        c = len(rows[0]) if r else 0
        for row in rows:
            if len(row) != c:
                raise DimensionError("row length", c, len(row))
        return cls(r, c, [[(i, rows[i][j]) for i in range(r)] for j in range(c)])

    @classmethod
    def identity(cls, n: int, one=Fraction(1)) -> Matrix:
        return cls(n, n, [[(j, one)] for j in range(n)])

    @classmethod
    def from_mapping(cls, n: int, mapping: Sequence[int], one=Fraction(1)) -> Matrix:
        """0/1 matrix sending basis state ``j`` to ``mapping[j]``."""
        return cls(n, n, [[(mapping[j], one)] for j in range(n)])

    def entry(self, i: int, j: int) -> Scalar:
        for r, v in self.columns[j]:
            if r == i:
                return v
        return Fraction(0)

    def to_rows(self) -> list[list[Scalar]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col:
                out[i][j] = v
        return out

    def transpose(self) -> Matrix:
        cols: list[list] = [[] for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col:
                cols[i].append((j, v))
        return Matrix(self.cols, self.rows, cols)

    def column_sum(self, j: int) -> Scalar:
        return sum((v for _, v in self.columns[j]), Fraction(0))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def apply_sparse(self, v: Mapping[int, Scalar]) -> dict[int, Scalar]:
        out: dict[int, Scalar] = {}
        for j, vj in v.items():
            for i, mij in self.columns[j]:
                t = mij * vj
                out[i] = out[i] + t if i in out else t
        return {i: x for i, x in out.items() if x != 0}

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionError("matrix product", self.cols, other.rows)
            cols = []
            for col in other.columns:
                cols.append(list(self.apply_sparse(dict(col)).items()))
            return Matrix(self.rows, other.cols, cols)
        return mat_apply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.columns) == (other.rows, other.cols, other.columns)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.columns))
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, nnz={sum(map(len, self.columns))})"

    def nonzero_count(self) -> int:
        return sum(len(c) for c in self.columns)


def vector(entries: Iterable[object]) -> Vector:
    v = tuple(normalize_scalar(x) for x in entries)
    if not v:
        raise ValueError("vectors have length at least 1")
    return v


def basis_vector(n: int, i: int, one=Fraction(1)) -> Vector:
    return tuple(one if k == i else Fraction(0) for k in range(n))


def to_sparse(v: Sequence[Scalar]) -> dict[int, Scalar]:
    return {i: x for i, x in enumerate(v) if x != 0}


def to_dense(v: Mapping[int, Scalar], n: int) -> Vector:
    return tuple(v.get(i, Fraction(0)) for i in range(n))


def mat_apply(m: Matrix, v: Sequence[object]) -> Vector:
    """Exact matrix-vector product ``m v``."""
    if m.cols != len(v):
        raise DimensionError(f"mat_apply on {m.rows}x{m.cols} matrix", m.cols, len(v))
    return to_dense(m.apply_sparse(to_sparse(vector(v))), m.rows)


def validate_stochastic(m: Matrix) -> bool:
    """Left stochastic: entries nonnegative rationals, each column summing to 1."""
    if not m.is_square():
        return False
    for col in m.columns:
        total = Fraction(0)
        for _, v in col:
            if isinstance(v, QuadExt) or v < 0:
                return False
            total += v
        if total != 1:
            return False
    return True


def validate_affine(m: Matrix) -> bool:
    """Every column is an affine state: rational entries summing to exactly 1."""
    if not m.is_square():
        return False
    for col in m.columns:
        if any(isinstance(v, QuadExt) and v.b != 0 for _, v in col):
            return False
        if sum((v for _, v in col), Fraction(0)) != 1:
            return False
    return True


def validate_orthogonal(m: Matrix) -> bool:
    """True iff ``m^T m`` is the identity, compared exactly in Q(sqrt 2)."""
    if not m.is_square():
        return False
    by_row: dict[int, list[tuple[int, Scalar]]] = {}
    for j, col in enumerate(m.columns):
        for i, v in col:
            by_row.setdefault(i, []).append((j, v))
    gram: dict[tuple[int, int], Scalar] = {}
    for entries in by_row.values():
        for j, vj in entries:
            for k, vk in entries:
                if k < j:
                    continue
                t = vj * vk
                gram[j, k] = gram[j, k] + t if (j, k) in gram else t
    for j in range(m.cols):
        if gram.get((j, j), 0) != 1:
            return False
    return all(v == 0 for (j, k), v in gram.items() if j != k)


def l1_norm(v: Sequence[object]) -> Fraction:
    return sum((abs(as_rational(x)) for x in v), Fraction(0))


def weighting_distribution(v: Sequence[object], accepting: Iterable[int]) -> Fraction:
    """Probability that weighting the affine state ``v`` observes a state in ``accepting``."""
    norm = l1_norm(v)
    if norm == 0:
        raise DegenerateStateError("affine state has l1 norm 0")
    return sum((abs(as_rational(v[i])) for i in set(accepting)), Fraction(0)) / norm
