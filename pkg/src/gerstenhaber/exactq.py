"""Exact rational scalars, matrices and homology of finite cochain complexes.

Everything here works over Q with Python integers and :class:`fractions.Fraction`.
Coefficient tensors elsewhere in the package are numpy arrays of dtype ``object``
holding ``int`` or ``Fraction`` entries, so numpy only does the bookkeeping and
never rounds.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class ComplexError(ValueError):
    """A finite complex violates d∘d = 0 or has inconsistent shapes."""

    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


def parse_rational(text) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (optionally signed).  Integers pass through."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def exact(q):
    """Canonical scalar: ``int`` when integral, otherwise a reduced ``Fraction``."""
    if isinstance(q, int):
        return q
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else q


def object_array(values, shape=None) -> np.ndarray:
    arr = np.empty(np.shape(values) if shape is None else shape, dtype=object)
    flat = np.asarray(values, dtype=object).reshape(-1)
    arr.reshape(-1)[:] = [exact(v) for v in flat]
    return arr


def zeros(shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(0)
    return arr


def is_zero(arr: np.ndarray) -> bool:
    return not any(v != 0 for v in np.asarray(arr, dtype=object).reshape(-1))


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of exact rationals."""

    rows: int
    cols: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.entries.shape != (self.rows, self.cols):
            raise ValueError(
                f"entries have shape {self.entries.shape}, declared {(self.rows, self.cols)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        arr = zeros((len(rows), ncols))
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                arr[i, j] = exact(parse_rational(v) if isinstance(v, str) else v)
        return cls(len(rows), ncols, arr)

    @classmethod
    def from_array(cls, arr) -> "RationalMatrix":
        arr = np.asarray(arr, dtype=object)
        if arr.ndim != 2:
            raise ValueError("need a 2-d array")
        return cls(arr.shape[0], arr.shape[1], object_array(arr))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, zeros((rows, cols)))

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, self.entries.T.copy())

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.cols == 0:
            return RationalMatrix.zero(self.rows, other.cols)
        return RationalMatrix(self.rows, other.cols, self.entries.dot(other.entries))

    def is_zero(self) -> bool:
        return is_zero(self.entries)


def _as_entries(m) -> np.ndarray:
    if isinstance(m, RationalMatrix):
        return m.entries
    arr = np.asarray(m, dtype=object)
    if arr.ndim != 2:
        raise ValueError("need a 2-d matrix")
    return arr


def _integer_rows(arr: np.ndarray) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (rank is unchanged)."""
    out = []
    for row in arr:
        fr = [Fraction(v) for v in row]
        if not any(fr):
            continue
        den = math.lcm(*(v.denominator for v in fr))
        out.append([int(v * den) for v in fr])
    return out


def _bareiss(arr: np.ndarray) -> tuple[int, ...]:
    """Pivot columns of the row echelon form, by fraction-free elimination."""
    if arr.size == 0:
        return ()
    pivots = []
    a = _integer_rows(arr)
    nrows, ncols = len(a), arr.shape[1]
    r = 0
    prev = 1
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[col]
            if f == 0:
                ai[col:] = [(p * v) // prev for v in ai[col:]]
                continue
            ar = a[r]
            ai[col:] = [(p * v - f * w) // prev for v, w in zip(ai[col:], ar[col:])]
        prev = p
        r += 1
        pivots.append(col)
    return tuple(pivots)


def rank(m) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    return len(_bareiss(_as_entries(m)))


def pivot_columns(m) -> tuple[int, ...]:
    """Columns on which the row space of ``m`` restricts injectively."""
    return _bareiss(_as_entries(m))


def nullity(m) -> int:
    arr = _as_entries(m)
    return arr.shape[1] - rank(arr)


@dataclass(frozen=True)
class FiniteComplex:
    """Cochain complex ``V^s -> V^{s+1} -> ... -> V^{s+N}`` over Q.

    ``differentials[i]`` is the matrix of ``d: V^{s+i} -> V^{s+i+1}`` with shape
    ``(dims[i+1], dims[i])``; there are ``len(dims) - 1`` of them.
    """

    start: int
    dims: tuple[int, ...]
    differentials: tuple[RationalMatrix, ...]

    def __post_init__(self):
        if len(self.differentials) != max(len(self.dims) - 1, 0):
            raise ComplexError(
                f"{len(self.dims)} spaces need {max(len(self.dims) - 1, 0)} differentials, "
                f"got {len(self.differentials)}"
            )
        for i, d in enumerate(self.differentials):
            if (d.rows, d.cols) != (self.dims[i + 1], self.dims[i]):
                raise ComplexError(
                    f"d in degree {self.start + i} has shape {d.rows}x{d.cols}, "
                    f"expected {self.dims[i + 1]}x{self.dims[i]}",
                    degree=self.start + i,
                )

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.dims))

    @classmethod
    def from_matrices(cls, start: int, dims: Iterable[int], mats: Iterable) -> "FiniteComplex":
        mats = tuple(m if isinstance(m, RationalMatrix) else RationalMatrix.from_rows(m) for m in mats)
        return cls(start, tuple(dims), mats)

    def check(self) -> None:
        for i in range(len(self.differentials) - 1):
            comp = self.differentials[i + 1] @ self.differentials[i]
            if not comp.is_zero():
                raise ComplexError(
                    f"d∘d != 0 starting in degree {self.start + i}", degree=self.start + i
                )

    def euler_characteristic(self) -> int:
        return sum((-1) ** (self.start + i) * d for i, d in enumerate(self.dims))


def homology_dims(c: FiniteComplex) -> tuple[int, ...]:
    """``dim ker d_n - rank d_{n-1}`` for every degree of ``c``."""
    c.check()
    ranks = [rank(d) for d in c.differentials]
    out = []
    for i, dim in enumerate(c.dims):
        r_out = ranks[i] if i < len(ranks) else 0
        r_in = ranks[i - 1] if i > 0 else 0
        out.append(dim - r_out - r_in)
    return tuple(out)
