"""The Hochschild cochain complex C^*(A, A) and its operations.

A cochain of degree ``n`` is stored as a dense coefficient tensor of shape
``(m,) * n + (m,)``: ``coeffs[i_1, ..., i_n, k]`` is the coefficient of ``e_k``
in ``x(e_{i_1}, ..., e_{i_n})``.  Degree-0 cochains are algebra elements.
Negative degrees occur as formal zero results (e.g. braces with more
arguments than slots) and carry an empty tensor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Sequence

import numpy as np

from .algebra import AlgebraElement, AssociativeAlgebra
from .exactq import FiniteComplex, RationalMatrix, exact, homology_dims, is_zero, object_array, zeros

COEFF_RANGE = (-3, 3)


class CochainError(ValueError):
    pass


def _shape(m: int, degree: int) -> tuple[int, ...]:
    return (m,) * (degree + 1) if degree >= 0 else (0,)


@dataclass(frozen=True, eq=False)
class Cochain:
    algebra: AssociativeAlgebra
    degree: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.coeffs.shape != _shape(self.algebra.dim, self.degree):
            raise CochainError(
                f"degree-{self.degree} cochain needs shape {_shape(self.algebra.dim, self.degree)}, "
                f"got {self.coeffs.shape}"
            )

    @classmethod
    def zero(cls, algebra: AssociativeAlgebra, degree: int) -> "Cochain":
        return cls(algebra, degree, zeros(_shape(algebra.dim, degree)))

    @classmethod
    def from_element(cls, u: AlgebraElement) -> "Cochain":
        return cls(u.algebra, 0, u.coeffs.copy())

    @classmethod
    def from_array(cls, algebra: AssociativeAlgebra, degree: int, values) -> "Cochain":
        return cls(algebra, degree, object_array(values, _shape(algebra.dim, degree)))

    def as_element(self) -> AlgebraElement:
        if self.degree != 0:
            raise CochainError("only degree-0 cochains are algebra elements")
        return AlgebraElement(self.algebra, self.coeffs.copy())

    def __call__(self, *args: AlgebraElement) -> AlgebraElement:
        if len(args) != self.degree:
            raise CochainError(f"degree-{self.degree} cochain applied to {len(args)} arguments")
        t = self.coeffs
        for a in args:
            t = np.tensordot(a.coeffs, t, axes=([0], [0]))
        return AlgebraElement(self.algebra, t)

    def is_zero(self) -> bool:
        return is_zero(self.coeffs)

    def _same(self, other: "Cochain"):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise CochainError("cochains over different algebras")
        if other.degree != self.degree:
            raise CochainError(f"cannot add degrees {self.degree} and {other.degree}")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.algebra, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.algebra, self.degree, self.coeffs - other.coeffs)

    def __neg__(self) -> "Cochain":
        return Cochain(self.algebra, self.degree, -self.coeffs)

    def scale(self, s) -> "Cochain":
        s = exact(s)
        if s == 1:
            return self
        return Cochain(self.algebra, self.degree, self.coeffs * s)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.algebra == other.algebra
            and bool(np.all(self.coeffs == other.coeffs))
        )

    def __hash__(self):
        return hash((self.degree, tuple(self.coeffs.reshape(-1))))

    def __repr__(self):
        nz = sum(1 for v in self.coeffs.reshape(-1) if v != 0)
        return f"Cochain(degree={self.degree}, dim={self.algebra.dim}, nonzero={nz})"


def _check_same_algebra(*xs: Cochain) -> AssociativeAlgebra:
    a = xs[0].algebra
    for x in xs[1:]:
        if x.algebra is not a and x.algebra != a:
            raise CochainError("cochains over different algebras")
    return a


def differential(x: Cochain) -> Cochain:
    """Hochschild coboundary.

    (dx)(a_1..a_{n+1}) = a_1 x(a_2..) + sum_i (-1)^i x(.., a_i a_{i+1}, ..) - (-1)^n x(a_1..a_n) a_{n+1}
    """
    a, n = x.algebra, x.degree
    if n < 0:
        return Cochain.zero(a, n + 1)
    c, t = a.table, x.coeffs
    out = np.moveaxis(np.tensordot(t, c, axes=([n], [1])), n, 0)
    for i in range(1, n + 1):
        term = np.tensordot(c, t, axes=([2], [i - 1]))
        term = np.moveaxis(term, [0, 1], [i - 1, i])
        out = out + term if i % 2 == 0 else out - term
    last = np.tensordot(t, c, axes=([n], [0]))
    out = out + last if n % 2 else out - last
    return Cochain(a, n + 1, out)


def cup(x: Cochain, y: Cochain, table: np.ndarray | None = None) -> Cochain:
    """(x.y)(a_1..a_{k+l}) = x(a_1..a_k) y(a_{k+1}..a_{k+l}).

    ``table`` overrides the structure constants used for the outer product;
    only the mutation tests need this.
    """
    a = _check_same_algebra(x, y)
    p, q = x.degree, y.degree
    if p < 0 or q < 0:
        return Cochain.zero(a, p + q)
    c = a.table if table is None else table
    t = np.tensordot(x.coeffs, c, axes=([p], [0]))  # I + (j, k)
    t = np.tensordot(t, y.coeffs, axes=([p], [q]))  # I + (k,) + J
    return Cochain(a, p + q, np.moveaxis(t, p, -1))


def insert(x: Cochain, slot: int, y: Cochain) -> Cochain:
    """Plain partial composition: y substituted into argument ``slot`` (0-based) of x."""
    a = x.algebra
    n, k = x.degree, y.degree
    if not 0 <= slot < n:
        raise CochainError(f"slot {slot} out of range for degree {n}")
    t = np.tensordot(y.coeffs, x.coeffs, axes=([k], [slot]))
    t = np.moveaxis(t, list(range(k)), list(range(slot, slot + k)))
    return Cochain(a, n - 1 + k, t)


def brace_sign(x_degree: int, degrees: Sequence[int], slots: Sequence[int]) -> int:
    """(-1)^eps with eps = sum_p (|x_p| - 1) i_p, i_p = number of a's before x_p."""
    eps = 0
    consumed = 0
    for p, (d, s) in enumerate(zip(degrees, slots)):
        i_p = s - p + consumed
        eps += (d - 1) * i_p
        consumed += d
    return -1 if eps % 2 else 1


def braces(x: Cochain, args: Sequence[Cochain]) -> Cochain:
    """{x}{x_1, ..., x_n}: signed sum over order-preserving substitutions."""
    args = list(args)
    if not args:
        return x
    a = _check_same_algebra(x, *args)
    n = len(args)
    degs = [y.degree for y in args]
    out_degree = x.degree + sum(degs) - n
    result = Cochain.zero(a, out_degree)
    if x.degree < n or any(d < 0 for d in degs):
        return result
    acc = result.coeffs
    for slots in combinations(range(x.degree), n):
        term = x
        for s, y in zip(reversed(slots), reversed(args)):
            term = insert(term, s, y)
        if brace_sign(x.degree, degs, slots) > 0:
            acc = acc + term.coeffs
        else:
            acc = acc - term.coeffs
    return Cochain(a, out_degree, acc)


def circle(x: Cochain, y: Cochain) -> Cochain:
    return braces(x, [y])


def bracket(x: Cochain, y: Cochain) -> Cochain:
    """[x, y] = x∘y - (-1)^{(|x|-1)(|y|-1)} y∘x."""
    s = -1 if ((x.degree - 1) * (y.degree - 1)) % 2 == 0 else 1
    return circle(x, y) + circle(y, x).scale(s)


def random_cochain(a: AssociativeAlgebra, degree: int, seed: int) -> Cochain:
    """Integer coefficients drawn uniformly from [-3, 3].

    Uses numpy's PCG64 bit generator seeded with ``seed``, so the result depends
    only on ``(a.dim, degree, seed)``.
    """
    if degree < 0:
        raise CochainError("degree must be non-negative")
    rng = np.random.Generator(np.random.PCG64(seed))
    lo, hi = COEFF_RANGE
    vals = rng.integers(lo, hi + 1, size=_shape(a.dim, degree))
    return Cochain(a, degree, object_array(vals.tolist(), vals.shape))


def basis_cochain(a: AssociativeAlgebra, degree: int, flat_index: int) -> Cochain:
    t = zeros(_shape(a.dim, degree))
    t.reshape(-1)[flat_index] = 1
    return Cochain(a, degree, t)


def differential_matrix(a: AssociativeAlgebra, degree: int) -> RationalMatrix:
    """Matrix of d: C^n -> C^{n+1} in the monomial basis (row-major flattening)."""
    src = a.dim ** (degree + 1)
    tgt = a.dim ** (degree + 2)
    mat = zeros((tgt, src))
    for j in range(src):
        mat[:, j] = differential(basis_cochain(a, degree, j)).coeffs.reshape(-1)
    return RationalMatrix(tgt, src, mat)


def hochschild_complex(a: AssociativeAlgebra, max_degree: int) -> FiniteComplex:
    """C^0 -> ... -> C^{max_degree + 1} (the top space is needed for ker d)."""
    if max_degree < 0:
        raise CochainError("max_degree must be non-negative")
    dims = tuple(a.dim ** (n + 1) for n in range(max_degree + 2))
    mats = tuple(differential_matrix(a, n) for n in range(max_degree + 1))
    return FiniteComplex(0, dims, mats)


def cohomology_dims(a: AssociativeAlgebra, max_degree: int) -> tuple[int, ...]:
    """dim HH^n(A, A) for n = 0..max_degree."""
    return homology_dims(hochschild_complex(a, max_degree))[: max_degree + 1]


# ---------------------------------------------------------------------------
# identity residuals; each returns LHS - RHS, which must be the zero cochain


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


def _sum(terms: Sequence[Cochain], a: AssociativeAlgebra, degree: int) -> Cochain:
    out = Cochain.zero(a, degree)
    for t in terms:
        out = out + t
    return out


def d_squared_residual(x: Cochain) -> Cochain:
    return differential(differential(x))


def derivation_residual(x: Cochain, y: Cochain) -> Cochain:
    """d(xy) - (dx)y - (-1)^{|x|} x(dy)."""
    lhs = differential(cup(x, y))
    return lhs - cup(differential(x), y) - cup(x, differential(y)).scale(_sgn(x.degree))


def cup_assoc_residual(x: Cochain, y: Cochain, z: Cochain) -> Cochain:
    return cup(cup(x, y), z) - cup(x, cup(y, z))


def pre_jacobi_residual(x: Cochain, ys: Sequence[Cochain], zs: Sequence[Cochain]) -> Cochain:
    """sum (-1)^eps {x}{z.., {y_1}{z..}, .., {y_l}{z..}, .., z_m} - {{x}{y}}{z}.

    y_p absorbs the consecutive run z_{i_p+1..j_p}; eps = sum_p (|y_p|-1) sum_{q<=i_p} (|z_q|-1).
    """
    ys, zs = list(ys), list(zs)
    l, m = len(ys), len(zs)
    target = braces(braces(x, ys), zs)
    terms = []
    for cuts in combinations_with_replacement(range(m + 1), 2 * l):
        args: list[Cochain] = []
        prev, eps = 0, 0
        for p in range(l):
            i, j = cuts[2 * p], cuts[2 * p + 1]
            args += zs[prev:i]
            args.append(braces(ys[p], zs[i:j]))
            prev = j
            eps += (ys[p].degree - 1) * sum(z.degree - 1 for z in zs[:i])
        args += zs[prev:]
        terms.append(braces(x, args).scale(_sgn(eps)))
    return _sum(terms, x.algebra, target.degree) - target


def brace_differential_residual(x: Cochain, ys: Sequence[Cochain]) -> Cochain:
    """d{x}{y_1..y_l} against its expansion, l >= 1.

    With Y_q = |y_q| - 1 the expansion is
      (-1)^{sum Y} {dx}{y}
      + sum_i (-1)^{Y_{i+1} + .. + Y_l} {x}{.., dy_i, ..}
      + sum_i (-1)^{Y_i |y_{i+1}| + Y_{i+2} + .. + Y_l} {x}{.., y_i y_{i+1}, ..}
      - (-1)^{Y_1 (1 + Y_2 + .. + Y_l)} y_1 {x}{y_2..y_l}
      - (-1)^{(|x| - 1 + Y_1 + .. + Y_{l-1}) |y_l|} {x}{y_1..y_{l-1}} y_l
    which is the brace form of the Leibniz rule for the realization in binfty.
    """
    ys = list(ys)
    if not ys:
        raise CochainError("need at least one brace argument")
    l = len(ys)
    Y = [y.degree - 1 for y in ys]
    lhs = differential(braces(x, ys))
    terms = [braces(differential(x), ys).scale(_sgn(sum(Y)))]
    for i in range(l):
        args = ys[:i] + [differential(ys[i])] + ys[i + 1:]
        terms.append(braces(x, args).scale(_sgn(sum(Y[i + 1:]))))
    for i in range(l - 1):
        args = ys[:i] + [cup(ys[i], ys[i + 1])] + ys[i + 2:]
        terms.append(braces(x, args).scale(_sgn(Y[i] * (Y[i + 1] + 1) + sum(Y[i + 2:]))))
    terms.append(cup(ys[0], braces(x, ys[1:])).scale(-_sgn(Y[0] * (1 + sum(Y[1:])))))
    terms.append(cup(braces(x, ys[:-1]), ys[-1]).scale(-_sgn((x.degree - 1 + sum(Y[:-1])) * (Y[-1] + 1))))
    return lhs - _sum(terms, x.algebra, lhs.degree)


def cup_brace_residual(x1: Cochain, x2: Cochain, ys: Sequence[Cochain]) -> Cochain:
    """{x1 x2}{y} - sum_j (-1)^{(|x1| + Y_1..Y_j)(Y_{j+1}..Y_l)} ({x1}{y_1..y_j}) ({x2}{y_{j+1}..y_l})."""
    ys = list(ys)
    Y = [y.degree - 1 for y in ys]
    lhs = braces(cup(x1, x2), ys)
    terms = []
    for j in range(len(ys) + 1):
        s = _sgn((x1.degree + sum(Y[:j])) * sum(Y[j:]))
        terms.append(cup(braces(x1, ys[:j]), braces(x2, ys[j:])).scale(s))
    return lhs - _sum(terms, x1.algebra, lhs.degree)


def antisymmetry_residual(x: Cochain, y: Cochain) -> Cochain:
    return bracket(x, y) + bracket(y, x).scale(_sgn((x.degree - 1) * (y.degree - 1)))


def jacobi_residual(x: Cochain, y: Cochain, z: Cochain) -> Cochain:
    """Graded Jacobi on C[1]: cyclic sum of (-1)^{(|x|-1)(|z|-1)} [x,[y,z]]."""
    X, Y, Z = x.degree - 1, y.degree - 1, z.degree - 1
    return (
        bracket(x, bracket(y, z)).scale(_sgn(X * Z))
        + bracket(y, bracket(z, x)).scale(_sgn(Y * X))
        + bracket(z, bracket(x, y)).scale(_sgn(Z * Y))
    )


def bracket_differential_residual(x: Cochain, y: Cochain) -> Cochain:
    """d[x,y] - [x,dy] - (-1)^{|y|-1} [dx,y].

    With the coboundary as normalized here d acts on the bracket from the
    right; the left-handed rule d[x,y] = [dx,y] + (-1)^{|x|-1}[x,dy] fails
    already for |x| = 0, |y| = 1 (see ``left_bracket_differential_residual``).
    """
    return differential(bracket(x, y)) - bracket(x, differential(y)) - bracket(differential(x), y).scale(
        _sgn(y.degree - 1)
    )


def left_bracket_differential_residual(x: Cochain, y: Cochain) -> Cochain:
    return differential(bracket(x, y)) - bracket(differential(x), y) - bracket(x, differential(y)).scale(
        _sgn(x.degree - 1)
    )
