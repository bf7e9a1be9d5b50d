"""Finite-dimensional unital associative algebras over Q given by structure constants."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exactq import exact, format_rational, is_zero, object_array, parse_rational, zeros

BUILTIN_NAMES = ("ground_field", "dual_numbers", "mat2", "group_z2", "trunc_poly3")


class AlgebraError(ValueError):
    """Malformed algebra description or failed validation."""


@dataclass(frozen=True)
class Diagnostic:
    """Why a table of structure constants is not a unital associative algebra.

    ``indices`` are 0-based basis indices: the triple ``(i, j, k)`` with
    ``(e_i e_j) e_k != e_i (e_j e_k)`` for associativity failures, or ``(i,)``
    for the first basis element the unit fails to fix.
    """

    kind: str
    indices: tuple[int, ...]
    message: str


@dataclass(frozen=True, eq=False)
class AssociativeAlgebra:
    """``e_i e_j = sum_k table[i, j, k] e_k`` with unit ``sum_i unit[i] e_i``."""

    dim: int
    labels: tuple[str, ...]
    table: np.ndarray = field(repr=False)
    unit: tuple = field(repr=False)
    name: str = "custom"

    def __post_init__(self):
        if self.dim < 1:
            raise AlgebraError("dimension must be at least 1")
        if len(self.labels) != self.dim:
            raise AlgebraError(f"{len(self.labels)} labels for dimension {self.dim}")
        if self.table.shape != (self.dim,) * 3:
            raise AlgebraError(f"table shape {self.table.shape}, expected {(self.dim,) * 3}")
        if len(self.unit) != self.dim:
            raise AlgebraError(f"unit has length {len(self.unit)}, expected {self.dim}")

    def __eq__(self, other):
        if not isinstance(other, AssociativeAlgebra):
            return NotImplemented
        return (
            self.dim == other.dim
            and tuple(self.unit) == tuple(other.unit)
            and bool(np.all(self.table == other.table))
        )

    def __hash__(self):
        return hash((self.dim, tuple(self.unit), tuple(self.table.reshape(-1))))

    def element(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self, object_array(coeffs))

    def basis(self, i: int) -> "AlgebraElement":
        v = zeros(self.dim)
        v[i] = 1
        return AlgebraElement(self, v)

    def one(self) -> "AlgebraElement":
        return self.element(self.unit)

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: AssociativeAlgebra
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != (self.algebra.dim,):
            raise AlgebraError("coefficient vector does not match the algebra dimension")

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraError("elements of different algebras")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return AlgebraElement(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return AlgebraElement(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return AlgebraElement(self.algebra, self.coeffs * exact(other))

    def __rmul__(self, s):
        return AlgebraElement(self.algebra, self.coeffs * exact(s))

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra == other.algebra and bool(np.all(self.coeffs == other.coeffs))

    def __repr__(self):
        terms = [
            f"{format_rational(c)}*{lab}" for c, lab in zip(self.coeffs, self.algebra.labels) if c != 0
        ]
        return " + ".join(terms) if terms else "0"


def multiply(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    if u.algebra is not v.algebra and u.algebra != v.algebra:
        raise AlgebraError("elements of different algebras")
    t = np.tensordot(u.coeffs, u.algebra.table, axes=([0], [0]))
    return AlgebraElement(u.algebra, np.tensordot(v.coeffs, t, axes=([0], [0])))


def validate(a: AssociativeAlgebra) -> Diagnostic | None:
    """Return ``None`` when ``a`` is associative and unital, else the first failure."""
    c = a.table
    # (e_i e_j) e_k and e_i (e_j e_k), indexed [i, j, k, q]
    left = np.tensordot(c, c, axes=([2], [0]))
    right = np.transpose(np.tensordot(c, c, axes=([1], [2])), (0, 2, 3, 1))
    m = a.dim
    for i in range(m):
        for j in range(m):
            for k in range(m):
                if not is_zero(left[i, j, k] - right[i, j, k]):
                    return Diagnostic(
                        "associativity",
                        (i, j, k),
                        f"({a.labels[i]}*{a.labels[j]})*{a.labels[k]} != "
                        f"{a.labels[i]}*({a.labels[j]}*{a.labels[k]})",
                    )
    u = object_array(a.unit)
    if is_zero(u):
        return Diagnostic("unit", (), "unit axiom: unit vector is zero")
    lu = np.tensordot(u, c, axes=([0], [0]))  # [j, k]: 1 * e_j
    ru = np.tensordot(u, c, axes=([0], [1]))  # [i, k]: e_i * 1
    for i in range(m):
        e = zeros(m)
        e[i] = 1
        if not is_zero(lu[i] - e) or not is_zero(ru[i] - e):
            return Diagnostic("unit", (i,), f"unit axiom fails on {a.labels[i]}")
    return None


def _from_products(name, labels, unit, products) -> AssociativeAlgebra:
    m = len(labels)
    table = zeros((m, m, m))
    for (i, j), out in products.items():
        for k, v in out.items():
            table[i, j, k] = v
    return AssociativeAlgebra(m, tuple(labels), table, tuple(unit), name)


def builtin(name: str) -> AssociativeAlgebra:
    if name == "ground_field":
        return _from_products(name, ["1"], [1], {(0, 0): {0: 1}})
    if name == "dual_numbers":
        # basis 1, eps with eps^2 = 0
        return _from_products(
            name, ["1", "eps"], [1, 0], {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
        )
    if name == "mat2":
        labels = ["e11", "e12", "e21", "e22"]
        idx = {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 3}
        prods = {}
        for (a, b), i in idx.items():
            for (c, d), j in idx.items():
                if b == c:
                    prods[(i, j)] = {idx[(a, d)]: 1}
        return _from_products(name, labels, [1, 0, 0, 1], prods)
    if name == "group_z2":
        return _from_products(
            name,
            ["1", "g"],
            [1, 0],
            {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: 1}},
        )
    if name == "trunc_poly3":
        prods = {(i, j): {i + j: 1} for i in range(3) for j in range(3) if i + j < 3}
        return _from_products(name, ["1", "x", "x2"], [1, 0, 0], prods)
    raise AlgebraError(f"unknown builtin algebra {name!r}; choose from {', '.join(BUILTIN_NAMES)}")


def from_spec(document) -> AssociativeAlgebra:
    """Build and validate an algebra from its JSON description (text, path or dict).

    Format: ``{"dim": m, "labels": [...], "unit": [...], "table": m x m x m}`` with
    rationals written as ``"p"`` or ``"p/q"`` strings (plain integers accepted).
    """
    if isinstance(document, Path):
        document = document.read_text()
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"parse error: {exc}") from exc
    if not isinstance(document, dict):
        raise AlgebraError("parse error: expected a JSON object")
    try:
        m = int(document["dim"])
        labels = document.get("labels") or [f"e{i + 1}" for i in range(m)]
        unit = [exact(parse_rational(v)) for v in document["unit"]]
        raw = document["table"]
        table = zeros((m, m, m))
        if len(raw) != m or any(len(r) != m for r in raw) or any(len(x) != m for r in raw for x in r):
            raise AlgebraError(f"parse error: table must be {m}x{m}x{m}")
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    table[i, j, k] = exact(parse_rational(raw[i][j][k]))
    except AlgebraError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise AlgebraError(f"parse error: {exc}") from exc
    alg = AssociativeAlgebra(m, tuple(str(s) for s in labels), table, tuple(unit), document.get("name", "custom"))
    diag = validate(alg)
    if diag is not None:
        raise AlgebraError(f"validation failed ({diag.kind}): {diag.message}")
    return alg


def to_spec(a: AssociativeAlgebra) -> dict:
    return {
        "dim": a.dim,
        "labels": list(a.labels),
        "unit": [format_rational(v) for v in a.unit],
        "table": [[[format_rational(v) for v in row] for row in plane] for plane in a.table.tolist()],
    }
