"""Fox-Neuwirth cells, the free graded operad on them, and its evaluation on cochains.

Trees are nested tuples.  A leaf is its label (a positive int); a vertex is a
tuple of blocks, each block a tuple of children.  A vertex therefore *is* a
cell whose labels have been replaced by the subtrees plugged into them, so
the (sign-free) symmetric group action on cells is built into the encoding.

The monomial attached to a tree is the planar composite of the standard cells
(blocks of sizes s_1, s_2, ... labelled 1..n left to right) with decorations
tensored in pre-order, followed by the leaf relabelling.  Grading is
cohomological: a cell with n labels and b blocks has degree 3 - n - b.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator, Mapping, Sequence, Union


from .binfty import Realization, block_splits, koszul_sign, _interleave_order
from .exactq import FiniteComplex, RationalMatrix, exact, format_rational, homology_dims, zeros
from .hochschild import Cochain

Tree = Union[int, tuple]


class OperadError(ValueError):
    pass


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


# ---------------------------------------------------------------------------
# cells


@dataclass(frozen=True)
class FoxNeuwirthCell:
    """Ordered partition of {1..n} into ordered blocks, e.g. ((3,), (2, 1)) = {3}{2,1}."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        labels = [x for b in self.blocks for x in b]
        if any(len(b) == 0 for b in self.blocks):
            raise OperadError("blocks must be nonempty")
        if sorted(labels) != list(range(1, len(labels) + 1)):
            raise OperadError(f"labels {labels} are not exactly 1..{len(labels)}")
        if len(labels) < 2:
            raise OperadError("cells need n >= 2")

    @classmethod
    def parse(cls, text: str) -> "FoxNeuwirthCell":
        """Parse the literal syntax "3|2,1"."""
        try:
            blocks = tuple(tuple(int(v) for v in part.split(",")) for part in text.strip().split("|"))
        except ValueError as exc:
            raise OperadError(f"cannot parse cell {text!r}") from exc
        return cls(blocks)

    @classmethod
    def standard(cls, sizes: Sequence[int]) -> "FoxNeuwirthCell":
        out, o = [], 0
        for s in sizes:
            out.append(tuple(range(o + 1, o + s + 1)))
            o += s
        return cls(tuple(out))

    def __str__(self):
        return "|".join(",".join(str(v) for v in b) for b in self.blocks)

    def braces_str(self) -> str:
        return "".join("{" + ",".join(str(v) for v in b) + "}" for b in self.blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def stratum_class(self) -> int:
        return min(len(self.blocks), 3)

    @property
    def degree(self) -> int:
        return -cell_dimension(self)

    def as_tree(self) -> tuple:
        return self.blocks

    def permuted(self, perm: Mapping[int, int]) -> "FoxNeuwirthCell":
        """Relabel i -> perm[i]."""
        return FoxNeuwirthCell(tuple(tuple(perm[v] for v in b) for b in self.blocks))


def cell_dimension(c: FoxNeuwirthCell) -> int:
    return c.n + len(c.blocks) - 3


def enumerate_cells(n: int, stratum_class: int) -> list[FoxNeuwirthCell]:
    """All one-block (class 1) or two-block (class 2) cells on {1..n}."""
    if n < 2:
        raise OperadError("n must be at least 2")
    if stratum_class == 1:
        return [FoxNeuwirthCell((p,)) for p in permutations(range(1, n + 1))]
    if stratum_class == 2:
        return [
            FoxNeuwirthCell((p[:k], p[k:]))
            for p in permutations(range(1, n + 1))
            for k in range(1, n)
        ]
    raise OperadError("only classes 1 and 2 can be enumerated; class 3 is unbounded in block count")


def cells_with_blocks(n: int, b: int) -> list[FoxNeuwirthCell]:
    """Cells on {1..n} with exactly ``b`` nonempty blocks."""
    if not 1 <= b <= n:
        raise OperadError(f"cannot split {n} labels into {b} nonempty blocks")
    out = []
    for p in permutations(range(1, n + 1)):
        for cuts in combinations(range(1, n), b - 1):
            edges = (0,) + cuts + (n,)
            out.append(FoxNeuwirthCell(tuple(p[edges[i]:edges[i + 1]] for i in range(b))))
    return out


# ---------------------------------------------------------------------------
# trees


def is_leaf(t: Tree) -> bool:
    return isinstance(t, int)


def children(v: tuple) -> list[Tree]:
    return [c for b in v for c in b]


def leaves(t: Tree) -> list[int]:
    if is_leaf(t):
        return [t]
    return [x for c in children(t) for x in leaves(c)]


def arity(t: Tree) -> int:
    return len(leaves(t))


def vertex_degree(v: tuple) -> int:
    return 3 - len(children(v)) - len(v)


def vertices(t: Tree) -> list[tuple]:
    """Pre-order list of vertices."""
    if is_leaf(t):
        return []
    out = [t]
    for c in children(t):
        out += vertices(c)
    return out


@lru_cache(maxsize=None)
def degree(t: Tree) -> int:
    if is_leaf(t):
        return 0
    return vertex_degree(t) + sum(degree(c) for c in children(t))


def relabel(t: Tree, mapping: Mapping[int, int]) -> Tree:
    if is_leaf(t):
        return mapping[t]
    return tuple(tuple(relabel(c, mapping) for c in b) for b in t)


@dataclass(frozen=True)
class NTree:
    """An n-tree: rooted, n labelled leaves, every vertex with at least two inputs."""

    shape: Tree

    def __post_init__(self):
        if sorted(leaves(self.shape)) != list(range(1, arity(self.shape) + 1)):
            raise OperadError("leaf labels must be exactly 1..n")
        for v in vertices(self.shape):
            if len(children(v)) < 2:
                raise OperadError("every vertex needs at least two inputs")

    @property
    def n(self) -> int:
        return arity(self.shape)

    @property
    def vertex_count(self) -> int:
        return len(vertices(self.shape))

    @property
    def tree_degree(self) -> int:
        return self.n - self.vertex_count - 1

    @property
    def decorations(self) -> list[FoxNeuwirthCell]:
        """Standard-form cell shape at each vertex, pre-order."""
        return [FoxNeuwirthCell.standard([len(b) for b in v]) for v in vertices(self.shape)]


def _graft(x: Tree, i: int, y: Tree) -> tuple[Tree, int]:
    """Plug y into the leaf labelled i of x; returns (tree, sign exponent)."""
    m = arity(y)
    after = 0
    found = False

    def walk(t: Tree) -> Tree:
        nonlocal after, found
        if is_leaf(t):
            if t == i:
                found = True
                return relabel(y, {v: v + i - 1 for v in range(1, m + 1)})
            return t if t < i else t + m - 1
        if found:
            after += vertex_degree(t)
        return tuple(tuple(walk(c) for c in b) for b in t)

    out = walk(x)
    if not found:
        raise OperadError(f"no leaf {i}")
    return out, degree(y) * after


# ---------------------------------------------------------------------------
# elements


class OperadElement:
    """Exact rational combination of decorated trees of one arity."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Tree, object] | None = None):
        self.n = n
        clean = {}
        for t, c in (terms or {}).items():
            c = exact(c)
            if c != 0:
                if arity(t) != n:
                    raise OperadError(f"tree of arity {arity(t)} in arity-{n} element")
                clean[t] = c
        self.terms = clean

    @classmethod
    def tree(cls, t: Tree, coef=1) -> "OperadElement":
        return cls(arity(t), {t: coef})

    @classmethod
    def generator(cls, c: FoxNeuwirthCell | str) -> "OperadElement":
        if isinstance(c, str):
            c = FoxNeuwirthCell.parse(c)
        return cls.tree(c.as_tree())

    @classmethod
    def identity(cls) -> "OperadElement":
        return cls(1, {1: 1})

    @classmethod
    def zero(cls, n: int) -> "OperadElement":
        return cls(n, {})

    def degrees(self) -> set[int]:
        return {degree(t) for t in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise OperadError(f"element is not homogeneous: degrees {sorted(ds)}")
        return ds.pop()

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "OperadElement") -> "OperadElement":
        if other.n != self.n:
            raise OperadError("arities differ")
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, 0) + c
        return OperadElement(self.n, out)

    def __sub__(self, other: "OperadElement") -> "OperadElement":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "OperadElement":
        s = exact(s)
        return OperadElement(self.n, {t: c * s for t, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, OperadElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        out = ""
        for text, c in sorted((format_tree(t), c) for t, c in self.terms.items()):
            mag = "" if abs(c) == 1 else format_rational(abs(c)) + "*"
            if not out:
                out = ("-" if c < 0 else "") + mag + text
            else:
                out += (" - " if c < 0 else " + ") + mag + text
        return out


def format_tree(t: Tree) -> str:
    if is_leaf(t):
        return str(t)
    return "".join("{" + ",".join(format_tree(c) for c in b) + "}" for b in t)


def compose(x: OperadElement, i: int, y: OperadElement) -> OperadElement:
    """Partial composition x o_i y: graft into the leaf labelled i, Koszul sign in pre-order."""
    if not 1 <= i <= x.n:
        raise OperadError(f"slot {i} out of range for arity {x.n}")
    out: dict[Tree, object] = {}
    for tx, cx in x.terms.items():
        for ty, cy in y.terms.items():
            t, e = _graft(tx, i, ty)
            out[t] = out.get(t, 0) + _sgn(e) * cx * cy
    return OperadElement(x.n + y.n - 1, out)


def gamma(x: OperadElement, ys: Sequence[OperadElement]) -> OperadElement:
    """Full composition gamma(x; y_1, ..., y_n) by forward partial compositions."""
    if len(ys) != x.n:
        raise OperadError(f"need {x.n} inputs, got {len(ys)}")
    pos = 1
    for y in ys:
        x = compose(x, pos, y)
        pos += y.n
    return x


def relabel_element(e: OperadElement, mapping: Mapping[int, int]) -> OperadElement:
    return OperadElement(e.n, {relabel(t, mapping): c for t, c in e.terms.items()})


# ---------------------------------------------------------------------------
# generator differentials
#
# Each standard generator has its differential read off an identity among
# bar-form operations on the shifted complex, where every term has
# coefficient +1 and inputs are permuted with Koszul signs.  A term there is
# gamma_W(outer; inner_1..inner_r) . sigma; it is transported to the cell
# operad with the suspension sign c and sgn(sigma).


def _w_degree(sizes) -> int:
    return 0 if sizes is None else (1 if len(sizes) == 1 else 0)


def _w_arity(sizes) -> int:
    return 1 if sizes is None else sum(sizes)


def _perm_parity(order: Sequence[int]) -> int:
    return sum(1 for p in range(len(order)) for q in range(p + 1, len(order)) if order[p] > order[q])


def _std_vertex(sizes: Sequence[int], kids: Sequence[Tree]) -> tuple:
    out, o = [], 0
    for s in sizes:
        out.append(tuple(kids[o:o + s]))
        o += s
    return tuple(out)


def _transport(outer, inners, order) -> tuple[Tree, int]:
    """Tree and sign for gamma_W(outer; inners) . sigma, inner None = identity."""
    r = len(inners)
    e = 0
    for q, g in enumerate(inners, 1):
        e += (_w_degree(g) + 1 - _w_arity(g)) * (r - q)
        e += sum(_w_degree(h) for h in inners[q:]) * _w_arity(g)
    e += _perm_parity(order)
    pos = 0
    kids: list[Tree] = []
    for g in inners:
        if g is None:
            kids.append(order[pos] + 1)
            pos += 1
        else:
            m = sum(g)
            kids.append(_std_vertex(g, [order[pos + t] + 1 for t in range(m)]))
            pos += m
    return _std_vertex(outer, kids), e


def _inner_gen(k: int, l: int):
    """Block (k, l) of a splitting: identity, a two-block generator, or 'zero'."""
    if (k, l) in ((1, 0), (0, 1)):
        return None
    if k >= 1 and l >= 1:
        return (k, l)
    return "zero"


def _w_terms(sizes: tuple[int, ...]) -> Iterator[tuple[int, tuple, list, list]]:
    """(coef, outer, inners, order) for d of the standard generator of shape ``sizes``."""
    if len(sizes) == 1:
        n = sizes[0]
        for i in range(2, n):
            j = n + 1 - i
            for k in range(0, n - j + 1):
                inners = [None] * k + [(j,)] + [None] * (i - k - 1)
                yield -1, (i,), inners, list(range(n))
    elif len(sizes) == 2:
        k, l = sizes
        n = k + l
        for r in range(2, k + 1):
            for i in range(0, k - r + 1):
                inners = [None] * i + [(r,)] + [None] * (k - r - i + l)
                yield 1, (k - r + 1, l), inners, list(range(n))
        for s in range(2, l + 1):
            for i in range(0, l - s + 1):
                inners = [None] * (k + i) + [(s,)] + [None] * (l - s - i)
                yield 1, (k, l - s + 1), inners, list(range(n))
        for nb in range(2, n + 1):
            for blocks in block_splits(k, l, nb):
                inners = [_inner_gen(x, y) for x, y in blocks]
                if "zero" in inners:
                    continue
                yield -1, (nb,), inners, _interleave_order(k, blocks)
    elif len(sizes) == 3:
        k, l, m = sizes
        n = k + l + m
        for nb in range(1, l + m + 1):
            for blocks in block_splits(l, m, nb):
                inners = [_inner_gen(x, y) for x, y in blocks]
                if "zero" in inners:
                    continue
                order = list(range(k)) + [k + v for v in _interleave_order(l, blocks)]
                yield 1, (k, nb), [None] * k + inners, order
        for nb in range(1, k + l + 1):
            for blocks in block_splits(k, l, nb):
                inners = [_inner_gen(x, y) for x, y in blocks]
                if "zero" in inners:
                    continue
                order = _interleave_order(k, blocks) + list(range(k + l, n))
                yield -1, (nb, m), inners + [None] * m, order
    else:
        raise OperadError("cells with four or more blocks are not generators")


def _orientation(sizes: Sequence[int]) -> int:
    """-1 on two-block generators, +1 otherwise.

    Rescaling generators by these signs is an automorphism of the free operad;
    conjugating by it orients d{1}{2} as {1,2} - {2,1}.
    """
    return -1 if len(sizes) == 2 else 1


def _tree_orientation(t: Tree) -> int:
    s = 1
    for v in vertices(t):
        s *= _orientation([len(b) for b in v])
    return s


@lru_cache(maxsize=None)
def _std_differential(sizes: tuple[int, ...]) -> tuple[tuple[Tree, int], ...]:
    out: dict[Tree, int] = {}
    for coef, outer, inners, order in _w_terms(sizes):
        t, e = _transport(outer, inners, order)
        out[t] = out.get(t, 0) + coef * _sgn(e) * _tree_orientation(t) * _orientation(sizes)
    return tuple((t, c) for t, c in out.items() if c != 0)


@lru_cache(maxsize=None)
def _tree_differential(t: Tree) -> tuple[tuple[Tree, object], ...]:
    if is_leaf(t):
        return ()
    sizes = tuple(len(b) for b in t)
    kids = children(t)
    n_root = len(kids)
    subs: list[OperadElement] = []
    rho: dict[int, int] = {}
    offset = 0
    for c in kids:
        labs = sorted(leaves(c))
        norm = {v: idx + 1 for idx, v in enumerate(labs)}
        subs.append(OperadElement.tree(relabel(c, norm)))
        for idx, v in enumerate(labs):
            rho[offset + idx + 1] = v
        offset += len(labs)
    std = OperadElement.tree(_std_vertex(sizes, list(range(1, n_root + 1))))
    total = OperadElement.zero(offset)
    d_root = OperadElement(n_root, dict(_std_differential(sizes)))
    if d_root.terms:
        total = total + gamma(d_root, subs)
    # d gamma(v; S) = gamma(dv; S) + sum_t (-1)^{|v| + |S_1| + .. + |S_{t-1}|} gamma(v; .., dS_t, ..)
    sign_exp = vertex_degree(t)
    for idx, (s, c) in enumerate(zip(subs, kids)):
        ds = operad_differential(s)
        if ds.terms:
            args = subs[:idx] + [ds] + subs[idx + 1:]
            total = total + gamma(std, args).scale(_sgn(sign_exp))
        sign_exp += degree(c)
    return tuple(relabel_element(total, rho).terms.items())


def cell_differential(c: FoxNeuwirthCell | str) -> OperadElement:
    if isinstance(c, str):
        c = FoxNeuwirthCell.parse(c)
    if len(c.blocks) > 3:
        raise OperadError("differentials of cells with four or more blocks are not defined")
    return OperadElement(c.n, dict(_tree_differential(c.as_tree())))


def operad_differential(e: OperadElement) -> OperadElement:
    """Extension of the cell differential as a degree +1 derivation."""
    out: dict[Tree, object] = {}
    for t, c in e.terms.items():
        for s, k in _tree_differential(t):
            out[s] = out.get(s, 0) + c * k
    return OperadElement(e.n, out)


# ---------------------------------------------------------------------------
# evaluation on a realization


def _apply_generator(sizes: tuple[int, ...], r: Realization, args: Sequence[Cochain]) -> Cochain:
    n = sum(sizes)
    deg = sum(a.degree for a in args) + 3 - n - len(sizes)
    if len(sizes) == 1:
        return r.M(args)
    if len(sizes) == 2:
        s = -_sgn(sum((n - p) * a.degree for p, a in enumerate(args, 1)))
        return r.Mkl(args[: sizes[0]], args[sizes[0]:]).scale(s)
    return Cochain.zero(r.algebra, deg)


def _eval_planar(t: Tree, r: Realization, args: Sequence[Cochain]) -> Cochain:
    if is_leaf(t):
        return args[0]
    vals = []
    pos = 0
    e = 0
    seen = 0
    for c in children(t):
        m = arity(c)
        block = args[pos:pos + m]
        e += degree(c) * seen
        seen += sum(a.degree for a in block)
        vals.append(_eval_planar(c, r, block))
        pos += m
    return _apply_generator(tuple(len(b) for b in t), r, vals).scale(_sgn(e))


def evaluate(e: OperadElement, r: Realization, inputs: Sequence[Cochain], degree_hint: int | None = None) -> Cochain:
    """Interpret each tree as a composite operation and sum with coefficients.

    ``degree_hint`` is the operadic degree to use when ``e`` is zero.
    """
    inputs = list(inputs)
    if len(inputs) != e.n:
        raise OperadError(f"arity {e.n} element applied to {len(inputs)} inputs")
    out = None
    for t, c in e.terms.items():
        labs = leaves(t)
        order = [v - 1 for v in labs]
        s = koszul_sign([x.degree for x in inputs], order)
        val = _eval_planar(t, r, [inputs[i] for i in order]).scale(c * s)
        out = val if out is None else out + val
    if out is None:
        return Cochain.zero(r.algebra, sum(x.degree for x in inputs) + (degree_hint or 0))
    return out


def endomorphism_differential(e: OperadElement, r: Realization, inputs: Sequence[Cochain], deg: int) -> Cochain:
    """(d F - (-1)^{|F|} sum_i F o_i d) applied to inputs, F = evaluate(e)."""
    inputs = list(inputs)
    out = r.d(evaluate(e, r, inputs))
    seen = 0
    for i, x in enumerate(inputs):
        args = inputs[:i] + [r.d(x)] + inputs[i + 1:]
        term = evaluate(e, r, args).scale(_sgn(deg + seen))
        out = out - term
        seen += x.degree
    return out


def chain_map_residual(g: FoxNeuwirthCell | str, r: Realization, inputs: Sequence[Cochain]) -> Cochain:
    if isinstance(g, str):
        g = FoxNeuwirthCell.parse(g)
    if len(g.blocks) > 3:
        raise OperadError("chain-map check needs at most three blocks")
    lhs = evaluate(cell_differential(g), r, inputs, g.degree + 1)
    rhs = endomorphism_differential(OperadElement.generator(g), r, inputs, g.degree)
    return lhs - rhs


# ---------------------------------------------------------------------------
# arity two


def arity2_complex() -> tuple[FiniteComplex, list[list[FoxNeuwirthCell]]]:
    """Degrees -1 ({1}{2}, {2}{1}) and 0 ({1,2}, {2,1})."""
    low = enumerate_cells(2, 2)
    high = enumerate_cells(2, 1)
    mat = zeros((len(high), len(low)))
    for j, c in enumerate(low):
        d = cell_differential(c)
        for i, h in enumerate(high):
            mat[i, j] = d.terms.get(h.as_tree(), 0)
    return FiniteComplex(-1, (len(low), len(high)), (RationalMatrix(len(high), len(low), mat),)), [low, high]


def arity2_homology() -> tuple[int, ...]:
    return homology_dims(arity2_complex()[0])
