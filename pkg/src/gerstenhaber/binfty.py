"""B-infinity operations M_k, M_{k,l} and their defining identities.

Conventions.  V is the Hochschild complex, W = V[1] its shift, so a cochain
``x`` has shifted degree ``|x| - 1``.  Operations are written in two forms:

* bar form ``M_k[a_1|...|a_k]``, the component of the coderivation D on TW;
* parenthesis form ``M_k(a_1, ..., a_k) = (-1)^{sum_r (k-r)|a_r|} M_k[a_1|...|a_k]``
  (all bars moved to the front, a bar having degree one).

``M_{k,l}(a; b) = M_{k,l}([a] (x) [b])`` carries no sign.

Every sign in the identity engines is computed twice: once by a closed
formula and once by literally permuting symbols (letters with their degree,
bars with degree one) through :func:`koszul_sign`.  A disagreement raises
:class:`SignMismatch`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .algebra import AssociativeAlgebra, validate
from .exactq import exact, is_zero, object_array, pivot_columns
from .hochschild import Cochain, braces, cup, differential, random_cochain


class SignMismatch(AssertionError):
    """Closed-form sign and bar-moving sign disagree."""


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


# ---------------------------------------------------------------------------
# Koszul signs


def koszul_sign(degrees: Sequence[int], permutation: Sequence[int]) -> int:
    """Sign of reordering graded symbols.

    ``permutation[p]`` is the old index of the symbol that ends up in position
    ``p``.  Every pair that changes relative order contributes
    ``(-1)^{d_i d_j}``.
    """
    n = len(degrees)
    if len(permutation) != n or sorted(permutation) != list(range(n)):
        raise ValueError(f"{list(permutation)} is not a permutation of {n} symbols")
    e = 0
    for p in range(n):
        for q in range(p + 1, n):
            if permutation[p] > permutation[q]:
                e += degrees[permutation[p]] * degrees[permutation[q]]
    return _sgn(e)


def _word_symbols(degrees: Sequence[int], trailing_bar: bool = False) -> list[int]:
    """Symbol degrees of a_1 | a_2 | ... | a_p (bars have degree one)."""
    out: list[int] = []
    for i, d in enumerate(degrees):
        out.append(d)
        if trailing_bar or i < len(degrees) - 1:
            out.append(1)
    return out


def bars_to_front_sign(degrees: Sequence[int]) -> int:
    """Sign of M_k[a_1|...|a_k] -> M_k ||..| a_1 ... a_k, by permuting symbols."""
    syms = _word_symbols(degrees)
    bars = [i for i in range(len(syms)) if i % 2 == 1]
    letters = [i for i in range(len(syms)) if i % 2 == 0]
    return koszul_sign(syms, bars + letters)


def pass_sign(op_degree: int, degrees: Sequence[int]) -> int:
    """Sign of moving an operator of ``op_degree`` past a_1| ... a_i| (letters with trailing bars)."""
    syms = [op_degree] + _word_symbols(degrees, trailing_bar=True)
    return koszul_sign(syms, list(range(1, len(syms))) + [0])


def unit_reorder_sign(shifted: Sequence[int], order: Sequence[int]) -> int:
    """Reorder units ``x_i|`` of TW into ``order`` by moving the underlying symbols."""
    syms: list[int] = []
    groups: list[list[int]] = []
    for d in shifted:
        groups.append([len(syms), len(syms) + 1])
        syms += [d + 1, 1]  # letter of V-degree d+1 followed by its bar
    perm = [i for o in order for i in groups[o]]
    return koszul_sign(syms, perm)


def closed_bar_sign(degrees: Sequence[int]) -> int:
    k = len(degrees)
    return _sgn(sum((k - r) * d for r, d in enumerate(degrees, 1)))


def closed_shift_sign(degrees: Sequence[int]) -> int:
    return _sgn(sum(d - 1 for d in degrees))


def closed_interleave_sign(first: Sequence[int], second: Sequence[int], blocks: Sequence[tuple[int, int]]) -> int:
    """Reorder [f_1..f_k | s_1..s_l] into f-block_1 s-block_1 f-block_2 ...

    Inputs are V-degrees; each s_q crosses every f in a later block.
    """
    e = 0
    block_of_f = []
    block_of_s = []
    for t, (x, y) in enumerate(blocks):
        block_of_f += [t] * x
        block_of_s += [t] * y
    for q, ds in enumerate(second):
        for p, df in enumerate(first):
            if block_of_f[p] > block_of_s[q]:
                e += (ds - 1) * (df - 1)
    return _sgn(e)


@dataclass
class SignStats:
    """Counts sign comparisons made by the identity engines."""

    compared: int = 0

    def check(self, closed: int, barpath: int, where: str) -> int:
        self.compared += 1
        if closed != barpath:
            raise SignMismatch(f"{where}: closed form {closed:+d}, bar-moving {barpath:+d}")
        return closed


def _stats(stats: SignStats | None) -> SignStats:
    return stats if stats is not None else SignStats()


# ---------------------------------------------------------------------------
# generators and realizations


@dataclass(frozen=True)
class BGenerator:
    """M_k (``l is None``) or M_{k,l}."""

    k: int
    l: int | None = None

    def __post_init__(self):
        if self.k < 0 or (self.l is not None and self.l < 0):
            raise ValueError("arities must be non-negative")

    @classmethod
    def M(cls, k: int) -> "BGenerator":
        return cls(k)

    @classmethod
    def Mkl(cls, k: int, l: int) -> "BGenerator":
        return cls(k, l)

    @property
    def arity(self) -> int:
        return self.k + (self.l or 0)

    @property
    def degree(self) -> int:
        return 2 - self.k if self.l is None else 1 - self.k - self.l

    def __str__(self):
        return f"M_{self.k}" if self.l is None else f"M_{{{self.k},{self.l}}}"


def twisted_braces(x: Cochain, ys: Sequence[Cochain]) -> Cochain:
    """M_{1,n}(x; y_1..y_n) on the Hochschild complex.

    This is the brace operation times (-1)^n and the Koszul sign of reversing
    [x|y_1|...|y_n] in shifted degrees.  With M_1 = d and M_2 = cup taken
    literally, this is the normalization of the one-argument-in-front braces
    for which all three identity families hold (plain braces fail the Leibniz
    family already at k = l = 1).
    """
    ys = list(ys)
    Y = [y.degree - 1 for y in ys]
    e = len(ys) + (x.degree - 1) * sum(Y)
    e += sum(Y[p] * Y[q] for p in range(len(Y)) for q in range(p + 1, len(Y)))
    return braces(x, ys).scale(_sgn(e))


@dataclass(frozen=True)
class Realization:
    """Assignment of operations on C(A, A) to the B-infinity generators.

    Only M_1 = ``d``, M_2 = ``product`` and M_{1,n} = ``brace`` (n >= 1) are
    free; M_{1,0} = M_{0,1} = id and every other generator acts as zero.
    """

    algebra: AssociativeAlgebra
    name: str
    d: Callable[[Cochain], Cochain] = field(repr=False)
    product: Callable[[Cochain, Cochain], Cochain] = field(repr=False)
    brace: Callable[[Cochain, Sequence[Cochain]], Cochain] = field(repr=False)

    @staticmethod
    def m_vanishes(k: int) -> bool:
        return k == 0 or k > 2

    @staticmethod
    def mkl_vanishes(k: int, l: int) -> bool:
        if (k, l) in ((1, 0), (0, 1)):
            return False
        return k != 1 or l == 0

    def M(self, args: Sequence[Cochain]) -> Cochain:
        """Parenthesis form M_k(a_1, ..., a_k)."""
        k = len(args)
        deg = sum(a.degree for a in args) + 2 - k
        if self.m_vanishes(k):
            return Cochain.zero(self.algebra, deg)
        if k == 1:
            return self.d(args[0])
        return self.product(args[0], args[1])

    def Mkl(self, first: Sequence[Cochain], second: Sequence[Cochain]) -> Cochain:
        k, l = len(first), len(second)
        if (k, l) == (1, 0):
            return first[0]
        if (k, l) == (0, 1):
            return second[0]
        deg = sum(a.degree for a in first) + sum(b.degree for b in second) + 1 - k - l
        if self.mkl_vanishes(k, l):
            return Cochain.zero(self.algebra, deg)
        return self.brace(first[0], list(second))

    def apply(self, g: BGenerator, args: Sequence[Cochain]) -> Cochain:
        if len(args) != g.arity:
            raise ValueError(f"{g} takes {g.arity} arguments, got {len(args)}")
        if g.l is None:
            return self.M(args)
        return self.Mkl(args[: g.k], args[g.k:])


def hochschild_realization(a: AssociativeAlgebra) -> Realization:
    return Realization(a, f"hochschild({a.name})", differential, cup, twisted_braces)


def literal_realization(a: AssociativeAlgebra) -> Realization:
    """M_{1,n} = plain braces with no sign twist (fails the Leibniz family)."""
    return Realization(a, f"literal({a.name})", differential, cup, braces)


def mutated_realization(a: AssociativeAlgebra, seed: int = 0) -> Realization:
    """Hochschild realization whose M_2 uses a random non-associative table."""
    if a.dim < 2:
        raise ValueError("a one-dimensional table is always associative; pick dim >= 2")
    rng = np.random.Generator(np.random.PCG64(seed))
    while True:
        vals = rng.integers(-3, 4, size=(a.dim,) * 3)
        table = object_array(vals.tolist(), vals.shape)
        diag = validate(AssociativeAlgebra(a.dim, a.labels, table, a.unit, "mutated"))
        if diag is not None and diag.kind == "associativity":
            break
    return Realization(a, f"mutated({a.name},{seed})", differential,
                       lambda x, y: cup(x, y, table=table), twisted_braces)


# ---------------------------------------------------------------------------
# identity families


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` non-negative integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for f in range(total + 1):
        for rest in compositions(total - f, parts - 1):
            yield (f,) + rest


def block_splits(k: int, l: int, n: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Splittings of k first and l second letters into n blocks, none empty."""
    for ks in compositions(k, n):
        for ls in compositions(l, n):
            if all(x + y > 0 for x, y in zip(ks, ls)):
                yield tuple(zip(ks, ls))


def _interleave_order(k: int, blocks) -> list[int]:
    order = []
    ia, ib = 0, k
    for x, y in blocks:
        order += list(range(ia, ia + x)) + list(range(ib, ib + y))
        ia += x
        ib += y
    return order


def _split(xs: Sequence[Cochain], sizes: Sequence[int]) -> list[list[Cochain]]:
    out, i = [], 0
    for s in sizes:
        out.append(list(xs[i:i + s]))
        i += s
    return out


def interleave_sign(first, second, blocks, stats: SignStats, where: str) -> int:
    d1 = [x.degree for x in first]
    d2 = [x.degree for x in second]
    closed = closed_interleave_sign(d1, d2, blocks)
    bar = unit_reorder_sign([d - 1 for d in d1 + d2], _interleave_order(len(d1), blocks))
    return stats.check(closed, bar, where)


def _sum(terms: list[Cochain], a, degree: int) -> Cochain:
    out = Cochain.zero(a, degree)
    for t in terms:
        out = out + t
    return out


def a_infty_epsilon(i: int, j: int, k: int, degrees: Sequence[int]) -> int:
    """Closed-form exponent of the A-infinity identity term M_i(a_1..a_k, M_j(..), ..)."""
    n = len(degrees)
    e = (i + 1) * j + (j + 1) * k
    e += sum((i - r + 1) * degrees[r - 1] for r in range(1, k + 1))
    e += sum((n - r) * degrees[r - 1] for r in range(k + 1, n))
    return e


def a_infty_terms(r: Realization, inputs: Sequence[Cochain], stats: SignStats | None = None):
    """Yield (sign, i, j, k, term) for sum (-1)^eps M_i(a_1..a_k, M_j(a_{k+1}..), ..)."""
    st = _stats(stats)
    a = list(inputs)
    n = len(a)
    degs = [x.degree for x in a]
    for i in range(1, n + 1):
        j = n + 1 - i
        for k in range(0, n - j + 1):
            inner_degs = degs[k:k + j]
            inner_deg = sum(inner_degs) + 2 - j
            outer_degs = degs[:k] + [inner_deg] + degs[k + j:]
            closed = _sgn(a_infty_epsilon(i, j, k, degs))
            bar = pass_sign(1, degs[:k]) * bars_to_front_sign(inner_degs) * bars_to_front_sign(outer_degs)
            s = st.check(closed, bar, f"A-infinity term i={i} j={j} k={k} degrees={degs}")
            if r.m_vanishes(i) or r.m_vanishes(j):
                continue
            inner = r.M(a[k:k + j])
            yield s, i, j, k, r.M(a[:k] + [inner] + a[k + j:]).scale(s)


def a_infty_residual(n: int, inputs: Sequence[Cochain], r: Realization, stats: SignStats | None = None) -> Cochain:
    if len(inputs) != n:
        raise ValueError(f"need {n} inputs, got {len(inputs)}")
    deg = sum(x.degree for x in inputs) + 3 - n
    return _sum([t for *_, t in a_infty_terms(r, inputs, stats)], r.algebra, deg)


def assoc_residual(k: int, l: int, m: int, inputs: Sequence[Cochain], r: Realization,
                   stats: SignStats | None = None) -> Cochain:
    """LHS - RHS of associativity of M for inputs (a_1..a_k; b_1..b_l; c_1..c_m).

    The empty splitting (r = 0 or s = 0) is admitted exactly when both words
    it would split are empty, matching M([] (x) []) = [].
    """
    st = _stats(stats)
    if len(inputs) != k + l + m:
        raise ValueError(f"need {k + l + m} inputs, got {len(inputs)}")
    A, B, C = list(inputs[:k]), list(inputs[k:k + l]), list(inputs[k + l:])
    deg = sum(x.degree for x in inputs) + 1 - k - l - m
    terms = []
    for nb in range(0 if l + m == 0 else 1, l + m + 1):
        for blocks in block_splits(l, m, nb):
            s = interleave_sign(B, C, blocks, st, f"assoc lhs {blocks}")
            if any(r.mkl_vanishes(x, y) for x, y in blocks) or r.mkl_vanishes(k, nb):
                continue
            bs, cs = _split(B, [x for x, _ in blocks]), _split(C, [y for _, y in blocks])
            vals = [r.Mkl(bb, cc) for bb, cc in zip(bs, cs)]
            terms.append(r.Mkl(A, vals).scale(s))
    for nb in range(0 if k + l == 0 else 1, k + l + 1):
        for blocks in block_splits(k, l, nb):
            s = interleave_sign(A, B, blocks, st, f"assoc rhs {blocks}")
            if any(r.mkl_vanishes(x, y) for x, y in blocks) or r.mkl_vanishes(nb, m):
                continue
            as_, bs = _split(A, [x for x, _ in blocks]), _split(B, [y for _, y in blocks])
            vals = [r.Mkl(aa, bb) for aa, bb in zip(as_, bs)]
            terms.append(r.Mkl(vals, C).scale(-s))
    return _sum(terms, r.algebra, deg)


def _inner_m_sign(prefix: Sequence[Cochain], block: Sequence[Cochain], st: SignStats, where: str) -> int:
    """Sign delta/eta: shift of the prefix plus moving bars of M_r[block] to the front."""
    pd = [x.degree for x in prefix]
    bd = [x.degree for x in block]
    closed = closed_shift_sign(pd) * closed_bar_sign(bd)
    bar = pass_sign(1, pd) * bars_to_front_sign(bd)
    return st.check(closed, bar, where)


def leibniz_residual(k: int, l: int, inputs: Sequence[Cochain], r: Realization,
                     stats: SignStats | None = None) -> Cochain:
    """LHS - RHS of the Leibniz rule of D over M for inputs (a_1..a_k; b_1..b_l)."""
    st = _stats(stats)
    if len(inputs) != k + l:
        raise ValueError(f"need {k + l} inputs, got {len(inputs)}")
    A, B = list(inputs[:k]), list(inputs[k:])
    deg = sum(x.degree for x in inputs) + 2 - k - l
    terms = []
    for n in range(1, k + l + 1):
        for blocks in block_splits(k, l, n):
            s = interleave_sign(A, B, blocks, st, f"leibniz lhs {blocks}")
            as_, bs = _split(A, [x for x, _ in blocks]), _split(B, [y for _, y in blocks])
            vdegs = [sum(x.degree for x in aa) + sum(y.degree for y in bb) + 1 - len(aa) - len(bb)
                     for aa, bb in zip(as_, bs)]
            s *= st.check(closed_bar_sign(vdegs), bars_to_front_sign(vdegs), f"leibniz outer bars {vdegs}")
            if r.m_vanishes(n) or any(r.mkl_vanishes(x, y) for x, y in blocks):
                continue
            vals = [r.Mkl(aa, bb) for aa, bb in zip(as_, bs)]
            terms.append(r.M(vals).scale(s))
    for rr in range(1, k + 1):
        for i in range(0, k - rr + 1):
            s = _inner_m_sign(A[:i], A[i:i + rr], st, f"leibniz delta r={rr} i={i}")
            if r.m_vanishes(rr) or r.mkl_vanishes(k - rr + 1, l):
                continue
            inner = r.M(A[i:i + rr])
            terms.append(r.Mkl(A[:i] + [inner] + A[i + rr:], B).scale(-s))
    ad = [x.degree for x in A]
    glob = st.check(closed_shift_sign(ad), pass_sign(1, ad), "leibniz eta prefix")
    for ss in range(1, l + 1):
        for i in range(0, l - ss + 1):
            s = glob * _inner_m_sign(B[:i], B[i:i + ss], st, f"leibniz eta s={ss} i={i}")
            if r.m_vanishes(ss) or r.mkl_vanishes(k, l - ss + 1):
                continue
            inner = r.M(B[i:i + ss])
            terms.append(r.Mkl(A, B[:i] + [inner] + B[i + ss:]).scale(-s))
    return _sum(terms, r.algebra, deg)


# ---------------------------------------------------------------------------
# tensor coalgebra model


@dataclass(frozen=True)
class TensorWord:
    letters: tuple[Cochain, ...] = ()

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def degree(self) -> int:
        return sum(x.degree for x in self.letters) - len(self.letters)

    def __repr__(self):
        return "[" + "|".join(f"deg{x.degree}" for x in self.letters) + "]"


@dataclass(frozen=True)
class TensorElement:
    """Formal rational combination of words of length at most ``max_length``."""

    algebra: AssociativeAlgebra
    max_length: int
    terms: tuple[tuple[object, TensorWord], ...] = ()

    def __post_init__(self):
        for _, w in self.terms:
            if w.length > self.max_length:
                raise ValueError(f"word of length {w.length} exceeds cap {self.max_length}")

    @classmethod
    def word(cls, algebra: AssociativeAlgebra, letters: Sequence[Cochain], max_length: int | None = None):
        letters = tuple(letters)
        cap = len(letters) if max_length is None else max_length
        return cls(algebra, cap, ((1, TensorWord(letters)),))

    @classmethod
    def unit(cls, algebra: AssociativeAlgebra, max_length: int = 0):
        return cls(algebra, max_length, ((1, TensorWord(())),))

    def _lift(self, other: "TensorElement") -> int:
        return max(self.max_length, other.max_length)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement(self.algebra, self._lift(other), self.terms + other.terms)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(-1)

    def scale(self, s) -> "TensorElement":
        s = exact(s)
        return TensorElement(self.algebra, self.max_length, tuple((exact(c * s), w) for c, w in self.terms))

    def normal_form(self) -> dict[tuple[int, ...], np.ndarray]:
        """Dense tensor per letter-degree signature; formal zero letters drop out."""
        out: dict[tuple[int, ...], np.ndarray] = {}
        for c, w in self.terms:
            if c == 0 or any(x.degree < 0 for x in w.letters):
                continue
            t = np.array(c, dtype=object)
            for x in w.letters:
                t = np.multiply.outer(t, x.coeffs.reshape(-1))
            key = tuple(x.degree for x in w.letters)
            out[key] = out[key] + t if key in out else t
        return out

    def is_zero(self) -> bool:
        # Exact but compressed: in each slot, restricting to the pivot columns of
        # the letters seen there is injective on their span, hence so is the
        # tensor product of these restrictions.
        groups: dict[tuple[int, ...], list] = {}
        for c, w in self.terms:
            if c == 0 or any(x.degree < 0 for x in w.letters):
                continue
            groups.setdefault(tuple(x.degree for x in w.letters), []).append((c, w.letters))
        for key, items in groups.items():
            cols = []
            for slot in range(len(key)):
                vecs = {id(ls[slot]): ls[slot].coeffs.reshape(-1) for _, ls in items}
                cols.append(list(pivot_columns(np.array(list(vecs.values()), dtype=object))))
            total = None
            for c, ls in items:
                t = np.array(c, dtype=object)
                for x, cs in zip(ls, cols):
                    t = np.multiply.outer(t, x.coeffs.reshape(-1)[cs])
                total = t if total is None else total + t
            if not is_zero(total):
                return False
        return True

    def component(self, length: int) -> "TensorElement":
        return TensorElement(self.algebra, self.max_length,
                             tuple((c, w) for c, w in self.terms if w.length == length))

    def projection(self) -> Cochain | None:
        """Sum of the length-one letters, or None when there are none."""
        pieces = [x.scale(c) for c, w in self.terms if w.length == 1 for x in w.letters]
        pieces = [p for p in pieces if p.degree >= 0]
        if not pieces:
            return None
        out = pieces[0]
        for p in pieces[1:]:
            out = out + p
        return out


def coderivation_D(r: Realization, w: TensorElement) -> TensorElement:
    """D[a_1|..|a_p] = sum (-1)^{shift(a_1..a_i)} [a_1|..|a_i| M_k[a_{i+1}..a_{i+k}] |..]."""
    st = SignStats()
    out = []
    for c, word in w.terms:
        a = list(word.letters)
        p = len(a)
        for k in range(1, p + 1):
            if r.m_vanishes(k):
                continue
            for i in range(0, p - k + 1):
                s = _inner_m_sign(a[:i], a[i:i + k], st, "coderivation")
                val = r.M(a[i:i + k])
                new = TensorWord(tuple(a[:i]) + (val,) + tuple(a[i + k:]))
                assert new.length <= word.length
                out.append((exact(c * s), new))
    return TensorElement(w.algebra, w.max_length, tuple(out))


def _product_words(r: Realization, u: TensorWord, v: TensorWord, st: SignStats):
    A, B = list(u.letters), list(v.letters)
    k, l = len(A), len(B)
    if k == 0 and l == 0:
        yield 1, TensorWord(())
        return
    for n in range(1, k + l + 1):
        for blocks in block_splits(k, l, n):
            if any(r.mkl_vanishes(x, y) for x, y in blocks):
                continue
            s = interleave_sign(A, B, blocks, st, "product")
            as_, bs = _split(A, [x for x, _ in blocks]), _split(B, [y for _, y in blocks])
            yield s, TensorWord(tuple(r.Mkl(aa, bb) for aa, bb in zip(as_, bs)))


def product_M(r: Realization, u: TensorElement, v: TensorElement) -> TensorElement:
    """Coalgebra-map product with projection sum M_{k,l}."""
    st = SignStats()
    out = []
    for cu, wu in u.terms:
        for cv, wv in v.terms:
            for s, w in _product_words(r, wu, wv, st):
                assert w.length <= wu.length + wv.length
                out.append((exact(cu * cv * s), w))
    return TensorElement(u.algebra, u.max_length + v.max_length, tuple(out))


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    params: dict
    passed: bool
    counterexample: dict | None = None


def _cochain_payload(x: Cochain) -> dict:
    from .exactq import format_rational

    return {"degree": x.degree, "coeffs": [format_rational(v) for v in x.coeffs.reshape(-1)]}


def _record(check_id: str, params: dict, residual_zero: bool, inputs: Sequence[Cochain]) -> CheckRecord:
    if residual_zero:
        return CheckRecord(check_id, params, True)
    return CheckRecord(check_id, params, False, {**params, "inputs": [_cochain_payload(x) for x in inputs]})


def _proj_equal(e: TensorElement, target: Cochain) -> bool:
    p = e.projection()
    if target.degree < 0:
        return p is None or p.is_zero()
    if p is None:
        return target.is_zero()
    return p.degree == target.degree and (p - target).is_zero()


def oracle_residuals(r: Realization, trials: int, seed: int, max_length: int,
                     max_letter_degree: int = 2) -> list[CheckRecord]:
    """Seeded checks of the DG bialgebra axioms on TW, plus agreement with the identity engines.

    Letter degrees are drawn from 0..max_letter_degree and word lengths so
    that every product or composite stays within ``max_length`` letters.
    """
    if max_length < 1:
        raise ValueError("max_length must be positive")
    a = r.algebra
    rng = np.random.Generator(np.random.PCG64(seed))
    records: list[CheckRecord] = []

    def letters(n: int) -> list[Cochain]:
        degs = rng.integers(0, max_letter_degree + 1, size=n)
        seeds = rng.integers(0, 2**31, size=n)
        return [random_cochain(a, int(d), int(s)) for d, s in zip(degs, seeds)]

    def word(xs):
        return TensorElement.word(a, xs, max_length)

    unit = TensorElement.unit(a, max_length)
    records.append(CheckRecord("oracle.unit.D_annihilates_unit", {}, coderivation_D(r, unit).is_zero()))
    for t in range(trials):
        p = int(rng.integers(1, max_length + 1))
        xs = letters(p)
        base = {"trial": t, "seed": seed}
        w = word(xs)
        dd = coderivation_D(r, coderivation_D(r, w))
        records.append(_record("oracle.D_squared", {**base, "length": p}, dd.is_zero(), xs))
        records.append(_record("oracle.projection.D", {**base, "length": p},
                               _proj_equal(coderivation_D(r, w), r.M(xs).scale(closed_bar_sign([x.degree for x in xs]))), xs))
        records.append(_record("oracle.equivalence.a_infty", {**base, "length": p},
                               _proj_equal(dd, a_infty_residual(p, xs, r)), xs))

        for check in ("unit_left", "unit_right"):
            prod = product_M(r, unit, w) if check == "unit_left" else product_M(r, w, unit)
            records.append(_record(f"oracle.unit.{check}", {**base, "length": p}, (prod - w).is_zero(), xs))

        total = int(rng.integers(2, max_length + 1)) if max_length >= 2 else 1
        k = int(rng.integers(0, total + 1))
        xs = letters(total)
        u, v = word(xs[:k]), word(xs[k:])
        params = {**base, "k": k, "l": total - k}
        m = product_M(r, u, v)
        records.append(_record("oracle.projection.M", params, _proj_equal(m, r.Mkl(xs[:k], xs[k:])), xs))
        sign_u = _sgn(TensorWord(tuple(xs[:k])).degree)
        leib = coderivation_D(r, m) - product_M(r, coderivation_D(r, u), v) \
            - product_M(r, u, coderivation_D(r, v)).scale(sign_u)
        records.append(_record("oracle.leibniz", params, leib.is_zero(), xs))
        records.append(_record("oracle.equivalence.leibniz", params,
                               _proj_equal(leib, leibniz_residual(k, total - k, xs, r)), xs))

        total = int(rng.integers(1, max_length + 1))
        cut1, cut2 = sorted(int(c) for c in rng.integers(0, total + 1, size=2))
        xs = letters(total)
        u, v, z = word(xs[:cut1]), word(xs[cut1:cut2]), word(xs[cut2:])
        params = {**base, "k": cut1, "l": cut2 - cut1, "m": total - cut2}
        assoc = product_M(r, u, product_M(r, v, z)) - product_M(r, product_M(r, u, v), z)
        records.append(_record("oracle.assoc", params, assoc.is_zero(), xs))
        records.append(_record("oracle.equivalence.assoc", params,
                               _proj_equal(assoc, assoc_residual(cut1, cut2 - cut1, total - cut2, xs, r)), xs))
    return records
