import math
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from _support import cochains, draw_degrees, rng_for
from gerstenhaber.algebra import builtin
from gerstenhaber.binfty import hochschild_realization
from gerstenhaber.hochschild import braces, cup, random_cochain
from gerstenhaber.operad import (
    FoxNeuwirthCell,
    NTree,
    OperadElement,
    OperadError,
    arity2_complex,
    arity2_homology,
    cell_differential,
    cell_dimension,
    cells_with_blocks,
    chain_map_residual,
    compose,
    enumerate_cells,
    evaluate,
    gamma,
    operad_differential,
    relabel_element,
)

DUAL = builtin("dual_numbers")
MAT2 = builtin("mat2")
R_DUAL = hochschild_realization(DUAL)
R_MAT2 = hochschild_realization(MAT2)
G = OperadElement.generator


# --- cells ---------------------------------------------------------------------------

def test_cell_literals():
    c = FoxNeuwirthCell.parse("3|2,1")
    assert c.blocks == ((3,), (2, 1)) and str(c) == "3|2,1" and c.braces_str() == "{3}{2,1}"
    assert c.stratum_class == 2 and FoxNeuwirthCell.parse("1|2|3|4").stratum_class == 3
    for bad in ["1,1", "1|3", "", "1|x", "1"]:
        with pytest.raises(OperadError):
            FoxNeuwirthCell.parse(bad)


def test_cell_dimension_examples():
    assert cell_dimension(FoxNeuwirthCell.parse("1,2,3")) == 1
    assert cell_dimension(FoxNeuwirthCell.parse("1,2|3")) == 2
    assert cell_dimension(FoxNeuwirthCell.parse("1|2|3")) == 3
    assert FoxNeuwirthCell.parse("1|2|3").degree == -3


def test_enumeration_examples():
    assert len(enumerate_cells(3, 1)) == 6
    assert len(enumerate_cells(3, 2)) == 12
    assert [str(c) for c in enumerate_cells(2, 2)] == ["1|2", "2|1"]
    with pytest.raises(OperadError):
        enumerate_cells(3, 3)


@pytest.mark.parametrize("n", range(2, 8))
def test_cell_counts_and_dimensions(n):
    one, two = enumerate_cells(n, 1), enumerate_cells(n, 2)
    assert len(one) == math.factorial(n) == len(set(one))
    assert len(two) == math.factorial(n) * (n - 1) == len(set(two))
    assert all(cell_dimension(c) == n - 2 for c in one)
    assert all(cell_dimension(c) == len(c.blocks[0]) + len(c.blocks[1]) - 1 for c in two)


@pytest.mark.parametrize("n,b", [(3, 3), (4, 3), (4, 4), (5, 3)])
def test_cells_with_blocks(n, b):
    assert len(cells_with_blocks(n, b)) == math.factorial(n) * math.comb(n - 1, b - 1)


def test_ntree():
    t = NTree(((1, ((2, 3),)),))
    assert t.n == 3 and t.vertex_count == 2 and t.tree_degree == 0
    with pytest.raises(OperadError):
        NTree(((1, 1),))


# --- free operad ----------------------------------------------------------------------

def test_compose_unit_and_grading():
    x = G("2|1,3")
    assert compose(x, 2, OperadElement.identity()) == x
    assert compose(OperadElement.identity(), 1, x) == x
    y = G("1,2")
    z = compose(x, 3, y)
    assert z.n == x.n + y.n - 1 and z.degree == x.degree + y.degree
    with pytest.raises(OperadError):
        compose(x, 4, y)


def test_compose_is_associative():
    x, y, z = G("1|2"), G("2,1,3"), G("1|2,3")
    # sequential: (x o_2 y) o_3 z = x o_2 (y o_2 z)
    assert compose(compose(x, 2, y), 3, z) == compose(x, 2, compose(y, 2, z))
    # parallel: (x o_1 y) o_4 z = (-1)^{|y||z|} (x o_2 z) o_1 y
    lhs = compose(compose(x, 1, y), 4, z)
    rhs = compose(compose(x, 2, z), 1, y).scale((-1) ** (y.degree * z.degree))
    assert lhs == rhs


def test_differential_examples():
    assert cell_differential("1,2").is_zero()
    assert cell_differential("1|2") == G("1,2") - G("2,1")
    d = cell_differential("1,2,3")
    m2 = G("1,2")
    assert d == compose(m2, 2, m2) - compose(m2, 1, m2)
    assert operad_differential(G("2|1,3")) == cell_differential("2|1,3")
    with pytest.raises(OperadError):
        cell_differential("1|2|3|4")


@pytest.mark.parametrize("n", range(2, 6))
def test_d_squared(n):
    for c in enumerate_cells(n, 1) + enumerate_cells(n, 2):
        assert operad_differential(cell_differential(c)).is_zero(), str(c)


@pytest.mark.parametrize("n", range(2, 5))
def test_equivariance_and_degree(n):
    for c in enumerate_cells(n, 1) + enumerate_cells(n, 2) + (cells_with_blocks(n, 3) if n >= 3 else []):
        d = cell_differential(c)
        assert all(deg == c.degree + 1 for deg in d.degrees())
        for p in list(permutations(range(1, n + 1)))[:6]:
            perm = {i + 1: v for i, v in enumerate(p)}
            assert cell_differential(c.permuted(perm)) == relabel_element(d, perm)


GENS = [c for n in (2, 3) for i in (1, 2) for c in enumerate_cells(n, i)] + cells_with_blocks(3, 3)


def random_elements(draw, depth):
    e = G(draw(st.sampled_from(GENS)))
    for _ in range(depth):
        y = G(draw(st.sampled_from(GENS)))
        e = compose(e, draw(st.integers(1, e.n)), y)
    return e


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_derivation_property(data):
    x = random_elements(data.draw, data.draw(st.integers(0, 1)))
    y = random_elements(data.draw, data.draw(st.integers(0, 1)))
    i = data.draw(st.integers(1, x.n))
    lhs = operad_differential(compose(x, i, y))
    rhs = compose(operad_differential(x), i, y) + compose(x, i, operad_differential(y)).scale((-1) ** x.degree)
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_gamma_matches_partial_compositions(data):
    x = G(data.draw(st.sampled_from(GENS)))
    ys = [G(data.draw(st.sampled_from(GENS))) for _ in range(x.n)]
    out = gamma(x, ys)
    assert out.n == sum(y.n for y in ys)
    assert out.degree == x.degree + sum(y.degree for y in ys)


# --- evaluation ---------------------------------------------------------------------------

def test_evaluation_examples():
    x, y, z = (random_cochain(MAT2, d, s) for s, d in enumerate((2, 1, 3)))
    assert evaluate(G("1,2"), R_MAT2, [x, y]) == cup(x, y)
    assert evaluate(G("2,1"), R_MAT2, [x, y]) == cup(y, x).scale((-1) ** (x.degree * y.degree))
    f, g, h = (random_cochain(MAT2, 1, s) for s in range(3))
    assert evaluate(G("1|2,3"), R_MAT2, [f, g, h]) == braces(f, [g, h])
    assert evaluate(G("1|2"), R_MAT2, [f, g]) == braces(f, [g]).scale(-1)
    assert evaluate(G("1,2|3"), R_MAT2, [x, y, z]).is_zero()
    assert evaluate(G("1|2|3"), R_MAT2, [x, y, z]).is_zero()
    with pytest.raises(OperadError):
        evaluate(G("1,2"), R_MAT2, [x])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**20))
def test_two_block_evaluation_is_signed_braces(n, seed):
    # {1}{2..n+1} -> -(-1)^{sum_p (N-p)|x_p|} (-1)^{n + (|x|-1)S + sum_{p<q} Y_p Y_q} {x}{y_1..y_n}
    rng = rng_for(seed)
    x, *ys = cochains(DUAL, rng, draw_degrees(rng, n + 1, 0, 3, cap=5, shifted=True))
    N = n + 1
    Y = [y.degree - 1 for y in ys]
    e = 1 + sum((N - p) * v.degree for p, v in enumerate([x] + ys, 1))
    e += n + (x.degree - 1) * sum(Y) + sum(Y[p] * Y[q] for p in range(n) for q in range(p + 1, n))
    cell = G("|".join(["1", ",".join(str(i) for i in range(2, N + 1))]))
    assert evaluate(cell, R_DUAL, [x] + ys) == braces(x, ys).scale((-1) ** e)


def _end_compose(e, i, f, inputs, r):
    """(F o_i G)(x_1..) = (-1)^{|G|(|x_1|+..+|x_{i-1}|)} F(x_1, .., G(x_i..), ..)."""
    inner = evaluate(f, r, inputs[i - 1:i - 1 + f.n])
    sign = (-1) ** (f.degree * sum(x.degree for x in inputs[:i - 1]))
    return evaluate(e, r, inputs[:i - 1] + [inner] + inputs[i - 1 + f.n:]).scale(sign)


@settings(max_examples=60, deadline=None)
@given(st.data(), st.sampled_from(["dual_numbers", "mat2"]))
def test_evaluation_is_an_operad_morphism(data, name):
    r = R_DUAL if name == "dual_numbers" else R_MAT2
    x = G(data.draw(st.sampled_from(GENS)))
    y = G(data.draw(st.sampled_from(GENS)))
    i = data.draw(st.integers(1, x.n))
    rng = rng_for(data.draw(st.integers(0, 2**20)))
    n = x.n + y.n - 1
    inputs = cochains(r.algebra, rng, draw_degrees(rng, n, 0, 2, cap=5 if name == "dual_numbers" else 4))
    assert evaluate(compose(x, i, y), r, inputs) == _end_compose(x, i, y, inputs, r)


def test_chain_map_examples():
    for g, degs in [("1,2", (2, 1)), ("1|2", (2, 2)), ("1|2|3", (2, 1, 1)), ("2|3|1", (1, 2, 2))]:
        for s in range(5):
            xs = [random_cochain(MAT2, d, 7 * s + i) for i, d in enumerate(degs)]
            assert chain_map_residual(g, R_MAT2, xs).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chain_map_all_small_cells(n):
    rng = rng_for(11, n)
    for b in range(1, min(n, 3) + 1):
        for c in cells_with_blocks(n, b):
            xs = cochains(DUAL, rng, draw_degrees(rng, n, 0, 3, cap=6))
            assert chain_map_residual(c, R_DUAL, xs).is_zero(), str(c)


# --- arity two -----------------------------------------------------------------------------

def test_arity2():
    cx, cells = arity2_complex()
    assert cx.dims == (2, 2) and list(cx.degrees) == [-1, 0]
    assert arity2_homology() == (1, 1)
    assert cx.euler_characteristic() == 0
