from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _support import cochains, draw_degrees, rng_for
from gerstenhaber.algebra import BUILTIN_NAMES, builtin
from gerstenhaber.hochschild import (
    Cochain,
    CochainError,
    antisymmetry_residual,
    brace_differential_residual,
    bracket,
    bracket_differential_residual,
    braces,
    circle,
    cohomology_dims,
    cup,
    cup_assoc_residual,
    cup_brace_residual,
    d_squared_residual,
    derivation_residual,
    differential,
    jacobi_residual,
    left_bracket_differential_residual,
    pre_jacobi_residual,
    random_cochain,
)

DUAL = builtin("dual_numbers")


# --- independent pointwise oracles -----------------------------------------

def basis_args(a, n):
    return product(range(a.dim), repeat=n)


def pointwise_differential(x):
    a, n = x.algebra, x.degree
    out = np.empty((a.dim,) * (n + 1) + (a.dim,), dtype=object)
    for idx in basis_args(a, n + 1):
        e = [a.basis(i) for i in idx]
        v = e[0] * x(*e[1:])
        for i in range(1, n + 1):
            term = x(*e[: i - 1], e[i - 1] * e[i], *e[i + 1:])
            v = v + term if i % 2 == 0 else v - term
        last = x(*e[:n]) * e[n]
        v = v + last if n % 2 else v - last
        out[idx] = v.coeffs
    return out


def pointwise_braces(x, ys):
    """Direct evaluation of the brace sum, eps = sum (|y_p| - 1) * (#a's before y_p)."""
    a = x.algebra
    n = len(ys)
    m = x.degree + sum(y.degree for y in ys) - n
    out = np.empty((a.dim,) * m + (a.dim,), dtype=object)
    out.fill(0)
    for idx in basis_args(a, m):
        e = [a.basis(i) for i in idx]
        total = a.element([0] * a.dim)
        for slots in combinations(range(x.degree), n):
            pos, args, eps, p = 0, [], 0, 0
            for s in range(x.degree):
                if p < n and slots[p] == s:
                    y = ys[p]
                    eps += (y.degree - 1) * pos
                    args.append(y(*e[pos:pos + y.degree]))
                    pos += y.degree
                    p += 1
                else:
                    args.append(e[pos])
                    pos += 1
            v = x(*args)
            total = total - v if eps % 2 else total + v
        out[idx] = total.coeffs
    return out


# --- spec examples -----------------------------------------------------------

def test_differential_degree_zero():
    a = builtin("mat2")
    x = random_cochain(a, 0, 3)
    dx = differential(x)
    for i in range(a.dim):
        e = a.basis(i)
        assert dx(e) == e * x.as_element() - x.as_element() * e


def test_differential_ground_field_example():
    q = builtin("ground_field")
    x = Cochain.from_array(q, 1, [[1]])
    one = q.one()
    assert differential(x)(one, one) == q.element([1])


def test_d_squared_50_seeds():
    for s in range(50):
        x = random_cochain(DUAL, s % 4, s)
        assert differential(differential(x)).is_zero()


def test_cup_examples():
    u, v = random_cochain(DUAL, 0, 1), random_cochain(DUAL, 0, 2)
    assert cup(u, v).as_element() == u.as_element() * v.as_element()
    f = Cochain.from_array(DUAL, 1, [[0, 0], [1, 0]])  # f(1) = 0, f(eps) = 1
    eps = DUAL.basis(1)
    assert cup(f, f)(eps, eps) == DUAL.one()
    x, y = random_cochain(DUAL, 2, 4), random_cochain(DUAL, 3, 5)
    assert cup(x, y).degree == 5


def test_braces_examples():
    x, y = random_cochain(DUAL, 2, 0), random_cochain(DUAL, 1, 1)
    assert braces(x, []) == x
    assert braces(random_cochain(DUAL, 0, 2), [y]).is_zero()
    for i, j in basis_args(DUAL, 2):
        a, b = DUAL.basis(i), DUAL.basis(j)
        assert braces(x, [y])(a, b) == x(y(a), b) + x(a, y(b))


def test_bracket_examples():
    a = builtin("mat2")
    f, g = random_cochain(a, 1, 1), random_cochain(a, 1, 2)
    for i in range(a.dim):
        e = a.basis(i)
        assert bracket(f, g)(e) == f(g(e)) - g(f(e))
    for s in range(10):
        x, y = random_cochain(DUAL, s % 3, s), random_cochain(DUAL, (s + 1) % 4, s + 50)
        sign = (-1) ** ((x.degree - 1) * (y.degree - 1))
        assert (bracket(x, y) + bracket(y, x).scale(sign)).is_zero()
    x = random_cochain(DUAL, 2, 9)
    assert bracket(x, x) == circle(x, x).scale(2)


def test_cohomology_examples():
    assert cohomology_dims(builtin("ground_field"), 3) == (1, 0, 0, 0)
    assert cohomology_dims(builtin("mat2"), 2) == (1, 0, 0)
    assert cohomology_dims(DUAL, 0) == (2,)


def test_cohomology_commutative_small():
    # HH^0 is the center; HH^1 of Q[Z/2] vanishes (separable), HH^1 of dual numbers is 1-dimensional
    assert cohomology_dims(builtin("group_z2"), 2) == (2, 0, 0)
    assert cohomology_dims(DUAL, 2)[:2] == (2, 1)


def test_random_cochain():
    a = builtin("mat2")
    assert random_cochain(a, 2, 11) == random_cochain(a, 2, 11)
    assert random_cochain(a, 2, 11).coeffs.shape == (4, 4, 4)
    xs = [random_cochain(a, 2, s) for s in range(10)]
    assert all(xs[i] != xs[j] for i in range(10) for j in range(i))
    with pytest.raises(CochainError):
        random_cochain(a, -1, 0)


def test_mismatched_algebras():
    with pytest.raises(CochainError):
        cup(random_cochain(DUAL, 1, 0), random_cochain(builtin("mat2"), 1, 0))


# --- cross-checks against the pointwise oracles --------------------------------

@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["dual_numbers", "group_z2", "trunc_poly3"]), st.integers(0, 3), st.integers(0, 2**20))
def test_differential_matches_pointwise(name, deg, seed):
    x = random_cochain(builtin(name), deg, seed)
    assert np.array_equal(differential(x).coeffs, pointwise_differential(x))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["dual_numbers", "trunc_poly3"]), st.integers(0, 2**20), st.integers(1, 3))
def test_braces_match_pointwise(name, seed, n):
    a = builtin(name)
    rng = rng_for(seed)
    degs = draw_degrees(rng, n + 1, 0, 3, cap=4, shifted=True)
    x, *ys = cochains(a, rng, degs)
    if x.degree + sum(y.degree - 1 for y in ys) < 0:
        assert braces(x, ys).is_zero()  # formal zero in negative degree
        return
    assert np.array_equal(braces(x, ys).coeffs, pointwise_braces(x, ys))


# --- identities ---------------------------------------------------------------

@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_classical_identities(name):
    a = builtin(name)
    rng = rng_for(1, len(name))
    for _ in range(15):
        x, = cochains(a, rng, draw_degrees(rng, 1, 0, 3))
        assert d_squared_residual(x).is_zero()
        x, y = cochains(a, rng, draw_degrees(rng, 2, 0, 3, cap=4))
        assert derivation_residual(x, y).is_zero()
        x, y, z = cochains(a, rng, draw_degrees(rng, 3, 0, 2, cap=4))
        assert cup_assoc_residual(x, y, z).is_zero()


@pytest.mark.parametrize("name", ["dual_numbers", "mat2"])
def test_homotopy_g_identities(name):
    a = builtin(name)
    rng = rng_for(2, a.dim)
    cap = 5 if a.dim == 2 else 4
    for l in (1, 2):
        for m in (1, 2):
            x, *rest = cochains(a, rng, draw_degrees(rng, 1 + l + m, 0, 3, cap=cap, shifted=True))
            assert pre_jacobi_residual(x, rest[:l], rest[l:]).is_zero()
        x, *ys = cochains(a, rng, draw_degrees(rng, 1 + l, 0, 3, cap=cap, shifted=True))
        assert brace_differential_residual(x, ys).is_zero()
        x1, x2, *ys = cochains(a, rng, draw_degrees(rng, 2 + l, 0, 2, cap=cap))
        assert cup_brace_residual(x1, x2, ys).is_zero()


def test_brace_differential_needs_arguments():
    with pytest.raises(CochainError):
        brace_differential_residual(random_cochain(DUAL, 1, 0), [])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**20))
def test_dg_lie_identities(seed):
    rng = rng_for(seed)
    x, y, z = cochains(DUAL, rng, draw_degrees(rng, 3, 0, 3, cap=5, shifted=True))
    assert antisymmetry_residual(x, y).is_zero()
    assert jacobi_residual(x, y, z).is_zero()
    assert bracket_differential_residual(x, y).is_zero()


def test_left_bracket_differential_form_fails():
    # d[x,y] = [dx,y] + (-1)^{|x|-1}[x,dy] is not the correct sign rule
    rng = rng_for(5)
    failures = 0
    for _ in range(20):
        x, y = cochains(DUAL, rng, draw_degrees(rng, 2, 0, 3, cap=5))
        failures += not left_bracket_differential_residual(x, y).is_zero()
    assert failures > 0
