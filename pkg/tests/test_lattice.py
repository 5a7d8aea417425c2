from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from toric_mmp.errors import NotInSpan, NotSimplicial, ZeroVector
from toric_mmp.lattice import (
    cone_coordinates,
    cone_multiplicity,
    determinant,
    hermite_rows,
    integer_kernel,
    is_primitive,
    lp_feasible_point,
    lp_minimize,
    primitive_part,
    rank,
    scale_to_lattice,
    solve,
    UnboundedLP,
)

ints = st.integers(-6, 6)


@pytest.mark.parametrize(
    "v, expected",
    [((2, 4, 6), ((1, 2, 3), 2)), ((0, 0, 5), ((0, 0, 1), 5)), ((3, -6), ((1, -2), 3))],
)
def test_primitive_part_examples(v, expected):
    assert primitive_part(v) == expected


def test_primitive_part_rejects_zero():
    with pytest.raises(ZeroVector):
        primitive_part((0, 0))


@given(st.lists(ints, min_size=1, max_size=4).filter(any))
def test_primitive_part_is_idempotent(v):
    p, g = primitive_part(v)
    assert tuple(g * x for x in p) == tuple(v)
    assert primitive_part(p) == (p, 1)
    assert g > 0


@pytest.mark.parametrize(
    "A, expected",
    [([[1, -1]], [(1, 1)]), ([[1, 0], [0, 1]], []), ([[2, -4]], [(2, 1)])],
)
def test_integer_kernel_examples(A, expected):
    assert integer_kernel(A) == expected


def test_integer_kernel_brute_force_2_minus_4():
    # every kernel vector in a small box is an integral multiple of the basis
    (b,) = integer_kernel([[2, -4]])
    for x in product(range(-4, 5), repeat=2):
        if 2 * x[0] - 4 * x[1] == 0:
            c = solve([b], x)
            assert c is not None and c[0].denominator == 1


def _saturated(basis):
    if not basis:
        return True
    snf = smith_normal_form(Matrix(basis))
    return all(abs(snf[i, i]) == 1 for i in range(len(basis)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.integers(r, 5).flatmap(
    lambda n: st.lists(st.lists(ints, min_size=n, max_size=n), min_size=r, max_size=r))))
def test_integer_kernel_properties(A):
    n = len(A[0])
    basis = integer_kernel(A, ncols=n)
    assert len(basis) == n - rank(A)
    for v in basis:
        assert is_primitive(v)
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)
    if basis:
        assert rank(basis) == len(basis)
    assert _saturated(basis)


def test_hermite_rows_is_canonical():
    a = hermite_rows([(2, 1), (4, 3)])
    b = hermite_rows([(2, 1), (0, 1)])
    assert a == b


@pytest.mark.parametrize(
    "rays, v, expected",
    [
        ([(1, 0), (0, 1)], (3, 2), (3, 2)),
        ([(1, 0), (1, 2)], (1, 1), (Fraction(1, 2), Fraction(1, 2))),
        ([(1, 0), (0, 1)], (-1, 1), (-1, 1)),
    ],
)
def test_cone_coordinates_examples(rays, v, expected):
    assert cone_coordinates(rays, v) == tuple(Fraction(x) for x in expected)


def test_cone_coordinates_errors():
    with pytest.raises(NotInSpan):
        cone_coordinates([(1, 0, 0), (0, 1, 0)], (0, 0, 1))
    with pytest.raises(NotSimplicial):
        cone_coordinates([(1, 0), (2, 0)], (1, 0))


@pytest.mark.parametrize(
    "rays, m",
    [
        ([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 1),
        ([(1, 0), (1, 2)], 2),
        ([(1, 1, 0), (1, 0, 1), (0, 1, 1)], 2),
        ([(1, 0, 0), (1, 2, 0)], 2),
    ],
)
def test_cone_multiplicity_examples(rays, m):
    assert cone_multiplicity(rays) == m


def test_cone_multiplicity_dependent():
    with pytest.raises(NotSimplicial):
        cone_multiplicity([(1, 1), (2, 2)])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(ints, min_size=3, max_size=3), min_size=3, max_size=3), st.lists(ints, min_size=3, max_size=3))
def test_cone_coordinates_reproduce_and_denominators_divide_multiplicity(rays, v):
    if determinant(rays) == 0:
        return
    c = cone_coordinates(rays, v)
    assert tuple(sum(ci * r[j] for ci, r in zip(c, rays)) for j in range(3)) == tuple(v)
    m = cone_multiplicity(rays)
    assert all(m % x.denominator == 0 for x in c)


def test_scale_to_lattice():
    assert scale_to_lattice((Fraction(1, 2), Fraction(-1, 3))) == (3, -2)


# -- exact LP against a floating-point reference ---------------------------------


def test_lp_examples():
    res = lp_minimize([1, 1], A_ub=[[-1, -2]], b_ub=[-4])
    assert res.value == 2 and res.x == (0, 2)
    assert lp_minimize([1], A_eq=[[1]], b_eq=[-1]) is None
    with pytest.raises(UnboundedLP):
        lp_minimize([-1, 0], A_ub=[[0, 1]], b_ub=[1])
    x = lp_feasible_point(2, A_ub=[[1, 1]], b_ub=[-1], free=True)
    assert x is not None and x[0] + x[1] <= -1


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4),
    st.lists(st.integers(-3, 5), min_size=4, max_size=4),
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
    st.booleans(),
)
def test_lp_matches_scipy(A, b, c, free):
    b = b[: len(A)]
    # bounded box keeps both solvers away from unboundedness
    A_box = A + [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    b_box = b + [4, 4, 4]
    if free:
        A_box += [[-1 if i == j else 0 for j in range(3)] for i in range(3)]
        b_box += [4, 4, 4]
    ours = lp_minimize(c, A_box, b_box, free=free)
    ref = linprog(c, A_ub=A_box, b_ub=b_box, bounds=[(None, None) if free else (0, None)] * 3, method="highs")
    if ours is None:
        assert ref.status == 2
    else:
        assert ref.status == 0
        assert abs(float(ours.value) - ref.fun) < 1e-7
        assert all(sum(Fraction(a) * x for a, x in zip(row, ours.x)) <= bb for row, bb in zip(A_box, b_box))
