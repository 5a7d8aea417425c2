"""Exact integer and rational linear algebra over lattices.

Vectors are plain tuples: ``tuple[int, ...]`` for lattice vectors and
``tuple[Fraction, ...]`` for rational ones.  No floating point is used
anywhere; every routine here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple, Optional, Sequence

from .errors import NotInSpan, NotSimplicial, ZeroVector

IntVector = tuple[int, ...]
RatVector = tuple[Fraction, ...]


def int_vector(v: Sequence) -> IntVector:
    out = []
    for x in v:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integral coordinate {x}")
            x = x.numerator
        if isinstance(x, bool) or int(x) != x:
            raise ValueError(f"non-integral coordinate {x!r}")
        out.append(int(x))
    return tuple(out)


def rat_vector(v: Sequence) -> RatVector:
    return tuple(Fraction(x) for x in v)


def dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} != {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


def primitive_part(v: Sequence[int]) -> tuple[IntVector, int]:
    """Split ``v`` as ``g * p`` with ``p`` primitive and ``g`` the content."""
    v = int_vector(v)
    g = content(v)
    if g == 0:
        raise ZeroVector("the zero vector has no primitive part")
    return tuple(x // g for x in v), g


def is_primitive(v: Sequence[int]) -> bool:
    return content(int_vector(v)) == 1


def scale_to_lattice(v: Sequence[Fraction]) -> IntVector:
    """Smallest positive multiple of a rational vector that is a primitive
    lattice vector."""
    v = rat_vector(v)
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return primitive_part([int(x * den) for x in v])[0]


# -- matrices -----------------------------------------------------------------


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def pivot_columns(rows: Sequence[Sequence]) -> list[int]:
    """Columns on which projection is injective on the row space."""
    rows = [[Fraction(x) for x in r] for r in rows]
    return _echelon(rows)[1] if rows else []


def rank(rows: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in r] for r in rows]
    return len(_echelon(rows)[1]) if rows else 0


def determinant(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def solve(columns: Sequence[Sequence], v: Sequence) -> Optional[RatVector]:
    """Solve ``sum_i x_i * columns[i] = v`` exactly.

    Returns ``None`` when ``v`` is outside the span.  The columns must be
    linearly independent for the solution to be unique; callers check that.
    """
    k = len(columns)
    n = len(v)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    red, pivots = _echelon(aug)
    if k in pivots:
        return None
    x = [Fraction(0)] * k
    for row, c in zip(red, pivots):
        x[c] = row[k]
    return tuple(x)


def hermite_rows(vectors: Sequence[Sequence[int]]) -> list[IntVector]:
    """Row-style Hermite normal form of an integer basis (zero rows dropped).

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``, which makes the output canonical for the row lattice.
    """
    m = [list(int_vector(v)) for v in vectors]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[p] = m[p], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-a for a in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    return [tuple(row) for row in m[:r]]


def integer_kernel(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> list[IntVector]:
    """Basis of the saturated lattice ``{v in Z^n : A v = 0}``.

    Column operations by unimodular moves bring ``A`` to column echelon form;
    the transformation columns sitting over the zero columns span the
    kernel lattice.  The basis is returned in Hermite normal form.
    """
    rows = [list(int_vector(r)) for r in A]
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    if any(len(r) != n for r in rows):
        raise ValueError("ragged matrix")
    U = [[int(i == j) for j in range(n)] for i in range(n)]  # columns of U are U[.][j]

    def col_op(dst, src, q):
        # column dst -= q * column src
        for r in rows:
            r[dst] -= q * r[src]
        for r in U:
            r[dst] -= q * r[src]

    def col_swap(a, b):
        for r in rows:
            r[a], r[b] = r[b], r[a]
        for r in U:
            r[a], r[b] = r[b], r[a]

    p = 0
    for r in rows:
        if p == n:
            break
        while True:
            nz = [j for j in range(p, n) if r[j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(r[j]))
            col_swap(p, j0)
            for j in range(p + 1, n):
                if r[j]:
                    col_op(j, p, r[j] // r[p])
            if all(r[j] == 0 for j in range(p + 1, n)):
                p += 1
                break
    basis = [tuple(U[i][j] for i in range(n)) for j in range(p, n)]
    return hermite_rows(basis)


def cone_coordinates(rays: Sequence[Sequence[int]], v: Sequence) -> RatVector:
    """Exact coefficients ``c`` with ``v = sum c_i * rays[i]``.

    Entries may be negative; membership in the cone is the caller's test.
    """
    if rank(rays) < len(rays):
        raise NotSimplicial(f"rays {list(rays)} are linearly dependent")
    c = solve(rays, v)
    if c is None:
        raise NotInSpan(f"{tuple(v)} is not in the span of {list(rays)}")
    return c


def minor_gcd(vectors: Sequence[Sequence[int]]) -> int:
    """gcd of the maximal minors of the matrix with the given rows."""
    k = len(vectors)
    if k == 0:
        return 1
    n = len(vectors[0])
    g = 0
    for cols in combinations(range(n), k):
        d = determinant([[v[c] for c in cols] for v in vectors])
        g = math.gcd(g, int(d))
    return g


def cone_multiplicity(rays: Sequence[Sequence[int]]) -> int:
    """Index of the lattice generated by ``rays`` inside its saturation."""
    g = minor_gcd([int_vector(r) for r in rays])
    if g == 0:
        raise NotSimplicial(f"rays {list(rays)} are linearly dependent")
    return g


# -- exact linear programming -------------------------------------------------


class LPResult(NamedTuple):
    value: Fraction
    x: RatVector


class UnboundedLP(ArithmeticError):
    """The objective is unbounded below on the feasible set."""


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = T[r][c]
    T[r] = [x / piv for x in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, T[r])]
    basis[r] = c


def _run_simplex(T, basis, cost, allowed) -> bool:
    """Minimise ``cost`` over the tableau in place with Bland's rule.

    ``T`` rows are ``[A | b]`` in canonical form for ``basis``.  Returns
    ``False`` if the objective is unbounded below.
    """
    ncol = len(T[0]) - 1
    while True:
        # reduced costs c_j - c_B B^-1 A_j
        entering = None
        for j in range(ncol):
            if j not in allowed or j in basis:
                continue
            rc = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(len(T)))
            if rc < 0:
                entering = j
                break
        if entering is None:
            return True
        best = None
        for i, row in enumerate(T):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, basis, best[1], entering)


def _simplex_standard(c, A, b) -> Optional[LPResult]:
    """``min c.x`` subject to ``A x = b``, ``x >= 0`` by two-phase simplex."""
    n = len(c)
    rows = []
    for a_row, bi in zip(A, b):
        a_row = [Fraction(x) for x in a_row]
        bi = Fraction(bi)
        if bi < 0:
            a_row, bi = [-x for x in a_row], -bi
        rows.append((a_row, bi))
    m = len(rows)
    T = [a_row + [Fraction(int(i == k)) for k in range(m)] + [bi] for i, (a_row, bi) in enumerate(rows)]
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    _run_simplex(T, basis, phase1, set(range(n + m)))
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return None
    # drive artificial variables out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j] != 0), None)
            if j is None:
                continue
            _pivot(T, basis, i, j)
        keep.append(i)
    T = [T[i] for i in keep]
    basis = [basis[i] for i in keep]
    cost = [Fraction(x) for x in c] + [Fraction(0)] * m
    if not _run_simplex(T, basis, cost, set(range(n))):
        raise UnboundedLP("objective unbounded below")
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    return LPResult(sum(Fraction(ci) * xi for ci, xi in zip(c, x)), tuple(x))


def lp_minimize(
    objective: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: bool = False,
) -> Optional[LPResult]:
    """Minimise ``objective . x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    Variables are non-negative unless ``free``.  Returns ``None`` when the
    constraints are infeasible and raises ``UnboundedLP`` when the objective
    is unbounded below.  All arithmetic is over the rationals.
    """
    nvar = len(objective)
    # x = x_plus - x_minus for free variables, then one slack per inequality
    width = 2 * nvar if free else nvar
    nslack = len(A_ub)

    def expand(row):
        row = [Fraction(x) for x in row]
        if len(row) != nvar:
            raise ValueError("constraint row has the wrong length")
        return row + [-x for x in row] if free else row

    A, b = [], []
    for k, (row, bk) in enumerate(zip(A_ub, b_ub)):
        A.append(expand(row) + [Fraction(int(k == s)) for s in range(nslack)])
        b.append(Fraction(bk))
    for row, bk in zip(A_eq, b_eq):
        A.append(expand(row) + [Fraction(0)] * nslack)
        b.append(Fraction(bk))
    c = expand(objective) + [Fraction(0)] * nslack
    res = _simplex_standard(c, A, b)
    if res is None:
        return None
    x = res.x[:width]
    if free:
        x = tuple(p - q for p, q in zip(x[:nvar], x[nvar:]))
    return LPResult(res.value, tuple(x))


def lp_feasible_point(
    nvar: int,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: bool = False,
) -> Optional[RatVector]:
    res = lp_minimize([0] * nvar, A_ub, b_ub, A_eq, b_eq, free=free)
    return None if res is None else res.x


__all__ = [
    "IntVector",
    "RatVector",
    "LPResult",
    "UnboundedLP",
    "cone_coordinates",
    "cone_multiplicity",
    "content",
    "determinant",
    "dot",
    "hermite_rows",
    "int_vector",
    "integer_kernel",
    "is_primitive",
    "lp_feasible_point",
    "lp_minimize",
    "minor_gcd",
    "pivot_columns",
    "primitive_part",
    "rank",
    "rat_vector",
    "scale_to_lattice",
    "solve",
]
