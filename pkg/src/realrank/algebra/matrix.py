"""Polynomial matrices, fraction-free determinants and Sylvester resultants."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import List, Sequence

from .polynomial import Polynomial, RegistryMismatch


class PolyMatrix:
    """Rectangular matrix of polynomials sharing one registry."""

    def __init__(self, rows: Sequence[Sequence[Polynomial]]):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        variables = rows[0][0].variables
        for r in rows:
            for p in r:
                if p.variables != variables:
                    raise RegistryMismatch(f"{p.variables} vs {variables}")
        self.entries = rows
        self.variables = variables

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self):
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(c) for c in zip(*self.entries)])

    def subs(self, values) -> "PolyMatrix":
        return PolyMatrix([[p.subs(values) for p in r] for r in self.entries])

    def evaluate(self, values) -> List[list]:
        return [[p.evaluate(values) for p in r] for r in self.entries]

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"


def bareiss_det(M: PolyMatrix) -> Polynomial:
    """Determinant by Bareiss fraction-free elimination.

    Every division in the recurrence is exact, so entries stay
    polynomial. Row swaps handle zero pivots.

    >>> from realrank.algebra.polynomial import parse_polynomial as P
    >>> vs = ("c2", "c3")
    >>> str(bareiss_det(PolyMatrix([[P("c2", vs), P("0", vs)], [P("0", vs), P("c3", vs)]])))
    'c2*c3'
    """
    if M.rows != M.cols:
        raise ValueError(f"determinant needs a square matrix, got {M.rows}x{M.cols}")
    n = M.rows
    a = [list(r) for r in M.entries]
    vs = M.variables
    sign = 1
    prev = Polynomial.constant(1, vs)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return Polynomial.zero(vs)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * piv - a[i][k] * a[k][j]
                a[i][j] = num if k == 0 else num.exact_div(prev)
            a[i][k] = Polynomial.zero(vs)
        prev = piv
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def cofactor_det(M: PolyMatrix) -> Polynomial:
    """Leibniz expansion; exponential, kept as a test oracle for small matrices."""
    if M.rows != M.cols:
        raise ValueError("determinant needs a square matrix")
    n = M.rows
    total = Polynomial.zero(M.variables)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Polynomial.constant(-1 if inv % 2 else 1, M.variables)
        for i, j in enumerate(perm):
            term = term * M.entries[i][j]
            if term.is_zero():
                break
        total = total + term
    return total


def sylvester_matrix(f: Polynomial, g: Polynomial, var: str) -> PolyMatrix:
    m, n = f.degree(var), g.degree(var)
    if m <= 0 or n <= 0:
        raise ValueError(f"resultant needs positive degree in {var} (got {m}, {n})")
    fc = f.coefficients_in(var)
    gc = g.coefficients_in(var)
    zero = Polynomial.zero(f.variables)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + m - k] = fc.get(k, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + n - k] = gc.get(k, zero)
        rows.append(row)
    return PolyMatrix(rows)


def resultant(f: Polynomial, g: Polynomial, var: str) -> Polynomial:
    """Resultant of ``f`` and ``g`` with respect to ``var`` (Sylvester determinant)."""
    if f.variables != g.variables:
        raise RegistryMismatch(f"{f.variables} vs {g.variables}")
    return bareiss_det(sylvester_matrix(f, g, var))


def matrix_from_rationals(rows, variables) -> PolyMatrix:
    return PolyMatrix([[Polynomial.constant(Fraction(x), variables) for x in r] for r in rows])


def _rref(rows: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form over the rationals; returns (rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rational_rank(rows: Sequence[Sequence]) -> int:
    return len(_rref(rows)[1])


def null_space(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    """Basis of {x : M x = 0} for a rational matrix given by its rows."""
    if not rows:
        return []
    ncols = len(rows[0])
    a, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -a[r][f]
        basis.append(v)
    return basis


def left_null_space(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    """Basis of {s : s'M = 0}."""
    return null_space([list(c) for c in zip(*rows)])
