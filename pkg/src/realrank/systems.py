"""Polynomial systems whose real solutions encode rank-I decompositions.

General arrays: ``s'(X_k - c_k X_1) = 0`` for k = 2..K with ``s_I = 1``.
INDSCAL arrays: ``s'X_k = b_k b'`` for k = 1..J with one ``b`` entry fixed to 1.

The projected form of the general system drops s altogether: writing
``u = X_1's``, the equations say ``(u, c2 u, ..., cK u)`` lies in the column
space of the stacked slices ``M = [X_1'; ...; X_K']``. Left null vectors of M
turn that into a matrix ``P(c) = sum_k c_k L_k`` with J columns that must
lose rank, i.e. its J x J minors vanish. When M has full column rank the two
systems have the same solutions in c.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from itertools import combinations

from .algebra.matrix import PolyMatrix, bareiss_det, left_null_space
from .algebra.polynomial import Polynomial, VarOrder
from .tensor import Shape, Tensor3, indscal_asymmetry, TensorFormatError


@dataclass
class PolySystem:
    equations: List[Polynomial]
    order: VarOrder
    normalization: Dict[str, int]
    shape: Shape
    mode: str
    variables: tuple = field(default=())

    @property
    def eliminant_variable(self) -> str:
        return self.order.names[-1]

    def monomials(self) -> set:
        out = set()
        for p in self.equations:
            out.update(p.terms)
        return out

    def __len__(self):
        return len(self.equations)


def s_names(n: int) -> List[str]:
    return [f"s{i}" for i in range(1, n + 1)]


def c_names(K: int) -> List[str]:
    """c-variables greatest first: cK, ..., c3, c2."""
    return [f"c{k}" for k in range(K, 1, -1)]


def default_order(shape: Shape) -> VarOrder:
    return VarOrder(s_names(shape.I - 1) + c_names(shape.K))


def build_system(X: Tensor3, order: Optional[VarOrder] = None) -> PolySystem:
    """The (K-1)J bilinear equations in s1..s_{I-1}, c2..cK."""
    I, J, K = X.I, X.J, X.K
    if K < 2:
        raise ValueError("need at least two slices (K >= 2)")
    variables = tuple(s_names(I - 1) + c_names(K))
    order = order or VarOrder(variables)
    one = Polynomial.constant(1, variables)
    s = [Polynomial.var(v, variables) for v in s_names(I - 1)] + [one]
    X1 = X.slices[0]
    eqs = []
    for k in range(1, K):
        ck = Polynomial.var(f"c{k + 1}", variables)
        Xk = X.slices[k]
        for j in range(J):
            e = Polynomial.zero(variables)
            for i in range(I):
                a, b = Xk[i][j], X1[i][j]
                if a or b:
                    e = e + s[i] * (a - ck * b)
            eqs.append(e)
    return PolySystem(eqs, order, {"c1": 1, f"s{I}": 1}, X.shape, "general", variables)


def stacked_slices(X: Tensor3) -> List[List]:
    """M = [X_1'; X_2'; ...; X_K'], a KJ x I matrix (row k*J + j is column j of X_k)."""
    return [[X.slices[k][i][j] for i in range(X.I)] for k in range(X.K) for j in range(X.J)]


def projected_pencil(X: Tensor3, variables: Optional[Sequence[str]] = None) -> PolyMatrix:
    """P(c) with rows ``sum_k c_k l_k'`` for a basis l of the left null space of M (c1 = 1)."""
    K, J = X.K, X.J
    variables = tuple(variables) if variables else tuple(c_names(K))
    one = Polynomial.constant(1, variables)
    c = [one] + [Polynomial.var(f"c{k}", variables) for k in range(2, K + 1)]
    rows = []
    for l in left_null_space(stacked_slices(X)):
        row = []
        for j in range(J):
            e = Polynomial.zero(variables)
            for k in range(K):
                if l[k * J + j]:
                    e = e + c[k] * l[k * J + j]
            row.append(e)
        rows.append(row)
    if not rows:
        raise ValueError("stacked slices have no left null space")
    return PolyMatrix(rows)


def build_projected_system(X: Tensor3, order: Optional[VarOrder] = None) -> PolySystem:
    """The J x J minors of the projected pencil, in c2..cK only."""
    I, J, K = X.I, X.J, X.K
    if K < 2:
        raise ValueError("need at least two slices (K >= 2)")
    variables = tuple(c_names(K))
    order = order or VarOrder(variables)
    P = projected_pencil(X, variables)
    rows = P.entries
    if len(rows) != K * J - I:
        raise ValueError("stacked slices are rank deficient; the projection is not equivalent")
    if len(rows) < J:
        raise ValueError(f"projected pencil has {len(rows)} < J = {J} rows; no rank condition")
    eqs = []
    for pick in combinations(range(len(rows)), J):
        d = bareiss_det(PolyMatrix([rows[r] for r in pick]))
        if not d.is_zero():
            eqs.append(d)
    return PolySystem(eqs, order, {"c1": 1}, X.shape, "general", variables)


def indscal_variables(I: int, J: int, fixed: int) -> List[str]:
    return s_names(I) + [f"b{j}" for j in range(1, J + 1) if j != fixed]


def build_indscal_system(X: Tensor3, order: Optional[VarOrder] = None,
                         fixed_b: Optional[int] = None) -> PolySystem:
    """J*J equations ``sum_i s_i X[i][j][k] = b_j b_k`` with ``b_fixed = 1``.

    ``fixed_b`` is 1-based and defaults to J (the last entry), so the
    default eliminant lands in b_{J-1}.
    """
    if X.J != X.K:
        raise ValueError(f"INDSCAL arrays need J == K, got {X.shape}")
    bad = indscal_asymmetry(X)
    if bad is not None:
        raise TensorFormatError(f"INDSCAL slice symmetry violated at (i, j, k) = {bad}")
    I, J = X.I, X.J
    fixed = J if fixed_b is None else fixed_b
    if not 1 <= fixed <= J:
        raise ValueError(f"fixed_b must be in 1..{J}")
    variables = tuple(indscal_variables(I, J, fixed))
    order = order or VarOrder(variables)
    s = [Polynomial.var(v, variables) for v in s_names(I)]
    b = [Polynomial.constant(1, variables) if j == fixed else Polynomial.var(f"b{j}", variables)
         for j in range(1, J + 1)]
    eqs = []
    for k in range(J):
        for j in range(J):
            e = -(b[k] * b[j])
            for i in range(I):
                if X[i, j, k]:
                    e = e + s[i] * X[i, j, k]
            eqs.append(e)
    return PolySystem(eqs, order, {f"b{fixed}": 1}, X.shape, "indscal", variables)


def gamma_matrix(X: Tensor3, variables: Optional[Sequence[str]] = None) -> PolyMatrix:
    """Gamma = [X2 - c2 X1, ..., XK - cK X1], an I x (K-1)J matrix in c2..cK."""
    K = X.K
    variables = tuple(variables) if variables else tuple(f"c{k}" for k in range(2, K + 1))
    X1 = X.slices[0]
    rows = []
    for i in range(X.I):
        row = []
        for k in range(1, K):
            ck = Polynomial.var(f"c{k + 1}", variables)
            for j in range(X.J):
                row.append(Polynomial.constant(X.slices[k][i][j], variables) - ck * X1[i][j])
        rows.append(row)
    if not rows:
        raise ValueError("stacked slices have no left null space")
    return PolyMatrix(rows)
