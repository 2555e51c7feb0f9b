"""Elimination backends producing the univariate eliminant G1.

``groebner``  reduced lex basis of the full system (any shape).
``resultant`` fraction-free elimination of the s-variables followed by a
              Sylvester resultant in c3; only for K = 3 minimal shapes.
``projected`` s-free minors system in the c-variables, solved by a grevlex
              basis and an FGLM change to lex; meant for the larger minimal
              shapes where the full lex basis is out of reach.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .algebra.groebner import (NotZeroDimensional, ShapeReport, buchberger, fglm_lex_basis,
                               shape_check)
from .algebra.matrix import resultant
from .algebra.polynomial import Polynomial, VarOrder
from .roots import UnivariatePoly, poly_gcd
from .systems import PolySystem, build_projected_system, build_system, c_names, gamma_matrix
from .tensor import Tensor3, classify, expected_degree

BACKENDS = ("groebner", "resultant", "projected")


@dataclass
class Elimination:
    eliminant: Optional[UnivariatePoly]
    variable: str
    backend: str
    basis: List[Polynomial] = field(default_factory=list)
    shape: Optional[ShapeReport] = None
    system: Optional[PolySystem] = None
    # resultant backend: the two bivariate conditions in (c2, c3)
    conditions: List[Polynomial] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return self.eliminant.degree if self.eliminant is not None else -1


def groebner_eliminant(system: PolySystem, backend: str = "groebner", G=None) -> Elimination:
    if G is None:
        G = buchberger(system.equations, system.order)
    rep = shape_check(G, system.order)
    var = system.eliminant_variable
    el = None
    if rep.eliminant is not None:
        el = UnivariatePoly.from_polynomial(rep.eliminant, var)
    elif G:
        # fall back to any generator free of every other variable
        for g in G:
            if set(g.free_symbols()) <= {var} and not g.is_constant():
                el = UnivariatePoly.from_polynomial(g, var)
                break
    out = Elimination(el, var, backend, G, rep, system)
    if not rep.in_shape_position:
        out.notes.append(f"basis not in shape position: {rep.reason}")
    return out


def _bareiss_rows(rows: List[List[Polynomial]], ncols_elim: int) -> List[List[Polynomial]]:
    """Fraction-free row reduction of the first ``ncols_elim`` columns (in place copy)."""
    a = [list(r) for r in rows]
    n = len(a)
    vs = a[0][0].variables
    prev = Polynomial.constant(1, vs)
    for k in range(ncols_elim):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                raise ArithmeticError("rank-deficient s-block; no pivot")
            a[k], a[swap] = a[swap], a[k]
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, len(a[i])):
                num = a[i][j] * piv - a[i][k] * a[k][j]
                a[i][j] = num if k == 0 else num.exact_div(prev)
            a[i][k] = Polynomial.zero(vs)
        prev = piv
    return a


def _row_orders(n: int):
    yield list(range(n))
    yield list(range(n - 1, -1, -1))
    half = n // 2
    inter = []
    for i in range(half):
        inter += [i, i + half]
    yield inter
    yield [i for i in range(1, n)] + [0]


def resultant_eliminant(X: Tensor3) -> Elimination:
    """Eliminant in c2 for a K = 3 minimal array via two resultants and a gcd."""
    s = X.shape
    cls = classify(s)
    if s.K != 3 or cls.regime != "minimal":
        raise ValueError("resultant backend needs a K = 3 minimal shape")
    target = expected_degree(s)
    Gam = gamma_matrix(X, ("c2", "c3"))
    # rows of Gamma' are the equations; columns are s1..sI (s_I = 1)
    M = Gam.transpose().entries
    n = len(M)
    g: Optional[UnivariatePoly] = None
    conds: List[Polynomial] = []
    notes = []
    for perm in _row_orders(n):
        try:
            red = _bareiss_rows([M[i] for i in perm], s.I - 1)
        except ArithmeticError:
            continue
        p, q = red[n - 2][s.I - 1], red[n - 1][s.I - 1]
        if p.is_zero() or q.is_zero() or p.degree("c3") <= 0 or q.degree("c3") <= 0:
            continue
        if not conds:
            conds = [p, q]
        R = resultant(p, q, "c3")
        if R.is_zero():
            continue
        u = UnivariatePoly.from_polynomial(R, "c2")
        g = u if g is None else poly_gcd(g, u)
        if g is not None and g.degree <= target:
            break
    if g is None:
        notes.append("resultant backend produced no nonzero resultant")
        return Elimination(None, "c2", "resultant", conditions=conds, notes=notes)
    g = g.primitive()
    if g.degree != target:
        notes.append(f"resultant eliminant degree {g.degree} differs from expected {target}")
    return Elimination(g, "c2", "resultant", conditions=conds, notes=notes)


def projected_eliminant(X: Tensor3, order: Optional[VarOrder] = None) -> Elimination:
    """Eliminant from the minors of the projected pencil; c-variables only."""
    cs = c_names(X.K)
    if order is not None:
        order = VarOrder([v for v in order.names if v in cs])
    try:
        system = build_projected_system(X, order)
    except ValueError as e:
        out = groebner_eliminant(build_system(X), "projected")
        out.notes.append(f"projection unavailable ({e}); used the full system")
        return out
    try:
        G = fglm_lex_basis(system.equations, system.order)
    except NotZeroDimensional:
        G = buchberger(system.equations, system.order)
    return groebner_eliminant(system, "projected", G)


def eliminate(X: Tensor3, backend: str = "groebner", order: Optional[VarOrder] = None) -> Elimination:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")
    if backend == "resultant":
        return resultant_eliminant(X)
    if backend == "projected":
        return projected_eliminant(X, order)
    return groebner_eliminant(build_system(X, order))
