"""Reduced Groebner bases under pure lex order (Buchberger with Gebauer-Moeller).

Internally polynomials are lists of ``(exponent, int)`` pairs sorted in
decreasing order, with exponents encoded so that plain tuple comparison
is the monomial order. Coefficients are kept integral and primitive; only
the final reduced basis is made monic.

Zero-dimensional ideals can also be handled by a graded reverse lex basis
followed by an FGLM change of order to lex (``fglm_lex_basis``), which
avoids most of the coefficient growth of a direct lex computation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .polynomial import Polynomial, RegistryMismatch, VarOrder

log = logging.getLogger(__name__)

Term = Tuple[Tuple[int, ...], int]


# ---------------------------------------------------------------------------
# conversion between Polynomial and the internal form
# ---------------------------------------------------------------------------

def _to_internal(p: Polynomial, perm, ops=None) -> List[Term]:
    if not p.terms:
        return []
    enc = (ops or _Lex).encode
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    terms = [(enc(tuple(e[i] for i in perm)), int(c * den)) for e, c in p.terms.items()]
    terms.sort(reverse=True)
    return _primitive(terms)


def _from_internal(f: List[Term], perm, variables, monic=True, ops=None) -> Polynomial:
    n = len(variables)
    dec = (ops or _Lex).decode
    inv = [0] * n
    for pos, i in enumerate(perm):
        inv[i] = pos
    lc = f[0][1] if monic else 1
    t = {}
    for e, c in f:
        e = dec(e)
        t[tuple(e[inv[i]] for i in range(n))] = Fraction(c, lc)
    return Polynomial._raw(t, tuple(variables))


def _primitive(f: List[Term]) -> List[Term]:
    if not f:
        return f
    g = 0
    for _, c in f:
        g = gcd(g, c)
        if g == 1:
            break
    if f[0][1] < 0:
        g = -g
    if g == 1:
        return f
    return [(e, c // g) for e, c in f]


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class _Lex:
    """Exponents in order position, greatest variable first."""

    name = "lex"
    divides = staticmethod(_divides)
    lcm = staticmethod(_lcm)
    coprime = staticmethod(_coprime)
    degree = staticmethod(sum)

    @staticmethod
    def encode(e):
        return e

    @staticmethod
    def decode(t):
        return t


class _Grevlex:
    """``(deg, -e_n, ..., -e_1)``: tuple order is graded reverse lex.

    The map is linear, so products and quotients of monomials are plain
    tuple sums and differences of their codes.
    """

    name = "grevlex"

    @staticmethod
    def encode(e):
        return (sum(e),) + tuple(-x for x in reversed(e))

    @staticmethod
    def decode(t):
        return tuple(-x for x in reversed(t[1:]))

    @staticmethod
    def divides(a, b) -> bool:
        return all(x >= y for x, y in zip(a[1:], b[1:]))

    @staticmethod
    def lcm(a, b):
        m = tuple(x if x < y else y for x, y in zip(a[1:], b[1:]))
        return (-sum(m),) + m

    @staticmethod
    def coprime(a, b) -> bool:
        return all(not (x and y) for x, y in zip(a[1:], b[1:]))

    @staticmethod
    def degree(t) -> int:
        return t[0]


LEX, GREVLEX = _Lex, _Grevlex


def _combine(a: int, f: List[Term], b: int, shift, g: List[Term]) -> List[Term]:
    """Return ``a*f - b*x^shift*g`` as a sorted term list (merge)."""
    gs = [(tuple(x + y for x, y in zip(e, shift)), c) for e, c in g]
    out = []
    i = j = 0
    nf, ng = len(f), len(gs)
    while i < nf and j < ng:
        ef, cf = f[i]
        eg, cg = gs[j]
        if ef > eg:
            out.append((ef, a * cf))
            i += 1
        elif eg > ef:
            out.append((eg, -b * cg))
            j += 1
        else:
            c = a * cf - b * cg
            if c:
                out.append((ef, c))
            i += 1
            j += 1
    while i < nf:
        ef, cf = f[i]
        out.append((ef, a * cf))
        i += 1
    while j < ng:
        eg, cg = gs[j]
        out.append((eg, -b * cg))
        j += 1
    return out


def _spoly(f: List[Term], g: List[Term], ops=_Lex) -> List[Term]:
    ef, cf = f[0]
    eg, cg = g[0]
    m = ops.lcm(ef, eg)
    d = gcd(cf, cg)
    a, b = cg // d, cf // d
    # a*x^(m-ef)*f - b*x^(m-eg)*g
    sf = _sub(m, ef)
    fs = [(tuple(x + y for x, y in zip(e, sf)), c) for e, c in f]
    return _combine(a, fs, b, _sub(m, eg), g)


def _normal_form(f: List[Term], basis: Sequence[List[Term]], full=True, ops=_Lex) -> List[Term]:
    """Reduce ``f`` modulo ``basis`` (integer, primitive result up to sign)."""
    if not f or not basis:
        return f
    _divides = ops.divides
    lms = [g[0][0] for g in basis]
    done: List[Term] = []
    steps = 0
    while f:
        e, c = f[0]
        red = None
        for k, m in enumerate(lms):
            if _divides(m, e):
                if red is None or len(basis[k]) < len(basis[red]):
                    red = k
        if red is None:
            if not full:
                return _primitive(done + f)
            done.append(f[0])
            f = f[1:]
            continue
        g = basis[red]
        cg = g[0][1]
        d = gcd(c, cg)
        a, b = cg // d, c // d
        f = _combine(a, f, b, _sub(e, g[0][0]), g)
        if a != 1 and a != -1 and done:
            done = [(x, a * y) for x, y in done]
        elif a == -1 and done:
            done = [(x, -y) for x, y in done]
        steps += 1
        if steps % 8 == 0 and f:
            # strip content jointly from the reduced prefix and the rest
            g0 = 0
            for _, y in done:
                g0 = gcd(g0, y)
                if g0 == 1:
                    break
            if g0 != 1:
                for _, y in f:
                    g0 = gcd(g0, y)
                    if g0 == 1:
                        break
            if g0 > 1:
                done = [(x, y // g0) for x, y in done]
                f = [(x, y // g0) for x, y in f]
    return _primitive(done)


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------

@dataclass
class GroebnerStats:
    pairs_considered: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0
    basis_size_peak: int = 0
    extra: dict = field(default_factory=dict)


def _update(G, pairs, h, polys, sugar, ops=_Lex):
    """Gebauer-Moeller installation of new element ``h`` (indices into polys)."""
    _lcm, _coprime, _divides, _degree = ops.lcm, ops.coprime, ops.divides, ops.degree
    lm = lambda i: polys[i][0][0]
    lh = lm(h)
    C = list(G)
    D = []
    while C:
        g1 = C.pop(0)
        l1 = _lcm(lh, lm(g1))
        if _coprime(lh, lm(g1)):
            D.append(g1)
            continue
        if any(_divides(_lcm(lh, lm(g2)), l1) for g2 in C) or \
                any(_divides(_lcm(lh, lm(g2)), l1) for g2 in D):
            continue
        D.append(g1)
    E = [g for g in D if not _coprime(lh, lm(g))]
    kept = []
    for (g1, g2, m, sg) in pairs:
        if _divides(lh, m) and _lcm(lm(g1), lh) != m and _lcm(lh, lm(g2)) != m:
            continue
        kept.append((g1, g2, m, sg))
    for g in E:
        m = _lcm(lh, lm(g))
        sg = max(sugar[h] + _degree(m) - _degree(lh),
                 sugar[g] + _degree(m) - _degree(lm(g)))
        kept.append((g, h, m, sg))
    G = [g for g in G if not _divides(lh, lm(g))]
    G.append(h)
    return G, kept


def _select(pairs, strategy, ops=_Lex):
    if strategy == "sugar":
        key = lambda p: (p[3], p[2])
    elif strategy == "lcm":
        key = lambda p: p[2]
    else:  # "normal": total degree of the lcm, then the monomial order
        key = lambda p: (ops.degree(p[2]), p[2])
    best = min(range(len(pairs)), key=lambda i: key(pairs[i]))
    return pairs.pop(best)


def _interreduce(G: List[List[Term]], ops=_Lex) -> List[List[Term]]:
    """Minimal, fully reduced basis; sorted with the largest leading monomial last."""
    _divides = ops.divides
    G = sorted(G, key=lambda f: f[0][0])
    minimal = []
    for i, f in enumerate(G):
        lf = f[0][0]
        if any(_divides(g[0][0], lf) for j, g in enumerate(G) if j != i and
               (g[0][0] != lf or j < i)):
            continue
        minimal.append(f)
    out = []
    for i, f in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        # the head survives: no other leading monomial divides it
        r = _normal_form(f, others, ops=ops)
        if r[0][1] < 0:
            r = [(e, -c) for e, c in r]
        out.append(r)
    return out


def _buchberger_internal(F: List[List[Term]], strategy="lcm", stats=None, ops=_Lex):
    polys: List[List[Term]] = []
    sugar: List[int] = []
    G: List[int] = []
    pairs = []
    F = [f for f in F if f]
    F.sort(key=lambda f: f[0][0])
    for f in F:
        f = _normal_form(f, [polys[g] for g in G], ops=ops)
        if not f:
            continue
        polys.append(f)
        sugar.append(max(ops.degree(e) for e, _ in f))
        G, pairs = _update(G, pairs, len(polys) - 1, polys, sugar, ops)
    while pairs:
        g1, g2, m, sg = _select(pairs, strategy, ops)
        if stats is not None:
            stats.pairs_considered += 1
        s = _spoly(polys[g1], polys[g2], ops)
        h = _normal_form(s, [polys[g] for g in G], ops=ops)
        if stats is not None:
            stats.pairs_reduced += 1
        if not h:
            if stats is not None:
                stats.zero_reductions += 1
            continue
        polys.append(h)
        sugar.append(max(sg, max(ops.degree(e) for e, _ in h)))
        if all(x == 0 for x in h[0][0]):
            # the ideal is the whole ring
            return [[(h[0][0], 1)]]
        G, pairs = _update(G, pairs, len(polys) - 1, polys, sugar, ops)
        if stats is not None:
            stats.basis_size_peak = max(stats.basis_size_peak, len(G))
    return _interreduce([polys[g] for g in G], ops)


def _prepare(polys: Sequence[Polynomial], order: VarOrder, ops=_Lex):
    polys = [p for p in polys]
    if not polys:
        return None, None, []
    variables = polys[0].variables
    for p in polys:
        if p.variables != variables:
            raise RegistryMismatch(f"{p.variables} vs {variables}")
    perm = order.permutation(variables)
    return variables, perm, [_to_internal(p, perm, ops) for p in polys]


def buchberger(F: Sequence[Polynomial], order: VarOrder, strategy: str = "lcm",
               stats: Optional[GroebnerStats] = None) -> List[Polynomial]:
    """Reduced Groebner basis of ``<F>`` under pure lex ``order``.

    The result is monic and listed from the smallest leading monomial up,
    so for an ideal in shape position the univariate eliminant comes first.

    >>> from realrank.algebra.polynomial import parse_polynomial as P
    >>> vs = ("x", "y")
    >>> [str(g) for g in buchberger([P("x-1", vs), P("y-2", vs)], VarOrder(vs))]
    ['y-2', 'x-1']
    """
    F = [f for f in F if not f.is_zero()]
    if not F:
        return []
    variables, perm, internal = _prepare(F, order)
    G = _buchberger_internal(internal, strategy=strategy, stats=stats)
    return [_from_internal(g, perm, variables) for g in G]


def grevlex_basis(F: Sequence[Polynomial], order: VarOrder,
                  stats: Optional[GroebnerStats] = None) -> List[Polynomial]:
    """Reduced basis under graded reverse lex with the variable ranking of ``order``."""
    F = [f for f in F if not f.is_zero()]
    if not F:
        return []
    variables, perm, internal = _prepare(F, order, _Grevlex)
    G = _buchberger_internal(internal, "normal", stats, _Grevlex)
    return [_from_internal(g, perm, variables, ops=_Grevlex) for g in G]


class NotZeroDimensional(ValueError):
    pass


def _content(v) -> int:
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    return g


def _fglm(G: List[List[Term]], n: int) -> List[List[Tuple[Tuple[int, ...], Fraction]]]:
    """Reduced lex basis from a reduced grevlex basis of a zero-dimensional ideal.

    ``G`` holds grevlex codes; the result holds lex exponents (order
    position), monic, smallest leading monomial first. Normal forms are
    integer vectors over the grevlex standard monomials, scaled to be
    primitive; only the final relations are turned into fractions.
    """
    enc, dec = _Grevlex.encode, _Grevlex.decode
    heads = [g[0][0] for g in G]
    exps = [dec(h) for h in heads]
    for i in range(n):
        if not any(e[i] > 0 and sum(e) == e[i] for e in exps):
            raise NotZeroDimensional(f"no pure power of variable {i} among the leading monomials")

    def standard(m):
        return not any(_Grevlex.divides(h, m) for h in heads)

    units = [enc(tuple(int(j == i) for j in range(n))) for i in range(n)]
    std = [enc((0,) * n)]
    seen = set(std)
    for t in std:
        for u in units:
            m = tuple(x + y for x, y in zip(t, u))
            if m not in seen and standard(m):
                seen.add(m)
                std.append(m)
    std.sort()
    pos = {t: k for k, t in enumerate(std)}
    D = len(std)
    reducers = [(g[0][0], g[0][1], g[1:]) for g in G]
    cache = {}

    def nf_mono(m):
        # (integer vector, denominator) with NF(m) = vector / denominator
        hit = cache.get(m)
        if hit is not None:
            return hit
        if m in pos:
            v = [0] * D
            v[pos[m]] = 1
            out = (v, 1)
        else:
            h, lc, tail = next(r for r in reducers if _Grevlex.divides(r[0], m))
            shift = _sub(m, h)
            # m = -(1/lc) * sum c * shifted tail, each term reduced in turn
            parts = [(c, nf_mono(tuple(x + y for x, y in zip(e, shift)))) for e, c in tail]
            den = lc
            for _, (_, d) in parts:
                den = den * d // gcd(den, d)
            v = [0] * D
            for c, (w, d) in parts:
                f = -c * (den // d)
                for k, x in enumerate(w):
                    if x:
                        v[k] += f * x
            den *= lc
            den_sign = 1 if den > 0 else -1
            g = gcd(_content(v), den)
            out = ([x * den_sign // g for x in v], abs(den) // g)
        cache[m] = out
        return out

    # multiplication by each variable, column t = NF(x_i * t)
    mult = []
    for u in units:
        cols = [nf_mono(tuple(x + y for x, y in zip(t, u))) for t in std]
        den = 1
        for _, d in cols:
            den = den * d // gcd(den, d)
        mult.append(([[x * (den // d) for x in w] for w, d in cols], den))

    def times(i, vd):
        # NF(x_i * m) from NF(m) = v / d, exactly
        v, d = vd
        cols, den = mult[i]
        out = [0] * D
        for k, x in enumerate(v):
            if x:
                for j, y in enumerate(cols[k]):
                    if y:
                        out[j] += x * y
        den *= d
        g = gcd(_content(out), den)
        return ([x // g for x in out], den // g) if g > 1 else (out, den)

    staircase: List[Tuple[int, ...]] = []
    vectors = {}       # lex monomial -> NF as (integer vector, denominator)
    rows = []          # (pivot, vector, combination over staircase indices)
    lex_heads: List[Tuple[int, ...]] = []
    result = []
    one = (0,) * n
    todo = {one: None}
    while todo:
        m = min(todo)
        src = todo.pop(m)
        if any(_divides(h, m) for h in lex_heads):
            continue
        if src is None:
            nf = nf_mono(enc(m))
        else:
            i, prev = src
            nf = times(i, vectors[prev])
        # vec = den * NF(m), recorded as den times the new staircase element
        vec = list(nf[0])
        combo = {len(staircase): nf[1]}
        for piv, rv, rc in rows:
            a = vec[piv]
            if a:
                b = rv[piv]
                vec = [b * x - a * y for x, y in zip(vec, rv)]
                keys = set(combo) | set(rc)
                combo = {j: b * combo.get(j, 0) - a * rc.get(j, 0) for j in keys}
                combo = {j: c for j, c in combo.items() if c}
                g = gcd(_content(vec), _content(combo.values()))
                if g > 1:
                    vec = [x // g for x in vec]
                    combo = {j: c // g for j, c in combo.items()}
        if any(vec):
            piv = max(k for k, x in enumerate(vec) if x)
            rows.append((piv, vec, combo))
            vectors[m] = nf
            staircase.append(m)
            for i in range(n):
                nb = tuple(x + (j == i) for j, x in enumerate(m))
                if nb not in todo:
                    todo[nb] = (i, m)
        else:
            lead = combo.pop(len(staircase))
            g = [(m, Fraction(1))]
            g += sorted(((staircase[j], Fraction(c, lead)) for j, c in combo.items()),
                        reverse=True)
            result.append(g)
            lex_heads.append(m)
    return result


def fglm_lex_basis(F: Sequence[Polynomial], order: VarOrder,
                   stats: Optional[GroebnerStats] = None) -> List[Polynomial]:
    """Reduced lex basis via grevlex Buchberger and an FGLM change of order.

    Same output as :func:`buchberger` for zero-dimensional ideals; raises
    :class:`NotZeroDimensional` otherwise.
    """
    F = [f for f in F if not f.is_zero()]
    if not F:
        raise NotZeroDimensional("the zero ideal")
    variables, perm, internal = _prepare(F, order, _Grevlex)
    G = _buchberger_internal(internal, "normal", stats, _Grevlex)
    n = len(variables)
    if len(G) == 1 and all(x == 0 for x in G[0][0][0]):
        return [Polynomial.constant(1, variables)]
    inv = [0] * n
    for pos, i in enumerate(perm):
        inv[i] = pos
    out = []
    for g in _fglm(G, n):
        out.append(Polynomial._raw({tuple(e[inv[i]] for i in range(n)): c for e, c in g},
                                   tuple(variables)))
    return out


def reduce(f: Polynomial, G: Sequence[Polynomial], order: VarOrder) -> Polynomial:
    """Normal form of ``f`` modulo ``G`` with exact rational coefficients.

    The remainder is returned on the true scale: ``f - r`` lies in the
    ideal generated by ``G`` and no term of ``r`` is divisible by a
    leading monomial of ``G``.
    """
    G = [g for g in G if not g.is_zero()]
    if not G or f.is_zero():
        return f
    for g in G:
        if g.variables != f.variables:
            raise RegistryMismatch(f"{g.variables} vs {f.variables}")
    # division in Q[x]: use monic reducers so the remainder keeps f's scale
    perm = order.permutation(f.variables)
    key = lambda e: tuple(e[i] for i in perm)
    basis = []
    for g in G:
        terms = sorted(g.terms.items(), key=lambda t: key(t[0]), reverse=True)
        lc = terms[0][1]
        basis.append([(key(e), c / lc) for e, c in terms])
    cur = {key(e): c for e, c in f.terms.items()}
    rem = {}
    while cur:
        e = max(cur)
        c = cur[e]
        for g in basis:
            if _divides(g[0][0], e):
                shift = _sub(e, g[0][0])
                for eg, cg in g:
                    t = tuple(x + y for x, y in zip(eg, shift))
                    v = cur.get(t, 0) - c * cg
                    if v:
                        cur[t] = v
                    else:
                        cur.pop(t, None)
                break
        else:
            rem[e] = cur.pop(e)
    n = len(f.variables)
    inv = [0] * n
    for pos, i in enumerate(perm):
        inv[i] = pos
    return Polynomial._raw({tuple(e[inv[i]] for i in range(n)): c for e, c in rem.items()},
                           f.variables)


def s_polynomial(f: Polynomial, g: Polynomial, order: VarOrder) -> Polynomial:
    ef, cf = f.leading_term(order)
    eg, cg = g.leading_term(order)
    m = tuple(max(a, b) for a, b in zip(ef, eg))
    vs = f.variables
    mf = Polynomial({tuple(a - b for a, b in zip(m, ef)): Fraction(1) / cf}, vs)
    mg = Polynomial({tuple(a - b for a, b in zip(m, eg)): Fraction(1) / cg}, vs)
    return mf * f - mg * g


def is_groebner(G: Sequence[Polynomial], order: VarOrder) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    G = [g for g in G if not g.is_zero()]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if not reduce(s_polynomial(G[i], G[j], order), G, order).is_zero():
                return False
    return True


@dataclass
class ShapeReport:
    in_shape_position: bool
    eliminant: Optional[Polynomial]
    eliminant_variable: Optional[str]
    degree: int
    reason: str = ""


def shape_check(GB: Sequence[Polynomial], order: VarOrder) -> ShapeReport:
    """Test whether a reduced lex basis is in shape position.

    Shape position means one generator is univariate in the least variable
    of ``order`` and every other generator is ``lc*x + tail(least)`` for a
    distinct variable ``x``.
    """
    if not GB:
        return ShapeReport(False, None, None, -1, "empty basis")
    last = order.names[-1]
    uni = [g for g in GB if set(g.free_symbols()) <= {last} and not g.is_constant()]
    if any(g.is_constant() for g in GB):
        return ShapeReport(False, None, last, 0, "basis is {1}: inconsistent system")
    if len(uni) != 1:
        return ShapeReport(False, uni[0] if uni else None, last,
                           uni[0].degree(last) if uni else -1,
                           f"{len(uni)} univariate generators in {last}")
    g1 = uni[0]
    deg = g1.degree(last)
    others = [g for g in GB if g is not g1]
    leads = set()
    for g in others:
        e, _ = g.leading_term(order)
        lead_vars = [v for v, k in zip(g.variables, e) if k]
        if len(lead_vars) != 1 or lead_vars[0] == last or sum(e) != 1:
            return ShapeReport(False, g1, last, deg, f"generator not linear in its leading variable: {g}")
        x = lead_vars[0]
        rest = g - Polynomial({e: g.terms[e]}, g.variables)
        if not set(rest.free_symbols()) <= {last}:
            return ShapeReport(False, g1, last, deg, f"tail of {x}-generator depends on other variables")
        leads.add(x)
    if len(leads) != len(order.names) - 1:
        return ShapeReport(False, g1, last, deg, "not every variable has a linear generator")
    return ShapeReport(True, g1, last, deg)
