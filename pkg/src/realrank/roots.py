"""Counting, isolating and refining real roots of exact univariate polynomials.

All decisions are made with exact rational arithmetic: Sturm sequences
for counting, sign tests at rational points for bisection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple, Union

from .algebra.polynomial import Polynomial

Bound = Union[Fraction, int, float, None]


class RootError(ValueError):
    pass


class UnivariatePoly:
    """Dense univariate polynomial, constant term first.

    >>> p = UnivariatePoly([-1, 0, 1])
    >>> p.degree, p(Fraction(3))
    (2, Fraction(8, 1))
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Sequence, var: str = "x"):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)
        self.var = var

    @classmethod
    def from_polynomial(cls, p: Polynomial, var: Optional[str] = None) -> "UnivariatePoly":
        used = p.free_symbols()
        if var is None:
            if len(used) > 1:
                raise ValueError(f"polynomial is not univariate: {used}")
            var = used[0] if used else p.variables[0]
        elif any(v != var for v in used):
            raise ValueError(f"polynomial depends on {used}, expected only {var}")
        i = p.variables.index(var)
        deg = max((e[i] for e in p.terms), default=-1)
        cs = [Fraction(0)] * (deg + 1)
        for e, c in p.terms.items():
            cs[e[i]] = c
        return cls(cs, var)

    def to_polynomial(self, variables=None) -> Polynomial:
        variables = tuple(variables) if variables else (self.var,)
        i = variables.index(self.var)
        n = len(variables)
        return Polynomial({tuple(k if j == i else 0 for j in range(n)): c
                           for k, c in enumerate(self.coeffs) if c}, variables)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, UnivariatePoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UnivariatePoly({[str(c) for c in self.coeffs]}, {self.var!r})"

    def __str__(self):
        return self.to_polynomial().to_str()

    def derivative(self) -> "UnivariatePoly":
        return UnivariatePoly([k * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def scale(self, c) -> "UnivariatePoly":
        return UnivariatePoly([x * c for x in self.coeffs], self.var)

    def monic(self) -> "UnivariatePoly":
        return self.scale(1 / self.lc)

    def primitive(self) -> "UnivariatePoly":
        """Integer coefficients with gcd 1 and a positive leading coefficient."""
        if not self.coeffs:
            return self
        den = 1
        num = 0
        for c in self.coeffs:
            den = lcm(den, c.denominator)
            num = gcd(num, c.numerator)
        f = Fraction(den, num)
        if self.lc < 0:
            f = -f
        return self.scale(f)

    def mirror(self) -> "UnivariatePoly":
        """p(-x)."""
        return UnivariatePoly([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)],
                              self.var)

    def divmod(self, other: "UnivariatePoly"):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return UnivariatePoly([], self.var), self
        q = [Fraction(0)] * (dq + 1)
        lc = other.lc
        m = len(other.coeffs) - 1
        for k in range(dq, -1, -1):
            c = r[k + m] / lc
            q[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    r[k + i] -= c * b
        return UnivariatePoly(q, self.var), UnivariatePoly(r[:m], self.var)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]


def poly_gcd(p: UnivariatePoly, q: UnivariatePoly) -> UnivariatePoly:
    """Monic gcd over Q (primitive remainders keep the numbers small)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, (a % b).primitive() if not (a % b).is_zero() else UnivariatePoly([], p.var)
    if a.is_zero():
        return a
    return a.monic()


def squarefree_part(p: UnivariatePoly) -> UnivariatePoly:
    """``p / gcd(p, p')`` made monic; same distinct roots, all simple.

    >>> str(squarefree_part(UnivariatePoly([1, -2, 1], "c2")))
    'c2-1'
    """
    if p.is_zero():
        raise RootError("square-free part of the zero polynomial is undefined")
    if p.degree == 0:
        return UnivariatePoly([1], p.var)
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


def is_squarefree(p: UnivariatePoly) -> bool:
    return poly_gcd(p, p.derivative()).degree == 0


def sturm_sequence(p: UnivariatePoly) -> List[UnivariatePoly]:
    # positive rescaling of each remainder leaves every sign pattern intact
    seq = [p.primitive(), p.derivative().primitive()]
    while True:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(_neg_primitive(r))
    return seq


def _neg_primitive(r: UnivariatePoly) -> UnivariatePoly:
    # -r scaled by a positive rational
    den = 1
    num = 0
    for c in r.coeffs:
        den = lcm(den, c.denominator)
        num = gcd(num, c.numerator)
    return r.scale(Fraction(-den, num))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs) -> int:
    v = 0
    last = 0
    for s in signs:
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def _signs_at(seq, x) -> List[int]:
    if x is None:
        raise ValueError
    return [_sign(q(x)) for q in seq]


def _signs_at_inf(seq, positive: bool) -> List[int]:
    out = []
    for q in seq:
        s = _sign(q.lc)
        if not positive and q.degree % 2 == 1:
            s = -s
        out.append(s)
    return out


def _to_bound(x, positive):
    if x is None:
        return None
    if isinstance(x, float):
        if x == float("inf") and positive:
            return None
        if x == float("-inf") and not positive:
            return None
        return Fraction(x)
    return Fraction(x)


def sturm_count(p: UnivariatePoly, lo: Bound = None, hi: Bound = None,
                _seq: Optional[List[UnivariatePoly]] = None) -> int:
    """Number of distinct real roots of square-free ``p`` in the open interval (lo, hi).

    ``None`` (or ``±inf``) stands for an infinite endpoint.

    >>> sturm_count(UnivariatePoly([-1, 0, 1]))
    2
    """
    if p.is_zero():
        raise RootError("zero polynomial has infinitely many roots")
    lo = _to_bound(lo, False)
    hi = _to_bound(hi, True)
    if lo is not None and hi is not None and lo >= hi:
        raise RootError(f"empty interval ({lo}, {hi})")
    for x in (lo, hi):
        if x is not None and p(x) == 0:
            raise RootError(f"endpoint {x} is a root; perturb it or divide out (x - {x})")
    seq = _seq if _seq is not None else sturm_sequence(p)
    v_lo = _variations(_signs_at_inf(seq, False) if lo is None else _signs_at(seq, lo))
    v_hi = _variations(_signs_at_inf(seq, True) if hi is None else _signs_at(seq, hi))
    return v_lo - v_hi


def cauchy_bound(p: UnivariatePoly) -> Fraction:
    """1 + max |a_i / a_n|: every real root lies strictly inside (-B, B)."""
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass
class RootIsolation:
    """Disjoint isolating intervals plus exactly-located rational roots."""

    intervals: List[Tuple[Fraction, Fraction]] = field(default_factory=list)
    exact_roots: List[Fraction] = field(default_factory=list)
    poly: Optional[UnivariatePoly] = None
    squarefree: bool = True

    @property
    def count(self) -> int:
        return len(self.intervals) + len(self.exact_roots)

    def sorted_items(self):
        """``('exact', r)`` and ``('interval', (lo, hi))`` items in ascending order."""
        items = [("exact", r, r) for r in self.exact_roots]
        items += [("interval", iv, iv[0]) for iv in self.intervals]
        items.sort(key=lambda t: t[2])
        return [(kind, v) for kind, v, _ in items]

    def approximations(self, eps=Fraction(1, 10 ** 9)) -> List[Fraction]:
        out = []
        for kind, v in self.sorted_items():
            if kind == "exact":
                out.append(v)
            else:
                out.append(refine_root(self.poly, v, eps))
        return out

    def to_json(self, eps=Fraction(1, 10 ** 9)) -> dict:
        roots = []
        for kind, v in self.sorted_items():
            if kind == "exact":
                roots.append({"exact": str(v), "approx": float(v)})
            else:
                a = refine_root(self.poly, v, eps)
                roots.append({"interval": [str(v[0]), str(v[1])], "approx": float(a)})
        return {"count": self.count, "roots": roots}


def isolate_real_roots(p: UnivariatePoly) -> RootIsolation:
    """Isolate every distinct real root of ``p`` by Sturm bisection."""
    if p.is_zero():
        raise RootError("zero polynomial")
    sqf = squarefree_part(p)
    iso = RootIsolation(poly=sqf, squarefree=(sqf.degree == p.degree))
    if sqf.degree == 0:
        return iso
    seq = sturm_sequence(sqf)
    B = cauchy_bound(sqf)
    total = sturm_count(sqf, -B, B, _seq=seq)
    stack = [(-B, B, total)]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            iso.intervals.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if sqf(mid) == 0:
            iso.exact_roots.append(mid)
            # nudge inward on both sides to keep endpoints root-free
            d = (hi - lo) / 8
            left, right = mid - d, mid + d
            while sqf(left) == 0 or sqf(right) == 0 or \
                    sturm_count(sqf, left, right, _seq=seq) != 1:
                d /= 2
                left, right = mid - d, mid + d
            stack.append((lo, left, sturm_count(sqf, lo, left, _seq=seq)))
            stack.append((right, hi, sturm_count(sqf, right, hi, _seq=seq)))
            continue
        nl = sturm_count(sqf, lo, mid, _seq=seq)
        stack.append((lo, mid, nl))
        stack.append((mid, hi, n - nl))
    iso.intervals.sort()
    iso.exact_roots.sort()
    # exact rational roots sitting inside an interval are cheap to spot
    found = []
    kept = []
    for lo, hi in iso.intervals:
        r = _rational_root_in(sqf, lo, hi)
        if r is not None:
            found.append(r)
        else:
            kept.append((lo, hi))
    iso.intervals = kept
    iso.exact_roots = sorted(iso.exact_roots + found)
    return iso


def _rational_root_in(p: UnivariatePoly, lo, hi) -> Optional[Fraction]:
    # probe the simplest rational of a narrowed bracket; catches roots like 37/16
    if p.degree == 1:
        r = -p.coeffs[0] / p.coeffs[1]
        return r if lo < r < hi else None
    flo = _sign(p(lo))
    for _ in range(48):
        mid = (lo + hi) / 2
        fm = _sign(p(mid))
        if fm == 0:
            return mid
        if fm == flo:
            lo = mid
        else:
            hi = mid
    r = _simplest_between(lo, hi)
    return r if p(r) == 0 else None


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """A smallest-denominator rational in the open interval (lo, hi)."""
    fl = lo.numerator // lo.denominator
    if fl + 1 < hi:
        return Fraction(fl + 1)
    # no integer inside: write x = fl + 1/y and solve for y
    if lo == fl:
        y = Fraction(int(1 / (hi - fl)) + 1)
    else:
        y = _simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / y


def refine_root(p: UnivariatePoly, interval, eps=Fraction(1, 10 ** 9)) -> Fraction:
    """Bisect an isolating interval until it is narrower than ``eps``.

    Returns the midpoint of the final bracket (or the root itself when a
    midpoint lands exactly on it).
    """
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    eps = Fraction(eps)
    if eps <= 0:
        raise RootError("eps must be positive")
    flo, fhi = _sign(p(lo)), _sign(p(hi))
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo == fhi:
        raise RootError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > eps:
        mid = (lo + hi) / 2
        fm = _sign(p(mid))
        if fm == 0:
            return mid
        if fm == flo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def real_roots(p: UnivariatePoly, eps=Fraction(1, 10 ** 9)) -> List[Fraction]:
    """Sorted rational approximations (within ``eps``) of the distinct real roots."""
    return isolate_real_roots(p).approximations(eps)


def count_real_roots(p: UnivariatePoly) -> int:
    sqf = squarefree_part(p)
    if sqf.degree == 0:
        return 0
    return sturm_count(sqf)
