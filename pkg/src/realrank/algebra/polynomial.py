"""Exact multivariate polynomials over the rationals.

A polynomial lives on a *registry*: an ordered tuple of variable names.
Exponent vectors are indexed by registry position. Two polynomials can
only be combined when their registries are identical.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class RegistryMismatch(ValueError):
    """Raised when polynomials on different variable registries are combined."""


class VarOrder:
    """Pure lexicographic order given by a sequence of names, greatest first.

    >>> o = VarOrder(["s1", "c3", "c2"])
    >>> o.names
    ('s1', 'c3', 'c2')
    """

    __slots__ = ("names",)

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable in order {names}")
        self.names = names

    def __repr__(self):
        return f"VarOrder({list(self.names)})"

    def __eq__(self, other):
        return isinstance(other, VarOrder) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def permutation(self, variables: Sequence[str]) -> Tuple[int, ...]:
        """Registry positions listed from greatest to least variable."""
        if sorted(variables) != sorted(self.names):
            raise ValueError(
                f"order {list(self.names)} is not a permutation of {list(variables)}")
        pos = {v: i for i, v in enumerate(variables)}
        return tuple(pos[v] for v in self.names)

    def key(self, exps: Exponents, variables: Sequence[str]) -> Exponents:
        perm = self.permutation(variables)
        return tuple(exps[i] for i in perm)


def lex_compare(m1: Exponents, m2: Exponents, order: VarOrder,
                variables: Sequence[str]) -> int:
    """Compare two exponent vectors under pure lex; returns -1, 0 or 1."""
    for i in order.permutation(variables):
        if m1[i] != m2[i]:
            return -1 if m1[i] < m2[i] else 1
    return 0


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


class Polynomial:
    """Immutable sparse polynomial with :class:`~fractions.Fraction` coefficients."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, terms: Mapping[Exponents, Scalar], variables: Sequence[str]):
        variables = tuple(variables)
        n = len(variables)
        clean: Dict[Exponents, Fraction] = {}
        for e, c in terms.items():
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match registry {variables}")
            c = _frac(c)
            if c:
                clean[tuple(e)] = c
        self.variables = variables
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls({}, variables)

    @classmethod
    def constant(cls, c, variables):
        variables = tuple(variables)
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def var(cls, name, variables):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls({tuple(e): 1}, variables)

    @classmethod
    def _raw(cls, terms, variables):
        # trusted path: terms already clean
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    # -- basic queries ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str) -> int:
        i = self.variables.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def free_symbols(self) -> Tuple[str, ...]:
        used = [False] * len(self.variables)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def monomial_count(self) -> int:
        return len(self.terms)

    def leading_term(self, order: VarOrder) -> Tuple[Exponents, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        perm = order.permutation(self.variables)
        e = max(self.terms, key=lambda x: tuple(x[i] for i in perm))
        return e, self.terms[e]

    def leading_monomial(self, order: VarOrder) -> Exponents:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: VarOrder) -> Fraction:
        return self.leading_term(order)[1]

    def sorted_terms(self, order: VarOrder):
        perm = order.permutation(self.variables)
        return sorted(self.terms.items(),
                      key=lambda t: tuple(t[0][i] for i in perm), reverse=True)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.variables != other.variables:
            raise RegistryMismatch(f"{self.variables} vs {other.variables}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Polynomial._raw(t, self.variables)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self.variables)
            return Polynomial._raw({e: c * other for e, c in self.terms.items()},
                                   self.variables)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return Polynomial._raw(t, self.variables)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return self * (Fraction(1) / other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.variables)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def divmod(self, other: "Polynomial", order: VarOrder | None = None):
        """Multivariate division by a single polynomial under lex ``order``."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if order is None:
            order = VarOrder(self.variables)
        perm = order.permutation(self.variables)
        key = lambda e: tuple(e[i] for i in perm)
        g_lm, g_lc = other.leading_term(order)
        rest = dict(self.terms)
        q: Dict[Exponents, Fraction] = {}
        r: Dict[Exponents, Fraction] = {}
        while rest:
            e = max(rest, key=key)
            c = rest[e]
            if all(a >= b for a, b in zip(e, g_lm)):
                shift = tuple(a - b for a, b in zip(e, g_lm))
                f = c / g_lc
                q[shift] = q.get(shift, 0) + f
                for eg, cg in other.terms.items():
                    t = tuple(a + b for a, b in zip(eg, shift))
                    v = rest.get(t, 0) - f * cg
                    if v:
                        rest[t] = v
                    else:
                        rest.pop(t, None)
            else:
                r[e] = rest.pop(e)
        return (Polynomial._raw({e: c for e, c in q.items() if c}, self.variables),
                Polynomial._raw(r, self.variables))

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    # -- evaluation and substitution ---------------------------------------

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at a full assignment; works for Fractions, ints, floats, mpf."""
        vals = [values[v] for v in self.variables]
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    def subs(self, values: Mapping[str, Scalar]) -> "Polynomial":
        """Substitute exact rationals for some variables (registry unchanged)."""
        idx = [(self.variables.index(v), _frac(x)) for v, x in values.items()]
        t: Dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            e = list(e)
            for i, x in idx:
                if e[i]:
                    c = c * x ** e[i]
                    e[i] = 0
            e = tuple(e)
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Polynomial._raw(t, self.variables)

    def to_registry(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express on another registry containing every used variable."""
        variables = tuple(variables)
        src = {v: i for i, v in enumerate(self.variables)}
        for v, used in zip(self.variables, self._used()):
            if used and v not in variables:
                raise RegistryMismatch(f"variable {v} missing from {variables}")
        idx = [src.get(v) for v in variables]
        t = {tuple(e[i] if i is not None else 0 for i in idx): c
             for e, c in self.terms.items()}
        return Polynomial._raw(t, variables)

    def _used(self):
        used = [False] * len(self.variables)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return used

    def coefficients_in(self, var: str) -> Dict[int, "Polynomial"]:
        """Split as sum_k coeff_k * var**k with coeff_k free of ``var``."""
        i = self.variables.index(var)
        out: Dict[int, Dict[Exponents, Fraction]] = {}
        for e, c in self.terms.items():
            k = e[i]
            out.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Polynomial._raw(t, self.variables) for k, t in out.items()}

    def derivative(self, var: str) -> "Polynomial":
        i = self.variables.index(var)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                t[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return Polynomial._raw(t, self.variables)

    # -- normal forms ----------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self / c integral and primitive."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def primitive(self, order: VarOrder | None = None) -> "Polynomial":
        """Integer primitive form; positive leading coefficient when ``order`` given."""
        if not self.terms:
            return self
        p = self / self.content()
        if order is not None and p.leading_coefficient(order) < 0:
            p = -p
        return p

    def monic(self, order: VarOrder) -> "Polynomial":
        return self / self.leading_coefficient(order)

    def is_proportional(self, other: "Polynomial") -> bool:
        """True when ``self == q * other`` for a nonzero rational ``q``."""
        self._check(other)
        if self.terms.keys() != other.terms.keys():
            return False
        if not self.terms:
            return True
        e0 = next(iter(self.terms))
        q = self.terms[e0] / other.terms[e0]
        return all(c == q * other.terms[e] for e, c in self.terms.items())

    # -- text form ---------------------------------------------------------

    def to_str(self, order: VarOrder | None = None) -> str:
        if not self.terms:
            return "0"
        if order is None:
            order = VarOrder(self.variables)
        parts = []
        for e, c in self.sorted_terms(order):
            factors = []
            for v, k in zip(self.variables, e):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            # order the factors as the VarOrder lists them
            rank = {v: i for i, v in enumerate(order.names)}
            factors.sort(key=lambda f: rank[f.split("^")[0]])
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r}, {list(self.variables)})"


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*\*)|([-+*()]))")


def parse_polynomial(text: str, variables: Sequence[str] | None = None) -> Polynomial:
    """Parse ``3*c2^4*c3^4+1`` style text.

    Accepts integers, ``p/q`` rationals, ``*``, ``^`` (or ``**``), ``+``,
    ``-`` and parentheses. When ``variables`` is omitted the registry is
    the sorted set of names found in the text.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at offset {pos}: {text[pos:pos + 10]!r}")
        num, name, power, op = m.groups()
        if num is not None:
            tokens.append(("num", Fraction(num)))
        elif name is not None:
            tokens.append(("var", name))
        elif power is not None:
            tokens.append(("op", "^"))
        else:
            tokens.append(("op", op))
        pos = m.end()
    if not tokens:
        raise ValueError("empty polynomial text")

    if variables is None:
        variables = sorted({t[1] for t in tokens if t[0] == "var"}, key=_natural_key)
    variables = tuple(variables)

    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None)

    def take():
        nonlocal i
        if i >= len(tokens):
            raise ValueError("unexpected end of polynomial text")
        t = tokens[i]
        i += 1
        return t

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        acc = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = power()
        while peek() == ("op", "*"):
            take()
            acc = acc * power()
        return acc

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num" or val.denominator != 1:
                raise ValueError("exponent must be a non-negative integer")
            base = base ** int(val)
        return base

    def atom():
        kind, val = peek()
        if kind == "num":
            take()
            return Polynomial.constant(val, variables)
        if kind == "var":
            take()
            if val not in variables:
                raise ValueError(f"unknown variable {val!r}; registry is {variables}")
            return Polynomial.var(val, variables)
        if (kind, val) == ("op", "("):
            take()
            e = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
            return e
        if (kind, val) == ("op", "-"):
            take()
            return -atom()
        raise ValueError(f"unexpected token {val!r}")

    result = expr()
    if i != len(tokens):
        raise ValueError(f"trailing input after token {i}: {tokens[i][1]!r}")
    return result


def _natural_key(name: str):
    m = re.match(r"([A-Za-z_]*)(\d*)$", name)
    if m:
        return (m.group(1), int(m.group(2)) if m.group(2) else -1)
    return (name, -1)
