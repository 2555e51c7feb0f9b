"""Rank decision procedures and the router that picks one from the shape.

Every path reduces the rank question to the existence of I linearly
independent left null vectors ``s`` of ``Gamma(c) = [X2 - c2 X1, ..., XK - cK X1]``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .algebra.matrix import bareiss_det, left_null_space, rational_rank
from .algebra.polynomial import Polynomial, VarOrder
from .decomposition import (CONDITION_THRESHOLD, DecompositionError, FactorTriple,
                            condition_ratio, extract_decomposition, gamma_numeric,
                            left_null_vector, verify_decomposition, _normalize_last)
from .eliminate import Elimination, eliminate
from .roots import (RootIsolation, UnivariatePoly, isolate_real_roots, refine_root)
from .algebra.groebner import buchberger, shape_check
from .systems import build_indscal_system, gamma_matrix
from .tensor import (Classification, Tensor3, classify, embed, expected_degree,
                     indscal_expected_degree, indscal_regime, ordering_permutation)

MAX_PRECISION = 512
RETRIES_PER_SPECIALIZATION = 8


@dataclass
class RankOptions:
    backend: str = "groebner"
    seed: int = 0
    precision: int = 128
    tolerance: float = 1e-6
    embed: bool = False
    embed_rows: Optional[Sequence[Sequence]] = None
    order: Optional[VarOrder] = None
    certify: bool = True


@dataclass
class RankReport:
    shape: Tuple[int, int, int]
    classification: Optional[Classification]
    method: str
    verdict_kind: str = "undecided"        # equal | greater | undecided
    rank: Optional[int] = None
    lower_bound: int = 0
    eliminant: Optional[object] = None      # UnivariatePoly or Polynomial
    eliminant_variable: Optional[str] = None
    degree: int = -1
    expected_degree: Optional[int] = None
    real_root_count: Optional[int] = None
    roots: Optional[RootIsolation] = None
    basis_ok: Optional[bool] = None
    backend: Optional[str] = None
    notes: List[str] = field(default_factory=list)
    certificate: Optional[FactorTriple] = None
    specializations: List[tuple] = field(default_factory=list)
    permutation: Optional[Tuple[int, int, int]] = None
    seed: Optional[int] = None
    embedded: Optional["RankReport"] = None
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        if self.verdict_kind == "equal":
            return f"rank = {self.rank}"
        if self.verdict_kind == "greater":
            return f"rank > {self.lower_bound - 1}"
        return f"undecided (rank >= {self.lower_bound})"

    @property
    def decided(self) -> bool:
        return self.verdict_kind != "undecided"

    def decide(self, kind: str, value: int):
        """``equal`` sets rank = value; ``greater`` means rank > value; ``undecided`` means rank >= value."""
        self.verdict_kind = kind
        if kind == "equal":
            self.rank = value
            self.lower_bound = value
        elif kind == "greater":
            self.rank = None
            self.lower_bound = value + 1
        else:
            self.rank = None
            self.lower_bound = value
        return self

    def to_json(self, timings: bool = False, eps=Fraction(1, 10 ** 12)) -> dict:
        el = None
        if isinstance(self.eliminant, UnivariatePoly):
            el = str(self.eliminant)
        elif isinstance(self.eliminant, Polynomial):
            el = self.eliminant.to_str()
        d = {
            "shape": list(self.shape),
            "classification": self.classification.to_dict() if self.classification else None,
            "method": self.method,
            "backend": self.backend,
            "verdict": self.verdict,
            "verdict_kind": self.verdict_kind,
            "rank": self.rank,
            "lower_bound": self.lower_bound,
            "eliminant": el,
            "eliminant_variable": self.eliminant_variable,
            "degree": self.degree,
            "expected_degree": self.expected_degree,
            "real_root_count": self.real_root_count,
            "roots": self.roots.to_json(eps) if self.roots is not None else None,
            "basis_ok": self.basis_ok,
            "specializations": [[mpmath.nstr(c, 15) if not isinstance(c, (int, Fraction)) else str(c)
                                 for c in spec] for spec in self.specializations],
            "certificate": self.certificate.to_json() if self.certificate else None,
            "permutation": list(self.permutation) if self.permutation else None,
            "seed": self.seed,
            "notes": list(self.notes),
            "embedded": self.embedded.to_json(timings, eps) if self.embedded else None,
        }
        if timings:
            d["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return d


# ---------------------------------------------------------------------------
# numeric helpers
# ---------------------------------------------------------------------------

def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def derive_rng(master: int, index: int) -> np.random.Generator:
    """Generator for sub-task ``index``; independent of scheduling."""
    return np.random.default_rng(np.random.SeedSequence([int(master) & (2 ** 64 - 1), index]))


def random_integers(rng: np.random.Generator, n: int, lo: int = -99, hi: int = 99) -> List[int]:
    return [int(v) for v in rng.integers(lo, hi + 1, size=n)]


def mp_root(poly: UnivariatePoly, item, bits: int):
    """High-precision value of the root described by an isolation item."""
    kind, v = item
    if kind == "exact":
        with mpmath.workprec(bits):
            return _mp(v)
    lo, hi = v
    x0 = refine_root(poly, v, Fraction(1, 2 ** 64))
    with mpmath.workprec(bits + 32):
        cs = [_mp(c) for c in reversed(poly.coeffs)]
        x = _mp(x0)
        tol = mpmath.mpf(2) ** -(bits + 8)
        for _ in range(64):
            y, dy = mpmath.polyval(cs, x, derivative=True)
            if dy == 0:
                break
            step = y / dy
            x -= step
            if abs(step) < tol:
                break
        if not (_mp(lo) <= x <= _mp(hi)):
            # Newton escaped the bracket; fall back to exact bisection
            x = _mp(refine_root(poly, v, Fraction(1, 2 ** (bits + 8))))
    with mpmath.workprec(bits):
        return +x


def _eval_mp(p: Polynomial, values: Dict[str, object]):
    vals = [values.get(v, 0) for v in p.variables]
    total = mpmath.mpf(0)
    for e, c in p.terms.items():
        t = _mp(c)
        for x, k in zip(vals, e):
            if k:
                t *= x ** k
        total += t
    return total


def shape_solution(basis: Sequence[Polynomial], order: VarOrder, var: str, root) -> Dict[str, object]:
    """Coordinates of the solution above ``var = root`` for a basis in shape position."""
    sol = {var: root}
    for g in basis:
        if set(g.free_symbols()) <= {var}:
            continue
        e, c = g.leading_term(order)
        x = g.variables[next(i for i, k in enumerate(e) if k)]
        tail = g - Polynomial({e: c}, g.variables)
        sol[x] = -_eval_mp(tail, {var: root}) / _mp(c)
    return sol


def _unfolding_rank(X: Tensor3) -> int:
    """max over modes of the rank of the matricized array (a lower bound on tensor rank)."""
    I, J, K = X.I, X.J, X.K
    m1 = [[X[i, j, k] for j in range(J) for k in range(K)] for i in range(I)]
    m2 = [[X[i, j, k] for i in range(I) for k in range(K)] for j in range(J)]
    m3 = [[X[i, j, k] for i in range(I) for j in range(J)] for k in range(K)]
    return max(rational_rank(m) for m in (m1, m2, m3))


def _certify(X: Tensor3, build: Callable[[int], Tuple[list, Optional[list]]],
             opts: RankOptions, report: RankReport) -> bool:
    """Extract and verify a rank-I certificate, doubling precision on failure.

    ``build(bits)`` returns (specializations, s-vectors or None).
    """
    bits = max(64, opts.precision)
    last_res = None
    while bits <= MAX_PRECISION:
        specs, svecs = build(bits)
        try:
            F = extract_decomposition(X, specs, bits, svecs)
        except DecompositionError as e:
            report.basis_ok = False
            report.notes.append(f"certificate: {e}")
            return False
        ok, res = verify_decomposition(X, F, opts.tolerance)
        last_res = res
        report.basis_ok = True
        if ok:
            report.certificate = F
            report.specializations = [tuple(c) for c in specs]
            return True
        bits *= 2
    report.notes.append(f"reconstruction residual {last_res:.3g} above tolerance "
                        f"{opts.tolerance} even at {MAX_PRECISION} bits")
    return False


def _s_matrix_ok(svecs, bits) -> bool:
    with mpmath.workprec(bits):
        n = len(svecs[0])
        S = mpmath.matrix(n, len(svecs))
        for a, s in enumerate(svecs):
            for i in range(n):
                S[i, a] = s[i]
        return condition_ratio(S) > CONDITION_THRESHOLD


# ---------------------------------------------------------------------------
# decision procedures
# ---------------------------------------------------------------------------

def _new_report(X: Tensor3, method: str, opts: RankOptions) -> RankReport:
    try:
        cls = classify(X.shape)
    except ValueError:
        cls = None
    return RankReport(X.shape.as_tuple(), cls, method, seed=opts.seed)


def rank_square_two_slice(X: Tensor3, opts: Optional[RankOptions] = None) -> RankReport:
    """I x I x 2: real eigenvalues of the pencil decide between rank I and I + 1."""
    opts = opts or RankOptions()
    I = X.I
    if X.J != I or X.K != 2:
        raise ValueError(f"pencil path needs an I x I x 2 array, got {X.shape}")
    r = _new_report(X, "det_pencil", opts)
    r.backend = "det"
    Y = X
    if rational_rank(X.slices[0]) < I:
        if rational_rank(X.slices[1]) < I:
            sub = rank_minimal(X, replace(opts, backend="groebner"))
            sub.notes.insert(0, "both slices singular; pencil path not applicable")
            return sub
        Y = Tensor3([X.slices[1], X.slices[0]])
        r.notes.append("slice 1 singular; slices swapped (roots are reciprocals of the original c2)")
    t0 = time.perf_counter()
    det = UnivariatePoly.from_polynomial(bareiss_det(gamma_matrix(Y, ("c2",))), "c2").primitive()
    iso = isolate_real_roots(det)
    r.timings["elimination"] = time.perf_counter() - t0
    r.eliminant, r.eliminant_variable = det, "c2"
    r.degree = det.degree
    r.expected_degree = I
    r.real_root_count = iso.count
    r.roots = iso
    if not iso.squarefree:
        r.notes.append("repeated eigenvalues: pencil is not generic")
        return r.decide("undecided", I)
    if iso.count < I:
        return r.decide("equal", I + 1)
    items = iso.sorted_items()[:I]
    if opts.certify:
        t0 = time.perf_counter()

        def build(bits):
            return [(mp_root(iso.poly, it, bits),) for it in items], None

        ok = _certify(Y, build, opts, r)
        r.timings["certificate"] = time.perf_counter() - t0
        if not ok and r.basis_ok is False:
            return r.decide("undecided", I)
    return r.decide("equal", I)


def _resultant_specs(el: Elimination, items, poly: UnivariatePoly, bits: int):
    """(c2, c3) for each root: c3 is the real common root of the two conditions."""
    p, q = el.conditions
    specs = []
    with mpmath.workprec(bits):
        for it in items:
            c2 = mp_root(poly, it, bits)
            pc = p.coefficients_in("c3")
            coeffs = [_eval_mp(pc.get(k, Polynomial.zero(p.variables)), {"c2": c2})
                      for k in range(max(pc), -1, -1)]
            while coeffs and coeffs[0] == 0:
                coeffs.pop(0)
            cands = mpmath.polyroots(coeffs, maxsteps=200, extraprec=bits)
            best = min(cands, key=lambda z: (abs(_eval_mp(q, {"c2": c2, "c3": z}))
                                             if abs(mpmath.im(z)) < mpmath.mpf(10) ** -10
                                             else mpmath.inf))
            specs.append((c2, mpmath.re(best)))
    return specs


def rank_minimal(X: Tensor3, opts: Optional[RankOptions] = None) -> RankReport:
    """Minimal (and overdetermined) shapes: eliminate, count distinct real roots of G1."""
    opts = opts or RankOptions()
    I, K = X.I, X.K
    r = _new_report(X, "groebner_minimal", opts)
    r.backend = opts.backend
    cls = r.classification
    t0 = time.perf_counter()
    el = eliminate(X, opts.backend, opts.order)
    r.timings["elimination"] = time.perf_counter() - t0
    r.notes.extend(el.notes)
    r.eliminant_variable = el.variable
    if cls is not None and cls.regime == "minimal":
        r.expected_degree = expected_degree(X.shape)
    if el.basis and len(el.basis) == 1 and el.basis[0].is_constant():
        r.degree = 0
        if cls is not None and cls.regime == "minimal":
            # generic minimal systems always have solutions; some c1 must vanish here
            r.notes.append("nongeneric: no solution with c1 = 1 (Groebner basis is {1})")
            return r.decide("undecided", I)
        r.real_root_count = 0
        r.notes.append("system inconsistent: no rank-I decomposition with nonzero first-slice weights")
        return r.decide("greater", I)
    if el.eliminant is None:
        r.notes.append("no eliminant produced")
        return r.decide("undecided", I)
    g1 = el.eliminant.primitive()
    r.eliminant, r.degree = g1, g1.degree
    if r.expected_degree is not None and g1.degree != r.expected_degree:
        r.notes.append(f"nongeneric: eliminant degree {g1.degree}, expected {r.expected_degree}")
    t0 = time.perf_counter()
    iso = isolate_real_roots(g1)
    r.timings["roots"] = time.perf_counter() - t0
    r.roots, r.real_root_count = iso, iso.count
    if not iso.squarefree:
        r.notes.append("eliminant has repeated factors; counting distinct roots")
    if el.shape is not None and not el.shape.in_shape_position:
        return r.decide("undecided", I)
    if iso.count < I:
        return r.decide("greater", I)
    items = iso.sorted_items()[:I]
    if opts.backend == "groebner":
        order = el.system.order
        s_vars = [f"s{i}" for i in range(1, I)]
        c_vars = [f"c{k}" for k in range(2, K + 1)]

        def build(bits):
            specs, svecs = [], []
            with mpmath.workprec(bits):
                for it in items:
                    sol = shape_solution(el.basis, order, el.variable, mp_root(iso.poly, it, bits))
                    specs.append(tuple(sol[c] for c in c_vars))
                    svecs.append([sol[s] for s in s_vars] + [mpmath.mpf(1)])
            return specs, svecs
    elif opts.backend == "projected":
        order = el.system.order
        c_vars = [f"c{k}" for k in range(2, K + 1)]

        def build(bits):
            # s comes from the null vectors of Gamma(c), since the projected basis has no s
            with mpmath.workprec(bits):
                specs = [tuple(shape_solution(el.basis, order, el.variable,
                                              mp_root(iso.poly, it, bits))[c] for c in c_vars)
                         for it in items]
            return specs, None
    else:
        def build(bits):
            return _resultant_specs(el, items, iso.poly, bits), None

    t0 = time.perf_counter()
    if opts.certify:
        ok = _certify(X, build, opts, r)
    else:
        specs, svecs = build(opts.precision)
        if svecs is None:
            with mpmath.workprec(opts.precision):
                svecs = [_normalize_last(left_null_vector(gamma_numeric(X, c))) for c in specs]
        ok = r.basis_ok = _s_matrix_ok(svecs, opts.precision)
    r.timings["certificate"] = time.perf_counter() - t0
    if not ok:
        return r.decide("undecided", I)
    return r.decide("equal", I)


def rank_indscal_minimal(X: Tensor3, opts: Optional[RankOptions] = None) -> RankReport:
    """INDSCAL arrays with I = 1 + J(J-1)/2."""
    opts = opts or RankOptions()
    I, J = X.I, X.J
    r = _new_report(X, "indscal_minimal", opts)
    r.backend = "groebner"
    regime = indscal_regime(I, J)
    if regime == "minimal":
        r.expected_degree = indscal_expected_degree(J)
    t0 = time.perf_counter()
    system = build_indscal_system(X, opts.order)
    G = buchberger(system.equations, system.order)
    rep = shape_check(G, system.order)
    r.timings["elimination"] = time.perf_counter() - t0
    var = system.eliminant_variable
    r.eliminant_variable = var
    if any(g.is_constant() for g in G):
        if regime == "minimal":
            r.notes.append("nongeneric: no solution with the fixed weight equal to 1")
            return r.decide("undecided", I)
        r.notes.append("system inconsistent")
        return r.decide("greater", I)
    if rep.eliminant is None:
        r.notes.append(f"no eliminant: {rep.reason}")
        return r.decide("undecided", I)
    g1 = UnivariatePoly.from_polynomial(rep.eliminant, var).primitive()
    r.eliminant, r.degree = g1, g1.degree
    if r.expected_degree is not None and g1.degree != r.expected_degree:
        r.notes.append(f"nongeneric: eliminant degree {g1.degree}, expected {r.expected_degree}")
    iso = isolate_real_roots(g1)
    r.roots, r.real_root_count = iso, iso.count
    r.notes.append(f"basis has {len(G)} polynomials")
    if not rep.in_shape_position:
        r.notes.append(f"basis not in shape position: {rep.reason}")
        return r.decide("undecided", I)
    if iso.count < I:
        if J == 3 and I == 4:
            r.notes.append("literature: the rank of such an array is then 5")
        return r.decide("greater", I)
    bits = opts.precision
    with mpmath.workprec(bits):
        svecs = []
        for it in iso.sorted_items()[:I]:
            sol = shape_solution(G, system.order, var, mp_root(iso.poly, it, bits))
            svecs.append([sol[f"s{i}"] for i in range(1, I + 1)])
    r.basis_ok = _s_matrix_ok(svecs, bits)
    if not r.basis_ok:
        r.notes.append("recovered s-vectors are linearly dependent")
        return r.decide("undecided", I)
    return r.decide("equal", I)


def rank_tall(X: Tensor3, opts: Optional[RankOptions] = None) -> RankReport:
    """Tall arrays by random specialization; very tall arrays in closed form."""
    opts = opts or RankOptions()
    I, J, K = X.I, X.J, X.K
    cls = classify(X.shape)
    if cls.tallness == "very_tall":
        r = _new_report(X, "very_tall_closed_form", opts)
        lb = _unfolding_rank(X)
        if lb == K * J:
            # rank <= JK always holds for I >= JK
            return r.decide("equal", K * J)
        r.notes.append(f"nongeneric: unfolding rank {lb} < KJ = {K * J}")
        return r.decide("undecided", lb)
    if cls.tallness != "tall":
        raise ValueError(f"shape {X.shape} is not tall")
    r = _new_report(X, "tall_specialization", opts)
    if X.is_zero():
        r.notes.append("degenerate input: zero array makes every specialization consistent")
    t0 = time.perf_counter()
    specs: List[tuple] = []
    svecs: List[List[Fraction]] = []
    for a in range(I):
        for attempt in range(RETRIES_PER_SPECIALIZATION):
            rng = derive_rng(opts.seed, a * RETRIES_PER_SPECIALIZATION + attempt)
            c = random_integers(rng, K - 1)
            G = [[X.slices[k][i][j] - c[k - 1] * X.slices[0][i][j]
                  for k in range(1, K) for j in range(J)] for i in range(I)]
            null = left_null_space(G)
            if not null:
                continue
            w = random_integers(rng, len(null))
            s = [sum((wi * v[i] for wi, v in zip(w, null)), Fraction(0)) for i in range(I)]
            if s[-1] != 0:
                s = [x / s[-1] for x in s]
            if not any(s) or rational_rank(svecs + [s]) < len(svecs) + 1:
                continue
            specs.append(tuple(Fraction(x) for x in c))
            svecs.append(s)
            break
        else:
            r.timings["specialization"] = time.perf_counter() - t0
            r.notes.append(f"no independent null vector for specialization {a} "
                           f"after {RETRIES_PER_SPECIALIZATION} draws")
            return r.decide("undecided", I)
    r.timings["specialization"] = time.perf_counter() - t0
    r.basis_ok = True
    if opts.certify:
        t0 = time.perf_counter()
        _certify(X, lambda bits: (specs, svecs), opts, r)
        r.timings["certificate"] = time.perf_counter() - t0
    r.specializations = specs
    return r.decide("equal", I)


def rank_tallest_compact(X: Tensor3, opts: Optional[RankOptions] = None) -> RankReport:
    """I = J(K-1): det(Gamma) = 0, random c3..cK, real roots in c2."""
    opts = opts or RankOptions()
    I, J, K = X.I, X.J, X.K
    if I != J * (K - 1) or K < 3:
        raise ValueError(f"shape {X.shape} is not tallest-compact (I = J(K-1), K >= 3)")
    r = _new_report(X, "tallest_compact_det", opts)
    r.backend = "det"
    t0 = time.perf_counter()
    det = bareiss_det(gamma_matrix(X))
    r.timings["elimination"] = time.perf_counter() - t0
    if det.is_zero():
        r.notes.append("det(Gamma) vanishes identically: nongeneric array")
        return r.decide("undecided", I)
    r.eliminant, r.eliminant_variable = det, "c2"
    r.degree = det.total_degree()
    if J % 2 == 1:
        r.notes.append("J odd: the rank-I outcome is guaranteed for generic data")
    t0 = time.perf_counter()
    bits = opts.precision
    # each chosen specialization: (fixed c3..cK, univariate in c2, isolation item)
    chosen = []
    svecs = []
    budget = RETRIES_PER_SPECIALIZATION * I
    draw = 0
    while len(chosen) < I and draw < budget:
        rng = derive_rng(opts.seed, draw)
        draw += 1
        rest = [Fraction(v) for v in random_integers(rng, K - 2)]
        u = det.subs({f"c{k}": v for k, v in zip(range(3, K + 1), rest)})
        try:
            uni = UnivariatePoly.from_polynomial(u, "c2")
        except ValueError:
            continue
        if uni.degree < 1:
            continue
        iso = isolate_real_roots(uni)
        for it in iso.sorted_items():
            if len(chosen) == I:
                break
            with mpmath.workprec(bits):
                c = (mp_root(iso.poly, it, bits),) + tuple(_mp(v) for v in rest)
                Gt = gamma_numeric(X, c)
                s = _normalize_last(left_null_vector(Gt))
                if svecs and not _s_matrix_ok(svecs + [s], bits):
                    continue
            chosen.append((rest, iso.poly, it))
            svecs.append(s)
    r.timings["specialization"] = time.perf_counter() - t0
    r.notes.append(f"{draw} random draws of c3..cK")
    if len(chosen) < I:
        r.notes.append(f"found {len(chosen)} of {I} independent specializations; "
                       f"rank is I or I + 1")
        return r.decide("undecided", I)
    r.basis_ok = True
    if opts.certify:

        def build(b):
            with mpmath.workprec(b):
                return [(mp_root(p, it, b),) + tuple(_mp(v) for v in rest)
                        for rest, p, it in chosen], None

        t0 = time.perf_counter()
        ok = _certify(X, build, opts, r)
        r.timings["certificate"] = time.perf_counter() - t0
        if not ok and r.basis_ok is False:
            return r.decide("undecided", I)
    else:
        r.specializations = [(None,) + tuple(rest) for rest, _, _ in chosen]
    return r.decide("equal", I)


# ---------------------------------------------------------------------------
# router
# ---------------------------------------------------------------------------

def _trivial(X: Tensor3, method: str, rank: int, opts: RankOptions, note: str) -> RankReport:
    r = _new_report(X, method, opts)
    r.notes.append(note)
    return r.decide("equal", rank)


def _drop_last_row(F: FactorTriple) -> FactorTriple:
    # deleting the appended row of A turns the embedded certificate into one for X
    A = F.A[:F.A.rows - 1, :]
    return FactorTriple(A, F.B, F.C, F.S, F.precision_bits, F.residual)


def rank_auto(X: Tensor3, opts: Optional[RankOptions] = None) -> RankReport:
    """Route an array to the applicable procedure; optionally one embedding step."""
    opts = opts or RankOptions()
    if X.is_zero():
        return _trivial(X, "trivial", 0, opts, "zero array")
    perm = ordering_permutation(X.shape)
    Y = X
    if perm != (0, 1, 2):
        if X.mode == "indscal":
            Y = Tensor3(X.slices, "general").permute_modes(perm)
        else:
            Y = X.permute_modes(perm)
    if Y.K == 1:
        r = _trivial(Y, "matrix_rank", rational_rank(Y.slices[0]), opts, "single slice")
        r.permutation = perm
        return r
    if X.mode == "indscal" and perm == (0, 1, 2):
        if indscal_regime(Y.I, Y.J) == "underdetermined":
            r = _new_report(Y, "indscal_minimal", opts)
            r.notes.append("underdetermined INDSCAL shape is not supported")
            return r.decide("undecided", max(Y.I, _unfolding_rank(Y)))
        return rank_indscal_minimal(Y, opts)
    if X.mode == "indscal":
        Y = Tensor3(Y.slices, "general")
    cls = classify(Y.shape)
    if cls.special == "square_two_slice":
        r = rank_square_two_slice(Y, opts)
    elif cls.tallness in ("very_tall", "tall"):
        r = rank_tall(Y, opts)
    elif cls.regime in ("minimal", "overdetermined"):
        r = rank_minimal(Y, opts)
    elif cls.special == "tallest_compact":
        r = rank_tallest_compact(Y, opts)
    else:
        r = _new_report(Y, "unsupported", opts)
        r.notes.append("compact underdetermined shape outside the supported families")
        r.decide("undecided", max(Y.I, _unfolding_rank(Y)))
    if perm != (0, 1, 2):
        r.permutation = perm
        r.notes.append(f"modes permuted by {list(perm)}")
    if opts.embed and r.verdict_kind == "greater" and r.method == "groebner_minimal":
        E = embed(Y, opts.embed_rows)
        r.notes.append(f"{r.verdict} before embedding ({r.real_root_count} of "
                       f"{r.degree} roots real)")
        sub = rank_auto(E, replace(opts, embed=False))
        r.embedded = sub
        if sub.verdict_kind == "equal" and sub.rank == Y.I + 1:
            # rank(X) <= rank(embedded) = I + 1 and rank(X) > I
            r.method = "embedded"
            if sub.certificate is not None:
                r.certificate = _drop_last_row(sub.certificate)
            r.decide("equal", Y.I + 1)
        else:
            r.notes.append(f"embedding did not settle the rank: {sub.verdict}")
    return r
