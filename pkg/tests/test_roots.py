from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import assume, given, settings, strategies as st

from realrank.algebra import parse_polynomial
from realrank.roots import (RootError, UnivariatePoly, count_real_roots, isolate_real_roots,
                            is_squarefree, real_roots, refine_root, squarefree_part,
                            sturm_count)

G1_4X4X3 = "3934656*c2^4-10091484*c2^3+1855673*c2^2+1131869*c2-266104"
G1_INDSCAL_7X4X4 = (
    "-267319790697212354162205439965563724346086890209668628287611296"
    "-418573483979735109514695930195818332286961955303805928337210144*b3"
    "-53224562968122644847846329140305933491773608156555442814188832*b3^2"
    "+190260260230311283947025128614232688395842607775283676963072480*b3^3"
    "+172806709139583658797792038234309205181892588602072553465939944*b3^4"
    "+164461253658569745584828839860332360925297521683057843681458288*b3^5"
    "+95090716874891491062104108972298040778579595301835996945880112*b3^6"
    "+24575461542028106507015735163996805821952192308876843008456228*b3^7"
    "+2240887382441309183839416634048576470976843441637962999441259*b3^8")


def U(text):
    return UnivariatePoly.from_polynomial(parse_polynomial(text))


def test_squarefree_part_examples():
    assert squarefree_part(U("(c2-1)^2")) == U("c2-1")
    assert squarefree_part(U("c2^2+1")) == U("c2^2+1")
    g1 = U(G1_4X4X3)
    assert squarefree_part(g1) == g1.monic()
    with pytest.raises(RootError):
        squarefree_part(UnivariatePoly([]))


def test_sturm_count_examples():
    assert sturm_count(U("c2^2-1")) == 2
    assert sturm_count(U("c2^2+1")) == 0
    assert sturm_count(U(G1_4X4X3)) == 4
    assert sturm_count(U("c2^2-1"), 0, 2) == 1
    with pytest.raises(RootError):
        sturm_count(U("c2^2-1"), 1, 2)


def test_array_7x4x3_eliminant_has_four_real_roots(array_7x4x3):
    from realrank.eliminate import eliminate
    g1 = eliminate(array_7x4x3, "resultant").eliminant
    assert g1.degree == 10
    assert sturm_count(squarefree_part(g1)) == 4


def test_isolate_sqrt2_pair():
    iso = isolate_real_roots(U("c2^2-2"))
    assert iso.count == 2 and not iso.exact_roots
    (a, b), (c, d) = iso.intervals
    assert a < -Fraction(1414, 1000) < b and c < Fraction(1414, 1000) < d


def test_isolate_array_4x4x3_rational_roots():
    iso = isolate_real_roots(U(G1_4X4X3))
    assert iso.exact_roots == [Fraction(-31, 92), Fraction(29, 99), Fraction(8, 27), Fraction(37, 16)]
    want = [-0.3369565217, 0.2929292929, 0.2962962963, 2.3125]
    assert all(abs(float(x) - y) < 1e-6 for x, y in zip(real_roots(U(G1_4X4X3)), want))


def test_isolate_indscal_7x4x4_eliminant():
    roots = real_roots(U(G1_INDSCAL_7X4X4))
    assert len(roots) == 2
    assert abs(float(roots[0]) + 4.615952848) < 1e-6
    assert abs(float(roots[1]) - 1.035693119) < 1e-6


def test_refine_root_examples():
    r = refine_root(U("c2-1/3"), (0, 1), Fraction(1, 10 ** 9))
    assert abs(r - Fraction(1, 3)) <= Fraction(1, 10 ** 9)
    r = refine_root(U("c2^2-2"), (1, 2), Fraction(1, 10 ** 12))
    oracle = Fraction(isqrt(2 * 10 ** 40), 10 ** 20)
    assert abs(r - oracle) <= Fraction(1, 10 ** 12)
    with pytest.raises(RootError):
        refine_root(U("c2^2-2"), (2, 3), Fraction(1, 100))


def test_refine_indscal_4x3x3_smaller_root(indscal_4x3x3):
    from realrank.algebra import VarOrder, buchberger, shape_check
    from realrank.systems import build_indscal_system
    order = VarOrder(["b1", "b2", "s1", "s2", "s3", "s4"])
    system = build_indscal_system(indscal_4x3x3, order)
    g4 = shape_check(buchberger(system.equations, order), order).eliminant
    iso = isolate_real_roots(UnivariatePoly.from_polynomial(g4, "s4"))
    kind, interval = iso.sorted_items()[0]
    r = refine_root(iso.poly, interval, Fraction(1, 10 ** 9))
    assert abs(float(r) + 0.001881015674) < 2e-9


def test_to_json_layout():
    d = isolate_real_roots(U("(c2-1/2)*(c2^2-3)")).to_json()
    assert d["count"] == 3
    assert {"exact": "1/2", "approx": 0.5} in d["roots"]
    assert sum("interval" in r for r in d["roots"]) == 2


coeffs = st.lists(st.integers(-20, 20), min_size=2, max_size=13)


@settings(max_examples=200, deadline=None)
@given(coeffs)
def test_sturm_matches_isolation(cs):
    p = UnivariatePoly(cs)
    assume(p.degree >= 1)
    sqf = squarefree_part(p)
    iso = isolate_real_roots(p)
    assert sturm_count(sqf) == iso.count
    assert iso.count <= p.degree
    for lo, hi in iso.intervals:
        assert sqf(lo) * sqf(hi) < 0
    assert iso.intervals == sorted(iso.intervals)


@settings(max_examples=100, deadline=None)
@given(coeffs, st.fractions(min_value=-10, max_value=10).filter(lambda q: q != 0))
def test_count_invariant_under_scaling_and_mirror(cs, q):
    p = UnivariatePoly(cs)
    assume(p.degree >= 1)
    n = count_real_roots(p)
    assert count_real_roots(p.scale(q)) == n
    assert count_real_roots(p.mirror()) == n
    mirrored = sorted(-r for r in isolate_real_roots(p).exact_roots)
    assert isolate_real_roots(p.mirror()).exact_roots == mirrored


@settings(max_examples=100, deadline=None)
@given(coeffs)
def test_parity_for_squarefree(cs):
    p = UnivariatePoly(cs)
    assume(p.degree >= 1 and is_squarefree(p))
    assert count_real_roots(p) % 2 == p.degree % 2
