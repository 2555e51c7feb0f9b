import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from realrank.algebra import VarOrder, buchberger
from realrank.algebra.matrix import bareiss_det
from realrank.systems import build_indscal_system, build_system, gamma_matrix
from realrank.tensor import (Shape, Tensor3, TensorFormatError, classify, embed,
                             expected_degree, indscal_expected_degree, khovanskii_bound,
                             parse_tensor, print_tensor, tensor_slice)


def ones(I, J, K):
    return Tensor3([[[1] * J for _ in range(I)] for _ in range(K)])


def test_slice_of_all_ones():
    assert tensor_slice(ones(2, 2, 2), 3, 0) == [[1, 1], [1, 1]]


def test_array_7x4x3_second_slice(array_7x4x3):
    # slices are stored I x J, one per third-mode index
    X2 = tensor_slice(array_7x4x3, 3, 1)
    assert len(X2) == 7 and len(X2[0]) == 4
    assert X2 == [list(r) for r in array_7x4x3.slices[1]]


def test_indscal_third_mode_slice(indscal_4x3x3):
    # X[i, j, 0] is the first column of the i-th symmetric J x J slice
    m = tensor_slice(indscal_4x3x3, 3, 0)
    assert len(m) == 4 and len(m[0]) == 3
    assert all(m[i][j] == indscal_4x3x3[i, 0, j] for i in range(4) for j in range(3))


def test_slice_out_of_range():
    with pytest.raises((IndexError, ValueError)):
        tensor_slice(ones(2, 2, 2), 3, 5)


@pytest.mark.parametrize("shape, tallness, regime, special", [
    ((3, 3, 2), "compact", "minimal", "square_two_slice"),
    ((8, 4, 3), "compact", "underdetermined", "tallest_compact"),
    ((15, 8, 3), "compact", "minimal", "none"),
    ((11, 4, 3), "tall", "underdetermined", "none"),
    ((12, 4, 3), "very_tall", "underdetermined", "none"),
    ((4, 4, 3), "compact", "overdetermined", "none"),
])
def test_classify(shape, tallness, regime, special):
    c = classify(Shape(*shape))
    assert (c.tallness, c.regime, c.special) == (tallness, regime, special)
    I, J, K = shape
    assert c.neq == (K - 1) * J and c.df == (I - 1) + (K - 1) and c.nbil == K - 1


def test_classify_names_permutation():
    with pytest.raises(ValueError, match="permute"):
        classify(Shape(3, 4, 5))


def test_build_system_counts(array_7x4x3):
    s = build_system(ones(3, 3, 2))
    assert len(s.equations) == 3 and set(s.variables) == {"s1", "s2", "c2"}
    s6 = build_system(array_7x4x3)
    assert len(s6.equations) == 8
    assert s6.variables == ("s1", "s2", "s3", "s4", "s5", "s6", "c3", "c2")
    assert all(e.total_degree() <= 2 for e in s6.equations)
    assert s6.normalization == {"c1": 1, "s7": 1}


def test_identical_slices_solved_by_unit_c():
    X = Tensor3([[[1, 2], [3, 4], [5, 7]]] * 3)
    s = build_system(X)
    for e in s.equations:
        assert e.subs({"c2": 1, "c3": 1}).is_zero()


def test_build_system_needs_two_slices():
    with pytest.raises(ValueError):
        build_system(Tensor3([[[1, 2], [3, 4]]]))


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(2, 4))
def test_system_dimensions(I, J, K):
    X = ones(I, J, K)
    s = build_system(X)
    assert len(s.equations) == (K - 1) * J
    assert len(s.variables) == (I - 1) + (K - 1)
    G = gamma_matrix(X)
    assert G.shape == (I, (K - 1) * J)


def test_indscal_system_indscal_4x3x3(indscal_4x3x3):
    s = build_indscal_system(indscal_4x3x3, VarOrder(["b1", "b2", "s1", "s2", "s3", "s4"]))
    assert len(s.equations) == 9
    assert len(buchberger(s.equations, s.order)) == 6


def test_indscal_system_indscal_7x4x4(indscal_7x4x4):
    s = build_indscal_system(indscal_7x4x4)
    G = buchberger(s.equations, s.order)
    assert len(G) == 10
    assert G[0].degree("b3") == 8


def test_indscal_one_by_two():
    # b1 = 1 and b1*b2 = 0 clash with s1 = b2^2 for diag(1, 1): no rank-1 solution
    X = Tensor3.from_symmetric_slices([[[1, 0], [0, 1]]])
    s = build_indscal_system(X, fixed_b=1)
    G = buchberger(s.equations, VarOrder(["s1", "b2"]))
    assert [g.is_constant() for g in G] == [True]
    # the all-ones slice is b b' with b = (1, 1): one solution
    X = Tensor3.from_symmetric_slices([[[1, 1], [1, 1]]])
    s = build_indscal_system(X, fixed_b=1)
    G = buchberger(s.equations, VarOrder(["s1", "b2"]))
    assert {g.to_str() for g in G} == {"b2-1", "s1-1"}


def test_indscal_rejects_asymmetry():
    bad = Tensor3([[[1, 2]], [[3, 4]]], "general")
    with pytest.raises(TensorFormatError, match="symmetry"):
        Tensor3(bad.slices, "indscal")


def test_gamma_shapes(array_7x4x3):
    X = ones(8, 4, 3)
    assert gamma_matrix(X).shape == (8, 8)
    assert gamma_matrix(ones(3, 3, 2)).shape == (3, 3)
    E = embed(array_7x4x3)
    assert gamma_matrix(E).shape == (8, 8)


EMBEDDED_QUARTIC = ("111296195967997*c2^4-163212875913821*c2^3-288078435761246*c2^3*c3"
                   "+188384423078426*c2^2+139757151961919*c2^2*c3-123835533958927*c2^2*c3^2"
                   "+3188520736473*c2+1745777654358*c2*c3+145702375007129*c2*c3^2"
                   "+154156258186696*c2*c3^3-30068441704134*c3-78231890782721*c3^2"
                   "-9292669314727*c3^3+24148992371016*c3^4")


def test_embedded_determinant_matches_quartic(array_7x4x3):
    from realrank.algebra import parse_polynomial
    det = bareiss_det(gamma_matrix(embed(array_7x4x3)))
    assert det.is_proportional(parse_polynomial(EMBEDDED_QUARTIC, det.variables))


def test_embed_shapes(array_7x4x3):
    E = embed(array_7x4x3)
    assert E.shape == Shape(8, 4, 3)
    assert E.slices[0][7] == (1, 0, 0, 0) or list(E.slices[0][7]) == [1, 0, 0, 0]
    assert all(E[i, j, k] == array_7x4x3[i, j, k] for i in range(7) for j in range(4) for k in range(3))
    assert embed(embed(array_7x4x3)).shape == Shape(9, 4, 3)
    with pytest.raises(ValueError):
        embed(array_7x4x3, [[1, 0, 0]] * 3)


@pytest.mark.parametrize("shape, seed", [((6, 3, 3), 5), ((8, 4, 3), 1), ((6, 2, 4), 2)])
def test_tallest_compact_determinant_degree(shape, seed):
    # the product of all c_k^J never survives: its coefficient is det[X1, ..., X1] = 0
    from realrank.census import generate_generic
    I, J, K = shape
    X = generate_generic(Shape(*shape), seed=seed)
    det = bareiss_det(gamma_matrix(X))
    assert det.total_degree() == J
    names = [f"c{k}" for k in range(K, 1, -1)]
    e, _ = det.leading_term(VarOrder(names))
    assert e[det.variables.index(f"c{K}")] == J


@pytest.mark.parametrize("shape, deg", [((5, 3, 3), 6), ((7, 4, 3), 10), ((9, 5, 3), 15),
                                        ((10, 4, 4), 20), ((13, 5, 4), 35), ((16, 6, 4), 56)])
def test_expected_degree(shape, deg):
    assert expected_degree(Shape(*shape)) == deg
    assert khovanskii_bound(Shape(*shape)) >= deg


def test_expected_degree_requires_minimal():
    with pytest.raises(ValueError):
        expected_degree(Shape(4, 4, 3))


def test_indscal_degree():
    assert [indscal_expected_degree(J) for J in (2, 3, 4)] == [2, 4, 8]


def test_khovanskii_values():
    assert khovanskii_bound(Shape(3, 3, 2)) == 16384
    assert khovanskii_bound(Shape(5, 3, 3)) == 2 ** 66 * 7 ** 12


def test_json_round_trip(array_4x4x3, array_7x4x3, indscal_4x3x3):
    for X in (array_4x4x3, array_7x4x3, indscal_4x3x3):
        text = print_tensor(X)
        assert parse_tensor(text) == X
        assert print_tensor(parse_tensor(text)) == text


def test_rational_entries_round_trip():
    X = Tensor3([[[Fraction(1, 3), 2]], [[-5, Fraction(7, 2)]]])
    d = json.loads(print_tensor(X))
    assert d["entries"] == "rational-string" and d["slices"][0][0][0] == "1/3"
    assert parse_tensor(print_tensor(X)) == X


@pytest.mark.parametrize("text, where", [
    ('{"slices": []}', "non-empty"),
    ('{"slices": [[[1, 2], [3]]]}', "ragged|row"),
    ('{"slices": [[[1, "x"]]]}', "non-numeric"),
    ('{"slices": [[[1, 2]], [[1, 2]]], "shape": [2, 2, 2]}', "shape"),
    ('{"slices": [[[1, 2]]', "line 1"),
])
def test_parse_errors(text, where):
    with pytest.raises(TensorFormatError, match=where):
        parse_tensor(text)


def test_mode_permutation_round_trip(array_7x4x3):
    Y = array_7x4x3.permute_modes((2, 0, 1))
    assert Y.shape == Shape(3, 7, 4)
    assert Y[1, 5, 2] == array_7x4x3[5, 2, 1]
