"""End-to-end acceptance checks; one PASS/FAIL line per criterion in the terminal summary."""

import time
from fractions import Fraction

from realrank.algebra import VarOrder, buchberger, parse_polynomial, shape_check
from realrank.algebra.matrix import bareiss_det
from realrank.census import CensusSpec, run_census, run_trial, trial_array
from realrank.decomposition import verify_decomposition
from realrank.eliminate import eliminate
from realrank.engine import RankOptions, rank_auto
from realrank.roots import UnivariatePoly, isolate_real_roots
from realrank.systems import build_indscal_system, build_system, gamma_matrix
from realrank.tensor import Shape, embed, expected_degree

G1_4X4X3 = "-266104+1131869*c2+1855673*c2^2-10091484*c2^3+3934656*c2^4"
EMBEDDED_QUARTIC = (
    "111296195967997*c2^4-163212875913821*c2^3-288078435761246*c2^3*c3"
    "+188384423078426*c2^2+139757151961919*c2^2*c3-123835533958927*c2^2*c3^2"
    "+3188520736473*c2+1745777654358*c2*c3+145702375007129*c2*c3^2"
    "+154156258186696*c2*c3^3-30068441704134*c3-78231890782721*c3^2"
    "-9292669314727*c3^3+24148992371016*c3^4")

_census_cache = {}


def census(shape, trials):
    key = (shape, trials)
    if key not in _census_cache:
        _census_cache[key] = run_census(CensusSpec(Shape(*shape), trials))
    return _census_cache[key]


def refined(poly, eps=Fraction(1, 10 ** 12)):
    return [float(x) for x in isolate_real_roots(poly).approximations(eps)]


def close(got, want, tol):
    return len(got) == len(want) and all(abs(a - b) <= tol for a, b in zip(got, want))


def test_array_4x4x3_fixture(array_4x4x3, criterion):
    with criterion(1, "4x4x3 fixture: exact G1, 4 real roots, rank 4"):
        t0 = time.perf_counter()
        order = VarOrder(["s1", "s2", "s3", "c3", "c2"])
        G = buchberger(build_system(array_4x4x3, order).equations, order)
        target = parse_polynomial(G1_4X4X3, G[0].variables)
        assert any(g.is_proportional(target) for g in G)
        g1 = UnivariatePoly.from_polynomial(shape_check(G, order).eliminant, "c2")
        assert close(refined(g1), [-0.3369565217, 0.2929292929, 0.2962962963, 2.3125], 1e-6)
        assert rank_auto(array_4x4x3).verdict == "rank = 4"
        assert time.perf_counter() - t0 < 10


def test_array_7x4x3_fixture(array_7x4x3, criterion):
    with criterion(2, "7x4x3 fixture: degree 10, 4 real roots, rank > 7"):
        t0 = time.perf_counter()
        g1 = eliminate(array_7x4x3).eliminant
        assert g1.degree == 10 == expected_degree(array_7x4x3.shape)
        assert close(refined(g1), [-1.871987136, -0.3332612900, -0.2556946431, 0.2733107997], 1e-6)
        assert rank_auto(array_7x4x3).verdict == "rank > 7"
        assert time.perf_counter() - t0 < 300


def test_array_7x4x3_embedding(array_7x4x3, criterion):
    with criterion(3, "embedded 8x4x3: determinant matches quartic, residual <= 1e-6"):
        t0 = time.perf_counter()
        det = bareiss_det(gamma_matrix(embed(array_7x4x3)))
        assert det.is_proportional(parse_polynomial(EMBEDDED_QUARTIC, det.variables))
        r = rank_auto(array_7x4x3, RankOptions(embed=True, precision=128))
        assert r.verdict == "rank = 8" and r.certificate is not None
        assert r.certificate.precision_bits >= 128
        ok, res = verify_decomposition(array_7x4x3, r.certificate, tol=1e-6)
        assert ok and res <= 1e-6
        assert time.perf_counter() - t0 < 60


def test_indscal_4x3x3_indscal(indscal_4x3x3, criterion):
    with criterion(4, "INDSCAL 4x3x3: 6 basis polynomials, degree 4, 2 real roots, rank > 4"):
        t0 = time.perf_counter()
        order = VarOrder(["b1", "b2", "s1", "s2", "s3", "s4"])
        G = buchberger(build_indscal_system(indscal_4x3x3, order).equations, order)
        assert len(G) == 6
        g = UnivariatePoly.from_polynomial(shape_check(G, order).eliminant, "s4")
        assert g.degree == 4 == 2 ** (3 - 1)
        assert close(refined(g, Fraction(1, 10 ** 15)), [-0.001881015674, 0.07632125093], 1e-9)
        r = rank_auto(indscal_4x3x3, RankOptions(order=order))
        assert r.verdict == "rank > 4" and r.real_root_count == 2
        assert time.perf_counter() - t0 < 30


def test_indscal_7x4x4_indscal(indscal_7x4x4, criterion):
    with criterion(5, "INDSCAL 7x4x4: degree 8, 2 real roots, rank > 7"):
        t0 = time.perf_counter()
        r = rank_auto(indscal_7x4x4)
        assert r.degree == 8 == 2 ** (4 - 1)
        assert close(refined(r.eliminant), [-4.615952848, 1.035693119], 1e-6)
        assert r.verdict == "rank > 7"
        assert time.perf_counter() - t0 < 600


def test_degree_sweep(criterion):
    with criterion(6, "degree formula sweep and observed census degrees"):
        shapes = [(5, 3, 3), (7, 4, 3), (9, 5, 3), (10, 4, 4), (13, 5, 4), (16, 6, 4)]
        assert [expected_degree(Shape(*s)) for s in shapes] == [6, 10, 15, 20, 35, 56]
        for shape, trials, deg in [((5, 3, 3), 200, 6), ((7, 4, 3), 50, 10)]:
            h = census(shape, trials)
            assert h.valid >= 50 and h.degree_observed == deg
            assert not any("degree" in note for _, note in h.anomalies)
            assert all(n % 2 == deg % 2 and n <= deg for n in h.counts)


def test_pencil_census(criterion):
    with criterion(7, "3x3x2 census, 1000 trials: Pr(3 real roots) = 0.4824 +- 0.05"):
        t0 = time.perf_counter()
        h = census((3, 3, 2), 1000)
        assert set(h.counts) <= {1, 3}
        assert abs(h.fraction(3) - 0.4824) <= 0.05
        assert time.perf_counter() - t0 < 30


def test_five_by_three_census(criterion):
    with criterion(8, "5x3x3 census, 200 trials: counts in {0,2,4,6}, Pr(6) = 0.068 +- 0.05"):
        t0 = time.perf_counter()
        h = census((5, 3, 3), 200)
        assert set(h.counts) <= {0, 2, 4, 6}
        assert abs(h.fraction(6) - 0.068) <= 0.05
        assert time.perf_counter() - t0 < 1800


def test_property_suites(array_4x4x3, array_7x4x3, indscal_4x3x3, indscal_7x4x4, criterion):
    import test_algebra
    import test_roots
    with criterion(9, "property suites: Buchberger, Sturm, Bareiss, parity, invariance"):
        test_algebra.test_buchberger_correctness()
        test_roots.test_sturm_matches_isolation()
        test_algebra.test_bareiss_matches_cofactor()
        census((3, 3, 2), 1000)
        for shape, trials in _census_cache:
            h = _census_cache[(shape, trials)]
            deg = h.degree_observed
            assert all(n % 2 == deg % 2 for n in h.counts)
        for X in (array_4x4x3, array_7x4x3, indscal_4x3x3, indscal_7x4x4):
            base = rank_auto(X)
            scaled = rank_auto(X.scaled(Fraction(5, 3)))
            assert (scaled.verdict, scaled.real_root_count) == (base.verdict, base.real_root_count)
            if X.mode == "indscal":
                # swapping the two symmetric modes is the only permutation that keeps
                # the array an INDSCAL array
                moved = rank_auto(X.permute_modes((0, 2, 1)))
            else:
                moved = rank_auto(X.permute_modes((1, 2, 0)))
                assert moved.permutation is not None
            assert moved.verdict == base.verdict


def test_single_large_instances(criterion):
    with criterion(10, "single draws: 9x5x3 degree 15, 10x4x4 degree 20, parity-consistent"):
        for shape, deg in [((9, 5, 3), 15), ((10, 4, 4), 20)]:
            spec = CensusSpec(Shape(*shape), 1, master_seed=7, backend="projected")
            _, d, n, note = run_trial(spec, 0)
            assert note is None and d == deg
            assert n % 2 == deg % 2 and n <= deg
        # independent route on the K = 3 draw: same eliminant from the resultant backend
        X = trial_array(CensusSpec(Shape(9, 5, 3), 1, master_seed=7), 0)
        assert eliminate(X, "projected").eliminant.monic() == eliminate(X, "resultant").eliminant.monic()
