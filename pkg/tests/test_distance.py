import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tcmnn.distance import (DistanceSpec, distances_to_point, euclidean,
                            eval_distance, kernel_distance, minkowski,
                            pairwise_matrix, poly_feature_count, poly_kernel)

from .oracles import count_monomials, monomial_feature_map, oracle_distance

vec = st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=5)


def test_euclidean_pythagorean():
    assert euclidean([0, 0], [3, 4]) == 5.0


def test_euclidean_reflexive():
    a = [1.5, -2.0, 7.25]
    assert euclidean(a, a) == 0.0


def test_euclidean_dimension_mismatch():
    with pytest.raises(ValueError):
        euclidean([1, 2], [1, 2, 3])


def test_minkowski_city_block():
    assert minkowski([0, 0], [1, 1], 1) == 2.0


def test_minkowski_rejects_nonpositive_exponent():
    with pytest.raises(ValueError):
        minkowski([0.0], [1.0], 0.0)
    with pytest.raises(ValueError):
        minkowski([0.0], [1.0], -1.5)


def test_fractional_minkowski_triangle_violation():
    # L_{1/2} on the unit square corners: 1 + 1 < 4
    a, b, c = [1.0, 0.0], [0.0, 0.0], [0.0, 1.0]
    assert minkowski(a, b, 0.5) == 1.0
    assert minkowski(b, c, 0.5) == 1.0
    assert minkowski(a, c, 0.5) == 4.0
    assert not DistanceSpec.minkowski(0.5).is_metric
    assert DistanceSpec.minkowski(1.0).is_metric


def test_minkowski_two_equals_euclidean_random():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = rng.integers(1, 6)
        a, b = rng.normal(size=n), rng.normal(size=n)
        assert minkowski(a, b, 2) == pytest.approx(euclidean(a, b), rel=1e-12)


def test_poly_kernel_direct():
    assert poly_kernel([1, 2], [3, 4], 2, 1) == 144.0


def test_poly_kernel_degree_one_is_inner_product():
    rng = np.random.default_rng(1)
    a, b = rng.normal(size=4), rng.normal(size=4)
    assert poly_kernel(a, b, 1, 0.0) == pytest.approx(float(a @ b), rel=1e-12)


def test_poly_kernel_explicit_degree_two_map():
    # (x1 z1 + x2 z2)^2 = <phi(a), phi(b)> with phi(x) = (x1^2, x2^2, sqrt2 x1 x2)
    rng = np.random.default_rng(2)
    for _ in range(50):
        a, b = rng.normal(size=2), rng.normal(size=2)
        phi = lambda x: np.array([x[0] ** 2, x[1] ** 2, math.sqrt(2) * x[0] * x[1]])
        assert poly_kernel(a, b, 2, 0.0) == pytest.approx(
            float(phi(a) @ phi(b)), rel=1e-9, abs=1e-12)


def test_kernel_distance_linear_kernel_is_euclidean():
    rng = np.random.default_rng(3)
    for _ in range(100):
        a, b = rng.normal(size=3), rng.normal(size=3)
        assert kernel_distance(a, b, 1, 0.0) == pytest.approx(
            euclidean(a, b), rel=1e-9, abs=1e-12)


def test_kernel_distance_reflexive_after_clamp():
    a = np.array([0.3, -1.7, 2.2])
    assert kernel_distance(a, a, 3, 0.5) == 0.0
    assert kernel_distance(a, a, 2, -1.0) == 0.0  # non-PSD constant clamps


def test_kernel_distance_monomial_oracle():
    rng = np.random.default_rng(4)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        d = int(rng.integers(1, 4))
        c = float(rng.choice([0.0, 0.5, 10.0]))
        a, b = rng.uniform(-1.5, 1.5, n), rng.uniform(-1.5, 1.5, n)
        expected = euclidean(monomial_feature_map(a, d, c),
                             monomial_feature_map(b, d, c))
        assert kernel_distance(a, b, d, c) == pytest.approx(
            expected, rel=1e-9, abs=1e-10)


def test_eval_distance_dispatch():
    assert eval_distance(DistanceSpec.euclidean(), [0, 0], [3, 4]) == 5.0
    rng = np.random.default_rng(5)
    for _ in range(50):
        a, b = rng.normal(size=3), rng.normal(size=3)
        assert eval_distance(DistanceSpec.minkowski(2), a, b) == pytest.approx(
            eval_distance(DistanceSpec.euclidean(), a, b), rel=1e-12)
        assert eval_distance(DistanceSpec.poly(1, 0.0), a, b) == pytest.approx(
            eval_distance(DistanceSpec.euclidean(), a, b), rel=1e-9)


@given(vec, vec, st.sampled_from([0.5, 1.0, 2.0, 3.0]))
@settings(max_examples=150, deadline=None)
def test_symmetry_and_nonnegativity(a, b, p):
    if len(a) != len(b):
        b = (b * len(a))[:len(a)]
    for spec in (DistanceSpec.euclidean(), DistanceSpec.minkowski(p),
                 DistanceSpec.poly(2, 0.5)):
        d_ab = eval_distance(spec, a, b)
        d_ba = eval_distance(spec, b, a)
        assert d_ab == d_ba  # exact, by construction
        assert d_ab >= 0.0
        assert eval_distance(spec, a, a) == 0.0


def test_scale_equivariance():
    rng = np.random.default_rng(6)
    for _ in range(100):
        a, b = rng.normal(size=4), rng.normal(size=4)
        s = float(rng.uniform(0.1, 9.0))
        for spec in (DistanceSpec.euclidean(), DistanceSpec.minkowski(1.0),
                     DistanceSpec.minkowski(0.5), DistanceSpec.minkowski(3.0)):
            assert eval_distance(spec, s * a, s * b) == pytest.approx(
                s * eval_distance(spec, a, b), rel=1e-12)


@given(st.integers(1, 4), vec, vec, vec)
@settings(max_examples=100, deadline=None)
def test_triangle_inequality_holds_for_p_at_least_one(p, a, b, c):
    n = min(len(a), len(b), len(c))
    a, b, c = a[:n], b[:n], c[:n]
    d = lambda u, v: minkowski(u, v, p)
    assert d(a, b) + d(b, c) >= d(a, c) - 1e-9


def test_spec_text_round_trip():
    for spec in (DistanceSpec.euclidean(), DistanceSpec.minkowski(0.25),
                 DistanceSpec.minkowski(3.0), DistanceSpec.poly(2, 0.5),
                 DistanceSpec.poly(5, -1.0)):
        assert DistanceSpec.parse(spec.text()) == spec
    with pytest.raises(ValueError):
        DistanceSpec.parse("chebyshev")
    with pytest.raises(ValueError):
        DistanceSpec.parse("minkowski:0")
    with pytest.raises(ValueError):
        DistanceSpec.parse("poly:0:1")


def test_poly_feature_count_values():
    assert poly_feature_count(135, 2, False) == 9180
    assert poly_feature_count(1, 1, False) == 1
    assert poly_feature_count(3, 2, True) == 10
    # brute-force enumeration agreement on small cases
    for n in range(1, 5):
        for d in range(1, 4):
            assert poly_feature_count(n, d, True) == count_monomials(n, d, True)
            assert poly_feature_count(n, d, False) == count_monomials(n, d, False)


def test_pairwise_matrix_matches_scalar_oracle(backend):
    rng = np.random.default_rng(8)
    X = rng.uniform(-2, 2, size=(12, 3))
    for spec in (DistanceSpec.euclidean(), DistanceSpec.minkowski(0.5),
                 DistanceSpec.minkowski(3.0), DistanceSpec.poly(2, 0.5)):
        D = pairwise_matrix(X, spec)
        assert np.array_equal(D, D.T)
        assert np.all(np.diag(D) == 0.0)
        for i in range(len(X)):
            for j in range(len(X)):
                assert D[i, j] == pytest.approx(
                    oracle_distance(spec, X[i], X[j]), rel=1e-9, abs=1e-12)
        q = rng.uniform(-2, 2, size=3)
        dq = distances_to_point(X, q, spec)
        for i in range(len(X)):
            assert dq[i] == pytest.approx(oracle_distance(spec, X[i], q),
                                          rel=1e-9, abs=1e-12)
