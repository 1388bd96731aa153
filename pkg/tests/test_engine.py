import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from magnitude import errors
from magnitude.engine import (
    STATUS_CLOSED_FORM,
    STATUS_SINGULAR_CONSISTENT,
    STATUS_SINGULAR_NO_WEIGHTING,
    cauchy_schwarz_ratio,
    fibration_magnitude,
    glued_magnitude,
    is_positive_definite,
    magnitude,
    magnitude_code,
    magnitude_homogeneous,
    magnitude_scattered_series,
    mobius,
    product_magnitude,
    similarity,
    ultrametric_magnitude_bound,
    union_magnitude,
)
from magnitude.spaces import (
    constant_distance_glue,
    distant_union,
    from_distance_matrix,
    from_points,
    from_poset,
    scale,
    tensor_product,
)
from magnitude.verify import (
    bipartite_graph,
    complete_graph,
    k32_closed_form,
    poset_leq,
    random_poset,
    random_ultrametric,
    rota_euler_characteristic,
)

LOG_SQRT2 = math.log(math.sqrt(2.0))


def uniform_space(n, t):
    return from_distance_matrix(np.where(np.eye(n, dtype=bool), 0.0, float(t)))


class TestSimilarity:
    def test_discrete_space_gives_identity(self):
        space = distant_union(from_points([0.0]), from_points([0.0]))
        sim = similarity(space)
        assert np.array_equal(sim.zeta, np.eye(2))
        assert sim.factorization == "cholesky"

    def test_two_point_entries(self):
        d = 1.3
        sim = similarity(from_distance_matrix([[0, d], [d, 0]]))
        assert sim.zeta[0, 1] == pytest.approx(math.exp(-d))
        assert np.all(np.diag(sim.zeta) == 1.0)

    def test_poset_chain_zeta(self):
        space = from_poset("ab", [("a", "b")])
        sim = similarity(space)
        assert np.array_equal(sim.zeta, [[1, 1], [0, 1]])
        assert sim.factorization == "lu"

    def test_singular_detected(self):
        space = scale(bipartite_graph(3, 2), LOG_SQRT2)
        sim = similarity(space)
        assert sim.factorization == "singular"
        assert sim.rcond < 1e-12


class TestMagnitudeBasics:
    def test_empty_space(self):
        space = from_distance_matrix(np.zeros((0, 0)))
        res = magnitude(space)
        assert res.magnitude == 0.0

    def test_one_point(self):
        assert magnitude(from_points([0.0])).magnitude == 1.0

    def test_two_point_tanh(self):
        for d in (0.01, 0.5, 2.0, 9.0):
            res = magnitude(from_distance_matrix([[0, d], [d, 0]]))
            assert res.magnitude == pytest.approx(1 + math.tanh(d / 2), abs=1e-14)

    def test_real_subsets_tanh_sum(self):
        xs = [0.0, 0.7, 1.9, 4.0]
        res = magnitude(from_points(xs))
        gaps = np.diff(xs)
        assert res.magnitude == pytest.approx(
            1 + sum(math.tanh(g / 2) for g in gaps), abs=1e-12)

    def test_k32_singular_no_weighting(self):
        res = magnitude(scale(bipartite_graph(3, 2), LOG_SQRT2))
        assert res.status == STATUS_SINGULAR_NO_WEIGHTING
        assert res.magnitude is None

    def test_k33_singular_consistent(self):
        # homogeneous, so magnitude exists although zeta is singular
        space = scale(bipartite_graph(3, 3), math.log(2.0))
        res = magnitude(space)
        assert res.status == STATUS_SINGULAR_CONSISTENT
        speyer = magnitude_homogeneous(space, check=False)
        assert res.magnitude == pytest.approx(speyer.magnitude, abs=1e-9)

    def test_zero_distance_pair_consistent(self):
        # adjoining a point at distance zero keeps the magnitude (equivalence)
        space = from_distance_matrix([[0, 0, 1], [0, 0, 1], [1, 1, 0]],
                                     generalized=True)
        two = from_distance_matrix([[0, 1], [1, 0]])
        res = magnitude(space)
        assert res.status == STATUS_SINGULAR_CONSISTENT
        assert res.magnitude == pytest.approx(magnitude(two).magnitude, abs=1e-9)

    def test_weight_coweight_duality(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            n = int(rng.integers(2, 8))
            d = rng.uniform(1.0, 2.0, (n, n))  # [m, 2m] keeps the triangle
            d = np.triu(d, 1)
            d = d + d.T
            space = from_distance_matrix(d + rng.uniform(0, 0.5) * _asym(rng, n),
                                         generalized=True)
            res = magnitude(space)
            if res.defined:
                assert abs(res.weighting.sum() - res.coweighting.sum()) < 1e-10

    def test_deterministic_totals(self):
        space = from_points(np.random.default_rng(0).uniform(0, 3, (40, 2)))
        first = magnitude(space).magnitude
        assert all(magnitude(space).magnitude == first for _ in range(3))


def _asym(rng, n):
    """Small asymmetric perturbation that keeps the triangle inequality."""
    a = rng.uniform(0, 0.1, (n, n))
    np.fill_diagonal(a, 0.0)
    return a


class TestMobius:
    def test_one_point(self):
        assert np.array_equal(mobius(from_points([0.0])).mu, [[1.0]])

    def test_poset_two_chain(self):
        # hand inversion of [[1,1],[0,1]]
        mob = mobius(from_poset("ab", [("a", "b")]))
        assert np.array_equal(mob.mu, [[1, -1], [0, 1]])
        assert mob.total() == 1.0

    def test_row_sums_are_weighting(self):
        space = from_points([0.0, 1.0, 2.5])
        mob = mobius(space)
        res = magnitude(space)
        assert np.allclose(mob.weighting(), res.weighting, atol=1e-12)
        assert mob.total() == pytest.approx(res.magnitude, abs=1e-12)

    def test_one_point_union_block_formula(self):
        # mu(c,c) = mu_A(c,c) + mu_B(c,c) - 1 for a gated one-point union
        xs = [0.0, 1.0, 2.0]
        space = from_points(xs)
        mob = mobius(space)
        mu_a = mobius(space.subspace([0, 1])).mu
        mu_b = mobius(space.subspace([1, 2])).mu
        assert mob.mu[0, 0] == pytest.approx(mu_a[0, 0])
        assert mob.mu[2, 2] == pytest.approx(mu_b[1, 1])
        assert mob.mu[1, 1] == pytest.approx(mu_a[1, 1] + mu_b[0, 0] - 1)
        assert mob.mu[0, 2] == pytest.approx(0.0, abs=1e-14)

    def test_singular_raises(self):
        with pytest.raises(errors.SingularSimilarity):
            mobius(scale(bipartite_graph(3, 2), LOG_SQRT2))

    def test_zeta_mu_is_identity(self):
        space = from_points(np.random.default_rng(5).uniform(0, 2, (12, 3)))
        sim = similarity(space)
        mob = mobius(space)
        assert np.allclose(sim.zeta @ mob.mu, np.eye(12), atol=1e-10)


class TestPositiveDefinite:
    def test_l2_cloud(self):
        cloud = from_points(np.random.default_rng(1).uniform(0, 2, (30, 4)))
        assert is_positive_definite(cloud).pd

    def test_l1_cloud(self):
        cloud = from_points(np.random.default_rng(2).uniform(0, 2, (30, 3)), p=1)
        assert is_positive_definite(cloud).pd

    def test_three_point_always(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            a, b = rng.uniform(0.1, 4, 2)
            c = rng.uniform(abs(a - b) + 1e-9, a + b)
            space = from_distance_matrix([[0, a, c], [a, 0, b], [c, b, 0]])
            assert is_positive_definite(space).pd

    def test_k32_at_singularity_not_pd(self):
        cert = is_positive_definite(scale(bipartite_graph(3, 2), LOG_SQRT2))
        assert not cert.pd
        assert abs(cert.min_eigenvalue) < 1e-12

    def test_k32_below_singularity_not_pd(self):
        cert = is_positive_definite(scale(bipartite_graph(3, 2), 0.34))
        assert not cert.pd
        assert cert.min_eigenvalue < 0

    def test_asymmetric_rejected(self):
        with pytest.raises(errors.AsymmetricSpace):
            is_positive_definite(from_poset("ab", [("a", "b")]))


class TestScatteredSeries:
    def test_one_point_terminates(self):
        res = magnitude_scattered_series(from_points([0.0]))
        assert res.magnitude == pytest.approx(1.0)

    def test_three_points_match_solve(self):
        space = uniform_space(3, 2.0)  # 2 > log 2
        series = magnitude_scattered_series(space)
        direct = magnitude(space)
        assert series.magnitude == pytest.approx(direct.magnitude, abs=1e-8)

    def test_not_scattered_rejected(self):
        with pytest.raises(errors.NotScattered):
            magnitude_scattered_series(uniform_space(5, math.log(4)))

    def test_not_converged(self):
        space = uniform_space(3, math.log(2) + 1e-6)  # barely scattered
        with pytest.raises(errors.SeriesNotConverged):
            magnitude_scattered_series(space, max_terms=3)

    def test_positive_weights_on_scattered(self):
        rng = np.random.default_rng(8)
        n = 6
        m = math.log(n - 1) + 0.2
        d = rng.uniform(m, 2 * m, (n, n))
        d = np.triu(d, 1)
        space = from_distance_matrix(d + d.T)
        res = magnitude_scattered_series(space)
        assert np.all(res.weighting > 0)


class TestHomogeneous:
    def test_complete_graph_formula(self):
        for n in (2, 4, 7):
            for t in (0.3, 1.0, 3.0):
                res = magnitude_homogeneous(scale(complete_graph(n), t))
                assert res.magnitude == pytest.approx(
                    n / (1 + (n - 1) * math.exp(-t)), abs=1e-12)
                assert res.status == STATUS_CLOSED_FORM

    def test_singular_homogeneous_has_value(self):
        space = scale(bipartite_graph(3, 3), LOG_SQRT2)
        res = magnitude_homogeneous(space)
        assert res.magnitude is not None
        assert res.diagnostics.get("direct_solve") is not None

    def test_weighting_constant(self):
        res = magnitude_homogeneous(scale(complete_graph(5), 1.0))
        assert np.allclose(res.weighting, res.magnitude / 5)

    def test_non_homogeneous_rejected(self):
        with pytest.raises(errors.NotHomogeneous):
            magnitude_homogeneous(from_points([0.0, 1.0, 3.0]))

    def test_empty_rejected(self):
        with pytest.raises(errors.NotHomogeneous):
            magnitude_homogeneous(from_distance_matrix(np.zeros((0, 0))))


class TestCodes:
    def test_trivial_code(self):
        res = magnitude_code([[0, 0, 0]], q=2, t=1.0)
        assert res.weight_enumerator == (1, 0, 0, 0)
        assert res.magnitude == pytest.approx(1.0)

    def test_full_code(self):
        res = magnitude_code(np.eye(4, dtype=int), q=2, t=0.8)
        assert res.size == 16
        assert res.magnitude == pytest.approx(
            (2 / (1 + math.exp(-0.8))) ** 4, abs=1e-12)

    def test_repetition_code(self):
        # enumerate {000, 111}: W(x) = 1 + x^3
        res = magnitude_code([[1, 1, 1]], q=2, t=1.3)
        assert res.weight_enumerator == (1, 0, 0, 1)
        assert res.magnitude == pytest.approx(2 / (1 + math.exp(-3 * 1.3)))

    def test_cross_check_against_hamming_space(self):
        t = 0.9
        gen = [[1, 0, 1], [0, 1, 1]]
        res = magnitude_code(gen, q=2, t=t)
        words = []
        for a in range(2):
            for b in range(2):
                words.append(np.mod(a * np.array(gen[0]) + b * np.array(gen[1]), 2))
        space = from_points(np.array(words) * t, p=1)  # Hamming = l1 on F_2
        assert res.magnitude == pytest.approx(magnitude(space).magnitude,
                                              abs=1e-10)

    def test_ternary_code(self):
        res = magnitude_code([[1, 1]], q=3, t=1.0)
        assert res.size == 3
        assert res.weight_enumerator == (1, 0, 2)

    def test_internal_cross_check_recorded(self):
        res = magnitude_code([[1, 0, 1], [0, 1, 1]], q=2, t=0.7)
        assert res.diagnostics["closed_form_vs_solve"] < 1e-10

    def test_non_prime_rejected(self):
        with pytest.raises(ValueError):
            magnitude_code([[1]], q=4)

    def test_enumeration_cap(self):
        with pytest.raises(errors.EnumerationTooLarge):
            magnitude_code(np.eye(30, dtype=int), q=2, max_codewords=1000)


class TestCauchySchwarz:
    def test_weighting_attains_magnitude(self):
        space = from_points(np.random.default_rng(4).uniform(0, 2, (10, 2)))
        res = magnitude(space)
        ratio = cauchy_schwarz_ratio(space, res.weighting)
        assert ratio == pytest.approx(res.magnitude, abs=1e-10)

    def test_scale_invariance(self):
        space = from_points([0.0, 1.0, 2.0])
        res = magnitude(space)
        r1 = cauchy_schwarz_ratio(space, res.weighting)
        r2 = cauchy_schwarz_ratio(space, 2.0 * res.weighting)
        assert r1 == pytest.approx(r2, abs=1e-12)

    def test_bounded_by_magnitude_on_random_vectors(self):
        rng = np.random.default_rng(6)
        space = from_points(rng.uniform(0, 3, (15, 3)))
        mag = magnitude(space).magnitude
        for _ in range(1000):
            v = rng.normal(size=15)
            assert cauchy_schwarz_ratio(space, v) <= mag + 1e-10

    def test_zero_vector_rejected(self):
        space = from_points([0.0, 1.0])
        with pytest.raises(errors.ZeroVector):
            cauchy_schwarz_ratio(space, np.zeros(2))

    def test_not_pd_rejected(self):
        space = scale(bipartite_graph(3, 2), 0.3)
        with pytest.raises(errors.NotPositiveDefinite):
            cauchy_schwarz_ratio(space, np.ones(5))


class TestUnion:
    def test_degenerate_same_sets(self):
        space = from_points([0.0, 1.0, 2.0])
        res = union_magnitude(space, [0, 1, 2], [0, 1, 2])
        assert res.magnitude == pytest.approx(magnitude(space).magnitude)

    def test_one_point_union_on_line(self):
        space = from_points([0.0, 1.0, 2.0])
        res = union_magnitude(space, [0, 1], [1, 2])
        parts = (magnitude(space.subspace([0, 1])).magnitude
                 + magnitude(space.subspace([1, 2])).magnitude - 1.0)
        assert res.magnitude == pytest.approx(parts, abs=1e-12)
        assert res.magnitude == pytest.approx(magnitude(space).magnitude,
                                              abs=1e-12)

    def test_weighting_is_stitched(self):
        space = from_points([0.0, 1.0, 3.5])
        res = union_magnitude(space, [0, 1], [1, 2])
        direct = magnitude(space)
        assert np.allclose(res.weighting, direct.weighting, atol=1e-10)

    def test_projection_failure_raises(self):
        rng = np.random.default_rng(9)
        space = from_points(rng.uniform(0, 1, (6, 2)), p=2)
        with pytest.raises(errors.ProjectionFails):
            union_magnitude(space, [0, 1, 2, 3], [3, 4, 5])


class TestGlue:
    def test_two_points_reduce_to_tanh(self):
        pt = from_points([0.0])
        for d in (0.5, 1.0, 3.0):
            res = glued_magnitude(pt, pt, d)
            assert res.magnitude == pytest.approx(1 + math.tanh(d / 2), abs=1e-12)

    def test_k32_from_glued_discrete_spaces(self):
        t = 0.8
        a = uniform_space(3, 2 * t)
        b = uniform_space(2, 2 * t)
        res = glued_magnitude(a, b, t)
        assert res.magnitude == pytest.approx(k32_closed_form(t), abs=1e-12)

    def test_crowned_k33_formula(self):
        t = 1.1
        a = uniform_space(3, 2 * t)   # the a-side stays at distance 2t
        b = uniform_space(3, t)       # extra edges bring the b-side to t
        res = glued_magnitude(a, b, t)
        assert res.magnitude == pytest.approx(6 / (1 + 4 * math.exp(-t)),
                                              abs=1e-12)

    def test_resonance_raises(self):
        # |A| = |B| = 1 forces resonance at D = 0: engineer e^{2D}|A||B| = 1
        pt = from_points([0.0])
        with pytest.raises(errors.ResonantGlue):
            glued_magnitude(pt, pt, 1e-12)

    def test_matches_direct_solve(self):
        rng = np.random.default_rng(10)
        a = from_points(rng.uniform(0, 1, (4, 2)))
        b = from_points(rng.uniform(0, 1, (3, 2)))
        D = max(a.diameter(), b.diameter()) / 2 + 0.4
        res = glued_magnitude(a, b, D)
        direct = magnitude(constant_distance_glue(a, b, D))
        assert res.magnitude == pytest.approx(direct.magnitude, abs=1e-11)


class TestProductsAndFibrations:
    def test_unit(self):
        a = from_points([0.0, 1.0, 2.0])
        pt = from_points([0.0])
        assert product_magnitude(a, pt) == pytest.approx(
            magnitude(a).magnitude)

    def test_multiplicativity_random(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            a = from_points(rng.uniform(0, 2, (int(rng.integers(1, 7)), 2)))
            b = from_points(rng.uniform(0, 2, (int(rng.integers(1, 7)), 1)))
            direct = magnitude(tensor_product(a, b)).magnitude
            assert product_magnitude(a, b) == pytest.approx(direct, abs=1e-10)

    def test_distant_union_additivity(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            a = from_points(rng.uniform(0, 2, (int(rng.integers(1, 7)), 2)))
            b = from_points(rng.uniform(0, 2, (int(rng.integers(1, 7)), 2)))
            total = magnitude(distant_union(a, b)).magnitude
            assert total == pytest.approx(
                magnitude(a).magnitude + magnitude(b).magnitude, abs=1e-10)

    def test_hamming_tensor_power(self):
        t = 1.0
        f2 = scale(from_distance_matrix([[0, 1], [1, 0]]), t)
        power = f2
        for _ in range(3):
            power = tensor_product(power, f2)
        assert magnitude(power).magnitude == pytest.approx(
            (2 / (1 + math.exp(-t))) ** 4, abs=1e-12)

    def test_fibration_undefined_part(self):
        k32_sing = scale(bipartite_graph(3, 2), LOG_SQRT2)
        with pytest.raises(errors.SubmagnitudeUndefined):
            fibration_magnitude(k32_sing, from_points([0.0]))


class TestUltrametric:
    def test_uniform_bound(self):
        for n, t in ((3, 0.5), (6, 2.0)):
            rep = ultrametric_magnitude_bound(uniform_space(n, t))
            assert rep.magnitude == pytest.approx(
                n / (1 + (n - 1) * math.exp(-t)), abs=1e-12)
            assert rep.magnitude <= rep.bound
            assert rep.positive_weights

    def test_single_point_equality(self):
        rep = ultrametric_magnitude_bound(from_points([0.0]))
        assert rep.magnitude == pytest.approx(rep.bound) == 1.0

    def test_random_dendrograms(self):
        rng = np.random.default_rng(14)
        for _ in range(50):
            um = random_ultrametric(rng, int(rng.integers(2, 25)))
            rep = ultrametric_magnitude_bound(um)
            assert rep.positive_weights
            assert rep.magnitude <= rep.bound * (1 + 1e-12)

    def test_non_ultrametric_rejected(self):
        with pytest.raises(errors.NotUltrametric):
            ultrametric_magnitude_bound(from_points([0.0, 1.0, 2.0]))


class TestOrderTheoretic:
    def test_antichain_counts_points(self):
        for n in (1, 4, 9):
            space = from_poset(range(n), [])
            assert magnitude(space).magnitude == float(n)

    def test_chains_and_bounded_posets(self):
        chain = from_poset(range(5), [(i, i + 1) for i in range(4)])
        assert magnitude(chain).magnitude == 1.0

    def test_rota_oracle_agreement(self):
        rng = np.random.default_rng(15)
        for _ in range(25):
            elements, covers = random_poset(rng, int(rng.integers(2, 8)))
            space = from_poset(elements, covers)
            got = magnitude(space).magnitude
            expect = rota_euler_characteristic(poset_leq(elements, covers))
            assert got == float(expect)

    def test_exact_method_used(self):
        space = from_poset("abc", [("a", "b")])
        assert magnitude(space).method == "mobius_exact"


class TestInequalities:
    def test_subset_monotonicity_pd(self):
        rng = np.random.default_rng(16)
        for _ in range(25):
            n = int(rng.integers(3, 20))
            cloud = from_points(rng.uniform(0, 2, (n, 2)))
            whole = magnitude(cloud).magnitude
            k = int(rng.integers(1, n))
            sub = cloud.subspace(sorted(rng.choice(n, size=k, replace=False)))
            assert magnitude(sub).magnitude <= whole + 1e-10

    def test_nonempty_pd_at_least_one(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            cloud = from_points(rng.uniform(0, 3, (int(rng.integers(1, 12)), 3)))
            assert magnitude(cloud).magnitude >= 1.0 - 1e-12

    def test_nonnegative_weighting_bounds(self):
        rng = np.random.default_rng(18)
        hits = 0
        for _ in range(40):
            n = int(rng.integers(2, 12))
            cloud = from_points(rng.uniform(0, 4, (n, 2)))
            res = magnitude(cloud)
            if np.all(res.weighting >= 0):
                hits += 1
                assert 0.0 <= res.magnitude <= n + 1e-10
        assert hits > 0  # the hypothesis genuinely fires

    def test_expansion_inequality(self):
        # scaling up an ultrametric is an expansion with nonneg weightings
        rng = np.random.default_rng(19)
        for _ in range(20):
            um = random_ultrametric(rng, int(rng.integers(2, 15)))
            bigger = scale(um, 1.0 + rng.uniform(0.1, 2.0))
            assert (magnitude(bigger).magnitude
                    >= magnitude(um).magnitude - 1e-10)

    @given(st.integers(2, 20), st.floats(0.05, 5.0))
    @settings(deadline=None, max_examples=40)
    def test_uniform_magnitude_range(self, n, t):
        res = magnitude(uniform_space(n, t))
        assert 1.0 - 1e-12 <= res.magnitude <= n + 1e-10

    def test_l1_negative_weight_threshold(self):
        # origin weight in {(0,0),(t,0),(0,t),(-t,0)} in l1 flips sign at log 2
        for t, negative in ((0.3, True), (0.6, True), (0.8, False), (2.0, False)):
            pts = [(0.0, 0.0), (t, 0.0), (0.0, t), (-t, 0.0)]
            res = magnitude(from_points(pts, p=1))
            assert (res.weighting[0] < 0) == negative
            assert is_positive_definite(from_points(pts, p=1)).pd
