"""Degree distribution construction, parsing and sampling."""

import math

import numpy as np
import pytest

from alohasim.degree import (
    IRSA8,
    DegreeDistribution,
    make_regular,
    parse_distribution,
)


class TestConstruction:
    def test_terms_sorted_ascending(self):
        dist = DegreeDistribution(((3, 0.5), (2, 0.5)))
        assert dist.terms == ((2, 0.5), (3, 0.5))

    def test_properties(self):
        dist = DegreeDistribution(((2, 0.5), (3, 0.28), (8, 0.22)))
        assert dist.degrees == (2, 3, 8)
        assert dist.max_degree == 8
        assert dist.mean_degree == pytest.approx(2 * 0.5 + 3 * 0.28 + 8 * 0.22, abs=1e-12)

    def test_mean_degree_irsa8(self):
        assert IRSA8.mean_degree == pytest.approx(3.6, abs=1e-12)
        assert IRSA8.label == "irsa8"

    def test_make_regular_exact_means(self):
        for degree in range(1, 17):
            dist = make_regular(degree)
            assert dist.terms == ((degree, 1.0),)
            assert dist.mean_degree == float(degree)
            assert dist.max_degree == degree

    def test_label_canonical_form(self):
        assert make_regular(1).label == "x"
        assert make_regular(2).label == "x^2"
        assert DegreeDistribution(((3, 0.5), (2, 0.5))).label == "0.5x^2+0.5x^3"

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            DegreeDistribution(())

    def test_rejects_nonpositive_degree(self):
        with pytest.raises(ValueError):
            DegreeDistribution(((0, 1.0),))
        with pytest.raises(ValueError):
            DegreeDistribution(((-2, 1.0),))

    def test_rejects_fractional_degree(self):
        with pytest.raises(ValueError):
            DegreeDistribution(((2.5, 1.0),))

    def test_rejects_bad_probability(self):
        with pytest.raises(ValueError):
            DegreeDistribution(((2, 0.0),))
        with pytest.raises(ValueError):
            DegreeDistribution(((2, 1.5),))
        with pytest.raises(ValueError):
            DegreeDistribution(((2, -0.1), (3, 1.1)))

    def test_rejects_duplicate_degrees(self):
        with pytest.raises(ValueError):
            DegreeDistribution(((2, 0.5), (2, 0.5)))

    def test_rejects_sum_away_from_one(self):
        with pytest.raises(ValueError):
            DegreeDistribution(((2, 0.5), (3, 0.4)))

    def test_accepts_sum_within_tolerance(self):
        dist = DegreeDistribution(((2, 0.5), (3, 0.5 + 5e-10)))
        assert dist.degrees == (2, 3)

    def test_make_regular_rejects_zero(self):
        with pytest.raises(ValueError):
            make_regular(0)


class TestSampling:
    def test_single_term_always_returned(self):
        dist = make_regular(2)
        for u in (0.0, 0.25, 0.999999):
            assert dist.sample_degree(u) == 2

    def test_inverse_cdf_lookup(self):
        dist = DegreeDistribution(((2, 0.5), (3, 0.5)))
        assert dist.sample_degree(0.25) == 2
        assert dist.sample_degree(0.75) == 3

    def test_bin_edge_takes_higher_bin(self):
        dist = DegreeDistribution(((2, 0.5), (3, 0.5)))
        assert dist.sample_degree(0.5) == 3

    def test_irsa8_cdf_breakpoints(self):
        # cumulative: 0.5, 0.78, 1.0
        assert IRSA8.sample_degree(0.0) == 2
        assert IRSA8.sample_degree(0.49) == 2
        assert IRSA8.sample_degree(0.5) == 3
        assert IRSA8.sample_degree(0.77) == 3
        assert IRSA8.sample_degree(0.78) == 8
        assert IRSA8.sample_degree(0.9) == 8

    def test_u_domain_enforced(self):
        with pytest.raises(ValueError):
            IRSA8.sample_degree(1.0)
        with pytest.raises(ValueError):
            IRSA8.sample_degree(-0.001)

    def test_vectorised_matches_scalar(self):
        rng = np.random.default_rng(11)
        u = rng.random(500)
        vec = IRSA8.sample_degrees(u)
        assert vec.tolist() == [IRSA8.sample_degree(float(x)) for x in u]

    def test_vectorised_domain_enforced(self):
        with pytest.raises(ValueError):
            IRSA8.sample_degrees(np.array([0.5, 1.0]))

    def test_empirical_mean_within_three_sigma(self):
        rng = np.random.default_rng(20260819)
        n = 1_000_000
        samples = IRSA8.sample_degrees(rng.random(n))
        second_moment = sum(d * d * p for d, p in IRSA8.terms)
        sigma = math.sqrt((second_moment - IRSA8.mean_degree**2) / n)
        assert abs(samples.mean() - IRSA8.mean_degree) < 3 * sigma

    def test_empirical_term_frequencies(self):
        rng = np.random.default_rng(7)
        n = 200_000
        samples = IRSA8.sample_degrees(rng.random(n))
        for degree, probability in IRSA8.terms:
            observed = float(np.mean(samples == degree))
            sigma = math.sqrt(probability * (1 - probability) / n)
            assert abs(observed - probability) < 4 * sigma


class TestParsing:
    def test_plain_regular_terms(self):
        assert parse_distribution("x^2").terms == ((2, 1.0),)
        assert parse_distribution("x^3").terms == ((3, 1.0),)

    def test_bare_x_is_degree_one(self):
        assert parse_distribution("x").terms == ((1, 1.0),)

    def test_mixture(self):
        dist = parse_distribution("0.5x^2+0.28x^3+0.22x^8")
        assert dist.terms == ((2, 0.5), (3, 0.28), (8, 0.22))

    def test_whitespace_ignored(self):
        dist = parse_distribution(" 0.5 x^2 + 0.5 x^3 ")
        assert dist.terms == ((2, 0.5), (3, 0.5))

    def test_preset_name(self):
        assert parse_distribution("irsa8") is IRSA8
        assert parse_distribution("IRSA8") is IRSA8

    def test_unparseable_text_rejected(self):
        for text in ("", "y^2", "x^", "0.5x^2+", "x**2", "2^x"):
            with pytest.raises(ValueError):
                parse_distribution(text)

    def test_parsed_mixture_must_sum_to_one(self):
        with pytest.raises(ValueError):
            parse_distribution("0.5x^2+0.6x^3")
