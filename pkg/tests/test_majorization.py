import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from uurel.errors import InvariantError
from uurel.majorization import (
    DEFAULT_MEASURES,
    MIN_ENTROPY,
    NEG_LOG_MIN,
    SHANNON,
    UncertaintyMeasure,
    check_prob_vector,
    majorization_margins,
    majorizes,
    min_entropy,
    neg_log_min_nonzero,
    random_doubly_stochastic,
    renyi_entropy,
    shannon_entropy,
    tensor_product,
)


@st.composite
def prob_vectors(draw, min_size=1, max_size=8):
    n = draw(st.integers(min_value=min_size, max_value=max_size))
    w = draw(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=n, max_size=n))
    assume(sum(w) > 1e-6)
    p = np.array(w) / sum(w)
    return p


class TestMajorizes:
    def test_worked_example(self):
        x, y = [0.5, 0.25, 0.25], [0.6, 0.3, 0.1]
        assert majorizes(x, y)
        assert not majorizes(y, x)

    @given(prob_vectors())
    def test_uniform_is_minimal(self, p):
        assert majorizes(np.full(p.size, 1 / p.size), p)

    @given(prob_vectors())
    def test_point_mass_is_maximal(self, p):
        assert majorizes(p, [1.0])

    @given(prob_vectors())
    def test_reflexive_and_order_free(self, p):
        assert majorizes(p, p[::-1])
        assert majorizes(p[::-1], p)

    def test_zero_padding(self):
        assert majorizes([0.25] * 4, [0.5, 0.5])
        assert not majorizes([0.5, 0.5], [0.25] * 4)

    def test_unequal_totals_raise(self):
        with pytest.raises(InvariantError):
            majorizes([0.5, 0.5], [0.5, 0.4])

    def test_margins_are_partial_sum_differences(self):
        np.testing.assert_allclose(majorization_margins([0.5, 0.25, 0.25], [0.6, 0.3, 0.1]),
                                   [0.1, 0.15, 0.0], atol=1e-15)

    def test_slack(self):
        assert majorizes([0.6 + 5e-10, 0.4 - 5e-10], [0.6, 0.4])
        assert not majorizes([0.6 + 5e-9, 0.4 - 5e-9], [0.6, 0.4])


class TestTensorProduct:
    def test_lexicographic_order(self):
        np.testing.assert_allclose(tensor_product([0.6, 0.4], [0.5, 0.5]), [0.3, 0.3, 0.2, 0.2])

    def test_three_factors(self):
        t = tensor_product([0.5, 0.5], [1.0], [0.2, 0.8])
        np.testing.assert_allclose(t, [0.1, 0.4, 0.1, 0.4])

    @given(prob_vectors(max_size=5), prob_vectors(max_size=5))
    def test_sums_to_one(self, p, q):
        assert tensor_product(p, q).sum() == pytest.approx(1.0, abs=1e-12)

    @given(prob_vectors(max_size=5), prob_vectors(max_size=5), prob_vectors(max_size=5))
    def test_majorization_preserved_by_product(self, p, q, r):
        # p ≺ q implies p⊗r ≺ q⊗r
        assume(majorizes(p, q))
        assert majorizes(tensor_product(p, r), tensor_product(q, r))


class TestMeasures:
    def test_shannon_values(self):
        assert shannon_entropy([0.6, 0.4]) == pytest.approx(0.9709505944546686, abs=1e-15)
        assert shannon_entropy([0.25] * 4) == pytest.approx(2.0)

    @pytest.mark.parametrize("alpha", [1 - 1e-6, 1 + 1e-6])
    def test_renyi_near_one_is_shannon(self, alpha):
        assert renyi_entropy([0.6, 0.4], alpha) == pytest.approx(0.970951, abs=1e-4)

    def test_renyi_two_is_collision_entropy(self):
        assert renyi_entropy([0.6, 0.4], 2.0) == pytest.approx(-math.log2(0.36 + 0.16))

    def test_renyi_large_alpha_approaches_min_entropy(self):
        p = [0.5, 0.3, 0.2]
        assert renyi_entropy(p, 64.0) == pytest.approx(min_entropy(p), abs=0.02)

    def test_min_entropy(self):
        assert min_entropy([0.5, 0.25, 0.25]) == pytest.approx(1.0)

    def test_neg_log_min_skips_zeros(self):
        assert neg_log_min_nonzero([0.75, 0.25, 0.0, 1e-13]) == pytest.approx(2.0)

    @pytest.mark.parametrize("phi", DEFAULT_MEASURES + (NEG_LOG_MIN,), ids=lambda m: m.label)
    def test_zero_on_point_mass(self, phi):
        assert phi([1.0, 0.0, 0.0]) == 0.0

    @pytest.mark.parametrize("text,kind,alpha", [
        ("shannon", "shannon", None),
        ("renyi:2", "renyi", 2.0),
        ("Renyi:0.5", "renyi", 0.5),
        ("minentropy", "minentropy", None),
        ("neglogmin", "neglogmin", None),
    ])
    def test_parse(self, text, kind, alpha):
        m = UncertaintyMeasure.parse(text)
        assert m.kind == kind
        assert m.alpha == alpha

    @pytest.mark.parametrize("text", ["renyi", "renyi:0", "renyi:-1", "renyi:100", "shannon:2", "tsallis"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            UncertaintyMeasure.parse(text)

    def test_renyi_one_dispatches_to_shannon(self):
        p = [0.7, 0.2, 0.1]
        assert UncertaintyMeasure("renyi", 1.0 + 1e-7)(p) == SHANNON(p)

    def test_additivity_flags(self):
        assert SHANNON.additive and MIN_ENTROPY.additive
        assert not NEG_LOG_MIN.additive

    @settings(max_examples=50)
    @given(prob_vectors(max_size=4), prob_vectors(max_size=4))
    def test_additive_under_tensor_products(self, p, q):
        for phi in DEFAULT_MEASURES:
            assert phi(tensor_product(p, q)) == pytest.approx(phi(p) + phi(q), abs=1e-9)


class TestSchurConcavity:
    @settings(max_examples=100, deadline=None)
    @given(p=prob_vectors(min_size=2), seed=st.integers(0, 2**31), n_perms=st.integers(1, 4))
    def test_mixing_never_lowers_entropies(self, p, seed, n_perms):
        dmat = random_doubly_stochastic(p.size, n_perms, seed)
        q = dmat @ p
        assert majorizes(q, p)
        for phi in DEFAULT_MEASURES:
            assert phi(q) >= phi(p) - 1e-9

    def test_doubly_stochastic_margins(self):
        dmat = random_doubly_stochastic(6, 3, 0)
        np.testing.assert_allclose(dmat.sum(axis=0), 1.0, atol=1e-14)
        np.testing.assert_allclose(dmat.sum(axis=1), 1.0, atol=1e-14)
        assert dmat.min() >= 0

    def test_neg_log_min_is_not_schur_concave(self):
        # mixing fills in a tiny component, so -log of the smallest nonzero entry drops
        p = np.array([0.9, 0.1])
        q = np.full((2, 2), 0.5) @ p
        assert majorizes(q, p)
        assert NEG_LOG_MIN(q) < NEG_LOG_MIN(p)


class TestCheckProbVector:
    def test_accepts_valid(self):
        np.testing.assert_array_equal(check_prob_vector([0.5, 0.5]), [0.5, 0.5])

    @pytest.mark.parametrize("bad", [[0.5, 0.6], [-0.1, 1.1], []])
    def test_rejects(self, bad):
        with pytest.raises(InvariantError):
            check_prob_vector(bad)
