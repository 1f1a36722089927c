"""Information-measure core: worked examples and structural properties."""

import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wiretap3.probability import (
    AxisError,
    ConditionalPmf,
    DistributionError,
    Factor,
    FactoredDistribution,
    JointPmf,
    Pmf,
    binary_entropy,
    bsc,
    cascade,
    entropy,
    erase_further,
    erasure_channel,
    marginalize,
    mutual_information,
    product_channel,
)


def brute_mi(joint_2d: np.ndarray) -> float:
    """Independent oracle: direct double summation of I(X;Y)."""
    px = joint_2d.sum(axis=1)
    py = joint_2d.sum(axis=0)
    total = 0.0
    for i in range(joint_2d.shape[0]):
        for j in range(joint_2d.shape[1]):
            p = joint_2d[i, j]
            if p > 0:
                total += p * math.log2(p / (px[i] * py[j]))
    return total


class TestEntropy:
    def test_uniform_binary(self):
        assert entropy([F(1, 2), F(1, 2)]) == 1.0

    def test_grouped_identity_worked_value(self):
        # H(ap, 1-p, (1-a)p) = H(p) + p H(a) at a=1/3, p=1/2
        a, p = F(1, 3), F(1, 2)
        got = entropy([a * p, 1 - p, (1 - a) * p])
        expected = 1.0 + 0.5 * binary_entropy(1 / 3)
        assert got == pytest.approx(1.459148, abs=5e-7)
        assert got == pytest.approx(expected, abs=1e-12)

    def test_deterministic(self):
        assert entropy([1, 0, 0]) == 0.0

    def test_invalid_pmf_rejected(self):
        with pytest.raises(DistributionError):
            entropy([0.5, 0.6])
        with pytest.raises(DistributionError):
            entropy([-0.1, 1.1])

    @settings(max_examples=100, deadline=None)
    @given(
        a=st.floats(0.0, 1.0, allow_nan=False),
        p=st.floats(0.0, 1.0, allow_nan=False),
    )
    def test_grouped_identity_random(self, a, p):
        lhs = entropy([a * p, 1 - p, (1 - a) * p])
        rhs = binary_entropy(p) + p * binary_entropy(a)
        assert abs(lhs - rhs) < 1e-10


class TestMutualInformation:
    def test_independent_coins(self):
        j = JointPmf.product([("X", Pmf.uniform(2)), ("Y", Pmf.uniform(2))])
        assert mutual_information(j, ("X",), ("Y",)) == 0.0

    def test_identity_channel(self):
        j = JointPmf.product([("X", Pmf.uniform(2))]).extend(
            ("X",), [("Y", 2)], ConditionalPmf.identity(2)
        )
        assert mutual_information(j, ("X",), ("Y",)) == pytest.approx(1.0, abs=1e-12)

    def test_bsc_01_against_summation_oracle(self):
        j = JointPmf.product([("X", Pmf.uniform(2))]).extend(("X",), [("Y", 2)], bsc(0.1))
        got = mutual_information(j, ("X",), ("Y",))
        oracle = brute_mi(j.tensor)
        assert got == pytest.approx(oracle, abs=1e-12)
        assert got == pytest.approx(0.531004, abs=5e-7)  # 1 - H(0.1)

    def test_overlapping_axes_error(self):
        j = JointPmf.product([("X", Pmf.uniform(2)), ("Y", Pmf.uniform(2))])
        with pytest.raises(AxisError):
            mutual_information(j, ("X",), ("X",))


class TestConditionalMutualInformation:
    def test_conditioning_on_independent_axis(self):
        j = JointPmf.product(
            [("A", Pmf([0.3, 0.7])), ("C", Pmf.uniform(3))]
        ).extend(("A",), [("B", 2)], bsc(0.2))
        unconditional = j.mutual_information(("A",), ("B",))
        conditional = j.conditional_mutual_information(("A",), ("B",), ("C",))
        assert conditional == pytest.approx(unconditional, abs=1e-12)

    def test_same_axis_copies_given_c(self):
        # A = B = C, all copies of one fair bit
        j = JointPmf.product([("C", Pmf.uniform(2))])
        j = j.extend(("C",), [("A", 2)], ConditionalPmf.identity(2))
        j = j.extend(("C",), [("B", 2)], ConditionalPmf.identity(2))
        assert j.conditional_mutual_information(("A",), ("B",), ("C",)) == 0.0

    def test_markov_chain_v_x_z(self):
        # V -> X = V -> Z = BSC(0.1)(X): I(X;Z|V) = 0 since X is V
        fd = FactoredDistribution(
            [("V", 2), ("X", 2)],
            [Factor(["V"], [], [[F(1, 2), F(1, 2)]]),
             Factor(["X"], ["V"], ConditionalPmf.identity(2))],
        )
        j = fd.realization.extend(("X",), [("Z", 2)], bsc(0.1))
        assert j.conditional_mutual_information(("X",), ("Z",), ("V",)) == 0.0


class TestMarginalizeAndChannels:
    def test_marginal_of_product_is_factor(self):
        j = JointPmf.product([("X", Pmf([0.2, 0.8])), ("Y", Pmf.uniform(3))])
        m = marginalize(j, ("X",))
        assert np.allclose(m.tensor, [0.2, 0.8])

    def test_marginal_keep_all_is_identity(self):
        j = JointPmf.product([("X", Pmf([0.2, 0.8])), ("Y", Pmf.uniform(3))])
        m = marginalize(j, ("X", "Y"))
        assert np.allclose(m.tensor, j.tensor)

    def test_marginal_unknown_axis_error(self):
        j = JointPmf.product([("X", Pmf.uniform(2))])
        with pytest.raises(AxisError):
            marginalize(j, ("Q",))

    def test_erasure_marginal_matches_hand_sum(self):
        # X1 uniform through a half-erasure: output marginal (0, E, 1)
        j = JointPmf.product([("X1", Pmf.uniform(2))]).extend(
            ("X1",), [("Y11", 3)], erasure_channel(F(1, 2))
        )
        assert np.allclose(marginalize(j, ("Y11",)).tensor, [0.25, 0.5, 0.25])

    def test_cascade_identity(self):
        c = cascade(bsc(F(1, 10)), ConditionalPmf.identity(2))
        assert c.exact == bsc(F(1, 10)).exact

    def test_cascade_bsc_compose(self):
        c = cascade(bsc(F(1, 10)), bsc(F(1, 8)))
        assert c.exact == bsc(F(1, 5)).exact

    def test_cascade_erasures(self):
        c = cascade(erasure_channel(F(1, 2)), erase_further(F(2, 3)))
        assert c.exact == erasure_channel(F(5, 6)).exact

    def test_cascade_dimension_mismatch(self):
        with pytest.raises(DistributionError):
            cascade(erasure_channel(F(1, 2)), bsc(F(1, 4)))

    def test_product_single(self):
        c = product_channel([bsc(F(1, 10))])
        assert c.exact == bsc(F(1, 10)).exact

    def test_product_empty_rejected(self):
        with pytest.raises(DistributionError):
            product_channel([])

    def test_product_identities(self):
        c = product_channel([ConditionalPmf.identity(2), ConditionalPmf.identity(3)])
        assert c.exact == ConditionalPmf.identity(6).exact

    def test_product_additivity_at_independent_inputs(self):
        # Fig-1-style two components: I over the product channel at
        # independent uniform inputs equals the sum of component I's
        c1, c2 = erasure_channel(F(1, 2)), ConditionalPmf.identity(2)
        prod = product_channel([c1, c2])
        j = JointPmf.product([("X1", Pmf.uniform(2)), ("X2", Pmf.uniform(2))])
        j = j.extend(("X1", "X2"), [("Y", 6)], prod)
        lhs = j.mutual_information(("X1", "X2"), ("Y",))
        j1 = JointPmf.product([("X1", Pmf.uniform(2))]).extend(("X1",), [("Y", 3)], c1)
        j2 = JointPmf.product([("X2", Pmf.uniform(2))]).extend(("X2",), [("Y", 2)], c2)
        rhs = j1.mutual_information(("X1",), ("Y",)) + j2.mutual_information(("X2",), ("Y",))
        assert lhs == pytest.approx(rhs, abs=1e-10)


def random_joint(rng, shape):
    t = rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape)
    return JointPmf(tuple(f"A{i}" for i in range(len(shape))), t)


class TestIdentities:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000))
    def test_mi_equals_entropy_drop(self, seed):
        rng = np.random.default_rng(seed)
        j = random_joint(rng, (2, 3))
        mi = j.mutual_information(("A0",), ("A1",))
        hcond = j.entropy(("A0", "A1")) - j.entropy(("A1",))
        assert abs(mi - (j.entropy(("A0",)) - hcond)) < 1e-10

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000))
    def test_chain_rule(self, seed):
        rng = np.random.default_rng(seed)
        j = random_joint(rng, (2, 2, 3))
        lhs = j.mutual_information(("A0", "A1"), ("A2",))
        rhs = j.mutual_information(("A0",), ("A2",)) + j.conditional_mutual_information(
            ("A1",), ("A2",), ("A0",)
        )
        assert abs(lhs - rhs) < 1e-10

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000))
    def test_data_processing_on_composed_chain(self, seed):
        rng = np.random.default_rng(seed)
        pa = Pmf(rng.dirichlet(np.ones(2)))
        w1 = ConditionalPmf(rng.dirichlet(np.ones(3), size=2))
        w2 = ConditionalPmf(rng.dirichlet(np.ones(2), size=3))
        j = JointPmf.product([("A", pa)])
        j = j.extend(("A",), [("B", 3)], w1)
        j = j.extend(("B",), [("C", 2)], w2)
        assert j.mutual_information(("A",), ("C",)) <= j.mutual_information(
            ("A",), ("B",)
        ) + 1e-10


class TestFactoredDistribution:
    def test_realization_matches_product(self):
        rng = np.random.default_rng(1)
        pq = rng.dirichlet(np.ones(2))
        pvq = rng.dirichlet(np.ones(3), size=2)
        pxv = rng.dirichlet(np.ones(2), size=3)
        fd = FactoredDistribution(
            [("Q", 2), ("V", 3), ("X", 2)],
            [Factor(["Q"], [], [pq]), Factor(["V"], ["Q"], pvq), Factor(["X"], ["V"], pxv)],
        )
        t = fd.realization.tensor
        manual = pq[:, None, None] * pvq[:, :, None] * pxv[None, :, :]
        assert np.allclose(t, manual, atol=1e-12)

    def test_condition_before_generation_rejected(self):
        with pytest.raises(AxisError):
            FactoredDistribution(
                [("A", 2), ("B", 2)],
                [Factor(["A"], ["B"], np.full((2, 2), 0.5))],
            )
