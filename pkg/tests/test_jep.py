from fractions import Fraction as F

import pytest

from jepq.jep import (
    BoundedGeometric,
    BoundedUniform,
    UnboundedGeometric,
    balance_residual,
    closed_form_stats,
    enumerate_states,
    stationary_distribution,
    stationary_prob,
    stationary_weight,
    step_kernel_row,
    theta,
    theta_rank,
    throw_pmf,
    throw_prob,
    truncated_geometric_pmf,
    validate_state,
)
from jepq.qcomb import binom2, partition_z, q_int, q_pochhammer

QS = (F(1, 3), F(1, 2), F(2, 3))


def test_model_validation():
    with pytest.raises(ValueError):
        BoundedGeometric(2, 3, F(1, 2))
    with pytest.raises(ValueError):
        BoundedGeometric(3, 2, F(3, 2))
    with pytest.raises(ValueError):
        UnboundedGeometric(2, F(1))
    BoundedUniform(3, 0)
    with pytest.raises(ValueError):
        validate_state((0, 0), BoundedUniform(3, 2))
    with pytest.raises(ValueError):
        validate_state((1, 3), BoundedUniform(3, 2))


def test_theta():
    assert theta(set(), 5) == 5
    assert theta({1, 3}, 2) == 4
    assert theta({0, 1, 2}, 0) == 3
    for excluded in (set(), {1, 3}, {0, 1, 2}, {2, 5, 6}):
        for x in range(10):
            assert theta_rank(excluded, theta(excluded, x)) == x


def test_truncated_geometric_pmf():
    assert truncated_geometric_pmf(2, F(1, 2)) == [F(2, 3), F(1, 3)]
    assert truncated_geometric_pmf(1, F(1, 2)) == [1]
    for ell in range(1, 11):
        for q in QS:
            assert sum(truncated_geometric_pmf(ell, q)) == 1
    with pytest.raises(ValueError):
        truncated_geometric_pmf(0, F(1, 2))


def test_throw_pmf_bounded():
    q = F(1, 2)
    pmf = throw_pmf((1,), BoundedGeometric(3, 2, q))
    assert pmf.probs == {0: 1 / (1 + q), 2: q / (1 + q)}
    assert pmf.tail == 0
    uni = throw_pmf((1,), BoundedUniform(3, 2))
    assert uni.probs == {0: F(1, 2), 2: F(1, 2)}


def test_throw_pmf_unbounded_tail_is_exact():
    q = F(1, 2)
    pmf = throw_pmf((), UnboundedGeometric(1, q), ceiling=5)
    assert pmf.probs == {x: (1 - q) * q**x for x in range(6)}
    assert pmf.tail == q**6
    assert sum(pmf.probs.values()) + pmf.tail == 1
    withhole = throw_pmf((2,), UnboundedGeometric(2, q), ceiling=4)
    assert 2 not in withhole.probs
    assert sum(withhole.probs.values()) + withhole.tail == 1
    with pytest.raises(ValueError):
        throw_pmf((), UnboundedGeometric(1, q))


def test_throw_prob_matches_pmf():
    q = F(1, 3)
    model = BoundedGeometric(5, 3, q)
    pmf = throw_pmf((0, 2), model)
    for height, p in pmf.probs.items():
        assert throw_prob((0, 2), height, model) == p
    unb = UnboundedGeometric(3, q)
    upmf = throw_pmf((0, 2), unb, ceiling=8)
    for height, p in upmf.probs.items():
        assert throw_prob((0, 2), height, unb) == p


def test_step_kernel_examples():
    q = F(1, 2)
    assert step_kernel_row((1, 2), BoundedGeometric(3, 2, q)) == {(0, 1): 1}
    assert step_kernel_row((0, 2), BoundedGeometric(3, 2, q)) == {
        (0, 1): 1 / (1 + q),
        (1, 2): q / (1 + q),
    }
    assert step_kernel_row((0,), BoundedGeometric(2, 1, q)) == {
        (0,): F(2, 3),
        (1,): F(1, 3),
    }
    # empty system: a self-loop
    assert step_kernel_row((), BoundedGeometric(3, 0, q)) == {(): 1}


@pytest.mark.parametrize("q", QS)
def test_kernel_rows_are_stochastic(q):
    for m in range(1, 7):
        for n in range(m + 1):
            geo = BoundedGeometric(m, n, q)
            uni = BoundedUniform(m, n)
            for state in enumerate_states(m, n):
                assert sum(step_kernel_row(state, geo).values()) == 1
                assert sum(step_kernel_row(state, uni).values()) == 1


def test_stationary_weight_anchors():
    q = F(1, 2)
    assert stationary_weight((0, 1), BoundedGeometric(3, 2, q)) == (1 + q) ** 2 * q
    for m, n in ((4, 2), (5, 3), (6, 1)):
        model = BoundedGeometric(m, n, q)
        top = tuple(range(m - n, m))
        assert stationary_weight(top, model) == q ** (n * m - binom2(n + 1))
        ground = tuple(range(n))
        assert stationary_weight(ground, model) == q_int(m - n + 1, q) ** n * q ** binom2(n)


def test_stationary_prob_anchors():
    q = F(1, 2)
    assert stationary_prob((0,), BoundedGeometric(2, 1, q)) == F(3, 4)
    for n in range(1, 5):
        for qq in QS:
            assert stationary_prob(tuple(range(n)), UnboundedGeometric(n, qq)) == q_pochhammer(n, qq)
    for x in range(6):
        assert stationary_prob((x,), UnboundedGeometric(1, q)) == (1 - q) * q**x


@pytest.mark.parametrize("q", QS)
def test_stationary_distribution_normalized(q):
    for m in range(1, 8):
        for n in range(1, m + 1):
            law = stationary_distribution(BoundedGeometric(m, n, q))
            assert sum(law.values()) == 1
            assert all(p > 0 for p in law.values())


def test_stationary_distribution_float_mode_sums_near_one():
    for m, n in ((5, 2), (7, 3), (8, 4)):
        law = stationary_distribution(BoundedGeometric(m, n, 0.37))
        assert abs(sum(law.values()) - 1) < 1e-12


def test_closed_form_stats_anchors():
    q = F(1, 2)
    assert closed_form_stats(2, 1, q).throw_fraction == F(3, 4)
    stats = closed_form_stats(3, 2, q)
    expected = (1 + 3 * q + 2 * q**2) / (1 + 3 * q + 3 * q**2)
    assert stats.throw_fraction == expected
    assert stats.throw_fraction == q * partition_z(2, 1, q) * q_int(2, q) / partition_z(3, 2, q)
    assert stats.throw_fraction_uncorrected > 1
    for n in range(1, 5):
        ss = closed_form_stats(n, n, q)
        assert ss.ground == 1 and ss.top == 1


@pytest.mark.parametrize("q", QS)
def test_throw_fraction_matches_occupancy(q):
    for m in range(1, 8):
        for n in range(1, m + 1):
            model = BoundedGeometric(m, n, q)
            occupied = sum(
                p for s, p in stationary_distribution(model).items() if s[0] == 0
            )
            assert closed_form_stats(m, n, q).throw_fraction == occupied


@pytest.mark.parametrize("q", QS)
def test_balance_residual_zero_on_stationary(q):
    for m in range(2, 7):
        for n in range(1, m + 1):
            model = BoundedGeometric(m, n, q)
            law = stationary_distribution(model)
            pi = lambda s: law.get(s, F(0))
            for state in law:
                assert balance_residual(state, pi, model) == 0


def test_balance_residual_detects_perturbation():
    q = F(1, 2)
    model = BoundedGeometric(4, 2, q)
    law = dict(stationary_distribution(model))
    state = next(iter(law))
    law[state] *= 2
    pi = lambda s: law.get(s, F(0))
    assert any(balance_residual(s, pi, model) != 0 for s in law)


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("n", (1, 2, 3))
def test_unbounded_balance(q, n):
    model = UnboundedGeometric(n, q)
    pi = lambda s: stationary_prob(s, model)
    for state in enumerate_states(11, n):
        assert balance_residual(state, pi, model) == 0


def test_rook_connection_identity():
    # the vacancy product rewrites as an index product, in both bases
    for q in QS:
        for m in range(1, 11):
            for n in range(m + 1):
                for state in enumerate_states(m, n):
                    direct = F(1)
                    indexed = F(1)
                    for k, x in enumerate(state, start=1):
                        vacant = sum(1 for h in range(x, m) if h not in state)
                        direct *= q_int(1 + vacant, 1 / q)
                        indexed *= q_int(m - n - x + k, 1 / q)
                    assert direct == indexed
