"""The juggling exclusion chain: states, throw laws, kernels, closed forms.

A state is a strictly increasing tuple of particle heights. One step of the
dynamics: if height 0 is vacant, every particle falls by one; otherwise the
particle at 0 is picked up, the rest fall, and the picked-up particle is
rethrown to a vacant height drawn from the model's throw law. Three throw
laws are supported: truncated geometric on the m heights, plain geometric on
all of the nonnegative integers, and uniform on the m heights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Union

from .qcomb import Scalar, binom2, partition_z, q_int, q_pochhammer

State = tuple[int, ...]

__all__ = [
    "State",
    "BoundedGeometric",
    "UnboundedGeometric",
    "BoundedUniform",
    "ThrowModel",
    "ThrowPmf",
    "SteadyStats",
    "enumerate_states",
    "validate_state",
    "theta",
    "theta_rank",
    "truncated_geometric_pmf",
    "throw_prob",
    "throw_pmf",
    "step_kernel_row",
    "stationary_weight",
    "stationary_prob",
    "stationary_distribution",
    "closed_form_stats",
    "balance_residual",
]


@dataclass(frozen=True)
class BoundedGeometric:
    """n particles on heights {0..m-1}; throws hit the x-th vacancy from
    below with probability proportional to q^x."""

    m: int
    n: int
    q: Scalar

    def __post_init__(self):
        if not 0 <= self.n <= self.m:
            raise ValueError(f"need 0 <= n <= m, got n={self.n} m={self.m}")
        if not 0 < self.q < 1:
            raise ValueError(f"need 0 < q < 1, got q={self.q}")

    @property
    def ell(self) -> int:
        return self.m - self.n + 1


@dataclass(frozen=True)
class UnboundedGeometric:
    """n particles on all nonnegative heights; throws hit the x-th vacancy
    from below with probability (1-q) q^x."""

    n: int
    q: Scalar

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"need n >= 0, got n={self.n}")
        if not 0 < self.q < 1:
            raise ValueError(f"need 0 < q < 1, got q={self.q}")


@dataclass(frozen=True)
class BoundedUniform:
    """n particles on heights {0..m-1}; throws hit each vacancy equally."""

    m: int
    n: int

    def __post_init__(self):
        if not 0 <= self.n <= self.m:
            raise ValueError(f"need 0 <= n <= m, got n={self.n} m={self.m}")

    @property
    def ell(self) -> int:
        return self.m - self.n + 1


ThrowModel = Union[BoundedGeometric, UnboundedGeometric, BoundedUniform]


@dataclass(frozen=True)
class ThrowPmf:
    """A throw-height law: finitely many atoms plus, for the unbounded
    model, the exact mass sitting above the materialization ceiling."""

    probs: dict[int, Scalar]
    tail: Scalar


@dataclass(frozen=True)
class SteadyStats:
    """Closed-form steady-state statistics of the bounded geometric chain.

    ``throw_fraction`` carries a q^(n-1) factor relative to the raw ratio
    of normalizers; the raw form (``throw_fraction_uncorrected``) exceeds 1
    for n >= 2 and is kept only for side-by-side comparison. Exactness of
    the corrected form against direct summation is asserted in the tests.
    """

    ground: Scalar
    top: Scalar
    throw_fraction: Scalar
    throw_fraction_uncorrected: Scalar


def enumerate_states(m: int, n: int) -> list[State]:
    """All n-subsets of {0..m-1} as sorted tuples, in lexicographic order."""
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= m, got m={m} n={n}")
    return list(combinations(range(m), n))


def validate_state(state: State, model: ThrowModel) -> None:
    """Raise ValueError unless ``state`` is legal for ``model``."""
    if len(state) != model.n:
        raise ValueError(f"state {state} has {len(state)} particles, model needs {model.n}")
    if any(b < 0 for b in state):
        raise ValueError(f"negative height in {state}")
    if any(state[i] >= state[i + 1] for i in range(len(state) - 1)):
        raise ValueError(f"heights must be strictly increasing, got {state}")
    if isinstance(model, (BoundedGeometric, BoundedUniform)):
        if state and state[-1] > model.m - 1:
            raise ValueError(f"height {state[-1]} out of range for m={model.m}")


def theta(excluded, x: int) -> int:
    """The (x+1)-th smallest nonnegative integer outside ``excluded``."""
    if x < 0:
        raise ValueError(f"need x >= 0, got x={x}")
    h = x
    for a in sorted(excluded):
        if a <= h:
            h += 1
    return h


def theta_rank(excluded, height: int) -> int:
    """Inverse of `theta`: how many non-excluded values lie below ``height``."""
    if height in excluded:
        raise ValueError(f"height {height} is excluded")
    return height - sum(1 for a in excluded if a < height)


def truncated_geometric_pmf(ell: int, q: Scalar) -> list[Scalar]:
    """The geometric law conditioned on {0..ell-1}: pmf(x) proportional to q^x."""
    if ell < 1:
        raise ValueError(f"need ell >= 1, got ell={ell}")
    if not 0 < q < 1:
        raise ValueError(f"need 0 < q < 1, got q={q}")
    norm = (1 - q) / (1 - q**ell)
    out = []
    power = norm
    for _ in range(ell):
        out.append(power)
        power = power * q
    return out


def _validate_after_shift(x_star: State, model: ThrowModel) -> None:
    if len(x_star) != model.n - 1:
        raise ValueError(f"after-shift state needs {model.n - 1} particles")
    if x_star and min(x_star) < 0:
        raise ValueError(f"negative height in {x_star}")
    if not isinstance(model, UnboundedGeometric):
        if x_star and max(x_star) > model.m - 2:
            raise ValueError(f"after-shift state {x_star} collides with forbidden heights")


def throw_prob(x_star: State, height: int, model: ThrowModel) -> Scalar:
    """Probability that the rethrown particle lands at ``height`` when the
    other particles occupy ``x_star``."""
    _validate_after_shift(x_star, model)
    rank = theta_rank(x_star, height)
    if isinstance(model, UnboundedGeometric):
        return (1 - model.q) * model.q**rank
    if height > model.m - 1:
        raise ValueError(f"height {height} out of range for m={model.m}")
    if isinstance(model, BoundedUniform):
        return Fraction(1, model.ell)
    return truncated_geometric_pmf(model.ell, model.q)[rank]


def throw_pmf(x_star: State, model: ThrowModel, ceiling: int | None = None) -> ThrowPmf:
    """The full throw-height law from after-shift state ``x_star``.

    Bounded models return every atom and a zero tail. The unbounded model
    materializes atoms at heights <= ceiling and reports the exact leftover
    mass as the tail, so downstream distance computations stay exact.
    """
    _validate_after_shift(x_star, model)
    if isinstance(model, UnboundedGeometric):
        if ceiling is None:
            raise ValueError("unbounded model needs a materialization ceiling")
        q = model.q
        probs = {}
        rank = 0
        for h in range(ceiling + 1):
            if h in x_star:
                continue
            probs[h] = (1 - q) * q**rank
            rank += 1
        return ThrowPmf(probs, q**rank)
    vacancies = [h for h in range(model.m) if h not in x_star]
    if isinstance(model, BoundedUniform):
        p = Fraction(1, model.ell)
        return ThrowPmf({h: p for h in vacancies}, 0)
    pmf = truncated_geometric_pmf(model.ell, model.q)
    return ThrowPmf(dict(zip(vacancies, pmf)), 0)


def step_kernel_row(state: State, model: ThrowModel) -> dict[State, Scalar]:
    """One row of the transition kernel: successor states and probabilities.

    Bounded models only; the empty state (n = 0) is a self-loop.
    """
    if isinstance(model, UnboundedGeometric):
        raise ValueError("kernel rows need a finite state space; use throw_prob")
    validate_state(state, model)
    if 0 not in state:
        return {tuple(b - 1 for b in state): Fraction(1)}
    x_star = tuple(b - 1 for b in state[1:])
    pmf = throw_pmf(x_star, model)
    return {
        tuple(sorted(x_star + (h,))): p
        for h, p in pmf.probs.items()
    }


def _vacancies_above(state: State, m: int) -> list[int]:
    """1 + v(x) for each height x in the state: the count of heights in
    {x..m-1} outside the state, plus one. For the k-th particle (1-based)
    this equals m - n - x + k."""
    n = len(state)
    return [m - n - x + k for k, x in enumerate(state, start=1)]


def stationary_weight(state: State, model: ThrowModel) -> Scalar:
    """Unnormalized stationary weight of a state.

    Bounded geometric: prod over x in B of [1 + v(x)] * q^x, with v(x) the
    number of vacant heights in {x..m-1}. Bounded uniform: prod (1 + v(x)).
    Unbounded geometric: q^(sum of heights).
    """
    validate_state(state, model)
    if isinstance(model, UnboundedGeometric):
        return model.q ** sum(state)
    if isinstance(model, BoundedUniform):
        weight = 1
        for count in _vacancies_above(state, model.m):
            weight *= count
        return weight
    q = model.q
    weight = 1 + 0 * q
    for count in _vacancies_above(state, model.m):
        weight = weight * q_int(count, q)
    return weight * q ** sum(state)


@lru_cache(maxsize=None)
def _uniform_normalizer(m: int, n: int) -> int:
    model = BoundedUniform(m, n)
    return sum(stationary_weight(state, model) for state in enumerate_states(m, n))


def stationary_prob(state: State, model: ThrowModel) -> Scalar:
    """Stationary probability of a state under the model's closed form."""
    weight = stationary_weight(state, model)
    if isinstance(model, BoundedGeometric):
        return weight / partition_z(model.m, model.n, model.q)
    if isinstance(model, BoundedUniform):
        return Fraction(weight, _uniform_normalizer(model.m, model.n))
    n, q = model.n, model.q
    return q_pochhammer(n, q) * q ** (-binom2(n)) * weight


def stationary_distribution(model: ThrowModel) -> dict[State, Scalar]:
    """The full closed-form stationary law of a bounded model."""
    if isinstance(model, UnboundedGeometric):
        raise ValueError("unbounded law has infinite support; use stationary_prob")
    z = (
        partition_z(model.m, model.n, model.q)
        if isinstance(model, BoundedGeometric)
        else Fraction(_uniform_normalizer(model.m, model.n))
    )
    return {
        state: stationary_weight(state, model) / z
        for state in enumerate_states(model.m, model.n)
    }


def closed_form_stats(m: int, n: int, q: Scalar) -> SteadyStats:
    """Ground-state, top-state, and throw-fraction statistics of the
    bounded geometric chain in steady state."""
    if not 1 <= n <= m:
        raise ValueError(f"need 1 <= n <= m, got m={m} n={n}")
    z = partition_z(m, n, q)
    ell = m - n + 1
    ground = q_int(ell, q) ** n * q ** binom2(n) / z
    top = q ** (n * m - binom2(n + 1)) / z
    uncorrected = q_int(ell, q) * partition_z(m - 1, n - 1, q) / z
    return SteadyStats(
        ground=ground,
        top=top,
        throw_fraction=q ** (n - 1) * uncorrected,
        throw_fraction_uncorrected=uncorrected,
    )


def _state_exists(state: State, model: ThrowModel) -> bool:
    if isinstance(model, UnboundedGeometric):
        return True
    return not state or state[-1] <= model.m - 1


def balance_residual(
    state: State, pi: Callable[[State], Scalar], model: ThrowModel
) -> Scalar:
    """pi(B) minus the one-step inflow into B; zero iff pi balances at B.

    The inflow is pi(B+1) from a waiting step plus, for each height i in B,
    the probability of sitting one step earlier at {0} united with the rest
    of B shifted up, times the chance of throwing to i. Predecessors that
    fall outside the model's state space contribute nothing.
    """
    validate_state(state, model)
    up = tuple(b + 1 for b in state)
    inflow = pi(up) if _state_exists(up, model) else 0
    for k, target in enumerate(state):
        rest = state[:k] + state[k + 1 :]
        pred = (0,) + tuple(b + 1 for b in rest)
        if not _state_exists(pred, model):
            continue
        inflow += pi(pred) * throw_prob(rest, target, model)
    return pi(state) - inflow
