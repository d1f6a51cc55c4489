"""Brute-force machinery independent of the closed forms: full transition
matrices over enumerated state spaces, exact stationary solves, total
variation distances, and convergence tables against the unbounded chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .qcomb import (
    Scalar,
    binom2,
    euler_phi,
    gould_stirling,
    partition_z,
    q_int,
    q_pochhammer,
)
from .jep import (
    BoundedGeometric,
    ThrowModel,
    UnboundedGeometric,
    enumerate_states,
    stationary_prob,
    step_kernel_row,
)
from .rook import enumerate_configs, extended_kernel_row

DEFAULT_STATE_CAP = 100_000

__all__ = [
    "DEFAULT_STATE_CAP",
    "TransitionMatrix",
    "ConvergenceRow",
    "LimitRow",
    "build_transition_matrix",
    "build_extended_matrix",
    "solve_stationary",
    "total_variation",
    "tv_to_unbounded",
    "coupling_bound",
    "limit_rows_fixed_n",
    "limit_rows_growing_n",
]


class TransitionMatrix:
    """Row-stochastic kernel over an explicitly enumerated state list."""

    def __init__(self, states: list, rows: list[dict]):
        if len(states) != len(rows):
            raise ValueError("one row per state required")
        self.states = list(states)
        self.rows = list(rows)
        self.pos = {s: i for i, s in enumerate(self.states)}

    def __len__(self) -> int:
        return len(self.states)

    def push(self, dist: dict) -> dict:
        """One step of the chain applied to a distribution: dist -> dist P."""
        out: dict = {}
        for state, mass in dist.items():
            for succ, p in self.rows[self.pos[state]].items():
                out[succ] = out.get(succ, 0) + mass * p
        return out

    def is_exact(self) -> bool:
        return all(
            not isinstance(p, float) for row in self.rows for p in row.values()
        )


def build_transition_matrix(
    model: ThrowModel, state_cap: int = DEFAULT_STATE_CAP
) -> TransitionMatrix:
    """Assemble the full kernel of a bounded model over all its states."""
    if isinstance(model, UnboundedGeometric):
        raise ValueError("unbounded model has an infinite state space")
    count = comb(model.m, model.n)
    if count > state_cap:
        raise ValueError(f"state space size {count} exceeds cap {state_cap}")
    states = enumerate_states(model.m, model.n)
    return TransitionMatrix(states, [step_kernel_row(s, model) for s in states])


def build_extended_matrix(
    m: int, n: int, q: Scalar, state_cap: int = DEFAULT_STATE_CAP
) -> TransitionMatrix:
    """Assemble the kernel of the extended rook chain on the board of height m."""
    count = gould_stirling(m + 1, m + 1 - n, 1)
    if count > state_cap:
        raise ValueError(f"extended state space size {count} exceeds cap {state_cap}")
    configs = enumerate_configs(m, n)
    return TransitionMatrix(configs, [extended_kernel_row(m, c, q) for c in configs])


def solve_stationary(
    tm: TransitionMatrix, tol: float = 1e-14, max_iter: int = 10**6
) -> dict:
    """The unique stationary distribution of an ergodic kernel.

    Exact state-reduction elimination when every entry is rational (no
    pivoting needed: all intermediate quantities stay nonnegative), power
    iteration from the uniform vector when entries are floats.
    """
    if len(tm) == 0:
        raise ValueError("empty state space")
    if tm.is_exact():
        return _solve_exact(tm)
    return _solve_power(tm, tol, max_iter)


def _solve_exact(tm: TransitionMatrix) -> dict:
    n = len(tm)
    a = [[Fraction(0)] * n for _ in range(n)]
    for i, row in enumerate(tm.rows):
        for succ, p in row.items():
            a[i][tm.pos[succ]] += Fraction(p)
    # Censor states from the top index down. Scaling column k by the exit
    # mass of state k turns a[i][k] into the chance that i enters k per
    # unit of time k eventually spends below k, which is exactly what the
    # forward recursion needs; division is exact throughout.
    for k in range(n - 1, 0, -1):
        row_k = a[k]
        s = sum(row_k[j] for j in range(k))
        if s == 0:
            raise ValueError("kernel is not irreducible: no exit from a top block")
        for i in range(k):
            row_i = a[i]
            f = row_i[k] / s
            if f:
                row_i[k] = f
                for j in range(k):
                    if row_k[j]:
                        row_i[j] += f * row_k[j]
    pi = [Fraction(0)] * n
    pi[0] = Fraction(1)
    for k in range(1, n):
        pi[k] = sum(pi[i] * a[i][k] for i in range(k) if a[i][k])
    total = sum(pi)
    return {state: pi[i] / total for i, state in enumerate(tm.states)}


def _solve_power(tm: TransitionMatrix, tol: float, max_iter: int) -> dict:
    n = len(tm)
    sparse = [
        [(tm.pos[succ], float(p)) for succ, p in row.items()] for row in tm.rows
    ]
    pi = [1.0 / n] * n
    for _ in range(max_iter):
        new = [0.0] * n
        for i, mass in enumerate(pi):
            if mass:
                for j, p in sparse[i]:
                    new[j] += mass * p
        residual = sum(abs(x - y) for x, y in zip(new, pi))
        pi = new
        if residual < tol:
            total = sum(pi)
            return {state: pi[i] / total for i, state in enumerate(tm.states)}
    raise RuntimeError(f"power iteration did not reach {tol} in {max_iter} steps")


def total_variation(mu: dict, nu: dict, mu_tail: Scalar = 0, nu_tail: Scalar = 0) -> Scalar:
    """Half the l1 distance between two sub-distributions on a common space.

    A tail argument is extra mass living strictly outside the other
    distribution's support (used when one side has countable support that
    was only materialized up to a ceiling); it enters the sum whole.
    """
    for dist in (mu, nu):
        for value in dist.values():
            if value < 0:
                raise ValueError(f"negative probability {value}")
    if mu_tail < 0 or nu_tail < 0:
        raise ValueError("negative tail mass")
    diff = mu_tail + nu_tail
    for key in mu.keys() | nu.keys():
        diff += abs(mu.get(key, 0) - nu.get(key, 0))
    return diff / 2


@dataclass(frozen=True)
class ConvergenceRow:
    """Exact distance between the bounded and unbounded stationary laws at
    one parameter point, with the two provable bounds alongside."""

    m: int
    n: int
    q: Scalar
    tv: Scalar
    bound_exact: Scalar
    bound_simple: Scalar


def tv_to_unbounded(m: int, n: int, q: Scalar, state_cap: int = DEFAULT_STATE_CAP) -> ConvergenceRow:
    """Exact total variation between the bounded law at (m, n, q) and the
    unbounded law with the same n and q.

    The bounded law is supported on height sets inside {0..m-1}, so the
    unbounded law's mass outside those sets is exactly one minus its mass on
    them; no truncation error enters.
    """
    count = comb(m, n)
    if count > state_cap:
        raise ValueError(f"state space size {count} exceeds cap {state_cap}")
    bounded_model = BoundedGeometric(m, n, q)
    unbounded_model = UnboundedGeometric(n, q)
    states = enumerate_states(m, n)
    mu = {s: stationary_prob(s, bounded_model) for s in states}
    nu = {s: stationary_prob(s, unbounded_model) for s in states}
    tail = 1 - sum(nu.values())
    ell = m - n + 1
    return ConvergenceRow(
        m=m,
        n=n,
        q=q,
        tv=total_variation(mu, nu, nu_tail=tail),
        bound_exact=1 - (1 - q**ell) ** m,
        bound_simple=m * q**ell,
    )


def coupling_bound(t: int, d_init: Scalar, d_throw: Scalar) -> Scalar:
    """Bound on the distance between two coupled chains after t steps:
    1 - (1 - d_init) (1 - d_throw)^t."""
    if t < 0:
        raise ValueError(f"need t >= 0, got t={t}")
    for name, d in (("d_init", d_init), ("d_throw", d_throw)):
        if not 0 <= d <= 1:
            raise ValueError(f"need 0 <= {name} <= 1, got {d}")
    return 1 - (1 - d_init) * (1 - d_throw) ** t


@dataclass(frozen=True)
class LimitRow:
    """Ground-state probability at (m, n, q) against its large-m target.

    ``value`` is the full ground-state probability; ``value_uncorrected``
    omits the q^binom(n,2) factor and does not converge to the target for
    n >= 2 (kept for side-by-side comparison)."""

    m: int
    n: int
    value: Scalar
    value_uncorrected: Scalar
    target: Scalar
    error: Scalar


def _ground_row(m: int, n: int, q: Scalar, target: Scalar) -> LimitRow:
    uncorrected = q_int(m - n + 1, q) ** n / partition_z(m, n, q)
    value = uncorrected * q ** binom2(n)
    return LimitRow(
        m=m,
        n=n,
        value=value,
        value_uncorrected=uncorrected,
        target=target,
        error=abs(value - target),
    )


def limit_rows_fixed_n(n: int, q: Scalar, m_values) -> list[LimitRow]:
    """Ground-state probabilities for fixed n over a range of m; the target
    is the n-term product (q;q)_n."""
    target = q_pochhammer(n, q)
    rows = []
    for m in m_values:
        if m < n:
            raise ValueError(f"need m >= n, got m={m} n={n}")
        rows.append(_ground_row(m, n, q, target))
    return rows


def limit_rows_growing_n(
    q: Scalar, n_values, m_factor: int = 2, eps: float = 1e-9
) -> list[LimitRow]:
    """Ground-state probabilities with m growing proportionally to n
    (m = m_factor * n); the target is the full Euler product."""
    if m_factor < 2:
        raise ValueError("need m_factor >= 2 so that m - n grows with n")
    target = euler_phi(q, eps)
    return [_ground_row(m_factor * n, n, q, target) for n in n_values]
