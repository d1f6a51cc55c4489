"""Identity suites: every closed form checked against brute force.

Each check is exact (all arithmetic over rationals) and self-contained, so
a single failure pinpoints the identity that broke. The CLI `verify`
subcommand runs everything and reports one line per check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .qcomb import (
    binom2,
    euler_phi,
    gould_stirling,
    partition_z,
    q_int,
    q_pochhammer,
    q_stirling,
)
from .jep import (
    BoundedGeometric,
    BoundedUniform,
    balance_residual,
    closed_form_stats,
    enumerate_states,
    stationary_distribution,
    stationary_prob,
    stationary_weight,
    step_kernel_row,
    UnboundedGeometric,
)
from .oracle import (
    build_extended_matrix,
    build_transition_matrix,
    solve_stationary,
    total_variation,
    tv_to_unbounded,
)
from .rook import (
    circ,
    enumerate_configs,
    extended_ground,
    extended_prob,
    extensions,
    path_to_ground,
    row_projection,
)

DEFAULT_QS = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))

__all__ = ["CheckResult", "run_checks", "DEFAULT_QS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _classical_stirling(a: int, b: int) -> int:
    if b < 0 or b > a:
        return 0
    row = [1]
    for r in range(a):
        row = [
            (row[j - 1] if j >= 1 else 0) + (j * row[j] if j <= r else 0)
            for j in range(r + 2)
        ]
    return row[b]


def _check_scalar_identities(max_m: int, qs) -> CheckResult:
    name = "scalar-identities"
    for q in (*qs, Fraction(3, 2), Fraction(2)):
        for k in range(1, 21):
            if q_int(k, q) != q ** (k - 1) * q_int(k, 1 / q):
                return CheckResult(name, False, f"[{k}] reciprocal identity at q={q}")
            if q != 1 and q_int(k, q) * (1 - q) != 1 - q**k:
                return CheckResult(name, False, f"[{k}] ratio identity at q={q}")
        for a in range(11):
            for b in range(a + 1):
                if q_stirling(a, b, q) != q ** binom2(b) * gould_stirling(a, b, q):
                    return CheckResult(name, False, f"triangle relation at ({a},{b},{q})")
    for a in range(11):
        for b in range(a + 1):
            if q_stirling(a, b, Fraction(1)) != _classical_stirling(a, b):
                return CheckResult(name, False, f"classical limit at ({a},{b})")
            if gould_stirling(a, b, Fraction(1)) != _classical_stirling(a, b):
                return CheckResult(name, False, f"classical Gould limit at ({a},{b})")
    for q in qs:
        phi = euler_phi(q, 1e-9)
        prev = None
        for n in range(1, 30):
            poch = q_pochhammer(n, q)
            if prev is not None and not poch < prev:
                return CheckResult(name, False, f"(q;q)_n not decreasing at n={n}, q={q}")
            if poch < phi - 1e-9:
                return CheckResult(name, False, f"(q;q)_n fell below the Euler product at n={n}")
            prev = poch
    return CheckResult(name, True, "q-integer, triangle, and product identities hold")


def _check_closed_form_vs_solver(max_m: int, qs) -> CheckResult:
    name = "stationary-vs-solver"
    for m in range(2, max_m + 1):
        for n in range(1, m + 1):
            for q in qs:
                model = BoundedGeometric(m, n, q)
                solved = solve_stationary(build_transition_matrix(model))
                closed = stationary_distribution(model)
                if solved != closed:
                    return CheckResult(name, False, f"mismatch at (m={m}, n={n}, q={q})")
    return CheckResult(name, True, f"closed form equals exact solve through m={max_m}")


def _check_normalization(max_m: int, qs) -> CheckResult:
    name = "normalization"
    for q in qs:
        if partition_z(2, 1, q) != 1 + 2 * q:
            return CheckResult(name, False, f"Z(2,1,{q}) anchor")
        if partition_z(3, 2, q) != q + 3 * q**2 + 3 * q**3:
            return CheckResult(name, False, f"Z(3,2,{q}) anchor")
        for m in range(0, max_m + 1):
            for n in range(m + 1):
                z = partition_z(m, n, q)
                literal = q ** (binom2(m + 1) - n) * q_stirling(m + 1, m - n + 1, 1 / q)
                if z != literal:
                    return CheckResult(name, False, f"scaled vs literal Z at ({m},{n},{q})")
                if n >= 1:
                    model = BoundedGeometric(m, n, q) if m >= 1 else None
                    total = sum(
                        stationary_weight(s, model) for s in enumerate_states(m, n)
                    )
                    if total != z:
                        return CheckResult(name, False, f"weight sum != Z at ({m},{n},{q})")
    return CheckResult(name, True, f"weight sums equal the normalizer through m={max_m}")


def _check_circ_gould(max_m: int, qs) -> CheckResult:
    name = "circ-statistic"
    for m in range(0, max_m + 1):
        for n in range(m + 1):
            configs = enumerate_configs(m, n)
            if len(configs) != _classical_stirling(m + 1, m + 1 - n):
                return CheckResult(name, False, f"config count at (m={m}, n={n})")
            histogram: dict[int, int] = {}
            for config in configs:
                value = circ(m, config)
                histogram[value] = histogram.get(value, 0) + 1
            for q in qs:
                total = sum(count * q**value for value, count in histogram.items())
                if total != gould_stirling(m + 1, m - n + 1, q):
                    return CheckResult(name, False, f"circ sum at (m={m}, n={n}, q={q})")
    return CheckResult(name, True, f"circ generating sums match the Gould triangle through m={max_m}")


def _check_extensions(max_m: int, qs) -> CheckResult:
    name = "extension-sums"
    for m in range(1, max_m + 1):
        for n in range(0, m + 1):
            for heights in enumerate_states(m, n):
                exts = extensions(heights, m)
                counts = [m - n - x + k for k, x in enumerate(heights, start=1)]
                expected_count = 1
                for c in counts:
                    expected_count *= c
                if len(exts) != expected_count:
                    return CheckResult(name, False, f"extension count at B={heights}, m={m}")
                if sorted(row_projection(c) for c in exts) != [heights] * len(exts):
                    return CheckResult(name, False, f"bad row projection at B={heights}")
                for q in qs:
                    total = sum(q ** -circ(m, c) for c in exts)
                    product = Fraction(1)
                    direct = Fraction(1)
                    for k, x in enumerate(heights, start=1):
                        product *= q_int(m - n - x + k, 1 / q)
                        vacant = len([h for h in range(x, m) if h not in heights])
                        direct *= q_int(1 + vacant, 1 / q)
                    if total != product or product != direct:
                        return CheckResult(name, False, f"extension sum at B={heights}, q={q}")
    return CheckResult(name, True, f"extension sums match the vacancy products through m={max_m}")


def _check_extended_chain(max_m: int, qs) -> CheckResult:
    name = "extended-chain"
    top = min(max_m, 6)
    for m in range(1, top + 1):
        for n in range(0, m + 1):
            configs = enumerate_configs(m, n)
            for config in configs:
                if path_to_ground(m, config)[-1] != extended_ground(n):
                    return CheckResult(name, False, f"ground unreachable from {config}")
            for q in qs:
                tm = build_extended_matrix(m, n, q)
                mu = {c: extended_prob(m, c, q) for c in configs}
                if sum(mu.values()) != 1:
                    return CheckResult(name, False, f"extended law not normalized at ({m},{n},{q})")
                if tm.push(mu) != mu:
                    return CheckResult(name, False, f"extended law not stationary at ({m},{n},{q})")
                if n >= 1:
                    marginal: dict = {}
                    for config, p in mu.items():
                        key = row_projection(config)
                        marginal[key] = marginal.get(key, 0) + p
                    closed = stationary_distribution(BoundedGeometric(m, n, q))
                    if marginal != closed:
                        return CheckResult(name, False, f"row projection off at ({m},{n},{q})")
    return CheckResult(name, True, f"extended law is stationary and projects correctly through m={top}")


def _check_uniform(max_m: int, qs) -> CheckResult:
    name = "uniform-model"
    for m in range(1, max_m + 1):
        for n in range(1, m + 1):
            model = BoundedUniform(m, n)
            solved = solve_stationary(build_transition_matrix(model))
            closed = stationary_distribution(model)
            if solved != closed:
                return CheckResult(name, False, f"uniform solve mismatch at (m={m}, n={n})")
            one = Fraction(1)
            states = enumerate_states(m, n)
            geo_at_one = {}
            for s in states:
                w = Fraction(1)
                for k, x in enumerate(s, start=1):
                    w *= q_int(m - n - x + k, one) * one**x
                geo_at_one[s] = w
            total = sum(geo_at_one.values())
            if {s: w / total for s, w in geo_at_one.items()} != closed:
                return CheckResult(name, False, f"q=1 limit mismatch at (m={m}, n={n})")
    return CheckResult(name, True, f"uniform law matches the solver and the q=1 limit through m={max_m}")


def _check_throw_fraction(max_m: int, qs) -> CheckResult:
    name = "throw-fraction"
    for q in qs:
        for m in range(1, max_m + 1):
            for n in range(1, m + 1):
                model = BoundedGeometric(m, n, q)
                direct = sum(
                    stationary_prob(s, model)
                    for s in enumerate_states(m, n)
                    if s and s[0] == 0
                )
                stats = closed_form_stats(m, n, q)
                if stats.throw_fraction != direct:
                    return CheckResult(name, False, f"corrected form off at ({m},{n},{q})")
    bad = closed_form_stats(3, 2, Fraction(1, 2)).throw_fraction_uncorrected
    if not bad > 1:
        return CheckResult(name, False, f"uncorrected form should exceed 1 at (3,2,1/2), got {bad}")
    return CheckResult(
        name,
        True,
        f"corrected form matches direct summation through m={max_m}; "
        f"uncorrected form reaches {bad} > 1 at (3,2,1/2)",
    )


def _check_balance(max_m: int, qs) -> CheckResult:
    name = "balance-residuals"
    for q in qs:
        for m in range(2, max_m + 1):
            for n in range(1, m + 1):
                model = BoundedGeometric(m, n, q)
                law = stationary_distribution(model)
                pi = lambda s: law.get(s, Fraction(0))
                for state in law:
                    if balance_residual(state, pi, model) != 0:
                        return CheckResult(name, False, f"bounded residual at B={state}, ({m},{n},{q})")
        for n in range(1, 4):
            model = UnboundedGeometric(n, q)
            pi_inf = lambda s: stationary_prob(s, model)
            for state in enumerate_states(11, n):
                if balance_residual(state, pi_inf, model) != 0:
                    return CheckResult(name, False, f"unbounded residual at B={state}, n={n}, q={q}")
    return CheckResult(name, True, f"balance holds everywhere through m={max_m} and below height 11")


def _check_tv_bounds(max_m: int, qs) -> CheckResult:
    name = "tv-bounds"
    for q in qs:
        for n in (1, 2, 3):
            for m in range(n, n + 7):
                row = tv_to_unbounded(m, n, q)
                if not row.tv <= row.bound_exact <= row.bound_simple:
                    return CheckResult(name, False, f"bound chain broken at (m={m}, n={n}, q={q})")
        for ell in (1, 2, 4, 6):
            trunc = {x: (1 - q) * q**x / (1 - q**ell) for x in range(ell)}
            ceiling = ell + 5
            geo = {x: (1 - q) * q**x for x in range(ceiling)}
            tv = total_variation(geo, trunc, mu_tail=q**ceiling)
            if tv != q**ell:
                return CheckResult(name, False, f"geometric truncation distance at ell={ell}, q={q}")
    return CheckResult(name, True, "distance bounds and the truncation distance are exact")


_CHECKS = (
    _check_scalar_identities,
    _check_closed_form_vs_solver,
    _check_normalization,
    _check_circ_gould,
    _check_extensions,
    _check_extended_chain,
    _check_uniform,
    _check_throw_fraction,
    _check_balance,
    _check_tv_bounds,
)


def run_checks(max_m: int = 6, qs=DEFAULT_QS) -> list[CheckResult]:
    """Run every identity suite up to the given size; exact throughout."""
    if max_m < 3:
        raise ValueError("max_m below 3 would skip the anchor cases")
    qs = tuple(Fraction(q) for q in qs)
    for q in qs:
        if not 0 < q < 1:
            raise ValueError(f"verification runs on exact q in (0,1), got {q}")
    return [check(max_m, qs) for check in _CHECKS]
