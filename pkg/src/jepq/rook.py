"""Staircase boards, non-attacking rook placements, and the extended chain.

The board of height m has cells (r, c) with r, c >= 0 and r + c <= m - 1:
column c holds rows 0..m-1-c, so column heights step down m, m-1, ..., 1
and one further column is void. A rook at (r, c) encodes a particle with
remaining flight time r and elapsed flight time c; the exclusion rule makes
placements non-attacking (distinct rows, distinct columns).

Extended dynamics: every rook drifts (r, c) -> (r - 1, c + 1) unless the
bottom row holds a rook, in which case that rook is removed, the rest
drift, and the removed rook re-enters column 0 at a random row.
"""

from __future__ import annotations

from fractions import Fraction

from .qcomb import Scalar, gould_stirling
from .jep import State, truncated_geometric_pmf

Cell = tuple[int, int]
RookConfig = tuple[Cell, ...]

__all__ = [
    "Cell",
    "RookConfig",
    "board_cells",
    "is_board_cell",
    "validate_config",
    "enumerate_configs",
    "circ",
    "extensions",
    "row_projection",
    "extended_kernel_row",
    "extended_weight",
    "extended_prob",
    "extended_ground",
    "path_to_ground",
]


def is_board_cell(m: int, r: int, c: int) -> bool:
    return r >= 0 and c >= 0 and r + c <= m - 1


def board_cells(m: int) -> list[Cell]:
    """All m(m+1)/2 cells of the board of height m."""
    return [(r, c) for r in range(m) for c in range(m - r)]


def validate_config(m: int, rooks: RookConfig) -> None:
    """Raise ValueError unless ``rooks`` is a non-attacking placement on the
    board of height m."""
    rows = [r for r, _ in rooks]
    cols = [c for _, c in rooks]
    if len(set(rows)) != len(rooks) or len(set(cols)) != len(rooks):
        raise ValueError(f"attacking placement: {rooks}")
    for r, c in rooks:
        if not is_board_cell(m, r, c):
            raise ValueError(f"cell {(r, c)} off the board of height {m}")


def _canonical(cells) -> RookConfig:
    return tuple(sorted(cells))


def enumerate_configs(m: int, n: int) -> list[RookConfig]:
    """All placements of n non-attacking rooks on the board of height m,
    sorted lexicographically by (row, column) cell lists."""
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= m, got m={m} n={n}")
    configs: list[RookConfig] = []

    def place(row: int, remaining: int, used_cols: frozenset, acc: list[Cell]) -> None:
        if remaining == 0:
            configs.append(_canonical(acc))
            return
        if row < 0 or row + 1 < remaining:
            return
        place(row - 1, remaining, used_cols, acc)
        for c in range(m - row):
            if c not in used_cols:
                acc.append((row, c))
                place(row - 1, remaining - 1, used_cols | {c}, acc)
                acc.pop()

    place(m - 1, n, frozenset(), [])
    return sorted(configs)


def circ(m: int, rooks: RookConfig) -> int:
    """The circle statistic of a placement.

    Each rook disables every cell strictly to its left in its own row and
    every cell strictly below it in its own column; the statistic counts
    the surviving non-rook cells in rows that contain a rook. (The related
    inversion statistic that also circles cells in rook-free rows is a
    different quantity and is intentionally not implemented.)
    """
    validate_config(m, rooks)
    col_of_row = {r: c for r, c in rooks}
    row_of_col = {c: r for r, c in rooks}
    count = 0
    for r, rook_c in col_of_row.items():
        for c in range(rook_c + 1, m - r):
            blocker = row_of_col.get(c)
            if blocker is not None and blocker > r:
                continue
            count += 1
    return count


def extensions(heights: State, m: int) -> list[RookConfig]:
    """All placements whose rook rows equal ``heights``: every consistent
    assignment of elapsed flight times to the given remaining flight times."""
    if any(h < 0 or h > m - 1 for h in heights):
        raise ValueError(f"heights {heights} out of range for board height {m}")
    if len(set(heights)) != len(heights):
        raise ValueError(f"heights must be distinct, got {heights}")
    configs: list[RookConfig] = []
    rows = sorted(heights, reverse=True)

    def assign(i: int, used_cols: frozenset, acc: list[Cell]) -> None:
        if i == len(rows):
            configs.append(_canonical(acc))
            return
        r = rows[i]
        for c in range(m - r):
            if c not in used_cols:
                acc.append((r, c))
                assign(i + 1, used_cols | {c}, acc)
                acc.pop()

    assign(0, frozenset(), [])
    return sorted(configs)


def row_projection(rooks: RookConfig) -> State:
    """Forget elapsed flight times: the height set occupied by the rooks."""
    return tuple(sorted(r for r, _ in rooks))


def _drift(rooks: RookConfig) -> RookConfig:
    return _canonical((r - 1, c + 1) for r, c in rooks)


def extended_kernel_row(m: int, rooks: RookConfig, q: Scalar) -> dict[RookConfig, Scalar]:
    """One row of the extended kernel.

    With no rook in the bottom row the step is a deterministic drift.
    Otherwise the bottom rook is removed, the rest drift, and the rook
    re-enters column 0: the k-th available row counting from the bottom is
    hit with truncated-geometric probability proportional to q^k.
    """
    validate_config(m, rooks)
    if not 0 < q < 1:
        raise ValueError(f"need 0 < q < 1, got q={q}")
    bottom = [cell for cell in rooks if cell[0] == 0]
    drifted = _canonical((r - 1, c + 1) for r, c in rooks if r > 0)
    if not bottom:
        return {drifted: Fraction(1)}
    occupied = {r for r, _ in drifted}
    available = [r for r in range(m) if r not in occupied]
    pmf = truncated_geometric_pmf(len(available), q)
    return {
        _canonical(drifted + ((row, 0),)): p
        for row, p in zip(available, pmf)
    }


def extended_weight(m: int, rooks: RookConfig, q: Scalar) -> Scalar:
    """Unnormalized extended stationary weight q^(-circ)."""
    return q ** (-circ(m, rooks))


def extended_prob(m: int, rooks: RookConfig, q: Scalar) -> Scalar:
    """Extended stationary probability: q^(-circ) normalized by the Gould
    triangle value G[m+1, m-n+1] at base 1/q."""
    n = len(rooks)
    return extended_weight(m, rooks, q) / gould_stirling(m + 1, m - n + 1, 1 / q)


def extended_ground(n: int) -> RookConfig:
    """The diagonal placement (i, n-1-i): the fixed point of always
    throwing to the lowest available height."""
    return _canonical((i, n - 1 - i) for i in range(n))


def path_to_ground(m: int, rooks: RookConfig, max_steps: int | None = None) -> list[RookConfig]:
    """Drive the extended chain deterministically, always throwing to the
    lowest available row, until the ground diagonal is reached.

    Returns the visited path including both endpoints; raises RuntimeError
    if the ground is not reached within ``max_steps``.
    """
    validate_config(m, rooks)
    ground = extended_ground(len(rooks))
    if max_steps is None:
        max_steps = (m + 1) * (m + 2)
    path = [rooks]
    current = rooks
    for _ in range(max_steps):
        if current == ground:
            return path
        bottom = [cell for cell in current if cell[0] == 0]
        drifted = _canonical((r - 1, c + 1) for r, c in current if r > 0)
        if not bottom:
            current = drifted
        else:
            occupied = {r for r, _ in drifted}
            lowest = min(r for r in range(m) if r not in occupied)
            current = _canonical(drifted + ((lowest, 0),))
        path.append(current)
    if current == ground:
        return path
    raise RuntimeError(f"ground not reached from {rooks} within {max_steps} steps")
