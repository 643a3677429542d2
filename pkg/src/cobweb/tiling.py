"""Exact covers of a layer's maximal chains by box-shaped sigma-P_m blocks.

The maximal chains from one fixed vertex of level ``k`` up to level ``n``
are the cells of the box ``[F_{k+1}] x ... x [F_n]`` (pick one vertex per
level).  A block is a cartesian product ``S_1 x ... x S_m`` of arbitrary
subsets whose sizes are a permutation of ``(F_1, ..., F_m)``, so it holds
exactly ``m_F!`` chains.  A tiling is a set of blocks partitioning the box.

Tilings are counted labelled; grid symmetries are never quotiented out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, partial
from itertools import combinations, permutations, product
from math import prod
from typing import Iterator

from ._parallel import ordered_map
from .combinatorics import equal_block_count
from .exceptions import BudgetExceeded, InvalidParameter, StructuralObstruction
from .sequences import FSequence

POLICIES = ("identity", "any")
DEFAULT_CELL_BUDGET = 64
DEFAULT_BOUND_ETA = 20_000
DEFAULT_MAX_NODES = 1_000_000

Block = tuple[tuple[int, ...], ...]  # per-level 1-based index sets, each sorted


def normalize_policy(policy: str) -> str:
    policy = {"identity-sigma": "identity", "any-sigma": "any"}.get(policy, policy)
    if policy not in POLICIES:
        raise InvalidParameter(f"unknown policy {policy!r}; expected identity or any")
    return policy


@dataclass(frozen=True)
class LayerGrid:
    sequence: FSequence
    k: int
    n: int
    dims: tuple[int, ...]
    profile: tuple[int, ...]  # (F_1, ..., F_m)
    policy: str = "any"

    @property
    def m(self) -> int:
        return self.n - self.k

    @property
    def lam(self) -> int:
        """Cells per block, ``m_F!``."""
        return prod(self.profile)

    @property
    def eta(self) -> int:
        """Cells in the grid, ``n_F^(m)``."""
        return prod(self.dims)

    @property
    def kappa(self) -> Fraction:
        return Fraction(self.eta, self.lam)

    @property
    def obstructed(self) -> bool:
        return self.kappa.denominator != 1

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        step = 1
        for d in reversed(self.dims):
            out.append(step)
            step *= d
        return tuple(reversed(out))

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.eta) - 1

    def cell_coords(self, index: int) -> tuple[int, ...]:
        return tuple((index // st) % d for st, d in zip(self.strides, self.dims))

    def block_mask(self, block: Block) -> int:
        mask = 0
        for cell in product(*block):
            mask |= 1 << sum((c - 1) * st for c, st in zip(cell, self.strides))
        return mask

    @cached_property
    def profiles(self) -> tuple[tuple[int, ...], ...]:
        """Admissible per-level block sizes, sorted, already filtered by ``dims``."""
        if self.policy == "identity":
            cands = {self.profile}
        else:
            cands = set(permutations(self.profile))
        return tuple(
            sorted(p for p in cands if all(s <= d for s, d in zip(p, self.dims)))
        )

    @cached_property
    def blocks_by_least_cell(self) -> dict[int, list[tuple[Block, int]]]:
        """Every valid block with its cell mask, grouped by least cell, each group sorted."""
        groups: dict[int, list[tuple[Block, int]]] = {i: [] for i in range(self.eta)}
        for prof in self.profiles:
            axes = [combinations(range(1, d + 1), size) for size, d in zip(prof, self.dims)]
            for block in product(*axes):
                mask = self.block_mask(block)
                groups[(mask & -mask).bit_length() - 1].append((block, mask))
        for group in groups.values():
            group.sort()
        return groups

    def to_dict(self) -> dict:
        return {
            "sequence": self.sequence.name,
            "k": self.k,
            "n": self.n,
            "m": self.m,
            "dims": list(self.dims),
            "policy": self.policy,
            "lambda": self.lam,
            "eta": self.eta,
            # integral unless the layer is obstructed
            "kappa": self.kappa.numerator if self.kappa.denominator == 1 else str(self.kappa),
        }


@dataclass(frozen=True)
class Tiling:
    blocks: tuple[Block, ...]
    policy: str = "any"

    def to_json_obj(self) -> list:
        return [[list(s) for s in block] for block in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)


def make_problem(F: FSequence, k: int, n: int, policy: str = "any") -> LayerGrid:
    """The grid of chains from a fixed vertex of level ``k`` up to level ``n``."""
    if not 0 <= k < n:
        raise InvalidParameter(f"need 0 <= k < n, got k={k}, n={n}")
    F.require(n)
    dims = tuple(F.term(s) for s in range(k + 1, n + 1))
    profile = tuple(F.term(i) for i in range(1, n - k + 1))
    return LayerGrid(F, k, n, dims, profile, normalize_policy(policy))


def tiling_upper_bound(grid: LayerGrid) -> int:
    """Equal-size set partitions of the cells: blocks of ``m_F!`` cells, ``kappa`` of them."""
    if grid.obstructed:
        raise StructuralObstruction(
            f"{grid.eta} cells cannot split into blocks of {grid.lam}"
        )
    return equal_block_count(grid.eta, grid.kappa.numerator, grid.lam)


@dataclass(frozen=True)
class TilingCheck:
    ok: bool
    diagnostic: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def verify_tiling(grid: LayerGrid, candidate: Tiling, policy: str | None = None) -> TilingCheck:
    """Disjointness, full coverage and block profiles, with the first failure named."""
    policy = normalize_policy(policy or grid.policy)
    required = sorted(grid.profile)
    covered = 0
    for b, block in enumerate(candidate.blocks):
        if len(block) != grid.m:
            raise InvalidParameter(f"block {b} spans {len(block)} levels, expected {grid.m}")
        for axis, (subset, dim) in enumerate(zip(block, grid.dims)):
            if len(set(subset)) != len(subset) or not all(1 <= c <= dim for c in subset):
                raise InvalidParameter(f"block {b} has bad indices {subset} on level {grid.k + axis + 1}")
        sizes = tuple(len(s) for s in block)
        if sorted(sizes) != required:
            raise InvalidParameter(
                f"block {b} size profile {sizes} is not a permutation of {grid.profile}"
            )
        if policy == "identity" and sizes != grid.profile:
            return TilingCheck(False, f"block {b} profile {sizes} is not the identity {grid.profile}")
        mask = grid.block_mask(block)
        clash = mask & covered
        if clash:
            cell = grid.cell_coords((clash & -clash).bit_length() - 1)
            return TilingCheck(
                False, f"block {b} overlaps an earlier block at cell {tuple(c + 1 for c in cell)}"
            )
        covered |= mask
    missing = grid.full_mask & ~covered
    if missing:
        cell = grid.cell_coords((missing & -missing).bit_length() - 1)
        return TilingCheck(False, f"cell {tuple(c + 1 for c in cell)} is not covered")
    return TilingCheck(True)


# -- search ---------------------------------------------------------------


def _candidates(grid: LayerGrid, covered: int) -> list[tuple[Block, int]]:
    """Blocks containing the least uncovered cell and avoiding ``covered``, sorted.

    Every cell below the least uncovered one is covered, so these are exactly
    the free blocks whose own least cell is that cell.
    """
    free = grid.full_mask & ~covered
    cell = (free & -free).bit_length() - 1
    return [(b, mask) for b, mask in grid.blocks_by_least_cell[cell] if not mask & covered]


def _check_budget(grid: LayerGrid, budget: int) -> None:
    if grid.eta > budget:
        raise BudgetExceeded(f"grid has {grid.eta} cells, budget is {budget}")


class _NodeBudget:
    """Counts search nodes; one instance per root branch so limits are thread-count independent."""

    def __init__(self, limit: int | None):
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"search exceeded {self.limit} nodes in one branch")


def _iter_tilings(
    grid: LayerGrid, covered: int, chosen: list[Block], nodes: _NodeBudget
) -> Iterator[tuple[Block, ...]]:
    if covered == grid.full_mask:
        yield tuple(chosen)
        return
    nodes.tick()
    for block, mask in _candidates(grid, covered):
        chosen.append(block)
        yield from _iter_tilings(grid, covered | mask, chosen, nodes)
        chosen.pop()


def _count(grid: LayerGrid, covered: int, memo: dict[int, int], nodes: _NodeBudget) -> int:
    if covered == grid.full_mask:
        return 1
    hit = memo.get(covered)
    if hit is not None:
        return hit
    nodes.tick()
    total = sum(_count(grid, covered | mask, memo, nodes) for _, mask in _candidates(grid, covered))
    memo[covered] = total
    return total


def _branch_list(
    grid: LayerGrid, limit: int | None, max_nodes: int | None, root: tuple[Block, int]
) -> list[tuple[Block, ...]]:
    block, mask = root
    out = []
    for tiling in _iter_tilings(grid, mask, [block], _NodeBudget(max_nodes)):
        out.append(tiling)
        if limit is not None and len(out) >= limit:
            break
    return out


def _branch_count(grid: LayerGrid, max_nodes: int | None, root: tuple[Block, int]) -> int:
    return _count(grid, root[1], {}, _NodeBudget(max_nodes))


def enumerate_tilings(
    grid: LayerGrid,
    policy: str | None = None,
    limit: int | None = None,
    *,
    budget_cells: int = DEFAULT_CELL_BUDGET,
    max_nodes: int | None = DEFAULT_MAX_NODES,
    workers: int = 1,
) -> list[Tiling]:
    """Every tiling, in lexicographic order of block lists.

    Backtracking always branches on the least uncovered cell, trying the
    blocks that contain it in sorted order, so the output is canonical.
    Root branches can run on ``workers`` processes; results merge in branch
    order.
    """
    grid = _with_policy(grid, policy)
    _check_budget(grid, budget_cells)
    if limit is not None and limit < 0:
        raise InvalidParameter("limit must be nonnegative")
    if grid.obstructed or limit == 0:
        return []
    roots = _candidates(grid, 0)
    chunks = ordered_map(partial(_branch_list, grid, limit, max_nodes), roots, workers)
    found = [t for chunk in chunks for t in chunk]
    if limit is not None:
        found = found[:limit]
    return [Tiling(blocks, grid.policy) for blocks in found]


def count_tilings(
    grid: LayerGrid,
    policy: str | None = None,
    *,
    budget_cells: int = DEFAULT_CELL_BUDGET,
    max_nodes: int | None = DEFAULT_MAX_NODES,
    workers: int = 1,
) -> int:
    """Number of tilings, memoised on the covered-cell set."""
    grid = _with_policy(grid, policy)
    _check_budget(grid, budget_cells)
    if grid.obstructed:
        return 0
    roots = _candidates(grid, 0)
    return sum(ordered_map(partial(_branch_count, grid, max_nodes), roots, workers))


def exists_tiling(
    grid: LayerGrid,
    policy: str | None = None,
    *,
    budget_cells: int = DEFAULT_CELL_BUDGET,
    max_nodes: int | None = DEFAULT_MAX_NODES,
) -> tuple[bool, Tiling | None]:
    """First tiling in canonical order, or ``(False, None)`` after exhausting the search."""
    grid = _with_policy(grid, policy)
    _check_budget(grid, budget_cells)
    if grid.obstructed:
        return False, None
    for blocks in _iter_tilings(grid, 0, [], _NodeBudget(max_nodes)):
        witness = Tiling(blocks, grid.policy)
        check = verify_tiling(grid, witness)
        if not check:
            raise AssertionError(f"search produced an invalid tiling: {check.diagnostic}")
        return True, witness
    return False, None


def _with_policy(grid: LayerGrid, policy: str | None) -> LayerGrid:
    if policy is None:
        return grid
    policy = normalize_policy(policy)
    if policy == grid.policy:
        return grid
    return LayerGrid(grid.sequence, grid.k, grid.n, grid.dims, grid.profile, policy)


# -- triangles ------------------------------------------------------------

TRIANGLE_MODES = ("bound", "count", "exists")


def tiling_triangle(
    F: FSequence,
    max_n: int,
    policy: str = "any",
    mode: str = "bound",
    *,
    budget_cells: int = DEFAULT_CELL_BUDGET,
    max_eta: int = DEFAULT_BOUND_ETA,
    max_nodes: int | None = DEFAULT_MAX_NODES,
    workers: int = 1,
) -> list[list[int | bool | None]]:
    """Rows ``n = 0..max_n``, entries ``k = 0..n``; ``None`` marks an unresolved cell.

    ``bound`` gives the equal-block partition count (0 when the block size
    does not divide the grid), ``count`` the exact number of tilings and
    ``exists`` whether one exists.  The layer with ``k == n`` is the empty
    chain and has its one trivial tiling; with ``k == 0`` the only block
    of ``n_F!`` cells is the whole grid, so that edge is 1 as well.
    """
    if mode not in TRIANGLE_MODES:
        raise InvalidParameter(f"unknown triangle mode {mode!r}")
    if max_n < 0:
        raise InvalidParameter("max_n must be nonnegative")
    policy = normalize_policy(policy)
    F.require(max_n)
    rows = []
    for n in range(max_n + 1):
        row = []
        for k in range(n + 1):
            if k == n or k == 0:
                row.append(True if mode == "exists" else 1)
                continue
            grid = make_problem(F, k, n, policy)
            if mode == "bound":
                if grid.obstructed:
                    row.append(0)
                elif grid.eta > max_eta:
                    row.append(None)
                else:
                    row.append(tiling_upper_bound(grid))
            elif grid.eta > budget_cells:
                row.append(None)
            else:
                try:
                    if mode == "count":
                        row.append(count_tilings(grid, budget_cells=budget_cells,
                                                 max_nodes=max_nodes, workers=workers))
                    else:
                        row.append(exists_tiling(grid, budget_cells=budget_cells,
                                                 max_nodes=max_nodes)[0])
                except BudgetExceeded:
                    row.append(None)
        rows.append(row)
    return rows


def tilings_to_json(tilings: list[Tiling]) -> str:
    return json.dumps([t.to_json_obj() for t in tilings])
