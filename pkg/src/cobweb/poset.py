"""Finite cobweb posets ``P_n`` as layered DAGs.

Level ``s`` holds the vertices ``<j, s>`` for ``1 <= j <= F_s``; the root
level always has one vertex, whatever the sequence says about ``F_0``.  Every
vertex of level ``p`` has an arc to every vertex of level ``p + 1``.

Vertices are ordered level-major, position-minor.  That order indexes the
incidence and Moebius matrices and is part of the external contract.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .combinatorics import f_factorial, f_falling, fnomial
from .exceptions import BudgetExceeded, InvalidParameter
from .sequences import FSequence

DEFAULT_VERTEX_BUDGET = 100_000
DEFAULT_MATRIX_BUDGET = 4_096
DEFAULT_BRUTE_CHAINS = 1_000_000

_INT64_SAFE = 2**62


class Vertex(NamedTuple):
    j: int  # 1-based position within the level
    s: int  # level

    def __str__(self) -> str:
        return f"<{self.j},{self.s}>"


def level_size(F: FSequence, s: int) -> int:
    return 1 if s == 0 else F.term(s)


@dataclass(frozen=True)
class CobwebPoset:
    sequence: FSequence
    top_level: int
    level_sizes: tuple[int, ...]

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out = [0]
        for size in self.level_sizes:
            out.append(out[-1] + size)
        return tuple(out)

    @property
    def order(self) -> int:
        return self.offsets[-1]

    @cached_property
    def levels(self) -> tuple[tuple[Vertex, ...], ...]:
        return tuple(
            tuple(Vertex(j, s) for j in range(1, size + 1))
            for s, size in enumerate(self.level_sizes)
        )

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(v for level in self.levels for v in level)

    def __contains__(self, v) -> bool:
        j, s = v
        return 0 <= s <= self.top_level and 1 <= j <= self.level_sizes[s]

    def index(self, v: Vertex) -> int:
        if v not in self:
            raise InvalidParameter(f"unknown vertex {tuple(v)}")
        return self.offsets[v[1]] + v[0] - 1

    def successors(self, v: Vertex) -> tuple[Vertex, ...]:
        s = v[1]
        return self.levels[s + 1] if s < self.top_level else ()

    def predecessors(self, v: Vertex) -> tuple[Vertex, ...]:
        s = v[1]
        return self.levels[s - 1] if s > 0 else ()

    def neighbors(self, v: Vertex) -> Iterator[Vertex]:
        yield from self.predecessors(v)
        yield from self.successors(v)

    def arcs(self) -> Iterator[tuple[Vertex, Vertex]]:
        for v in self.vertices:
            for w in self.successors(v):
                yield v, w

    @property
    def arc_count(self) -> int:
        return sum(len(self.successors(v)) for v in self.vertices)

    def rank(self, v: Vertex) -> int:
        return v[1]


def build(F: FSequence, n: int, max_vertices: int = DEFAULT_VERTEX_BUDGET) -> CobwebPoset:
    """Materialise ``P_n``, levels ``0..n``."""
    if n < 0:
        raise InvalidParameter(f"n must be nonnegative, got {n}")
    F.require(n)
    sizes = tuple(level_size(F, s) for s in range(n + 1))
    if sum(sizes) > max_vertices:
        raise BudgetExceeded(f"P_{n} has {sum(sizes)} vertices, budget is {max_vertices}")
    return CobwebPoset(F, n, sizes)


def edge_count(F: FSequence, k: int, m: int) -> int:
    """Arcs in the layer from level ``k`` to level ``k + m`` (closed form)."""
    if k < 0 or m < 1:
        raise InvalidParameter(f"need k >= 0 and m >= 1, got k={k}, m={m}")
    F.require(k + m)
    return sum(level_size(F, k + i) * level_size(F, k + i + 1) for i in range(m))


def layer_arc_count(P: CobwebPoset, k: int, n: int) -> int:
    """Arcs of the built poset whose endpoints both lie in levels ``k..n``."""
    return sum(len(P.successors(v)) for s in range(k, n) for v in P.levels[s])


# -- incidence algebra ----------------------------------------------------


def _check_matrix_budget(P: CobwebPoset, budget: int) -> None:
    if P.order > budget:
        raise BudgetExceeded(f"matrix order {P.order} exceeds budget {budget}")


def incidence_matrix(P: CobwebPoset, max_order: int = DEFAULT_MATRIX_BUDGET) -> np.ndarray:
    """0/1 matrix with ``zeta[x, y] = 1`` iff ``y`` is reachable from ``x`` (or ``x == y``)."""
    _check_matrix_budget(P, max_order)
    N = P.order
    reach = np.zeros((N, N), dtype=bool)
    # reverse topological order: everything above is already closed
    for v in reversed(P.vertices):
        i = P.index(v)
        reach[i, i] = True
        succ = [P.index(w) for w in P.successors(v)]
        if succ:
            reach[i] |= reach[succ].any(axis=0)
    return reach.astype(np.int64)


def exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integer matrix product with no overflow; returns an object array of ints."""
    a_bound = float(np.abs(a.astype(float)).sum(axis=1).max(initial=0))
    b_bound = float(np.abs(b.astype(float)).max(initial=0))
    if a_bound * b_bound < _INT64_SAFE:
        return (a.astype(np.int64) @ b.astype(np.int64)).astype(object)
    return a.astype(object) @ b.astype(object)


def mobius_matrix(P: CobwebPoset, max_order: int = DEFAULT_MATRIX_BUDGET) -> np.ndarray:
    """``mu = zeta^-1`` by back-substitution on the unit upper-triangular ``zeta``.

    Returns an object array of Python ints.  Columns are solved in int64 while
    a running magnitude bound says that is exact, then in Python ints.
    """
    zeta = incidence_matrix(P, max_order)
    N = zeta.shape[0]
    mu = np.zeros((N, N), dtype=np.int64)
    exact = False
    bound = 0.0
    for j in range(N):
        # mu[:, j] = e_j - mu[:, :j] @ zeta[:j, j]
        if not exact and bound * N >= _INT64_SAFE:
            mu = mu.astype(object)
            exact = True
        col = -(mu[:j, :j] @ zeta[:j, j].astype(mu.dtype)) if j else np.zeros(0, dtype=mu.dtype)
        mu[:j, j] = col
        mu[j, j] = 1
        if not exact:
            bound = max(bound, float(np.abs(col).max(initial=0)), 1.0)
    return mu.astype(object)


def mobius_recursive(P: CobwebPoset, max_order: int = DEFAULT_MATRIX_BUDGET) -> np.ndarray:
    """Moebius function from ``mu(x, x) = 1``, ``mu(x, y) = -sum_{x <= z < y} mu(x, z)``.

    Independent of :func:`mobius_matrix`; quadratic in the interval sizes, so
    only meant for small posets.
    """
    zeta = incidence_matrix(P, max_order)
    N = P.order
    mu = np.zeros((N, N), dtype=object)
    for x in range(N):
        mu[x, x] = 1
        for y in range(x + 1, N):
            if zeta[x, y]:
                mu[x, y] = -sum(mu[x, z] for z in range(x, y) if zeta[x, z] and zeta[z, y])
    return mu


def characteristic_polynomial(P: CobwebPoset, max_order: int = DEFAULT_MATRIX_BUDGET) -> list[int]:
    """Coefficients of ``sum_x mu(root, x) * t^(n - rank x)``, lowest degree first."""
    mu = mobius_matrix(P, max_order)
    n = P.top_level
    coeffs = [0] * (n + 1)
    for v in P.vertices:
        coeffs[n - v.s] += int(mu[0, P.index(v)])
    return coeffs


def format_polynomial(coeffs: list[int], var: str = "x") -> str:
    """Conventional notation, highest degree first: ``x^2 - x``."""
    terms = []
    for deg in range(len(coeffs) - 1, -1, -1):
        c = coeffs[deg]
        if c == 0:
            continue
        mag = abs(c)
        if deg == 0:
            body = str(mag)
        else:
            power = var if deg == 1 else f"{var}^{deg}"
            body = power if mag == 1 else f"{mag}*{power}"
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(terms) if terms else "0"


# -- chains ---------------------------------------------------------------

CHAIN_MODES = ("formula", "dp", "brute")


def count_chains(
    F: FSequence,
    k: int,
    n: int,
    mode: str = "formula",
    *,
    max_chains: int = DEFAULT_BRUTE_CHAINS,
    max_vertices: int = DEFAULT_VERTEX_BUDGET,
) -> int:
    """Maximal chains from the fixed vertex ``<1, k>`` up to level ``n``.

    ``formula`` is the falling factorial ``F_n ... F_{k+1}``; ``dp`` propagates
    per-vertex path counts level by level; ``brute`` walks every path of the
    built DAG and gives up past ``max_chains``.
    """
    if not 0 <= k <= n:
        raise InvalidParameter(f"need 0 <= k <= n, got k={k}, n={n}")
    if mode == "formula":
        return f_falling(F, n, n - k)
    if mode == "dp":
        F.require(n)
        # paths reaching one vertex of level s; uniform across the level
        per_vertex = 1
        for s in range(k + 1, n):
            per_vertex *= level_size(F, s)
        return per_vertex * level_size(F, n) if n > k else 1
    if mode == "brute":
        return _brute_chains(build(F, n, max_vertices), k, n, max_chains)
    raise InvalidParameter(f"unknown chain mode {mode!r}")


def _brute_chains(P: CobwebPoset, k: int, n: int, max_chains: int) -> int:
    count = 0
    stack = [Vertex(1, k)]
    while stack:
        v = stack.pop()
        if v.s == n:
            count += 1
            if count > max_chains:
                raise BudgetExceeded(f"more than {max_chains} chains; brute mode refused")
            continue
        stack.extend(P.successors(v))
    return count


@dataclass(frozen=True)
class IdentityCheck:
    holds: bool
    lhs: object
    rhs: object

    def __bool__(self) -> bool:
        return self.holds

    @property
    def diagnostic(self) -> str:
        return "ok" if self.holds else f"{self.lhs} != {self.rhs}"


def verify_layer_chain_identity(F: FSequence, k: int, n: int) -> IdentityCheck:
    """Check ``fnomial(n, k) * (n-k)_F! == n_F^(n-k)`` in exact arithmetic."""
    lhs = fnomial(F, n, k) * f_factorial(F, n - k)
    rhs = f_falling(F, n, n - k)
    return IdentityCheck(lhs == rhs, lhs, rhs)


# -- domination -----------------------------------------------------------


def is_dominating(P: CobwebPoset, D: Iterable) -> bool:
    """Every vertex is in ``D`` or shares an arc (either direction) with it."""
    members = set()
    for v in D:
        v = Vertex(*v)
        if v not in P:
            raise InvalidParameter(f"unknown vertex {tuple(v)}")
        members.add(v)
    return _first_undominated(P, members) is None


def _first_undominated(P: CobwebPoset, members: set) -> Vertex | None:
    for v in P.vertices:
        if v in members:
            continue
        if not any(w in members for w in P.neighbors(v)):
            return v
    return None


@dataclass(frozen=True)
class DomaticVerdict:
    modulus: int
    holds: bool
    classes: tuple[tuple[int, ...], ...]  # level indices per residue class
    failures: dict[int, Vertex]  # residue -> first undominated vertex

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "holds": self.holds,
            "classes": [list(c) for c in self.classes],
            "failures": [
                {"class": r, "vertex": list(v)} for r, v in sorted(self.failures.items())
            ],
        }


def domatic_mod_check(P: CobwebPoset, modulus: int) -> DomaticVerdict:
    """Split the levels by index mod ``modulus`` and test each class for domination."""
    if modulus < 2:
        raise InvalidParameter("modulus must be >= 2")
    if P.top_level + 1 < modulus + 1:
        raise InvalidParameter(
            f"P_{P.top_level} has {P.top_level + 1} levels, need at least {modulus + 1}"
        )
    classes = tuple(
        tuple(s for s in range(P.top_level + 1) if s % modulus == r) for r in range(modulus)
    )
    failures = {}
    for r, levels in enumerate(classes):
        members = {v for s in levels for v in P.levels[s]}
        bad = _first_undominated(P, members)
        if bad is not None:
            failures[r] = bad
    return DomaticVerdict(modulus, not failures, classes, failures)


# -- export ---------------------------------------------------------------

EXPORT_FORMATS = ("dot", "json", "csv-matrix")


def _node_id(v: Vertex) -> str:
    return f"v{v.j}_{v.s}"


def export(P: CobwebPoset, fmt: str, max_order: int = DEFAULT_MATRIX_BUDGET) -> str:
    """Serialise ``P`` deterministically as DOT, JSON or a 0/1 CSV incidence matrix."""
    if fmt == "dot":
        out = io.StringIO()
        out.write(f'digraph "{P.sequence.name} P_{P.top_level}" {{\n')
        out.write("  rankdir=BT;\n")
        for v in P.vertices:
            out.write(f'  {_node_id(v)} [label="<{v.j},{v.s}>"];\n')
        for s, level in enumerate(P.levels):
            out.write(f"  {{rank=same; {' '.join(_node_id(v) for v in level)};}}\n")
        for v, w in P.arcs():
            out.write(f"  {_node_id(v)} -> {_node_id(w)};\n")
        out.write("}\n")
        return out.getvalue()
    if fmt == "json":
        payload = {
            "sequence": P.sequence.name,
            "top_level": P.top_level,
            "level_sizes": list(P.level_sizes),
            "vertices": [list(v) for v in P.vertices],
            "arcs": [[list(v), list(w)] for v, w in P.arcs()],
        }
        return json.dumps(payload) + "\n"
    if fmt == "csv-matrix":
        zeta = incidence_matrix(P, max_order)
        return "".join(",".join(str(int(x)) for x in row) + "\n" for row in zeta)
    raise InvalidParameter(f"unknown export format {fmt!r}")
