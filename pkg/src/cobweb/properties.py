"""Bounded checks and searches for cobweb-admissible and GCD-morphic sequences.

Both properties are open to characterise in general.  What lives here is an
experimental instrument: a verdict is only ever claimed up to the tested
index, and searches only cover the box of term values they were given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from math import gcd
from typing import Any, Sequence

from ._parallel import ordered_map
from .combinatorics import format_fraction
from .exceptions import BudgetExceeded, InvalidParameter
from .sequences import FSequence, make_custom

ADMISSIBLE = "cobweb-admissible"
GCD_MORPHIC = "gcd-morphic"

DEFAULT_MAX_LEN = 8
DEFAULT_MAX_TERM = 30


@dataclass(frozen=True)
class PropertyVerdict:
    property: str
    holds: bool
    bound: int
    witness: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        witness = None
        if self.witness is not None:
            witness = {
                key: format_fraction(val) if isinstance(val, Fraction) else val
                for key, val in self.witness.items()
            }
        return {
            "property": self.property,
            "holds": self.holds,
            "bound": self.bound,
            "witness": witness,
        }


@dataclass(frozen=True)
class SearchReport:
    property: str
    max_len: int
    max_term: int
    found: list[list[int]] = field(default_factory=list)
    exhausted: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "property": self.property,
            "constraints": {"max_len": self.max_len, "max_term": self.max_term},
            "found": self.found,
            "exhausted": self.exhausted,
        }


def check_admissible(F: FSequence, N: int) -> PropertyVerdict:
    """Integrality of every F-nomial with ``0 <= k <= n <= N``.

    The witness is the lexicographically smallest failing ``(n, k)`` together
    with the reduced fraction.
    """
    if N < 1:
        raise InvalidParameter("N must be positive")
    F.require(N)
    facts = [1]
    for n in range(1, N + 1):
        facts.append(facts[-1] * F.term(n))
        for k in range(1, n):
            value = Fraction(facts[n], facts[k] * facts[n - k])
            if value.denominator != 1:
                return PropertyVerdict(ADMISSIBLE, False, N, {"n": n, "k": k, "value": value})
    return PropertyVerdict(ADMISSIBLE, True, N)


def gcd_pair_holds(F: FSequence, n: int, m: int) -> bool:
    return gcd(F.term(n), F.term(m)) == F.term(gcd(n, m))


def check_gcd_morphic(F: FSequence, N: int) -> PropertyVerdict:
    """``gcd(F_n, F_m) == F_gcd(n,m)`` for all ``1 <= m <= n <= N``.

    Pairs are scanned with ``n`` ascending, then ``m`` ascending; the first
    violation is the witness.  ``F_0`` never enters the check.
    """
    if N < 1:
        raise InvalidParameter("N must be positive")
    F.require(N)
    terms = [None] + F.terms_upto(N)
    for n in range(1, N + 1):
        for m in range(1, n + 1):
            g = gcd(terms[n], terms[m])
            expected = terms[gcd(n, m)]
            if g != expected:
                return PropertyVerdict(
                    GCD_MORPHIC, False, N, {"n": n, "m": m, "gcd": g, "expected": expected}
                )
    return PropertyVerdict(GCD_MORPHIC, True, N)


# -- searches -------------------------------------------------------------


def _admissible_extends(prefix: list[int], facts: list[int]) -> bool:
    # facts[i] = F_1...F_i for the prefix without its last term
    j = len(prefix)
    top = facts[-1] * prefix[-1]
    return all(top % (facts[k] * facts[j - k]) == 0 for k in range(1, j))


def _gcd_extends(prefix: list[int]) -> bool:
    j = len(prefix)
    last = prefix[-1]
    return all(gcd(last, prefix[m - 1]) == prefix[gcd(j, m) - 1] for m in range(1, j))


def _dfs(prop: str, prefix: list[int], max_len: int, max_term: int) -> list[list[int]]:
    found: list[list[int]] = []
    facts = [1]
    for t in prefix:
        facts.append(facts[-1] * t)

    def visit():
        if len(prefix) == max_len:
            found.append(list(prefix))
            return
        for t in range(1, max_term + 1):
            prefix.append(t)
            ok = _admissible_extends(prefix, facts) if prop == ADMISSIBLE else _gcd_extends(prefix)
            if ok:
                facts.append(facts[-1] * t)
                visit()
                facts.pop()
            prefix.pop()

    visit()
    return found


def _prefix_ok(prop: str, prefix: Sequence[int]) -> bool:
    if not prefix:
        return True
    F = make_custom(prefix)
    check = check_admissible if prop == ADMISSIBLE else check_gcd_morphic
    return check(F, len(prefix)).holds


def _search(
    prop: str,
    max_len: int,
    max_term: int,
    start_prefix: Sequence[int] | None,
    max_len_ceiling: int,
    max_term_ceiling: int,
    workers: int,
) -> SearchReport:
    if max_len < 1 or max_term < 1:
        raise InvalidParameter("max_len and max_term must be positive")
    if max_len > max_len_ceiling or max_term > max_term_ceiling:
        raise BudgetExceeded(
            f"search box ({max_len}, {max_term}) exceeds ceiling "
            f"({max_len_ceiling}, {max_term_ceiling})"
        )
    prefix = [int(t) for t in (start_prefix or [])]
    if any(t < 1 for t in prefix):
        raise InvalidParameter("start prefix terms must be positive")
    if len(prefix) > max_len or not _prefix_ok(prop, prefix):
        return SearchReport(prop, max_len, max_term, [], True)
    if len(prefix) == max_len:
        return SearchReport(prop, max_len, max_term, [prefix], True)

    # one branch per choice of the next term; merged in branch order
    branches = []
    for t in range(1, max_term + 1):
        candidate = prefix + [t]
        facts = [1]
        for x in prefix:
            facts.append(facts[-1] * x)
        ok = _admissible_extends(candidate, facts) if prop == ADMISSIBLE else _gcd_extends(candidate)
        if ok:
            branches.append(candidate)
    results = ordered_map(
        partial(_dfs_entry, prop, max_len, max_term), branches, workers
    )
    found = [seq for chunk in results for seq in chunk]
    return SearchReport(prop, max_len, max_term, found, True)


def _dfs_entry(prop: str, max_len: int, max_term: int, prefix: list[int]) -> list[list[int]]:
    return _dfs(prop, list(prefix), max_len, max_term)


def search_admissible(
    max_len: int,
    max_term: int,
    start_prefix: Sequence[int] | None = None,
    *,
    max_len_ceiling: int = DEFAULT_MAX_LEN,
    max_term_ceiling: int = DEFAULT_MAX_TERM,
    workers: int = 1,
) -> SearchReport:
    """All admissible ``[F_1..F_max_len]`` with terms in ``1..max_term``, lexicographic.

    Prefixes are extended depth-first and dropped as soon as a new F-nomial
    fails to be integral.
    """
    return _search(
        ADMISSIBLE, max_len, max_term, start_prefix, max_len_ceiling, max_term_ceiling, workers
    )


def search_gcd_morphic(
    max_len: int,
    max_term: int,
    start_prefix: Sequence[int] | None = None,
    *,
    max_len_ceiling: int = DEFAULT_MAX_LEN,
    max_term_ceiling: int = DEFAULT_MAX_TERM,
    workers: int = 1,
) -> SearchReport:
    """All GCD-morphic ``[F_1..F_max_len]`` with terms in ``1..max_term``, lexicographic."""
    return _search(
        GCD_MORPHIC, max_len, max_term, start_prefix, max_len_ceiling, max_term_ceiling, workers
    )
