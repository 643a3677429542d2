"""Positive-integer sequences that label the levels of a cobweb poset.

A sequence is addressed by index ``n >= 0``.  Index 0 reports the root
convention of the source (0 for Fibonacci, 1 otherwise); consumers always
treat the root level as a single vertex and ``0_F! = 1``.

>>> make_builtin("fibonacci").term(6)
8
>>> parse_seq_spec("gauss:2").term(4)
15
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .exceptions import InvalidParameter, NonpositiveTerm, OutOfRange

KINDS = ("natural", "even", "odd", "mult", "fibonacci", "gauss", "const", "custom")

# Parameterised kinds take exactly one integer argument.
_PARAM_KINDS = {"mult": "k", "gauss": "q", "const": "c"}


@lru_cache(maxsize=None)
def _fib_pair(n: int) -> tuple[int, int]:
    # fast doubling: returns (F_n, F_{n+1})
    if n == 0:
        return 0, 1
    a, b = _fib_pair(n >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    if n & 1:
        return d, c + d
    return c, d


@dataclass(frozen=True)
class FSequence:
    """An immutable generator of the terms ``F_0, F_1, F_2, ...``.

    ``params`` holds the integer parameter of ``mult``/``gauss``/``const``;
    ``terms`` holds ``F_1..F_len`` for custom sequences.
    """

    name: str
    kind: str
    params: tuple[int, ...] = ()
    root_convention: int = 1
    terms: tuple[int, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown sequence kind {self.kind!r}")
        if self.root_convention not in (0, 1):
            raise InvalidParameter("root convention must be 0 or 1")

    @property
    def length(self) -> int | None:
        """Largest defined index, or None for unbounded generators."""
        return None if self.terms is None else len(self.terms)

    def term(self, n: int) -> int:
        if n < 0:
            raise InvalidParameter(f"index must be nonnegative, got {n}")
        if n == 0:
            return self.root_convention
        kind = self.kind
        if kind == "natural":
            return n
        if kind == "even":
            return 2 * n
        if kind == "odd":
            return 2 * n - 1
        if kind == "mult":
            return self.params[0] * n
        if kind == "fibonacci":
            return _fib_pair(n)[0]
        if kind == "gauss":
            q = self.params[0]
            return n if q == 1 else (q**n - 1) // (q - 1)
        if kind == "const":
            return self.params[0]
        if n > len(self.terms):
            raise OutOfRange(
                f"sequence {self.name!r} defines F_1..F_{len(self.terms)}, asked for F_{n}"
            )
        return self.terms[n - 1]

    __getitem__ = term

    def terms_upto(self, n: int) -> list[int]:
        """``[F_1, ..., F_n]``."""
        return [self.term(i) for i in range(1, n + 1)]

    def require(self, n: int) -> None:
        """Raise OutOfRange unless ``F_n`` is defined."""
        if self.terms is not None and n > len(self.terms):
            raise OutOfRange(
                f"sequence {self.name!r} defines F_1..F_{len(self.terms)}, needs F_{n}"
            )

    @property
    def spec(self) -> str:
        """The ``--seq`` string that recreates this sequence (custom: its name)."""
        if self.kind in _PARAM_KINDS:
            return f"{self.kind}:{self.params[0]}"
        return self.name


def term(F: FSequence, n: int) -> int:
    return F.term(n)


def make_builtin(kind: str, params: Sequence[int] = ()) -> FSequence:
    """Build one of the catalog sequences.

    ``kind`` accepts the long names too (``k-multiples``, ``gauss-q``,
    ``constant``).
    """
    kind = {"k-multiples": "mult", "gauss-q": "gauss", "constant": "const"}.get(kind, kind)
    if kind == "custom" or kind not in KINDS:
        raise InvalidParameter(f"unknown builtin sequence {kind!r}")
    params = tuple(int(p) for p in params)
    if kind in _PARAM_KINDS:
        if len(params) != 1:
            raise InvalidParameter(f"{kind} takes exactly one parameter ({_PARAM_KINDS[kind]})")
        if params[0] < 1:
            raise InvalidParameter(f"{kind}: {_PARAM_KINDS[kind]} must be >= 1, got {params[0]}")
        name = f"{kind}:{params[0]}"
    else:
        if params:
            raise InvalidParameter(f"{kind} takes no parameters")
        name = kind
    root = 0 if kind == "fibonacci" else 1
    return FSequence(name=name, kind=kind, params=params, root_convention=root)


def make_custom(terms: Sequence[int], root: int = 1, name: str = "custom") -> FSequence:
    """A finite sequence ``F_1..F_len`` given explicitly."""
    terms = tuple(int(t) for t in terms)
    for i, t in enumerate(terms, start=1):
        if t < 1:
            raise NonpositiveTerm(f"F_{i} = {t} is not positive")
    return FSequence(name=name, kind="custom", root_convention=root, terms=terms)


def parse_seq_spec(spec: str) -> FSequence:
    """Parse ``natural|even|odd|mult:k|fibonacci|gauss:q|const:c``."""
    kind, _, arg = spec.strip().partition(":")
    if arg:
        try:
            value = int(arg)
        except ValueError:
            raise InvalidParameter(f"bad parameter in sequence spec {spec!r}") from None
        return make_builtin(kind, [value])
    return make_builtin(kind)


def load_seq_file(path: str | os.PathLike) -> FSequence:
    """Read one positive integer per line; an optional first line ``root=0|1``."""
    root = 1
    terms = []
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if lines and lines[0].startswith("root="):
        try:
            root = int(lines[0][5:])
        except ValueError:
            raise InvalidParameter(f"bad root line {lines[0]!r}") from None
        lines = lines[1:]
    for ln in lines:
        try:
            terms.append(int(ln))
        except ValueError:
            raise InvalidParameter(f"not an integer: {ln!r}") from None
    return make_custom(terms, root=root, name=os.path.basename(os.fspath(path)))


# Sequences exercised whenever "every builtin" is meant.
BUILTIN_CATALOG: tuple[str, ...] = (
    "natural",
    "even",
    "odd",
    "mult:3",
    "fibonacci",
    "gauss:2",
    "gauss:3",
    "const:1",
    "const:2",
)


def builtin_catalog() -> list[FSequence]:
    return [parse_seq_spec(s) for s in BUILTIN_CATALOG]
