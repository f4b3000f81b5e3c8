"""Binary words and eventually periodic sequences.

Words are plain ``str`` objects over ``"0"``/``"1"``; Python's string order is
the lexicographic order on words of equal length.  Infinite sequences are
:class:`EPSequence` values ``u v v v ...`` kept in canonical form (primitive
period, shortest preperiod), so ``==`` is equality of infinite sequences.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from math import lcm

_DIGITS = frozenset("01")
_LITERAL = re.compile(r"^([01]*)\(([01]+)\)$")


def check_word(w: str) -> str:
    if not isinstance(w, str) or not _DIGITS.issuperset(w):
        raise ValueError(f"not a binary word: {w!r}")
    return w


def primitive_root(v: str) -> str:
    """Shortest word ``r`` with ``v == r * k``."""
    n = len(v)
    for d in range(1, n + 1):
        if n % d == 0 and v[:d] * (n // d) == v:
            return v[:d]
    return v


def canonical(prefix: str, period: str) -> tuple[str, str]:
    period = primitive_root(period)
    # Rolling the last preperiod digit into the period keeps it primitive.
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = period[-1] + period[:-1]
    return prefix, period


@total_ordering
@dataclass(frozen=True)
class EPSequence:
    """The infinite sequence ``prefix + period + period + ...``."""

    prefix: str = ""
    period: str = "0"

    def __post_init__(self) -> None:
        check_word(self.prefix)
        check_word(self.period)
        if not self.period:
            raise ValueError("period must be nonempty")
        u, v = canonical(self.prefix, self.period)
        object.__setattr__(self, "prefix", u)
        object.__setattr__(self, "period", v)

    @classmethod
    def periodic(cls, word: str) -> EPSequence:
        return cls("", word)

    @classmethod
    def finite(cls, word: str) -> EPSequence:
        """``word`` followed by ``0^inf``."""
        return cls(word, "0")

    @classmethod
    def parse(cls, text: str) -> EPSequence:
        """Parse the literal ``u(v)``, e.g. ``(001)`` or ``01(0)``."""
        match = _LITERAL.match(text.strip())
        if match is None:
            raise ValueError(f"bad sequence literal {text!r}; expected u(v) such as 01(0)")
        return cls(match.group(1), match.group(2))

    def __str__(self) -> str:
        return f"{self.prefix}({self.period})"

    def __repr__(self) -> str:
        return f"EPSequence({str(self)!r})"

    def __len__(self) -> int:
        # Number of distinct shifts; see distinct_shifts.
        return len(self.prefix) + len(self.period)

    @property
    def is_purely_periodic(self) -> bool:
        return not self.prefix

    @property
    def ends_in_zeros(self) -> bool:
        return self.period == "0"

    def digit(self, i: int) -> int:
        """Digit at 0-based position ``i``."""
        u, v = self.prefix, self.period
        if i < len(u):
            return int(u[i])
        return int(v[(i - len(u)) % len(v)])

    def take(self, n: int) -> str:
        """The first ``n`` digits as a word."""
        u, v = self.prefix, self.period
        if n <= len(u):
            return u[:n]
        rest = n - len(u)
        return u + v * (rest // len(v)) + v[: rest % len(v)]

    def __lt__(self, other: EPSequence) -> bool:
        return lex_cmp(self, other) < 0


@dataclass(frozen=True)
class TruncatedWord:
    """A finite prefix of a sequence whose period was not found within ``horizon`` steps."""

    digits: str
    horizon: int

    def __str__(self) -> str:
        return f"{self.digits}..."


def lex_cmp(a: EPSequence, b: EPSequence) -> int:
    """Compare two infinite sequences lexicographically; returns -1, 0 or 1.

    Past ``max(|u_a|, |u_b|) + lcm(|v_a|, |v_b|)`` digits both tails are
    periodic with a common period, so the comparison is decided by then.
    """
    if a == b:
        return 0
    n = max(len(a.prefix), len(b.prefix)) + lcm(len(a.period), len(b.period))
    x, y = a.take(n), b.take(n)
    return (x > y) - (x < y)


def shift(a: EPSequence, n: int = 1) -> EPSequence:
    if n < 0:
        raise ValueError("shift amount must be nonnegative")
    u, v = a.prefix, a.period
    if n < len(u):
        return EPSequence(u[n:], v)
    r = (n - len(u)) % len(v)
    return EPSequence("", v[r:] + v[:r])


def distinct_shifts(a: EPSequence) -> list[EPSequence]:
    """All ``shift(a, n)``, ``n >= 0``; exactly ``|u| + |v|`` of them in canonical form."""
    return [shift(a, n) for n in range(len(a))]


def reflect(w: str) -> str:
    return w.translate(str.maketrans("01", "10"))


def pad_cmp(x: str, y: str) -> int:
    """Compare finite words as ``x 0^inf`` against ``y 0^inf``."""
    n = max(len(x), len(y))
    x, y = x.ljust(n, "0"), y.ljust(n, "0")
    return (x > y) - (x < y)
