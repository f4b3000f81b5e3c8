"""Brute-force cross-checks that avoid the graph code entirely.

``brute_count`` enumerates words directly against the two lexicographic
constraints; ``orbit_survives`` iterates the map with a hole in exact arithmetic.
"""
from __future__ import annotations

from .errors import DomainError
from .expansion import t_step
from .field import FieldElement, MultinacciBeta
from .symbolic import EPSequence, distinct_shifts, lex_cmp

MAX_BRUTE_LEN = 24


def in_symbolic_survivor(x: EPSequence, lower: EPSequence, beta: MultinacciBeta) -> bool:
    """Every shift of ``x`` lies between ``lower`` and delta(beta), both inclusive."""
    delta = beta.delta
    return all(lex_cmp(s, lower) >= 0 and lex_cmp(s, delta) <= 0 for s in distinct_shifts(x))


def is_extendable(w: str, lower: EPSequence, beta: MultinacciBeta) -> bool:
    """Whether ``w`` is a prefix of some sequence in the symbolic survivor set.

    It suffices to try the sequences that follow ``w[:i]`` by delta itself, for
    every cut ``i`` where the rest of ``w`` already agrees with delta: delta is
    the largest admissible tail, so it can only help every lower constraint.
    """
    delta = beta.delta
    n = len(w)
    head = delta.take(n)
    for i in range(n, -1, -1):
        if w[i:] != head[: n - i]:
            continue
        if in_symbolic_survivor(EPSequence(w[:i] + delta.prefix, delta.period), lower, beta):
            return True
    return False


def _candidates(lower: EPSequence, beta: MultinacciBeta, n: int) -> list[str]:
    """Words of length n passing the necessary window tests at every position."""
    low = lower.take(n)
    high = beta.delta.take(n)
    out = []
    stack = [""]
    while stack:
        w = stack.pop()
        k = len(w)
        if k == n:
            out.append(w)
            continue
        for c in "01":
            x = w + c
            # every suffix starting at j must sit between the bounds' prefixes
            if all(low[: k + 1 - j] <= x[j:] <= high[: k + 1 - j] for j in range(k + 1)):
                stack.append(x)
    return out


def brute_words(lower: EPSequence, beta: MultinacciBeta, n: int) -> set[str]:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_BRUTE_LEN:
        raise DomainError(f"brute force is limited to n <= {MAX_BRUTE_LEN}")
    return {w for w in _candidates(lower, beta, n) if is_extendable(w, lower, beta)}


def brute_count(lower: EPSequence, beta: MultinacciBeta, n: int) -> int:
    """Number of length-n prefixes of the symbolic survivor set with floor ``lower``."""
    return len(brute_words(lower, beta, n))


def orbit_survives(x: FieldElement, t: FieldElement, beta: MultinacciBeta, n: int) -> bool:
    """True iff T^j(x) >= t for 0 <= j <= n."""
    x, t = beta(x), beta(t)
    for v in (x, t):
        if v.sign() < 0 or v >= 1:
            raise DomainError("x and t must lie in [0, 1)")
    for j in range(n + 1):
        if x < t:
            return False
        if j < n:
            x = t_step(x)[1]
    return True
