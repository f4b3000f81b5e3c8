"""Survivor subshifts as higher-block graphs: construction, transitivity, entropy, counting.

The symbolic survivor set for a floor ``s 0^inf`` (or ``s^inf``) with ``s`` a
beta-Lyndon word of length ``p`` is the set of sequences whose every
``p``-block is ``>= s`` and which avoid ``1^(m+1)``.  It is presented on the
admissible ``(k-1)``-blocks, ``k = max(p, m+1)``; an edge ``u -> v`` is a
``k``-block whose first ``k-1`` digits are ``u`` and last ``k-1`` are ``v``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix, identity
from scipy.sparse.csgraph import connected_components

from .errors import DomainError
from .field import MultinacciBeta
from .lyndon import has_suffix_property
from .symbolic import EPSequence, TruncatedWord

DEFAULT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SurvivorSFT:
    block_len: int
    states: tuple[str, ...]
    succ: tuple[tuple[int, ...], ...]
    lower: EPSequence | None = None
    beta: MultinacciBeta | None = None
    floor_word: str | None = None
    exact: bool = True
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_edges(cls, block_len: int, states, edges, **kw) -> SurvivorSFT:
        """Build from explicit ``(i, j)`` index pairs (for hand-made graphs)."""
        succ = [[] for _ in states]
        for i, j in edges:
            succ[i].append(j)
        return cls(block_len, tuple(states), tuple(tuple(sorted(s)) for s in succ), **kw)

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, out in enumerate(self.succ) for j in out]

    def adjacency(self) -> csr_matrix:
        if "adj" not in self._cache:
            n = self.num_states
            rows, cols = zip(*self.edges) if self.edges else ((), ())
            self._cache["adj"] = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
        return self._cache["adj"]

    def is_essential(self) -> bool:
        indeg = [0] * self.num_states
        for i, j in self.edges:
            indeg[j] += 1
        return all(self.succ) and all(indeg)

    def to_dot(self) -> str:
        lines = ["digraph sft {"]
        for i, s in enumerate(self.states):
            lines.append(f'  n{i} [label="{s}"];')
        for i, j in self.edges:
            lines.append(f'  n{i} -> n{j} [label="{self.states[j][-1] if self.states[j] else ""}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def essential_part(sft: SurvivorSFT) -> SurvivorSFT:
    """Iteratively drop states with no successor or no predecessor."""
    alive = set(range(sft.num_states))
    while True:
        indeg = dict.fromkeys(alive, 0)
        outdeg = dict.fromkeys(alive, 0)
        for i in alive:
            for j in sft.succ[i]:
                if j in alive:
                    outdeg[i] += 1
                    indeg[j] += 1
        dead = {i for i in alive if not indeg[i] or not outdeg[i]}
        if not dead:
            break
        alive -= dead
    keep = sorted(alive, key=lambda i: sft.states[i])
    index = {old: new for new, old in enumerate(keep)}
    succ = tuple(tuple(sorted(index[j] for j in sft.succ[i] if j in index)) for i in keep)
    return SurvivorSFT(
        sft.block_len,
        tuple(sft.states[i] for i in keep),
        succ,
        sft.lower,
        sft.beta,
        sft.floor_word,
        sft.exact,
    )


def floor_word(lower: EPSequence) -> tuple[str, bool]:
    """The word ``s`` whose p-block constraint models ``lower``, and whether that model is exact."""
    if lower.ends_in_zeros:
        s = lower.prefix or "0"
    elif lower.is_purely_periodic:
        s = lower.period
    else:
        s = lower.prefix + lower.period
        return s, False
    return s, s == "0" or has_suffix_property(s)


def _admissible_blocks(length: int, s: str, run: int | None) -> list[str]:
    p = len(s)
    forbidden = "1" * run if run else None
    out = []
    stack = [""]
    while stack:
        w = stack.pop()
        if len(w) == length:
            out.append(w)
            continue
        for c in "10":
            x = w + c
            if forbidden and x.endswith(forbidden):
                continue
            if len(x) >= p and x[-p:] < s:
                continue
            stack.append(x)
    return sorted(out)


def build_survivor_sft(lower: EPSequence | TruncatedWord, beta: MultinacciBeta) -> SurvivorSFT:
    """Survivor SFT for the floor ``lower``; pruned to its essential part.

    Exact when ``lower`` is ``s 0^inf`` or ``s^inf`` with ``s`` having the
    Lyndon suffix property; for other eventually periodic floors the p-block
    model with ``s = u v`` is a one-sided (outer) approximation, flagged by
    ``exact=False``.
    """
    if not isinstance(lower, EPSequence):
        raise DomainError("the floor must be an eventually periodic sequence")
    s, exact = floor_word(lower)
    run = beta.upper_run
    k = max(len(s), run or 0, 2)
    states = _admissible_blocks(k - 1, s, run)
    index = {w: i for i, w in enumerate(states)}
    succ = []
    for u in states:
        out = []
        for c in "01":
            merged = u + c
            if run and merged.endswith("1" * run):
                continue
            if merged[-len(s):] < s:
                continue
            j = index.get(merged[1:])
            if j is not None:
                out.append(j)
        succ.append(tuple(out))
    raw = SurvivorSFT(k, tuple(states), tuple(succ), lower, beta, s, exact)
    return essential_part(raw)


def build_raw_sft(lower: EPSequence, beta: MultinacciBeta) -> SurvivorSFT:
    """Same graph as :func:`build_survivor_sft` before essential pruning."""
    s, exact = floor_word(lower)
    run = beta.upper_run
    k = max(len(s), run or 0, 2)
    states = _admissible_blocks(k - 1, s, run)
    index = {w: i for i, w in enumerate(states)}
    admissible = set(_admissible_blocks(k, s, run))
    succ = tuple(
        tuple(index[(u + c)[1:]] for c in "01" if u + c in admissible and (u + c)[1:] in index) for u in states
    )
    return SurvivorSFT(k, tuple(states), succ, lower, beta, s, exact)


def strongly_connected_components(sft: SurvivorSFT) -> list[list[int]]:
    if not sft.num_states:
        return []
    n, labels = connected_components(sft.adjacency(), directed=True, connection="strong")
    comps: list[list[int]] = [[] for _ in range(n)]
    for i, c in enumerate(labels):
        comps[c].append(i)
    return comps


def is_transitive(sft: SurvivorSFT) -> bool:
    """Strong connectivity of the (essential) graph."""
    return sft.num_states > 0 and len(strongly_connected_components(sft)) == 1


@dataclass(frozen=True)
class EntropyBounds:
    """log of the Perron root with certified bounds ``lo <= value <= hi``."""

    value: float
    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo


EMPTY_ENTROPY = EntropyBounds(-math.inf, -math.inf, -math.inf)


def _collatz_wielandt(succ_local: list[list[int]], x: np.ndarray) -> tuple[Fraction, Fraction]:
    """Exact min/max of (Ax)_i / x_i for a positive float vector x.

    Any positive x brackets the Perron root of an irreducible A; the floats are
    turned into integers over a common power-of-two denominator, so the ratios
    carry no rounding error.
    """
    ratios = [v.as_integer_ratio() for v in x.tolist()]
    den = max(d for _, d in ratios)
    xi = [num * (den // d) for num, d in ratios]
    lo = hi = None
    for i, out in enumerate(succ_local):
        r = Fraction(sum(xi[j] for j in out), xi[i])
        if lo is None or r < lo:
            lo = r
        if hi is None or r > hi:
            hi = r
    return lo, hi


def _perron_bounds(succ_local: list[list[int]], tol: float, max_iter: int = 200_000) -> tuple[float, float]:
    n = len(succ_local)
    rows = [i for i, out in enumerate(succ_local) for _ in out]
    cols = [j for out in succ_local for j in out]
    a = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    # A + I is primitive for irreducible A, so the iteration converges even when A is periodic.
    shifted = a + identity(n, format="csr")
    x = np.ones(n)
    rel = tol / 4
    for it in range(max_iter):
        x = shifted @ x
        x /= x.max()
        if it % 16 == 15:
            y = a @ x
            r = y / x
            if r.max() - r.min() <= rel * r.min():
                break
    x = np.where(np.isfinite(x) & (x > 0), x, np.finfo(float).tiny)
    lo, hi = _collatz_wielandt(succ_local, x)
    return float(lo), float(hi)


def _down(v: float) -> float:
    return math.nextafter(math.nextafter(v, -math.inf), -math.inf)


def _up(v: float) -> float:
    return math.nextafter(math.nextafter(v, math.inf), math.inf)


def entropy_spectral(sft: SurvivorSFT, tol: float = DEFAULT_TOL) -> EntropyBounds:
    """Topological entropy as log of the Perron root, maximised over strongly connected components."""
    key = ("entropy", tol)
    if key in sft._cache:
        return sft._cache[key]
    found = []
    for comp in strongly_connected_components(sft):
        local = {g: i for i, g in enumerate(comp)}
        succ_local = [[local[j] for j in sft.succ[g] if j in local] for g in comp]
        if not any(succ_local):
            continue  # a single state without a self-loop carries no entropy
        if len(comp) == 1:
            found.append((0.0, 0.0))  # one self-loop: Perron root exactly 1
            continue
        lo, hi = _perron_bounds(succ_local, tol)
        found.append((_down(math.log(_down(lo))), _up(math.log(_up(hi)))))
    if found:
        lo = max(f[0] for f in found)
        hi = max(f[1] for f in found)
        best = EntropyBounds((lo + hi) / 2, lo, hi)
    else:
        best = EMPTY_ENTROPY
    sft._cache[key] = best
    return best


def count_blocks(sft: SurvivorSFT, n: int) -> int:
    """Exact number of length-n words in the walk language."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k1 = sft.block_len - 1
    if n <= k1:
        return len({s[:n] for s in sft.states})
    counts = [1] * sft.num_states
    for _ in range(n - k1):
        counts = [sum(counts[j] for j in out) for out in sft.succ]
    return sum(counts)


def blocks(sft: SurvivorSFT, n: int) -> set[str]:
    """The set of length-n words in the walk language."""
    k1 = sft.block_len - 1
    if n <= k1:
        return {s[:n] for s in sft.states}
    out = set()
    stack = [(i, sft.states[i]) for i in range(sft.num_states)]
    while stack:
        i, w = stack.pop()
        if len(w) == n:
            out.add(w)
            continue
        for j in sft.succ[i]:
            stack.append((j, w + sft.states[j][-1]))
    return out


def sft_equal(a: SurvivorSFT, b: SurvivorSFT) -> bool:
    """Equality of walk languages, via their block sets at the larger block length."""
    k = max(a.block_len, b.block_len)
    return blocks(a, k) == blocks(b, k)


@lru_cache(maxsize=4096)
def survivor_sft_for_word(beta: MultinacciBeta, word: str) -> SurvivorSFT:
    """Cached SFT for the floor ``word 0^inf`` (equal to the one for ``word^inf``)."""
    return build_survivor_sft(EPSequence.finite(word), beta)
