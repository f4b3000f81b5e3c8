"""beta-Lyndon words, their intervals [t_L, t_R), enumeration and audits."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cmp_to_key

from .errors import DomainError, HypothesisViolation, InvariantViolation
from .expansion import eval_expansion, is_greedy_admissible, word_value
from .field import FieldElement, MultinacciBeta
from .symbolic import EPSequence, check_word, distinct_shifts, lex_cmp, pad_cmp


def has_suffix_property(w: str) -> bool:
    """Every proper suffix of ``w`` is strictly greater than the prefix of the same length."""
    p = len(w)
    return all(w[i:] > w[: p - i] for i in range(1, p))


def is_lyndon_word(w: str, beta: MultinacciBeta) -> bool:
    check_word(w)
    if not w:
        raise ValueError("a beta-Lyndon word is nonempty")
    return has_suffix_property(w) and is_greedy_admissible(EPSequence.periodic(w), beta)


@dataclass(frozen=True)
class LyndonInterval:
    word: str
    t_left: FieldElement
    t_right: FieldElement

    @property
    def beta(self) -> MultinacciBeta:
        return self.t_left.beta

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def is_degenerate(self) -> bool:
        return self.word == "0"

    def contains(self, t: FieldElement, closed: bool = False) -> bool:
        if t < self.t_left:
            return False
        return t <= self.t_right if closed else t < self.t_right

    def to_json(self, digits: int = 30) -> dict:
        return {
            "word": self.word,
            "length": self.length,
            "t_left": self.t_left.to_json(digits),
            "t_right": self.t_right.to_json(digits),
        }


def make_interval(w: str, beta: MultinacciBeta) -> LyndonInterval:
    if not is_lyndon_word(w, beta):
        raise DomainError(f"{w!r} is not a beta-Lyndon word")
    t_left = word_value(beta, w)
    bp = beta.gen ** len(w)
    t_right = t_left * bp / (bp - 1)
    if t_right != eval_expansion(beta, EPSequence.periodic(w)):
        raise InvariantViolation(f"endpoint formulas disagree for {w!r}")
    return LyndonInterval(w, t_left, t_right)


def _lyndon_words_from(prefix: str, max_len: int, run: int | None) -> list[str]:
    """Depth-first scan below ``prefix`` for words with the suffix property.

    A prefix with a suffix strictly below the same-length prefix stays that way
    under every extension, as does a prefix containing the forbidden run of 1s.
    """
    out = []
    forbidden = "1" * run if run else None
    stack = [prefix]
    while stack:
        w = stack.pop()
        if forbidden and forbidden in w:
            continue
        p = len(w)
        dead = False
        strict = True
        for i in range(1, p):
            s, q = w[i:], w[: p - i]
            if s < q:
                dead = True
                break
            if s == q:
                strict = False
        if dead:
            continue
        if strict:
            out.append(w)
        if p < max_len:
            stack.append(w + "1")
            stack.append(w + "0")
    return out


def sort_intervals(ivs) -> list[LyndonInterval]:
    """Sort by t_left.

    The greedy expansion of t_left is ``word 0^inf`` and b(., beta) is strictly
    increasing, so comparing padded words is an exact comparison of t_left.
    """
    return sorted(ivs, key=cmp_to_key(lambda a, b: pad_cmp(a.word, b.word)))


def _words_job(args) -> list[str]:
    beta, prefix, max_len = args
    return [w for w in _lyndon_words_from(prefix, max_len, beta.upper_run) if is_lyndon_word(w, beta)]


def lyndon_words(beta: MultinacciBeta, max_len: int, jobs: int = 1) -> list[str]:
    """All beta-Lyndon words of length <= max_len (including the degenerate "0")."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    # Words starting with 1 never qualify: the last digit would have to exceed 1,
    # and 1^inf is never below delta(beta).
    if jobs <= 1 or max_len < 8:
        return _words_job((beta, "0", max_len))
    split = 5
    shallow = [w for w in _lyndon_words_from("0", split - 1, beta.upper_run) if is_lyndon_word(w, beta)]
    prefixes = []
    stack = ["0"]
    while stack:
        w = stack.pop()
        if len(w) == split:
            prefixes.append(w)
        else:
            stack.extend([w + "0", w + "1"])
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_words_job, [(beta, p, max_len) for p in sorted(prefixes)])
        deep = [w for part in parts for w in part]
    return shallow + deep


_ENUMERATED: dict[tuple, tuple[LyndonInterval, ...]] = {}


def enumerate_lyndon(beta: MultinacciBeta, max_len: int, jobs: int = 1) -> tuple[LyndonInterval, ...]:
    """Nondegenerate beta-Lyndon intervals with word length <= max_len, sorted by t_left.

    Results are cached per (beta, max_len) whatever ``jobs`` was used.
    """
    key = (beta.order, max_len)
    if key not in _ENUMERATED:
        words = [w for w in lyndon_words(beta, max_len, jobs) if w != "0"]
        _ENUMERATED[key] = tuple(sort_intervals(make_interval(w, beta) for w in words))
    return _ENUMERATED[key]


def find_overlap(ivs, closed: bool = False) -> tuple[LyndonInterval, LyndonInterval] | None:
    """First pair of neighbours (after sorting by t_left) that intersect, else None.

    Half-open intervals need ``t_right <= next t_left``; closed ones need ``<``.
    """
    ordered = sorted(ivs, key=cmp_to_key(lambda a, b: (a.t_left - b.t_left).sign()))
    for a, b in zip(ordered, ordered[1:]):
        gap = (b.t_left - a.t_right).sign()
        if gap < 0 or (closed and gap == 0):
            return a, b
    return None


def verify_disjoint(ivs, closed: bool = False):
    """True when pairwise disjoint, otherwise the offending pair."""
    pair = find_overlap(ivs, closed)
    return True if pair is None else pair


def coverage_measure(ivs, beta: MultinacciBeta) -> FieldElement:
    total = beta.zero
    for iv in ivs:
        total = total + (iv.t_right - iv.t_left)
    return total


def check_suffix_inequality(s: EPSequence) -> bool:
    """For a purely periodic ``s`` dominated by none of its shifts, check that every
    proper suffix of the period word strictly exceeds the same-length prefix."""
    if not s.is_purely_periodic:
        raise HypothesisViolation(f"{s} is not purely periodic")
    if len(s.period) < 2:
        raise HypothesisViolation(f"{s} has period < 2")
    if any(lex_cmp(x, s) < 0 for x in distinct_shifts(s)):
        raise HypothesisViolation(f"{s} has a shift below itself")
    return has_suffix_property(s.period)
