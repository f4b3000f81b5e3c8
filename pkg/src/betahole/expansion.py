"""Greedy and quasi-greedy beta-expansions and Parry admissibility."""
from __future__ import annotations

from .errors import DomainError, InvariantViolation
from .field import FieldElement, MultinacciBeta
from .symbolic import EPSequence, TruncatedWord, distinct_shifts, lex_cmp

DEFAULT_HORIZON = 10_000


def t_step(x: FieldElement) -> tuple[int, FieldElement]:
    """One step of ``x -> beta*x mod 1``: returns ``(digit, image)``."""
    if x.sign() < 0 or x >= 1:
        raise DomainError("T_beta is defined on [0, 1)")
    y = x * x.beta.gen
    if y >= 1:
        return 1, y - 1
    return 0, y


def t_map(x: FieldElement) -> FieldElement:
    return t_step(x)[1]


def _expand(x: FieldElement, horizon: int, digit_rule) -> EPSequence | TruncatedWord:
    beta = x.beta
    seen: dict[tuple, int] = {}
    digits: list[str] = []
    for i in range(horizon + 1):
        key = x.coeffs
        if key in seen:
            j = seen[key]
            return EPSequence("".join(digits[:j]), "".join(digits[j:]))
        if i == horizon:
            break
        seen[key] = i
        y = x * beta.gen
        d = digit_rule(y)
        digits.append("1" if d else "0")
        x = y - d
    return TruncatedWord("".join(digits), horizon)


def greedy_expand(x: FieldElement, horizon: int = DEFAULT_HORIZON) -> EPSequence | TruncatedWord:
    """The greedy expansion b(x, beta) for x in [0, 1).

    Orbit points are compared exactly, so an eventually periodic expansion is
    returned exactly; otherwise the first ``horizon`` digits come back as a
    :class:`TruncatedWord`.
    """
    if x.sign() < 0 or x >= 1:
        raise DomainError("greedy expansion requires 0 <= x < 1")
    return _expand(x, horizon, lambda y: 1 if y >= 1 else 0)


def greedy_expansion_of_one(beta: MultinacciBeta, horizon: int = DEFAULT_HORIZON) -> EPSequence | TruncatedWord:
    """b(1, beta): the greedy rule applied at x = 1 (for m >= 1 this is 1^(m+1) 0^inf)."""
    y = beta.gen
    d = 1 if y >= 1 else 0
    rest = _expand(y - d, horizon, lambda z: 1 if z >= 1 else 0)
    if isinstance(rest, TruncatedWord):
        return TruncatedWord(str(d) + rest.digits, horizon)
    return EPSequence(str(d) + rest.prefix, rest.period)


def quasi_greedy_expand(x: FieldElement, horizon: int = DEFAULT_HORIZON) -> EPSequence | TruncatedWord:
    """The quasi-greedy expansion a(x, beta) for x in (0, 1/(beta-1)].

    Digit 1 is taken only when beta*r strictly exceeds 1; at a tie the digit 0
    keeps the remainder positive, so the tail never becomes 0^inf.
    """
    beta = x.beta
    if x.sign() <= 0 or x * (beta.gen - 1) > 1:
        raise DomainError("quasi-greedy expansion requires 0 < x <= 1/(beta-1)")
    result = _expand(x, horizon, lambda y: 1 if y > 1 else 0)
    if x == 1 and result != beta.delta:
        raise InvariantViolation(f"quasi-greedy expansion of 1 is {result}, expected {beta.delta}")
    return result


def word_value(beta: MultinacciBeta, word: str) -> FieldElement:
    """sum_i w_i beta^-i for a finite word."""
    v = beta.zero
    for c in reversed(word):
        if c == "1":
            v = v + 1
        v = v * beta.inv_gen
    return v


def eval_expansion(beta: MultinacciBeta, d: EPSequence) -> FieldElement:
    """Exact value of sum_i d_i beta^-i."""
    head = word_value(beta, d.prefix)
    if d.ends_in_zeros:
        return head
    n = len(d.period)
    bn = beta.gen**n
    # sum over the repeated block: value(v) * beta^n / (beta^n - 1), shifted past the prefix
    tail = word_value(beta, d.period) * bn / (bn - 1)
    return head + tail * beta.inv_gen ** len(d.prefix)


def is_greedy_admissible(d: EPSequence, beta: MultinacciBeta) -> bool:
    """True iff every shift of ``d`` is strictly below delta(beta)."""
    delta = beta.delta
    return all(lex_cmp(s, delta) < 0 for s in distinct_shifts(d))


def is_delta_valid(d: EPSequence) -> bool:
    """True iff ``d`` does not end in 0^inf and dominates all of its shifts."""
    if d.ends_in_zeros:
        return False
    return all(lex_cmp(s, d) <= 0 for s in distinct_shifts(d))
