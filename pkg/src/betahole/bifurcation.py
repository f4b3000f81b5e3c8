"""Bifurcation sets E, B (and the two-sided E', B') and the dimension function.

Two independent routes decide membership of ``t``:

* the orbit route: ``t`` is in E iff every shift of its greedy expansion
  dominates the expansion itself (equivalently ``T^n(t) >= t`` for all n);
* the interval route: ``t`` is in B iff ``t < 1 - 1/beta`` and ``t`` lies in
  no beta-Lyndon interval.

:func:`in_B` runs both and raises :class:`InvariantViolation` on any
disagreement the depth ``L`` is able to detect.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cmp_to_key, lru_cache

from .errors import DomainError, InvariantViolation
from .expansion import DEFAULT_HORIZON, greedy_expand
from .field import FieldElement, MultinacciBeta
from .lyndon import LyndonInterval, enumerate_lyndon, make_interval
from .sft import DEFAULT_TOL, entropy_spectral, survivor_sft_for_word
from .symbolic import EPSequence, TruncatedWord, lex_cmp, shift

DEFAULT_DEPTH = 12
# Longest word turned into an SFT outside the enumeration depth.
MAX_EXACT_WORD = 24

MEMBER, NONMEMBER, UNKNOWN = "member", "nonmember", "unknown"
FOUND, NOT_COVERED, ABOVE_THRESHOLD = "found", "not_covered", "above_threshold"
EXACT_SFT, BRACKETED, ZERO_TAIL = "exact_sft", "bracketed", "zero_tail"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: int | None = None
    horizon: int | None = None
    reason: str | None = None

    @property
    def decided(self) -> bool:
        return self.status != UNKNOWN

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.horizon is not None:
            out["horizon"] = self.horizon
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class Location:
    kind: str
    interval: LyndonInterval | None
    depth: int


@dataclass(frozen=True)
class DimensionEstimate:
    lo: float
    hi: float
    method: str
    entropy_lo: float
    entropy_hi: float
    depth_used: int
    word: str | None = None

    @property
    def value(self) -> float:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def to_json(self) -> dict:
        return {
            "dim_lo": self.lo,
            "dim_hi": self.hi,
            "method": self.method,
            "entropy_lo": self.entropy_lo,
            "entropy_hi": self.entropy_hi,
            "depth": self.depth_used,
            "word": self.word,
        }


def _element(t, beta: MultinacciBeta) -> FieldElement:
    return beta(t)


def _check_unit(t: FieldElement) -> None:
    if t.sign() < 0 or t >= 1:
        raise DomainError("t must lie in [0, 1)")


@lru_cache(maxsize=8192)
def _expansion(t: FieldElement, horizon: int) -> EPSequence | TruncatedWord:
    return greedy_expand(t, horizon)


def in_E(t, beta: MultinacciBeta, horizon: int = DEFAULT_HORIZON) -> Verdict:
    """Orbit route: ``t`` in E iff ``T^n(t) >= t`` for every n.

    The witness of a nonmember is the least n with ``T^n(t) < t``.
    """
    t = _element(t, beta)
    _check_unit(t)
    b = _expansion(t, horizon)
    if isinstance(b, TruncatedWord):
        return Verdict(UNKNOWN, horizon=horizon, reason="no period within horizon")
    for n in range(1, len(b)):
        if lex_cmp(shift(b, n), b) < 0:
            return Verdict(NONMEMBER, witness=n)
    return Verdict(MEMBER)


def locate_interval(t, beta: MultinacciBeta, depth: int = DEFAULT_DEPTH, closed: bool = False) -> Location:
    """The Lyndon interval of word length <= depth containing ``t``, if any."""
    t = _element(t, beta)
    _check_unit(t)
    if t >= beta.threshold:
        return Location(ABOVE_THRESHOLD, None, depth)
    ivs = enumerate_lyndon(beta, depth)
    i = bisect_right(ivs, t, key=lambda iv: iv.t_left)
    if i and ivs[i - 1].contains(t, closed):
        return Location(FOUND, ivs[i - 1], depth)
    return Location(NOT_COVERED, None, depth)


def in_B(t, beta: MultinacciBeta, depth: int = DEFAULT_DEPTH, horizon: int = DEFAULT_HORIZON) -> Verdict:
    """Membership in B (= E for multinacci beta), cross-checked against the Lyndon complement."""
    t = _element(t, beta)
    orbit = in_E(t, beta, horizon)
    loc = locate_interval(t, beta, depth)
    if orbit.status == MEMBER:
        if loc.kind != NOT_COVERED:
            raise InvariantViolation(f"t={t!r} is in E by its orbit but the interval route says {loc.kind}")
        return orbit
    if orbit.status == NONMEMBER:
        if loc.kind == NOT_COVERED and orbit.witness <= depth:
            raise InvariantViolation(
                f"t={t!r} leaves E at step {orbit.witness} but no interval of length <= {depth} covers it"
            )
        if loc.kind == FOUND:
            b = _expansion(t, horizon)
            if b.take(orbit.witness) != loc.interval.word:
                raise InvariantViolation(
                    f"t={t!r}: covering word {loc.interval.word} differs from expansion prefix {b.take(orbit.witness)}"
                )
        return orbit
    if loc.kind == ABOVE_THRESHOLD:
        return Verdict(NONMEMBER, reason="t >= 1 - 1/beta")
    if loc.kind == FOUND:
        return Verdict(NONMEMBER, reason=f"inside interval of {loc.interval.word}")
    return orbit


def _is_right_endpoint(t: FieldElement, horizon: int) -> bool:
    b = _expansion(t, horizon)
    return isinstance(b, EPSequence) and b.is_purely_periodic and b.period != "0"


def in_E_prime(t, beta: MultinacciBeta, horizon: int = DEFAULT_HORIZON) -> Verdict:
    """Two-sided variant: E minus the right endpoints of Lyndon intervals."""
    t = _element(t, beta)
    v = in_E(t, beta, horizon)
    if v.status == MEMBER and _is_right_endpoint(t, horizon):
        return Verdict(NONMEMBER, reason="right endpoint of a Lyndon interval")
    return v


def in_B_prime(t, beta: MultinacciBeta, depth: int = DEFAULT_DEPTH, horizon: int = DEFAULT_HORIZON) -> Verdict:
    """Two-sided variant: [0, 1-1/beta) minus the closed Lyndon intervals."""
    t = _element(t, beta)
    v = in_B(t, beta, depth, horizon)
    closed = locate_interval(t, beta, depth, closed=True)
    if v.status == MEMBER and _is_right_endpoint(t, horizon):
        b = _expansion(t, horizon)
        if len(b.period) <= depth and closed.kind != FOUND:
            raise InvariantViolation(f"right endpoint {t!r} not found among closed intervals")
        return Verdict(NONMEMBER, reason="right endpoint of a Lyndon interval")
    if v.status == MEMBER and closed.kind == FOUND:
        raise InvariantViolation(f"{t!r} is in B but lies in a closed interval")
    if v.status == UNKNOWN and closed.kind == FOUND:
        return Verdict(NONMEMBER, reason=f"inside closed interval of {closed.interval.word}")
    return v


def _zero(depth: int) -> DimensionEstimate:
    return DimensionEstimate(0.0, 0.0, ZERO_TAIL, -math.inf, -math.inf, depth)


def word_dimension(beta: MultinacciBeta, word: str, tol: float = DEFAULT_TOL, depth: int | None = None) -> DimensionEstimate:
    """Dimension on the plateau of ``word`` from the certified entropy of its survivor SFT."""
    lb_lo, lb_hi = beta.log_bounds()
    if word == "0":
        # Floor 0^inf leaves the full beta-shift, whose entropy is log(beta).
        return DimensionEstimate(1.0, 1.0, EXACT_SFT, lb_lo, lb_hi, depth or 1, word)
    e = entropy_spectral(survivor_sft_for_word(beta, word), tol)
    lo = max(0.0, e.lo / lb_hi)
    hi = min(1.0, e.hi / lb_lo)
    return DimensionEstimate(lo, hi, EXACT_SFT, e.lo, e.hi, depth or len(word), word)


def _right_endpoint_index(ivs, t: FieldElement) -> int:
    """Index of the first interval whose right endpoint is > t."""
    return bisect_right(ivs, t, key=lambda iv: iv.t_right)


def dimension(
    t,
    beta: MultinacciBeta,
    depth: int = DEFAULT_DEPTH,
    tol: float = DEFAULT_TOL,
    horizon: int = DEFAULT_HORIZON,
) -> DimensionEstimate:
    """Hausdorff dimension of the survivor set K_beta(t), as a certified bracket."""
    t = _element(t, beta)
    _check_unit(t)
    if t >= beta.threshold:
        return _zero(depth)
    loc = locate_interval(t, beta, depth)
    if loc.kind == FOUND:
        return replace(word_dimension(beta, loc.interval.word, tol), depth_used=depth)
    b = _expansion(t, horizon)
    orbit = in_E(t, beta, horizon)
    if orbit.status == NONMEMBER and orbit.witness <= MAX_EXACT_WORD:
        # The least witness N places t in the interval of its first N digits.
        iv = make_interval(b.take(orbit.witness), beta)
        if not iv.contains(t):
            raise InvariantViolation(f"t={t!r} is not inside the interval of {iv.word}")
        return replace(word_dimension(beta, iv.word, tol), depth_used=orbit.witness)
    if orbit.status == MEMBER and b.is_purely_periodic and len(b.period) <= MAX_EXACT_WORD:
        return replace(word_dimension(beta, b.period, tol), depth_used=depth)
    ivs = enumerate_lyndon(beta, depth)
    j = _right_endpoint_index(ivs, t)
    # eta is nonincreasing: endpoints above t bound it from below, endpoints below from above.
    if j < len(ivs):
        above = word_dimension(beta, ivs[j].word, tol)
        lo, e_lo = above.lo, above.entropy_lo
    else:
        lo, e_lo = 0.0, 0.0
    if j > 0:
        below = word_dimension(beta, ivs[j - 1].word, tol)
        hi, e_hi = below.hi, below.entropy_hi
    else:
        hi, e_hi = 1.0, beta.log_bounds()[1]
    return DimensionEstimate(lo, hi, BRACKETED, e_lo, e_hi, depth)


@dataclass(frozen=True)
class StaircaseRow:
    t: FieldElement
    raw: DimensionEstimate
    estimate: DimensionEstimate


def staircase(beta: MultinacciBeta, grid, depth: int = DEFAULT_DEPTH, tol: float = DEFAULT_TOL, horizon: int = DEFAULT_HORIZON) -> list[StaircaseRow]:
    """Dimension estimates over a grid, reconciled to be nonincreasing in t.

    Both clamps stay valid bounds: eta(t_i) >= eta(t_j) >= lo_j for j > i, and
    eta(t_i) <= eta(t_j) <= hi_j for j < i.
    """
    points = sorted((_element(t, beta) for t in grid), key=_sort_key)
    raw = [dimension(t, beta, depth, tol, horizon) for t in points]
    lo = [r.lo for r in raw]
    hi = [r.hi for r in raw]
    for i in range(len(lo) - 2, -1, -1):
        lo[i] = max(lo[i], lo[i + 1])
    for i in range(1, len(hi)):
        hi[i] = min(hi[i], hi[i - 1])
    return [StaircaseRow(t, r, replace(r, lo=a, hi=b)) for t, r, a, b in zip(points, raw, lo, hi)]


_sort_key = cmp_to_key(lambda a, b: (a - b).sign())


@dataclass(frozen=True)
class SupReport:
    interval: LyndonInterval | None
    value: FieldElement
    gap: FieldElement
    depth: int


def sup_E(beta: MultinacciBeta, depth: int = DEFAULT_DEPTH) -> SupReport:
    """Largest Lyndon right endpoint below 1 - 1/beta at the given depth, and its gap."""
    threshold = beta.threshold
    below = [iv for iv in enumerate_lyndon(beta, depth) if iv.t_right < threshold]
    if not below:
        return SupReport(None, beta.zero, threshold, depth)
    best = below[-1]  # right endpoints are ordered like left endpoints
    return SupReport(best, best.t_right, threshold - best.t_right, depth)


@dataclass(frozen=True)
class LocalDimensionPoint:
    radius: Fraction
    estimate: DimensionEstimate
    endpoint: LyndonInterval | None


def _radius(r) -> Fraction:
    r = Fraction(str(r)) if isinstance(r, float) else Fraction(r)
    if r <= 0:
        raise DomainError("radii must be positive")
    return r


def local_dimension_profile(
    t,
    beta: MultinacciBeta,
    radii,
    depth: int = DEFAULT_DEPTH,
    tol: float = DEFAULT_TOL,
    horizon: int = DEFAULT_HORIZON,
) -> list[LocalDimensionPoint]:
    """Lower proxy for dim_H(B ∩ (t, t+r)) at each radius.

    Uses the Lyndon right endpoint nearest above ``t`` (the one of largest
    dimension, since eta is nonincreasing) when it falls inside the window.
    Without one at this depth the entry is the trivial bracket [0, eta(t)].
    """
    t = _element(t, beta)
    verdict = in_B(t, beta, depth, horizon)
    if verdict.status != MEMBER:
        raise DomainError(f"t is not a member of B ({verdict.status})")
    ivs = enumerate_lyndon(beta, depth)
    j = _right_endpoint_index(ivs, t)
    nearest = ivs[j] if j < len(ivs) else None
    ceiling = dimension(t, beta, depth, tol, horizon)
    out = []
    for r in radii:
        r = _radius(r)
        if nearest is not None and nearest.t_right < t + r:
            est = replace(word_dimension(beta, nearest.word, tol), method=EXACT_SFT, depth_used=depth)
            out.append(LocalDimensionPoint(r, est, nearest))
        else:
            est = DimensionEstimate(0.0, ceiling.hi, BRACKETED, 0.0, ceiling.entropy_hi, depth)
            out.append(LocalDimensionPoint(r, est, None))
    return out


def tail_dimension(
    t,
    beta: MultinacciBeta,
    depth: int = DEFAULT_DEPTH,
    tol: float = DEFAULT_TOL,
    horizon: int = DEFAULT_HORIZON,
) -> DimensionEstimate:
    """Lower proxy for dim_H(E ∩ [t, 1]).

    The supremum of the plateau dimensions over right endpoints ``t_R >= t`` at
    the given depth; t = 0 counts as the right endpoint of the degenerate word
    "0".  Since eta is nonincreasing the supremum sits at the nearest endpoint.
    """
    t = _element(t, beta)
    _check_unit(t)
    if t >= beta.threshold:
        return _zero(depth)
    if t.is_zero:
        return word_dimension(beta, "0", tol, depth)
    ivs = enumerate_lyndon(beta, depth)
    j = _right_endpoint_index(ivs, t)
    if j > 0 and ivs[j - 1].t_right == t:
        j -= 1
    if j < len(ivs):
        return replace(word_dimension(beta, ivs[j].word, tol), depth_used=depth)
    ceiling = dimension(t, beta, depth, tol, horizon)
    return DimensionEstimate(0.0, ceiling.hi, BRACKETED, 0.0, ceiling.entropy_hi, depth)
