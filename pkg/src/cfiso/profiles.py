"""Complexity profiles of words: shortest-recurrence length and derived data.

For a word a_1..a_n over GF(q), L(t) is the length of the shortest linear
recurrence producing a_1..a_t, computed online by `elbmd`.  Everything else
here is derived from L:

    m(t)  = 2 L(t) - t     deviation from the typical L ~ t/2 growth
    m'(t) = m(t-1) - 1     index form used to split the transform stream
                           into degree and coefficient subwords (m'(0) = 0)
    J(t)  = number of jumps of L up to t; a jump of height h corresponds to
            a partial denominator of degree h

The profile can be computed either from the word itself or from its
transform stream: position t of the stream carries a zero iff the shortest
recurrence keeps predicting correctly, so the deviation walk

    m(t) = m(t-1) - 1         if stream_t = 0 or m(t-1) > 0
    m(t) = 1 - m(t-1)         otherwise (a jump)

reproduces m without touching the word.  `profile` takes the word route,
`profile_from_stream` the stream route; the tests pin them against each
other.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import elbmd
from .field import FieldSpec

__all__ = [
    "ProfileSeries",
    "ProfileClass",
    "GOOD_PROFILE_C",
    "profile",
    "profile_from_stream",
    "jump_heights",
    "J_prime",
    "zero_runs",
    "longest_zero_run",
    "kth_longest_zero_run",
    "kth_largest_degree",
    "reconstruct_profile",
    "classify",
]

# |m(n)| <= 1 + C log2(n) with C = 2 makes sum q^-f(n) converge, so almost
# every sequence satisfies it from some point on; used as the "good" cutoff.
GOOD_PROFILE_C = 2.0


@dataclass(frozen=True)
class ProfileSeries:
    """Arrays indexed 0..n (entry 0 is the L(0)=m(0)=J(0)=0 seed)."""

    field: FieldSpec
    word: tuple[int, ...]
    L: np.ndarray
    m: np.ndarray
    m_prime: np.ndarray
    J: np.ndarray
    jumps: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return len(self.L) - 1

    def __post_init__(self):
        assert len(self.L) == len(self.m) == len(self.m_prime) == len(self.J)


def _derive(field: FieldSpec, word: tuple[int, ...], L: np.ndarray,
            jumps: list[tuple[int, int]]) -> ProfileSeries:
    n = len(L) - 1
    t = np.arange(n + 1, dtype=np.int64)
    m = 2 * L - t
    m_prime = np.empty(n + 1, dtype=np.int64)
    m_prime[0] = 0
    m_prime[1:] = m[:-1] - 1
    J = np.zeros(n + 1, dtype=np.int64)
    for pos, _h in jumps:
        J[pos] += 1
    J = np.cumsum(J)
    return ProfileSeries(field, word, L, m, m_prime, J, tuple(jumps))


def profile(word: Sequence[int], field: FieldSpec) -> ProfileSeries:
    """Profile of a word, via the online shortest-recurrence algorithm."""
    res = elbmd.run(word, field)
    return _derive(field, res.word, res.L, list(res.jumps))


def profile_from_stream(stream: Sequence[int], field: FieldSpec) -> ProfileSeries:
    """Profile read off a transform stream by the deviation walk."""
    b = tuple(int(s) for s in stream)
    for s in b:
        if not 0 <= s < field.q:
            raise ValueError(f"symbol {s} out of range for {field!r}")
    n = len(b)
    L = np.zeros(n + 1, dtype=np.int64)
    jumps: list[tuple[int, int]] = []
    m = 0
    for t, s in enumerate(b, start=1):
        if s != 0 and m <= 0:
            m = 1 - m
            jumps.append((t, m))
        else:
            m -= 1
        L[t] = (m + t) >> 1
    return _derive(field, b, L, jumps)


def jump_heights(p: ProfileSeries) -> Counter:
    """Histogram {height: count} of the jumps in the profile."""
    return Counter(h for _pos, h in p.jumps)


def J_prime(p: ProfileSeries, n: int) -> int:
    """Jump count J(n) diminished by one when the last block is still open.

    Defined for even n only; equals J(n) - 1 exactly when m(n) > 0.
    """
    if n % 2:
        raise ValueError("J_prime is defined for even positions only")
    if not 0 <= n <= p.n:
        raise ValueError(f"position {n} outside profile range 0..{p.n}")
    return int(p.J[n]) - (1 if p.m[n] > 0 else 0)


# ---------------------------------------------------------------------------
# zero runs


def zero_runs(b: Sequence[int], upto: int | None = None) -> list[int]:
    """Lengths of the maximal runs of zeros in b_1..b_upto, in order."""
    if upto is None:
        upto = len(b)
    runs = []
    run = 0
    for s in list(b)[:upto]:
        if s == 0:
            run += 1
        else:
            if run:
                runs.append(run)
            run = 0
    if run:
        runs.append(run)
    return runs


def longest_zero_run(b: Sequence[int], upto: int | None = None) -> int:
    runs = zero_runs(b, upto)
    return max(runs) if runs else 0


def kth_longest_zero_run(b: Sequence[int], k: int, upto: int | None = None) -> int:
    """Length of the k-th longest zero run (k >= 1); 0 if fewer runs exist."""
    if k < 1:
        raise ValueError("k must be >= 1")
    runs = sorted(zero_runs(b, upto), reverse=True)
    return runs[k - 1] if k <= len(runs) else 0


def kth_largest_degree(p: ProfileSeries, k: int, t: int | None = None) -> int:
    """k-th largest jump height among blocks complete within the first t symbols.

    A jump of height h with new recurrence length l has its encoding complete
    at stream position 2l; only those with 2l <= t are ranked.  Returns 0 when
    fewer than k such blocks exist.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if t is None:
        t = p.n
    heights = []
    for pos, h in p.jumps:
        l_new = (pos + h) // 2  # pos = l_prev + l_new and h = l_new - l_prev
        if 2 * l_new <= t:
            heights.append(h)
    heights.sort(reverse=True)
    return heights[k - 1] if k <= len(heights) else 0


# ---------------------------------------------------------------------------
# reconstruction from the degree subword


def reconstruct_profile(d_word: Sequence[int], n: int) -> np.ndarray:
    """L(0..n) rebuilt from the degree subword of a length-n stream alone.

    The degree subword fixes every jump: its j-th nonzero symbol, preceded by
    z zeros since the previous nonzero one, announces a jump of height z+1,
    and the jump sits at stream position l_prev + l_new where l_new is the
    running sum of heights.  Coefficient symbols carry no profile information.
    """
    L = np.zeros(n + 1, dtype=np.int64)
    l_prev = 0
    z = 0
    for s in d_word:
        if s == 0:
            z += 1
            continue
        h = z + 1
        l_new = l_prev + h
        pos = l_prev + l_new
        if pos > n:
            raise ValueError(f"jump at stream position {pos} exceeds length {n}")
        L[pos:] = l_new
        l_prev = l_new
        z = 0
    return L


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ProfileClass:
    """Boundedness summary of the deviation walk over the observed range.

    d_perfect: smallest d with |m(t)| <= d for all observed t >= 1.
    good_C: smallest C >= 0 with |m(t)| <= 1 + C log2(t) for observed t >= 2.
    good: good_C <= GOOD_PROFILE_C.
    """

    d_perfect: int
    good_C: float
    good: bool


def classify(p: ProfileSeries) -> ProfileClass:
    if p.n == 0:
        return ProfileClass(0, 0.0, True)
    d = int(np.max(np.abs(p.m[1:])))
    if p.n >= 2:
        t = np.arange(2, p.n + 1)
        excess = np.abs(p.m[2:]) - 1
        C = float(np.max(excess / np.log2(t)))
        C = max(C, 0.0)
    else:
        C = 0.0
    return ProfileClass(d, C, C <= GOOD_PROFILE_C)
