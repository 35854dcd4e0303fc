"""2-adic rational approximation of bit streams.

A prefix a_1..a_k is read as the integer a = sum a_i 2^(i-1) and approximated
by fractions p/q with q*a = p mod 2^k.  The admissible (p, q) form a rank-2
lattice; the max-norm size of its shortest nonzero vector measures how hard
the prefix is to reproduce, and the step at which the tracked pair is forced
to change yields one output bit per input bit.

Two pair sequences are maintained:

* the minimal pair: a shortest nonzero lattice vector, no constraint on q.
  Its size drives the complexity series phi2.
* the unit pair: a shortest lattice vector whose denominator is odd, i.e.
  stays invertible in the 2-adic integers.  With q odd, exactly one of the
  two possible next bits keeps the congruence alive, so the change/no-change
  bit of this pair defines a distance-preserving map on bit streams.  An
  even denominator would make the next step insensitive to the input bit
  (q * bit * 2^(k-1) = 0 mod 2^k), which is why the minimal pair alone
  cannot play this role.

Both sequences are sticky: a pair is kept as long as it satisfies the new
congruence.  Lattices are nested, so a surviving pair is still minimal in
its class and the output bit is 1 exactly when the old pair has genuinely
left the lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Pair = tuple[int, int]

__all__ = [
    "AdicProfile",
    "AdicState",
    "InvariantError",
    "adic_profile",
    "adic_step",
    "initial_state",
    "minimal_pair",
    "phi",
    "unit_pair",
]


def phi(p: int, q: int) -> int:
    """Max-norm of an integer pair."""
    return max(abs(p), abs(q))


class InvariantError(AssertionError):
    """A structural invariant of the approximation state was violated."""


def _candidate_multipliers(u: Pair, v: Pair) -> set[int]:
    # m minimizing max(|v0 - m*u0|, |v1 - m*u1|): the function is convex
    # piecewise linear with breakpoints at the coordinate zeros and at the
    # crossings of the two absolute-value branches, so the integer optimum
    # is a floor/ceil of one of these four ratios.  Exact integer division;
    # entries can run to thousands of bits.
    cands: set[int] = set()
    ratios = (
        (v[0], u[0]),
        (v[1], u[1]),
        (v[0] - v[1], u[0] - u[1]),
        (v[0] + v[1], u[0] + u[1]),
    )
    for num, den in ratios:
        if den:
            m = num // den
            cands.add(m)
            cands.add(m + 1)
    cands.discard(0)
    return cands


def _reduce(u: Pair, v: Pair) -> tuple[Pair, Pair]:
    """Greedy max-norm Gauss reduction of a lattice basis."""
    while True:
        if phi(*u) > phi(*v):
            u, v = v, u
        best = phi(*v)
        repl = None
        for m in _candidate_multipliers(u, v):
            w = (v[0] - m * u[0], v[1] - m * u[1])
            if w == (0, 0):
                continue
            if phi(*w) < best:
                best = phi(*w)
                repl = w
        if repl is None:
            return u, v
        v = repl


def _canonical_key(pair: Pair):
    p, q = pair
    return (abs(q), q < 0, p < 0, abs(p))


def _alternate_key(pair: Pair):
    p, q = pair
    return (abs(p), p < 0, q < 0, abs(q))


_KEYS = {"canonical": _canonical_key, "alternate": _alternate_key}

# Coefficient window scanned around a reduced basis.  A reduced basis has its
# class minima within a couple of steps; the exhaustive oracle tests pin this.
_BOX = 3


def _select_minimal(u: Pair, v: Pair, prefer: str) -> Pair:
    key = _KEYS[prefer]
    best: Pair | None = None
    best_rank = None
    for alpha in range(-_BOX, _BOX + 1):
        for beta in range(-_BOX, _BOX + 1):
            w = (alpha * u[0] + beta * v[0], alpha * u[1] + beta * v[1])
            if w == (0, 0):
                continue
            rank = (phi(*w), key(w))
            if best_rank is None or rank < best_rank:
                best, best_rank = w, rank
    assert best is not None
    return best


def _select_unit(u: Pair, v: Pair, prefer: str) -> Pair:
    # shortest vector with odd denominator; one always exists since (a, 1)
    # lies in the lattice, hence not every basis denominator is even
    key = _KEYS[prefer]
    best: Pair | None = None
    best_rank = None
    for alpha in range(-_BOX, _BOX + 1):
        for beta in range(-_BOX, _BOX + 1):
            w = (alpha * u[0] + beta * v[0], alpha * u[1] + beta * v[1])
            if w == (0, 0) or not (w[1] & 1):
                continue
            rank = (phi(*w), key(w))
            if best_rank is None or rank < best_rank:
                best, best_rank = w, rank
    if best is None:
        raise InvariantError("no odd-denominator vector near reduced basis")
    return best


def _scratch_basis(a_k: int, k: int) -> tuple[Pair, Pair]:
    return _reduce((a_k % (1 << k), 1), (1 << k, 0))


def minimal_pair(a_k: int, k: int, prefer: str = "canonical") -> Pair:
    """Shortest nonzero (p, q) with q*a_k = p mod 2^k, ties broken by `prefer`."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if prefer not in _KEYS:
        raise ValueError(f"unknown tie-break {prefer!r}")
    return _select_minimal(*_scratch_basis(a_k, k), prefer)


def unit_pair(a_k: int, k: int, prefer: str = "canonical") -> Pair:
    """Shortest (p, q) with q odd and q*a_k = p mod 2^k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if prefer not in _KEYS:
        raise ValueError(f"unknown tie-break {prefer!r}")
    return _select_unit(*_scratch_basis(a_k, k), prefer)


@dataclass(frozen=True)
class AdicState:
    """Incremental approximation state after consuming k bits."""

    k: int
    a_k: int
    basis: tuple[Pair, Pair]
    minimal: Pair
    unit: Pair
    a_bits: tuple[int, ...]

    @property
    def j_a(self) -> int:
        return sum(self.a_bits)

    @property
    def m_a(self) -> int:
        return 2 * self.j_a - self.k

    @property
    def phi2(self) -> float:
        return math.log2(phi(*self.minimal))


def initial_state() -> AdicState:
    return AdicState(0, 0, ((1, 0), (0, 1)), (0, 1), (0, 1), ())


def _refine_basis(u: Pair, v: Pair, a_next: int, k: int) -> tuple[Pair, Pair]:
    # split the old lattice by the parity of (q*a_next - p) / 2^k; the kept
    # sublattice has index 2, so the determinant doubles
    fu = ((u[1] * a_next - u[0]) >> k) & 1
    fv = ((v[1] * a_next - v[0]) >> k) & 1
    if fu == 0 and fv == 0:
        raise InvariantError("refinement cannot keep the full lattice")
    if fu == 0:
        return u, (2 * v[0], 2 * v[1])
    if fv == 0:
        return (2 * u[0], 2 * u[1]), v
    return (u[0] - v[0], u[1] - v[1]), (2 * v[0], 2 * v[1])


def _check_state(st: AdicState) -> None:
    (u, v) = st.basis
    det = u[0] * v[1] - u[1] * v[0]
    if abs(det) != 1 << st.k:
        raise InvariantError(f"basis determinant {det} at k={st.k}")
    mod = 1 << st.k
    for c, d in (st.minimal, st.unit):
        if (d * st.a_k - c) % mod:
            raise InvariantError(f"pair ({c}, {d}) left the lattice at k={st.k}")
    if not (st.unit[1] & 1):
        raise InvariantError("unit pair denominator is even")


def adic_step(state: AdicState, bit: int, prefer: str = "canonical") -> AdicState:
    """Consume one bit; the emitted bit is 1 iff the unit pair must change."""
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    if prefer not in _KEYS:
        raise ValueError(f"unknown tie-break {prefer!r}")
    k = state.k + 1
    a_next = state.a_k + (bit << state.k)
    basis = _reduce(*_refine_basis(*state.basis, a_next, state.k))
    mod = 1 << k

    c, d = state.minimal
    if (d * a_next - c) % mod:
        minimal = _select_minimal(*basis, prefer)
        if phi(*minimal) < phi(c, d):
            raise InvariantError("minimal pair size decreased")
    else:
        minimal = state.minimal

    c, d = state.unit
    if (d * a_next - c) % mod:
        out = 1
        unit = _select_unit(*basis, prefer)
        if phi(*unit) < phi(c, d):
            raise InvariantError("unit pair size decreased")
    else:
        out = 0
        unit = state.unit

    st = AdicState(k, a_next, basis, minimal, unit, state.a_bits + (out,))
    _check_state(st)
    return st


@dataclass(frozen=True)
class AdicProfile:
    """Per-step series for a full stream."""

    word: tuple[int, ...]
    a_bits: tuple[int, ...]
    j_a: tuple[int, ...]
    m_a: tuple[int, ...]
    phi2: tuple[int | float, ...]
    pairs: tuple[Pair, ...]
    final_unit: Pair

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def final_pair(self) -> Pair:
        return self.pairs[-1] if self.pairs else (0, 1)


def adic_profile(a, prefer: str = "canonical") -> AdicProfile:
    """Approximate a bit stream incrementally, one lattice refinement per bit.

    Word-sized runs stay exact: all arithmetic is on unbounded integers.
    Cost grows quadratically in the stream length since the pair entries
    reach about k/2 bits at step k.
    """
    if prefer not in _KEYS:
        raise ValueError(f"unknown tie-break {prefer!r}")
    word = tuple(int(b) for b in a)
    if any(b not in (0, 1) for b in word):
        raise ValueError("stream bits must be 0 or 1")

    u, v = (1, 0), (0, 1)
    cm, dm = 0, 1
    cu, du = 0, 1
    a_k = 0
    bits: list[int] = []
    phi2: list[int | float] = []
    pairs: list[Pair] = []
    for k, bit in enumerate(word):
        a_next = a_k + (bit << k)
        u, v = _reduce(*_refine_basis(u, v, a_next, k))
        mod = 1 << (k + 1)

        if (dm * a_next - cm) % mod:
            cm, dm = _select_minimal(u, v, prefer)
        if (du * a_next - cu) % mod:
            bits.append(1)
            cu, du = _select_unit(u, v, prefer)
        else:
            bits.append(0)

        a_k = a_next
        pairs.append((cm, dm))
        cur_phi = phi(cm, dm)
        exact = math.log2(cur_phi)
        phi2.append(round(exact) if cur_phi == 1 << round(exact) else exact)

    j = np.cumsum(bits, dtype=np.int64) if bits else np.zeros(0, dtype=np.int64)
    m = 2 * j - np.arange(1, len(word) + 1, dtype=np.int64)
    return AdicProfile(
        word=word,
        a_bits=tuple(bits),
        j_a=tuple(int(x) for x in j),
        m_a=tuple(int(x) for x in m),
        phi2=tuple(phi2),
        pairs=tuple(pairs),
        final_unit=(cu, du),
    )
