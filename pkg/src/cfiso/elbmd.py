"""Online continued-fraction expansion of a sequence by discrepancy recursion.

The algorithm consumes one sequence symbol per step and emits one symbol of
the transformed stream; it simultaneously maintains the convergent pair
(P, Q) of the series attached to the sequence and the previous pair
(AP, AQ).  Q is the current minimal feedback polynomial, written in its
natural orientation (constant term first, not reciprocal) and not
normalized to be monic.  d = |Q| is the current linear complexity and
m = 2d - j the deviation of the profile from the j/2 line.

The per-step state machine, with b the discrepancy:

    b == 0            ->  m -= 1
    b != 0 and m > 0  ->  m -= 1;  P += bt*x^m*AP,  Q += bt*x^m*AQ,
                          bt = rbar*b              (refines the pair in place)
    b != 0 and m <= 0 ->  m = 1-m;  swap (P,AP), swap (Q,AQ);
                          bt = r_old * (-b^(-1));  r = b;  rbar = -b^(-1);
                          P += bt*x^m*AP,  Q += bt*x^m*AQ;  d += m
                          (a jump of height m in the complexity profile)

The scalar path below is the source of truth and asserts the loop
invariants (m == 2d - j and d == |Q|) after every step.  Two fast paths --
bit-packed integers for GF(2) and numpy index arrays for any tabled field
-- are tested against it for bit equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Literal, Sequence

import numpy as np

from .algebra import Polynomial
from .field import FieldSpec

__all__ = ["ElbmdState", "InvariantError", "RunResult", "Snapshot", "step", "run"]

_VECTOR_CUTOVER = 512  # below this, scalar table lookups beat numpy call overhead


class InvariantError(AssertionError):
    """A loop invariant of the expansion algorithm failed."""


@dataclass
class Snapshot:
    j: int
    P: Polynomial
    Q: Polynomial
    kind: Literal["main", "sub"]


class ElbmdState:
    """Mutable per-stream state of the scalar (reference) path."""

    def __init__(self, field: FieldSpec):
        self.field = field
        self.P = Polynomial.zero(field)
        self.AP = Polynomial.one(field)
        self.Q = Polynomial.one(field)
        self.AQ = Polynomial.zero(field)
        self.d = 0
        self.m = 0
        self.j = 0
        self.r = field.minus_one
        self.rbar = field.one  # -(r^-1) for the initial r = -1
        self.history: list[int] = []
        self.emitted: list[int] = []
        self.jumps: list[tuple[int, int]] = []

    def push(self, symbol: int) -> int:
        """Consume one sequence symbol, return the emitted stream symbol."""
        f = self.field
        if not 0 <= symbol < f.q:
            raise ValueError(f"symbol {symbol} out of range for {f!r}")
        self.history.append(symbol)
        self.j += 1
        j, d, a = self.j, self.d, self.history
        b = 0
        for i in range(d + 1):
            k = j + i - d  # a-index; positions <= 0 read as 0
            if k >= 1:
                qc = self.Q.coefficient(i)
                if qc and a[k - 1]:
                    b = f.add(b, f.mul(qc, a[k - 1]))
        if b == 0:
            self.m -= 1
        elif self.m > 0:
            self.m -= 1
            bt = f.mul(self.rbar, b)
            self.P = self.P + self.AP.scale(bt).shift(self.m)
            self.Q = self.Q + self.AQ.scale(bt).shift(self.m)
        else:
            self.m = -(self.m - 1)
            bt = self.r
            self.r = b
            self.rbar = f.neg(f.inv(b))
            bt = f.mul(bt, self.rbar)
            self.P, self.AP = self.AP, self.P
            self.P = self.P + self.AP.scale(bt).shift(self.m)
            self.Q, self.AQ = self.AQ, self.Q
            self.Q = self.Q + self.AQ.scale(bt).shift(self.m)
            self.d += self.m
            self.jumps.append((self.j, self.m))
        self.emitted.append(b)
        if self.m != 2 * self.d - self.j:
            raise InvariantError(f"m={self.m} != 2d-j={2 * self.d - self.j} at step {self.j}")
        if self.Q.degree != self.d:
            raise InvariantError(f"|Q|={self.Q.degree} != d={self.d} at step {self.j}")
        return b

    def snapshot(self) -> Snapshot:
        kind: Literal["main", "sub"] = "main" if self.m <= 0 else "sub"
        return Snapshot(self.j, self.P, self.Q, kind)


def step(state: ElbmdState, symbol: int) -> ElbmdState:
    """Advance `state` by one symbol (mutating) and return it."""
    state.push(symbol)
    return state


@dataclass
class RunResult:
    """Outcome of an expansion run over a finite word.

    word is the input, stream the emitted transform of equal length.
    L and m are numpy arrays of length n+1 with the convention
    L[0] = m[0] = 0, so L[t] is the complexity after t symbols.
    jumps lists (position, height) of every complexity jump.
    """

    field: FieldSpec
    word: tuple[int, ...]
    stream: tuple[int, ...]
    L: np.ndarray
    m: np.ndarray
    jumps: list[tuple[int, int]]
    P: Polynomial
    Q: Polynomial
    snapshots: list[Snapshot] | None = dc_field(default=None)

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def complexity(self) -> int:
        return int(self.L[-1])


def _run_scalar(word: Sequence[int], field: FieldSpec, snapshots: bool) -> RunResult:
    st = ElbmdState(field)
    n = len(word)
    L = np.zeros(n + 1, dtype=np.int64)
    m = np.zeros(n + 1, dtype=np.int64)
    snaps: list[Snapshot] | None = [] if snapshots else None
    for t, s in enumerate(word, start=1):
        st.push(s)
        L[t] = st.d
        m[t] = st.m
        if snaps is not None:
            snaps.append(st.snapshot())
    return RunResult(field, tuple(st.history), tuple(st.emitted), L, m, st.jumps,
                     st.P, st.Q, snaps)


def _poly_from_bits(field: FieldSpec, v: int) -> Polynomial:
    return Polynomial(field, tuple((v >> i) & 1 for i in range(v.bit_length())))


def _run_gf2(word: Sequence[int], field: FieldSpec, snapshots: bool) -> RunResult:
    w_in = tuple(int(s) for s in word)
    n = len(w_in)
    a_int = 0
    for t, s in enumerate(w_in):
        if s not in (0, 1):
            raise ValueError(f"symbol {s} out of range for {field!r}")
        if s:
            a_int |= 1 << t
    P, AP, Q, AQ = 0, 1, 1, 0
    d = m = 0
    L = np.zeros(n + 1, dtype=np.int64)
    mm = np.zeros(n + 1, dtype=np.int64)
    out = bytearray(n)
    jumps: list[tuple[int, int]] = []
    snaps: list[Snapshot] | None = [] if snapshots else None
    for j in range(1, n + 1):
        s = j - 1 - d
        if s >= 0:
            acc = Q & (a_int >> s)
        else:
            acc = (Q >> -s) & a_int
        b = acc.bit_count() & 1
        if b == 0:
            m -= 1
        elif m > 0:
            m -= 1
            P ^= AP << m
            Q ^= AQ << m
        else:
            m = 1 - m
            P, AP = AP ^ (P << m), P
            Q, AQ = AQ ^ (Q << m), Q
            d += m
            jumps.append((j, m))
        out[j - 1] = b
        L[j] = d
        mm[j] = m
        if snaps is not None:
            snaps.append(
                Snapshot(j, _poly_from_bits(field, P), _poly_from_bits(field, Q),
                         "main" if m <= 0 else "sub")
            )
    return RunResult(field, w_in, tuple(out), L, mm, jumps, _poly_from_bits(field, P),
                     _poly_from_bits(field, Q), snaps)


def _run_vector(word: Sequence[int], field: FieldSpec, snapshots: bool) -> RunResult:
    f = field
    n = len(word)
    a = np.asarray(word, dtype=np.uint8)
    if a.size and int(a.max(initial=0)) >= f.q:
        raise ValueError("symbol out of range")
    Q = np.zeros(n + 2, dtype=np.uint8)
    AQ = np.zeros(n + 2, dtype=np.uint8)
    P = np.zeros(n + 2, dtype=np.uint8)
    AP = np.zeros(n + 2, dtype=np.uint8)
    Q[0] = 1
    AP[0] = 1
    lQ, lAQ, lP, lAP = 1, 0, 0, 1
    d = m = 0
    r, rbar = f.minus_one, f.one
    L = np.zeros(n + 1, dtype=np.int64)
    mm = np.zeros(n + 1, dtype=np.int64)
    out = np.zeros(n, dtype=np.uint8)
    jumps: list[tuple[int, int]] = []
    snaps: list[Snapshot] | None = [] if snapshots else None
    for j in range(1, n + 1):
        lo = j - 1 - d
        if lo >= 0:
            b = f.vec_dot(Q[: d + 1], a[lo : lo + d + 1])
        else:
            b = f.vec_dot(Q[-lo : d + 1], a[0:j])
        if b == 0:
            m -= 1
        elif m > 0:
            m -= 1
            bt = f.mul(rbar, b)
            Q[m : m + lAQ] = f.vec_add(Q[m : m + lAQ], f.vec_scale(bt, AQ[:lAQ]))
            P[m : m + lAP] = f.vec_add(P[m : m + lAP], f.vec_scale(bt, AP[:lAP]))
            lQ = max(lQ, m + lAQ)
            lP = max(lP, m + lAP)
        else:
            m = 1 - m
            bt = f.mul(r, f.neg(f.inv(b)))
            r = b
            rbar = f.neg(f.inv(b))
            Q, AQ = AQ, Q
            lQ, lAQ = lAQ, lQ
            Q[m : m + lAQ] = f.vec_add(Q[m : m + lAQ], f.vec_scale(bt, AQ[:lAQ]))
            lQ = max(lQ, m + lAQ)
            P, AP = AP, P
            lP, lAP = lAP, lP
            P[m : m + lAP] = f.vec_add(P[m : m + lAP], f.vec_scale(bt, AP[:lAP]))
            lP = max(lP, m + lAP)
            d += m
            jumps.append((j, m))
        out[j - 1] = b
        L[j] = d
        mm[j] = m
        if snaps is not None:
            snaps.append(
                Snapshot(j, Polynomial(f, P[:lP].tolist()), Polynomial(f, Q[:lQ].tolist()),
                         "main" if m <= 0 else "sub")
            )
    return RunResult(f, tuple(int(x) for x in a), tuple(int(x) for x in out), L, mm, jumps,
                     Polynomial(f, P[:lP].tolist()), Polynomial(f, Q[:lQ].tolist()), snaps)


def run(word: Sequence[int], field: FieldSpec, *, snapshots: bool = False,
        method: Literal["auto", "scalar", "gf2", "vector"] = "auto") -> RunResult:
    """Run the expansion over a finite word and collect stream plus profile.

    method "auto" picks bit-packed GF(2), scalar table lookups for short
    words, and numpy arrays for long words over larger fields.
    """
    if method == "auto":
        if field.q == 2:
            method = "gf2"
        elif len(word) < _VECTOR_CUTOVER or field.mul_table is None:
            method = "scalar"
        else:
            method = "vector"
    if method == "gf2":
        if field.q != 2:
            raise ValueError("gf2 path requires GF(2)")
        return _run_gf2(word, field, snapshots)
    if method == "scalar":
        return _run_scalar(word, field, snapshots)
    if method == "vector":
        if field.mul_table is None and field.e > 1:
            raise ValueError("vector path needs operation tables")
        return _run_vector(word, field, snapshots)
    raise ValueError(f"unknown method {method!r}")
