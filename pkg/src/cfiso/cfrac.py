"""Continued-fraction view of sequences: expansion, symbol codec, transform.

A word a_1..a_n over GF(q) is read as the series G(a) = sum a_i x^(-i).
Its continued-fraction partial denominators A_i (polynomials of degree >= 1)
are encoded symbol-by-symbol: a denominator of degree d occupies a 2d-symbol
block 0^(d-1) s_d s_(d-1) ... s_0 whose first half (zeros plus a nonzero
announcement symbol) fixes the degree and whose second half carries the
remaining coefficients.  Concatenating the blocks of all denominators,
padding with an infinite zero tail, and truncating to n symbols yields the
length-preserving transform of the word; finite words go through the
zero-padding rule T(a) := T(a 0^inf) truncated to |a|.

The symbol values are chosen so that the encoded stream coincides with the
prediction-error sequence of the online algorithm in `elbmd` (the stream one
gets by always predicting the next symbol with the current best linear
recurrence).  Concretely the codec carries a running nonzero unit r,
initialized to -1: for a denominator A of degree d with leading coefficient
lc, the announcement symbol is r' = -r/lc and each remaining coefficient c
is emitted as -r'*c, with r' replacing r for the next block.  Over GF(2)
every unit is 1, so the block degenerates to the plain coefficient encoding
0^(d-1) a_d a_(d-1) ... a_0 (exposed as encode_pi/decode_pi).

The blocks form a complete prefix code, so the transform is invertible;
`inverse_transform` decodes a stream back to the unique word, and
`split_stream` classifies each stream position as belonging to a first half
(degree announcements, the D-subword) or a second half (coefficients, the
C-subword).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .algebra import Polynomial, convergents_from, series_coefficients
from .elbmd import run as elbmd_run
from .field import FieldSpec

__all__ = [
    "Word",
    "CFExpansion",
    "PendingTail",
    "StreamSplit",
    "encode_pi",
    "decode_pi",
    "encode_stream",
    "decode_stream",
    "expand",
    "transform",
    "inverse_transform",
    "split_stream",
    "split_transform",
    "iterate_transform",
    "diagonal_transform",
    "shifted_transforms",
]

Word = tuple[int, ...]


def _as_word(seq: Sequence[int], field: FieldSpec) -> Word:
    w = tuple(int(s) for s in seq)
    for i, s in enumerate(w):
        if not 0 <= s < field.q:
            raise ValueError(f"symbol {s} at position {i + 1} out of range for {field!r}")
    return w


# ---------------------------------------------------------------------------
# block codec


def encode_pi(A: Polynomial) -> Word:
    """Plain block encoding 0^(d-1) a_d a_(d-1) ... a_0 of one denominator.

    This is the stream encoding without the unit twist; over GF(2) the two
    coincide blockwise.
    """
    d = A.degree
    if not (isinstance(d, int) and d >= 1):
        raise ValueError(f"partial denominators must have degree >= 1, got {A!r}")
    block = [0] * (d - 1) + [A.coefficient(d)]
    block.extend(A.coefficient(i) for i in range(d - 1, -1, -1))
    return tuple(block)


def decode_pi(word: Sequence[int], field: FieldSpec) -> Polynomial:
    """Decode exactly one plain block; rejects anything not of that shape."""
    w = _as_word(word, field)
    d = 0
    for s in w:
        d += 1
        if s:
            break
    else:
        raise ValueError("no announcement symbol found in block")
    if len(w) != 2 * d:
        raise ValueError(f"block of degree {d} must have {2 * d} symbols, got {len(w)}")
    coeffs = list(w[d:][::-1]) + [w[d - 1]]
    return Polynomial(field, coeffs)


@dataclass(frozen=True)
class PendingTail:
    """Information carried by an incomplete block at the end of a stream.

    kind "boundary": the stream ends exactly between blocks.
    kind "zeros":    the stream ends inside a run of zero_run zeros that is
                     consistent either with termination or with a next
                     denominator of degree >= zero_run + 1.
    kind "coeffs":   the degree and leading coefficient of the last
                     denominator are fixed and `missing` low coefficients are
                     not; `known` holds the fixed non-leading coefficients
                     and `head` is that denominator with zeros filled in.
    """

    kind: Literal["boundary", "zeros", "coeffs"]
    zero_run: int = 0
    degree: int = 0
    known: Word = ()
    missing: int = 0
    head: Polynomial | None = None


def encode_stream(denominators: Sequence[Polynomial], field: FieldSpec,
                  n: int | None = None) -> Word:
    """Concatenate twisted blocks; if n is given, zero-pad or truncate to n."""
    symbols: list[int] = []
    r = field.minus_one
    for A in denominators:
        d = A.degree
        if not (isinstance(d, int) and d >= 1):
            raise ValueError(f"partial denominators must have degree >= 1, got {A!r}")
        r = field.neg(field.div(r, A.coefficient(d)))
        symbols.extend([0] * (d - 1))
        symbols.append(r)
        symbols.extend(field.neg(field.mul(r, A.coefficient(i))) for i in range(d - 1, -1, -1))
        if n is not None and len(symbols) >= n:
            break
    if n is None:
        return tuple(symbols)
    if len(symbols) < n:
        symbols.extend([0] * (n - len(symbols)))
    return tuple(symbols[:n])


def decode_stream(word: Sequence[int], field: FieldSpec) -> tuple[list[Polynomial], PendingTail]:
    """Greedy prefix-code parse into complete denominators plus a pending tail.

    Inverse of encode_stream: the returned polynomials are the canonical
    partial denominators, with the unit twist removed.
    """
    w = _as_word(word, field)
    out: list[Polynomial] = []
    pos = 0
    n = len(w)
    r = field.minus_one
    while True:
        d = 0
        lead = pos
        while lead < n and w[lead] == 0:
            lead += 1
            d += 1
        if lead == n:
            run = n - pos
            return out, PendingTail("zeros" if run else "boundary", zero_run=run)
        d += 1  # the announcement symbol itself
        r_new = w[lead]
        lc = field.neg(field.div(r, r_new))
        end = pos + 2 * d
        if end <= n:
            coeffs = [0] * (d + 1)
            coeffs[d] = lc
            for off in range(d):
                coeffs[d - 1 - off] = field.neg(field.div(w[lead + 1 + off], r_new))
            out.append(Polynomial(field, coeffs))
            pos = end
            r = r_new
        else:
            known = tuple(field.neg(field.div(s, r_new)) for s in w[lead + 1 : n])
            coeffs = [0] * (d + 1)
            coeffs[d] = lc
            for off, c in enumerate(known):
                coeffs[d - 1 - off] = c
            return out, PendingTail(
                "coeffs", degree=d, known=known, missing=end - n,
                head=Polynomial(field, coeffs),
            )


# ---------------------------------------------------------------------------
# Euclid on (x^n, numerator): the reference expansion


def _numerator(word: Word, field: FieldSpec) -> Polynomial:
    # G(a) = N / x^n with N = sum a_i x^(n-i)
    return Polynomial(field, word[::-1])


def _euclid_generic(D: Polynomial, N: Polynomial) -> list[Polynomial]:
    quots = []
    while not N.is_zero:
        q, r = divmod(D, N)
        quots.append(q)
        D, N = N, r
    return quots


def _euclid_gf2(n: int, word: Word, field: FieldSpec) -> list[Polynomial]:
    Nv = 0
    for i, s in enumerate(word):
        if s:
            Nv |= 1 << (n - 1 - i)
    Dv = 1 << n
    quots = []
    while Nv:
        q = 0
        db = Nv.bit_length() - 1
        while Dv and Dv.bit_length() - 1 >= db:
            sh = Dv.bit_length() - 1 - db
            q |= 1 << sh
            Dv ^= Nv << sh
        quots.append(q)
        Dv, Nv = Nv, Dv
    return [Polynomial(field, tuple((q >> i) & 1 for i in range(q.bit_length()))) for q in quots]


def _np_divmod(a: np.ndarray, b: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    # a, b int64 coefficient arrays (ascending), b nonzero with exact length
    db = len(b) - 1
    if len(a) - 1 < db:
        return np.zeros(0, dtype=np.int64), a
    a = a.copy()
    invl = pow(int(b[db]), p - 2, p)
    q = np.zeros(len(a) - db, dtype=np.int64)
    for k in range(len(a) - 1, db - 1, -1):
        c = int(a[k])
        if c:
            qc = c * invl % p
            q[k - db] = qc
            a[k - db : k + 1] = (a[k - db : k + 1] - qc * b) % p
    r = a[:db]
    nz = np.nonzero(r)[0]
    return q, (r[: nz[-1] + 1] if len(nz) else r[:0])


def _euclid_prime_np(n: int, word: Word, field: FieldSpec) -> list[Polynomial]:
    p = field.p
    N = np.array(word[::-1], dtype=np.int64)
    nz = np.nonzero(N)[0]
    N = N[: nz[-1] + 1] if len(nz) else N[:0]
    D = np.zeros(n + 1, dtype=np.int64)
    D[n] = 1
    quots = []
    while len(N):
        q, r = _np_divmod(D, N, p)
        quots.append(Polynomial(field, q.tolist()))
        D, N = N, r
    return quots


def _euclid_quotients(word: Word, field: FieldSpec) -> list[Polynomial]:
    n = len(word)
    if field.q == 2:
        return _euclid_gf2(n, word, field)
    if field.e == 1 and n >= 64:
        return _euclid_prime_np(n, word, field)
    D = Polynomial.monomial(field, n)
    return _euclid_generic(D, _numerator(word, field))


@dataclass(frozen=True)
class CFExpansion:
    """Expansion of a finite word: what its prefix determines.

    denominators lists the partial denominators whose blocks lie entirely
    within the word; pending describes the state at the cut.  terminated is
    true when the cut falls on a block boundary or inside a zero run, i.e.
    when the word is consistent with a sequence whose expansion is exactly
    the listed denominators.  padded_denominators is the full (finite)
    expansion of the zero-padded word a 0^inf.
    """

    field: FieldSpec
    n: int
    denominators: tuple[Polynomial, ...]
    pending: PendingTail
    terminated: bool
    determined_prefix_length: int
    padded_denominators: tuple[Polynomial, ...]

    def value(self) -> tuple[Polynomial, Polynomial]:
        """(P, Q) with P/Q = G(a 0^inf) built from the padded denominators."""
        pairs = convergents_from(self.padded_denominators, self.field)
        return pairs[-1].P, pairs[-1].Q


def expand(word: Sequence[int], field: FieldSpec) -> CFExpansion:
    """Expand a finite word, reporting exactly the prefix-determined data."""
    w = _as_word(word, field)
    n = len(w)
    padded = _euclid_quotients(w, field)
    for A in padded:
        if not (isinstance(A.degree, int) and A.degree >= 1):
            raise AssertionError(f"denominator of degree {A.degree} from Euclid")
    listed: list[Polynomial] = []
    s = 0
    pending: PendingTail | None = None
    for A in padded:
        d = A.degree
        if s + 2 * d <= n:
            listed.append(A)
            s += 2 * d
            continue
        if n - s >= d:
            # degree and leading coefficient are inside the word
            known_count = n - s - d
            known = tuple(A.coefficient(d - 1 - i) for i in range(known_count))
            head_coeffs = [0] * (d + 1)
            head_coeffs[d] = A.coefficient(d)
            for i, c in enumerate(known):
                head_coeffs[d - 1 - i] = c
            pending = PendingTail(
                "coeffs",
                degree=d,
                known=known,
                missing=s + 2 * d - n,
                head=Polynomial(field, head_coeffs),
            )
        else:
            run = n - s
            pending = PendingTail("zeros" if run else "boundary", zero_run=run)
        break
    if pending is None:
        run = n - s
        pending = PendingTail("zeros" if run else "boundary", zero_run=run)
    terminated = pending.kind != "coeffs"
    determined = n - pending.zero_run
    return CFExpansion(field, n, tuple(listed), pending, terminated, determined, tuple(padded))


# ---------------------------------------------------------------------------
# the transform and its inverse


def transform(word: Sequence[int], field: FieldSpec,
              method: Literal["auto", "fast", "reference"] = "fast") -> Word:
    """Length-preserving continued-fraction transform of a word.

    "fast" runs the online prediction-error algorithm; "reference" expands
    via Euclid and re-encodes the denominators.  Both agree symbol for
    symbol.
    """
    w = _as_word(word, field)
    if method in ("fast", "auto"):
        return elbmd_run(w, field).stream
    if method == "reference":
        return encode_stream(expand(w, field).padded_denominators, field, len(w))
    raise ValueError(f"unknown method {method!r}")


def inverse_transform(stream: Sequence[int], field: FieldSpec) -> Word:
    """The unique word mapping to `stream` (zero-padding rule applied)."""
    b = _as_word(stream, field)
    n = len(b)
    denoms, pending = decode_stream(b, field)
    if pending.kind == "coeffs":
        denoms = denoms + [pending.head]
    if not denoms:
        return (0,) * n
    pairs = convergents_from(denoms, field)
    return series_coefficients(pairs[-1].P, pairs[-1].Q, n)


# ---------------------------------------------------------------------------
# position classification


@dataclass(frozen=True)
class StreamSplit:
    """A stream split into the degree subword (D) and coefficient subword (C).

    tags[t] is ("D", i) or ("C", i): position t+1 of the stream is symbol i
    (1-based) of the corresponding subword.
    """

    word: Word
    d_word: Word
    c_word: Word
    tags: tuple[tuple[str, int], ...]


def split_stream(stream: Sequence[int], field: FieldSpec) -> StreamSplit:
    b = _as_word(stream, field)
    n = len(b)
    tags: list[tuple[str, int]] = []
    d_word: list[int] = []
    c_word: list[int] = []
    pos = 0
    while pos < n:
        # first half: zeros then the announcement symbol
        d = 0
        while pos < n and b[pos] == 0:
            d_word.append(b[pos])
            tags.append(("D", len(d_word)))
            pos += 1
            d += 1
        if pos == n:
            break
        d += 1
        d_word.append(b[pos])
        tags.append(("D", len(d_word)))
        pos += 1
        for _ in range(d):
            if pos == n:
                break
            c_word.append(b[pos])
            tags.append(("C", len(c_word)))
            pos += 1
    return StreamSplit(b, tuple(d_word), tuple(c_word), tuple(tags))


def split_transform(word: Sequence[int], field: FieldSpec) -> StreamSplit:
    """Split of the transformed word."""
    return split_stream(transform(word, field), field)


# ---------------------------------------------------------------------------
# iterated and shifted transforms


def iterate_transform(word: Sequence[int], field: FieldSpec, count: int) -> Word:
    if count < 0:
        raise ValueError("count must be >= 0")
    w = _as_word(word, field)
    for _ in range(count):
        w = transform(w, field)
    return w


def diagonal_transform(word: Sequence[int], field: FieldSpec) -> Word:
    """Limit of iterating the transform: symbol k of the k-fold image.

    Symbol k of the iterate stabilizes after k applications because the
    transform preserves prefixes, so the diagonal is computed lazily,
    one application per output symbol, keeping only the current iterate.
    """
    w = _as_word(word, field)
    out = []
    for k in range(len(w)):
        w = transform(w, field)
        out.append(w[k])
    return tuple(out)


def shifted_transforms(word: Sequence[int], field: FieldSpec) -> list[Word]:
    """Transforms of all suffixes a_i..a_n, i = 1..n."""
    w = _as_word(word, field)
    return [transform(w[i:], field) for i in range(len(w))]
