"""Tests for the 2-adic approximation lattice and its output map.

The from-scratch pair finders are checked against a linear brute-force scan
(centered residues, early cut-off) that is exact by construction.  The
incremental profile is then checked against the from-scratch finders, and
the output map is checked to be a bijection on every prefix length, which
together with its causal construction makes it distance preserving.
"""

import math
import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfiso.adic2 import (
    AdicProfile,
    InvariantError,
    adic_profile,
    adic_step,
    initial_state,
    minimal_pair,
    phi,
    unit_pair,
)


def brute_phi(a_k, k, odd):
    """Exact minimal max-norm by scanning |q| upward with centered residues.

    For fixed q the best numerator is the centered residue of q*a_k, and any
    candidate with |q| >= best cannot win, so the scan is finite.
    """
    mod = 1 << k
    best = None
    q = 1 if odd else 0
    step = 2 if odd else 1
    while best is None or q < best:
        if q == 0:
            f = mod
        else:
            pr = (q * a_k) % mod
            p = pr if pr <= mod - pr else pr - mod
            f = max(abs(p), q)
        if best is None or f < best:
            best = f
        q += step
    return best


def in_lattice(pair, a_k, k):
    c, d = pair
    return (d * a_k - c) % (1 << k) == 0


class TestMinimalPair:
    def test_zero_prefix(self):
        for k in range(1, 20):
            assert minimal_pair(0, k) == (0, 1)

    def test_one(self):
        assert minimal_pair(1, 1) == (1, 1)

    def test_exhaustive_oracle(self):
        for k in range(1, 11):
            for a in range(1 << k):
                pair = minimal_pair(a, k)
                assert in_lattice(pair, a, k), (a, k)
                assert phi(*pair) == brute_phi(a, k, odd=False), (a, k)

    def test_canonical_tie_break(self):
        # among all vectors achieving the minimum, the reported one is first
        # under (|q|, sign q, sign p, |p|)
        for k in range(1, 9):
            for a in range(1 << k):
                pair = minimal_pair(a, k)
                f = phi(*pair)
                mod = 1 << k
                ties = [
                    (p, q)
                    for q in range(-f, f + 1)
                    for p in range(-f, f + 1)
                    if (p, q) != (0, 0)
                    and max(abs(p), abs(q)) == f
                    and (q * a - p) % mod == 0
                ]
                key = lambda w: (abs(w[1]), w[1] < 0, w[0] < 0, abs(w[0]))
                assert pair == min(ties, key=key), (a, k)

    def test_alternate_tie_break_same_norm(self):
        for k in range(1, 9):
            for a in range(1 << k):
                assert phi(*minimal_pair(a, k)) == phi(
                    *minimal_pair(a, k, prefer="alternate")
                )

    def test_validation(self):
        with pytest.raises(ValueError):
            minimal_pair(0, 0)
        with pytest.raises(ValueError):
            minimal_pair(3, 4, prefer="shortest")


class TestUnitPair:
    def test_exhaustive_oracle(self):
        for k in range(1, 11):
            for a in range(1 << k):
                pair = unit_pair(a, k)
                assert pair[1] & 1, (a, k)
                assert in_lattice(pair, a, k), (a, k)
                assert phi(*pair) == brute_phi(a, k, odd=True), (a, k)

    def test_never_shorter_than_minimal(self):
        for k in range(1, 11):
            for a in range(1 << k):
                assert phi(*unit_pair(a, k)) >= phi(*minimal_pair(a, k))

    def test_single_high_bit_is_worst_case(self):
        # a = 2^(k-1): every odd q gives numerator +-2^(k-1), so the odd
        # minimum is stuck at 2^(k-1) while the free minimum is (0, 2)
        for k in range(3, 14):
            assert phi(*unit_pair(1 << (k - 1), k)) == 1 << (k - 1)
            assert phi(*minimal_pair(1 << (k - 1), k)) == 2

    def test_box_stability_large_k(self):
        # widening the coefficient window around the reduced basis must not
        # reveal anything shorter than what the selector returns
        from cfiso.adic2 import _scratch_basis

        def box_best(u, v, radius, odd):
            best = None
            for al in range(-radius, radius + 1):
                for be in range(-radius, radius + 1):
                    w = (al * u[0] + be * v[0], al * u[1] + be * v[1])
                    if w == (0, 0) or (odd and not (w[1] & 1)):
                        continue
                    f = phi(*w)
                    if best is None or f < best:
                        best = f
            return best

        rng = random.Random(9)
        for _ in range(120):
            k = rng.randint(13, 200)
            a = rng.getrandbits(k)
            u, v = _scratch_basis(a, k)
            assert box_best(u, v, 3, False) == box_best(u, v, 8, False)
            assert box_best(u, v, 3, True) == box_best(u, v, 8, True)


class TestAdicStep:
    def test_initial_state(self):
        st = initial_state()
        assert st.k == 0 and st.a_k == 0
        assert st.minimal == (0, 1) and st.unit == (0, 1)
        assert st.a_bits == () and st.j_a == 0 and st.m_a == 0

    def test_validation(self):
        st = initial_state()
        with pytest.raises(ValueError):
            adic_step(st, 2)
        with pytest.raises(ValueError):
            adic_step(st, 1, prefer="nope")

    def test_invariants_random_walk(self):
        rng = random.Random(17)
        for _ in range(12):
            st = initial_state()
            prev_min = prev_unit = 1
            for _ in range(90):
                st = adic_step(st, rng.getrandbits(1))
                u, v = st.basis
                assert abs(u[0] * v[1] - u[1] * v[0]) == 1 << st.k
                assert in_lattice(st.minimal, st.a_k, st.k)
                assert in_lattice(st.unit, st.a_k, st.k)
                assert st.unit[1] & 1
                assert phi(*st.minimal) >= prev_min
                assert phi(*st.unit) >= prev_unit
                prev_min, prev_unit = phi(*st.minimal), phi(*st.unit)

    def test_matches_scratch_reduction(self):
        rng = random.Random(5)
        for _ in range(6):
            st = initial_state()
            a_k = 0
            for i in range(110):
                b = rng.getrandbits(1)
                st = adic_step(st, b)
                a_k += b << i
                assert phi(*st.minimal) == phi(*minimal_pair(a_k, i + 1))
                assert phi(*st.unit) == phi(*unit_pair(a_k, i + 1))
                assert st.minimal == minimal_pair(a_k, i + 1)

    def test_step_equals_profile(self):
        rng = random.Random(3)
        for _ in range(15):
            word = [rng.getrandbits(1) for _ in range(60)]
            st = initial_state()
            for b in word:
                st = adic_step(st, b)
            prof = adic_profile(word)
            assert st.a_bits == prof.a_bits
            assert st.minimal == prof.final_pair
            assert st.unit == prof.final_unit
            assert st.m_a == prof.m_a[-1]


class TestAdicProfile:
    def test_zero_stream(self):
        prof = adic_profile([0] * 8)
        assert prof.a_bits == (0,) * 8
        assert prof.j_a == (0,) * 8
        assert prof.m_a == tuple(-(i + 1) for i in range(8))
        assert prof.phi2 == (0,) * 8
        assert prof.final_pair == (0, 1) and prof.final_unit == (0, 1)

    def test_one_then_zeros(self):
        prof = adic_profile([1, 0, 0, 0, 0, 0])
        assert prof.a_bits == (1, 0, 0, 0, 0, 0)
        assert prof.j_a == (1,) * 6
        assert prof.m_a == tuple(2 - (i + 1) for i in range(6))
        assert prof.final_unit == (1, 1)
        assert prof.final_pair == (1, 1)
        assert prof.phi2 == (0,) * 6

    def test_deviation_identity(self):
        rng = random.Random(40)
        word = [rng.getrandbits(1) for _ in range(257)]
        prof = adic_profile(word)
        for i in range(len(word)):
            assert prof.m_a[i] == 2 * prof.j_a[i] - (i + 1)
        assert len(prof.pairs) == len(word) == prof.n

    def test_empty_word(self):
        prof = adic_profile([])
        assert prof.n == 0 and prof.a_bits == ()
        assert prof.final_pair == (0, 1)

    def test_validation(self):
        with pytest.raises(ValueError):
            adic_profile([0, 1, 2])
        with pytest.raises(ValueError):
            adic_profile([0, 1], prefer="x")

    def test_phi2_integer_when_power_of_two(self):
        prof = adic_profile([0, 0, 1, 0, 0])
        for val, pair in zip(prof.phi2, prof.pairs):
            f = phi(*pair)
            if f == 1 << round(val):
                assert isinstance(val, int)
            assert math.isclose(val, math.log2(f))

    def test_bijective_on_every_prefix_length(self):
        # output bit t depends only on input bits 1..t by construction, so
        # prefix bijectivity at every length makes the map an isometry
        for n in range(1, 11):
            images = {adic_profile(w).a_bits for w in product((0, 1), repeat=n)}
            assert len(images) == 1 << n, n

    def test_first_difference_preserved(self):
        words = list(product((0, 1), repeat=8))
        table = {w: adic_profile(w).a_bits for w in words}
        for i, w in enumerate(words):
            for x in words[i + 1 :]:
                first = next(j for j in range(8) if w[j] != x[j])
                afirst = next(j for j in range(8) if table[w][j] != table[x][j])
                assert afirst == first, (w, x)

    def test_alternate_tie_break_also_bijective(self):
        for n in range(1, 9):
            images = {
                adic_profile(w, prefer="alternate").a_bits
                for w in product((0, 1), repeat=n)
            }
            assert len(images) == 1 << n, n

    def test_tie_break_divergence_reported(self):
        # the two tie-breaks give two different bijections; equality of the
        # output streams is NOT an invariant, so record how often they split
        # rather than asserting either way
        diverged = 0
        total = 0
        for n in range(1, 10):
            for w in product((0, 1), repeat=n):
                total += 1
                if adic_profile(w).a_bits != adic_profile(w, prefer="alternate").a_bits:
                    diverged += 1
        assert 0 < diverged < total
        # frozen example: first length-4 split
        assert adic_profile((1, 0, 1, 0)).a_bits == (1, 0, 1, 1)
        assert adic_profile((1, 0, 1, 0), prefer="alternate").a_bits == (1, 0, 1, 0)

    def test_balanced_output_on_random_stream(self):
        rng = random.Random(12)
        n = 1 << 12
        word = [rng.getrandbits(1) for _ in range(n)]
        prof = adic_profile(word)
        # a bijection maps uniform bits to uniform bits; 6 sigma guard
        assert abs(prof.m_a[-1]) < 6 * math.sqrt(n)
        assert abs(prof.phi2[-1] - n / 2) < 6 * math.sqrt(n)

    def test_phi2_nondecreasing(self):
        rng = random.Random(77)
        word = [rng.getrandbits(1) for _ in range(300)]
        prof = adic_profile(word)
        assert all(a <= b for a, b in zip(prof.phi2, prof.phi2[1:]))

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=64))
    @settings(max_examples=60, deadline=None)
    def test_profile_properties(self, word):
        prof = adic_profile(word)
        a_k = 0
        for i, b in enumerate(word):
            a_k += b << i
            assert in_lattice(prof.pairs[i], a_k, i + 1)
        assert all(b in (0, 1) for b in prof.a_bits)
        assert prof.m_a[-1] == 2 * prof.j_a[-1] - len(word)

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=40), st.integers(0, 1))
    @settings(max_examples=40, deadline=None)
    def test_appending_preserves_prefix(self, word, extra):
        head = adic_profile(word).a_bits
        full = adic_profile(word + [extra]).a_bits
        assert full[: len(word)] == head
