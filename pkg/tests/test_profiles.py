"""Tests for complexity profiles and their coupling to the transform.

The two 8-row deviation tables (extensions of the empty word and of 10 by
three bits) are reproduced verbatim as goldens; everything else is either
an exhaustive identity over small fields or a frozen count.
"""

import math
import random
from collections import Counter
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from cfiso import make_field
from cfiso.cfrac import inverse_transform, split_transform, transform
from cfiso.profiles import (
    GOOD_PROFILE_C,
    J_prime,
    classify,
    jump_heights,
    kth_largest_degree,
    kth_longest_zero_run,
    longest_zero_run,
    profile,
    profile_from_stream,
    reconstruct_profile,
    zero_runs,
)

F2 = make_field(2)
F3 = make_field(3)


def bits(s):
    return tuple(int(c) for c in s)


def random_word(rng, q, n):
    return tuple(rng.randrange(q) for _ in range(n))


class TestDeviationTables:
    # the two hand tables: all 3-bit extensions of the empty word and of 10
    TABLE_EMPTY = {
        "000": -3, "001": 3, "010": 1, "011": 1,
        "100": -1, "101": 1, "110": 1, "111": -1,
    }
    TABLE_10 = {
        "000": -3, "001": 3, "010": 1, "011": 1,
        "100": 1, "101": -1, "110": -1, "111": 1,
    }

    def test_extensions_of_empty(self):
        for ext, mv in self.TABLE_EMPTY.items():
            assert profile(bits(ext), F2).m[3] == mv

    def test_extensions_of_10(self):
        for ext, mv in self.TABLE_10.items():
            assert profile(bits("10") + bits(ext), F2).m[5] == mv

    def test_distribution_equality_after_balanced_prefix(self):
        # m(2k)=0 makes the cylinder distribution equal the unconditioned one
        assert sorted(self.TABLE_EMPTY.values()) == sorted(self.TABLE_10.values())
        for s in ["10", "1100", "110100"]:
            base = bits(s)
            assert profile(base, F2).m[len(base)] == 0
            dist = Counter(
                profile(base + ext, F2).m[len(base) + 3]
                for ext in product((0, 1), repeat=3)
            )
            assert dist == Counter(self.TABLE_EMPTY.values())


class TestSeries:
    def test_basic_shapes_and_identities(self):
        w = bits("110110010010")
        p = profile(w, F2)
        assert p.n == 12
        assert p.L[0] == 0 and p.m[0] == 0 and p.m_prime[0] == 0
        assert np.array_equal(p.m, 2 * p.L - np.arange(13))
        assert np.array_equal(p.m_prime[1:], p.m[:-1] - 1)
        assert p.L[12] == 6
        assert [h for _t, h in p.jumps] == [1, 1, 3, 1]
        assert np.array_equal(np.diff(p.J), np.zeros(12) + np.isin(np.arange(1, 13), [t for t, _ in p.jumps]))

    def test_zero_word(self):
        p = profile((0,) * 6, F2)
        assert np.array_equal(p.L, np.zeros(7, dtype=np.int64))
        assert np.array_equal(p.m, -np.arange(7))
        assert p.jumps == ()

    def test_empty_word(self):
        p = profile((), F2)
        assert p.n == 0 and list(p.L) == [0]

    def test_word_and_stream_routes_agree(self):
        for n in range(0, 11):
            for w in product((0, 1), repeat=n):
                a = profile(w, F2)
                b = profile_from_stream(transform(w, F2), F2)
                assert np.array_equal(a.L, b.L)
                assert np.array_equal(a.m, b.m)
                assert a.jumps == b.jumps

    @pytest.mark.parametrize("q", [3, 5])
    def test_routes_agree_random(self, q):
        f = make_field(q)
        rng = random.Random(q)
        for _ in range(30):
            w = random_word(rng, q, rng.randrange(1, 120))
            a = profile(w, f)
            b = profile_from_stream(transform(w, f), f)
            assert np.array_equal(a.L, b.L) and a.jumps == b.jumps


class TestStepRules:
    """One-step evolution: above the diagonal m always drops by one; on or
    below it exactly one symbol continues the drop and the rest reflect."""

    @pytest.mark.parametrize("q", [2, 3])
    def test_exhaustive_small(self, q):
        f = make_field(q)
        for n in range(0, 8 if q == 2 else 6):
            for w in product(range(q), repeat=n):
                mv = int(profile(w, f).m[n]) if n else 0
                nxt = Counter(
                    int(profile(w + (s,), f).m[n + 1]) for s in range(q)
                )
                if mv > 0:
                    assert nxt == Counter({mv - 1: q})
                else:
                    assert nxt == Counter({mv - 1: 1, 1 - mv: q - 1})

    def test_translation_by_prefix_state(self):
        # two prefixes with the same final m produce identical deviation
        # counts after any number of further symbols
        pairs = [(bits("1"), bits("010")), (bits("10"), bits("1100"))]
        for alpha, beta in pairs:
            ma = int(profile(alpha, F2).m[len(alpha)])
            mb = int(profile(beta, F2).m[len(beta)])
            assert ma == mb
            for t in range(1, 6):
                da = Counter(
                    int(profile(alpha + ext, F2).m[len(alpha) + t])
                    for ext in product((0, 1), repeat=t)
                )
                db = Counter(
                    int(profile(beta + ext, F2).m[len(beta) + t])
                    for ext in product((0, 1), repeat=t)
                )
                assert da == db


class TestSplitPositions:
    """The sign of m' routes each stream symbol: negative to the D-word at
    index (t - m')/2, otherwise to the C-word at the same formula."""

    @pytest.mark.parametrize("q,nmax", [(2, 9), (3, 6)])
    def test_index_map_exhaustive(self, q, nmax):
        f = make_field(q)
        for n in range(1, nmax + 1):
            for w in product(range(q), repeat=n):
                p = profile(w, f)
                sp = split_transform(w, f)
                for t in range(1, n + 1):
                    mp = int(p.m_prime[t])
                    kind, idx = sp.tags[t - 1]
                    assert kind == ("D" if mp < 0 else "C")
                    assert idx == (t - mp) // 2


class TestDWordCoupling:
    def test_nonzero_positions_are_attained_complexities(self):
        for n in range(1, 11):
            for w in product((0, 1), repeat=n):
                p = profile(w, F2)
                d_word = split_transform(w, F2).d_word
                attained = set(int(x) for x in p.L) - {0}
                nonzero = {j for j, s in enumerate(d_word, 1) if s != 0}
                assert nonzero == {v for v in attained if v <= len(d_word)}
                # complexities are at most the D-length, so nothing is lost
                assert max(attained, default=0) <= len(d_word)

    def test_profile_reconstruction_from_d_word(self):
        for n in range(0, 11):
            for w in product((0, 1), repeat=n):
                d_word = split_transform(w, F2).d_word
                L = reconstruct_profile(d_word, n)
                assert np.array_equal(L, profile(w, F2).L)

    @pytest.mark.parametrize("q", [3, 4])
    def test_reconstruction_random(self, q):
        f = make_field(q)
        rng = random.Random(q * 7)
        for _ in range(40):
            w = random_word(rng, q, rng.randrange(1, 100))
            d_word = split_transform(w, f).d_word
            assert np.array_equal(
                reconstruct_profile(d_word, len(w)), profile(w, f).L
            )

    def test_reconstruction_rejects_overfull_d_word(self):
        # a D-word announcing a block that completes beyond n is inconsistent
        with pytest.raises(ValueError):
            reconstruct_profile((1, 1, 1), 3)

    def test_jump_heights_equal_zero_runs_plus_one(self):
        for q in (2, 3):
            f = make_field(q)
            rng = random.Random(q + 2)
            for _ in range(50):
                w = random_word(rng, q, rng.randrange(1, 80))
                p = profile(w, f)
                d_word = split_transform(w, f).d_word
                expect, z = [], 0
                for s in d_word:
                    if s == 0:
                        z += 1
                    else:
                        expect.append(z + 1)
                        z = 0
                assert [h for _t, h in p.jumps] == expect


class TestDeviationPatternCounts:
    """Occurrences of m(t)=k in 1..n are in bijection with substrings of the
    D-word: alpha 0^{|k|} ending at j for k <= 0 (t = 2j - |k|, plus a head
    run of |k| zeros), and 0^{k-1} alpha ending at j for k > 0 (t = 2j - k,
    needing block degree >= k)."""

    @staticmethod
    def _count_from_d_word(d_word, n, k):
        cnt = 0
        if k <= 0:
            kk = -k
            for j in range(1, len(d_word) + 1):
                t = 2 * j - kk
                if not (1 <= t <= n):
                    continue
                if kk == 0:
                    ok = d_word[j - 1] != 0
                else:
                    ok = (
                        j - kk - 1 >= 0
                        and d_word[j - kk - 1] != 0
                        and all(s == 0 for s in d_word[j - kk : j])
                    ) or (j == kk and all(s == 0 for s in d_word[:j]))
                cnt += ok
        else:
            z = 0
            for j, s in enumerate(d_word, 1):
                if s == 0:
                    z += 1
                else:
                    if z >= k - 1 and 1 <= 2 * j - k <= n:
                        cnt += 1
                    z = 0
        return cnt

    @pytest.mark.parametrize("q,nmax", [(2, 10), (3, 6)])
    def test_exhaustive(self, q, nmax):
        f = make_field(q)
        for n in range(1, nmax + 1):
            for w in product(range(q), repeat=n):
                p = profile(w, f)
                d_word = split_transform(w, f).d_word
                have = Counter(int(x) for x in p.m[1:])
                for k in range(-n, n + 1):
                    assert have.get(k, 0) == self._count_from_d_word(d_word, n, k), (w, k)


class TestJumpCounting:
    def test_jump_heights_counter(self):
        p = profile(bits("110110010010"), F2)
        assert jump_heights(p) == Counter({1: 3, 3: 1})

    def test_J_equals_nonzeros_plus_flag(self):
        # at even times, J counts the nonzeros in the first half of the
        # D-word, plus one while the last block is still being confirmed
        for n in range(1, 7):
            for w in product((0, 1), repeat=2 * n):
                p = profile(w, F2)
                d_word = split_transform(w, F2).d_word
                nz = sum(1 for s in d_word[:n] if s != 0)
                delta = 1 if p.m[2 * n] > 0 else 0
                assert int(p.J[2 * n]) == nz + delta

    def test_J_prime_values_and_errors(self):
        w = bits("110110010010")
        p = profile(w, F2)
        for t in range(0, 13, 2):
            expect = int(p.J[t]) - (1 if p.m[t] > 0 else 0)
            assert J_prime(p, t) == expect
        with pytest.raises(ValueError):
            J_prime(p, 3)
        with pytest.raises(ValueError):
            J_prime(p, 14)

    def test_J_prime_exhaustive_counts(self):
        # frozen: over all 64 words of F_2^6 the completed-jump count J'(6)
        # is distributed as 8*C(3,j); each D-word value has 2^3 preimages
        dist = Counter(J_prime(profile(w, F2), 6) for w in product((0, 1), repeat=6))
        assert dist == Counter({0: 8, 1: 24, 2: 24, 3: 8})
        # ternary analogue: 9*C(2,j)*2^j over F_3^4
        dist3 = Counter(J_prime(profile(w, F3), 4) for w in product(range(3), repeat=4))
        assert dist3 == Counter({0: 9, 1: 36, 2: 36})

    @pytest.mark.parametrize("q,tmax", [(2, 12), (3, 7)])
    def test_expected_J_matches_closed_form(self, q, tmax):
        # exact mean of J(t) over the full cube, as rationals
        for t in range(1, tmax + 1):
            total = sum(
                int(profile(w, make_field(q)).J[t])
                for w in product(range(q), repeat=t)
            )
            mean = Fraction(total, q**t)
            if t % 2 == 0:
                expect = (
                    Fraction(t, 2) * Fraction(q - 1, q)
                    + Fraction(1, q + 1)
                    - Fraction(1, (q + 1) * q**t)
                )
            else:
                expect = (
                    Fraction(t, 2) * Fraction(q - 1, q)
                    + Fraction(q**2 + 1, 2 * q * (q + 1))
                    - Fraction(1, (q + 1) * q**t)
                )
            assert mean == expect, (q, t)

    def test_height_distribution_is_geometric(self):
        # uniform words give heights with P(h=k) = (q-1)/q^k; 2000 jumps
        # per field, exact-binomial 4 sigma guard, fixed seed
        for q in (2, 3):
            f = make_field(q)
            rng = random.Random(100 + q)
            heights = []
            while len(heights) < 2000:
                w = random_word(rng, q, 512)
                heights.extend(h for _t, h in profile(w, f).jumps)
            n = len(heights)
            for k in (1, 2, 3):
                pk = (q - 1) / q**k
                got = sum(1 for h in heights if h == k)
                sigma = math.sqrt(n * pk * (1 - pk))
                assert abs(got - n * pk) < 4 * sigma, (q, k, got, n * pk)


class TestExtremes:
    def test_max_deviation_equals_longest_zero_run(self):
        # balanced endpoints: max |m| over 1..2n is the longest zero run in
        # the first half of the D-word, plus one
        for n in range(2, 6):
            for w in product((0, 1), repeat=2 * n):
                p = profile(w, F2)
                if p.m[2 * n] != 0:
                    continue
                d_word = split_transform(w, F2).d_word
                assert max(abs(int(x)) for x in p.m[1:]) == longest_zero_run(d_word[:n]) + 1

    def test_zero_run_helpers(self):
        b = bits("0011010001")
        assert zero_runs(b) == [2, 1, 3]
        assert longest_zero_run(b) == 3
        assert kth_longest_zero_run(b, 1) == 3
        assert kth_longest_zero_run(b, 2) == 2
        assert kth_longest_zero_run(b, 3) == 1
        assert kth_longest_zero_run(b, 4) == 0
        with pytest.raises(ValueError):
            kth_longest_zero_run(b, 0)
        assert zero_runs(()) == []
        assert zero_runs(b, upto=5) == [2, 1]

    def test_kth_largest_degree_against_d_word(self):
        for q in (2, 3):
            f = make_field(q)
            rng = random.Random(q * 31)
            for _ in range(40):
                w = random_word(rng, q, rng.randrange(2, 60))
                p = profile(w, f)
                d_word = split_transform(w, f).d_word
                for t in range(0, len(w) + 1, 2):
                    hs, z = [], 0
                    for s in d_word[: t // 2]:
                        if s == 0:
                            z += 1
                        else:
                            hs.append(z + 1)
                            z = 0
                    hs.sort(reverse=True)
                    for k in (1, 2, 3):
                        expect = hs[k - 1] if len(hs) >= k else 0
                        assert kth_largest_degree(p, k, t) == expect

    def test_kth_largest_degree_golden(self):
        p = profile(bits("110110010010"), F2)
        assert kth_largest_degree(p, 1) == 3
        assert kth_largest_degree(p, 2) == 1
        assert kth_largest_degree(p, 4) == 1
        assert kth_largest_degree(p, 5) == 0


class TestClassification:
    def test_zero_word_is_maximally_bad(self):
        cls = classify(profile((0,) * 16, F2))
        assert cls.d_perfect == 16
        assert cls.good_C == pytest.approx((16 - 1) / math.log2(16))
        assert not cls.good

    def test_bounded_streams_give_perfect_profiles(self):
        # the preimage of the all-ones stream keeps |m| <= 1 everywhere
        for n in (4, 9, 33):
            w = inverse_transform((1,) * n, F2)
            cls = classify(profile(w, F2))
            assert cls.d_perfect == 1
            assert cls.good

    def test_random_long_word_is_good(self):
        rng = random.Random(424242)
        w = tuple(rng.randrange(2) for _ in range(4096))
        cls = classify(profile(w, F2))
        assert cls.good and cls.good_C <= GOOD_PROFILE_C

    def test_d_perfect_matches_stream_bound(self):
        # |m| <= d on words exactly mirrors zero-run bounds on streams
        rng = random.Random(7)
        for _ in range(20):
            n = rng.randrange(4, 60)
            b = tuple(rng.randrange(2) for _ in range(n))
            w = inverse_transform(b, F2)
            p = profile(w, F2)
            assert classify(p).d_perfect == max(abs(int(x)) for x in p.m[1:])
