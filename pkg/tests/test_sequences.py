import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lacspec.errors import NumericalError
from lacspec.sequences import (
    LacunarityReport,
    Sequence,
    TailSchedule,
    build_counterexample,
    build_greedy,
    check_hadamard,
    difference_set,
    greedy_growth_table,
    growth_bound,
    strong_zygmund_profile,
    zygmund_constant,
)


def zygmund_brute(vals, L):
    """Quadruple-loop oracle for the collision count."""
    n = len(vals)
    best = 0
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            d = vals[k] - vals[l]
            c = 0
            for k2 in range(n):
                for l2 in range(n):
                    if k2 != l2 and abs(d - (vals[k2] - vals[l2])) <= L:
                        c += 1
            best = max(best, c)
    return best


def greedy_oracle(count, threshold_of_n):
    """Set-based reimplementation: materialize the forbidden set per step."""
    lam = [1]
    while len(lam) < count:
        L = threshold_of_n(len(lam))
        forbidden = {
            a + b - c + p
            for a in lam
            for b in lam
            for c in lam
            for p in range(-L, L + 1)
        }
        x = 1
        while x in forbidden:
            x += 1
        lam.append(x)
    return lam


class TestSequence:
    def test_strictly_increasing_enforced(self):
        with pytest.raises(ValueError):
            Sequence((1, 1, 2))
        with pytest.raises(ValueError):
            Sequence((3, 2))

    def test_integer_detection(self):
        assert Sequence((1, 2, 4)).integer_valued
        assert not Sequence((1.0, 2.5)).integer_valued

    def test_text_roundtrip(self):
        seq = Sequence((1, 3, 7, 15))
        assert Sequence.from_text(seq.to_text()) == seq
        seqf = Sequence((0.5, 1.25))
        assert Sequence.from_text(seqf.to_text()) == seqf

    def test_tail_is_one_based(self):
        seq = Sequence((1, 3, 7, 15))
        assert seq.tail(1) == seq
        assert seq.tail(3).values == (7, 15)


class TestTailSchedule:
    def test_value_steps(self):
        sch = TailSchedule(((1, 1), (2, 6), (5, 14)))
        assert [sch.value(L) for L in (1, 2, 3, 4, 5, 9)] == [1, 6, 6, 6, 14, 14]

    def test_threshold_inverts(self):
        sch = TailSchedule(((1, 1), (2, 6), (3, 14)))
        assert sch.threshold_for(1) == 1
        assert sch.threshold_for(5) == 1
        assert sch.threshold_for(6) == 2
        assert sch.threshold_for(14) == 3
        assert sch.threshold_for(1000) == 3

    def test_validation(self):
        with pytest.raises(ValueError):
            TailSchedule(((2, 1),))  # must start at L = 1
        with pytest.raises(ValueError):
            TailSchedule(((1, 5), (2, 3)))  # decreasing M
        with pytest.raises(ValueError):
            TailSchedule(((1, 9),)).threshold_for(3)


class TestHadamard:
    def test_geometric_passes(self):
        rep = check_hadamard(Sequence((1, 2, 4, 8)), 2.0)
        assert rep.passes and rep.constant == 2.0

    def test_short_gap_fails(self):
        rep = check_hadamard(Sequence((1, 2, 3)), 2.0)
        assert not rep.passes
        assert rep.constant == pytest.approx(1.5)
        assert rep.witness == ((1, 2),)

    def test_greedy_output_passes(self):
        rep = check_hadamard(build_greedy(4), 2.0)
        assert rep.passes
        assert rep.constant == pytest.approx(15 / 7)

    def test_degenerate_short_sequence(self):
        rep = check_hadamard(Sequence((5,)), 2.0)
        assert rep.passes and rep.constant == math.inf

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            check_hadamard(Sequence((-1, 2, 4)), 2.0)


class TestZygmundConstant:
    def test_two_far_points_only_self_pair(self):
        assert zygmund_constant(Sequence((0, 10)), 1).constant == 1

    def test_small_geometric_matches_brute_force(self):
        vals = (1, 2, 4, 8)
        rep = zygmund_constant(Sequence(vals), 1)
        assert rep.constant == 3
        assert rep.constant == zygmund_brute(vals, 1)

    def test_counterexample_k6_matches_brute_force_twice(self):
        seq = build_counterexample(6)
        first = zygmund_constant(seq, 1).constant
        second = zygmund_constant(build_counterexample(6), 1).constant
        assert first == second == zygmund_brute(list(seq), 1)

    def test_witness_attains_the_count(self):
        seq = Sequence((1, 2, 4, 8))
        rep = zygmund_constant(seq, 1)
        table = difference_set(seq)
        for k, l in rep.witness:
            d = seq[k] - seq[l]
            # distinct differences here are unique per ordered pair
            assert sum(1 for d2 in table if abs(d - d2) <= 1) == rep.constant

    def test_threshold_below_one_rejected(self):
        with pytest.raises(ValueError):
            zygmund_constant(Sequence((1, 2)), 0.5)

    @given(
        st.lists(st.integers(0, 80), min_size=2, max_size=7, unique=True),
        st.integers(1, 4),
    )
    @settings(max_examples=60, deadline=None)
    def test_reverse_negate_symmetry(self, vals, L):
        vals = sorted(vals)
        mirrored = sorted(-v for v in vals)
        a = zygmund_constant(Sequence(tuple(vals)), L).constant
        b = zygmund_constant(Sequence(tuple(mirrored)), L).constant
        assert a == b

    @given(st.lists(st.integers(0, 80), min_size=2, max_size=7, unique=True))
    @settings(max_examples=60, deadline=None)
    def test_monotone_in_threshold(self, vals):
        seq = Sequence(tuple(sorted(vals)))
        counts = [zygmund_constant(seq, L).constant for L in (1, 2, 4, 8)]
        assert counts == sorted(counts)

    @given(
        st.lists(st.integers(0, 40), min_size=2, max_size=6, unique=True),
        st.integers(1, 3),
    )
    @settings(max_examples=40, deadline=None)
    def test_matches_brute_force(self, vals, L):
        vals = sorted(vals)
        assert zygmund_constant(Sequence(tuple(vals)), L).constant == zygmund_brute(
            vals, L
        )


class TestStrongProfile:
    def test_hadamard_powers_uniformly_flat(self):
        seq = Sequence(tuple(4**k for k in range(1, 13)))
        reports = strong_zygmund_profile(seq, TailSchedule.constant(1), [1, 2, 4])
        # scale-separated differences: only the self pair ever collides
        assert [r.constant for r in reports] == [1, 1, 1]

    def test_counterexample_count_at_least_threshold(self):
        seq = build_counterexample(20)
        (rep,) = strong_zygmund_profile(seq, TailSchedule.constant(1), [8])
        assert rep.constant >= 8

    def test_two_element_tail(self):
        seq = Sequence((1, 5, 50))
        (rep,) = strong_zygmund_profile(seq, TailSchedule(((1, 2),)), [1])
        assert rep.constant == 1

    def test_tail_start_beyond_truncation(self):
        seq = Sequence((1, 5, 50))
        with pytest.raises(ValueError, match="M\\(1\\)"):
            strong_zygmund_profile(seq, TailSchedule(((1, 3),)), [1])

    def test_witness_indices_refer_to_full_sequence(self):
        seq = build_counterexample(6)
        (rep,) = strong_zygmund_profile(seq, TailSchedule(((1, 3),)), [1])
        assert all(k >= 2 and l >= 2 for k, l in rep.witness)


class TestGreedy:
    def test_first_four_terms(self):
        assert build_greedy(4).values == (1, 3, 7, 15)
        assert greedy_oracle(4, lambda n: 1) == [1, 3, 7, 15]

    def test_single_term(self):
        assert build_greedy(1).values == (1,)

    def test_matches_set_oracle_constant_threshold(self):
        assert list(build_greedy(30)) == greedy_oracle(30, lambda n: 1)

    def test_matches_set_oracle_stepped_schedule(self):
        sch = TailSchedule(((1, 1), (2, 6), (3, 14)))

        def thr(n):
            return 3 if n >= 14 else (2 if n >= 6 else 1)

        assert list(build_greedy(25, sch)) == greedy_oracle(25, thr)

    def test_growth_certificate_two_hundred_terms(self):
        table = greedy_growth_table(200)
        assert len(table) == 200
        for n, value, L, bound in table[1:]:
            assert value <= bound == growth_bound(n - 1, L)
        vals = [row[1] for row in table]
        assert vals == sorted(vals)

    def test_self_certification_on_own_schedule(self):
        # within the scheduled tail, no two distinct difference pairs come
        # within L of each other: the collision count is the self pair alone
        seq = build_greedy(200)
        (rep,) = strong_zygmund_profile(seq, TailSchedule.constant(1), [1])
        assert rep.constant == 1

    def test_self_certification_stepped_schedule(self):
        sch = TailSchedule(((1, 1), (2, 6), (3, 14)))
        seq = build_greedy(40, sch)
        for rep in strong_zygmund_profile(seq, sch, [1, 2, 3]):
            assert rep.constant == 1

    def test_count_validation(self):
        with pytest.raises(ValueError):
            build_greedy(0)


class TestCounterexample:
    def test_smallest_cases(self):
        assert build_counterexample(1).values == (4, 5)
        assert build_counterexample(3).values == (4, 5, 16, 18, 64, 67)

    def test_rejects_empty_and_huge(self):
        with pytest.raises(ValueError):
            build_counterexample(0)
        with pytest.raises(OverflowError):
            build_counterexample(10_001)

    def test_exact_beyond_word_size(self):
        seq = build_counterexample(64)
        assert seq.values[-1] == 4**64 + 64
        assert seq.integer_valued

    @staticmethod
    def _block_max_representations(K):
        """Max over dyadic blocks [4^n, 4^{n+1}) of the representation count
        of m as a difference, by brute force over all ordered pairs."""
        vals = list(build_counterexample(K))
        counts = {}
        for a in vals:
            for b in vals:
                m = a - b
                if m > 0:
                    counts[m] = counts.get(m, 0) + 1
        per_block = {}
        for m, c in counts.items():
            n = 0
            while 4 ** (n + 1) <= m:
                n += 1
            per_block[n] = max(per_block.get(n, 0), c)
        return per_block

    def test_difference_representations_bounded_by_five(self):
        for K in (8, 12, 16, 20):
            per_block = self._block_max_representations(K)
            assert max(per_block.values()) <= 5

    def test_block_maxima_stabilize_as_truncation_grows(self):
        maxima = [
            max(self._block_max_representations(K).values())
            for K in (12, 16, 20)
        ]
        assert len(set(maxima)) == 1

    def test_witness_family_from_consecutive_pairs(self):
        # (lambda^1_{k+l} - lambda^0_{k+l}) - (lambda^1_k - lambda^0_k) = l,
        # so the collision count at threshold L is at least L for L <= K/2.
        K = 16
        seq = build_counterexample(K)
        for L in (2, 4, 8):
            assert zygmund_constant(seq, L).constant >= L


def test_report_serializes_flat():
    rep = zygmund_constant(Sequence((1, 2, 4, 8)), 1)
    d = rep.to_dict()
    assert d["constant"] == 3 and d["kind"] == "zygmund"
    assert isinstance(d["witness"], list)
    inf_rep = LacunarityReport("hadamard", 2.0, math.inf, (), True)
    assert inf_rep.to_dict()["constant"] == "inf"
