from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flagpath.errors import (
    DimensionMismatch,
    IllegalSwitch,
    InfeasiblePrefix,
    NotAPartition,
    WrongStepMultiset,
)
from flagpath.flag import reachable_configurations
from flagpath.lattice import (
    BinSpec,
    StepSequence,
    boundary_mask,
    complete_to_configuration,
    configuration_array,
    configuration_words,
    is_configuration_path,
    is_configuration_word,
    multiset_words,
    partition_from_path,
    path_from_partition,
    prefix_counts,
    switch_steps,
    word_array,
)
from flagpath.partition import OrderedPartition
from oracles import satisfies_every_prefix, specs


def seq(*steps, k=3):
    return StepSequence(steps, k)


class TestParsing:
    def test_ne_letters_map_to_axes(self):
        p = StepSequence.parse("NNE")
        assert p.steps == (1, 1, 2) and p.k == 2
        assert p.to_text() == "NNE"

    def test_digit_paths(self):
        p = StepSequence.parse("321")
        assert p.steps == (3, 2, 1) and p.k == 3
        assert str(p) == "321"

    def test_axis_out_of_range(self):
        with pytest.raises(DimensionMismatch):
            StepSequence((1, 4), 3)

    def test_letters_with_wrong_k(self):
        with pytest.raises(DimensionMismatch):
            StepSequence.parse("NE", k=3)

    def test_binspec_rejects_zero(self):
        with pytest.raises(ValueError):
            BinSpec((1, 0), 2)
        with pytest.raises(ValueError):
            BinSpec((1, 1), 0)

    def test_binspec_derived_fields(self):
        s = BinSpec((2, 4, 3), 3)
        assert (s.k, s.L, s.size) == (3, 9, 27)
        assert s.totals == (6, 12, 9)
        assert s.partial_sums == (2, 6, 9)


class TestPrefixCounts:
    def test_rows_sum_to_length_and_grow(self):
        pc = prefix_counts(seq(3, 2, 1, 3, 2, 1))
        assert len(pc) == 7
        for t in range(7):
            assert sum(pc[t]) == t
        for t in range(6):
            assert all(a <= b for a, b in zip(pc[t], pc[t + 1]))
        assert pc[3] == (1, 1, 1)


class TestPredicate:
    def test_one_turn_is_always_valid(self):
        assert is_configuration_path(seq(3, 2, 1), BinSpec((1, 1, 1), 1))

    def test_two_early_axis_one_steps_fail(self):
        assert not is_configuration_path(seq(1, 2, 1, 3, 2, 3), BinSpec((1, 1, 1), 2))

    def test_reversed_blocks_pass(self):
        assert is_configuration_path(seq(3, 2, 1, 3, 2, 1), BinSpec((1, 1, 1), 2))

    def test_wrong_multiset_is_an_error(self):
        with pytest.raises(WrongStepMultiset):
            is_configuration_path(seq(1, 1, 1, 3, 2, 3), BinSpec((1, 1, 1), 2))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            is_configuration_path(StepSequence((1, 2), 2), BinSpec((1, 1, 1), 1))

    @pytest.mark.parametrize("spec", list(specs(12, max_L=4, max_n=3)), ids=lambda s: f"{s.l}-{s.n}")
    def test_agrees_with_process_reachability(self, spec):
        reach = reachable_configurations(spec)
        for w in multiset_words(spec.totals):
            assert is_configuration_word(w, spec.l, spec.n) == (w in reach)

    def test_every_prefix_check_is_strictly_stronger(self):
        # It implies the boundary form, but rejects the valid one-turn path N E.
        for spec in specs(7):
            for w in multiset_words(spec.totals):
                if satisfies_every_prefix(w, spec.l):
                    assert is_configuration_word(w, spec.l, spec.n)
        assert is_configuration_path(StepSequence.parse("NE"), BinSpec((1, 1), 1))
        assert not satisfies_every_prefix((1, 2), (1, 1))


class TestSwitch:
    def test_simple_switch(self):
        assert switch_steps(StepSequence((1, 2), 2), 1, 2).steps == (2, 1)

    def test_switch_keeps_configuration(self):
        out = switch_steps(seq(3, 2, 1, 3, 2, 1), 2, 4)
        assert out.steps == (3, 3, 1, 2, 2, 1)
        assert is_configuration_path(out, BinSpec((1, 1, 1), 2))

    def test_illegal_direction(self):
        with pytest.raises(IllegalSwitch):
            switch_steps(StepSequence((2, 1), 2), 1, 2)

    def test_illegal_positions(self):
        with pytest.raises(IllegalSwitch):
            switch_steps(StepSequence((1, 2), 2), 2, 2)
        with pytest.raises(IllegalSwitch):
            switch_steps(StepSequence((1, 2), 2), 1, 3)

    @settings(max_examples=300, deadline=None)
    @given(st.data())
    def test_switch_preserves_predicate(self, data):
        l = tuple(data.draw(st.lists(st.integers(1, 3), min_size=1, max_size=4).filter(lambda v: sum(v) <= 5)))
        n = data.draw(st.integers(1, 3))
        spec = BinSpec(l, n)
        words = configuration_array(spec)
        w = words[data.draw(st.integers(0, len(words) - 1))].tolist()
        i = data.draw(st.integers(1, len(w)))
        j = data.draw(st.integers(1, len(w)))
        if i < j and w[i - 1] <= w[j - 1]:
            out = switch_steps(StepSequence(w, spec.k), i, j)
            assert is_configuration_path(out, spec)


class TestCompletion:
    def test_single_step(self):
        assert complete_to_configuration(seq(3), (1, 1, 1)).steps == (3, 2, 1)

    def test_empty_prefix_with_extra_turn(self):
        assert complete_to_configuration(StepSequence((), 2), (2, 1), 1).to_text() == "ENN"

    def test_needs_second_turn(self):
        out = complete_to_configuration(seq(3, 2, 1, 3), (1, 1, 1))
        assert out.steps == (3, 2, 1, 3, 2, 1)
        assert is_configuration_path(out, BinSpec((1, 1, 1), 2))

    def test_bad_prefix(self):
        with pytest.raises(InfeasiblePrefix):
            complete_to_configuration(seq(1, 1, 2, 3), (1, 1, 1))

    def test_prefix_without_a_valid_completion(self):
        # e_1 e_1 breaks no finished block, but the e_3-first tail cannot repair turn 1.
        with pytest.raises(InfeasiblePrefix):
            complete_to_configuration(seq(1, 1), (1, 1, 1))

    @settings(max_examples=300, deadline=None)
    @given(st.data())
    def test_output_passes_predicate(self, data):
        l = tuple(data.draw(st.lists(st.integers(1, 3), min_size=1, max_size=4).filter(lambda v: sum(v) <= 5)))
        spec = BinSpec(l, data.draw(st.integers(1, 3)))
        words = configuration_array(spec)
        w = words[data.draw(st.integers(0, len(words) - 1))].tolist()
        cut = data.draw(st.integers(0, len(w)))
        extra = data.draw(st.integers(0, 2))
        out = complete_to_configuration(StepSequence(w[:cut], spec.k), l, extra)
        assert out.steps[:cut] == tuple(w[:cut])
        turns = len(out) // spec.L
        if turns == 0:
            assert cut == extra == 0 and not out.steps
        else:
            assert is_configuration_path(out, BinSpec(l, turns))


class TestPartitions:
    def test_singletons(self):
        p = OrderedPartition.from_lists([[1], [2], [3]])
        assert path_from_partition(p, BinSpec((1, 1, 1), 1)).steps == (1, 2, 3)

    def test_basis_path(self):
        p = OrderedPartition.from_lists([[2, 5, 8, 11, 12, 15], [1, 3, 4, 6, 7, 9, 10, 13, 14]])
        assert path_from_partition(p).to_text() == "ENEENEENEENNEEN"

    def test_round_trip_on_six(self):
        seen = 0
        for k in range(1, 7):
            for labels in product(range(1, k + 1), repeat=6):
                if len(set(labels)) != k:
                    continue
                p = OrderedPartition.from_labels(labels, k)
                assert p.labels == labels
                assert partition_from_path(path_from_partition(p)) == p
                seen += 1
        assert seen == 4683  # ordered set partitions of [6]

    def test_overlap_and_gaps(self):
        with pytest.raises(NotAPartition):
            OrderedPartition.from_lists([[1, 2], [2, 3]])
        with pytest.raises(NotAPartition):
            OrderedPartition.from_lists([[1], [3]])
        with pytest.raises(NotAPartition):
            OrderedPartition.from_lists([[1, 2], []])

    def test_partition_size_checked_against_spec(self):
        p = OrderedPartition.from_lists([[1], [2], [3]])
        with pytest.raises(NotAPartition):
            path_from_partition(p, BinSpec((1, 1, 1), 2))
        with pytest.raises(DimensionMismatch):
            path_from_partition(p, BinSpec((1, 2), 1))


class TestEnumerators:
    @pytest.mark.parametrize("spec", [BinSpec((1, 1, 1), 2), BinSpec((2, 1), 3), BinSpec((1, 2, 1), 2)])
    def test_array_and_generator_agree(self, spec):
        arr = configuration_array(spec)
        assert [tuple(r) for r in arr.tolist()] == list(configuration_words(spec))
        words = word_array(spec.totals)
        assert [tuple(r) for r in words.tolist()] == list(multiset_words(spec.totals))
        assert np.array_equal(words[boundary_mask(words, spec.l, spec.n)], arr)
