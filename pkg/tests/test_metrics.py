import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocrforge.errors import EmptyGroup, EmptyReference, NegativeDuration, ZeroLength
from ocrforge.metrics import (
    accuracy,
    aggregate,
    efficiency_findfix,
    efficiency_proofing,
    findfix_breakdown,
    proofing_breakdown,
)


# --- accuracy (improvement ratio) ---------------------------------------------

def test_full_correction_scores_one():
    report = accuracy("the cat sat", "the c4t sat", "the cat sat")
    assert report.acc_task == 1.0
    assert report.mindist_gs_fixed == 0.0


def test_untouched_text_scores_zero():
    report = accuracy("the cat sat", "the c4t sat", "the c4t sat")
    assert report.acc_task == 0.0


def test_worse_text_clamps_to_zero():
    report = accuracy("the cat sat", "the c4t sat", "xxx yyy zzz")
    assert report.mindist_gs_fixed > report.mindist_gs_ocred
    assert report.acc_task == 0.0


def test_partial_correction_is_ratio():
    # two errors, one fixed: distance halves, score 0.5
    report = accuracy("the cat sat", "the c4t s4t", "the cat s4t")
    assert report.acc_task == pytest.approx(0.5)


def test_clean_input_left_clean_scores_one():
    assert accuracy("abc", "abc", "abc").acc_task == 1.0


def test_clean_input_damaged_scores_zero():
    assert accuracy("abc", "abc", "abX").acc_task == 0.0


def test_accuracy_empty_reference():
    with pytest.raises(EmptyReference):
        accuracy("", "x", "x")


@settings(max_examples=200, deadline=None)
@given(
    st.text(alphabet="abcd ", min_size=1, max_size=20).filter(str.strip),
    st.text(alphabet="abcd ", min_size=0, max_size=20),
    st.text(alphabet="abcd ", min_size=0, max_size=20),
)
def test_accuracy_in_unit_interval(gs, ocred, fixed):
    assert 0.0 <= accuracy(gs, ocred, fixed).acc_task <= 1.0


def test_accuracy_monotone_in_fixed_distance():
    gs = "the cat sat on the mat"
    ocred = "the c4t s4t 0n the m4t"
    closer = accuracy(gs, ocred, "the cat sat 0n the m4t")
    further = accuracy(gs, ocred, "the cat s4t 0n the m4t")
    assert closer.acc_task >= further.acc_task


# --- efficiency ----------------------------------------------------------------

def test_proofing_efficiency_arithmetic():
    report = efficiency_proofing(0.0, 100.0, 500)
    assert report.seconds_per_char == pytest.approx(0.2)
    assert report.phase_durations == {"proofing": 100.0}


def test_zero_duration_is_zero():
    assert efficiency_proofing(5.0, 5.0, 10).seconds_per_char == 0.0


def test_negative_duration_rejected():
    with pytest.raises(NegativeDuration):
        efficiency_proofing(10.0, 5.0, 100)
    with pytest.raises(NegativeDuration):
        efficiency_findfix(0.0, 10.0, 9.0, 5.0, 100)


def test_zero_length_rejected():
    with pytest.raises(ZeroLength):
        efficiency_proofing(0.0, 1.0, 0)


def test_findfix_sums_phases():
    report = efficiency_findfix(0.0, 60.0, 0.0, 40.0, 500)
    assert report.seconds_per_char == pytest.approx(0.2)
    assert report.phase_durations == {"find": 60.0, "fix": 40.0}


def test_findfix_matches_proofing_on_summed_interval():
    ff = efficiency_findfix(100.0, 130.0, 200.0, 215.0, 90)
    p = efficiency_proofing(0.0, 45.0, 90)
    assert ff.seconds_per_char == pytest.approx(p.seconds_per_char)


def test_efficiency_invariant_to_clock_offset():
    a = efficiency_findfix(0.0, 30.0, 0.0, 15.0, 90)
    b = efficiency_findfix(1e9, 1e9 + 30.0, 2e9, 2e9 + 15.0, 90)
    assert a.seconds_per_char == b.seconds_per_char


# --- proofing breakdown ---------------------------------------------------------

def test_proofing_perfect_fix_no_errors():
    bd = proofing_breakdown("the cat sat", "the c4t sat", "the cat sat")
    assert (bd.miss_rate, bd.wrong_rate, bd.errors_total) == (0.0, 0.0, 0)


def test_proofing_untouched_all_miss():
    bd = proofing_breakdown("the cat sat on a mat", "the c4t sat 0n a mat", "the c4t sat 0n a mat")
    assert bd.miss_rate == 1.0
    assert bd.wrong_rate == 0.0
    assert bd.errors_total == 2


def test_proofing_fixed_one_broke_another():
    # worker fixed the real error but corrupted a clean word
    bd = proofing_breakdown("the cat sat", "the c4t sat", "the cat s4t")
    assert bd.miss_rate == 0.0
    assert bd.wrong_rate == 1.0
    assert bd.errors_total == 1


def test_proofing_fixed_to_gs_never_counts_fe():
    bd = proofing_breakdown("a cat", "totally different words", "a cat")
    assert bd.errors_total == 0


def test_proofing_rates_sum_to_one():
    bd = proofing_breakdown("the cat sat on a mat", "the c4t sat 0n a mat", "the c4t sat on a m4t")
    assert bd.errors_total > 0
    assert bd.miss_rate + bd.wrong_rate == pytest.approx(1.0)


# --- find-fix breakdown ----------------------------------------------------------

def test_findfix_perfect_worker():
    bd = findfix_breakdown("a cat sat", "a c4t sat", ["c4t"], ["cat"])
    assert (bd.find_miss_rate, bd.find_wrong_rate, bd.fix_wrong_rate) == (0.0, 0.0, 0.0)
    assert bd.errors_total == 0
    assert bd.correct_edits == 1


def test_findfix_nothing_selected_all_miss():
    bd = findfix_breakdown("a cat sat", "a c4t s4t", [], [])
    assert bd.find_miss_rate == 1.0
    assert bd.errors_total == 2


def test_findfix_wrong_selection_example():
    # worker marked "a" (a correct word) along with the true error
    bd = findfix_breakdown("a cat sat", "a c4t sat", ["a", "c4t"], ["a", "cat"])
    assert bd.find_wrong_rate == 1.0
    assert bd.find_miss_rate == 0.0
    assert bd.fix_wrong_rate == 0.0
    assert bd.errors_total == 1
    assert bd.correct_edits == 2


def test_findfix_wrong_edit_counted():
    bd = findfix_breakdown("a cat sat", "a c4t sat", ["c4t"], ["qqq"])
    assert bd.fix_wrong_rate == 1.0
    assert bd.errors_total == 1


def test_findfix_adjacent_split_merges_to_one_selection():
    # tokenization error split "cat" into "c at"; worker marks both pieces
    bd = findfix_breakdown("a cat sat", "a c at sat", ["c", "at"], ["cat"], wse_indices=[1, 2])
    assert bd.find_wrong_rate == 0.0
    assert bd.errors_total == 0


def test_findfix_hyphen_break_merges():
    bd = findfix_breakdown("a good day", "a go-\nod day", ["go-", "od"], ["good"], wse_indices=[1, 2])
    assert bd.errors_total == 0


def test_findfix_nonadjacent_indices_do_not_merge():
    # same surface tokens but marked far apart: no merge credit
    bd = findfix_breakdown("c at home", "c at h0me", ["c", "at"], [], wse_indices=[0, 1])
    assert bd.find_wrong_rate > 0


def test_findfix_bag_blocks_duplicate_credit():
    # "the" appears once in gold; three selections of it cannot all be wrong-finds
    bd = findfix_breakdown("the cat", "the c4t", ["the", "the", "the"], [])
    assert bd.find_wrong_rate * bd.errors_total == pytest.approx(1.0)


def test_findfix_rates_sum_to_one():
    bd = findfix_breakdown("a cat sat here", "a c4t s4t here", ["c4t", "here"], ["cat", "qq9"])
    assert bd.errors_total > 0
    total = bd.find_miss_rate + bd.find_wrong_rate + bd.fix_wrong_rate
    assert total == pytest.approx(1.0)


def test_findfix_empty_reference():
    with pytest.raises(EmptyReference):
        findfix_breakdown("  ", "x", [], [])


# --- aggregation -----------------------------------------------------------------

def test_aggregate_single_report():
    summary = aggregate([{"acc_task": 0.75}], ("proofing", "sentence", False))
    assert summary.metrics["acc_task"]["mean"] == 0.75
    assert summary.metrics["acc_task"]["variance"] == 0.0
    assert summary.n == 1


def test_aggregate_equal_reports_zero_variance():
    summary = aggregate([{"x": 2.0}, {"x": 2.0}], ("g",))
    assert summary.metrics["x"]["variance"] == 0.0


def test_aggregate_known_triple():
    summary = aggregate([{"x": 0.0}, {"x": 0.5}, {"x": 1.0}], ("g",))
    assert summary.metrics["x"]["mean"] == pytest.approx(0.5)
    assert summary.metrics["x"]["variance"] == pytest.approx(0.25)


def test_aggregate_empty_group():
    with pytest.raises(EmptyGroup):
        aggregate([], ("g",))


def test_aggregate_skips_non_numeric():
    summary = aggregate([{"x": 1.0, "name": "w1", "flag": True}], ("g",))
    assert set(summary.metrics) == {"x"}
