import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dimcheck.stats import (ResultTable, StatsError, cohens_threshold, mark_winners, median_iqr,
                            read_table_csv, render_text, write_table_csv, write_winners_csv)

LEARNERS = ("DNN weighted", "CNN", "DNN", "Random Forest", "Decision Tree", "SVM linear")

# published recall / false-alarm blocks, nine datasets x six learners (fractions)
TABLE3_RECALL = np.array([
    [96.6, 96.9, 94.0, 92.0, 94.8, 97.8], [97.6, 95.0, 92.0, 78.9, 94.7, 97.0],
    [95.3, 98.1, 91.3, 96.8, 96.6, 87.1], [95.2, 93.0, 89.3, 88.7, 86.8, 96.1],
    [81.3, 98.8, 68.1, 76.8, 75.7, 90.3], [94.3, 93.9, 89.2, 96.9, 92.7, 93.3],
    [98.0, 95.0, 96.4, 91.8, 87.6, 98.2], [91.1, 93.1, 84.1, 78.7, 87.0, 95.0],
    [81.1, 97.8, 73.3, 66.7, 92.0, 99.5]]) / 100
TABLE3_PF = np.array([
    [1.2, 10.8, 0.5, 0.3, 0.5, 1.3], [1.4, 6.8, 0.4, 0.5, 0.4, 1.2],
    [5.9, 5.8, 3.2, 1.4, 3.2, 6.9], [3.0, 8.7, 1.4, 1.3, 0.7, 3.5],
    [1.2, 7.0, 0.4, 2.5, 1.3, 1.4], [3.1, 48.6, 1.4, 1.3, 0.4, 2.1],
    [2.1, 8.8, 1.3, 0.4, 4.3, 3.2], [0.5, 6.7, 0.5, 0.4, 0.5, 0.5],
    [3.1, 8.6, 1.4, 0.2, 1.4, 5.8]]) / 100


def table(values, metric="recall"):
    values = np.atleast_2d(values)
    return ResultTable.from_array(metric, [f"d{i}" for i in range(len(values))],
                                  [f"l{j}" for j in range(values.shape[1])], values)


def test_threshold_from_published_blocks():
    # 0.35 * sample sd of every published cell rounds to the reported 3% and 2%
    rec = cohens_threshold(TABLE3_RECALL.ravel())
    assert rec == pytest.approx(0.35 * 0.0790040, abs=1e-6)
    assert round(100 * rec) == 3
    assert round(100 * cohens_threshold(TABLE3_PF.ravel())) == 2


def test_threshold_examples():
    assert cohens_threshold([0.4, 0.4, 0.4]) == 0.0
    assert cohens_threshold([0.0, 1.0]) == pytest.approx(0.35 * np.sqrt(0.5), abs=1e-15)
    with pytest.raises(StatsError):
        cohens_threshold([0.5])


def test_derby_recall_row():
    t = ResultTable.from_array("recall", ["derby"], LEARNERS, TABLE3_RECALL[:1])
    m = mark_winners(t, 0.03, "maximize")
    assert {c for c, w in zip(LEARNERS, m.winners[0]) if w} == {
        "DNN weighted", "CNN", "Decision Tree", "SVM linear"}


def test_derby_false_alarm_row():
    t = ResultTable.from_array("false_alarm", ["derby"], LEARNERS, TABLE3_PF[:1])
    m = mark_winners(t, 0.02, "minimize")
    assert m.winners[0] == (True, False, True, True, True, True)


def test_single_column_always_wins():
    m = mark_winners(table([[0.1], [0.9], [0.5]]), 0.0)
    assert all(row == (True,) for row in m.winners)


def test_mark_errors():
    with pytest.raises(StatsError):
        mark_winners(ResultTable("recall", (), (), ()), 0.1)
    with pytest.raises(StatsError):
        mark_winners(table([[0.1, 0.2]]), -0.1)
    with pytest.raises(StatsError):
        table([[1.5]])


def test_undefined_cells_never_win():
    t = ResultTable.from_array("auc", ["a"], ["x", "y"], [[None, 0.7]])
    assert mark_winners(t, 0.5).winners == ((False, True),)


def test_median_iqr_examples():
    assert median_iqr([1, 2, 3, 4, 5]) == (3.0, 2.0)
    assert median_iqr([7]) == (7.0, 0.0)
    assert median_iqr([0.952, 0.951, 0.893, 0.887, 0.920, 0.961])[0] == pytest.approx(0.9355)
    with pytest.raises(StatsError):
        median_iqr([])


def sort_oracle(v):
    """Inclusive linear-interpolation quantiles from a sorted copy."""
    s = sorted(v)
    def q(p):
        h = (len(s) - 1) * p
        lo = int(np.floor(h))
        hi = min(lo + 1, len(s) - 1)
        return s[lo] + (h - lo) * (s[hi] - s[lo])
    return q(0.5), q(0.75) - q(0.25)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=8), st.randoms())
def test_median_iqr_oracle(values, rnd):
    med, iqr = median_iqr(values)
    om, oi = sort_oracle(values)
    assert med == pytest.approx(om, abs=1e-9) and iqr == pytest.approx(oi, abs=1e-9)
    shuffled = values[:]
    rnd.shuffle(shuffled)
    assert median_iqr(shuffled) == (med, iqr)


# dyadic grid values keep row shifts exact
cells = st.lists(st.integers(0, 64).map(lambda k: k / 128), min_size=1, max_size=6)


@settings(max_examples=300, deadline=None)
@given(cells, st.integers(0, 32).map(lambda k: k / 128), st.integers(0, 32).map(lambda k: k / 128),
       st.sampled_from(["maximize", "minimize"]))
def test_winner_properties(row, th, extra, direction):
    t = table([row])
    m = mark_winners(t, th, direction)
    assert any(m.winners[0])
    shifted = mark_winners(table([[v + 0.25 for v in row]]), th, direction)
    assert shifted.winners == m.winners
    wider = mark_winners(t, th + extra, direction)
    assert all(w2 or not w1 for w1, w2 in zip(m.winners[0], wider.winners[0]))
    best = max(row) if direction == "maximize" else min(row)
    assert mark_winners(t, 0.0, direction).winners[0] == tuple(v == best for v in row)


def test_csv_and_text_rendering(tmp_path):
    t = ResultTable.from_array("recall", ["derby"], LEARNERS, TABLE3_RECALL[:1])
    m = mark_winners(t, 0.03)
    write_table_csv(t, tmp_path / "t.csv")
    write_winners_csv(t, m, tmp_path / "w.csv")
    assert read_table_csv(tmp_path / "t.csv", "recall") == t
    assert (tmp_path / "w.csv").read_text().splitlines()[1] == "derby,1,1,0,0,1,1"
    text = render_text(t, m)
    assert "[97.8]" in text and " 92.0 " in text and "threshold 3.0%" in text
