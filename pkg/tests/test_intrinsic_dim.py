import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from dimcheck import intrinsic_dim as idim
from dimcheck.dataset import Dataset, SyntheticSpec, generate


def naive_distances(X, norm):
    out = []
    for i in range(len(X)):
        for j in range(i + 1, len(X)):
            diff = [abs(a - b) for a, b in zip(X[i], X[j])]
            out.append(sum(diff) if norm == "L1" else math.sqrt(sum(d * d for d in diff)))
    return out


def naive_count(X, norm, r):
    return sum(1 for d in naive_distances(X, norm) if d < r)


def test_single_pair():
    X = np.array([[0.0, 0.0], [3.0, 4.0]])
    assert idim.pairwise_distances(X, "L1").tolist() == [7.0]
    assert idim.pairwise_distances(X, "L2").tolist() == [5.0]


def test_collinear_three():
    assert idim.pairwise_distances(np.array([[0.0], [1.0], [2.0]])).tolist() == [1.0, 1.0, 2.0]


def test_distances_need_two_rows():
    with pytest.raises(idim.EstimationError):
        idim.pairwise_distances(np.zeros((1, 3)))


@pytest.mark.parametrize("norm", ["L1", "L2"])
def test_distances_match_double_loop(norm):
    X = np.random.default_rng(5).random((50, 4))
    got = idim.pairwise_distances(X, norm)
    want = np.sort(naive_distances(X.tolist(), norm))
    assert got.size == 50 * 49 // 2
    np.testing.assert_allclose(got, want, rtol=1e-14, atol=0)


def test_correlation_integral_examples():
    assert idim.correlation_integral(np.array([3.0]), 2, 5.0) == 1.0
    d = idim.pairwise_distances(np.array([[0.0], [1.0], [2.0]]))
    assert idim.correlation_integral(d, 3, 1.5) == pytest.approx(2 / 3, abs=0)
    # strict inequality: a pair exactly at r is outside
    assert idim.correlation_integral(d, 3, 1.0) == 0.0
    assert idim.correlation_integral(d, 3, 2.0) == 2 * 2 / 6


def test_default_schedule():
    d = np.array([1.0, math.e ** 2, math.e ** 4])
    s = idim.default_schedule(d, steps=5)
    assert s.log_start == 0.0
    assert s.log_end == pytest.approx(4 + math.log(1.01), abs=1e-15)
    r = s.radii
    assert r[0] == pytest.approx(1.0) and r[-1] == pytest.approx(1.01 * math.e ** 4)
    assert np.all(np.diff(np.log(r)) == pytest.approx((4 + math.log(1.01)) / 4))
    assert idim.default_schedule(np.array([0.0, 0.0, 2.0]), 5).log_start == math.log(2.0)
    with pytest.raises(idim.EstimationError, match="zero diameter"):
        idim.default_schedule(np.zeros(3))


def test_schedule_validation():
    with pytest.raises(ValueError):
        idim.RadiusSchedule(0.0, 1.0, 3)
    with pytest.raises(ValueError):
        idim.RadiusSchedule(1.0, 1.0, 10)


def test_moving_average_truncates_edges():
    got = idim.moving_average(np.array([1.0, 2.0, 3.0, 10.0]), 3)
    np.testing.assert_allclose(got, [1.5, 2.0, 5.0, 6.5])
    np.testing.assert_array_equal(idim.moving_average(np.array([4.0, 1.0]), 1), [4.0, 1.0])
    with pytest.raises(ValueError):
        idim.moving_average(np.ones(3), 2)


def test_curve_invariants():
    X = np.random.default_rng(0).random((200, 3))
    est = idim.estimate_dimension(X)
    c = est.curve
    assert np.all(np.diff(c.pair_counts) >= 0)
    assert np.all(np.diff(c.c_values) >= 0)
    assert np.array_equal(c.c_values, 2 * c.pair_counts / (200 * 199))
    # largest radius exceeds the diameter
    assert c.c_values[-1] == 1.0
    assert est.value == est.smoothed_slopes.max() >= 0
    assert est.slopes.size == est.usable_points - 1


def test_estimate_errors():
    with pytest.raises(idim.EstimationError, match="at least 3 rows"):
        idim.estimate_dimension(np.zeros((2, 2)))
    with pytest.raises(idim.EstimationError, match="zero diameter"):
        idim.estimate_dimension(np.ones((5, 2)))
    # only two distinct positive distances -> at most 2 usable radii with a tight schedule
    with pytest.raises(idim.EstimationError, match="too sparse"):
        idim.estimate_dimension(np.array([[0.0], [1.0], [3.0]]),
                                schedule=idim.RadiusSchedule(math.log(0.5), math.log(1.5), 4))


def test_cube5_within_band():
    d = generate(SyntheticSpec("uniform_cube", 5, 1000, seed=0))
    assert 3.75 <= idim.estimate_dimension(d).value <= 6.25


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_embedded_line(seed):
    d = generate(SyntheticSpec("embedded_line", 10, 1000, seed=seed))
    assert 0.8 <= idim.estimate_dimension(d).value <= 1.3


def test_min_pairs_one_keeps_every_positive_radius():
    X = np.random.default_rng(1).random((300, 2))
    est = idim.estimate_dimension(X, min_pairs=1)
    assert est.usable_points == int(np.count_nonzero(est.curve.pair_counts > 0))


def test_effective_min_pairs_clips_for_small_data():
    assert idim.effective_min_pairs(100, 1000) == 100
    assert idim.effective_min_pairs(100, 60) == 17
    assert idim.effective_min_pairs(100, 5) == 1


def test_export_roundtrip(tmp_path):
    est = idim.estimate_dimension(generate(SyntheticSpec("uniform_cube", 3, 400, seed=2)))
    p = tmp_path / "curve.csv"
    idim.export_curve(est, p)
    lines = p.read_text().splitlines()
    assert lines[0] == "ln_r,ln_C,slope,smoothed_slope"
    assert len(lines) - 1 == est.usable_points
    assert lines[1].endswith(",,")
    back = idim.read_curve(p)
    assert np.array_equal(back["smoothed_slope"], est.smoothed_slopes)
    assert np.array_equal(back["slope"], est.slopes)
    assert back["smoothed_slope"].max() == est.value


def test_summary_json(tmp_path):
    est = idim.estimate_dimension(generate(SyntheticSpec("uniform_cube", 2, 300, seed=2)))
    s = idim.write_summary(est, tmp_path / "s.json", "cube")
    assert set(s) >= {"dataset", "norm", "steps", "window", "value", "usable_points"}
    assert s["value"] == est.value and s["norm"] == "L1"


def test_row_permutation_invariance():
    d = generate(SyntheticSpec("uniform_cube", 4, 300, seed=9))
    perm = np.random.default_rng(0).permutation(300)
    a = idim.estimate_dimension(d)
    b = idim.estimate_dimension(d.features[perm])
    assert a.value == b.value
    assert np.array_equal(a.smoothed_slopes, b.smoothed_slopes)


def test_duplicate_point_robustness():
    d = generate(SyntheticSpec("embedded_line", 10, 1000, seed=4))
    base = idim.estimate_dimension(d).value
    X = np.vstack([d.features, d.features[:1]])
    dup = idim.estimate_dimension(X).value
    assert dup <= 1.3 and dup <= base + 0.3


def test_normalize_flag_rescales_columns():
    rng = np.random.default_rng(3)
    X = rng.random((300, 2)) * [1.0, 1000.0]
    a = idim.estimate_dimension(X, normalize=True).value
    b = idim.estimate_dimension(rng.random((300, 2))).value
    assert a == pytest.approx(b, rel=0.3)
    assert idim.estimate_dimension(Dataset(X, np.zeros(300))).value != a


finite = st.floats(-100, 100, allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=200, deadline=None)
@given(X=st.integers(3, 25).flatmap(lambda n: st.integers(1, 4).flatmap(
    lambda f: arrays(np.float64, (n, f), elements=finite))),
    norm=st.sampled_from(["L1", "L2"]))
def test_pair_counts_match_oracle(X, norm):
    dist = idim.pairwise_distances(X, norm)
    if not np.any(dist > 0):
        return
    sched = idim.default_schedule(dist, 12)
    counts = idim.pair_counts(dist, sched.radii)
    want = [naive_count(X.tolist(), norm, r) for r in sched.radii]
    assert counts.tolist() == want


def test_subnormal_distances_rejected():
    # radii computed from subnormal distances collapse onto equal values
    X = np.array([[0.0], [5e-324], [1e-323], [2e-323], [4e-323]] * 30)
    with pytest.raises(idim.EstimationError):
        idim.estimate_dimension(X, min_pairs=1)
