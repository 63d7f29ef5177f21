"""Exact error accumulation, sweeps, and histograms."""

import numpy as np
import pytest

from approxmul.errors import BudgetExceededError, ConfigurationError
from approxmul.specs import MultiplierKind, MultiplierSpec, multiply
from approxmul.stats import (
    ErrorAccumulator,
    error_histogram,
    merge,
    mse_vs_parameter,
    partial_sweep,
    report_csv_header,
    report_csv_row,
    sweep_exhaustive,
    sweep_sampled,
    to_report,
)

K = MultiplierKind
T0_8_6 = MultiplierSpec(kind=K.BROKEN_BOOTH_T0, wl=8, vbl=6)


# ---------------------------------------------------------------------------
# Accumulator exactness
# ---------------------------------------------------------------------------


def test_accumulator_matches_python_int_arithmetic():
    rng = np.random.default_rng(5)
    errs = rng.integers(-(1 << 32), 1 << 32, size=4096, dtype=np.int64)
    acc = ErrorAccumulator()
    acc.add_array(errs)
    values = [int(e) for e in errs]
    assert acc.count == len(values)
    assert acc.sum_error == sum(values)
    assert acc.sum_sq_error == sum(v * v for v in values)  # exact, no float drift
    assert acc.nonzero_count == sum(1 for v in values if v)
    assert acc.min_error == min(values)
    assert acc.max_error == max(values)


def test_accumulator_handles_extreme_magnitudes():
    # worst case near the 2**33 design bound of the squared-sum split
    big = (1 << 33) - 1
    acc = ErrorAccumulator()
    acc.add_array(np.array([big, -big, 1, 0], dtype=np.int64))
    assert acc.sum_sq_error == 2 * big * big + 1
    assert acc.min_error == -big and acc.max_error == big


def test_scalar_add_agrees_with_add_array():
    rng = np.random.default_rng(6)
    errs = rng.integers(-1000, 1000, size=257, dtype=np.int64)
    a = ErrorAccumulator()
    for e in errs:
        a.add(int(e))
    b = ErrorAccumulator()
    b.add_array(errs)
    assert a == b


def test_merge_identity_commutativity_associativity():
    rng = np.random.default_rng(7)
    errs = rng.integers(-(1 << 20), 1 << 20, size=3000, dtype=np.int64)
    whole = ErrorAccumulator()
    whole.add_array(errs)
    a, b, c = ErrorAccumulator(), ErrorAccumulator(), ErrorAccumulator()
    a.add_array(errs[:1000])
    b.add_array(errs[1000:1700])
    c.add_array(errs[1700:])
    empty = ErrorAccumulator()
    assert merge(a, empty) == a == merge(empty, a)
    assert merge(a, b) == merge(b, a)
    assert merge(merge(a, b), c) == merge(a, merge(b, c)) == whole


def test_empty_report_rejected():
    with pytest.raises(ConfigurationError):
        to_report(ErrorAccumulator())


# ---------------------------------------------------------------------------
# Exhaustive sweeps
# ---------------------------------------------------------------------------


def test_exhaustive_sweep_matches_scalar_loop():
    spec = MultiplierSpec(kind=K.BROKEN_BOOTH_T1, wl=4, vbl=3)
    acc = ErrorAccumulator()
    for y in range(-8, 8):
        for x in range(-8, 8):
            acc.add(multiply(spec, x, y) - x * y)
    assert sweep_exhaustive(spec) == to_report(acc)


def test_worker_count_never_changes_report():
    reports = [sweep_exhaustive(T0_8_6, workers=w) for w in (1, 2, 3, 8)]
    assert all(r == reports[0] for r in reports)


def test_partial_sweeps_merge_to_full():
    lo, hi = T0_8_6.operand_range()
    cuts = [lo, -97, -11, 40, hi]
    merged = ErrorAccumulator()
    for a, b in zip(cuts, cuts[1:]):
        merged = merge(merged, partial_sweep(T0_8_6, a, b))
    assert to_report(merged) == sweep_exhaustive(T0_8_6)


def test_partial_sweep_validates_range():
    with pytest.raises(ConfigurationError):
        partial_sweep(T0_8_6, -300, 0)


def test_budget_gate():
    wide = MultiplierSpec(kind=K.BROKEN_BOOTH_T0, wl=14, vbl=3)
    with pytest.raises(BudgetExceededError):
        sweep_exhaustive(wide)
    # raising the budget unlocks the run; shrinking it blocks small ones too
    with pytest.raises(BudgetExceededError):
        sweep_exhaustive(T0_8_6, budget=1 << 10)


def test_unsigned_kind_sweep():
    spec = MultiplierSpec(kind=K.BAM, wl=4, vbl=4)
    report = sweep_exhaustive(spec)
    assert report.n == 256
    assert report.max_error == 0
    assert report.min_error == multiply(spec, 15, 15) - 225


# ---------------------------------------------------------------------------
# Sampled sweeps
# ---------------------------------------------------------------------------


def test_sampled_deterministic_per_seed():
    r1 = sweep_sampled(T0_8_6, 30000, seed=9)
    r2 = sweep_sampled(T0_8_6, 30000, seed=9)
    r3 = sweep_sampled(T0_8_6, 30000, seed=10)
    assert r1 == r2
    assert r1 != r3


def test_sampled_chunk_invariant():
    base = sweep_sampled(T0_8_6, 30000, seed=9)
    assert sweep_sampled(T0_8_6, 30000, seed=9, chunk=777) == base
    assert sweep_sampled(T0_8_6, 30000, seed=9, chunk=30000) == base


def test_sampled_converges_to_exhaustive():
    exact = sweep_exhaustive(T0_8_6)
    sampled = sweep_sampled(T0_8_6, 1 << 19, seed=1)
    assert sampled.mean == pytest.approx(exact.mean, rel=0.05)
    assert sampled.mse == pytest.approx(exact.mse, rel=0.05)


def test_sampled_rejects_bad_count():
    with pytest.raises(ConfigurationError):
        sweep_sampled(T0_8_6, 0, seed=0)


# ---------------------------------------------------------------------------
# Histogram
# ---------------------------------------------------------------------------


def test_histogram_counts_sum_to_n():
    hist = error_histogram(T0_8_6, bins=101)
    assert len(hist.counts) == 101
    assert len(hist.bin_edges) == 102
    assert sum(hist.counts) == hist.n == 1 << 16
    assert hist.normalization == 1 << 15
    assert hist.bin_edges[0] == -1.0 and hist.bin_edges[-1] == 1.0


def test_histogram_mass_sits_in_negative_half():
    # deep truncation: nearly all probability mass is on negative error
    spec = MultiplierSpec(kind=K.BROKEN_BOOTH_T0, wl=8, vbl=12)
    hist = error_histogram(spec, bins=101)
    mid = len(hist.counts) // 2
    negative = sum(hist.counts[: mid + 1])  # center bin holds error 0
    assert negative == hist.n


def test_histogram_sampled_mode_deterministic():
    h1 = error_histogram(T0_8_6, bins=21, mode="sampled", n_samples=50000, seed=4)
    h2 = error_histogram(T0_8_6, bins=21, mode="sampled", n_samples=50000, seed=4)
    assert h1 == h2
    assert sum(h1.counts) == 50000


def test_histogram_validation():
    with pytest.raises(ConfigurationError):
        error_histogram(T0_8_6, bins=0)
    with pytest.raises(ConfigurationError):
        error_histogram(T0_8_6, mode="both")


# ---------------------------------------------------------------------------
# Parameter sweep table and rendering
# ---------------------------------------------------------------------------


def test_mse_vs_parameter_sorted_and_monotone():
    rows = mse_vs_parameter(MultiplierSpec(kind=K.BROKEN_BOOTH_T0, wl=8), [8, 0, 12, 4])
    assert [v for v, _ in rows] == [0, 4, 8, 12]
    mses = [r.mse for _, r in rows]
    assert mses[0] == 0.0
    assert all(a <= b for a, b in zip(mses, mses[1:]))


def test_csv_row_formatting():
    report = sweep_exhaustive(T0_8_6)
    header = report_csv_header()
    row = report_csv_row(T0_8_6, report)
    assert header == "kind,wl,vbl,hbl,k,n,mean,mse,error_prob,min_error,max_error"
    assert row == "broken-booth-t0,8,6,0,0,65536,-61.5,5046.25,0.9375,-171,0"
