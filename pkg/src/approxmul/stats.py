"""Error-statistics engine: exact accumulators, exhaustive/sampled sweeps.

Error is always ``approximate - exact``.  Accumulators keep integer sums
(Python ints, so they never overflow or round) and merge associatively and
commutatively; a sweep therefore produces bit-identical reports for any
worker count or partition order.  Floating point only appears when a report
is rendered.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, ConfigurationError
from .specs import MultiplierSpec, vector_multiply

#: largest operand-pair count sweep_exhaustive will enumerate (covers wl <= 12)
DEFAULT_PAIR_BUDGET = 1 << 24

_CHUNK = 1 << 18  # elements per vectorized block

_CSV_COLUMNS = "kind,wl,vbl,hbl,k,n,mean,mse,error_prob,min_error,max_error"


def _exact_sum_sq(err: np.ndarray) -> int:
    """Exact sum of squared errors for |err| < 2**33, via a 16-bit split.

    err**2 can exceed int64, so square through q*2**16 + r pieces whose
    partial dot products stay below 2**52 per 2**18-element block.
    """
    a = np.abs(err)
    q = a >> 16
    r = a & 0xFFFF
    hi = int(np.dot(q, q))
    mid = int(np.dot(q, r))
    lo = int(np.dot(r, r))
    return (hi << 32) + (mid << 17) + lo


@dataclass
class ErrorAccumulator:
    """Running exact moments of an error stream."""

    count: int = 0
    sum_error: int = 0
    sum_sq_error: int = 0
    nonzero_count: int = 0
    min_error: int | None = None
    max_error: int | None = None

    def add(self, err: int) -> None:
        self.count += 1
        self.sum_error += err
        self.sum_sq_error += err * err
        if err:
            self.nonzero_count += 1
        self.min_error = err if self.min_error is None else min(self.min_error, err)
        self.max_error = err if self.max_error is None else max(self.max_error, err)

    def add_array(self, err: np.ndarray) -> None:
        err = np.asarray(err, dtype=np.int64).ravel()
        for start in range(0, err.size, _CHUNK):
            block = err[start : start + _CHUNK]
            if block.size == 0:
                continue
            self.count += block.size
            self.sum_error += int(block.sum())
            self.sum_sq_error += _exact_sum_sq(block)
            self.nonzero_count += int(np.count_nonzero(block))
            lo, hi = int(block.min()), int(block.max())
            self.min_error = lo if self.min_error is None else min(self.min_error, lo)
            self.max_error = hi if self.max_error is None else max(self.max_error, hi)

    def merged(self, other: "ErrorAccumulator") -> "ErrorAccumulator":
        return merge(self, other)


def merge(a: ErrorAccumulator, b: ErrorAccumulator) -> ErrorAccumulator:
    """Combine two accumulators; associative, commutative, empty is identity."""

    def _opt(f, u, v):
        if u is None:
            return v
        if v is None:
            return u
        return f(u, v)

    return ErrorAccumulator(
        count=a.count + b.count,
        sum_error=a.sum_error + b.sum_error,
        sum_sq_error=a.sum_sq_error + b.sum_sq_error,
        nonzero_count=a.nonzero_count + b.nonzero_count,
        min_error=_opt(min, a.min_error, b.min_error),
        max_error=_opt(max, a.max_error, b.max_error),
    )


@dataclass(frozen=True)
class ErrorReport:
    """Rendered statistics of one characterization run."""

    n: int
    mean: float
    mse: float
    error_probability: float
    min_error: int
    max_error: int


def to_report(acc: ErrorAccumulator) -> ErrorReport:
    if acc.count == 0:
        raise ConfigurationError("cannot report on an empty accumulator")
    return ErrorReport(
        n=acc.count,
        mean=acc.sum_error / acc.count,
        mse=acc.sum_sq_error / acc.count,
        error_probability=acc.nonzero_count / acc.count,
        min_error=acc.min_error,
        max_error=acc.max_error,
    )


def _accumulate(spec: MultiplierSpec, xs: np.ndarray) -> ErrorAccumulator:
    """Errors over all y for the given x slice, in y blocks."""
    lo, hi = spec.operand_range()
    acc = ErrorAccumulator()
    if xs.size == 0:
        return acc
    block = max(1, _CHUNK // xs.size)
    x_row = xs[None, :]
    for y0 in range(lo, hi, block):
        ys = np.arange(y0, min(y0 + block, hi), dtype=np.int64)[:, None]
        err = vector_multiply(spec, x_row, ys) - x_row * ys
        acc.add_array(err)
    return acc


def partial_sweep(spec: MultiplierSpec, x_lo: int, x_hi: int) -> ErrorAccumulator:
    """Exhaustive accumulator over x in [x_lo, x_hi) and all y.

    Partitioning the x range and merging the pieces reproduces the full sweep
    exactly.
    """
    lo, hi = spec.operand_range()
    if not (lo <= x_lo <= x_hi <= hi):
        raise ConfigurationError(f"x range [{x_lo}, {x_hi}) outside operand range [{lo}, {hi})")
    return _accumulate(spec, np.arange(x_lo, x_hi, dtype=np.int64))


def sweep_exhaustive(
    spec: MultiplierSpec,
    budget: int = DEFAULT_PAIR_BUDGET,
    workers: int = 1,
) -> ErrorReport:
    """Error statistics over every operand pair.

    Raises BudgetExceededError when 2**(2*wl) exceeds ``budget``; use
    sweep_sampled for wider operands.  The result is bit-identical for any
    ``workers`` value.
    """
    n_pairs = 1 << (2 * spec.wl)
    if n_pairs > budget:
        raise BudgetExceededError(
            f"exhaustive sweep needs {n_pairs} pairs, budget is {budget}; "
            "use sweep_sampled for this word length"
        )
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")
    lo, hi = spec.operand_range()
    span = hi - lo
    parts = min(workers, span)
    bounds = [lo + span * i // parts for i in range(parts + 1)]
    if parts == 1:
        acc = partial_sweep(spec, lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=parts) as pool:
            futures = [
                pool.submit(partial_sweep, spec, bounds[i], bounds[i + 1]) for i in range(parts)
            ]
            acc = ErrorAccumulator()
            for fut in futures:
                acc = merge(acc, fut.result())
    return to_report(acc)


def _pair_generators(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent x and y streams so chunking cannot reorder the draws."""
    child_x, child_y = np.random.SeedSequence(seed).spawn(2)
    return (
        np.random.Generator(np.random.PCG64(child_x)),
        np.random.Generator(np.random.PCG64(child_y)),
    )


def sweep_sampled(
    spec: MultiplierSpec,
    n_samples: int,
    seed: int,
    chunk: int = 1 << 17,
) -> ErrorReport:
    """Error statistics over uniform independent operand pairs.

    PCG64 streams make runs reproducible across platforms for a given seed,
    and the report does not depend on ``chunk``.
    """
    if n_samples < 1:
        raise ConfigurationError(f"n_samples must be >= 1, got {n_samples}")
    gen_x, gen_y = _pair_generators(seed)
    lo, hi = spec.operand_range()
    acc = ErrorAccumulator()
    remaining = n_samples
    while remaining > 0:
        m = min(chunk, remaining)
        xs = gen_x.integers(lo, hi, size=m, dtype=np.int64)
        ys = gen_y.integers(lo, hi, size=m, dtype=np.int64)
        err = vector_multiply(spec, xs, ys) - xs * ys
        acc.add_array(err)
        remaining -= m
    return to_report(acc)


@dataclass(frozen=True)
class Histogram:
    """Normalized-error histogram; counts always sum to the pair count."""

    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    normalization: int
    n: int


def error_histogram(
    spec: MultiplierSpec,
    bins: int = 101,
    mode: str = "exhaustive",
    n_samples: int = 1_000_000,
    seed: int = 0,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> Histogram:
    """Histogram of error / 2**(2*wl - 1) over [-1, +1].

    Values outside the range (possible only for extreme truncation) are
    clipped into the end bins so the counts always sum to n.
    """
    if bins < 1:
        raise ConfigurationError(f"bins must be >= 1, got {bins}")
    if mode not in ("exhaustive", "sampled"):
        raise ConfigurationError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    norm = 1 << (2 * spec.wl - 1)
    edges = np.linspace(-1.0, 1.0, bins + 1)
    counts = np.zeros(bins, dtype=np.int64)
    total = 0

    def _consume(err: np.ndarray) -> None:
        nonlocal total
        total += err.size
        scaled = np.clip(err / norm, -1.0, 1.0)
        c, _ = np.histogram(scaled, bins=edges)
        counts[:] += c

    lo, hi = spec.operand_range()
    if mode == "exhaustive":
        n_pairs = 1 << (2 * spec.wl)
        if n_pairs > budget:
            raise BudgetExceededError(
                f"exhaustive histogram needs {n_pairs} pairs, budget is {budget}"
            )
        xs = np.arange(lo, hi, dtype=np.int64)[None, :]
        block = max(1, _CHUNK // (hi - lo))
        for y0 in range(lo, hi, block):
            ys = np.arange(y0, min(y0 + block, hi), dtype=np.int64)[:, None]
            err = vector_multiply(spec, xs, ys) - xs * ys
            _consume(err.ravel())
    else:
        gen_x, gen_y = _pair_generators(seed)
        remaining = n_samples
        while remaining > 0:
            m = min(1 << 17, remaining)
            xs = gen_x.integers(lo, hi, size=m, dtype=np.int64)
            ys = gen_y.integers(lo, hi, size=m, dtype=np.int64)
            err = vector_multiply(spec, xs, ys) - xs * ys
            _consume(err)
            remaining -= m
    return Histogram(
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        normalization=norm,
        n=total,
    )


def mse_vs_parameter(
    spec: MultiplierSpec,
    values: list[int],
    mode: str = "exhaustive",
    n_samples: int = 1_000_000,
    seed: int = 0,
    budget: int = DEFAULT_PAIR_BUDGET,
    workers: int = 1,
) -> list[tuple[int, ErrorReport]]:
    """Reports for each value of ``spec``'s breaking parameter, sorted."""
    rows = []
    for value in sorted(values):
        var = spec.replace_parameter(value)
        if mode == "exhaustive":
            report = sweep_exhaustive(var, budget=budget, workers=workers)
        elif mode == "sampled":
            report = sweep_sampled(var, n_samples=n_samples, seed=seed)
        else:
            raise ConfigurationError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
        rows.append((value, report))
    return rows


# ---------------------------------------------------------------------------
# Rendering.  Numbers use 6 significant digits in text outputs.
# ---------------------------------------------------------------------------


def fmt(value: float) -> str:
    return format(value, ".6g")


def report_csv_header() -> str:
    return _CSV_COLUMNS


def report_csv_row(spec: MultiplierSpec, report: ErrorReport) -> str:
    return ",".join(
        [
            spec.kind.value,
            str(spec.wl),
            str(spec.vbl),
            str(spec.hbl),
            str(spec.k),
            str(report.n),
            fmt(report.mean),
            fmt(report.mse),
            fmt(report.error_probability),
            str(report.min_error),
            str(report.max_error),
        ]
    )


def report_record(spec: MultiplierSpec, report: ErrorReport) -> dict:
    return {
        "kind": spec.kind.value,
        "wl": spec.wl,
        "vbl": spec.vbl,
        "hbl": spec.hbl,
        "k": spec.k,
        "n": report.n,
        "mean": report.mean,
        "mse": report.mse,
        "error_prob": report.error_probability,
        "min_error": report.min_error,
        "max_error": report.max_error,
    }


def histogram_record(spec: MultiplierSpec, hist: Histogram) -> dict:
    return {
        "kind": spec.kind.value,
        "wl": spec.wl,
        "vbl": spec.vbl,
        "hbl": spec.hbl,
        "k": spec.k,
        "n": hist.n,
        "normalization": hist.normalization,
        "bin_edges": list(hist.bin_edges),
        "counts": list(hist.counts),
    }


def dump_json(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True) + "\n"
