"""Fixed-point FIR filter testbed.

A 30-tap low-pass filter is driven by three equal-power band signals plus
white Gaussian noise; only the lowest band should survive.  The filter can
run in double precision or in Q1.(WL-1) fixed point with every tap product
routed through a pluggable multiplier model, so the output SNR measures the
damage a given approximate multiplier does to a real DSP workload.
"""

from __future__ import annotations

import dataclasses
import functools
import importlib.resources
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, FixedPointOverflowError
from .specs import SIGNED_KINDS, MultiplierKind, MultiplierSpec, vector_multiply

DEFAULT_TAPS = 30
_COEFF_RESOURCE = "lowpass30.txt"
_SYNTH_TAPS = 255  # bandpass length used to synthesize the band signals
_DELAY_HALF = 64  # half-length of the fractional-delay kernel
_EDGE_TRIM = 256  # samples dropped at both ends before SNR measurement


# ---------------------------------------------------------------------------
# Fixed-point format
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedPointFormat:
    """Signed Q1.(wl-1): one sign bit, wl-1 fractional bits."""

    wl: int

    def __post_init__(self) -> None:
        if not 2 <= self.wl <= 32:
            raise ConfigurationError(f"word length must be in [2, 32], got {self.wl}")

    @property
    def frac_bits(self) -> int:
        return self.wl - 1

    @property
    def lsb(self) -> float:
        return 2.0 ** -(self.wl - 1)

    @property
    def min_value(self) -> float:
        return -1.0

    @property
    def max_value(self) -> float:
        return 1.0 - self.lsb

    def encode(self, values) -> np.ndarray:
        """Round to the nearest representable code (ties to even).

        Raises FixedPointOverflowError instead of saturating.
        """
        scaled = np.rint(np.asarray(values, dtype=np.float64) * (1 << self.frac_bits))
        lo, hi = -(1 << (self.wl - 1)), (1 << (self.wl - 1)) - 1
        if scaled.size and (scaled.min() < lo or scaled.max() > hi):
            worst = float(np.max(np.abs(np.asarray(values, dtype=np.float64))))
            raise FixedPointOverflowError(
                f"value magnitude {worst:g} does not fit Q1.{self.frac_bits}; "
                "scale the input down first"
            )
        return scaled.astype(np.int64)

    def decode(self, codes) -> np.ndarray:
        return np.asarray(codes, dtype=np.float64) * self.lsb


# ---------------------------------------------------------------------------
# Testbed configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestbedConfig:
    """Signal/noise layout for the filter experiment.

    Frequencies are in units of pi rad/sample.  The defaults place three
    0.25-wide bands separated by 0.1 guards, starting at DC.
    """

    __test__ = False  # not a test case despite the Test* name

    n_samples: int = 65536
    seed: int = 2024
    signal_bandwidth: float = 0.25
    guard_band: float = 0.10
    noise_psd_db: float = -30.0
    taps: int = DEFAULT_TAPS
    band_placements: tuple[tuple[float, float], ...] = (
        (0.0, 0.25),
        (0.35, 0.60),
        (0.70, 0.95),
    )
    headroom: float = 0.33

    def __post_init__(self) -> None:
        if self.n_samples < 4096:
            raise ConfigurationError(f"n_samples must be >= 4096, got {self.n_samples}")
        if self.taps < 2:
            raise ConfigurationError(f"taps must be >= 2, got {self.taps}")
        if not 0.0 < self.headroom <= 0.95:
            raise ConfigurationError(f"headroom must be in (0, 0.95], got {self.headroom}")
        if not 0.0 < self.signal_bandwidth < 1.0:
            raise ConfigurationError("signal_bandwidth must be in (0, 1) pi units")
        bands = tuple(tuple(float(e) for e in b) for b in self.band_placements)
        object.__setattr__(self, "band_placements", bands)
        if len(bands) != 3:
            raise ConfigurationError(f"need exactly 3 band placements, got {len(bands)}")
        if bands[0][0] != 0.0:
            raise ConfigurationError("the first band must start at 0")
        for lo, hi in bands:
            if not (0.0 <= lo < hi < 1.0):
                raise ConfigurationError(f"band ({lo}, {hi}) outside (0, pi)")
            if hi - lo > self.signal_bandwidth + 1e-9:
                raise ConfigurationError(f"band ({lo}, {hi}) wider than signal_bandwidth")
        for (_, hi), (lo, _) in zip(bands, bands[1:]):
            if lo - hi < self.guard_band - 1e-9:
                raise ConfigurationError(
                    f"bands must be separated by at least the {self.guard_band} guard"
                )

    @property
    def noise_variance(self) -> float:
        return 10.0 ** (self.noise_psd_db / 10.0)

    def to_json(self) -> str:
        record = dataclasses.asdict(self)
        record["band_placements"] = [list(b) for b in self.band_placements]
        return json.dumps(record, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TestbedConfig":
        record = json.loads(text)
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(record) - known
        if extra:
            raise ConfigurationError(f"unknown config fields: {sorted(extra)}")
        if "band_placements" in record:
            record["band_placements"] = tuple(tuple(b) for b in record["band_placements"])
        return cls(**record)


# ---------------------------------------------------------------------------
# Coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FilterCoefficients:
    """Shipped filter taps plus the design record they were frozen with."""

    taps: tuple[float, ...]
    provenance: str
    design: dict

    def dc_gain(self) -> float:
        return float(sum(self.taps))


def _amplitude_at(taps: np.ndarray, freqs_pi: np.ndarray) -> np.ndarray:
    """|H| at the given frequencies (units of pi rad/sample)."""
    omega = np.pi * np.asarray(freqs_pi, dtype=np.float64)
    phases = np.exp(-1j * np.outer(omega, np.arange(len(taps))))
    return np.abs(phases @ taps)


def _parse_coefficient_text(text: str) -> FilterCoefficients:
    taps: list[float] = []
    design: dict = {}
    provenance_parts: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if ":" in body:
                key, _, value = body.partition(":")
                design[key.strip()] = value.strip()
                if key.strip() in ("tool", "generated"):
                    provenance_parts.append(body)
            continue
        taps.append(float(line))
    return FilterCoefficients(
        taps=tuple(taps),
        provenance="; ".join(provenance_parts) or "unknown",
        design=design,
    )


def _check_design_record(coeffs: FilterCoefficients) -> None:
    """Validate the loaded taps against the file's own design record."""
    taps = np.asarray(coeffs.taps)
    declared = coeffs.design.get("taps")
    if declared is not None and int(declared) != len(taps):
        raise ConfigurationError(
            f"coefficient file declares {declared} taps but contains {len(taps)}"
        )
    dc_tol = float(coeffs.design.get("dc_tolerance_db", 0.1))
    dc_db = 20.0 * math.log10(abs(coeffs.dc_gain()))
    if abs(dc_db) > dc_tol:
        raise ConfigurationError(f"DC gain {dc_db:+.4f} dB exceeds +/-{dc_tol} dB")
    floor_db = coeffs.design.get("stopband_floor_db")
    band = coeffs.design.get("stopband_band_pi")
    if floor_db is not None and band is not None:
        lo, hi = (float(v) for v in band.split())
        worst = float(np.max(_amplitude_at(taps, np.linspace(lo, hi, 2001))))
        if 20.0 * math.log10(worst) > -float(floor_db):
            raise ConfigurationError(
                f"stopband only {-20.0 * math.log10(worst):.2f} dB over ({lo}, {hi}) pi, "
                f"needs >= {floor_db} dB"
            )


@functools.lru_cache(maxsize=None)
def _load_default_coefficients() -> FilterCoefficients:
    text = importlib.resources.files("approxmul.data").joinpath(_COEFF_RESOURCE).read_text()
    coeffs = _parse_coefficient_text(text)
    _check_design_record(coeffs)
    return coeffs


def load_coefficients(path: str | None = None) -> FilterCoefficients:
    """Load filter taps; the packaged 30-tap low pass when path is None."""
    if path is None:
        return _load_default_coefficients()
    with open(path, "r", encoding="utf-8") as fh:
        coeffs = _parse_coefficient_text(fh.read())
    _check_design_record(coeffs)
    return coeffs


# ---------------------------------------------------------------------------
# Signal synthesis
# ---------------------------------------------------------------------------


def _bandpass_kernel(low_pi: float, high_pi: float, length: int = _SYNTH_TAPS) -> np.ndarray:
    """Blackman-windowed sinc bandpass; low_pi = 0 degenerates to low pass."""
    n = np.arange(length) - (length - 1) / 2
    kernel = high_pi * np.sinc(high_pi * n)
    if low_pi > 0.0:
        kernel = kernel - low_pi * np.sinc(low_pi * n)
    return kernel * np.blackman(length)


def generate_signals(
    config: TestbedConfig,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Deterministic (d1, d2, d3, noise, x) for the given config.

    Each band signal is white noise shaped by a bandpass and normalized to
    exactly unit average power; independent PCG64 streams per component keep
    the mix reproducible for a seed.
    """
    children = np.random.SeedSequence(config.seed).spawn(4)
    bands = []
    for child, (lo, hi) in zip(children, config.band_placements):
        gen = np.random.Generator(np.random.PCG64(child))
        white = gen.standard_normal(config.n_samples + _SYNTH_TAPS - 1)
        shaped = np.convolve(white, _bandpass_kernel(lo, hi), mode="valid")
        shaped = shaped / math.sqrt(float(np.mean(shaped * shaped)))
        bands.append(shaped)
    gen = np.random.Generator(np.random.PCG64(children[3]))
    noise = gen.standard_normal(config.n_samples) * math.sqrt(config.noise_variance)
    d1, d2, d3 = bands
    x = d1 + d2 + d3 + noise
    return d1, d2, d3, noise, x


# ---------------------------------------------------------------------------
# Filtering
# ---------------------------------------------------------------------------


def fir_filter_real(x, coeffs: FilterCoefficients) -> np.ndarray:
    """Direct-form double-precision convolution, zero initial state."""
    x = np.asarray(x, dtype=np.float64)
    return np.convolve(x, np.asarray(coeffs.taps))[: len(x)]


def fir_filter_fixed(
    x,
    coeffs: FilterCoefficients,
    wl: int,
    multiplier: MultiplierSpec,
) -> np.ndarray:
    """Q1.(wl-1) filter with every tap product through ``multiplier``.

    Inputs and coefficients are quantized round-to-nearest; tap products are
    taken at full 2*wl-bit precision by the multiplier model; accumulation is
    exact in 64-bit integers; the sum is converted back to real at scale
    2**(-2*(wl-1)).  The caller must pre-scale x into the representable
    range; overflow raises rather than saturates.
    """
    if multiplier.wl != wl:
        raise ConfigurationError(f"multiplier wl {multiplier.wl} does not match filter wl {wl}")
    if multiplier.kind not in SIGNED_KINDS:
        raise ConfigurationError(
            f"{multiplier.kind.value} is an unsigned multiplier; the fixed-point filter "
            "needs a signed (Booth-family) kind"
        )
    fmt = FixedPointFormat(wl)
    x_codes = fmt.encode(x)
    tap_codes = fmt.encode(np.asarray(coeffs.taps))
    n = len(x_codes)
    acc = np.zeros(n, dtype=np.int64)
    for k, code in enumerate(tap_codes):
        acc[k:] += vector_multiply(multiplier, x_codes[: n - k], np.int64(code))
    return acc.astype(np.float64) * 2.0 ** (-2 * (wl - 1))


# ---------------------------------------------------------------------------
# Alignment and SNR
# ---------------------------------------------------------------------------


def fractional_delay(x, delay: float, kernel_half: int = _DELAY_HALF) -> np.ndarray:
    """Delay a sequence by a possibly fractional number of samples.

    Uses a Blackman-windowed sinc interpolator symmetric about the delay
    point, so the pass band sees a pure delay.  Samples shifted in from
    before the start are zero; edge regions should be trimmed by the caller.
    """
    x = np.asarray(x, dtype=np.float64)
    whole = math.floor(delay)
    frac = delay - whole
    length = 2 * kernel_half + 1
    offsets = np.arange(length) - kernel_half - frac
    u = offsets / (kernel_half + 1)
    window = np.where(
        np.abs(u) < 1.0,
        0.42 + 0.5 * np.cos(np.pi * u) + 0.08 * np.cos(2 * np.pi * u),
        0.0,
    )
    kernel = np.sinc(offsets) * window
    full = np.convolve(x, kernel)
    shift = whole - kernel_half  # out[i] = full[i - shift] reads x[i - delay]
    out = np.zeros_like(x)
    src_lo = max(0, shift)
    src_hi = min(len(x), len(full) + shift)
    if src_lo < src_hi:
        out[src_lo:src_hi] = full[src_lo - shift : src_hi - shift]
    return out


def compute_snr(
    reference,
    observed,
    reference_delay: float = 0.0,
    trim: int = 0,
) -> float:
    """10*log10(power(reference) / power(reference - observed)) in dB.

    ``reference_delay`` shifts the reference (e.g. by the filter group delay
    (taps-1)/2) before comparing; ``trim`` drops edge samples on both ends.
    A zero-power deviation returns +inf.
    """
    ref = np.asarray(reference, dtype=np.float64)
    obs = np.asarray(observed, dtype=np.float64)
    if ref.shape != obs.shape:
        raise ConfigurationError(f"length mismatch: {ref.shape} vs {obs.shape}")
    if reference_delay != 0.0:
        ref = fractional_delay(ref, reference_delay)
    if trim:
        if 2 * trim >= len(ref):
            raise ConfigurationError(f"trim {trim} leaves no samples of {len(ref)}")
        ref = ref[trim:-trim]
        obs = obs[trim:-trim]
    err = ref - obs
    p_err = float(np.mean(err * err))
    p_ref = float(np.mean(ref * ref))
    if p_err == 0.0:
        return math.inf
    return 10.0 * math.log10(p_ref / p_err)


# ---------------------------------------------------------------------------
# Testbed runs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SnrReport:
    snr_in_db: float
    snr_out_db: float


def run_testbed(
    config: TestbedConfig,
    multiplier: MultiplierSpec | None = None,
    coeffs: FilterCoefficients | None = None,
) -> SnrReport:
    """Filter the three-band-plus-noise mix and measure input/output SNR.

    ``multiplier`` None runs the double-precision filter; otherwise the
    fixed-point filter at the multiplier's word length, with the input
    scaled to ``headroom`` of full range (the reference is scaled the same
    way, so the SNR stays comparable).
    """
    if coeffs is None:
        coeffs = load_coefficients()
    if config.taps != len(coeffs.taps):
        raise ConfigurationError(
            f"config expects {config.taps} taps, coefficient file has {len(coeffs.taps)}"
        )
    d1, _, _, _, x = generate_signals(config)
    snr_in = compute_snr(d1, x)
    if multiplier is None:
        reference, out = d1, fir_filter_real(x, coeffs)
    else:
        scale = config.headroom / float(np.max(np.abs(x)))
        reference = scale * d1
        out = fir_filter_fixed(scale * x, coeffs, multiplier.wl, multiplier)
    delay = (len(coeffs.taps) - 1) / 2
    snr_out = compute_snr(reference, out, reference_delay=delay, trim=_EDGE_TRIM)
    return SnrReport(snr_in_db=snr_in, snr_out_db=snr_out)


def snr_sweep_wl(
    config: TestbedConfig,
    wl_values,
    kind: MultiplierKind = MultiplierKind.ACCURATE_BOOTH,
    vbl: int = 0,
) -> list[tuple[int, SnrReport]]:
    """Fixed-point SNR at each word length, sorted ascending."""
    rows = []
    for wl in sorted(int(v) for v in wl_values):
        spec = MultiplierSpec(kind=kind, wl=wl, vbl=vbl)
        rows.append((wl, run_testbed(config, spec)))
    return rows


def snr_sweep_vbl(
    config: TestbedConfig,
    wl: int,
    vbl_values,
    kind: MultiplierKind = MultiplierKind.BROKEN_BOOTH_T0,
) -> list[tuple[int, SnrReport]]:
    """Fixed-point SNR at each truncation depth, sorted ascending."""
    rows = []
    for vbl in sorted(int(v) for v in vbl_values):
        spec = MultiplierSpec(kind=kind, wl=wl, vbl=vbl)
        rows.append((vbl, run_testbed(config, spec)))
    return rows


def quap(snr_out_db: float, area_saving_pct: float, power_saving_pct: float) -> float:
    """Quality-area-power figure of merit: SNR**2 * area% * power%.

    Divide by 1e4 for the conventionally scaled form.
    """
    return snr_out_db * snr_out_db * area_saving_pct * power_saving_pct


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------


def snr_csv_header() -> str:
    return "wl,vbl,kind,snr_in_db,snr_out_db"


def snr_csv_row(kind: str, wl: int, vbl: int, report: SnrReport) -> str:
    return ",".join(
        [str(wl), str(vbl), kind, format(report.snr_in_db, ".6g"), format(report.snr_out_db, ".6g")]
    )


def snr_record(kind: str, wl: int, vbl: int, report: SnrReport) -> dict:
    return {
        "wl": wl,
        "vbl": vbl,
        "kind": kind,
        "snr_in_db": report.snr_in_db,
        "snr_out_db": report.snr_out_db,
    }
