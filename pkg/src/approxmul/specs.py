"""Multiplier configuration records and dispatch to the model functions."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import arrays, booth
from .errors import ConfigurationError


class MultiplierKind(str, enum.Enum):
    ACCURATE_BOOTH = "accurate-booth"
    BROKEN_BOOTH_T0 = "broken-booth-t0"
    BROKEN_BOOTH_T1 = "broken-booth-t1"
    BAM = "bam"
    BLOCK_APPROX = "block"


BOOTH_KINDS = frozenset(
    {MultiplierKind.ACCURATE_BOOTH, MultiplierKind.BROKEN_BOOTH_T0, MultiplierKind.BROKEN_BOOTH_T1}
)

#: kinds whose operands are signed two's-complement values
SIGNED_KINDS = BOOTH_KINDS


@dataclass(frozen=True)
class MultiplierSpec:
    """A fully parameterized multiplier instance.

    ``vbl`` applies to the broken Booth types and the broken-array multiplier,
    ``hbl`` only to the broken-array multiplier, and ``k`` only to the
    2x2-block multiplier.  Parameters that do not apply must stay 0.
    """

    kind: MultiplierKind
    wl: int
    vbl: int = 0
    hbl: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        kind = MultiplierKind(self.kind)
        object.__setattr__(self, "kind", kind)
        wl, vbl, hbl, k = self.wl, self.vbl, self.hbl, self.k
        if kind in BOOTH_KINDS:
            if wl % 2 or not (booth.WL_MIN <= wl <= booth.WL_MAX):
                raise ConfigurationError(f"{kind.value}: wl must be even in [4, 16], got {wl}")
        elif kind is MultiplierKind.BAM:
            if wl < 2:
                raise ConfigurationError(f"bam: wl must be >= 2, got {wl}")
        else:  # block
            if wl < 2 or wl & (wl - 1):
                raise ConfigurationError(f"block: wl must be a power of two >= 2, got {wl}")
        if not (0 <= vbl <= 2 * wl):
            raise ConfigurationError(f"vbl must be in [0, {2 * wl}], got {vbl}")
        if kind is MultiplierKind.ACCURATE_BOOTH and vbl != 0:
            raise ConfigurationError("accurate-booth takes no vbl; use a broken type")
        if hbl and kind is not MultiplierKind.BAM:
            raise ConfigurationError(f"hbl applies only to bam, not {kind.value}")
        if not (0 <= hbl <= wl):
            raise ConfigurationError(f"hbl must be in [0, {wl}], got {hbl}")
        if k and kind is not MultiplierKind.BLOCK_APPROX:
            raise ConfigurationError(f"k applies only to block, not {kind.value}")
        if not (0 <= k <= 2 * wl):
            raise ConfigurationError(f"k must be in [0, {2 * wl}], got {k}")

    @property
    def signed(self) -> bool:
        return self.kind in SIGNED_KINDS

    def operand_range(self) -> tuple[int, int]:
        """Half-open operand interval [lo, hi) for this multiplier."""
        if self.signed:
            return -(1 << (self.wl - 1)), 1 << (self.wl - 1)
        return 0, 1 << self.wl

    def breaking_parameter(self) -> tuple[str, int]:
        """Name and value of the truncation knob this kind sweeps."""
        if self.kind is MultiplierKind.BLOCK_APPROX:
            return "k", self.k
        if self.kind is MultiplierKind.BAM and self.hbl and not self.vbl:
            return "hbl", self.hbl
        return "vbl", self.vbl

    def replace_parameter(self, value: int) -> "MultiplierSpec":
        name, _ = self.breaking_parameter()
        kwargs = {"kind": self.kind, "wl": self.wl, "vbl": self.vbl, "hbl": self.hbl, "k": self.k}
        kwargs[name] = value
        return MultiplierSpec(**kwargs)


def multiply(spec: MultiplierSpec, x: int, y: int) -> int:
    """Scalar product of x and y under the given multiplier model."""
    kind = spec.kind
    if kind is MultiplierKind.ACCURATE_BOOTH:
        return booth.multiply_accurate(x, y, spec.wl)
    if kind is MultiplierKind.BROKEN_BOOTH_T0:
        return booth.multiply_broken_t0(x, y, spec.wl, spec.vbl)
    if kind is MultiplierKind.BROKEN_BOOTH_T1:
        return booth.multiply_broken_t1(x, y, spec.wl, spec.vbl)
    if kind is MultiplierKind.BAM:
        return arrays.multiply_bam(x, y, spec.wl, spec.vbl, spec.hbl)
    return arrays.multiply_blockapprox(x, y, spec.wl, spec.k)


def vector_multiply(spec: MultiplierSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Elementwise product under the model; x and y must broadcast."""
    kind = spec.kind
    if kind is MultiplierKind.ACCURATE_BOOTH:
        return booth.vector_accurate(x, y, spec.wl)
    if kind is MultiplierKind.BROKEN_BOOTH_T0:
        return booth.vector_t0(x, y, spec.wl, spec.vbl)
    if kind is MultiplierKind.BROKEN_BOOTH_T1:
        return booth.vector_t1(x, y, spec.wl, spec.vbl)
    if kind is MultiplierKind.BAM:
        return arrays.vector_bam(x, y, spec.wl, spec.vbl, spec.hbl)
    return arrays.vector_blockapprox(x, y, spec.wl, spec.k)
