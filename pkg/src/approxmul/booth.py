"""Radix-4 (modified Booth) signed multiplier models with vertical truncation.

The multiplier is modeled at the partial-product level.  A ``wl``-bit signed
operand ``y`` is recoded into ``wl/2`` digits in {-2,-1,0,+1,+2}.  Each digit
produces one partial-product row.  Rows are held as full ``2*wl``-bit residues
(sign extension folded in), so summing all rows modulo ``2**(2*wl)`` always
reconstructs the exact product.

Two truncated ("broken") variants cut the rows at a vertical column ``vbl``:

* Type 0 first resolves each row to its two's-complement residue (the +1
  carried by a negated row is already absorbed), then zeroes all bit
  positions below ``vbl``.
* Type 1 zeroes the bits of the one's-complement row pattern and keeps the
  separate +1 correction bit only when its column ``2*i`` is at or above
  ``vbl``.  Dropping those correction bits makes Type 1 cheaper in hardware
  and strictly noisier than Type 0.

Scalar functions operate on Python ints; the ``vector_*`` variants accept
numpy int64 arrays (broadcastable) and are what the sweep engine uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

WL_MIN = 4
WL_MAX = 16


def _check_wl(wl: int) -> None:
    if wl % 2 != 0 or not (WL_MIN <= wl <= WL_MAX):
        raise ConfigurationError(
            f"word length must be even and in [{WL_MIN}, {WL_MAX}], got {wl}"
        )


def _check_operand(v: int, wl: int, name: str) -> None:
    lo, hi = -(1 << (wl - 1)), (1 << (wl - 1)) - 1
    if not (lo <= v <= hi):
        raise ConfigurationError(f"{name}={v} outside signed {wl}-bit range [{lo}, {hi}]")


def _check_vbl(vbl: int, wl: int) -> None:
    if not (0 <= vbl <= 2 * wl):
        raise ConfigurationError(f"vbl must be in [0, {2 * wl}], got {vbl}")


def to_signed(value: int, bits: int) -> int:
    """Interpret ``value mod 2**bits`` as a two's-complement signed integer."""
    value &= (1 << bits) - 1
    if value >= 1 << (bits - 1):
        value -= 1 << bits
    return value


def booth_recode(y: int, wl: int) -> list[int]:
    """Recode signed ``y`` into ``wl/2`` radix-4 digits, least significant first.

    Digit i is ``-2*y[2i+1] + y[2i] + y[2i-1]`` with ``y[-1] = 0`` and the
    operand sign-extended above bit ``wl-1``.  The digits satisfy
    ``sum(d * 4**i) == y``.
    """
    _check_wl(wl)
    _check_operand(y, wl, "y")

    def bit(j: int) -> int:
        if j < 0:
            return 0
        return (y >> j) & 1  # Python ints shift arithmetically: sign-extends

    return [-2 * bit(2 * i + 1) + bit(2 * i) + bit(2 * i - 1) for i in range(wl // 2)]


@dataclass(frozen=True)
class PartialProductRow:
    """One Booth partial-product row at full product width.

    ``magnitude`` is the row's bit pattern over ``2*wl`` columns with the low
    ``2*index`` columns zero.  For a negated row it is the one's complement of
    the shifted row value over columns ``[2*index, 2*wl)``; ``s_bit`` then
    carries the deferred +1 at column ``s_column == 2*index``.
    """

    index: int
    digit: int
    magnitude: int
    s_bit: int
    s_column: int

    def residue(self, wl: int) -> int:
        """Two's-complement residue of digit*x*4**index, S absorbed."""
        return (self.magnitude + (self.s_bit << self.s_column)) & ((1 << (2 * wl)) - 1)


@dataclass(frozen=True)
class DotDiagram:
    """All partial-product rows of one multiplication."""

    wl: int
    x: int
    y: int
    rows: tuple[PartialProductRow, ...]

    def product(self) -> int:
        """Reconstruct the exact signed product from the rows."""
        mod = 1 << (2 * self.wl)
        total = sum(r.residue(self.wl) for r in self.rows) % mod
        return to_signed(total, 2 * self.wl)


def _make_row(index: int, digit: int, x: int, wl: int) -> PartialProductRow:
    mod = 1 << (2 * wl)
    shift = 2 * index
    if digit >= 0 or x == 0:
        # Non-negated row (a zero operand never needs negation).
        mag = ((digit * x) << shift) % mod
        return PartialProductRow(index, digit, mag, 0, shift)
    # Negated row: complement columns [shift, 2*wl) of |digit|*x*4**index and
    # defer the +1 to the S bit at the row's least significant column.
    pos = ((-digit) * x << shift) % mod
    mag = (mod - (1 << shift)) - pos
    return PartialProductRow(index, digit, mag, 1, shift)


def build_dot_diagram(x: int, y: int, wl: int) -> DotDiagram:
    """Build the partial-product rows for ``x*y``.

    Invariant: the residues of all rows sum to the exact product modulo
    ``2**(2*wl)``.
    """
    _check_wl(wl)
    _check_operand(x, wl, "x")
    digits = booth_recode(y, wl)
    rows = tuple(_make_row(i, d, x, wl) for i, d in enumerate(digits))
    return DotDiagram(wl, x, y, rows)


def multiply_accurate(x: int, y: int, wl: int) -> int:
    """Exact signed product computed through the partial-product model."""
    return build_dot_diagram(x, y, wl).product()


def multiply_broken_t0(x: int, y: int, wl: int, vbl: int) -> int:
    """Type 0 vertically truncated product.

    Each row's two's-complement residue has its bits below column ``vbl``
    cleared before the rows are summed modulo ``2**(2*wl)``.  ``vbl == 0``
    reproduces the exact product.
    """
    _check_vbl(vbl, wl)
    diagram = build_dot_diagram(x, y, wl)
    mod = 1 << (2 * wl)
    keep = ~((1 << vbl) - 1)
    total = sum(r.residue(wl) & keep for r in diagram.rows) % mod
    return to_signed(total, 2 * wl)


def multiply_broken_t1(x: int, y: int, wl: int, vbl: int) -> int:
    """Type 1 vertically truncated product.

    Bits of the one's-complement row patterns below ``vbl`` are cleared and a
    negated row's +1 correction survives only when its column ``2*i`` is at or
    above ``vbl``.  ``vbl == 0`` reproduces the exact product.
    """
    _check_vbl(vbl, wl)
    diagram = build_dot_diagram(x, y, wl)
    mod = 1 << (2 * wl)
    keep = ~((1 << vbl) - 1)
    total = 0
    for row in diagram.rows:
        total += row.magnitude & keep
        if row.s_bit and row.s_column >= vbl:
            total += 1 << row.s_column
    return to_signed(total % mod, 2 * wl)


# ---------------------------------------------------------------------------
# Vectorized variants.  x and y are int64 arrays (or scalars) and must
# broadcast against each other; arithmetic stays inside int64 because
# 2*wl <= 32 bits of product plus row headroom is far below 63 bits.
# ---------------------------------------------------------------------------


def _vector_digit(y: np.ndarray, i: int) -> np.ndarray:
    b1 = (y >> (2 * i + 1)) & 1
    b0 = (y >> (2 * i)) & 1
    bm = (y >> (2 * i - 1)) & 1 if i > 0 else 0
    return -2 * b1 + b0 + bm


def vector_accurate(x: np.ndarray, y: np.ndarray, wl: int) -> np.ndarray:
    _check_wl(wl)
    return np.asarray(x, dtype=np.int64) * np.asarray(y, dtype=np.int64)


def vector_t0(x: np.ndarray, y: np.ndarray, wl: int, vbl: int) -> np.ndarray:
    """Vectorized Type 0 truncated product (see multiply_broken_t0)."""
    _check_wl(wl)
    _check_vbl(vbl, wl)
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    mod_mask = np.int64((1 << (2 * wl)) - 1)
    keep = np.int64(~((1 << vbl) - 1))
    total = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
    for i in range(wl // 2):
        d = _vector_digit(y, i)
        residue = ((d * x) << (2 * i)) & mod_mask
        total += residue & keep
    total &= mod_mask
    sign = np.int64(1 << (2 * wl - 1))
    return np.where(total >= sign, total - (np.int64(1) << (2 * wl)), total)


def vector_t1(x: np.ndarray, y: np.ndarray, wl: int, vbl: int) -> np.ndarray:
    """Vectorized Type 1 truncated product (see multiply_broken_t1)."""
    _check_wl(wl)
    _check_vbl(vbl, wl)
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    mod = 1 << (2 * wl)
    mod_mask = np.int64(mod - 1)
    keep = np.int64(~((1 << vbl) - 1))
    total = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
    for i in range(wl // 2):
        shift = 2 * i
        d = _vector_digit(y, i)
        pos_residue = ((d * x) << shift) & mod_mask
        mag_neg = np.int64(mod - (1 << shift)) - (((-d) * x << shift) & mod_mask)
        term_neg = mag_neg & keep
        if shift >= vbl:
            term_neg = term_neg + np.int64(1 << shift)
        negated = (d < 0) & (x != 0)
        total += np.where(negated, term_neg, np.where(d >= 0, pos_residue & keep, 0))
    total &= mod_mask
    sign = np.int64(1 << (2 * wl - 1))
    return np.where(total >= sign, total - np.int64(mod), total)


def dot_count(
    wl: int,
    vbl: int,
    include_s_dots: bool = False,
    extra_sign_dots: int = 0,
) -> tuple[int, int]:
    """Count compact dot-diagram positions and how many ``vbl`` nullifies.

    The compact layout gives every row ``wl + 1`` magnitude dots spanning
    columns ``[2*i, 2*i + wl]``, except the final row whose top column is
    completed by the shared sign-encoding constant and so carries ``wl`` dots.
    A dot is nullified when its column is strictly below ``vbl``.

    ``include_s_dots`` adds one +1-correction dot per row at column ``2*i``;
    ``extra_sign_dots`` adds that many sign-encoding dots pinned at column
    ``2*wl - 1``.  Both default off, which is the layout the totals in this
    package are calibrated against (wl=12 -> 77 dots, 36 nullified at vbl=11).

    Returns ``(total_dots, nullified_dots)``.
    """
    _check_wl(wl)
    _check_vbl(vbl, wl)
    if extra_sign_dots < 0:
        raise ConfigurationError("extra_sign_dots must be >= 0")
    n_rows = wl // 2
    total = 0
    nullified = 0
    for i in range(n_rows):
        width = wl + 1 if i < n_rows - 1 else wl
        total += width
        low = 2 * i
        # columns [low, low+width); nullified while column < vbl
        nullified += min(width, max(0, vbl - low))
        if include_s_dots:
            total += 1
            if low < vbl:
                nullified += 1
    total += extra_sign_dots
    if 2 * wl - 1 < vbl:
        nullified += extra_sign_dots
    return total, nullified
