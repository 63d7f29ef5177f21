"""Unsigned array-multiplier baselines: broken-array and 2x2-block designs.

Both models drop or simplify low-significance partial products:

* The broken-array multiplier keeps the single-bit partial product
  ``x[i]*y[j]`` only when its column ``i + j`` is at or above the vertical
  break ``vbl`` and its row ``j`` is below ``wl - hbl`` (the horizontal break
  drops the top rows).
* The 2x2-block multiplier composes the product from 2-bit digit products;
  a block is built from the approximate 2x2 cell (exact except 3*3 -> 7)
  whenever the block's most significant output column ``2*(i+j) + 3`` lies
  below the cut ``k``.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError


def _check_unsigned(v: int, wl: int, name: str) -> None:
    if not (0 <= v < 1 << wl):
        raise ConfigurationError(f"{name}={v} outside unsigned {wl}-bit range")


def multiply_bam(x: int, y: int, wl: int, vbl: int = 0, hbl: int = 0) -> int:
    """Broken-array product of unsigned ``wl``-bit operands.

    ``vbl == 0`` and ``hbl == 0`` give the exact product.
    """
    if wl < 2:
        raise ConfigurationError(f"wl must be >= 2, got {wl}")
    if not (0 <= vbl <= 2 * wl):
        raise ConfigurationError(f"vbl must be in [0, {2 * wl}], got {vbl}")
    if not (0 <= hbl <= wl):
        raise ConfigurationError(f"hbl must be in [0, {wl}], got {hbl}")
    _check_unsigned(x, wl, "x")
    _check_unsigned(y, wl, "y")
    total = 0
    for j in range(wl - hbl):
        if not (y >> j) & 1:
            continue
        # keep x bits with i + j >= vbl
        first_i = max(0, vbl - j)
        total += (x >> first_i << first_i) << j
    return total


def multiply_block2x2(a: int, b: int, approximate: bool) -> int:
    """2-bit by 2-bit building block; the approximate cell maps 3*3 to 7."""
    if not (0 <= a <= 3 and 0 <= b <= 3):
        raise ConfigurationError("block operands must be 2-bit values")
    if approximate and a == 3 and b == 3:
        return 7
    return a * b


def multiply_blockapprox(x: int, y: int, wl: int, k: int) -> int:
    """Product assembled from 2x2 blocks over the operands' 2-bit digits.

    Block ``(i, j)`` is the approximate cell when ``2*(i+j) + 3 < k``; blocks
    whose output columns straddle the cut stay exact.  ``k == 0`` gives the
    exact product, ``k == 2*wl`` makes every block approximate.
    """
    if wl < 2 or wl & (wl - 1):
        raise ConfigurationError(f"wl must be a power of two >= 2, got {wl}")
    if not (0 <= k <= 2 * wl):
        raise ConfigurationError(f"k must be in [0, {2 * wl}], got {k}")
    _check_unsigned(x, wl, "x")
    _check_unsigned(y, wl, "y")
    total = 0
    for i in range(wl // 2):
        xd = (x >> (2 * i)) & 3
        for j in range(wl // 2):
            yd = (y >> (2 * j)) & 3
            p = multiply_block2x2(xd, yd, 2 * (i + j) + 3 < k)
            total += p << (2 * (i + j))
    return total


# ---------------------------------------------------------------------------
# Vectorized variants over broadcastable int64 arrays.
# ---------------------------------------------------------------------------


def vector_bam(x: np.ndarray, y: np.ndarray, wl: int, vbl: int, hbl: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    total = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
    for j in range(wl - hbl):
        first_i = max(0, vbl - j)
        kept = (x >> first_i) << first_i
        total += (kept << j) * ((y >> j) & 1)
    return total


def vector_blockapprox(x: np.ndarray, y: np.ndarray, wl: int, k: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    total = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
    for i in range(wl // 2):
        xd = (x >> (2 * i)) & 3
        for j in range(wl // 2):
            yd = (y >> (2 * j)) & 3
            p = xd * yd
            if 2 * (i + j) + 3 < k:
                p = p - 2 * ((xd == 3) & (yd == 3))
            total += p << (2 * (i + j))
    return total
