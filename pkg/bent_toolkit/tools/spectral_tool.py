import logging
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from bent_toolkit.config import (
    COMPOSITION_MAX_INPUTS,
    COMPOSITION_MAX_VARIABLES,
    MAX_VARIABLES,
    NAIVE_CACHE_MAX_VARIABLES,
    NAIVE_MAX_VARIABLES,
)
from bent_toolkit.errors import CapacityError, DimensionError, IntegrityError
from bent_toolkit.tools.boolean_function import (
    BitVector,
    BooleanFunction,
    compose,
    parity_table,
    xor_all,
)

logger = logging.getLogger(__name__)


class WalshSpectrum:
    """Walsh-Hadamard spectrum: values[idx(u)] = W_f(u), stored as int32."""

    def __init__(self, n: int, values: Any):
        arr = np.asarray(values, dtype=np.int64).reshape(-1)
        if arr.size != (1 << n):
            raise DimensionError(f"Spectrum has {arr.size} values, expected 2^{n}")
        arr = arr.astype(np.int32)
        arr.setflags(write=False)
        self.n = n
        self.values = arr

    def at(self, u: Union[int, BitVector]) -> int:
        if isinstance(u, (int, np.integer)):
            index = int(u)
            if not 0 <= index < self.values.size:
                raise DimensionError(f"Index {index} is outside 0..{self.values.size - 1}")
            return int(self.values[index])
        bits = [int(b) for b in u]
        if len(bits) != self.n:
            raise DimensionError(f"Point has length {len(bits)}, expected {self.n}")
        if any(b not in (0, 1) for b in bits):
            raise DimensionError(f"Point {bits} is not a bit vector")
        return int(self.values[sum(b << i for i, b in enumerate(bits))])

    def parseval_ok(self) -> bool:
        squares = self.values.astype(np.int64) ** 2
        return int(squares.sum()) == 1 << (2 * self.n)

    def max_abs(self) -> int:
        return int(np.abs(self.values.astype(np.int64)).max())

    def to_list(self) -> List[int]:
        return [int(v) for v in self.values]

    def render(self, compact: bool = True) -> str:
        sep = "," if compact else "\n"
        return sep.join(str(v) for v in self.to_list())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WalshSpectrum):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.values, other.values))

    def __repr__(self) -> str:
        if self.n <= 4:
            return f"WalshSpectrum(n={self.n}, {self.to_list()})"
        return f"WalshSpectrum(n={self.n}, max|W|={self.max_abs()})"


class BentVerdict:
    """Outcome of a bentness test, with the reason when negative."""

    def __init__(self, is_bent: bool, reason: str = ""):
        self.is_bent = is_bent
        self.reason = reason

    def __bool__(self) -> bool:
        return self.is_bent

    def to_dict(self) -> Dict[str, Any]:
        return {"bent": self.is_bent, "reason": self.reason}


def walsh_transform_batch(tables: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform of (-1)^f along the last axis.

    tables holds 0/1 truth tables of shape (..., 2^n); the butterfly accumulates in int64.
    """
    size = tables.shape[-1]
    n = size.bit_length() - 1
    if size != 1 << n:
        raise DimensionError(f"Last axis has {size} entries, not a power of two")
    values = 1 - 2 * tables.astype(np.int64)
    _butterfly(values, n)
    return values


def _butterfly(values: np.ndarray, n: int) -> None:
    # in place over the last axis: pairs (j, j + half) inside every block of 2 * half
    lead = values.shape[:-1]
    half = 1
    for _ in range(n):
        view = values.reshape(lead + (-1, 2, half))
        low = view[..., 0, :].copy()
        view[..., 0, :] += view[..., 1, :]
        view[..., 1, :] = low - view[..., 1, :]
        half *= 2


def signed_transform(values: np.ndarray) -> np.ndarray:
    """The same butterfly on an arbitrary integer sequence of length 2^n (no sign mapping)."""
    out = np.array(values, dtype=np.int64)
    size = out.shape[-1]
    n = size.bit_length() - 1
    if size != 1 << n:
        raise DimensionError(f"Sequence has {size} entries, not a power of two")
    _butterfly(out, n)
    return out


def wht_fast(f: BooleanFunction) -> WalshSpectrum:
    if f.n > MAX_VARIABLES:
        raise CapacityError(f"Transform is capped at {MAX_VARIABLES} variables")
    logger.debug("Fast transform on %d variables", f.n)
    return WalshSpectrum(f.n, walsh_transform_batch(f.table))


@lru_cache(maxsize=2)
def _sign_matrix(n: int) -> np.ndarray:
    # entry (u, x) = (-1)^(u.x); float32 keeps every partial sum exact up to 2^24
    size = 1 << n
    idx = np.arange(size, dtype=np.int64)
    par = parity_table(n)
    matrix = np.empty((size, size), dtype=np.float32)
    rows = max(1, (1 << 20) // size)
    for start in range(0, size, rows):
        block = par[np.bitwise_and.outer(idx[start:start + rows], idx)]
        matrix[start:start + rows] = 1 - 2 * block.astype(np.float32)
    return matrix


def wht_naive(f: BooleanFunction) -> WalshSpectrum:
    """W_f(u) summed straight from the definition; the oracle for wht_fast."""
    if f.n > NAIVE_MAX_VARIABLES:
        raise CapacityError(f"Naive transform is capped at {NAIVE_MAX_VARIABLES} variables")
    signs = (1 - 2 * f.table.astype(np.int64))
    if f.n <= NAIVE_CACHE_MAX_VARIABLES:
        values = _sign_matrix(f.n) @ signs.astype(np.float32)
        return WalshSpectrum(f.n, np.rint(values).astype(np.int64))
    size = 1 << f.n
    idx = np.arange(size, dtype=np.int64)
    par = parity_table(f.n)
    values = np.empty(size, dtype=np.int64)
    rows = max(1, (1 << 22) // size)
    for start in range(0, size, rows):
        u = idx[start:start + rows]
        chars = 1 - 2 * par[np.bitwise_and.outer(u, idx)].astype(np.int64)
        values[start:start + rows] = chars @ signs
    return WalshSpectrum(f.n, values)


def bentness(f: BooleanFunction, spectrum: Optional[WalshSpectrum] = None) -> BentVerdict:
    if f.n % 2:
        return BentVerdict(False, "odd variable count")
    if spectrum is None:
        spectrum = wht_fast(f)
    target = 1 << (f.n // 2)
    off = np.flatnonzero(np.abs(spectrum.values.astype(np.int64)) != target)
    if off.size:
        u = int(off[0])
        return BentVerdict(False, f"|W(u)| = {abs(spectrum.at(u))} != 2^{f.n // 2} at u={u}")
    return BentVerdict(True)


def is_bent(f: BooleanFunction) -> bool:
    return bentness(f).is_bent


def dual(f: BooleanFunction) -> BooleanFunction:
    """The dual bent function: W_f(u) = 2^(n/2) * (-1)^dual(u)."""
    verdict = bentness(f)
    if not verdict:
        raise DimensionError(f"Dual is defined for bent functions only ({verdict.reason})")
    return BooleanFunction(f.n, (wht_fast(f).values < 0).astype(np.uint8))


def weight_from_spectrum(s: WalshSpectrum) -> int:
    """(2^n - W(0)) / 2, the Hamming weight recovered from the spectrum."""
    rest = (1 << s.n) - int(s.values[0])
    if rest % 2 or rest < 0 or rest > (1 << (s.n + 1)):
        raise IntegrityError(f"W(0) = {int(s.values[0])} is inconsistent with n = {s.n}")
    return rest // 2


def bent_census(n: int) -> int:
    """Number of bent functions on n variables by exhaustive transform (n <= 4)."""
    if n > 4:
        raise CapacityError("Bent census is limited to n <= 4")
    if n % 2:
        return 0
    size = 1 << n
    count = 0
    chunk = 1 << 12
    total = 1 << size
    bit_index = np.arange(size, dtype=np.int64)
    target = 1 << (n // 2)
    for start in range(0, total, chunk):
        values = np.arange(start, min(start + chunk, total), dtype=np.int64)
        tables = ((values[:, None] >> bit_index[None, :]) & 1).astype(np.uint8)
        spectra = walsh_transform_batch(tables)
        count += int(np.all(np.abs(spectra) == target, axis=1).sum())
    return count


def _check_composition(h: BooleanFunction, functions: Sequence[BooleanFunction]) -> int:
    if len(functions) != h.n:
        raise DimensionError(f"h has {h.n} inputs but {len(functions)} functions were given")
    if h.n > COMPOSITION_MAX_INPUTS:
        raise CapacityError(f"Composition is capped at {COMPOSITION_MAX_INPUTS} inner functions")
    n = functions[0].n
    for f in functions[1:]:
        if f.n != n:
            raise DimensionError(f"Inner functions disagree on variable count: {n} and {f.n}")
    if n > COMPOSITION_MAX_VARIABLES:
        raise CapacityError(f"Composition is capped at {COMPOSITION_MAX_VARIABLES} variables")
    return n


def composition_spectrum(h: BooleanFunction, functions: Sequence[BooleanFunction]) -> WalshSpectrum:
    """Spectrum of h(f1, ..., fk) as 2^-k * sum over w of W_h(w) * W_{w.F}."""
    n = _check_composition(h, functions)
    k = h.n
    outer = wht_fast(h).values
    total = np.zeros(1 << n, dtype=np.int64)
    for omega in range(1 << k):
        weight = int(outer[omega])
        if weight == 0:
            continue
        chosen = [functions[i] for i in range(k) if (omega >> i) & 1]
        inner = wht_fast(xor_all(chosen, n)).values.astype(np.int64)
        total += weight * inner
    if np.any(total % (1 << k)):
        raise IntegrityError(f"Composition sum is not divisible by 2^{k}")
    return WalshSpectrum(n, total >> k)


def composition_wht(h: BooleanFunction, functions: Sequence[BooleanFunction], u: Union[int, BitVector]) -> int:
    return composition_spectrum(h, functions).at(u)


def direct_composition_spectrum(h: BooleanFunction, functions: Sequence[BooleanFunction]) -> WalshSpectrum:
    _check_composition(h, functions)
    return wht_fast(compose(h, functions))
