import hashlib
import logging
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from bent_toolkit.config import MAX_VARIABLES
from bent_toolkit.errors import CapacityError, DimensionError, FormatError

logger = logging.getLogger(__name__)

BitVector = Sequence[int]
Mask = Union[int, BitVector]


@lru_cache(maxsize=None)
def popcount_table(n: int) -> np.ndarray:
    """Hamming weight of every index 0 .. 2^n - 1."""
    idx = np.arange(1 << n, dtype=np.int64)
    weights = np.zeros(1 << n, dtype=np.int64)
    for bit in range(n):
        weights += (idx >> bit) & 1
    weights.setflags(write=False)
    return weights


def parity_table(n: int) -> np.ndarray:
    """Parity (popcount mod 2) of every index 0 .. 2^n - 1, as uint8."""
    return (popcount_table(n) & 1).astype(np.uint8)


def _check_capacity(n: int) -> None:
    if n > MAX_VARIABLES:
        raise CapacityError(f"{n} variables exceeds the cap of {MAX_VARIABLES}")


def _mask_to_int(n: int, mask: Mask) -> int:
    if isinstance(mask, (int, np.integer)):
        value = int(mask)
        if value < 0 or value >= (1 << n):
            raise DimensionError(f"Mask {value} does not fit {n} variables")
        return value
    bits = list(mask)
    if len(bits) != n:
        raise DimensionError(f"Mask has length {len(bits)}, expected {n}")
    value = 0
    for i, bit in enumerate(bits):
        if bit not in (0, 1):
            raise DimensionError(f"Mask entry {bit!r} is not a bit")
        value |= int(bit) << i
    return value


class BooleanFunction:
    """Truth table of an n-variable Boolean function.

    Entry idx(x) of the table holds f(x), where idx(x1, ..., xn) = sum of xi * 2^(i-1),
    so x1 is the least significant bit. Appending variables on the high end therefore
    means concatenating tables. Tables are read-only after construction.
    """

    def __init__(self, n: int, table: Any):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise DimensionError(f"Variable count must be a positive integer, got {n!r}")
        _check_capacity(int(n))
        arr = np.array(table, dtype=np.uint8).reshape(-1)
        if arr.size != (1 << n):
            raise DimensionError(f"Table has {arr.size} entries, expected 2^{n} = {1 << n}")
        if arr.size and int(arr.max()) > 1:
            raise FormatError("Table entries must be 0 or 1")
        arr.setflags(write=False)
        self.n = int(n)
        self.table = arr

    # --- constructors ---

    @classmethod
    def zero(cls, n: int) -> 'BooleanFunction':
        return cls(n, np.zeros(1 << n, dtype=np.uint8))

    @classmethod
    def one(cls, n: int) -> 'BooleanFunction':
        return cls(n, np.ones(1 << n, dtype=np.uint8))

    @classmethod
    def variable(cls, n: int, i: int) -> 'BooleanFunction':
        """The coordinate function x_i, 1 <= i <= n."""
        if not 1 <= i <= n:
            raise DimensionError(f"Variable x{i} does not exist on {n} variables")
        _check_capacity(n)
        idx = np.arange(1 << n, dtype=np.int64)
        return cls(n, ((idx >> (i - 1)) & 1).astype(np.uint8))

    @classmethod
    def linear(cls, n: int, mask: Mask) -> 'BooleanFunction':
        """The linear function l . x for a mask given as an int or a bit vector (l1 first)."""
        _check_capacity(n)
        value = _mask_to_int(n, mask)
        idx = np.arange(1 << n, dtype=np.int64)
        return cls(n, parity_table(n)[idx & value])

    @classmethod
    def from_int(cls, n: int, value: int) -> 'BooleanFunction':
        """Table whose entry idx is bit idx of value."""
        size = 1 << n
        if value < 0 or value.bit_length() > size:
            raise DimensionError(f"Value does not fit a table of {size} entries")
        raw = np.frombuffer(int(value).to_bytes(max(1, size // 8), 'little'), dtype=np.uint8)
        return cls(n, np.unpackbits(raw, bitorder='little')[:size])

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> 'BooleanFunction':
        _check_capacity(n)
        return cls(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))

    # --- views and renderings ---

    def to_int(self) -> int:
        return int.from_bytes(np.packbits(self.table, bitorder='little').tobytes(), 'little')

    def to_binary(self) -> str:
        return (self.table + ord('0')).tobytes().decode('ascii')

    def to_hex(self) -> str:
        """Hex rendering: byte j holds entries 8j..8j+7, entry idx at bit (idx mod 8)."""
        if self.n < 3:
            raise FormatError(f"Hex rendering needs at least 3 variables, got {self.n}")
        return '0x' + np.packbits(self.table, bitorder='little').tobytes().hex()

    def render(self, fmt: str = 'binary') -> str:
        if fmt == 'hex':
            return self.to_hex()
        if fmt == 'binary':
            return self.to_binary()
        raise FormatError(f"Unknown table format '{fmt}'")

    def digest(self) -> str:
        """MD5 of the packed table, used to identify tables in transcripts."""
        packed = np.packbits(self.table, bitorder='little').tobytes()
        return hashlib.md5(f"{self.n}:".encode() + packed).hexdigest()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "table": self.to_binary() if self.n < 3 else self.to_hex(),
            "weight": hamming_weight(self),
            "digest": self.digest()
        }

    # --- pointwise algebra ---

    def evaluate(self, x: BitVector) -> int:
        bits = list(x)
        if len(bits) != self.n:
            raise DimensionError(f"Input has length {len(bits)}, expected {self.n}")
        return int(self.table[_mask_to_int(self.n, bits)])

    def __xor__(self, other: 'BooleanFunction') -> 'BooleanFunction':
        _same_n(self, other)
        return BooleanFunction(self.n, self.table ^ other.table)

    def __and__(self, other: 'BooleanFunction') -> 'BooleanFunction':
        _same_n(self, other)
        return BooleanFunction(self.n, self.table & other.table)

    def __invert__(self) -> 'BooleanFunction':
        return BooleanFunction(self.n, self.table ^ 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))

    def __repr__(self) -> str:
        if self.n <= 6:
            return f"BooleanFunction(n={self.n}, '{self.to_binary()}')"
        return f"BooleanFunction(n={self.n}, md5={self.digest()[:12]})"


def _same_n(*functions: BooleanFunction) -> int:
    n = functions[0].n
    for f in functions[1:]:
        if f.n != n:
            raise DimensionError(f"Variable counts differ: {n} and {f.n}")
    return n


class AlgebraicNormalForm:
    """Coefficient table of the algebraic normal form: bit idx(alpha) is lambda_alpha."""

    def __init__(self, n: int, coeffs: Any):
        self.n = n
        self.coeffs = BooleanFunction(n, coeffs).table

    @property
    def is_zero(self) -> bool:
        return not bool(self.coeffs.any())

    @property
    def degree(self) -> int:
        # the zero function reports 0; callers tell it apart through is_zero
        support = np.flatnonzero(self.coeffs)
        if support.size == 0:
            return 0
        return int(popcount_table(self.n)[support].max())

    def as_function(self) -> BooleanFunction:
        """The coefficient table read as a truth table (Moebius is self-inverse)."""
        return BooleanFunction(self.n, self.coeffs)

    def monomials(self) -> List[Tuple[int, ...]]:
        """Monomials with coefficient 1, each as the tuple of its 1-based variable indices."""
        terms = []
        for alpha in np.flatnonzero(self.coeffs):
            terms.append(tuple(i + 1 for i in range(self.n) if (int(alpha) >> i) & 1))
        terms.sort(key=lambda t: (len(t), t))
        return terms

    def render(self) -> str:
        parts = []
        for term in self.monomials():
            parts.append("".join(f"x{i}" for i in term) if term else "1")
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraicNormalForm):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.coeffs, other.coeffs))


def parse_truth_table(text: str) -> BooleanFunction:
    """Parse a binary string ('0'/'1', index 0 leftmost) or a '0x' hex string."""
    text = text.strip()
    if text[:2] in ('0x', '0X'):
        digits = text[2:]
        if not digits or len(digits) % 2:
            raise FormatError(f"Hex table must hold whole bytes, got {len(digits)} digits")
        try:
            raw = bytes.fromhex(digits)
        except ValueError:
            raise FormatError(f"Illegal character in hex table '{text}'")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder='little')
    else:
        illegal = set(text) - {'0', '1'}
        if illegal:
            raise FormatError(f"Illegal character(s) {''.join(sorted(illegal))!r} in binary table")
        bits = np.frombuffer(text.encode('ascii'), dtype=np.uint8) - ord('0')
    size = bits.size
    if size < 2 or size & (size - 1):
        raise FormatError(f"Table length {size} is not a power of two >= 2")
    n = size.bit_length() - 1
    _check_capacity(n)
    return BooleanFunction(n, bits)


def evaluate(f: BooleanFunction, x: BitVector) -> int:
    return f.evaluate(x)


def xor(f: BooleanFunction, g: BooleanFunction) -> BooleanFunction:
    return f ^ g


def and_(f: BooleanFunction, g: BooleanFunction) -> BooleanFunction:
    return f & g


def hamming_weight(f: BooleanFunction) -> int:
    return int(f.table.sum(dtype=np.int64))


def moebius(f: BooleanFunction) -> AlgebraicNormalForm:
    """Butterfly Moebius transform: f(x) = XOR of lambda_alpha over alpha <= x."""
    coeffs = f.table.copy()
    half = 1
    for _ in range(f.n):
        view = coeffs.reshape(-1, 2, half)
        view[:, 1, :] ^= view[:, 0, :]
        half *= 2
    return AlgebraicNormalForm(f.n, coeffs)


def algebraic_degree(f: BooleanFunction) -> int:
    return moebius(f).degree


def direct_sum(f: BooleanFunction, g: BooleanFunction) -> BooleanFunction:
    """h(x, y) = f(x) XOR g(y) with x on the low-index variables."""
    _check_capacity(f.n + g.n)
    return BooleanFunction(f.n + g.n, np.bitwise_xor.outer(g.table, f.table).reshape(-1))


def lift(f: BooleanFunction, extra: int) -> BooleanFunction:
    """f viewed as a function of extra high-index variables it does not depend on."""
    if extra == 0:
        return f
    _check_capacity(f.n + extra)
    return BooleanFunction(f.n + extra, np.tile(f.table, 1 << extra))


def decompose_top2(f: BooleanFunction) -> Tuple[BooleanFunction, BooleanFunction, BooleanFunction, BooleanFunction]:
    """Restrictions (f00, f10, f01, f11), f_ab(x) = f(x, x_{n+1}=a, x_{n+2}=b)."""
    if f.n < 3:
        raise DimensionError(f"Need at least 3 variables to split off the top two, got {f.n}")
    n = f.n - 2
    quarters = f.table.reshape(4, 1 << n)
    return tuple(BooleanFunction(n, quarters[q]) for q in range(4))  # type: ignore[return-value]


def concatenate(parts: Sequence[BooleanFunction]) -> BooleanFunction:
    """Inverse of decompose_top2 for 2^j equal-size parts, in index order of the new variables."""
    count = len(parts)
    if count < 2 or count & (count - 1):
        raise DimensionError(f"Need a power-of-two number of parts, got {count}")
    n = _same_n(*parts)
    extra = count.bit_length() - 1
    _check_capacity(n + extra)
    return BooleanFunction(n + extra, np.concatenate([p.table for p in parts]))


def compose(h: BooleanFunction, functions: Sequence[BooleanFunction]) -> BooleanFunction:
    """Direct composition x -> h(f1(x), ..., fk(x))."""
    if len(functions) != h.n:
        raise DimensionError(f"h has {h.n} inputs but {len(functions)} functions were given")
    n = _same_n(*functions)
    idx = np.zeros(1 << n, dtype=np.int64)
    for i, f in enumerate(functions):
        idx |= f.table.astype(np.int64) << i
    return BooleanFunction(n, h.table[idx])


def xor_all(functions: Sequence[BooleanFunction], n: Optional[int] = None) -> BooleanFunction:
    """XOR of a list of functions; the zero function on n variables when the list is empty."""
    if not functions:
        if n is None:
            raise DimensionError("Empty XOR needs an explicit variable count")
        return BooleanFunction.zero(n)
    _same_n(*functions)
    table = functions[0].table.copy()
    for f in functions[1:]:
        table ^= f.table
    return BooleanFunction(functions[0].n, table)


def majority(f: BooleanFunction, g: BooleanFunction, h: BooleanFunction) -> BooleanFunction:
    """fg + fh + gh, the pointwise majority vote."""
    _same_n(f, g, h)
    return BooleanFunction(f.n, (f.table & g.table) ^ (f.table & h.table) ^ (g.table & h.table))
