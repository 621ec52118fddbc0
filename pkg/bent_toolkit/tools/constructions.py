"""Secondary constructions of bent functions and the generators that feed them.

New variables are always appended at the high-index end of the table, so a construction
on n + 2 (or n + 4) variables sees its inputs A, B, C as functions of the low n variables.
Constructors are total: they accept non-bent inputs and leave bentness to the verifiers.
"""
import logging
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from bent_toolkit.config import MAX_VARIABLES
from bent_toolkit.errors import CapacityError, DimensionError, FormatError, PreconditionError
from bent_toolkit.tools.boolean_function import (
    BooleanFunction,
    Mask,
    direct_sum,
    lift,
    majority,
    parity_table,
    parse_truth_table,
)
from bent_toolkit.tools.spectral_tool import is_bent

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1

QUARTER_FLAG_NAMES = ("A", "B", "C", "A+B+C")


def seeded_generator(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed; every randomized routine goes through here."""
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


class RothausVariant(Enum):
    F = "f"
    F_PRIME = "fp"
    F_DOUBLE_PRIME = "fpp"


class HodzicVariant(Enum):
    G = "g"
    G_PRIME = "gp"
    G_DOUBLE_PRIME = "gpp"


# coefficients of x_{n+1} and x_{n+2}, as written in the defining formulas
ROTHAUS_CROSS_TERMS: Dict[RothausVariant, Tuple[Tuple[str, str], Tuple[str, str]]] = {
    RothausVariant.F: (("A", "B"), ("A", "C")),
    RothausVariant.F_PRIME: (("B", "C"), ("A", "B")),
    RothausVariant.F_DOUBLE_PRIME: (("A", "C"), ("B", "C")),
}

# functions placed in the slots of
#   s1 (x1 + x2) + s2 (1 + x1 + x3) + (s3 + x1)(x2 + x3) + (x1 + x2) x4
# where xi stands for x_{n+i}
HODZIC_SLOTS: Dict[HodzicVariant, Tuple[str, str, str]] = {
    HodzicVariant.G: ("B", "A", "C"),
    HodzicVariant.G_PRIME: ("A", "C", "B"),
    HodzicVariant.G_DOUBLE_PRIME: ("C", "B", "A"),
}


class BentTriple:
    """Three functions A, B, C on a common even n, with lazily cached bentness flags."""

    def __init__(self, a: BooleanFunction, b: BooleanFunction, c: BooleanFunction):
        if not (a.n == b.n == c.n):
            raise DimensionError(f"Triple members disagree on variable count: {a.n}, {b.n}, {c.n}")
        if a.n % 2:
            raise DimensionError(f"Triple needs an even variable count, got {a.n}")
        self.n = a.n
        self.a = a
        self.b = b
        self.c = c
        self._sum: Optional[BooleanFunction] = None
        self._flags: Dict[str, bool] = {}

    @property
    def triple_sum(self) -> BooleanFunction:
        if self._sum is None:
            self._sum = self.a ^ self.b ^ self.c
        return self._sum

    def member(self, name: str) -> BooleanFunction:
        return {"A": self.a, "B": self.b, "C": self.c, "A+B+C": self.triple_sum}[name]

    def flag(self, name: str) -> bool:
        if name not in self._flags:
            self._flags[name] = is_bent(self.member(name))
        return self._flags[name]

    def flags(self) -> Dict[str, bool]:
        return {name: self.flag(name) for name in QUARTER_FLAG_NAMES}

    def failing_conditions(self) -> List[str]:
        return [f"{name} not bent" for name in QUARTER_FLAG_NAMES if not self.flag(name)]

    def satisfies_quadruple(self) -> bool:
        return not self.failing_conditions()

    def render(self, fmt: str = 'binary') -> str:
        if fmt == 'hex' and self.n < 3:
            fmt = 'binary'
        return "\n".join(f.render(fmt) for f in (self.a, self.b, self.c))

    @classmethod
    def parse(cls, text: str) -> 'BentTriple':
        lines = [line for line in text.splitlines() if line.strip()]
        if len(lines) != 3:
            raise FormatError(f"A triple block needs three table lines, got {len(lines)}")
        return cls(*(parse_truth_table(line) for line in lines))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BentTriple):
            return NotImplemented
        return (self.a, self.b, self.c) == (other.a, other.b, other.c)

    def __repr__(self) -> str:
        return f"BentTriple(n={self.n}, A={self.a!r}, B={self.b!r}, C={self.c!r})"


def _check_room(n: int, extra: int) -> int:
    if n + extra > MAX_VARIABLES:
        raise CapacityError(f"Construction on {n} + {extra} variables exceeds the cap of {MAX_VARIABLES}")
    return n + extra


def _lifted_members(t: BentTriple, extra: int) -> Dict[str, BooleanFunction]:
    return {"A": lift(t.a, extra), "B": lift(t.b, extra), "C": lift(t.c, extra)}


def rothaus(t: BentTriple, v: RothausVariant = RothausVariant.F) -> BooleanFunction:
    """AB + AC + BC + x_{n+1}x_{n+2} + P x_{n+1} + Q x_{n+2}, (P, Q) picked by the variant."""
    m = _check_room(t.n, 2)
    lifted = _lifted_members(t, 2)
    y1 = BooleanFunction.variable(m, t.n + 1)
    y2 = BooleanFunction.variable(m, t.n + 2)
    (p1, p2), (q1, q2) = ROTHAUS_CROSS_TERMS[v]
    base = majority(lifted["A"], lifted["B"], lifted["C"]) ^ (y1 & y2)
    logger.debug("Rothaus %s on %d variables", v.value, m)
    return base ^ ((lifted[p1] ^ lifted[p2]) & y1) ^ ((lifted[q1] ^ lifted[q2]) & y2)


def hodzic(t: BentTriple, v: HodzicVariant = HodzicVariant.G) -> BooleanFunction:
    """s1 (y1+y2) + s2 (1+y1+y3) + (s3+y1)(y2+y3) + (y1+y2) y4 with y_i = x_{n+i}."""
    m = _check_room(t.n, 4)
    lifted = _lifted_members(t, 4)
    y1, y2, y3, y4 = (BooleanFunction.variable(m, t.n + i) for i in range(1, 5))
    s1, s2, s3 = (lifted[name] for name in HODZIC_SLOTS[v])
    logger.debug("Hodzic %s on %d variables", v.value, m)
    return (
        (s1 & (y1 ^ y2))
        ^ (s2 & ~(y1 ^ y3))
        ^ ((s3 ^ y1) & (y2 ^ y3))
        ^ ((y1 ^ y2) & y4)
    )


def parse_permutation(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise FormatError(f"Permutation must be a comma-separated index list, got '{text}'")


def render_permutation(pi: Sequence[int]) -> str:
    return ",".join(str(int(p)) for p in pi)


def mm_bent(pi: Sequence[int], rho: BooleanFunction) -> BooleanFunction:
    """Maiorana-McFarland function x . pi(y) + rho(y), x on the low m variables."""
    perm = np.asarray(pi, dtype=np.int64).reshape(-1)
    size = perm.size
    m = size.bit_length() - 1
    if size < 2 or size != 1 << m:
        raise DimensionError(f"Permutation length {size} is not 2^m with m >= 1")
    if rho.n != m:
        raise DimensionError(f"rho has {rho.n} variables, expected {m}")
    _check_room(m, m)
    if not np.array_equal(np.sort(perm), np.arange(size)):
        raise PreconditionError("pi is not a permutation of {0, ..., 2^m - 1}")
    x = np.arange(size, dtype=np.int64)
    table = parity_table(m)[np.bitwise_and.outer(perm, x)] ^ rho.table[:, None]
    return BooleanFunction(2 * m, table.reshape(-1))


def _random_mm(m: int, rng: np.random.Generator) -> BooleanFunction:
    size = 1 << m
    # Generator.permutation is a Fisher-Yates shuffle
    pi = rng.permutation(size)
    rho = BooleanFunction(m, rng.integers(0, 2, size=size, dtype=np.uint8))
    return mm_bent(pi, rho)


def random_mm_bent(m: int, seed: int) -> BooleanFunction:
    if m < 1:
        raise DimensionError(f"m must be positive, got {m}")
    _check_room(m, m)
    return _random_mm(m, seeded_generator(seed))


def inner_product_quadratic(n: int) -> BooleanFunction:
    """x1x2 + x3x4 + ... + x_{n-1}x_n."""
    if n < 2 or n % 2:
        raise DimensionError(f"Inner-product form needs an even n >= 2, got {n}")
    _check_room(n, 0)
    block = BooleanFunction(2, [0, 0, 0, 1])
    result = block
    for _ in range(n // 2 - 1):
        result = direct_sum(result, block)
    return result


def affine_shift_triple(a: BooleanFunction, l1: Mask, l2: Mask) -> BentTriple:
    """(A, A + l1.x, A + l2.x) for bent A; all four bentness conditions then hold."""
    if not is_bent(a):
        raise PreconditionError("A not bent")
    return BentTriple(a, a ^ BooleanFunction.linear(a.n, l1), a ^ BooleanFunction.linear(a.n, l2))


def random_affine_shift_triple(n: int, rng: np.random.Generator) -> BentTriple:
    """Affine-shift triple around a random Maiorana-McFarland bent function on n variables."""
    if n < 2 or n % 2:
        raise DimensionError(f"Affine-shift triples need an even n >= 2, got {n}")
    a = _random_mm(n // 2, rng)
    l1 = int(rng.integers(0, 1 << n))
    l2 = int(rng.integers(0, 1 << n))
    return affine_shift_triple(a, l1, l2)
