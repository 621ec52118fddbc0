import logging
from typing import Any, Dict, List, Tuple

from bent_toolkit.config import MAX_VARIABLES
from bent_toolkit.errors import CapacityError, DimensionError, IntegrityError, PreconditionError
from bent_toolkit.tools.constructions import QUARTER_FLAG_NAMES, BentTriple, HodzicVariant, hodzic

logger = logging.getLogger(__name__)

LEVEL_VARIANTS: Tuple[HodzicVariant, ...] = (HodzicVariant.G, HodzicVariant.G_PRIME, HodzicVariant.G_DOUBLE_PRIME)


class IterationState:
    """One level of the Hodzic iteration: a triple on base_n + 4 * level variables."""

    def __init__(self, level: int, triple: BentTriple, provenance: Tuple[Tuple[str, ...], ...],
                 verified_through: int, base_n: int):
        if triple.n != base_n + 4 * level:
            raise DimensionError(f"Level {level} triple has {triple.n} variables, expected {base_n + 4 * level}")
        if verified_through >= level:
            failing = triple.failing_conditions()
            if failing:
                raise PreconditionError(f"Level {level} marked verified but fails: {', '.join(failing)}")
        self.level = level
        self.triple = triple
        self.provenance = provenance
        self.verified_through = verified_through
        self.base_n = base_n

    @property
    def n(self) -> int:
        return self.triple.n

    def to_dict(self, include_tables: bool = False, fmt: str = 'hex') -> Dict[str, Any]:
        members = (self.triple.a, self.triple.b, self.triple.c)
        entry: Dict[str, Any] = {
            "level": self.level,
            "variables": self.n,
            "provenance": ["/".join(step) for step in self.provenance],
            "digests": [f.digest() for f in members],
            "verified_through": self.verified_through
        }
        if self.verified_through >= self.level:
            entry["bent"] = self.triple.flags()
        if include_tables:
            entry["tables"] = [f.render(fmt if self.n >= 3 else 'binary') for f in members]
        return entry


def seed_state(seed: BentTriple) -> IterationState:
    """Level 0 for a seed; the four bentness conditions are checked here."""
    failing = seed.failing_conditions()
    if failing:
        raise PreconditionError(f"Seed rejected: {', '.join(failing)}")
    return IterationState(0, seed, (), 0, seed.n)


def next_level(s: IterationState, verify: bool = True) -> IterationState:
    if s.n + 4 > MAX_VARIABLES:
        raise CapacityError(f"Next level needs {s.n + 4} variables, cap is {MAX_VARIABLES}")
    # an unverified derived level is trusted when verify is off
    if s.verified_through < s.level and (s.level == 0 or verify):
        failing = s.triple.failing_conditions()
        if failing:
            raise PreconditionError(f"Level {s.level} rejected: {', '.join(failing)}")
    g, g1, g2 = (hodzic(s.triple, v) for v in LEVEL_VARIANTS)
    triple = BentTriple(g, g1, g2)
    level = s.level + 1
    logger.info("Level %d built on %d variables", level, triple.n)
    verified_through = s.verified_through
    if verify:
        failing = triple.failing_conditions()
        if failing:
            raise IntegrityError(f"Level {level} output failed: {', '.join(failing)}")
        verified_through = level
        logger.info("Level %d verified: %s all bent", level, ", ".join(QUARTER_FLAG_NAMES))
    provenance = s.provenance + (tuple(v.value for v in LEVEL_VARIANTS),)
    return IterationState(level, triple, provenance, verified_through, s.base_n)


def run_iteration(seed: BentTriple, k: int, verify: bool = True) -> List[IterationState]:
    """States for levels 1..k, built by applying the three Hodzic variants to the previous triple."""
    if k < 1:
        raise DimensionError(f"k must be positive, got {k}")
    if seed.n + 4 * k > MAX_VARIABLES:
        raise CapacityError(f"{k} levels from {seed.n} variables reach {seed.n + 4 * k}, cap is {MAX_VARIABLES}")
    state = seed_state(seed)
    states = []
    for _ in range(k):
        state = next_level(state, verify)
        states.append(state)
    return states
