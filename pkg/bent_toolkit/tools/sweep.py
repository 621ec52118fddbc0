import json
import logging
import multiprocessing as mp
import time
from math import ceil
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from bent_toolkit.config import COUNTEREXAMPLE_CAP, PROGRESS_INTERVAL_SECONDS
from bent_toolkit.errors import DimensionError

logger = logging.getLogger(__name__)


class SweepMode:
    """Enumeration mode of a verification run: the whole domain, or a seeded sample."""

    def __init__(self, kind: str, count: int = 0, seed: Optional[int] = None):
        if kind not in ("exhaustive", "sampled"):
            raise DimensionError(f"Unknown sweep mode '{kind}'")
        if kind == "sampled" and (count < 1 or seed is None):
            raise DimensionError("Sampled mode needs a positive count and an explicit seed")
        self.kind = kind
        self.count = count
        self.seed = seed

    @classmethod
    def exhaustive(cls) -> 'SweepMode':
        return cls("exhaustive")

    @classmethod
    def sampled(cls, count: int, seed: int) -> 'SweepMode':
        return cls("sampled", count, seed)

    @property
    def is_exhaustive(self) -> bool:
        return self.kind == "exhaustive"

    def describe(self) -> str:
        if self.is_exhaustive:
            return "exhaustive"
        return f"sampled(count={self.count}, seed={self.seed})"


class VerificationReport:
    """Outcome of one verification claim. Success means no counterexamples."""

    def __init__(self, claim: str, n: int, mode: SweepMode):
        self.claim = claim
        self.n = n
        self.mode = mode
        self.cases_checked = 0
        self.satisfying_count = 0
        self.counterexamples: List[Dict[str, Any]] = []
        self.counterexample_total = 0
        self.elapsed_ms = 0.0
        self.details: Dict[str, Any] = {}

    @property
    def success(self) -> bool:
        return self.counterexample_total == 0

    def add_counterexample(self, inputs: Sequence[str], reason: str) -> None:
        self.counterexample_total += 1
        if len(self.counterexamples) < COUNTEREXAMPLE_CAP:
            self.counterexamples.append({"inputs": list(inputs), "reason": reason})

    def count(self, key: str, amount: int = 1) -> None:
        self.details[key] = self.details.get(key, 0) + amount

    def merge(self, other: 'VerificationReport') -> None:
        """Fold a partition's report into this one; counts add, counterexamples concatenate under the cap."""
        self.cases_checked += other.cases_checked
        self.satisfying_count += other.satisfying_count
        for entry in other.counterexamples:
            if len(self.counterexamples) < COUNTEREXAMPLE_CAP:
                self.counterexamples.append(entry)
        self.counterexample_total += other.counterexample_total
        for key, value in other.details.items():
            if isinstance(value, bool) or not isinstance(value, int):
                mine = self.details.setdefault(key, value)
                if mine != value:
                    self.add_counterexample([str(mine), str(value)], f"'{key}' differs between partitions")
            else:
                self.count(key, value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "claim": self.claim,
            "mode": self.mode.kind,
            "n": self.n,
            "seed": self.mode.seed,
            "samples": self.mode.count if not self.mode.is_exhaustive else None,
            "cases_checked": self.cases_checked,
            "satisfying_count": self.satisfying_count,
            "counterexamples": self.counterexamples,
            "counterexample_total": self.counterexample_total,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "success": self.success,
            "details": self.details
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def render_text(self) -> str:
        lines = [
            f"claim: {self.claim}",
            f"n: {self.n}",
            f"mode: {self.mode.describe()}",
            f"cases checked: {self.cases_checked}",
            f"satisfying: {self.satisfying_count}",
        ]
        for key in sorted(self.details):
            lines.append(f"{key.replace('_', ' ')}: {self.details[key]}")
        lines.append(f"elapsed: {self.elapsed_ms:.1f} ms")
        if self.success:
            lines.append("verdict: holds")
        else:
            lines.append(f"verdict: FAILED ({self.counterexample_total} counterexamples)")
            for entry in self.counterexamples:
                lines.append(f"  - {', '.join(entry['inputs'])}: {entry['reason']}")
        return "\n".join(lines)


def partition_ranges(total: int, parts: int) -> List[Tuple[int, int]]:
    """Split [0, total) into at most `parts` contiguous, disjoint ranges."""
    parts = max(1, min(parts, total))
    size = ceil(total / parts)
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def _call(task: Tuple[Callable[..., Any], Tuple[Any, ...]]) -> Any:
    worker, args = task
    return worker(*args)


def run_partitions(worker: Callable[..., Any], tasks: List[Tuple[Any, ...]], jobs: int, label: str) -> List[Any]:
    """Run worker(*task) for every task, in a process pool when jobs > 1.

    Results come back in task order whatever the pool does, so merged reports are
    deterministic. Progress goes to the log at most once per PROGRESS_INTERVAL_SECONDS.
    """
    results: List[Any] = []
    pool = None
    if jobs > 1 and len(tasks) > 1:
        pool = mp.Pool(min(jobs, len(tasks)))
        iterator = pool.imap(_call, [(worker, task) for task in tasks])
    else:
        iterator = (worker(*task) for task in tasks)
    last = time.monotonic()
    cases = 0
    try:
        for result in iterator:
            results.append(result)
            cases += getattr(result, "cases_checked", 0)
            now = time.monotonic()
            if now - last >= PROGRESS_INTERVAL_SECONDS:
                logger.info("%s: partition %d/%d, %d cases so far", label, len(results), len(tasks), cases)
                last = now
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    logger.info("%s: %d partitions done, %d cases", label, len(results), cases)
    return results
