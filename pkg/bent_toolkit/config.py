import os

# resource caps
MAX_VARIABLES = 24
NAIVE_MAX_VARIABLES = 16
NAIVE_CACHE_MAX_VARIABLES = 12
COMPOSITION_MAX_INPUTS = 8
COMPOSITION_MAX_VARIABLES = 16
INLINE_MAX_VARIABLES = 12

# verification
COUNTEREXAMPLE_CAP = 16
ROTHAUS_EXHAUSTIVE_MAX_N = 2
MAJORITY_EXHAUSTIVE_MAX_N = 3
PROGRESS_INTERVAL_SECONDS = 1.0

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def default_jobs() -> int:
    """Worker count for partitioned sweeps: BENT_TOOLKIT_JOBS if set, else the CPU count."""
    value = os.environ.get('BENT_TOOLKIT_JOBS')
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def log_level() -> str:
    return os.environ.get('BENT_TOOLKIT_LOG_LEVEL', 'INFO').upper()
