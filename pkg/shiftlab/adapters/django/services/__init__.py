"""
Services: run lock, run recording, stats.
Import from here or from shiftlab.adapters.django.

- Lock: ExampleRunLock, run_lock_key
- Run recording: RunTracker, register_verification_run
- Stats: get_run_stats
- Query detail: list_verification_runs
"""
from shiftlab.adapters.django.services.run_lock import (
    ExampleRunLock,
    run_lock_key,
)
from shiftlab.adapters.django.services.run_stats import (
    get_run_stats,
    list_verification_runs,
)
from shiftlab.adapters.django.services.run_tracker import (
    RunTracker,
    register_verification_run,
)
from shiftlab.constants import RunStatus

__all__ = [
    "RunTracker",
    "register_verification_run",
    "get_run_stats",
    "list_verification_runs",
    "ExampleRunLock",
    "run_lock_key",
    "RunStatus",
]
