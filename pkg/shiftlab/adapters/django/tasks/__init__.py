"""
Celery tasks for verification runs.
Import tasks here so Celery discovers them; re-export for callers.
"""
from shiftlab.adapters.django.tasks.runs import (
    dispatch_example_run,
    run_example_task,
)

__all__ = [
    "dispatch_example_run",
    "run_example_task",
]
