"""
Celery task: execute one registered verification run.
Registered as shiftlab.adapters.django.tasks.run_example_task.
"""
import logging
from typing import Optional
from uuid import uuid4

from celery import shared_task

from shiftlab.adapters.django.conf import get_run_inline
from shiftlab.adapters.django.models import VerificationRun
from shiftlab.adapters.django.services.run_lock import ExampleRunLock
from shiftlab.adapters.django.services.run_tracker import (
    RunTracker,
    register_verification_run,
)
from shiftlab.constants import RunStatus
from shiftlab.examples import get_example

logger = logging.getLogger(__name__)

SKIP_REASON = "run_already_in_progress"


def _record_skipped_run(run: VerificationRun, seed, holder: Optional[str]) -> dict:
    RunTracker.update_run_status(
        run.run_id,
        RunStatus.ERROR,
        error=(
            f"Run of {run.example_id} seed={seed} is already in progress "
            f"(held by {holder})"
        ),
        metadata={"skip_reason": SKIP_REASON, "held_by": holder},
    )
    return {
        "success": False,
        "run_id": run.run_id,
        "reason": SKIP_REASON,
        "held_by": holder,
    }


@shared_task(
    name="shiftlab.adapters.django.tasks.run_example_task",
    bind=True,
)
def run_example_task(self, run_id=None):
    """
    Execute the run registered under run_id. Runs sharing an example and a
    seed never overlap: one that finds the lock taken ends as ERROR with a
    skip_reason and the holder's run_id.
    """
    run = RunTracker.get_run(run_id)
    if run is None:
        logger.warning(f"Verification run not found run_id={run_id}")
        return {"success": False, "run_id": run_id, "reason": "run_not_found"}
    seed = (run.metadata or {}).get("seed")
    with ExampleRunLock(run.example_id, seed, run_id) as lock:
        if not lock.acquired:
            return _record_skipped_run(run, seed, lock.holder())
        run = RunTracker.execute_run(run_id)
    if run is None:
        return {"success": False, "run_id": run_id, "reason": "run_not_found"}
    return {
        "success": True,
        "run_id": run_id,
        "example_id": run.example_id,
        "status": run.status,
    }


def dispatch_example_run(
    example_id: str,
    created_by=None,
    seed: Optional[int] = None,
) -> VerificationRun:
    """
    Register a run for example_id, then hand it to Celery, or execute it in
    this process when SHIFTLAB_RUN_INLINE is set. Unknown ids raise
    UnknownExample before anything is recorded.
    """
    get_example(example_id)
    run_id = uuid4().hex
    metadata = {"seed": seed} if seed is not None else {}
    register_verification_run(
        run_id=run_id,
        example_id=example_id,
        created_by=created_by,
        metadata=metadata,
    )
    kwargs = {"run_id": run_id}
    if get_run_inline():
        run_example_task.apply(kwargs=kwargs, task_id=run_id)
    else:
        run_example_task.apply_async(kwargs=kwargs, task_id=run_id)
    logger.info(
        f"Dispatched verification run run_id={run_id} "
        f"example_id={example_id} inline={get_run_inline()}"
    )
    return VerificationRun.objects.get(run_id=run_id)
