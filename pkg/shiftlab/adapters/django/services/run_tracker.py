"""
Run recording: register verification runs, update their status, execute
the example behind a run and persist its report.

Public API: import from shiftlab.adapters.django.
The Celery task that drives execute_run lives in adapters.django.tasks.
"""
from datetime import date, datetime
import logging
import traceback as tb
from typing import Any, Dict, Optional

from django.utils import timezone

from shiftlab.adapters.django.models import VerificationRun
from shiftlab.constants import RunStatus
from shiftlab.examples import run_example

logger = logging.getLogger(__name__)


def _make_json_serializable(obj: Any) -> Any:
    """
    Recursively convert values so that obj fits a JSONField: datetimes and
    dates become ISO strings, tuples become lists.
    """
    if obj is None:
        return None
    if isinstance(obj, (datetime, date)):
        return obj.isoformat()
    if isinstance(obj, dict):
        return {str(k): _make_json_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_make_json_serializable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)):
        return obj
    return str(obj)


def register_verification_run(
    run_id: str,
    example_id: str,
    created_by=None,
    metadata: Optional[dict] = None,
    initial_status: Optional[str] = None,
) -> VerificationRun:
    """
    Register a run before it is dispatched. Keyed by run_id
    (get_or_create), so repeated registration is safe.
    """
    return RunTracker.register_run(
        run_id=run_id,
        example_id=example_id,
        created_by=created_by,
        metadata=metadata,
        initial_status=initial_status,
    )


class RunTracker:
    """
    Service for recording verification runs. The task calls
    update_run_status through execute_run; views only read.
    """

    @staticmethod
    def register_run(
        run_id: str,
        example_id: str,
        created_by=None,
        metadata: Optional[dict] = None,
        initial_status: Optional[str] = None,
    ) -> VerificationRun:
        status = initial_status if initial_status else RunStatus.PENDING
        defaults = {
            "example_id": example_id,
            "status": status,
            "created_by": created_by,
            "metadata": _make_json_serializable(metadata or {}),
        }
        if status == RunStatus.STARTED:
            defaults["started_at"] = timezone.now()
        run, created = VerificationRun.objects.get_or_create(
            run_id=run_id,
            defaults=defaults,
        )
        if created:
            logger.info(
                f"Registered verification run run_id={run_id} "
                f"example_id={example_id}"
            )
        else:
            logger.debug(f"Run already registered run_id={run_id}")
        return run

    @staticmethod
    def update_run_status(
        run_id: str,
        status: str,
        result: Optional[Any] = None,
        error: Optional[str] = None,
        traceback: Optional[str] = None,
        metadata: Optional[Dict] = None,
    ) -> Optional[VerificationRun]:
        """
        started_at is set on the first STARTED, finished_at on the first
        completed status. metadata is merged into the existing dict.
        """
        try:
            run = VerificationRun.objects.get(run_id=run_id)
        except VerificationRun.DoesNotExist:
            logger.warning(f"Verification run not found run_id={run_id}")
            return None
        old_status = run.status
        run.status = status
        if status == RunStatus.STARTED and not run.started_at:
            run.started_at = timezone.now()
        elif status in RunStatus.get_completed_statuses():
            if not run.finished_at:
                run.finished_at = timezone.now()
        if result is not None:
            run.result = _make_json_serializable(result)
        if error is not None:
            run.error = error
        if traceback is not None:
            run.traceback = traceback
        if metadata is not None:
            if run.metadata is None:
                run.metadata = {}
            run.metadata.update(_make_json_serializable(metadata))
        run.save()
        logger.info(
            f"Updated run status run_id={run_id} "
            f"old_status={old_status} new_status={status}"
        )
        return run

    @staticmethod
    def execute_run(run_id: str) -> Optional[VerificationRun]:
        """
        Run the example behind run_id and store its report. The run ends
        PASSED, FAILED or ERROR following the report; an exception escaping
        the example is recorded as ERROR and re-raised.
        """
        run = RunTracker.update_run_status(run_id, RunStatus.STARTED)
        if run is None:
            return None
        seed = (run.metadata or {}).get("seed")
        try:
            report = run_example(run.example_id, seed)
        except Exception as exc:
            RunTracker.update_run_status(
                run_id,
                RunStatus.ERROR,
                error=str(exc),
                traceback=tb.format_exc(),
            )
            logger.error(
                f"Verification run raised run_id={run_id} "
                f"example_id={run.example_id}: {exc}"
            )
            raise
        return RunTracker.update_run_status(
            run_id,
            report.status,
            result=report.to_dict(),
            metadata={"seed": report.seed},
        )

    @staticmethod
    def get_run(run_id: str) -> Optional[VerificationRun]:
        try:
            return VerificationRun.objects.get(run_id=run_id)
        except VerificationRun.DoesNotExist:
            return None
