"""
Unit tests for shiftlab.adapters.django services and tasks
(run lock, run tracker, stats, dispatch).
"""
import pytest
from django.core.cache import cache

from shiftlab.adapters.django.models import VerificationRun
from shiftlab.adapters.django.services import (
    ExampleRunLock,
    RunTracker,
    get_run_stats,
    list_verification_runs,
    register_verification_run,
    run_lock_key,
)
from shiftlab.adapters.django.services import run_tracker as run_tracker_svc
from shiftlab.adapters.django.tasks import dispatch_example_run, run_example_task
from shiftlab.adapters.django.tasks import runs as runs_tasks
from shiftlab.constants import RunStatus
from shiftlab.exceptions import UnknownExample

pytestmark = [pytest.mark.unit]


class TestRunLock:
    def test_owner_acquires_and_releases(self):
        lock = ExampleRunLock("lock-owner", 3, "run-a", timeout=60)
        assert lock.acquire() is True
        assert lock.holder() == "run-a"
        other = ExampleRunLock("lock-owner", 3, "run-b", timeout=60)
        assert other.acquire() is False
        assert other.holder() == "run-a"
        assert other.release() is False
        assert lock.release() is True
        assert lock.holder() is None
        assert other.acquire() is True
        assert other.release() is True

    def test_seeds_lock_independently(self):
        first = ExampleRunLock("lock-seeds", 3, "run-a", timeout=60)
        second = ExampleRunLock("lock-seeds", 4, "run-b", timeout=60)
        try:
            assert first.acquire() is True
            assert second.acquire() is True
        finally:
            first.release()
            second.release()

    def test_missing_seed_uses_configured_default(self, monkeypatch):
        monkeypatch.setenv("SHIFTLAB_SEED_DEFAULT", "5")
        assert run_lock_key("arre") == run_lock_key("arre", 5) == "shiftlab:run:arre:5"

    def test_taken_over_lock_is_left_alone(self):
        lock = ExampleRunLock("lock-takeover", 1, "run-a", timeout=60)
        lock.acquire()
        cache.set(lock.key, "run-b", timeout=60)
        try:
            assert lock.release() is False
            assert lock.holder() == "run-b"
        finally:
            cache.delete(lock.key)

    def test_context_manager_releases_on_error(self):
        with pytest.raises(RuntimeError):
            with ExampleRunLock("lock-context", 0, "run-a", timeout=60) as lock:
                assert lock.acquired
                raise RuntimeError("boom")
        assert lock.holder() is None


class TestRunTracker:
    def test_register_is_idempotent(self, user, db):
        run = register_verification_run(
            run_id="run-001",
            example_id="arre",
            created_by=user,
            metadata={"seed": 3},
        )
        assert run.status == RunStatus.PENDING
        assert run.created_by_id == user.id
        assert run.metadata == {"seed": 3}
        again = register_verification_run(run_id="run-001", example_id="exam2")
        assert again.pk == run.pk
        assert again.example_id == "arre"

    def test_register_started(self, db):
        run = register_verification_run(
            run_id="run-started",
            example_id="arre",
            initial_status=RunStatus.STARTED,
        )
        assert run.started_at is not None
        assert run.is_running

    def test_update_status_merges_metadata(self, db):
        register_verification_run(
            run_id="run-update", example_id="arre", metadata={"seed": 1}
        )
        run = RunTracker.update_run_status(
            "run-update", RunStatus.STARTED, metadata={"step": "begin"}
        )
        assert run.started_at is not None
        assert run.metadata == {"seed": 1, "step": "begin"}
        run = RunTracker.update_run_status(
            "run-update", RunStatus.FAILED, result={"entries": ()}
        )
        assert run.finished_at is not None
        assert run.result == {"entries": []}
        assert run.is_completed
        assert run.duration is not None

    def test_update_unknown_run(self, db):
        assert RunTracker.update_run_status("missing", RunStatus.STARTED) is None
        assert RunTracker.get_run("missing") is None

    def test_execute_run_stores_report(self, db):
        register_verification_run(
            run_id="run-exec", example_id="arre-ambiguity", metadata={"seed": 8}
        )
        run = RunTracker.execute_run("run-exec")
        assert run.status == RunStatus.PASSED
        assert run.result["example_id"] == "arre-ambiguity"
        assert run.result["seed"] == 8
        assert run.result["summary"]["total"] == 4
        assert run.metadata == {"seed": 8}

    def test_execute_run_records_exception(self, db, monkeypatch):
        def explode(example_id, seed=None):
            raise RuntimeError("boom")

        monkeypatch.setattr(run_tracker_svc, "run_example", explode)
        register_verification_run(run_id="run-boom", example_id="arre")
        with pytest.raises(RuntimeError):
            RunTracker.execute_run("run-boom")
        run = RunTracker.get_run("run-boom")
        assert run.status == RunStatus.ERROR
        assert run.error == "boom"
        assert "RuntimeError" in run.traceback
        assert run.finished_at is not None

    def test_execute_unknown_run(self, db):
        assert RunTracker.execute_run("missing") is None


class TestRunStats:
    @pytest.fixture
    def runs(self, user, db):
        register_verification_run("s1", "arre", created_by=user)
        register_verification_run("s2", "arre", initial_status=RunStatus.STARTED)
        register_verification_run("s3", "exam2", created_by=user)
        RunTracker.update_run_status("s3", RunStatus.PASSED)

    def test_counts(self, runs):
        stats = get_run_stats()
        assert stats["total"] == 3
        assert stats["pending"] == 1
        assert stats["started"] == 1
        assert stats["passed"] == 1
        assert stats["failed"] == 0
        assert stats["error"] == 0
        assert stats["by_example"]["arre"]["total"] == 2
        assert stats["by_example"]["exam2"]["passed"] == 1

    def test_filters(self, runs, user):
        assert get_run_stats(example_id="exam2")["total"] == 1
        assert get_run_stats(created_by=user)["total"] == 2

    def test_list(self, runs, user):
        assert {r.run_id for r in list_verification_runs(example_id="arre")} == {
            "s1", "s2",
        }
        assert [r.run_id for r in list_verification_runs(
            status=RunStatus.PASSED
        )] == ["s3"]
        assert {r.run_id for r in list_verification_runs(created_by=user)} == {
            "s1", "s3",
        }
        assert [r.run_id for r in list_verification_runs(search="XAM")] == ["s3"]


class TestDispatch:
    def test_inline_run_completes(self, user, db):
        run = dispatch_example_run("arre-ambiguity", created_by=user, seed=2)
        assert run.status == RunStatus.PASSED
        assert run.created_by_id == user.id
        assert run.result["seed"] == 2
        assert run.started_at is not None
        assert run.finished_at is not None
        assert cache.get(run_lock_key("arre-ambiguity", 2)) is None

    def test_seed_defaults_from_configuration(self, db, monkeypatch):
        monkeypatch.setenv("SHIFTLAB_SEED_DEFAULT", "11")
        run = dispatch_example_run("arre-ambiguity")
        assert run.metadata == {"seed": 11}

    def test_unknown_example_records_nothing(self, db):
        with pytest.raises(UnknownExample):
            dispatch_example_run("nope")
        assert VerificationRun.objects.count() == 0

    def test_async_dispatch_leaves_run_pending(self, db, settings, monkeypatch):
        settings.SHIFTLAB_RUN_INLINE = False
        sent = []
        monkeypatch.setattr(
            runs_tasks.run_example_task,
            "apply_async",
            lambda kwargs=None, task_id=None: sent.append((kwargs, task_id)),
        )
        run = dispatch_example_run("arre")
        assert run.status == RunStatus.PENDING
        assert sent == [({"run_id": run.run_id}, run.run_id)]

    def test_run_skipped_while_same_seed_runs(self, db):
        with ExampleRunLock("arre-ambiguity", 4, "other-run", timeout=60):
            run = dispatch_example_run("arre-ambiguity", seed=4)
        assert run.status == RunStatus.ERROR
        assert run.metadata["skip_reason"] == "run_already_in_progress"
        assert run.metadata["held_by"] == "other-run"
        assert "already in progress" in run.error
        assert run.result is None

    def test_other_seed_runs_while_locked(self, db):
        with ExampleRunLock("arre-ambiguity", 4, "other-run", timeout=60):
            run = dispatch_example_run("arre-ambiguity", seed=5)
        assert run.status == RunStatus.PASSED

    def test_task_with_unknown_run(self, db):
        result = run_example_task.apply(kwargs={"run_id": "missing"}).get()
        assert result == {
            "success": False,
            "run_id": "missing",
            "reason": "run_not_found",
        }
