"""
Verification run records: one row per execution of a registered example.
"""
from django.conf import settings
from django.db import models
from django.utils import timezone

from shiftlab.constants import RunStatus


class VerificationRun(models.Model):
    """
    Tracks one run of an example case, its report and its outcome.
    """

    STATUS_CHOICES = [
        (RunStatus.PENDING, "Pending"),
        (RunStatus.STARTED, "Started"),
        (RunStatus.PASSED, "Passed"),
        (RunStatus.FAILED, "Failed"),
        (RunStatus.ERROR, "Error"),
    ]

    run_id = models.CharField(
        max_length=255,
        unique=True,
        db_index=True,
        help_text="Run ID (the Celery task ID when dispatched)",
    )
    example_id = models.CharField(
        max_length=100,
        db_index=True,
        help_text="Registered example id (e.g. arre-ambiguity)",
    )
    status = models.CharField(
        max_length=20,
        choices=STATUS_CHOICES,
        default=RunStatus.PENDING,
        db_index=True,
        help_text="Current run status",
    )
    created_at = models.DateTimeField(
        auto_now_add=True,
        db_index=True,
        help_text="When the run was registered",
    )
    started_at = models.DateTimeField(
        null=True,
        blank=True,
        help_text="When the run started",
    )
    finished_at = models.DateTimeField(
        null=True,
        blank=True,
        help_text="When the run finished",
    )
    result = models.JSONField(
        null=True,
        blank=True,
        help_text="Example report: entries and summary",
    )
    error = models.TextField(
        null=True,
        blank=True,
        help_text="Error message if the run raised",
    )
    traceback = models.TextField(
        null=True,
        blank=True,
        help_text="Error traceback if the run raised",
    )
    created_by = models.ForeignKey(
        settings.AUTH_USER_MODEL,
        on_delete=models.SET_NULL,
        null=True,
        blank=True,
        related_name="verification_runs",
        help_text="User who requested this run",
    )
    metadata = models.JSONField(
        default=dict,
        blank=True,
        help_text="Run parameters, e.g. seed",
    )

    class Meta:
        db_table = "shiftlab_verification_run"
        verbose_name = "Verification Run"
        verbose_name_plural = "Verification Runs"
        indexes = [
            models.Index(
                fields=["example_id", "status"],
                name="shiftlab_ve_example_3b1f0a_idx",
            ),
            models.Index(
                fields=["status", "created_at"],
                name="shiftlab_ve_status_7c2e4d_idx",
            ),
            models.Index(
                fields=["created_by", "created_at"],
                name="shiftlab_ve_created_5a9d1b_idx",
            ),
        ]
        ordering = ["-created_at"]

    def __str__(self):
        return f"{self.example_id} ({self.run_id}) - {self.status}"

    @property
    def duration(self):
        if self.started_at and self.finished_at:
            return (self.finished_at - self.started_at).total_seconds()

        if self.started_at:
            return (timezone.now() - self.started_at).total_seconds()

        return None

    @property
    def is_completed(self):
        return self.status in RunStatus.get_completed_statuses()

    @property
    def is_running(self):
        return self.status in RunStatus.get_running_statuses()
