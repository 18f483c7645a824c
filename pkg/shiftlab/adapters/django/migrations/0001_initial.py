# Initial migration for the shiftlab Django adapter.

from django.conf import settings
from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
        migrations.swappable_dependency(settings.AUTH_USER_MODEL),
    ]

    operations = [
        migrations.CreateModel(
            name="VerificationRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "run_id",
                    models.CharField(
                        db_index=True,
                        help_text="Run ID (the Celery task ID when dispatched)",
                        max_length=255,
                        unique=True,
                    ),
                ),
                (
                    "example_id",
                    models.CharField(
                        db_index=True,
                        help_text="Registered example id (e.g. arre-ambiguity)",
                        max_length=100,
                    ),
                ),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("PENDING", "Pending"),
                            ("STARTED", "Started"),
                            ("PASSED", "Passed"),
                            ("FAILED", "Failed"),
                            ("ERROR", "Error"),
                        ],
                        db_index=True,
                        default="PENDING",
                        help_text="Current run status",
                        max_length=20,
                    ),
                ),
                (
                    "created_at",
                    models.DateTimeField(
                        auto_now_add=True,
                        db_index=True,
                        help_text="When the run was registered",
                    ),
                ),
                (
                    "started_at",
                    models.DateTimeField(
                        blank=True,
                        help_text="When the run started",
                        null=True,
                    ),
                ),
                (
                    "finished_at",
                    models.DateTimeField(
                        blank=True,
                        help_text="When the run finished",
                        null=True,
                    ),
                ),
                (
                    "result",
                    models.JSONField(
                        blank=True,
                        help_text="Example report: entries and summary",
                        null=True,
                    ),
                ),
                (
                    "error",
                    models.TextField(
                        blank=True,
                        help_text="Error message if the run raised",
                        null=True,
                    ),
                ),
                (
                    "traceback",
                    models.TextField(
                        blank=True,
                        help_text="Error traceback if the run raised",
                        null=True,
                    ),
                ),
                (
                    "metadata",
                    models.JSONField(
                        blank=True,
                        default=dict,
                        help_text="Run parameters, e.g. seed",
                    ),
                ),
                (
                    "created_by",
                    models.ForeignKey(
                        blank=True,
                        help_text="User who requested this run",
                        null=True,
                        on_delete=django.db.models.deletion.SET_NULL,
                        related_name="verification_runs",
                        to=settings.AUTH_USER_MODEL,
                    ),
                ),
            ],
            options={
                "verbose_name": "Verification Run",
                "verbose_name_plural": "Verification Runs",
                "db_table": "shiftlab_verification_run",
                "ordering": ["-created_at"],
            },
        ),
        migrations.AddIndex(
            model_name="verificationrun",
            index=models.Index(
                fields=["example_id", "status"],
                name="shiftlab_ve_example_3b1f0a_idx",
            ),
        ),
        migrations.AddIndex(
            model_name="verificationrun",
            index=models.Index(
                fields=["status", "created_at"],
                name="shiftlab_ve_status_7c2e4d_idx",
            ),
        ),
        migrations.AddIndex(
            model_name="verificationrun",
            index=models.Index(
                fields=["created_by", "created_at"],
                name="shiftlab_ve_created_5a9d1b_idx",
            ),
        ),
    ]
