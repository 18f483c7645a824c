"""Admin for verification runs."""
from django.contrib import admin

from shiftlab.adapters.django.models import VerificationRun


@admin.register(VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    list_display = [
        "run_id",
        "example_id",
        "status",
        "created_by",
        "created_at",
        "started_at",
        "finished_at",
    ]
    list_filter = ["example_id", "status", "created_at"]
    search_fields = ["run_id", "example_id"]
    readonly_fields = ["run_id", "created_at", "started_at", "finished_at"]
    date_hierarchy = "created_at"
    ordering = ["-created_at"]
