"""
Verification runs: aggregate counts and list queries.
"""
from typing import Any, Dict, Optional

from shiftlab.adapters.django.models import VerificationRun
from shiftlab.constants import RunStatus


def _counts_for_queryset(qs) -> Dict[str, int]:
    """Keys: total plus one lower-case key per run status."""
    counts = {"total": qs.count()}
    for status in RunStatus.get_all_statuses():
        counts[status.lower()] = qs.filter(status=status).count()
    return counts


def get_run_stats(
    example_id: Optional[str] = None,
    created_by=None,
) -> Dict[str, Any]:
    """Counts by status, overall and per example id."""
    queryset = VerificationRun.objects.all()
    if example_id:
        queryset = queryset.filter(example_id=example_id)
    if created_by is not None:
        queryset = queryset.filter(created_by=created_by)
    by_example = {}
    for eid in queryset.values_list("example_id", flat=True).distinct():
        by_example[eid] = _counts_for_queryset(
            queryset.filter(example_id=eid)
        )
    return {**_counts_for_queryset(queryset), "by_example": by_example}


def list_verification_runs(
    *,
    example_id: Optional[str] = None,
    status: Optional[str] = None,
    created_by=None,
    search: Optional[str] = None,
    order_by: str = "-created_at",
):
    """
    Optional filters: example_id, status, created_by, search (example_id
    icontains). Returns a QuerySet for the caller to paginate.
    """
    queryset = VerificationRun.objects.select_related("created_by").all()
    if example_id:
        queryset = queryset.filter(example_id=example_id)
    if status:
        queryset = queryset.filter(status=status)
    if created_by is not None:
        queryset = queryset.filter(created_by=created_by)
    if search and search.strip():
        queryset = queryset.filter(example_id__icontains=search.strip())
    return queryset.order_by(order_by)
