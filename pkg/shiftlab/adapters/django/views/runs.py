"""Views for verification runs and the example registry."""
from django.contrib.auth import get_user_model
from drf_spectacular.utils import extend_schema, extend_schema_view
from rest_framework import status, viewsets
from rest_framework.decorators import action
from rest_framework.pagination import PageNumberPagination
from rest_framework.permissions import IsAuthenticated
from rest_framework.response import Response
from rest_framework.views import APIView

from shiftlab.adapters.django.models import VerificationRun
from shiftlab.adapters.django.serializers import (
    DispatchRunSerializer,
    ExampleSerializer,
    RunStatsSerializer,
    VerificationRunListSerializer,
    VerificationRunSerializer,
)
from shiftlab.adapters.django.services import (
    get_run_stats,
    list_verification_runs,
)
from shiftlab.adapters.django.tasks import dispatch_example_run
from shiftlab.examples import list_examples
from shiftlab.exceptions import UnknownExample

User = get_user_model()


class VerificationRunPagination(PageNumberPagination):
    page_size = 10
    page_size_query_param = "page_size"
    max_page_size = 100


def _created_by_filter(request):
    created_by = request.query_params.get("created_by", None)
    if not created_by:
        return None
    try:
        return User.objects.get(id=created_by)
    except (User.DoesNotExist, ValueError):
        return None


@extend_schema_view(
    list=extend_schema(
        tags=["shiftlab-runs"],
        summary="List verification runs",
        description="List runs filtered by example_id, status, created_by.",
    ),
    retrieve=extend_schema(
        tags=["shiftlab-runs"],
        summary="Retrieve verification run",
        description="Get one run with its full report.",
    ),
)
class VerificationRunViewSet(viewsets.ReadOnlyModelViewSet):
    """
    Read-only API for verification runs plus stats and dispatch.
    """

    queryset = VerificationRun.objects.all()
    permission_classes = [IsAuthenticated]
    pagination_class = VerificationRunPagination

    def get_serializer_class(self):
        if self.action == "list":
            return VerificationRunListSerializer
        return VerificationRunSerializer

    def get_queryset(self):
        return list_verification_runs(
            example_id=self.request.query_params.get("example_id") or None,
            status=self.request.query_params.get("status") or None,
            created_by=_created_by_filter(self.request),
            search=self.request.query_params.get("search") or None,
        )

    @extend_schema(
        tags=["shiftlab-runs"],
        summary="Get run statistics",
        description="Counts by status, overall and per example.",
        responses={200: RunStatsSerializer},
    )
    @action(detail=False, methods=["get"])
    def stats(self, request):
        stats = get_run_stats(
            example_id=request.query_params.get("example_id") or None,
            created_by=_created_by_filter(request),
        )
        return Response(RunStatsSerializer(stats).data)

    @extend_schema(
        tags=["shiftlab-runs"],
        summary="Dispatch an example run",
        description=(
            "Register a run of a registered example and dispatch it to "
            "Celery (or run it inline when SHIFTLAB_RUN_INLINE is set)."
        ),
        request=DispatchRunSerializer,
        responses={201: VerificationRunSerializer},
    )
    @action(detail=False, methods=["post"], url_path="dispatch")
    def dispatch_run(self, request):
        ser = DispatchRunSerializer(data=request.data)
        ser.is_valid(raise_exception=True)
        try:
            run = dispatch_example_run(
                ser.validated_data["example_id"],
                created_by=request.user,
                seed=ser.validated_data.get("seed"),
            )
        except UnknownExample as exc:
            return Response(
                {"example_id": str(exc)},
                status=status.HTTP_400_BAD_REQUEST,
            )
        run.refresh_from_db()
        return Response(
            VerificationRunSerializer(run).data,
            status=status.HTTP_201_CREATED,
        )


class ExampleListAPIView(APIView):
    permission_classes = [IsAuthenticated]

    @extend_schema(
        tags=["shiftlab-runs"],
        summary="List registered examples",
        responses={200: ExampleSerializer(many=True)},
    )
    def get(self, request):
        data = [
            {"example_id": case.example_id, "title": case.title}
            for case in list_examples()
        ]
        return Response(ExampleSerializer(data, many=True).data)
