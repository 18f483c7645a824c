"""
URL configuration for the shiftlab API.

Include under a prefix, e.g.:
    path('api/v1/shiftlab/', include(
        'shiftlab.adapters.django.urls')),
"""
from django.urls import include, path
from rest_framework.routers import DefaultRouter

from shiftlab.adapters.django.views import (
    ArreInvertAPIView,
    ExampleListAPIView,
    MorphismApplyAPIView,
    SequenceEvalAPIView,
    VerificationRunViewSet,
)

router = DefaultRouter()
router.register(
    r"runs",
    VerificationRunViewSet,
    basename="verification-run",
)

urlpatterns = [
    path("examples/", ExampleListAPIView.as_view(), name="example-list"),
    path(
        "sequences/eval/",
        SequenceEvalAPIView.as_view(),
        name="sequence-eval",
    ),
    path(
        "morphisms/apply/",
        MorphismApplyAPIView.as_view(),
        name="morphism-apply",
    ),
    path("arre/invert/", ArreInvertAPIView.as_view(), name="arre-invert"),
    path("", include(router.urls)),
]
