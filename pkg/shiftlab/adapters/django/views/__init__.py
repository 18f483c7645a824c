from shiftlab.adapters.django.views.compute import (
    ArreInvertAPIView,
    MorphismApplyAPIView,
    SequenceEvalAPIView,
)
from shiftlab.adapters.django.views.runs import (
    ExampleListAPIView,
    VerificationRunViewSet,
)

__all__ = [
    "VerificationRunViewSet",
    "ExampleListAPIView",
    "SequenceEvalAPIView",
    "MorphismApplyAPIView",
    "ArreInvertAPIView",
]
