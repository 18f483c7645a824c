"""
Thin engine endpoints. Requests and responses use the same sequence text
format as the command line.
"""
from drf_spectacular.utils import extend_schema
from rest_framework import status
from rest_framework.permissions import IsAuthenticated
from rest_framework.request import Request
from rest_framework.response import Response
from rest_framework.views import APIView

from shiftlab.adapters.django.serializers import (
    ArreInvertSerializer,
    MorphismApplySerializer,
    SequenceEvalSerializer,
)
from shiftlab.arre_invert import Inconclusive, NotInImage, invert
from shiftlab.biseq import format_biseq, parse_biseq, symbol_at
from shiftlab.exceptions import ShiftlabError
from shiftlab.morphism import eval_full, eval_window, morphism_by_name


def _bad_request(exc: Exception) -> Response:
    return Response({"error": str(exc)}, status=status.HTTP_400_BAD_REQUEST)


class SequenceEvalAPIView(APIView):
    permission_classes = [IsAuthenticated]

    @extend_schema(
        tags=["shiftlab-engine"],
        summary="Evaluate a sequence at one position",
        request=SequenceEvalSerializer,
    )
    def post(self, request: Request) -> Response:
        ser = SequenceEvalSerializer(data=request.data)
        ser.is_valid(raise_exception=True)
        try:
            x = parse_biseq(ser.validated_data["seq"])
            value = symbol_at(x, ser.validated_data["at"])
        except (ShiftlabError, ValueError) as exc:
            return _bad_request(exc)
        return Response({"position": ser.validated_data["at"], "symbol": value})


class MorphismApplyAPIView(APIView):
    permission_classes = [IsAuthenticated]

    @extend_schema(
        tags=["shiftlab-engine"],
        summary="Apply a built-in morphism",
        description=(
            "Window image when window_lo/window_hi are given, otherwise the "
            "full image (422 when the output tails cannot be derived)."
        ),
        request=MorphismApplySerializer,
    )
    def post(self, request: Request) -> Response:
        ser = MorphismApplySerializer(data=request.data)
        ser.is_valid(raise_exception=True)
        data = ser.validated_data
        try:
            Psi = morphism_by_name(data["rule"])
            x = parse_biseq(data["seq"])
            if "window_lo" in data:
                a, b = data["window_lo"], data["window_hi"]
                word = eval_window(Psi, x, a, b)
                return Response({"window": [a, b], "word": list(word)})
            image = eval_full(Psi, x)
        except (ShiftlabError, ValueError) as exc:
            return _bad_request(exc)
        if not image:
            return Response(
                {"error": f"full image unavailable: {image.reason}"},
                status=status.HTTP_422_UNPROCESSABLE_ENTITY,
            )
        return Response({"seq": format_biseq(image)})


class ArreInvertAPIView(APIView):
    permission_classes = [IsAuthenticated]

    @extend_schema(
        tags=["shiftlab-engine"],
        summary="Invert the doubling chain",
        request=ArreInvertSerializer,
    )
    def post(self, request: Request) -> Response:
        ser = ArreInvertSerializer(data=request.data)
        ser.is_valid(raise_exception=True)
        try:
            result = invert(
                parse_biseq(ser.validated_data["seq"]),
                ser.validated_data.get("nmax"),
            )
        except (ShiftlabError, ValueError) as exc:
            return _bad_request(exc)
        if isinstance(result, NotInImage):
            return Response({"result": "NOT-IN-IMAGE", "reason": result.reason})
        if isinstance(result, Inconclusive):
            candidate = result.candidate
            return Response({
                "result": "INCONCLUSIVE",
                "reason": result.reason,
                "candidate": format_biseq(candidate) if candidate else None,
            })
        return Response({"result": "preimage", "seq": format_biseq(result)})
