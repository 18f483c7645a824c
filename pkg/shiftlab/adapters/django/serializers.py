"""Serializers for verification runs and engine endpoints."""
from rest_framework import serializers

from shiftlab.adapters.django.models import VerificationRun
from shiftlab.constants import RuleName


class VerificationRunSerializer(serializers.ModelSerializer):
    """Full run detail, report included."""

    duration = serializers.ReadOnlyField()
    is_completed = serializers.ReadOnlyField()
    is_running = serializers.ReadOnlyField()
    created_by_username = serializers.CharField(
        source="created_by.username", read_only=True
    )

    class Meta:
        model = VerificationRun
        fields = [
            "id",
            "run_id",
            "example_id",
            "status",
            "created_at",
            "started_at",
            "finished_at",
            "result",
            "error",
            "traceback",
            "created_by",
            "created_by_username",
            "metadata",
            "duration",
            "is_completed",
            "is_running",
        ]
        read_only_fields = fields


class VerificationRunListSerializer(serializers.ModelSerializer):
    duration = serializers.ReadOnlyField()
    is_completed = serializers.ReadOnlyField()
    is_running = serializers.ReadOnlyField()

    class Meta:
        model = VerificationRun
        fields = [
            "id",
            "run_id",
            "example_id",
            "status",
            "created_at",
            "started_at",
            "finished_at",
            "duration",
            "is_completed",
            "is_running",
        ]
        read_only_fields = fields


class RunStatsSerializer(serializers.Serializer):
    total = serializers.IntegerField()
    pending = serializers.IntegerField()
    started = serializers.IntegerField()
    passed = serializers.IntegerField()
    failed = serializers.IntegerField()
    error = serializers.IntegerField()
    by_example = serializers.DictField(
        child=serializers.DictField(child=serializers.IntegerField())
    )


class DispatchRunSerializer(serializers.Serializer):
    example_id = serializers.CharField(max_length=100)
    seed = serializers.IntegerField(required=False, allow_null=True)


class ExampleSerializer(serializers.Serializer):
    example_id = serializers.CharField()
    title = serializers.CharField()


class SequenceEvalSerializer(serializers.Serializer):
    seq = serializers.CharField(
        help_text="Sequence text, e.g. left=const:0;center@0=[1,2];right=const:0"
    )
    at = serializers.IntegerField()


class MorphismApplySerializer(serializers.Serializer):
    """Without a window the full image is returned when tails permit."""

    rule = serializers.ChoiceField(choices=RuleName.get_builtin_names())
    seq = serializers.CharField()
    window_lo = serializers.IntegerField(required=False)
    window_hi = serializers.IntegerField(required=False)

    def validate(self, attrs):
        has_lo, has_hi = "window_lo" in attrs, "window_hi" in attrs
        if has_lo != has_hi:
            raise serializers.ValidationError(
                "window_lo and window_hi must be given together"
            )
        if has_lo and attrs["window_lo"] > attrs["window_hi"]:
            raise serializers.ValidationError("window_lo > window_hi")
        return attrs


class ArreInvertSerializer(serializers.Serializer):
    seq = serializers.CharField()
    nmax = serializers.IntegerField(required=False, min_value=1)
