"""Django app config for shiftlab verification runs."""
from django.apps import AppConfig


class ShiftlabRunsDjangoConfig(AppConfig):
    """App config for the shiftlab Django adapter."""

    default_auto_field = "django.db.models.BigAutoField"
    name = "shiftlab.adapters.django"
    label = "shiftlab_runs"
    verbose_name = "Shiftlab Verification Runs"
