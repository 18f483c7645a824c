"""
Adapter settings for verification runs. Engine tunables (search bounds,
seeds) live in shiftlab.conf.
"""
from django.conf import settings

DEFAULT_RUN_INLINE = False
DEFAULT_RUN_LOCK_TIMEOUT = 600


def get_run_inline():
    """Run examples inside the request instead of dispatching to Celery."""
    return getattr(settings, "SHIFTLAB_RUN_INLINE", DEFAULT_RUN_INLINE)


def get_run_lock_timeout():
    """Seconds a per-example run lock is held at most (default 600)."""
    return getattr(
        settings, "SHIFTLAB_RUN_LOCK_TIMEOUT", DEFAULT_RUN_LOCK_TIMEOUT
    )

