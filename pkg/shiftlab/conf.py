"""
Global search bounds and sampling defaults for shiftlab.

Every getter reads the Django setting of the same name when Django settings
are configured (the adapter case), then the process environment (the CLI
case), then the module default.
"""
import logging
import os

from django.conf import settings

logger = logging.getLogger(__name__)

DEFAULT_NMAX = 32
DEFAULT_KMAX = 64
DEFAULT_SYMBOL_BOUND = 20
DEFAULT_SAMPLE_SIZE = 40
DEFAULT_SEED = 0


def _int_setting(name: str, default: int, minimum: int = 0) -> int:
    if settings.configured and hasattr(settings, name):
        raw, source = getattr(settings, name), "setting"
    else:
        raw, source = os.environ.get(name), "environment"
    if raw is None or (isinstance(raw, str) and not raw.strip()):
        return default
    if isinstance(raw, int) and not isinstance(raw, bool):
        value = raw
    elif isinstance(raw, str):
        try:
            value = int(raw.strip())
        except ValueError:
            value = None
    else:
        value = None
    if value is None:
        logger.warning(
            f"Ignoring malformed {name}={raw!r} from {source}, using {default}"
        )
        return default
    if value < minimum:
        logger.warning(
            f"Ignoring {name}={value} from {source} below minimum={minimum}, "
            f"using {default}"
        )
        return default
    return value


def get_nmax_default() -> int:
    """Default N_max for compute_r, invert and barrier_h_y (default 32)."""
    return _int_setting("SHIFTLAB_NMAX_DEFAULT", DEFAULT_NMAX, minimum=1)


def get_kmax_default() -> int:
    """Default K_max for limit_image and nice_check (default 64)."""
    return _int_setting("SHIFTLAB_KMAX_DEFAULT", DEFAULT_KMAX, minimum=3)


def get_symbol_bound_default() -> int:
    """Default symbol bound for enumerations and bounded searches."""
    return _int_setting(
        "SHIFTLAB_SYMBOL_BOUND_DEFAULT", DEFAULT_SYMBOL_BOUND
    )


def get_sample_size_default() -> int:
    """Default count of sampled indices or sampled cylinder members."""
    return _int_setting(
        "SHIFTLAB_SAMPLE_SIZE_DEFAULT", DEFAULT_SAMPLE_SIZE, minimum=1
    )


def get_seed_default() -> int:
    return _int_setting("SHIFTLAB_SEED_DEFAULT", DEFAULT_SEED)
