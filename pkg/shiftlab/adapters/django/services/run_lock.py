"""
Example run lock: at most one run of a given (example_id, seed) executes at
a time. The cache entry stores the run_id of the owning run.
Public API: import from shiftlab.adapters.django.
"""
import logging
from typing import Optional

from django.core.cache import cache

from shiftlab import conf
from shiftlab.adapters.django.conf import get_run_lock_timeout

logger = logging.getLogger(__name__)

LOCK_KEY_PREFIX = "shiftlab:run"


def run_lock_key(example_id: str, seed: Optional[int] = None) -> str:
    """A missing seed resolves to SHIFTLAB_SEED_DEFAULT, as run_example does."""
    if seed is None:
        seed = conf.get_seed_default()
    return f"{LOCK_KEY_PREFIX}:{example_id}:{seed}"


class ExampleRunLock:
    """
    Lock on one (example_id, seed) pair, owned by run_id. Only the owner
    releases it; once the timeout expires another run may take it over.

        with ExampleRunLock("arre", 3, run_id) as lock:
            if lock.acquired:
                ...
    """

    def __init__(
        self,
        example_id: str,
        seed: Optional[int],
        run_id: str,
        timeout: Optional[int] = None,
    ):
        self.key = run_lock_key(example_id, seed)
        self.run_id = run_id
        self.timeout = timeout if timeout is not None else get_run_lock_timeout()
        self.acquired = False

    def holder(self) -> Optional[str]:
        """run_id currently holding the lock, None when free or unreadable."""
        try:
            return cache.get(self.key)
        except Exception as exc:
            logger.warning(f"Failed to read run lock key={self.key}: {exc}")
            return None

    def acquire(self) -> bool:
        try:
            self.acquired = bool(
                cache.add(self.key, self.run_id, timeout=self.timeout)
            )
        except Exception as exc:
            logger.warning(f"Failed to acquire run lock key={self.key}: {exc}")
            self.acquired = False
        if self.acquired:
            logger.info(f"Acquired run lock key={self.key} run_id={self.run_id}")
        else:
            logger.warning(
                f"Run lock busy key={self.key} run_id={self.run_id} "
                f"holder={self.holder()}"
            )
        return self.acquired

    def release(self) -> bool:
        """Delete the entry if this run still owns it."""
        if not self.acquired:
            return False
        self.acquired = False
        holder = self.holder()
        if holder != self.run_id:
            logger.warning(
                f"Run lock taken over key={self.key} run_id={self.run_id} "
                f"holder={holder}"
            )
            return False
        try:
            cache.delete(self.key)
        except Exception as exc:
            logger.warning(f"Failed to release run lock key={self.key}: {exc}")
            return False
        logger.info(f"Released run lock key={self.key} run_id={self.run_id}")
        return True

    def __enter__(self) -> "ExampleRunLock":
        self.acquire()
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        self.release()
        return False
