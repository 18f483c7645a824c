# Django adapter: verification runs of the example registry, plus a thin
# HTTP surface over the engine.
# Public API: import from here (lazy to avoid AppRegistryNotReady).

__all__ = [
    "RunTracker",
    "register_verification_run",
    "get_run_stats",
    "list_verification_runs",
    "ExampleRunLock",
    "run_lock_key",
    "RunStatus",
    "run_example_task",
    "dispatch_example_run",
]

_BASE = "shiftlab.adapters.django"
_SUBMODULES = (
    "admin",
    "conf",
    "models",
    "serializers",
    "services",
    "tasks",
    "urls",
    "views",
)
_SYMBOLS = (
    ("RunTracker", f"{_BASE}.services.run_tracker", "RunTracker"),
    (
        "register_verification_run",
        f"{_BASE}.services.run_tracker",
        "register_verification_run",
    ),
    ("get_run_stats", f"{_BASE}.services.run_stats", "get_run_stats"),
    (
        "list_verification_runs",
        f"{_BASE}.services.run_stats",
        "list_verification_runs",
    ),
    ("ExampleRunLock", f"{_BASE}.services.run_lock", "ExampleRunLock"),
    ("run_lock_key", f"{_BASE}.services.run_lock", "run_lock_key"),
    ("RunStatus", "shiftlab.constants", "RunStatus"),
    ("run_example_task", f"{_BASE}.tasks", "run_example_task"),
    ("dispatch_example_run", f"{_BASE}.tasks", "dispatch_example_run"),
)
_LAZY = {name: (mod, attr) for name, mod, attr in _SYMBOLS}


def __getattr__(name):
    from importlib import import_module

    if name in _SUBMODULES:
        return import_module(f".{name}", __name__)
    if name in _LAZY:
        mod_path, attr = _LAZY[name]
        mod = import_module(mod_path)
        return getattr(mod, attr)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
