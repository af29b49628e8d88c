from pathlib import Path
from typing import Any

from django.conf import settings

DEFAULTS: dict[str, Any] = {
    "TOOL_VERSION": "0.1.0",
    "FIXTURE_DIR": Path(__file__).resolve().parent / "fixtures",
    "SOLVER_MAX_RADIUS": 8,
    "OUTPUT_INDENT": 2,
}


def kring_setting(name: str) -> Any:
    """
    Look up a key of the TORIC_KRING settings block.

    Falls back to DEFAULTS when Django settings are not configured,
    so the algebra modules stay usable as a plain library.
    """
    if name not in DEFAULTS:
        raise KeyError(f"Unknown TORIC_KRING setting: {name}")
    block: dict[str, Any] = {}
    if settings.configured:
        block = getattr(settings, "TORIC_KRING", {}) or {}
    return block.get(name, DEFAULTS[name])
