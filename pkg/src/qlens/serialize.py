"""Canonical JSON encoding shared by the store, service, and CLI.

Payload bytes must be reproducible across processes, so every export
goes through the same dump settings.
"""

from __future__ import annotations

import json


def canonical_json_bytes(obj) -> bytes:
    """Sorted keys, no whitespace, UTF-8; stable for identical values."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )
