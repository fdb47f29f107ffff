"""Provenance helpers: every result carries enough to reproduce it."""

from __future__ import annotations

import hashlib
import json


def config_hash(config: dict) -> str:
    """Stable short digest of a JSON-serializable configuration."""
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]
