"""
Centralized timestamp utilities.

Timestamps only ever appear in output headers, never in payloads, so two
runs with the same RunConfig differ in nothing else.

Usage:
    from utils.timestamps import utc_now
"""

from datetime import datetime, timezone


def utc_now() -> str:
    """UTC timestamp with offset: '2026-03-13T12:00:00+00:00'"""
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()
