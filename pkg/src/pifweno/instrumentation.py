"""Cheap call counters for asserting the single-stage structure (one
reconstruction sweep per direction, one limiter solve per step)."""

from __future__ import annotations

_counters: dict[str, int] = {}


def bump(name):
    _counters[name] = _counters.get(name, 0) + 1


def snapshot():
    return dict(_counters)


def delta(before, after=None):
    after = after if after is not None else snapshot()
    keys = set(before) | set(after)
    return {k: after.get(k, 0) - before.get(k, 0) for k in keys}
