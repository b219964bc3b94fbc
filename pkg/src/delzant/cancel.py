"""Cooperative cancellation for long enumerations."""

from __future__ import annotations

import threading

from .errors import Cancelled


class CancelToken:
    """Shared flag checked by enumeration loops; ``cancel()`` may be called from any thread."""

    def __init__(self):
        self._event = threading.Event()

    def cancel(self):
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()

    def check(self):
        if self._event.is_set():
            raise Cancelled("operation cancelled by caller")


def check(token):
    if token is not None:
        token.check()
