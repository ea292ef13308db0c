"""HTTP transport: a rate gate shared across the process and a thin fetcher.

crates.io asks crawlers to keep request rates low and to identify
themselves, so every request funnels through one gate that spaces out
request starts, and the User-Agent header is always set explicitly.
"""

from __future__ import annotations

import threading
import time

import requests

from crate2bib.errors import NetworkError


class RequestGate:
    """Serializes request starts so consecutive starts are at least a
    caller-chosen interval apart.

    The gate holds its lock while sleeping: with N threads waiting, starts
    come out one interval apart rather than all at once when the interval
    elapses.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._last_start: float | None = None

    def wait(self, min_interval_ms: int) -> None:
        """Block until a new request may start, then claim that start slot."""
        with self._lock:
            now = time.monotonic()
            if self._last_start is not None:
                wake = self._last_start + min_interval_ms / 1000.0
                if wake > now:
                    time.sleep(wake - now)
                    now = time.monotonic()
            self._last_start = now


_GLOBAL_GATE = RequestGate()


def http_get(
    url: str,
    user_agent: str,
    timeout_ms: int,
    min_interval_ms: int,
    gate: RequestGate | None = None,
    session: requests.Session | None = None,
) -> tuple[int, bytes]:
    """GET ``url`` and return ``(status_code, body)``.

    Redirects are followed; any transport-level failure (DNS, refused
    connection, timeout) is reported as NetworkError. Non-2xx statuses are
    returned, not raised, because callers distinguish 404 from transport
    trouble.
    """
    (gate or _GLOBAL_GATE).wait(min_interval_ms)
    headers = {"User-Agent": user_agent}
    try:
        if session is not None:
            response = session.get(url, headers=headers, timeout=timeout_ms / 1000.0)
        else:
            response = requests.get(url, headers=headers, timeout=timeout_ms / 1000.0)
    except requests.RequestException as exc:
        raise NetworkError(f"GET {url} failed: {exc}") from exc
    return response.status_code, response.content
