"""On-disk cache of HTTP GET bodies with TTL.

Layout: each record lives under the cache directory as a pair of files named
by the lowercase hex SHA-256 of the URL: ``<digest>.json`` (envelope with
``url``, ``status``, ``fetched_at``, ``ttl_seconds``) and ``<digest>.body``
(the response body, verbatim). Only 200 and 404 outcomes are cacheable; a
404 record has an empty body. Writes go to a temp file and are renamed into
place, so concurrent readers never see partial records.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from enum import Enum
from pathlib import Path
from typing import Callable

from crate2bib.errors import OfflineMissError

DEFAULT_TTL_SECONDS = 24 * 3600
CACHE_DIR_ENV = "CRATE2BIB_CACHE_DIR"

Fetcher = Callable[[str], tuple[int, bytes]]


class FetchMode(Enum):
    ONLINE = "online"
    OFFLINE = "offline"


@dataclass(frozen=True)
class CacheRecord:
    """A fetched HTTP body plus the metadata needed to judge freshness."""

    url: str
    status: int
    body: bytes
    fetched_at: datetime
    ttl_seconds: int

    def __post_init__(self) -> None:
        if self.status not in (200, 404):
            raise ValueError(f"only 200/404 are cacheable, got {self.status}")
        if (self.status == 404) != (len(self.body) == 0):
            raise ValueError("body must be empty exactly when status is 404")


def default_cache_dir() -> Path:
    """Resolve the cache directory: env var first, then the platform default."""
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return Path(env)
    xdg = os.environ.get("XDG_CACHE_HOME")
    base = Path(xdg) if xdg else Path.home() / ".cache"
    return base / "crate2bib"


class DiskCache:
    """Content-addressed response cache rooted at one directory."""

    def __init__(self, directory: str | Path | None = None) -> None:
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.directory.mkdir(parents=True, exist_ok=True)

    def _paths(self, url: str) -> tuple[Path, Path]:
        digest = hashlib.sha256(url.encode("utf-8")).hexdigest()
        return self.directory / f"{digest}.json", self.directory / f"{digest}.body"

    def load(self, url: str) -> CacheRecord | None:
        """Read the record for ``url``, or None if absent or unreadable."""
        envelope_path, body_path = self._paths(url)
        try:
            envelope = json.loads(envelope_path.read_text(encoding="utf-8"))
            body = body_path.read_bytes()
            fetched_at = datetime.fromisoformat(envelope["fetched_at"])
            if fetched_at.tzinfo is None:
                # Externally seeded envelopes may omit the offset.
                fetched_at = fetched_at.replace(tzinfo=timezone.utc)
            return CacheRecord(
                url=envelope["url"],
                status=int(envelope["status"]),
                body=body,
                fetched_at=fetched_at,
                ttl_seconds=int(envelope["ttl_seconds"]),
            )
        except (OSError, ValueError, KeyError, TypeError):
            return None

    def store(self, record: CacheRecord) -> None:
        """Write a record atomically; the last writer wins per URL."""
        envelope_path, body_path = self._paths(record.url)
        envelope = json.dumps(
            {
                "url": record.url,
                "status": record.status,
                "fetched_at": record.fetched_at.isoformat(),
                "ttl_seconds": record.ttl_seconds,
            }
        )
        self._write_atomic(body_path, record.body)
        self._write_atomic(envelope_path, envelope.encode("utf-8"))

    def _write_atomic(self, path: Path, data: bytes) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    def get_or_fetch(
        self,
        url: str,
        fetcher: Fetcher,
        ttl: int = DEFAULT_TTL_SECONDS,
        mode: FetchMode = FetchMode.ONLINE,
    ) -> tuple[int, bytes, bool]:
        """Return ``(status, body, from_cache)`` for ``url``.

        A record fetched less than ``ttl`` seconds ago is served without
        touching the network. Otherwise the fetcher runs (Online) and its
        200/404 outcome replaces the record; 404 bodies are discarded so the
        stored record stays canonical. Offline mode never invokes the
        fetcher.

        Raises:
            OfflineMissError: Offline mode with no fresh record.

        Fetcher transport errors propagate and nothing is cached for them.
        """
        record = self.load(url)
        now = datetime.now(timezone.utc)
        if record is not None and record.fetched_at + timedelta(seconds=ttl) > now:
            return record.status, record.body, True
        if mode is FetchMode.OFFLINE:
            raise OfflineMissError(f"offline mode and no fresh cache record for {url}")
        status, body = fetcher(url)
        if status == 404:
            body = b""
        if status == 200 and body or status == 404:
            self.store(
                CacheRecord(url=url, status=status, body=body, fetched_at=now, ttl_seconds=ttl)
            )
        return status, body, False
