"""Shared test scaffolding: stub HTTP server, cache seeding, generators.

Generators take an explicit random.Random so failures reproduce from the
seed printed by the calling test.
"""

from __future__ import annotations

import string
import threading
import time
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from random import Random

from crate2bib import BibEntry, CacheRecord, DiskCache, VersionInfo
from crate2bib.bibtex import CANONICAL_FIELD_ORDER

DATA_DIR = Path(__file__).parent / "data"
REGISTRY_DIR = DATA_DIR / "registry"
CORPUS_DIR = DATA_DIR / "cff_corpus"

TEST_USER_AGENT = "crate2bib-tests (contact: tests@example.invalid)"


class _StubHandler(BaseHTTPRequestHandler):
    def do_GET(self) -> None:
        server = self.server
        with server.state_lock:  # type: ignore[attr-defined]
            server.request_log.append(  # type: ignore[attr-defined]
                (time.monotonic(), self.path, dict(self.headers))
            )
            route = server.routes.get(self.path)  # type: ignore[attr-defined]
        status, body = route if route is not None else (404, b"{}")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format: str, *args: object) -> None:
        pass


class StubServer:
    """Local HTTP server with a mutable routing table and a request log.

    routes maps path -> (status, body bytes); unknown paths return 404.
    log holds (monotonic arrival time, path, headers) per request.
    """

    def __init__(self) -> None:
        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
        self._httpd.routes = {}
        self._httpd.request_log = []
        self._httpd.state_lock = threading.Lock()
        self._thread = threading.Thread(
            target=lambda: self._httpd.serve_forever(poll_interval=0.02), daemon=True
        )
        self._thread.start()

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self._httpd.server_address[1]}"

    @property
    def routes(self) -> dict:
        return self._httpd.routes

    @property
    def log(self) -> list:
        return self._httpd.request_log

    def paths_requested(self) -> list[str]:
        return [path for _, path, _ in self.log]

    def close(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join(timeout=5)


def route_package(stub: StubServer, name: str, crate_file: str, versions_file: str) -> None:
    stub.routes[f"/api/v1/crates/{name}"] = (200, (REGISTRY_DIR / crate_file).read_bytes())
    stub.routes[f"/api/v1/crates/{name}/versions"] = (
        200,
        (REGISTRY_DIR / versions_file).read_bytes(),
    )


def seed_cache(cache_dir, url: str, status: int, body: bytes) -> None:
    """Plant one fresh cache record so offline runs can be served."""
    DiskCache(cache_dir).store(
        CacheRecord(
            url=url,
            status=status,
            body=body,
            fetched_at=datetime.now(timezone.utc),
            ttl_seconds=24 * 3600,
        )
    )


def seed_package(cache_dir, name: str, crate_file: str, versions_file: str,
                 base_url: str = "https://crates.io") -> None:
    api = f"{base_url}/api/v1/crates/{name}"
    seed_cache(cache_dir, api, 200, (REGISTRY_DIR / crate_file).read_bytes())
    seed_cache(cache_dir, f"{api}/versions", 200, (REGISTRY_DIR / versions_file).read_bytes())


def seed_fluxline(cache_dir, base_url: str = "https://crates.io",
                  raw_base: str = "https://raw.githubusercontent.com") -> None:
    """Full pipeline fixture: registry responses plus the CITATION.cff probe."""
    seed_package(cache_dir, "fluxline", "fluxline_crate.json", "fluxline_versions.json", base_url)
    seed_cache(
        cache_dir,
        f"{raw_base}/acme/fluxline/main/CITATION.cff",
        200,
        (REGISTRY_DIR / "fluxline_CITATION.cff").read_bytes(),
    )


# ---------------------------------------------------------------------------
# Randomized inputs

ENTRY_TYPES = ("software", "article", "misc", "inproceedings", "techreport")
FIELD_NAMES = list(CANONICAL_FIELD_ORDER) + ["publisher", "institution", "abstract", "zzz-last"]

# Escape-relevant characters are deliberately overrepresented.
VALUE_ALPHABET = (
    string.ascii_letters
    + string.digits
    + " \t\n"
    + "&%$#_{}~^\\" * 3
    + "äöüßéñçıİ€—–“”‘’·"
    + "日本語中文한글"
    + "()[]<>=+*/.,;:'\"!?@|-"
)


def random_value(rng: Random, max_len: int = 40) -> str:
    return "".join(rng.choice(VALUE_ALPHABET) for _ in range(rng.randrange(0, max_len)))


def random_citation_key(rng: Random) -> str:
    first = rng.choice(string.ascii_letters)
    rest = "".join(
        rng.choice(string.ascii_letters + string.digits + ":_-")
        for _ in range(rng.randrange(0, 12))
    )
    return first + rest


def random_entry(rng: Random) -> BibEntry:
    names = rng.sample(FIELD_NAMES, rng.randrange(1, 8))
    return BibEntry(
        entry_type=rng.choice(ENTRY_TYPES),
        key=random_citation_key(rng),
        fields={name: random_value(rng) for name in names},
    )


_PRERELEASE_POOL = ("alpha", "beta", "rc", "0", "1", "11", "2a", "dev-3", "SNAPSHOT")
_BUILD_POOL = ("build5", "sha.abc123", "001")
_EPOCH = datetime(2025, 1, 1, tzinfo=timezone.utc)


def random_semver(rng: Random) -> str:
    text = f"{rng.randrange(0, 4)}.{rng.randrange(0, 13)}.{rng.randrange(0, 10)}"
    if rng.random() < 0.35:
        ids = [rng.choice(_PRERELEASE_POOL) for _ in range(rng.randrange(1, 3))]
        text += "-" + ".".join(ids)
    if rng.random() < 0.2:
        text += "+" + rng.choice(_BUILD_POOL)
    return text


def random_version_set(rng: Random) -> list[VersionInfo]:
    """1..8 distinct versions; distinct even ignoring build metadata, since
    precedence cannot order two versions that differ only there."""
    count = rng.randrange(1, 9)
    seen: set[str] = set()
    out: list[VersionInfo] = []
    for _ in range(40):
        if len(out) == count:
            break
        num = random_semver(rng)
        core = num.split("+")[0]
        if core in seen:
            continue
        seen.add(core)
        out.append(
            VersionInfo(semver=num, yanked=rng.random() < 0.25, published_at=_EPOCH)
        )
    return out


def random_version_request(rng: Random, versions: list[VersionInfo]) -> str | None:
    choice = rng.randrange(8)
    if choice == 0:
        return None
    if choice == 1:
        return "latest"
    if choice == 2:
        return rng.choice(versions).semver  # exact, existing
    if choice == 3:
        return "9.9.9"  # exact, never published
    if choice == 4:
        return str(rng.randrange(0, 4))
    if choice == 5:
        return f"{rng.randrange(0, 4)}.{rng.randrange(0, 13)}"
    return rng.choice(("abc", "1.", "x.y", "1.2.3.4", "latest-stable"))
