"""Client for the registry HTTP API (crates.io shape).

Two endpoints are consumed per package: the crate summary and the version
list. Every request goes through the shared rate gate and the on-disk
cache; see ClientConfig for the knobs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import datetime

from crate2bib.cache import DEFAULT_TTL_SECONDS, DiskCache, FetchMode
from crate2bib.errors import (
    AllVersionsYankedError,
    InvalidNameError,
    MalformedResponseError,
    NetworkError,
    NoMatchingVersionError,
    PackageNotFoundError,
    RateLimitedError,
)
from crate2bib.net import http_get
from crate2bib.semver import SemVer, parse_semver

DEFAULT_USER_AGENT = "crate2bib (contact: <none>)"

_NAME_RE = re.compile(r"[a-z0-9_-]+\Z")
_PREFIX_RE = re.compile(r"(\d+)(?:\.(\d+))?\Z")


@dataclass(frozen=True)
class ClientConfig:
    """Registry connection settings plus cache behavior.

    min_request_interval_ms spaces out request starts process-wide;
    crates.io's crawler policy requires a throttled, identified client,
    hence the mandatory user_agent.
    """

    base_url: str = "https://crates.io"
    user_agent: str = DEFAULT_USER_AGENT
    min_request_interval_ms: int = 1000
    timeout_ms: int = 10000
    offline: bool = False
    cache_ttl_seconds: int = DEFAULT_TTL_SECONDS

    def __post_init__(self) -> None:
        if not self.user_agent:
            raise ValueError("user_agent must be non-empty")
        if self.min_request_interval_ms < 0:
            raise ValueError("min_request_interval_ms must be >= 0")

    @property
    def fetch_mode(self) -> FetchMode:
        return FetchMode.OFFLINE if self.offline else FetchMode.ONLINE


@dataclass(frozen=True)
class Publisher:
    name: str
    email: str | None = None


@dataclass(frozen=True)
class VersionInfo:
    """One published version as reported by the registry."""

    semver: str
    yanked: bool
    published_at: datetime
    license: str | None = None
    published_by: Publisher | None = None

    def parsed(self) -> SemVer:
        parsed = parse_semver(self.semver)
        if parsed is None:
            raise ValueError(f"not a semantic version: {self.semver!r}")
        return parsed


@dataclass(frozen=True)
class PackageMeta:
    """Registry metadata for one package, versions newest first."""

    name: str
    versions: tuple[VersionInfo, ...]
    description: str | None = None
    repository_url: str | None = None
    homepage_url: str | None = None


def _get_json(url: str, config: ClientConfig, cache: DiskCache, what: str) -> dict:
    def fetcher(target: str) -> tuple[int, bytes]:
        return http_get(
            target,
            user_agent=config.user_agent,
            timeout_ms=config.timeout_ms,
            min_interval_ms=config.min_request_interval_ms,
        )

    status, body, _ = cache.get_or_fetch(
        url, fetcher, ttl=config.cache_ttl_seconds, mode=config.fetch_mode
    )
    if status == 404:
        raise PackageNotFoundError(f"{what} not found on the registry (404 from {url})")
    if status == 429:
        raise RateLimitedError(f"registry rate limit hit (429 from {url}); retry later")
    if status != 200:
        raise NetworkError(f"unexpected HTTP status {status} from {url}")
    try:
        data = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedResponseError(f"response from {url} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedResponseError(f"response from {url} is not a JSON object")
    return data


def _parse_publisher(raw: object) -> Publisher | None:
    if not isinstance(raw, dict):
        return None
    name = raw.get("name") or raw.get("login")
    if not isinstance(name, str) or not name:
        return None
    email = raw.get("email")
    return Publisher(name=name, email=email if isinstance(email, str) and email else None)


def _parse_timestamp(raw: object, where: str) -> datetime:
    if not isinstance(raw, str):
        raise MalformedResponseError(f"{where}: missing created_at timestamp")
    try:
        return datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError as exc:
        raise MalformedResponseError(f"{where}: bad timestamp {raw!r}") from exc


def _parse_version(raw: object, package: str) -> VersionInfo:
    if not isinstance(raw, dict):
        raise MalformedResponseError(f"{package}: version record is not an object")
    num = raw.get("num")
    if not isinstance(num, str) or parse_semver(num) is None:
        raise MalformedResponseError(f"{package}: version number {num!r} is not semver")
    license_expr = raw.get("license")
    return VersionInfo(
        semver=num,
        yanked=bool(raw.get("yanked", False)),
        published_at=_parse_timestamp(raw.get("created_at"), f"{package} {num}"),
        license=license_expr if isinstance(license_expr, str) and license_expr else None,
        published_by=_parse_publisher(raw.get("published_by")),
    )


def fetch_package_meta(name: str, config: ClientConfig, cache: DiskCache) -> PackageMeta:
    """Fetch summary + version list for one package.

    Args:
        name: registry package name, lowercase `[a-z0-9_-]+`.
        config: connection settings.
        cache: response cache consulted before the network.

    Returns:
        PackageMeta with every published version.

    Raises:
        InvalidNameError: name fails the syntax check (no network touched).
        PackageNotFoundError: registry answered 404.
        RateLimitedError: registry answered 429.
        NetworkError: transport failure or unexpected status.
        MalformedResponseError: body unparseable or missing required fields.
        OfflineMissError: offline mode without a fresh cached response.
    """
    if not _NAME_RE.fullmatch(name or ""):
        raise InvalidNameError(
            f"invalid package name {name!r}: expected lowercase letters, digits, '-', '_'"
        )
    base = f"{config.base_url}/api/v1/crates/{name}"
    summary = _get_json(base, config, cache, f"crate '{name}'")
    versions_doc = _get_json(f"{base}/versions", config, cache, f"versions of '{name}'")

    crate = summary.get("crate")
    if not isinstance(crate, dict):
        raise MalformedResponseError(f"{name}: summary response has no 'crate' object")
    raw_versions = versions_doc.get("versions")
    if not isinstance(raw_versions, list) or not raw_versions:
        raise MalformedResponseError(f"{name}: registry reports no versions")

    def opt_str(value: object) -> str | None:
        return value if isinstance(value, str) and value else None

    return PackageMeta(
        name=name,
        versions=tuple(_parse_version(raw, name) for raw in raw_versions),
        description=opt_str(crate.get("description")),
        repository_url=opt_str(crate.get("repository")),
        homepage_url=opt_str(crate.get("homepage")),
    )


def resolve_version(spec: str | None, available: list[VersionInfo] | tuple[VersionInfo, ...]) -> VersionInfo:
    """Pick the version a request refers to.

    Request forms: `latest` (or None/empty) takes the highest non-yanked
    stable version; an exact `X.Y.Z[-pre][+build]` takes that version even
    when yanked (callers should surface a warning via `.yanked`); a partial
    `X` or `X.Y` takes the highest non-yanked version with that prefix,
    pre-releases excluded.

    Raises:
        NoMatchingVersionError: nothing satisfies the request (also used
            for requests that are not in any of the three forms).
        AllVersionsYankedError: versions match but every one is yanked and
            the request was not exact.
    """
    if not available:
        raise NoMatchingVersionError("no versions available")
    text = (spec or "latest").strip()

    if text == "latest":
        candidates = [v for v in available if not v.parsed().is_prerelease]
        what = "stable version"
    elif parse_semver(text) is not None:
        for version in available:
            if version.semver == text:
                return version
        raise NoMatchingVersionError(f"version {text} was never published")
    else:
        prefix = _PREFIX_RE.fullmatch(text)
        if prefix is None:
            raise NoMatchingVersionError(
                f"{text!r} is not a version request (expected 'latest', X, X.Y, or X.Y.Z)"
            )
        major = int(prefix.group(1))
        minor = None if prefix.group(2) is None else int(prefix.group(2))
        candidates = [
            v
            for v in available
            if not v.parsed().is_prerelease
            and v.parsed().major == major
            and (minor is None or v.parsed().minor == minor)
        ]
        what = f"version matching {text}"

    live = [v for v in candidates if not v.yanked]
    if live:
        return max(live, key=lambda v: v.parsed().precedence_key())
    if candidates:
        raise AllVersionsYankedError(f"every {what} has been yanked")
    raise NoMatchingVersionError(f"no {what} exists")
