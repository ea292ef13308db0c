"""Locate and download `CITATION.cff` from a package's source repository.

Only raw-file endpoints of known hosting platforms are used: no git, no
platform REST APIs, no tokens. The file is only ever looked for at the
repository root, on the `main` then `master` branch heads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from urllib.parse import urlparse

from crate2bib.cache import DiskCache
from crate2bib.errors import MalformedUrlError, NetworkError, UnsupportedHostError
from crate2bib.net import http_get
from crate2bib.registry import ClientConfig

CFF_FILENAME = "CITATION.cff"
DEFAULT_BRANCHES = ("main", "master")


class Host(Enum):
    GITHUB = "github"
    CODEBERG = "codeberg"
    UNSUPPORTED = "unsupported"


# Bit-exact raw-file URL shapes per platform. Tests substitute their own.
RAW_URL_TEMPLATES = {
    Host.GITHUB: "https://raw.githubusercontent.com/{owner}/{repo}/{branch}/" + CFF_FILENAME,
    Host.CODEBERG: "https://codeberg.org/{owner}/{repo}/raw/branch/{branch}/" + CFF_FILENAME,
}

_HOSTNAMES = {
    "github.com": Host.GITHUB,
    "codeberg.org": Host.CODEBERG,
}


@dataclass(frozen=True)
class RepoLocator:
    host: Host
    owner: str
    repo: str
    source_url: str


@dataclass(frozen=True)
class CffFetchResult:
    raw_text: str
    branch: str
    path: str
    fetched_from: str


def parse_repo_url(url: str) -> RepoLocator:
    """Classify a repository URL by hosting platform and split owner/repo.

    Extra path segments (monorepo paths, `/tree/...`) and fragments are
    ignored; a trailing `.git` on the repo segment is stripped.

    Raises:
        MalformedUrlError: not an absolute http(s) URL, or a supported host
            with fewer than two path segments.
    """
    try:
        parsed = urlparse(url)
    except ValueError as exc:
        raise MalformedUrlError(f"unparseable URL {url!r}: {exc}") from exc
    if parsed.scheme not in ("http", "https") or not parsed.hostname:
        raise MalformedUrlError(f"expected an absolute http(s) URL, got {url!r}")

    host = _HOSTNAMES.get(parsed.hostname.lower(), Host.UNSUPPORTED)
    segments = [segment for segment in parsed.path.split("/") if segment]
    owner = segments[0] if segments else ""
    repo = segments[1] if len(segments) > 1 else ""
    if repo.endswith(".git"):
        repo = repo[: -len(".git")]
    if host is not Host.UNSUPPORTED and (not owner or not repo):
        raise MalformedUrlError(f"repository URL {url!r} lacks owner/repo path segments")
    return RepoLocator(host=host, owner=owner, repo=repo, source_url=url)


def fetch_citation_cff(
    locator: RepoLocator,
    config: ClientConfig,
    cache: DiskCache,
    extra_branch: str | None = None,
) -> CffFetchResult | None:
    """Probe the repository for a `CITATION.cff` file.

    Branch heads are tried in a fixed order (`main`, `master`, after any
    extra_branch prepended by the caller) and the first 200 wins. 404s are
    clean "not there" outcomes; anything else stops the probe.

    Returns:
        The fetched file, or None when every probe came back 404.

    Raises:
        UnsupportedHostError: locator.host is not a known platform.
        NetworkError: transport failure or an unexpected status on a probe.
        OfflineMissError: offline mode and a probe URL is not cached.
    """
    if locator.host not in RAW_URL_TEMPLATES:
        raise UnsupportedHostError(
            f"no raw-file URL scheme known for {locator.source_url!r}"
        )
    template = RAW_URL_TEMPLATES[locator.host]

    branches = list(DEFAULT_BRANCHES)
    if extra_branch and extra_branch not in branches:
        branches.insert(0, extra_branch)

    def fetcher(target: str) -> tuple[int, bytes]:
        return http_get(
            target,
            user_agent=config.user_agent,
            timeout_ms=config.timeout_ms,
            min_interval_ms=config.min_request_interval_ms,
        )

    for branch in branches:
        url = template.format(owner=locator.owner, repo=locator.repo, branch=branch)
        status, body, _ = cache.get_or_fetch(
            url, fetcher, ttl=config.cache_ttl_seconds, mode=config.fetch_mode
        )
        if status == 200:
            if not body:
                continue  # zero-byte file: nothing citable there
            return CffFetchResult(
                raw_text=body.decode("utf-8", errors="replace"),
                branch=branch,
                path=CFF_FILENAME,
                fetched_from=url,
            )
        if status != 404:
            raise NetworkError(f"unexpected HTTP status {status} probing {url}")
    return None
