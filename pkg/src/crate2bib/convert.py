"""Map registry metadata and CFF documents onto BibTeX entry candidates.

The pipeline produces up to three candidates per package: one from registry
metadata (always, on registry success), one from the repository's
CITATION.cff, and one from that file's preferred-citation sub-record.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from crate2bib.bibtex import BibEntry, generate_key, unique_key
from crate2bib.cache import DiskCache
from crate2bib.cff import CffDocument, is_supported_cff_version, parse_cff
from crate2bib.errors import (
    CffError,
    MalformedUrlError,
    NetworkError,
    OfflineMissError,
    UnkeyableError,
)
from crate2bib.registry import (
    ClientConfig,
    PackageMeta,
    VersionInfo,
    fetch_package_meta,
    resolve_version,
)
from crate2bib.repo import Host, fetch_citation_cff, parse_repo_url

# CFF reference types with a direct BibTeX counterpart; everything else
# becomes @misc.
_PREFERRED_TYPE_MAP = {
    "article": "article",
    "conference-paper": "inproceedings",
    "software": "software",
}


class OriginKind(Enum):
    REGISTRY = "registry"
    CFF = "cff"
    CFF_PREFERRED = "cff-preferred"


@dataclass(frozen=True)
class Origin:
    kind: OriginKind
    source_url: str


@dataclass(frozen=True)
class Candidate:
    """A BibEntry plus where it came from and anything worth flagging."""

    entry: BibEntry
    origin: Origin
    warnings: tuple[str, ...] = ()


def _first_keyable(stems: Iterable[str], year: int) -> str:
    """Citation key from the first stem that survives keying."""
    for stem in stems:
        if not stem:
            continue
        try:
            return generate_key(stem, year, set())
        except UnkeyableError:
            continue
    raise UnkeyableError(f"no usable key stem among {list(stems)!r}")


def _family_from_display(display_name: str) -> str:
    """Best-effort family name from a registry display name.

    The registry stores one opaque display string; the last
    whitespace-separated token is taken as the family name.
    """
    parts = display_name.split()
    return parts[-1] if parts else ""


def package_to_bib(
    meta: PackageMeta,
    version: VersionInfo,
    registry_base: str = "https://crates.io",
) -> BibEntry:
    """Build the registry-metadata entry for one resolved version.

    The author field comes from the version's publisher record; when the
    registry has none, the field is omitted (gather_candidates attaches
    the warning).
    """
    fields = {
        "title": meta.name,
        "version": version.semver,
        "year": str(version.published_at.year),
        "month": str(version.published_at.month),
        "url": f"{registry_base}/crates/{meta.name}",
    }
    if version.license:
        fields["license"] = version.license
    family = ""
    if version.published_by is not None:
        fields["author"] = version.published_by.name
        family = _family_from_display(version.published_by.name)
    key = _first_keyable(
        (family, meta.name, f"crate {meta.name}"), version.published_at.year
    )
    return BibEntry(entry_type="software", key=key, fields=fields)


def cff_to_bib(
    cff: CffDocument, package_name: str, resolved_version: VersionInfo
) -> list[BibEntry]:
    """Build entries from a parsed CITATION.cff document.

    Always one `software` entry from the top level; a second entry when the
    document carries a preferred-citation. The CFF `version` field wins
    over the registry-resolved version: the file is the authors' own
    citation statement.
    """
    authors = " and ".join(author.display_name() for author in cff.authors)
    year = (
        cff.date_released.year
        if cff.date_released is not None
        else resolved_version.published_at.year
    )
    fields = {
        "author": authors,
        "title": cff.title,
        "version": cff.version or resolved_version.semver,
    }
    if cff.date_released is not None:
        fields["year"] = str(cff.date_released.year)
        fields["month"] = str(cff.date_released.month)
    if cff.doi:
        fields["doi"] = cff.doi
    if cff.url or cff.repository_code:
        fields["url"] = cff.url or cff.repository_code  # type: ignore[assignment]
    if cff.license:
        fields["license"] = cff.license
    software = BibEntry(
        entry_type="software",
        key=_first_keyable(
            (cff.authors[0].key_stem(), package_name, f"crate {package_name}"), year
        ),
        fields=fields,
    )
    if cff.preferred_citation is None:
        return [software]

    preferred = cff.preferred_citation
    pc_year = preferred.year if preferred.year is not None else year
    pc_fields = {
        "author": " and ".join(author.display_name() for author in preferred.authors),
        "title": preferred.title,
    }
    if preferred.year is not None:
        pc_fields["year"] = str(preferred.year)
    for name, value in (
        ("journal", preferred.journal),
        ("volume", preferred.volume),
        ("pages", preferred.pages),
        ("doi", preferred.doi),
        ("url", preferred.url),
    ):
        if value:
            pc_fields[name] = value
    entry = BibEntry(
        entry_type=_PREFERRED_TYPE_MAP.get(preferred.entry_kind, "misc"),
        key=_first_keyable(
            (preferred.authors[0].key_stem(), package_name, f"crate {package_name}"),
            pc_year,
        ),
        fields=pc_fields,
    )
    return [software, entry]


def _dedupe_keys(candidates: list[Candidate]) -> list[Candidate]:
    """Make citation keys collision-free across the whole list."""
    taken: set[str] = set()
    out: list[Candidate] = []
    for candidate in candidates:
        key = unique_key(candidate.entry.key, taken)
        taken.add(key)
        if key != candidate.entry.key:
            candidate = dataclasses.replace(
                candidate, entry=dataclasses.replace(candidate.entry, key=key)
            )
        out.append(candidate)
    return out


def gather_candidates(
    name: str,
    spec: str | None,
    config: ClientConfig,
    cache: DiskCache,
    probe_cff: bool = True,
    branch: str | None = None,
) -> list[Candidate]:
    """Run the full pipeline for one package.

    fetch_package_meta, resolve_version, then the registry entry; when
    probe_cff is set and the package's repository is on a supported host
    and serves a parseable CITATION.cff, its entries are appended. CFF
    trouble of any kind degrades to registry-only output with a warning;
    registry trouble propagates.

    Returns:
        Candidates in fixed order (registry, cff, cff-preferred) with
        distinct citation keys. Never empty.
    """
    meta = fetch_package_meta(name, config, cache)
    version = resolve_version(spec, meta.versions)

    registry_warnings: list[str] = []
    if version.yanked:
        registry_warnings.append(
            f"version {version.semver} of {name} has been yanked from the registry"
        )
    if version.published_by is None:
        registry_warnings.append(
            f"no publisher recorded for {name} {version.semver}; author field omitted"
        )

    candidates = [
        Candidate(
            entry=package_to_bib(meta, version, registry_base=config.base_url),
            origin=Origin(
                kind=OriginKind.REGISTRY,
                source_url=f"{config.base_url}/api/v1/crates/{name}",
            ),
            warnings=tuple(registry_warnings),
        )
    ]
    if probe_cff and meta.repository_url:
        candidates = _append_cff_candidates(
            candidates, meta, version, config, cache, branch
        )
    return _dedupe_keys(candidates)


def _append_cff_candidates(
    candidates: list[Candidate],
    meta: PackageMeta,
    version: VersionInfo,
    config: ClientConfig,
    cache: DiskCache,
    branch: str | None,
) -> list[Candidate]:
    """Probe and parse CITATION.cff; on any failure, attach a warning to the
    registry candidate instead of failing the run."""

    def degrade(text: str) -> list[Candidate]:
        head = candidates[0]
        return [dataclasses.replace(head, warnings=head.warnings + (text,))] + candidates[1:]

    assert meta.repository_url is not None
    try:
        locator = parse_repo_url(meta.repository_url)
    except MalformedUrlError as exc:
        return degrade(f"repository URL unusable ({exc.kind}): {exc}")
    if locator.host is Host.UNSUPPORTED:
        return degrade(
            f"repository host not supported for CITATION.cff probing: {meta.repository_url}"
        )
    try:
        fetched = fetch_citation_cff(locator, config, cache, extra_branch=branch)
    except (NetworkError, OfflineMissError) as exc:
        return degrade(f"CITATION.cff probe failed ({exc.kind}): {exc}")
    if fetched is None:
        return candidates

    try:
        document = parse_cff(fetched.raw_text)
    except CffError as exc:
        return degrade(f"CITATION.cff at {fetched.fetched_from} ignored ({exc.kind}): {exc}")

    cff_warnings: list[str] = []
    if not is_supported_cff_version(document.cff_version):
        cff_warnings.append(
            f"cff-version {document.cff_version or '(missing)'} is not 1.2.x; parsed anyway"
        )
    if document.version and document.version != version.semver:
        cff_warnings.append(
            f"CITATION.cff declares version {document.version} "
            f"but the registry resolved {version.semver}; keeping the CFF value"
        )

    entries = cff_to_bib(document, meta.name, version)
    origin_kinds = [OriginKind.CFF, OriginKind.CFF_PREFERRED]
    for entry, kind in zip(entries, origin_kinds):
        candidates.append(
            Candidate(
                entry=entry,
                origin=Origin(kind=kind, source_url=fetched.fetched_from),
                warnings=tuple(cff_warnings) if kind is OriginKind.CFF else (),
            )
        )
    return candidates
