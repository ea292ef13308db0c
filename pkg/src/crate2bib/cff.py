"""Parser for `CITATION.cff` documents (CFF 1.2.x subset).

Only the fields needed for bibliography output are modeled: title, authors,
version, DOI, release date, URLs, license, and the optional
``preferred-citation`` sub-record. Everything else in a CFF file is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from enum import Enum

import yaml

from crate2bib.errors import CffDateError, CffNotYamlError, CffSchemaError


class _CffLoader(yaml.SafeLoader):
    """SafeLoader without the implicit timestamp resolver.

    PyYAML would otherwise turn `date-released: 2024-05-01` into a date
    object (and crash on calendar-invalid ones); we want the raw string
    so date validation stays in one place and can report BadDate.
    """


_CffLoader.yaml_implicit_resolvers = {
    key: [(tag, regexp) for tag, regexp in resolvers if tag != "tag:yaml.org,2002:timestamp"]
    for key, resolvers in yaml.SafeLoader.yaml_implicit_resolvers.items()
}

_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}\Z")
_SUPPORTED_CFF_RE = re.compile(r"1\.2\.\d+\Z")


class AuthorKind(Enum):
    PERSON = "person"
    ENTITY = "entity"


@dataclass(frozen=True)
class CffAuthor:
    """One author record: a person (family/given names) or an entity."""

    kind: AuthorKind
    family_names: str | None = None
    given_names: str | None = None
    name: str | None = None
    orcid: str | None = None

    def __post_init__(self) -> None:
        if self.kind is AuthorKind.PERSON and not self.family_names:
            raise ValueError("person author requires family_names")
        if self.kind is AuthorKind.ENTITY and not self.name:
            raise ValueError("entity author requires name")

    def display_name(self) -> str:
        """Render as `Family, Given` (person) or the entity name."""
        if self.kind is AuthorKind.ENTITY:
            assert self.name is not None
            return self.name
        assert self.family_names is not None
        if self.given_names:
            return f"{self.family_names}, {self.given_names}"
        return self.family_names

    def key_stem(self) -> str:
        """The name part a citation key should be built from."""
        if self.kind is AuthorKind.ENTITY:
            return self.name or ""
        return self.family_names or ""

    def to_mapping(self) -> dict[str, str]:
        data: dict[str, str] = {}
        if self.kind is AuthorKind.PERSON:
            assert self.family_names is not None
            data["family-names"] = self.family_names
            if self.given_names is not None:
                data["given-names"] = self.given_names
        else:
            assert self.name is not None
            data["name"] = self.name
        if self.orcid is not None:
            data["orcid"] = self.orcid
        return data


@dataclass(frozen=True)
class PreferredCitation:
    """The `preferred-citation` sub-record: an existing publication the
    authors want cited instead of (or besides) the software itself."""

    entry_kind: str
    title: str
    authors: tuple[CffAuthor, ...]
    year: int | None = None
    doi: str | None = None
    journal: str | None = None
    volume: str | None = None
    pages: str | None = None
    url: str | None = None

    def to_mapping(self) -> dict[str, object]:
        data: dict[str, object] = {
            "type": self.entry_kind,
            "title": self.title,
            "authors": [author.to_mapping() for author in self.authors],
        }
        for key, value in (
            ("year", self.year),
            ("journal", self.journal),
            ("volume", self.volume),
            ("pages", self.pages),
            ("doi", self.doi),
            ("url", self.url),
        ):
            if value is not None:
                data[key] = value
        return data


@dataclass(frozen=True)
class CffDocument:
    """Parsed `CITATION.cff` content (recognized subset only)."""

    cff_version: str
    message: str
    title: str
    authors: tuple[CffAuthor, ...]
    version: str | None = None
    doi: str | None = None
    date_released: date | None = None
    url: str | None = None
    repository_code: str | None = None
    license: str | None = None
    preferred_citation: PreferredCitation | None = None

    def to_mapping(self) -> dict[str, object]:
        """Rebuild the alias-keyed mapping a YAML emitter can serialize.

        parse_cff(yaml.dump(doc.to_mapping())) equals doc; the round trip
        is exercised by the test suite.
        """
        data: dict[str, object] = {
            "cff-version": self.cff_version,
            "message": self.message,
            "title": self.title,
            "authors": [author.to_mapping() for author in self.authors],
        }
        for key, value in (
            ("version", self.version),
            ("doi", self.doi),
            ("date-released", None if self.date_released is None else self.date_released.isoformat()),
            ("url", self.url),
            ("repository-code", self.repository_code),
            ("license", self.license),
        ):
            if value is not None:
                data[key] = value
        if self.preferred_citation is not None:
            data["preferred-citation"] = self.preferred_citation.to_mapping()
        return data


def is_supported_cff_version(cff_version: str) -> bool:
    """True for the 1.2.x line this parser was written against."""
    return _SUPPORTED_CFF_RE.match(cff_version) is not None


def _scalar_str(value: object) -> str | None:
    """Coerce a YAML scalar to str; None for anything non-scalar.

    Unquoted versions like `version: 1.2` arrive as floats and are kept as
    their decimal spelling. Booleans are rejected: `license: yes` is a typo,
    not a license.
    """
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return str(value)
    return None


def _parse_date(value: object, where: str) -> date:
    if isinstance(value, date):
        return value
    text = _scalar_str(value)
    if text is None or not _DATE_RE.match(text):
        raise CffDateError(f"{where} must be an ISO-8601 date (YYYY-MM-DD), got {value!r}")
    try:
        return date.fromisoformat(text)
    except ValueError as exc:
        raise CffDateError(f"{where}: {exc}") from exc


def _parse_authors(raw: object, where: str) -> tuple[CffAuthor, ...]:
    if not isinstance(raw, list) or not raw:
        raise CffSchemaError(f"{where}.authors must be a non-empty list")
    authors: list[CffAuthor] = []
    for index, item in enumerate(raw):
        label = f"{where}.authors[{index}]"
        if not isinstance(item, dict):
            raise CffSchemaError(f"{label} must be a mapping")
        family = _scalar_str(item.get("family-names"))
        given = _scalar_str(item.get("given-names"))
        name = _scalar_str(item.get("name"))
        orcid = _scalar_str(item.get("orcid"))
        if family:
            authors.append(
                CffAuthor(
                    kind=AuthorKind.PERSON,
                    family_names=family,
                    given_names=given,
                    orcid=orcid,
                )
            )
        elif name:
            authors.append(CffAuthor(kind=AuthorKind.ENTITY, name=name, orcid=orcid))
        else:
            raise CffSchemaError(f"{label} needs either family-names or name")
    return tuple(authors)


def _parse_title(raw: object, where: str) -> str:
    title = _scalar_str(raw)
    if not title:
        raise CffSchemaError(f"{where}.title is missing or empty")
    return title


def _parse_year(value: object, where: str) -> int | None:
    if value is None:
        return None
    if isinstance(value, bool):
        raise CffSchemaError(f"{where}.year must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.isdigit():
        return int(value)
    raise CffSchemaError(f"{where}.year must be an integer, got {value!r}")


def _parse_preferred_citation(raw: object) -> PreferredCitation:
    where = "preferred-citation"
    if not isinstance(raw, dict):
        raise CffSchemaError(f"{where} must be a mapping")
    entry_kind = _scalar_str(raw.get("type"))
    if not entry_kind:
        raise CffSchemaError(f"{where}.type is missing")
    return PreferredCitation(
        entry_kind=entry_kind,
        title=_parse_title(raw.get("title"), where),
        authors=_parse_authors(raw.get("authors"), where),
        year=_parse_year(raw.get("year"), where),
        doi=_scalar_str(raw.get("doi")),
        journal=_scalar_str(raw.get("journal")),
        volume=_scalar_str(raw.get("volume")),
        pages=_scalar_str(raw.get("pages")),
        url=_scalar_str(raw.get("url")),
    )


def parse_cff(raw_text: str) -> CffDocument:
    """Parse CFF YAML text into a CffDocument.

    Unrecognized keys are ignored; the alias keys `cff-version`,
    `date-released`, `repository-code`, `preferred-citation`,
    `family-names`, `given-names` map onto the snake_case fields.

    Args:
        raw_text: full text of a CITATION.cff file.

    Returns:
        The populated document.

    Raises:
        CffNotYamlError: text is not a well-formed YAML mapping.
        CffSchemaError: missing/empty title or authors, an author with
            neither family-names nor name, or a malformed
            preferred-citation.
        CffDateError: date-released present but not a valid date.
    """
    try:
        data = yaml.load(raw_text, Loader=_CffLoader)
    except yaml.YAMLError as exc:
        raise CffNotYamlError(f"not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise CffNotYamlError("CITATION.cff must be a YAML mapping")

    raw_date = data.get("date-released")
    preferred = data.get("preferred-citation")
    return CffDocument(
        cff_version=_scalar_str(data.get("cff-version")) or "",
        message=_scalar_str(data.get("message")) or "",
        title=_parse_title(data.get("title"), "document"),
        authors=_parse_authors(data.get("authors"), "document"),
        version=_scalar_str(data.get("version")),
        doi=_scalar_str(data.get("doi")),
        date_released=None if raw_date is None else _parse_date(raw_date, "date-released"),
        url=_scalar_str(data.get("url")),
        repository_code=_scalar_str(data.get("repository-code")),
        license=_scalar_str(data.get("license")),
        preferred_citation=None if preferred is None else _parse_preferred_citation(preferred),
    )
