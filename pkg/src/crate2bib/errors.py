"""Exception hierarchy for crate2bib.

Every error carries a stable ``kind`` string so frontends (CLI exit codes,
foreign-language bindings) can dispatch on it without string-matching
messages.
"""

from __future__ import annotations


class Crate2BibError(Exception):
    """Base class for all errors raised by this package."""

    kind = "Error"


class InvalidNameError(Crate2BibError):
    """The package name is not a syntactically valid registry name."""

    kind = "InvalidName"


class PackageNotFoundError(Crate2BibError):
    """The registry has no package by this name (HTTP 404)."""

    kind = "NotFound"


class RateLimitedError(Crate2BibError):
    """The registry told us to back off (HTTP 429)."""

    kind = "RateLimited"


class NetworkError(Crate2BibError):
    """Transport-level failure or an unexpected HTTP status."""

    kind = "Network"


class MalformedResponseError(Crate2BibError):
    """A response body could not be parsed into the expected shape."""

    kind = "Malformed"


class NoMatchingVersionError(Crate2BibError):
    """No published version satisfies the version request."""

    kind = "NoMatch"


class AllVersionsYankedError(Crate2BibError):
    """Versions match the request, but every one of them is yanked."""

    kind = "AllYanked"


class MalformedUrlError(Crate2BibError):
    """A repository URL could not be split into host/owner/repo."""

    kind = "MalformedUrl"


class UnsupportedHostError(Crate2BibError):
    """The repository is hosted somewhere we cannot probe."""

    kind = "Unsupported"


class CffError(Crate2BibError):
    """Base class for citation-file parsing errors."""

    kind = "Cff"


class CffNotYamlError(CffError):
    """The citation file is not a well-formed YAML mapping."""

    kind = "NotYaml"


class CffSchemaError(CffError):
    """The citation file is YAML but violates the required schema subset."""

    kind = "SchemaViolation"


class CffDateError(CffError):
    """A release date is present but does not parse as YYYY-MM-DD."""

    kind = "BadDate"


class UnkeyableError(Crate2BibError):
    """A citation-key stem stripped down to nothing usable."""

    kind = "Unkeyable"


class BibtexSyntaxError(Crate2BibError):
    """Text could not be parsed as a single BibTeX entry."""

    kind = "Syntax"


class OfflineMissError(Crate2BibError):
    """Offline mode was requested but the cache has no fresh record."""

    kind = "OfflineMiss"
