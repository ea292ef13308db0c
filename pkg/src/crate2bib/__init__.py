"""Generate BibTeX entries for packages on a crates.io-style registry.

The typical entry point is :func:`gather_candidates`, which fetches registry
metadata, resolves the requested version, probes the source repository for a
CITATION.cff file, and returns one BibTeX candidate per available source.
"""

from crate2bib.bibtex import (
    BibEntry,
    escape_bibtex,
    generate_key,
    parse_entry,
    serialize,
    unescape_bibtex,
    unique_key,
)
from crate2bib.cache import CacheRecord, DiskCache, FetchMode
from crate2bib.cff import (
    AuthorKind,
    CffAuthor,
    CffDocument,
    PreferredCitation,
    is_supported_cff_version,
    parse_cff,
)
from crate2bib.convert import (
    Candidate,
    Origin,
    OriginKind,
    cff_to_bib,
    gather_candidates,
    package_to_bib,
)
from crate2bib.errors import (
    AllVersionsYankedError,
    BibtexSyntaxError,
    CffDateError,
    CffError,
    CffNotYamlError,
    CffSchemaError,
    Crate2BibError,
    InvalidNameError,
    MalformedResponseError,
    MalformedUrlError,
    NetworkError,
    NoMatchingVersionError,
    OfflineMissError,
    PackageNotFoundError,
    RateLimitedError,
    UnkeyableError,
    UnsupportedHostError,
)
from crate2bib.registry import (
    ClientConfig,
    PackageMeta,
    Publisher,
    VersionInfo,
    fetch_package_meta,
    resolve_version,
)
from crate2bib.repo import (
    CffFetchResult,
    Host,
    RepoLocator,
    fetch_citation_cff,
    parse_repo_url,
)
from crate2bib.semver import SemVer, parse_semver

__version__ = "0.1.0"

__all__ = [
    "AllVersionsYankedError",
    "AuthorKind",
    "BibEntry",
    "BibtexSyntaxError",
    "CacheRecord",
    "Candidate",
    "CffAuthor",
    "CffDateError",
    "CffDocument",
    "CffError",
    "CffFetchResult",
    "CffNotYamlError",
    "CffSchemaError",
    "ClientConfig",
    "Crate2BibError",
    "DiskCache",
    "FetchMode",
    "Host",
    "InvalidNameError",
    "MalformedResponseError",
    "MalformedUrlError",
    "NetworkError",
    "NoMatchingVersionError",
    "OfflineMissError",
    "Origin",
    "OriginKind",
    "PackageMeta",
    "PackageNotFoundError",
    "PreferredCitation",
    "Publisher",
    "RateLimitedError",
    "RepoLocator",
    "SemVer",
    "UnkeyableError",
    "UnsupportedHostError",
    "VersionInfo",
    "cff_to_bib",
    "escape_bibtex",
    "fetch_citation_cff",
    "fetch_package_meta",
    "gather_candidates",
    "generate_key",
    "is_supported_cff_version",
    "package_to_bib",
    "parse_cff",
    "parse_entry",
    "parse_repo_url",
    "parse_semver",
    "resolve_version",
    "serialize",
    "unescape_bibtex",
    "unique_key",
]
