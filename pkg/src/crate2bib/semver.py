"""Semantic-version parsing and ordering (semver.org 2.0.0 precedence)."""

from __future__ import annotations

import re
from dataclasses import dataclass

# The grammar published at semver.org, anchored.
_SEMVER_RE = re.compile(
    r"^(?P<major>0|[1-9]\d*)"
    r"\.(?P<minor>0|[1-9]\d*)"
    r"\.(?P<patch>0|[1-9]\d*)"
    r"(?:-(?P<prerelease>(?:0|[1-9]\d*|\d*[a-zA-Z-][0-9a-zA-Z-]*)"
    r"(?:\.(?:0|[1-9]\d*|\d*[a-zA-Z-][0-9a-zA-Z-]*))*))?"
    r"(?:\+(?P<build>[0-9a-zA-Z-]+(?:\.[0-9a-zA-Z-]+)*))?$"
)


@dataclass(frozen=True)
class SemVer:
    """A parsed semantic version.

    ``prerelease`` holds the dot-separated identifiers; an empty tuple means
    a stable release. ``build`` metadata never participates in precedence.
    """

    major: int
    minor: int
    patch: int
    prerelease: tuple[str, ...] = ()
    build: str | None = None

    @property
    def is_prerelease(self) -> bool:
        return bool(self.prerelease)

    def precedence_key(self) -> tuple:
        """Key implementing semver precedence for sorting and max().

        A stable release outranks any pre-release of the same triple.
        Pre-release identifiers compare numerically when numeric, lexically
        otherwise, with numeric identifiers ranking below alphanumeric ones.
        """
        ids = tuple(
            (0, int(part), "") if part.isdigit() else (1, 0, part)
            for part in self.prerelease
        )
        return (self.major, self.minor, self.patch, 0 if self.prerelease else 1, ids)

    def __lt__(self, other: "SemVer") -> bool:
        return self.precedence_key() < other.precedence_key()


def parse_semver(text: str) -> SemVer | None:
    """Parse ``text`` as a semantic version, or return None if it is not one."""
    match = _SEMVER_RE.match(text)
    if match is None:
        return None
    prerelease = match.group("prerelease")
    return SemVer(
        major=int(match.group("major")),
        minor=int(match.group("minor")),
        patch=int(match.group("patch")),
        prerelease=tuple(prerelease.split(".")) if prerelease else (),
        build=match.group("build"),
    )
