"""BibTeX entry model: citation keys, escaping, serialization, parsing.

Entries hold raw (unescaped) field values. ``serialize`` applies the escape
rules on the way out and ``parse_entry`` undoes them on the way back in, so
``parse_entry(serialize(e)) == e`` holds for every valid entry.
"""

from __future__ import annotations

import itertools
import re
import string
import unicodedata
from dataclasses import dataclass, field

from crate2bib.errors import BibtexSyntaxError, UnkeyableError

CITATION_KEY_RE = re.compile(r"[A-Za-z][A-Za-z0-9:_-]*\Z")
_ENTRY_TYPE_RE = re.compile(r"[a-z][a-z0-9-]*\Z")
_FIELD_NAME_RE = re.compile(r"[a-z][a-z0-9_-]*\Z")

# Fields are always emitted in this order; anything else follows alphabetically.
CANONICAL_FIELD_ORDER = (
    "author",
    "title",
    "version",
    "year",
    "month",
    "journal",
    "volume",
    "pages",
    "doi",
    "url",
    "license",
    "note",
)

_ESCAPES = {
    "&": r"\&",
    "%": r"\%",
    "$": r"\$",
    "#": r"\#",
    "_": r"\_",
    "{": r"\{",
    "}": r"\}",
    "~": r"\textasciitilde{}",
    "^": r"\textasciicircum{}",
    "\\": r"\textbackslash{}",
}
# Longest first so the control-word forms win over the two-char escapes.
_UNESCAPE_SEQUENCES = sorted(
    ((seq, raw) for raw, seq in _ESCAPES.items()), key=lambda p: -len(p[0])
)


@dataclass(frozen=True)
class BibEntry:
    """One BibTeX entry: a type tag, a citation key, and named fields.

    Field values are raw text; escaping happens at serialization time.
    Instances are immutable and validated on construction.
    """

    entry_type: str
    key: str
    fields: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not _ENTRY_TYPE_RE.match(self.entry_type):
            raise ValueError(f"invalid entry type: {self.entry_type!r}")
        if not CITATION_KEY_RE.match(self.key):
            raise ValueError(f"invalid citation key: {self.key!r}")
        for name, value in self.fields.items():
            if not _FIELD_NAME_RE.match(name):
                raise ValueError(f"invalid field name: {name!r}")
            if not isinstance(value, str):
                raise ValueError(f"field {name!r} value must be a string")


def escape_bibtex(value: str) -> str:
    """Escape a raw value for inclusion in a brace-delimited BibTeX field.

    ``& % $ # _ { }`` get a backslash; ``~ ^ \\`` become their textual
    control sequences. Everything else, Unicode included, passes through.
    """
    return "".join(_ESCAPES.get(ch, ch) for ch in value)


def unescape_bibtex(text: str) -> str:
    """Invert :func:`escape_bibtex`.

    Backslash sequences that this tool never emits are left untouched, so
    the function is total and idempotent composed with a re-serialize.
    """
    out: list[str] = []
    i = 0
    while i < len(text):
        if text[i] == "\\":
            for seq, raw in _UNESCAPE_SEQUENCES:
                if text.startswith(seq, i):
                    out.append(raw)
                    i += len(seq)
                    break
            else:
                out.append(text[i])
                i += 1
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


def _canonical_items(fields: dict[str, str]) -> list[tuple[str, str]]:
    head = [name for name in CANONICAL_FIELD_ORDER if name in fields]
    tail = sorted(name for name in fields if name not in CANONICAL_FIELD_ORDER)
    return [(name, fields[name]) for name in head + tail]


def serialize(entry: BibEntry) -> str:
    """Render an entry to its canonical, byte-deterministic text form."""
    lines = [f"@{entry.entry_type}{{{entry.key},"]
    for name, value in _canonical_items(entry.fields):
        lines.append(f"  {name} = {{{escape_bibtex(value)}}},")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_entry(text: str) -> BibEntry:
    """Parse exactly one BibTeX entry, inverting :func:`serialize`.

    Raises:
        BibtexSyntaxError: on unbalanced braces, a missing key, a malformed
            field, or trailing content after the entry.
    """
    pos = 0
    length = len(text)

    def skip_ws() -> None:
        nonlocal pos
        while pos < length and text[pos].isspace():
            pos += 1

    def take_until(stops: str, what: str) -> str:
        nonlocal pos
        start = pos
        while pos < length and text[pos] not in stops:
            pos += 1
        if pos >= length:
            raise BibtexSyntaxError(f"unterminated {what}")
        return text[start:pos]

    skip_ws()
    if pos >= length or text[pos] != "@":
        raise BibtexSyntaxError("entry must start with '@'")
    pos += 1
    entry_type = take_until("{", "entry type").strip()
    if not entry_type:
        raise BibtexSyntaxError("missing entry type")
    pos += 1  # consume '{'
    key = take_until(",{}", "citation key").strip()
    if pos >= length or text[pos] != ",":
        raise BibtexSyntaxError("missing ',' after citation key")
    if not key:
        raise BibtexSyntaxError("missing citation key")
    pos += 1

    fields: dict[str, str] = {}
    while True:
        skip_ws()
        if pos >= length:
            raise BibtexSyntaxError("unterminated entry")
        if text[pos] == "}":
            pos += 1
            break
        name = take_until("=", "field name").strip()
        if not name:
            raise BibtexSyntaxError("missing field name")
        if name in fields:
            raise BibtexSyntaxError(f"duplicate field: {name}")
        pos += 1  # consume '='
        skip_ws()
        if pos >= length or text[pos] != "{":
            raise BibtexSyntaxError(f"field {name!r} value must be brace-delimited")
        pos += 1
        depth = 1
        buf: list[str] = []
        while depth > 0:
            if pos >= length:
                raise BibtexSyntaxError("unbalanced braces in field value")
            ch = text[pos]
            if ch == "\\" and pos + 1 < length:
                buf.append(ch)
                buf.append(text[pos + 1])
                pos += 2
                continue
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    pos += 1
                    break
            buf.append(ch)
            pos += 1
        fields[name] = unescape_bibtex("".join(buf))
        skip_ws()
        if pos < length and text[pos] == ",":
            pos += 1
        elif pos < length and text[pos] != "}":
            raise BibtexSyntaxError("expected ',' or '}' after field value")

    if text[pos:].strip():
        raise BibtexSyntaxError("trailing content after entry")
    try:
        return BibEntry(entry_type=entry_type, key=key, fields=fields)
    except ValueError as exc:
        raise BibtexSyntaxError(str(exc)) from exc


def _key_suffixes():
    for width in itertools.count(1):
        for letters in itertools.product(string.ascii_lowercase, repeat=width):
            yield "".join(letters)


def unique_key(base: str, taken_keys: set[str]) -> str:
    """Return ``base``, or the first ``base + 'a'..'z','aa'..`` not in taken_keys."""
    if base not in taken_keys:
        return base
    for suffix in _key_suffixes():
        candidate = base + suffix
        if candidate not in taken_keys:
            return candidate
    raise AssertionError("unreachable")


def key_stem(name: str) -> str:
    """Reduce a name to citation-key characters.

    Diacritics are decomposed away (NFKD) and anything outside ``[A-Za-z0-9]``
    is dropped, so ``"van der Berg"`` becomes ``"vanderBerg"`` and ``"Müller"``
    becomes ``"Muller"``.
    """
    decomposed = unicodedata.normalize("NFKD", name)
    return "".join(ch for ch in decomposed if ch.isascii() and ch.isalnum())


def generate_key(primary_family_name: str, year: int, taken_keys: set[str]) -> str:
    """Build a ``FamilyNameYear`` citation key, disambiguating collisions.

    Args:
        primary_family_name: Family name of the first author.
        year: Four-digit publication year.
        taken_keys: Keys already used; the result is guaranteed not in it.

    Raises:
        UnkeyableError: if the name strips to nothing usable as a key.
    """
    if not 1000 <= year <= 9999:
        raise ValueError(f"year must be a 4-digit integer, got {year!r}")
    stem = key_stem(primary_family_name)
    if not stem:
        raise UnkeyableError(f"name {primary_family_name!r} strips to an empty key stem")
    if not stem[0].isalpha():
        raise UnkeyableError(f"key stem {stem!r} does not start with a letter")
    return unique_key(f"{stem}{year}", taken_keys)
