"""Command-line frontend: one package in, BibTeX candidates out.

stdout carries nothing but BibTeX entries and `%` comment lines, so
`crate2bib foo > foo.bib` yields a usable bibliography file. Warnings and
errors go to stderr; the exit code tells scripts what happened (0 entries
emitted, 1 package/version unresolvable, 2 usage, 3 network).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from crate2bib.bibtex import serialize
from crate2bib.cache import DEFAULT_TTL_SECONDS, DiskCache
from crate2bib.convert import Candidate, gather_candidates
from crate2bib.errors import Crate2BibError
from crate2bib.registry import ClientConfig

CLI_USER_AGENT = "crate2bib-cli (contact: <none>)"

_EXIT_CODES = {
    "InvalidName": 2,
    "NotFound": 1,
    "NoMatch": 1,
    "AllYanked": 1,
    "Network": 3,
    "RateLimited": 3,
    "Malformed": 3,
    "OfflineMiss": 3,
}


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crate2bib",
        description="Generate BibTeX entries for a package published on a "
        "crates.io-style registry, including any CITATION.cff its repository provides.",
    )
    parser.add_argument("package", help="package name on the registry")
    parser.add_argument(
        "version",
        nargs="?",
        default=None,
        help="version request: 'latest' (default), exact X.Y.Z, or partial X / X.Y",
    )
    parser.add_argument("--out", metavar="PATH", help="write entries to PATH instead of stdout")
    parser.add_argument(
        "--no-cff", action="store_true", help="skip the repository CITATION.cff probe"
    )
    parser.add_argument(
        "--branch", metavar="NAME", help="try this branch before main/master when probing"
    )
    parser.add_argument(
        "--user-agent",
        metavar="STRING",
        default=CLI_USER_AGENT,
        help=f"User-Agent header for all requests (default: {CLI_USER_AGENT!r})",
    )
    parser.add_argument(
        "--offline", action="store_true", help="serve everything from the cache; never hit the network"
    )
    parser.add_argument(
        "--cache-dir",
        metavar="PATH",
        default=None,
        help="cache directory (default: $CRATE2BIB_CACHE_DIR, else the platform cache home)",
    )
    parser.add_argument(
        "--ttl",
        metavar="SECONDS",
        type=_nonnegative_int,
        default=DEFAULT_TTL_SECONDS,
        help=f"cache freshness window in seconds (default {DEFAULT_TTL_SECONDS})",
    )
    parser.add_argument(
        "--registry",
        metavar="BASE_URL",
        default="https://crates.io",
        help="registry base URL (default https://crates.io)",
    )
    return parser


def render_candidates(candidates: list[Candidate]) -> str:
    """Serialize candidates, each under a `% origin:` comment line, with a
    blank line between entries."""
    blocks = [
        f"% origin: {c.origin.kind.value} {c.origin.source_url}\n{serialize(c.entry)}"
        for c in candidates
    ]
    return "\n".join(blocks)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = ClientConfig(
            base_url=args.registry.rstrip("/"),
            user_agent=args.user_agent,
            offline=args.offline,
            cache_ttl_seconds=args.ttl,
        )
        cache = DiskCache(args.cache_dir)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        candidates = gather_candidates(
            args.package,
            args.version,
            config,
            cache,
            probe_cff=not args.no_cff,
            branch=args.branch,
        )
    except Crate2BibError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return _EXIT_CODES.get(exc.kind, 1)

    for candidate in candidates:
        for warning in candidate.warnings:
            print(f"warning: {warning}", file=sys.stderr)

    output = render_candidates(candidates)
    if args.out:
        try:
            Path(args.out).write_text(output, encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(output)
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
