import { execFile } from "node:child_process";

export type OriginKind = "registry" | "cff" | "cff-preferred";

export interface BibCandidate {
  origin: OriginKind;
  /** URL the entry was derived from (registry API or raw CITATION.cff). */
  sourceUrl: string;
  /** One serialized BibTeX entry, byte-identical to the CLI's output. */
  bibtex: string;
}

export interface GatherResult {
  candidates: BibCandidate[];
  warnings: string[];
}

export interface GetBibEntriesOptions {
  /** 'latest' (default), exact X.Y.Z, or partial X / X.Y. */
  version?: string;
  /** Probe the repository for CITATION.cff (default true). */
  probeCff?: boolean;
  offline?: boolean;
  branch?: string;
  userAgent?: string;
  cacheDir?: string;
  ttlSeconds?: number;
  registry?: string;
  /** CLI executable; falls back to $CRATE2BIB_CLI, then "crate2bib". */
  cli?: string;
  timeoutMs?: number;
}

/** Failure reported by the CLI, carrying its error kind and exit code. */
export class Crate2BibError extends Error {
  constructor(
    readonly kind: string,
    message: string,
    readonly exitCode: number,
  ) {
    super(message);
    this.name = "Crate2BibError";
  }
}

const ORIGIN_LINE = /^% origin: (\S+) (\S+)$/gm;
const ERROR_LINE = /^error: ([A-Za-z]+): (.*)$/m;

/**
 * Split CLI stdout into candidates.
 *
 * Each block is `% origin: <kind> <url>` followed by one entry; blocks are
 * separated by a single blank line. The bibtex strings are exact slices of
 * the input, so reassembling them reproduces the CLI output byte for byte.
 */
export function parseCliOutput(stdout: string): BibCandidate[] {
  const headers = [...stdout.matchAll(ORIGIN_LINE)];
  return headers.map((header, i) => {
    const start = header.index + header[0].length + 1;
    const end = i + 1 < headers.length ? headers[i + 1].index : stdout.length;
    let bibtex = stdout.slice(start, end);
    if (bibtex.endsWith("}\n\n")) {
      bibtex = bibtex.slice(0, -1);
    }
    return { origin: header[1] as OriginKind, sourceUrl: header[2], bibtex };
  });
}

function buildArgs(pkg: string, opts: GetBibEntriesOptions): string[] {
  const args = [pkg];
  if (opts.version !== undefined) args.push(opts.version);
  if (opts.probeCff === false) args.push("--no-cff");
  if (opts.offline) args.push("--offline");
  if (opts.branch !== undefined) args.push("--branch", opts.branch);
  if (opts.userAgent !== undefined) args.push("--user-agent", opts.userAgent);
  if (opts.cacheDir !== undefined) args.push("--cache-dir", opts.cacheDir);
  if (opts.ttlSeconds !== undefined) args.push("--ttl", String(opts.ttlSeconds));
  if (opts.registry !== undefined) args.push("--registry", opts.registry);
  return args;
}

function run(
  cli: string,
  args: string[],
  timeoutMs: number,
): Promise<{ code: number; stdout: string; stderr: string }> {
  return new Promise((resolve, reject) => {
    execFile(
      cli,
      args,
      { encoding: "utf-8", timeout: timeoutMs, maxBuffer: 16 * 1024 * 1024 },
      (error, stdout, stderr) => {
        if (error && typeof error.code !== "number") {
          // spawn failure (missing executable, timeout kill), not a CLI exit
          reject(new Crate2BibError("Spawn", error.message, -1));
          return;
        }
        resolve({ code: error ? (error.code as number) : 0, stdout, stderr });
      },
    );
  });
}

/**
 * Generate BibTeX entry candidates for one registry package by invoking
 * the crate2bib CLI.
 *
 * Rejects with Crate2BibError when the CLI exits non-zero; its `kind`
 * mirrors the CLI's `error: <kind>: <message>` line (or "Usage" for
 * argument problems that carry no kind).
 */
export async function get_bib_entries(
  pkg: string,
  options: GetBibEntriesOptions = {},
): Promise<GatherResult> {
  const cli = options.cli ?? process.env.CRATE2BIB_CLI ?? "crate2bib";
  const { code, stdout, stderr } = await run(
    cli,
    buildArgs(pkg, options),
    options.timeoutMs ?? 120_000,
  );
  if (code !== 0) {
    const match = ERROR_LINE.exec(stderr);
    const kind = match ? match[1] : "Usage";
    const message = match ? match[2] : stderr.trim() || `exit code ${code}`;
    throw new Crate2BibError(kind, message, code);
  }
  const warnings = stderr
    .split("\n")
    .filter((line) => line.startsWith("warning: "))
    .map((line) => line.slice("warning: ".length));
  return { candidates: parseCliOutput(stdout), warnings };
}
