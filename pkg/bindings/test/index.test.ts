import { execFile } from "node:child_process";
import { createHash } from "node:crypto";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { promisify } from "node:util";

import { describe, expect, it } from "vitest";

import {
  Crate2BibError,
  get_bib_entries,
  parseCliOutput,
} from "../src/index.js";

const here = fileURLToPath(new URL(".", import.meta.url));
const FIXTURES = path.resolve(here, "../../tests/data/registry");
const CLI = process.env.CRATE2BIB_CLI ?? "crate2bib";

const TWO_BLOCKS =
  "% origin: registry https://crates.io/api/v1/crates/demo\n" +
  "@software{Doe2025,\n  title = {demo},\n}\n" +
  "\n" +
  "% origin: cff https://raw.githubusercontent.com/o/demo/main/CITATION.cff\n" +
  "@software{Doe2024,\n  title = {demo},\n}\n";

// Plant one record in the CLI's documented cache layout: files named by the
// sha256 hex of the URL, a JSON envelope plus the raw body.
function seedCache(dir: string, url: string, status: number, body: Buffer): void {
  const digest = createHash("sha256").update(url, "utf-8").digest("hex");
  const fetchedAt = new Date().toISOString().replace("Z", "+00:00");
  writeFileSync(
    path.join(dir, `${digest}.json`),
    JSON.stringify({ url, status, fetched_at: fetchedAt, ttl_seconds: 86400 }),
  );
  writeFileSync(path.join(dir, `${digest}.body`), body);
}

function seedFluxline(dir: string): void {
  const api = "https://crates.io/api/v1/crates/fluxline";
  seedCache(dir, api, 200, readFileSync(path.join(FIXTURES, "fluxline_crate.json")));
  seedCache(
    dir,
    `${api}/versions`,
    200,
    readFileSync(path.join(FIXTURES, "fluxline_versions.json")),
  );
  seedCache(
    dir,
    "https://raw.githubusercontent.com/acme/fluxline/main/CITATION.cff",
    200,
    readFileSync(path.join(FIXTURES, "fluxline_CITATION.cff")),
  );
}

function freshCacheDir(): string {
  return mkdtempSync(path.join(tmpdir(), "crate2bib-bindings-"));
}

describe("parseCliOutput", () => {
  it("splits blocks and keeps entry text verbatim", () => {
    const candidates = parseCliOutput(TWO_BLOCKS);
    expect(candidates).toHaveLength(2);
    expect(candidates[0].origin).toBe("registry");
    expect(candidates[0].sourceUrl).toBe("https://crates.io/api/v1/crates/demo");
    expect(candidates[0].bibtex).toBe("@software{Doe2025,\n  title = {demo},\n}\n");
    expect(candidates[1].origin).toBe("cff");
    expect(candidates[1].bibtex).toBe("@software{Doe2024,\n  title = {demo},\n}\n");
  });

  it("reassembles to the exact input", () => {
    const rebuilt = parseCliOutput(TWO_BLOCKS)
      .map((c) => `% origin: ${c.origin} ${c.sourceUrl}\n${c.bibtex}`)
      .join("\n");
    expect(rebuilt).toBe(TWO_BLOCKS);
  });

  it("returns nothing for empty input", () => {
    expect(parseCliOutput("")).toEqual([]);
  });
});

describe("get_bib_entries", () => {
  it("serves the full pipeline from a seeded cache", async () => {
    const cacheDir = freshCacheDir();
    seedFluxline(cacheDir);
    const { candidates, warnings } = await get_bib_entries("fluxline", {
      offline: true,
      cacheDir,
    });
    expect(candidates.map((c) => c.origin)).toEqual([
      "registry",
      "cff",
      "cff-preferred",
    ]);
    expect(candidates[0].bibtex).toContain("url = {https://crates.io/crates/fluxline}");
    expect(candidates[1].bibtex).toMatch(/^@software\{Hartmann2024,\n/);
    expect(candidates[2].bibtex).toMatch(/^@article\{Hartmann2024a,\n/);
    // CFF declares 0.3.0 while the registry resolves 0.4.0
    expect(warnings.some((w) => w.includes("0.3.0"))).toBe(true);
  });

  it("returns entries byte-identical to the CLI's stdout", async () => {
    const cacheDir = freshCacheDir();
    seedFluxline(cacheDir);
    const args = ["fluxline", "--offline", "--cache-dir", cacheDir];
    const { stdout } = await promisify(execFile)(CLI, args, { encoding: "utf-8" });
    const { candidates } = await get_bib_entries("fluxline", {
      offline: true,
      cacheDir,
    });
    const rebuilt = candidates
      .map((c) => `% origin: ${c.origin} ${c.sourceUrl}\n${c.bibtex}`)
      .join("\n");
    expect(rebuilt).toBe(stdout);
  });

  it("passes version requests and --no-cff through", async () => {
    const cacheDir = freshCacheDir();
    seedFluxline(cacheDir);
    const { candidates } = await get_bib_entries("fluxline", {
      version: "0.3.1",
      probeCff: false,
      offline: true,
      cacheDir,
    });
    expect(candidates).toHaveLength(1);
    expect(candidates[0].bibtex).toContain("version = {0.3.1}");
  });

  it("maps an offline cache miss to its error kind", async () => {
    const err = await get_bib_entries("fluxline", {
      offline: true,
      cacheDir: freshCacheDir(),
    }).then(
      () => null,
      (e: unknown) => e,
    );
    expect(err).toBeInstanceOf(Crate2BibError);
    expect((err as Crate2BibError).kind).toBe("OfflineMiss");
    expect((err as Crate2BibError).exitCode).toBe(3);
  });

  it("maps an invalid package name to a usage failure", async () => {
    const err = await get_bib_entries("Not/A/Name", {
      offline: true,
      cacheDir: freshCacheDir(),
    }).then(
      () => null,
      (e: unknown) => e,
    );
    expect(err).toBeInstanceOf(Crate2BibError);
    expect((err as Crate2BibError).kind).toBe("InvalidName");
    expect((err as Crate2BibError).exitCode).toBe(2);
  });

  it("reports a missing executable as a spawn failure", async () => {
    const err = await get_bib_entries("anything", {
      cli: "/nonexistent/crate2bib",
    }).then(
      () => null,
      (e: unknown) => e,
    );
    expect((err as Crate2BibError).kind).toBe("Spawn");
  });
});
