/** Bundle validation: schema versions, shapes, referential integrity.
 * A load never throws; it returns either the validated bundle or the list
 * of problems, so the app can keep showing previously loaded data. */
import { Bundle, SCHEMA_VERSION } from "./types.js";

export type LoadResult =
  | { ok: true; bundle: Bundle }
  | { ok: false; errors: string[] };

function isObject(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function checkVersion(name: string, data: unknown, errors: string[]): boolean {
  if (!isObject(data)) {
    errors.push(`${name}: not a JSON object`);
    return false;
  }
  if (data["schema_version"] !== SCHEMA_VERSION) {
    errors.push(`${name}: unsupported schema_version ${String(data["schema_version"])}`);
    return false;
  }
  return true;
}

export function validateBundle(raw: Record<string, unknown>): LoadResult {
  const errors: string[] = [];
  const names = ["rankings", "platforms", "series", "reports", "related"];
  for (const name of names) {
    if (!(name in raw)) errors.push(`${name}.json: missing`);
  }
  if (errors.length) return { ok: false, errors };
  for (const name of names) {
    checkVersion(`${name}.json`, raw[name], errors);
  }
  if (errors.length) return { ok: false, errors };

  const bundle = raw as unknown as Bundle;
  if (!Array.isArray(bundle.platforms.platforms)) {
    return { ok: false, errors: ["platforms.json: platforms is not a list"] };
  }
  const known = new Set(bundle.platforms.platforms.map((p) => p.id));
  if (!isObject(bundle.rankings.months)) {
    return { ok: false, errors: ["rankings.json: months is not an object"] };
  }
  for (const [month, payload] of Object.entries(bundle.rankings.months)) {
    if (!Array.isArray(payload.entries)) {
      errors.push(`rankings.json: month ${month} has no entries list`);
      continue;
    }
    for (const entry of payload.entries) {
      if (!known.has(entry.platform_id)) {
        errors.push(`rankings.json: month ${month} references unknown platform ${entry.platform_id}`);
      }
      if (typeof entry.score !== "number" || entry.score < 0 || entry.score > 1) {
        errors.push(`rankings.json: ${entry.platform_id} has invalid score`);
      }
    }
  }
  for (const pid of Object.keys(bundle.related.related ?? {})) {
    if (!known.has(pid)) errors.push(`related.json: unknown platform ${pid}`);
  }
  if (!Array.isArray(bundle.reports.reports)) {
    errors.push("reports.json: reports is not a list");
  }
  return errors.length ? { ok: false, errors } : { ok: true, bundle };
}

/** Months sorted ascending by index key; the last one is "latest". */
export function monthKeys(bundle: Bundle): string[] {
  return Object.keys(bundle.rankings.months).sort((a, b) => Number(a) - Number(b));
}

export function latestMonth(bundle: Bundle): string | null {
  const keys = monthKeys(bundle);
  return keys.length ? keys[keys.length - 1] : null;
}

export async function fetchBundle(baseUrl: string): Promise<LoadResult> {
  const raw: Record<string, unknown> = {};
  const errors: string[] = [];
  const files: [string, string][] = [
    ["rankings", "rankings.json"],
    ["platforms", "platforms.json"],
    ["series", "series.json"],
    ["reports", "reports.json"],
    ["related", "related.json"],
  ];
  for (const [key, file] of files) {
    try {
      const response = await fetch(`${baseUrl}/${file}`);
      if (!response.ok) {
        errors.push(`${file}: HTTP ${response.status}`);
        continue;
      }
      raw[key] = await response.json();
    } catch (exc) {
      errors.push(`${file}: ${exc instanceof Error ? exc.message : String(exc)}`);
    }
  }
  if (errors.length) return { ok: false, errors };
  return validateBundle(raw);
}
