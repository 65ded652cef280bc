import assert from "node:assert/strict";
import { test } from "node:test";

import { latestMonth, monthKeys, validateBundle } from "../src/bundleLoader.js";
import { handBundle, rawFiles } from "./fixtures.js";

test("valid hand-built bundle loads", () => {
  const result = validateBundle(rawFiles(handBundle()));
  assert.ok(result.ok, JSON.stringify(result));
  if (result.ok) {
    assert.equal(result.bundle.platforms.platforms.length, 5);
  }
});

test("rankings referencing an unknown platform are rejected", () => {
  const bundle = handBundle();
  bundle.rankings.months["550"].entries.push({ platform_id: "ghost", score: 0.5, rank: 6 });
  const result = validateBundle(rawFiles(bundle));
  assert.ok(!result.ok);
  if (!result.ok) {
    assert.ok(result.errors.some((e) => e.includes("ghost")), result.errors.join("; "));
  }
});

test("wrong schema version is rejected", () => {
  const bundle = handBundle();
  (bundle.reports as { schema_version: number }).schema_version = 2;
  const result = validateBundle(rawFiles(bundle));
  assert.ok(!result.ok);
  if (!result.ok) {
    assert.ok(result.errors.some((e) => e.includes("schema_version")));
  }
});

test("missing file is reported by name", () => {
  const raw = rawFiles(handBundle());
  delete (raw as Record<string, unknown>)["series"];
  const result = validateBundle(raw);
  assert.ok(!result.ok);
  if (!result.ok) {
    assert.ok(result.errors.some((e) => e.startsWith("series.json")));
  }
});

test("related entry with unknown platform is rejected", () => {
  const bundle = handBundle();
  bundle.related.related["ghost"] = { tags: [], related: [] };
  const result = validateBundle(rawFiles(bundle));
  assert.ok(!result.ok);
});

test("score outside [0,1] is rejected", () => {
  const bundle = handBundle();
  bundle.rankings.months["550"].entries[0].score = 1.5;
  const result = validateBundle(rawFiles(bundle));
  assert.ok(!result.ok);
});

test("month keys sort numerically and latest wins", () => {
  const bundle = handBundle();
  assert.deepEqual(monthKeys(bundle), ["549", "550"]);
  assert.equal(latestMonth(bundle), "550");
});

test("empty rankings still load (explicit empty state downstream)", () => {
  const bundle = handBundle();
  bundle.rankings.months = {};
  const result = validateBundle(rawFiles(bundle));
  assert.ok(result.ok);
  if (result.ok) assert.equal(latestMonth(result.bundle), null);
});
