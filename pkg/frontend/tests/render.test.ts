import assert from "node:assert/strict";
import { test } from "node:test";

import { lineChart, histogramChart, barChart } from "../src/charts.js";
import {
  renderCompare,
  renderDetail,
  renderErrorBanner,
  renderOverview,
  renderRecommend,
} from "../src/render.js";
import { initialState } from "../src/viewModels.js";
import { handBundle } from "./fixtures.js";

test("line chart breaks the path at null values (gap, not zero)", () => {
  const svg = lineChart(["1", "2", "3", "4"], [
    { label: "s", color: "#000", values: [1, null, 3, 4] },
  ]);
  const d = /d="([^"]*)"/.exec(svg)![1];
  const moves = d.match(/M/g) ?? [];
  assert.equal(moves.length, 2, `expected two pen-down segments, got path ${d}`);
  assert.ok(!d.includes("NaN"));
});

test("line chart with no data stays well-formed", () => {
  const svg = lineChart([], [{ label: "s", color: "#000", values: [] }]);
  assert.ok(svg.startsWith("<svg"));
  assert.ok(!svg.includes("NaN"));
});

test("histogram renders a bar per bin and label text escapes", () => {
  const svg = histogramChart([1, 0, 2], [0, 1, 0], 'a "title" <tag>');
  assert.equal((svg.match(/<rect/g) ?? []).length, 3 * 2 + 2); // bins*2 + legend
  assert.ok(svg.includes("&quot;title&quot;"));
  assert.ok(!svg.includes("<tag>"));
});

test("bar chart sizes bars by count", () => {
  const svg = barChart([
    { label: "r1", count: 4 },
    { label: "r2", count: 2 },
  ]);
  assert.ok(svg.includes(">4</text>") && svg.includes(">2</text>"));
});

test("overview html contains ranking rows and metrics", () => {
  const bundle = handBundle();
  const html = renderOverview(bundle, initialState(bundle));
  assert.ok(html.includes("Platform p1"));
  assert.ok(html.includes("2015-11"));
  assert.ok(html.includes("labeling accuracy"));
  assert.ok(html.includes('data-pick="p1"'));
});

test("overview renders an explicit empty state", () => {
  const bundle = handBundle();
  bundle.rankings.months = {};
  const html = renderOverview(bundle, { view: "overview", selected: [], tags: [], month: null });
  assert.ok(html.includes("No ranked platforms"));
});

test("detail html shows profile and similar platforms", () => {
  const bundle = handBundle();
  const html = renderDetail(bundle, { view: "detail", selected: ["p1"], tags: [], month: "550" });
  assert.ok(html.includes("Platform p1"));
  assert.ok(html.includes("Similar platforms"));
  assert.ok(html.includes("Platform p2"));
});

test("compare html renders two aligned charts and a head-to-head table", () => {
  const bundle = handBundle();
  const html = renderCompare(bundle, { view: "compare", selected: ["p1", "p2"], tags: [], month: "550" });
  assert.ok(html.includes("Platform p1") && html.includes("Platform p2"));
  assert.ok(html.includes("volume"));
  assert.ok((html.match(/<svg/g) ?? []).length >= 1);
});

test("compare with a bad selection surfaces the message", () => {
  const bundle = handBundle();
  const html = renderCompare(bundle, { view: "compare", selected: ["p1", "p1"], tags: [], month: "550" });
  assert.ok(html.includes("two different platforms"));
});

test("recommend html marks matching tags and respects the bucket", () => {
  const bundle = handBundle();
  const html = renderRecommend(
    bundle,
    { view: "recommend", selected: [], tags: ["tag_a"], month: "550" },
    20,
  );
  assert.ok(html.includes("tag hit") || html.includes('class="tag hit"'));
  assert.ok(html.includes("Platform p2"));
});

test("error banner lists load problems", () => {
  const html = renderErrorBanner(["rankings.json: HTTP 404", "series.json: bad"]);
  assert.ok(html.includes("Bundle load failed"));
  assert.ok(html.includes("rankings.json: HTTP 404"));
});
