import assert from "node:assert/strict";
import { test } from "node:test";

import {
  compareVM,
  detailVM,
  initialState,
  overviewVM,
  recommendVM,
  tagJaccard,
  toggleSelection,
} from "../src/viewModels.js";
import { ViewState } from "../src/types.js";
import { handBundle } from "./fixtures.js";

function state(overrides: Partial<ViewState> = {}): ViewState {
  return { view: "overview", selected: [], tags: [], month: "550", ...overrides };
}

test("overview lists the full ranking for the latest month", () => {
  const bundle = handBundle();
  const vm = overviewVM(bundle, initialState(bundle));
  assert.equal(vm.monthLabel, "2015-11");
  assert.deepEqual(vm.rows.map((r) => r.id), ["p1", "p2", "p3", "p4", "p5"]);
  assert.equal(vm.rows[0].rank, 1);
  assert.ok(!vm.empty);
});

test("overview for an earlier month uses that month's entries", () => {
  const vm = overviewVM(handBundle(), state({ month: "549" }));
  assert.deepEqual(vm.rows.map((r) => r.id), ["p2", "p1"]);
});

test("overview flags the empty state", () => {
  const bundle = handBundle();
  bundle.rankings.months = {};
  const vm = overviewVM(bundle, state({ month: null }));
  assert.ok(vm.empty);
});

test("detail requires exactly one selection", () => {
  const bundle = handBundle();
  assert.ok("error" in detailVM(bundle, state({ selected: [] })));
  assert.ok("error" in detailVM(bundle, state({ selected: ["p1", "p2"] })));
  const vm = detailVM(bundle, state({ selected: ["p1"] }));
  assert.ok(!("error" in vm));
  if (!("error" in vm)) {
    assert.equal(vm.rank, 1);
    assert.equal(vm.related[0].platform_id, "p2");
  }
});

test("compare requires two distinct known platforms", () => {
  const bundle = handBundle();
  assert.ok("error" in compareVM(bundle, state({ selected: ["p1"] })));
  assert.ok("error" in compareVM(bundle, state({ selected: ["p1", "p1"] })));
  assert.ok("error" in compareVM(bundle, state({ selected: ["p1", "nope"] })));
});

test("compare aligns both series on a shared month axis", () => {
  const vm = compareVM(handBundle(), state({ selected: ["p1", "p2"] }));
  assert.ok(!("error" in vm));
  if ("error" in vm) return;
  const volume = vm.channels.find((c) => c.name === "volume")!;
  assert.deepEqual(volume.months, [546, 547, 548, 549, 550]);
  assert.deepEqual(volume.a, [100, 110, 120, 125, 130]);
  // p2 has no point at 548: a gap (null), never a zero
  assert.deepEqual(volume.b, [90, 95, null, 105, 108]);
});

test("compare against a platform with no series keeps months from the other", () => {
  const vm = compareVM(handBundle(), state({ selected: ["p1", "p4"] }));
  assert.ok(!("error" in vm));
  if ("error" in vm) return;
  const volume = vm.channels.find((c) => c.name === "volume")!;
  assert.deepEqual(volume.b, [null, null, null, null, null]);
});

test("exact tag match ranks first within the bucket", () => {
  const bundle = handBundle();
  // tags {tag_a}: p2 has exactly {tag_a} (J=1), p1 has {tag_a,tag_b} (J=1/2)
  const rows = recommendVM(bundle, state({ tags: ["tag_a"] }), null);
  assert.equal(rows[0].id, "p2");
  assert.equal(rows[1].id, "p1");
  assert.equal(rows[0].jaccard, 1.0);
  assert.equal(rows[1].jaccard, 0.5);
});

test("bucket filter keeps only platforms ranked within the bucket", () => {
  const rows = recommendVM(handBundle(), state({ tags: [] }), 3);
  assert.deepEqual(rows.map((r) => r.id), ["p1", "p2", "p3"]);
  assert.ok(rows.every((r) => r.rank <= 3));
});

test("empty tag set falls back to rank order", () => {
  const rows = recommendVM(handBundle(), state({ tags: [] }), null);
  assert.deepEqual(rows.map((r) => r.rank), [1, 2, 3, 4, 5]);
});

test("tag jaccard hand values", () => {
  assert.equal(tagJaccard(["t1"], ["t1", "t2"]), 0.5);
  assert.equal(tagJaccard(["t1"], ["t1"]), 1.0);
  assert.equal(tagJaccard([], []), 0);
});

test("selection toggling caps at two picks", () => {
  let s = state();
  s = toggleSelection(s, "p1");
  s = toggleSelection(s, "p2");
  s = toggleSelection(s, "p3");
  assert.deepEqual(s.selected, ["p2", "p3"]);
  s = toggleSelection(s, "p3");
  assert.deepEqual(s.selected, ["p2"]);
});
