/** App shell: loads the bundle, holds the single ViewState, re-renders on
 * every interaction. Failed loads keep the previous bundle on screen. */
import { fetchBundle } from "./bundleLoader.js";
import {
  renderCompare,
  renderDetail,
  renderErrorBanner,
  renderNav,
  renderOverview,
  renderRecommend,
} from "./render.js";
import { initialState } from "./viewModels.js";
import { Bundle, ViewName, ViewState } from "./types.js";

let bundle: Bundle | null = null;
let state: ViewState | null = null;
let bucket: number | null = 20;

const nav = document.getElementById("nav")!;
const mainEl = document.getElementById("main")!;
const banner = document.getElementById("banner")!;
const status = document.getElementById("status")!;

function render(): void {
  if (!bundle || !state) return;
  nav.innerHTML = renderNav(bundle, state);
  switch (state.view) {
    case "overview":
      mainEl.innerHTML = renderOverview(bundle, state);
      break;
    case "detail":
      mainEl.innerHTML = renderDetail(bundle, state);
      break;
    case "compare":
      mainEl.innerHTML = renderCompare(bundle, state);
      break;
    case "recommend":
      mainEl.innerHTML = renderRecommend(bundle, state, bucket);
      break;
  }
  status.textContent = state.selected.length
    ? `selected: ${state.selected.join(", ")}`
    : "";
}

function update(next: Partial<ViewState>): void {
  if (!state) return;
  state = { ...state, ...next };
  render();
}

document.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  if (!state) return;
  const view = target.dataset["view"];
  if (view) {
    update({ view: view as ViewName });
    return;
  }
  const detailId = target.dataset["detail"];
  if (detailId) {
    update({ view: "detail", selected: [detailId] });
    return;
  }
  const pick = target.dataset["pick"];
  if (pick) {
    const selected = state.selected.includes(pick)
      ? state.selected.filter((s) => s !== pick)
      : [...state.selected, pick].slice(-2);
    update({ selected });
    return;
  }
});

document.addEventListener("change", (event) => {
  const target = event.target as HTMLInputElement | HTMLSelectElement;
  if (!state) return;
  if (target.id === "month-picker") {
    update({ month: target.value });
    return;
  }
  if (target instanceof HTMLInputElement && target.dataset["tag"]) {
    const tag = target.dataset["tag"]!;
    const tags = target.checked
      ? [...state.tags, tag]
      : state.tags.filter((t) => t !== tag);
    update({ tags });
    return;
  }
  if (target instanceof HTMLInputElement && target.name === "bucket") {
    bucket = target.value === "" ? null : Number(target.value);
    render();
  }
});

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("bundle") ?? ".";
  status.textContent = `loading bundle from ${base} …`;
  const result = await fetchBundle(base);
  if (!result.ok) {
    banner.innerHTML = renderErrorBanner(result.errors);
    status.textContent = bundle ? "kept previously loaded data" : "no data loaded";
    return;
  }
  banner.innerHTML = "";
  bundle = result.bundle;
  state = initialState(bundle);
  render();
}

document.getElementById("reload")!.addEventListener("click", () => void boot());
void boot();
