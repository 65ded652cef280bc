/** HTML renderers: pure (bundle, state) -> string. Event wiring happens in
 * app.ts through data-* attributes. */
import { barChart, histogramChart, lineChart } from "./charts.js";
import { monthKeys } from "./bundleLoader.js";
import { allTags, compareVM, detailVM, overviewVM, recommendVM, } from "./viewModels.js";
function esc(text) {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}
const COLOR_A = "#1565c0";
const COLOR_B = "#e65100";
export function renderNav(bundle, state) {
    const views = [
        ["overview", "Industry overview"],
        ["detail", "Platform detail"],
        ["compare", "Compare"],
        ["recommend", "Recommend"],
    ];
    const tabs = views
        .map(([view, label]) => `<button class="tab ${state.view === view ? "active" : ""}" data-view="${view}">${label}</button>`)
        .join("");
    const months = monthKeys(bundle)
        .map((key) => `<option value="${key}" ${state.month === key ? "selected" : ""}>${esc(bundle.rankings.months[key].label)}</option>`)
        .join("");
    return `${tabs}<select id="month-picker" title="ranking month">${months}</select>`;
}
export function renderOverview(bundle, state) {
    const vm = overviewVM(bundle, state);
    if (vm.empty) {
        return `<div class="empty">No ranked platforms for this month. Load a bundle with rankings to begin.</div>`;
    }
    const rows = vm.rows
        .map((row) => `
      <tr data-id="${row.id}" class="${state.selected.includes(row.id) ? "selected" : ""}">
        <td>${row.rank}</td>
        <td><button class="link" data-detail="${row.id}">${esc(row.name)}</button></td>
        <td>${row.score.toFixed(4)}</td>
        <td><span class="badge ${row.status}">${row.status}</span></td>
        <td>${esc(row.region)}</td>
        <td>${row.rate === null ? "–" : row.rate.toFixed(2)}</td>
        <td>${row.tags.map((t) => `<span class="tag">${esc(t)}</span>`).join(" ")}</td>
        <td><button class="pick" data-pick="${row.id}">${state.selected.includes(row.id) ? "picked" : "pick"}</button></td>
      </tr>`)
        .join("");
    const report = vm.report;
    const metrics = report
        ? `<div class="cards">
        <div class="card"><div class="metric">${(report.accuracy * 100).toFixed(1)}%</div>labeling accuracy</div>
        <div class="card"><div class="metric">${report.auc.toFixed(3)}</div>AUC</div>
        ${report.baseline_auc !== null ? `<div class="card"><div class="metric">${report.baseline_auc.toFixed(3)}</div>logistic baseline AUC</div>` : ""}
        <div class="card"><div class="metric">${report.n_platforms}</div>platforms scored</div>
      </div>`
        : "";
    const histogram = report
        ? histogramChart(report.histogram.normal, report.histogram.problem)
        : "";
    const buckets = report
        ? `<table class="mini"><tr><th>bucket</th><th>next-month failure %</th><th>mean rate %</th></tr>${report.buckets
            .map((b) => `<tr><td>${b.limit === null ? "all" : `top ${b.limit}`}</td><td>${b.failure_pct.toFixed(2)}</td><td>${b.mean_interest_rate.toFixed(2)}</td></tr>`)
            .join("")}</table>`
        : "";
    return `
    <h2>Industry overview: ${esc(vm.monthLabel)}</h2>
    ${metrics}
    <div class="row">
      <div>${histogram}</div>
      <div>${barChart(vm.regionCounts.slice(0, 12), "platforms by region")}</div>
    </div>
    ${buckets}
    <table class="ranking">
      <tr><th>#</th><th>platform</th><th>score</th><th>status</th><th>region</th><th>rate %</th><th>tags</th><th></th></tr>
      ${rows}
    </table>`;
}
export function renderDetail(bundle, state) {
    const vm = detailVM(bundle, state);
    if ("error" in vm) {
        return `<div class="empty">${esc(vm.error)}. Pick a platform from the overview.</div>`;
    }
    const numerics = Object.entries(vm.profile.static_numeric)
        .map(([name, value]) => `<tr><td>${esc(name)}</td><td>${value === null ? "–" : value.toFixed(2)}</td></tr>`)
        .join("");
    const kg = vm.kgFeatures
        .map((f) => `<tr><td>${esc(f.name)}</td><td>${f.value.toFixed(2)}</td></tr>`)
        .join("");
    const charts = vm.channels
        .map((channel) => {
        const labels = channel.points.map(([m]) => String(m));
        return lineChart(labels, [
            { label: channel.name, color: COLOR_A, values: channel.points.map(([, v]) => v) },
        ], channel.name);
    })
        .join("");
    const related = vm.related
        .map((r) => `<li><button class="link" data-detail="${r.platform_id}">${esc(r.name)}</button> (similarity ${r.jaccard.toFixed(2)})</li>`)
        .join("");
    return `
    <h2>${esc(vm.profile.name)} <span class="badge ${vm.profile.status}">${vm.profile.status}</span></h2>
    <p>online since ${esc(vm.profile.online_label)} · rank ${vm.rank ?? "–"} · score ${vm.score?.toFixed(4) ?? "–"}</p>
    <div class="row">
      <div>
        <h3>Profile</h3>
        <table class="mini">
          <tr><td>nature</td><td>${esc(vm.profile.nature ?? "missing")}</td></tr>
          <tr><td>region</td><td>${esc(vm.profile.region ?? "missing")}</td></tr>
          <tr><td>guarantee mode</td><td>${esc(vm.profile.guarantee_mode ?? "missing")}</td></tr>
          ${numerics}
        </table>
        <h3>Graph signals</h3>
        <table class="mini">${kg}</table>
        <p>${vm.profile.tags.map((t) => `<span class="tag">${esc(t)}</span>`).join(" ")}</p>
        ${vm.profile.missing_fields.length ? `<p class="warn">missing fields: ${vm.profile.missing_fields.map(esc).join(", ")}</p>` : ""}
        <h3>Similar platforms</h3>
        <ul>${related}</ul>
      </div>
      <div>${charts}</div>
    </div>`;
}
export function renderCompare(bundle, state) {
    const vm = compareVM(bundle, state);
    if ("error" in vm) {
        return `<div class="empty">${esc(vm.error)}. Pick two platforms from the overview.</div>`;
    }
    const charts = vm.channels
        .map((channel) => lineChart(channel.months.map(String), [
        { label: vm.a.name, color: COLOR_A, values: channel.a },
        { label: vm.b.name, color: COLOR_B, values: channel.b },
    ], channel.name))
        .join("");
    const fields = vm.numericFields
        .map((f) => `<tr><td>${esc(f.name)}</td><td>${f.a === null ? "–" : f.a.toFixed(2)}</td><td>${f.b === null ? "–" : f.b.toFixed(2)}</td></tr>`)
        .join("");
    return `
    <h2>Compare</h2>
    <table class="mini compare-head">
      <tr><th></th><th style="color:${COLOR_A}">${esc(vm.a.name)}</th><th style="color:${COLOR_B}">${esc(vm.b.name)}</th></tr>
      <tr><td>rank</td><td>${vm.rankA ?? "–"}</td><td>${vm.rankB ?? "–"}</td></tr>
      <tr><td>score</td><td>${vm.scoreA?.toFixed(4) ?? "–"}</td><td>${vm.scoreB?.toFixed(4) ?? "–"}</td></tr>
      <tr><td>status</td><td>${vm.a.status}</td><td>${vm.b.status}</td></tr>
      <tr><td>nature</td><td>${esc(vm.a.nature ?? "missing")}</td><td>${esc(vm.b.nature ?? "missing")}</td></tr>
      <tr><td>region</td><td>${esc(vm.a.region ?? "missing")}</td><td>${esc(vm.b.region ?? "missing")}</td></tr>
      ${fields}
    </table>
    ${charts}`;
}
export function renderRecommend(bundle, state, bucket) {
    const tags = allTags(bundle)
        .map((tag) => `<label class="tag-check"><input type="checkbox" data-tag="${esc(tag)}" ${state.tags.includes(tag) ? "checked" : ""}/> ${esc(tag)}</label>`)
        .join("");
    const buckets = [
        ["20", "top 20"],
        ["50", "top 50"],
        ["100", "top 100"],
        ["", "all ranked"],
    ];
    const bucketPicker = buckets
        .map(([value, label]) => `<label><input type="radio" name="bucket" value="${value}" ${(bucket === null ? "" : String(bucket)) === value ? "checked" : ""}/> ${label}</label>`)
        .join(" ");
    const rows = recommendVM(bundle, state, bucket)
        .map((row) => `
      <tr>
        <td>${row.rank}</td>
        <td><button class="link" data-detail="${row.id}">${esc(row.name)}</button></td>
        <td>${row.score.toFixed(4)}</td>
        <td>${row.jaccard.toFixed(2)}</td>
        <td>${row.tags.map((t) => `<span class="tag ${state.tags.includes(t) ? "hit" : ""}">${esc(t)}</span>`).join(" ")}</td>
      </tr>`)
        .join("");
    return `
    <h2>Recommend</h2>
    <p>Pick your preferences; the list re-ranks by tag match within your risk bucket.</p>
    <div class="controls"><strong>risk bucket:</strong> ${bucketPicker}</div>
    <div class="controls tags">${tags}</div>
    <table class="ranking">
      <tr><th>rank</th><th>platform</th><th>score</th><th>tag match</th><th>tags</th></tr>
      ${rows}
    </table>`;
}
export function renderErrorBanner(errors) {
    return `<div class="banner error"><strong>Bundle load failed.</strong><ul>${errors
        .slice(0, 8)
        .map((e) => `<li>${esc(e)}</li>`)
        .join("")}</ul></div>`;
}
