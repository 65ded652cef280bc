/** Hand-built SVG chart strings; no chart library. Null points break line
 * paths, so missing months render as gaps rather than zeros. */

const WIDTH = 560;
const HEIGHT = 180;
const PAD = { left: 52, right: 12, top: 12, bottom: 24 };

export interface LineSeries {
  label: string;
  color: string;
  values: (number | null)[];
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function extent(series: LineSeries[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const v of s.values) {
      if (v === null) continue;
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (!isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  return [lo, hi];
}

export function lineChart(labels: string[], series: LineSeries[], title = ""): string {
  const [lo, hi] = extent(series);
  const innerW = WIDTH - PAD.left - PAD.right;
  const innerH = HEIGHT - PAD.top - PAD.bottom;
  const x = (i: number) =>
    PAD.left + (labels.length <= 1 ? innerW / 2 : (i / (labels.length - 1)) * innerW);
  const y = (v: number) => PAD.top + innerH - ((v - lo) / (hi - lo)) * innerH;

  const paths = series
    .map((s) => {
      let d = "";
      let pen = false;
      s.values.forEach((v, i) => {
        if (v === null) {
          pen = false; // gap: lift the pen
          return;
        }
        d += `${pen ? "L" : "M"}${x(i).toFixed(1)},${y(v).toFixed(1)}`;
        pen = true;
      });
      const dots = s.values
        .map((v, i) =>
          v !== null && (i === 0 || s.values[i - 1] === null) && (i === s.values.length - 1 || s.values[i + 1] === null)
            ? `<circle cx="${x(i).toFixed(1)}" cy="${y(v).toFixed(1)}" r="2.5" fill="${s.color}"/>`
            : "",
        )
        .join("");
      return `<path d="${d}" fill="none" stroke="${s.color}" stroke-width="1.8"/>${dots}`;
    })
    .join("");

  const firstLabel = labels[0] ?? "";
  const lastLabel = labels[labels.length - 1] ?? "";
  const legend = series
    .map(
      (s, i) =>
        `<g transform="translate(${PAD.left + i * 140},${HEIGHT - 4})">` +
        `<rect width="10" height="10" y="-9" fill="${s.color}"/>` +
        `<text x="14" font-size="10">${esc(s.label)}</text></g>`,
    )
    .join("");
  return (
    `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" class="chart" role="img" aria-label="${esc(title)}">` +
    `<text x="${PAD.left}" y="10" font-size="10" class="chart-title">${esc(title)}</text>` +
    `<line x1="${PAD.left}" y1="${PAD.top + innerH}" x2="${WIDTH - PAD.right}" y2="${PAD.top + innerH}" stroke="#999"/>` +
    `<text x="${PAD.left}" y="${HEIGHT - 28}" font-size="9" fill="#666">${esc(firstLabel)}</text>` +
    `<text x="${WIDTH - PAD.right}" y="${HEIGHT - 28}" font-size="9" fill="#666" text-anchor="end">${esc(lastLabel)}</text>` +
    `<text x="${PAD.left - 4}" y="${y(hi) + 4}" font-size="9" fill="#666" text-anchor="end">${hi.toPrecision(3)}</text>` +
    `<text x="${PAD.left - 4}" y="${y(lo) + 4}" font-size="9" fill="#666" text-anchor="end">${lo.toPrecision(3)}</text>` +
    paths +
    legend +
    `</svg>`
  );
}

export function histogramChart(normal: number[], problem: number[], title = "score distribution"): string {
  const bins = Math.max(normal.length, problem.length);
  const innerW = WIDTH - PAD.left - PAD.right;
  const innerH = HEIGHT - PAD.top - PAD.bottom;
  const peak = Math.max(1, ...normal, ...problem);
  const band = innerW / bins;
  const bars: string[] = [];
  for (let i = 0; i < bins; i++) {
    const nHeight = ((normal[i] ?? 0) / peak) * innerH;
    const pHeight = ((problem[i] ?? 0) / peak) * innerH;
    const x0 = PAD.left + i * band;
    bars.push(
      `<rect x="${(x0 + 2).toFixed(1)}" y="${(PAD.top + innerH - nHeight).toFixed(1)}" width="${(band / 2 - 3).toFixed(1)}" height="${nHeight.toFixed(1)}" fill="#2e7d32"/>`,
      `<rect x="${(x0 + band / 2 + 1).toFixed(1)}" y="${(PAD.top + innerH - pHeight).toFixed(1)}" width="${(band / 2 - 3).toFixed(1)}" height="${pHeight.toFixed(1)}" fill="#c62828"/>`,
    );
  }
  const ticks = [0, 0.5, 1.0]
    .map((t) => {
      const x0 = PAD.left + t * innerW;
      return `<text x="${x0}" y="${HEIGHT - 8}" font-size="9" fill="#666" text-anchor="middle">${t}</text>`;
    })
    .join("");
  return (
    `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" class="chart" role="img" aria-label="${esc(title)}">` +
    `<text x="${PAD.left}" y="10" font-size="10" class="chart-title">${esc(title)}</text>` +
    `<line x1="${PAD.left}" y1="${PAD.top + innerH}" x2="${WIDTH - PAD.right}" y2="${PAD.top + innerH}" stroke="#999"/>` +
    bars.join("") +
    ticks +
    `<g transform="translate(${WIDTH - 180},${PAD.top})"><rect width="10" height="10" fill="#2e7d32"/><text x="14" y="9" font-size="10">normal</text>` +
    `<rect x="70" width="10" height="10" fill="#c62828"/><text x="84" y="9" font-size="10">problem</text></g>` +
    `</svg>`
  );
}

export function barChart(items: { label: string; count: number }[], title = ""): string {
  const innerW = WIDTH - PAD.left - PAD.right;
  const rowH = 16;
  const height = PAD.top + 18 + items.length * rowH + 6;
  const peak = Math.max(1, ...items.map((i) => i.count));
  const rows = items
    .map((item, i) => {
      const y0 = PAD.top + 16 + i * rowH;
      const w = (item.count / peak) * (innerW - 120);
      return (
        `<text x="${PAD.left}" y="${y0 + 10}" font-size="10">${esc(item.label)}</text>` +
        `<rect x="${PAD.left + 90}" y="${y0 + 2}" width="${w.toFixed(1)}" height="${rowH - 6}" fill="#1565c0"/>` +
        `<text x="${PAD.left + 94 + w}" y="${y0 + 10}" font-size="10" fill="#333">${item.count}</text>`
      );
    })
    .join("");
  return (
    `<svg viewBox="0 0 ${WIDTH} ${height}" class="chart" role="img" aria-label="${esc(title)}">` +
    `<text x="${PAD.left}" y="10" font-size="10" class="chart-title">${esc(title)}</text>` +
    rows +
    `</svg>`
  );
}
