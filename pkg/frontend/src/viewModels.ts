/** Pure view models: every number shown in the UI is looked up from the
 * bundle, never recomputed. All functions are pure in (bundle, state). */
import { latestMonth } from "./bundleLoader.js";
import {
  Bundle,
  EvaluationReport,
  PlatformProfile,
  RankingEntry,
  ViewState,
} from "./types.js";

export const KG_FEATURE_NAMES = [
  "missing attribute kinds",
  "max similarity to problem platforms",
  "problem platforms sharing an officer",
  "problem platforms in the same region",
];

export function initialState(bundle: Bundle): ViewState {
  return { view: "overview", selected: [], tags: [], month: latestMonth(bundle) };
}

export function profileOf(bundle: Bundle, id: string): PlatformProfile | undefined {
  return bundle.platforms.platforms.find((p) => p.id === id);
}

export function rankingFor(bundle: Bundle, state: ViewState): RankingEntry[] {
  const month = state.month ?? latestMonth(bundle);
  if (month === null) return [];
  return bundle.rankings.months[month]?.entries ?? [];
}

export function toggleSelection(state: ViewState, id: string, max = 2): ViewState {
  const selected = state.selected.includes(id)
    ? state.selected.filter((s) => s !== id)
    : [...state.selected, id].slice(-max);
  return { ...state, selected };
}

// --- overview ---------------------------------------------------------------

export interface OverviewRow {
  rank: number;
  id: string;
  name: string;
  score: number;
  status: string;
  region: string;
  rate: number | null;
  tags: string[];
}

export interface OverviewVM {
  monthLabel: string;
  rows: OverviewRow[];
  regionCounts: { label: string; count: number }[];
  report: EvaluationReport | null;
  empty: boolean;
}

export function overviewVM(bundle: Bundle, state: ViewState): OverviewVM {
  const month = state.month ?? latestMonth(bundle);
  const payload = month !== null ? bundle.rankings.months[month] : undefined;
  const entries = payload?.entries ?? [];
  const rows: OverviewRow[] = [];
  for (const entry of entries) {
    const profile = profileOf(bundle, entry.platform_id);
    if (!profile) continue;
    rows.push({
      rank: entry.rank,
      id: profile.id,
      name: profile.name,
      score: entry.score,
      status: profile.status,
      region: profile.region ?? "unknown",
      rate: profile.static_numeric["interest_rate"] ?? null,
      tags: profile.tags,
    });
  }
  const regionTally = new Map<string, number>();
  for (const row of rows) {
    regionTally.set(row.region, (regionTally.get(row.region) ?? 0) + 1);
  }
  const regionCounts = [...regionTally.entries()]
    .map(([label, count]) => ({ label, count }))
    .sort((a, b) => b.count - a.count || a.label.localeCompare(b.label));
  const report =
    bundle.reports.reports.find((r) => String(r.cutoff_month) === month) ??
    bundle.reports.reports[bundle.reports.reports.length - 1] ??
    null;
  return {
    monthLabel: payload?.label ?? "no data",
    rows,
    regionCounts,
    report,
    empty: rows.length === 0,
  };
}

// --- detail -----------------------------------------------------------------

export interface DetailVM {
  profile: PlatformProfile;
  rank: number | null;
  score: number | null;
  channels: { name: string; points: [number, number][] }[];
  newsPerMonth: [number, number][];
  commentsPerMonth: [number, number][];
  kgFeatures: { name: string; value: number }[];
  related: { platform_id: string; jaccard: number; name: string }[];
}

export function detailVM(bundle: Bundle, state: ViewState): DetailVM | { error: string } {
  if (state.selected.length !== 1) {
    return { error: `detail view needs exactly 1 selected platform, got ${state.selected.length}` };
  }
  const id = state.selected[0];
  const profile = profileOf(bundle, id);
  if (!profile) return { error: `unknown platform ${id}` };
  const entry = rankingFor(bundle, state).find((e) => e.platform_id === id);
  const series = bundle.series.series[id];
  const related = (bundle.related.related[id]?.related ?? []).map((r) => ({
    ...r,
    name: profileOf(bundle, r.platform_id)?.name ?? r.platform_id,
  }));
  return {
    profile,
    rank: entry?.rank ?? null,
    score: entry?.score ?? null,
    channels: Object.entries(series?.channels ?? {}).map(([name, points]) => ({ name, points })),
    newsPerMonth: series?.news_per_month ?? [],
    commentsPerMonth: series?.comments_per_month ?? [],
    kgFeatures: (profile.kg_features ?? []).map((value, i) => ({
      name: KG_FEATURE_NAMES[i] ?? `feature ${i}`,
      value,
    })),
    related,
  };
}

// --- compare ----------------------------------------------------------------

export interface AlignedChannel {
  name: string;
  months: number[];
  /** one value per month; null = no data that month (rendered as a gap) */
  a: (number | null)[];
  b: (number | null)[];
}

export interface CompareVM {
  a: PlatformProfile;
  b: PlatformProfile;
  rankA: number | null;
  rankB: number | null;
  scoreA: number | null;
  scoreB: number | null;
  channels: AlignedChannel[];
  numericFields: { name: string; a: number | null; b: number | null }[];
}

export function compareVM(bundle: Bundle, state: ViewState): CompareVM | { error: string } {
  if (state.selected.length !== 2) {
    return { error: `compare needs exactly 2 selected platforms, got ${state.selected.length}` };
  }
  const [idA, idB] = state.selected;
  if (idA === idB) return { error: "pick two different platforms" };
  const a = profileOf(bundle, idA);
  const b = profileOf(bundle, idB);
  if (!a || !b) return { error: "unknown platform selected" };

  const seriesA = bundle.series.series[idA]?.channels ?? {};
  const seriesB = bundle.series.series[idB]?.channels ?? {};
  const names = [...new Set([...Object.keys(seriesA), ...Object.keys(seriesB)])].sort();
  const channels: AlignedChannel[] = names.map((name) => {
    const mapA = new Map(seriesA[name] ?? []);
    const mapB = new Map(seriesB[name] ?? []);
    const months = [...new Set([...mapA.keys(), ...mapB.keys()])].sort((x, y) => x - y);
    return {
      name,
      months,
      a: months.map((m) => mapA.get(m) ?? null),
      b: months.map((m) => mapB.get(m) ?? null),
    };
  });
  const ranking = rankingFor(bundle, state);
  const entryA = ranking.find((e) => e.platform_id === idA);
  const entryB = ranking.find((e) => e.platform_id === idB);
  const fields = [...new Set([...Object.keys(a.static_numeric), ...Object.keys(b.static_numeric)])].sort();
  return {
    a,
    b,
    rankA: entryA?.rank ?? null,
    rankB: entryB?.rank ?? null,
    scoreA: entryA?.score ?? null,
    scoreB: entryB?.score ?? null,
    channels,
    numericFields: fields.map((name) => ({
      name,
      a: a.static_numeric[name] ?? null,
      b: b.static_numeric[name] ?? null,
    })),
  };
}

// --- recommend ----------------------------------------------------------------

export function tagJaccard(a: string[], b: string[]): number {
  const setA = new Set(a);
  const setB = new Set(b);
  if (setA.size === 0 && setB.size === 0) return 0;
  let intersection = 0;
  for (const tag of setA) if (setB.has(tag)) intersection += 1;
  const union = setA.size + setB.size - intersection;
  return union === 0 ? 0 : intersection / union;
}

export interface RecommendRow {
  id: string;
  name: string;
  rank: number;
  score: number;
  tags: string[];
  jaccard: number;
}

export function recommendVM(
  bundle: Bundle,
  state: ViewState,
  bucket: number | null,
): RecommendRow[] {
  const entries = rankingFor(bundle, state).filter(
    (e) => bucket === null || e.rank <= bucket,
  );
  const rows: RecommendRow[] = [];
  for (const entry of entries) {
    const profile = profileOf(bundle, entry.platform_id);
    if (!profile) continue;
    rows.push({
      id: profile.id,
      name: profile.name,
      rank: entry.rank,
      score: entry.score,
      tags: profile.tags,
      jaccard: tagJaccard(state.tags, profile.tags),
    });
  }
  if (state.tags.length === 0) {
    return rows.sort((a, b) => a.rank - b.rank);
  }
  return rows.sort((a, b) => b.jaccard - a.jaccard || a.rank - b.rank);
}

export function allTags(bundle: Bundle): string[] {
  const tags = new Set<string>();
  for (const profile of bundle.platforms.platforms) {
    for (const tag of profile.tags) tags.add(tag);
  }
  return [...tags].sort();
}
