/** Wire types of the exported dashboard bundle (schema_version 1). */

export const SCHEMA_VERSION = 1;

export interface RankingEntry {
  platform_id: string;
  score: number;
  rank: number;
}

export interface RankingsMonth {
  label: string;
  entries: RankingEntry[];
}

export interface RankingsFile {
  schema_version: number;
  months: Record<string, RankingsMonth>;
}

export interface PlatformProfile {
  id: string;
  name: string;
  online_month: number;
  online_label: string;
  status: "normal" | "problem";
  static_numeric: Record<string, number | null>;
  nature: string | null;
  region: string | null;
  guarantee_mode: string | null;
  tags: string[];
  officers: string[];
  missing_fields: string[];
  kg_features: number[];
}

export interface PlatformsFile {
  schema_version: number;
  platforms: PlatformProfile[];
}

export interface SeriesEntry {
  channels: Record<string, [number, number][]>;
  news_per_month: [number, number][];
  comments_per_month: [number, number][];
}

export interface SeriesFile {
  schema_version: number;
  series: Record<string, SeriesEntry>;
}

export interface BucketRow {
  limit: number | null;
  failure_pct: number;
  mean_interest_rate: number;
  n_platforms: number;
}

export interface EvaluationReport {
  cutoff_month: number;
  month_label: string;
  accuracy: number;
  auc: number;
  baseline_auc: number | null;
  histogram: { normal: number[]; problem: number[] };
  buckets: BucketRow[];
  n_platforms: number;
}

export interface ReportsFile {
  schema_version: number;
  reports: EvaluationReport[];
}

export interface RelatedEntry {
  tags: string[];
  related: { platform_id: string; jaccard: number }[];
}

export interface RelatedFile {
  schema_version: number;
  related: Record<string, RelatedEntry>;
}

export interface Bundle {
  rankings: RankingsFile;
  platforms: PlatformsFile;
  series: SeriesFile;
  reports: ReportsFile;
  related: RelatedFile;
}

export type ViewName = "overview" | "detail" | "compare" | "recommend";

/** UI state: detail needs exactly one selection, compare exactly two. */
export interface ViewState {
  view: ViewName;
  selected: string[];
  tags: string[];
  month: string | null; // key into rankings.months; null = latest
}

export const BUNDLE_FILES = [
  "rankings.json",
  "platforms.json",
  "series.json",
  "reports.json",
  "related.json",
] as const;
