/** Wire types of the exported dashboard bundle (schema_version 1). */
export const SCHEMA_VERSION = 1;
export const BUNDLE_FILES = [
    "rankings.json",
    "platforms.json",
    "series.json",
    "reports.json",
    "related.json",
];
