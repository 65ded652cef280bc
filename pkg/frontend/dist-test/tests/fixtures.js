function profile(id, overrides = {}) {
    return {
        id,
        name: `Platform ${id}`,
        online_month: 540,
        online_label: "2015-01",
        status: "normal",
        static_numeric: { interest_rate: 10.0, registered_capital: 5000 },
        nature: "nature_1",
        region: "region_01",
        guarantee_mode: "guarantee_0",
        tags: ["tag_a"],
        officers: ["person_1::position_1"],
        missing_fields: [],
        kg_features: [0, 0.5, 1, 2],
        ...overrides,
    };
}
export function handBundle() {
    return {
        rankings: {
            schema_version: 1,
            months: {
                "550": {
                    label: "2015-11",
                    entries: [
                        { platform_id: "p1", score: 0.95, rank: 1 },
                        { platform_id: "p2", score: 0.9, rank: 2 },
                        { platform_id: "p3", score: 0.6, rank: 3 },
                        { platform_id: "p4", score: 0.3, rank: 4 },
                        { platform_id: "p5", score: 0.1, rank: 5 },
                    ],
                },
                "549": {
                    label: "2015-10",
                    entries: [
                        { platform_id: "p2", score: 0.92, rank: 1 },
                        { platform_id: "p1", score: 0.91, rank: 2 },
                    ],
                },
            },
        },
        platforms: {
            schema_version: 1,
            platforms: [
                profile("p1", { tags: ["tag_a", "tag_b"] }),
                profile("p2", { tags: ["tag_a"], region: "region_02" }),
                profile("p3", { tags: ["tag_b", "tag_c"] }),
                profile("p4", { tags: ["tag_c"], status: "problem" }),
                // p5 went online later: early months have no data at all
                profile("p5", { tags: [], online_month: 548, online_label: "2015-09" }),
            ],
        },
        series: {
            schema_version: 1,
            series: {
                p1: {
                    channels: {
                        volume: [
                            [546, 100],
                            [547, 110],
                            [548, 120],
                            [549, 125],
                            [550, 130],
                        ],
                    },
                    news_per_month: [[549, 2]],
                    comments_per_month: [[550, 3]],
                },
                p2: {
                    channels: {
                        volume: [
                            [546, 90],
                            [547, 95],
                            // month 548 missing: must render as a gap, not zero
                            [549, 105],
                            [550, 108],
                        ],
                    },
                    news_per_month: [],
                    comments_per_month: [],
                },
                p5: {
                    channels: { volume: [[548, 20], [549, 22], [550, 25]] },
                    news_per_month: [],
                    comments_per_month: [],
                },
            },
        },
        reports: {
            schema_version: 1,
            reports: [
                {
                    cutoff_month: 550,
                    month_label: "2015-11",
                    accuracy: 0.8,
                    auc: 0.9,
                    baseline_auc: 0.85,
                    histogram: { normal: [0, 0, 0, 0, 0, 0, 1, 0, 1, 2], problem: [1, 0, 0, 0, 0, 0, 0, 0, 0, 0] },
                    buckets: [
                        { limit: 20, failure_pct: 0, mean_interest_rate: 9.5, n_platforms: 5 },
                        { limit: null, failure_pct: 0, mean_interest_rate: 9.5, n_platforms: 5 },
                    ],
                    n_platforms: 5,
                },
            ],
        },
        related: {
            schema_version: 1,
            related: {
                p1: { tags: ["tag_a", "tag_b"], related: [{ platform_id: "p2", jaccard: 0.8 }] },
            },
        },
    };
}
export function rawFiles(bundle) {
    return {
        rankings: bundle.rankings,
        platforms: bundle.platforms,
        series: bundle.series,
        reports: bundle.reports,
        related: bundle.related,
    };
}
