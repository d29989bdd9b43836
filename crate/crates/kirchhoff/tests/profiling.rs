// Scratch profiling target; removed before release.
use std::time::Instant;

use kirchhoff::construct::{census, CensusMode, ConstructorConfig, SimplifyMode, Strategy};
use kirchhoff::decompose::SearchBudget;

#[test]
#[ignore]
fn profile_census_band() {
    let variants: Vec<(&str, ConstructorConfig)> = vec![
        ("full", ConstructorConfig::default()),
        (
            "no-enum",
            ConstructorConfig {
                search: SearchBudget {
                    cost_cap: 0,
                    ..SearchBudget::default()
                },
                ..ConstructorConfig::default()
            },
        ),
        (
            "direct-only",
            ConstructorConfig {
                strategies: vec![Strategy::Direct],
                ..ConstructorConfig::default()
            },
        ),
        (
            "direct-large",
            ConstructorConfig {
                strategies: vec![Strategy::Direct, Strategy::Large],
                ..ConstructorConfig::default()
            },
        ),
        (
            "always-simplify",
            ConstructorConfig {
                simplify: SimplifyMode::Always,
                ..ConstructorConfig::default()
            },
        ),
    ];
    for (name, config) in variants {
        let start = Instant::now();
        let report = census(150, &config, CensusMode::All);
        println!(
            "{name}: t<=150 all-c {:?} ({} rows, {} failures)",
            start.elapsed(),
            report.rows.len(),
            report.failures.len()
        );
    }
}
