use std::collections::BTreeMap;

use serde::Serialize;

use super::{DatasetRecord, ItemError};
use crate::classify::{ColorCategory, Level};
use crate::model::DifficultyLevel;

pub const HISTOGRAM_BIN_WIDTH: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsSummary {
    pub total: usize,
    pub bin_width: usize,
    /// Keyed by color category name.
    pub categories: BTreeMap<String, CategoryStats>,
    /// The four levels in curriculum order, then out-of-range records.
    pub levels: Vec<LevelShare>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CategoryStats {
    pub count: usize,
    /// Bin start (a multiple of the bin width) to record count; empty bins omitted.
    pub histogram: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelShare {
    pub level: String,
    pub count: usize,
    pub proportion: f64,
}

/// Command-count histograms per color category and the level proportion table.
///
/// Rows whose category or level names are unknown are rejected.
pub fn compute_stats(records: &[DatasetRecord]) -> Result<StatsSummary, (usize, ItemError)> {
    let mut categories: BTreeMap<String, CategoryStats> = [ColorCategory::Monochrome, ColorCategory::Multicolor]
        .iter()
        .map(|c| (c.as_str().to_owned(), CategoryStats::default()))
        .collect();
    let mut level_counts: BTreeMap<Level, usize> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        let schema = |what: &str, value: &str| (i, ItemError::Schema(format!("record {:?}: unknown {what} {value:?}", r.id)));
        let category = ColorCategory::parse(&r.color_category).ok_or_else(|| schema("color_category", &r.color_category))?;
        let level = Level::parse(&r.difficulty_level).ok_or_else(|| schema("difficulty_level", &r.difficulty_level))?;
        let stats = categories.get_mut(category.as_str()).expect("both categories are present");
        stats.count += 1;
        *stats
            .histogram
            .entry(r.command_count / HISTOGRAM_BIN_WIDTH * HISTOGRAM_BIN_WIDTH)
            .or_default() += 1;
        *level_counts.entry(level).or_default() += 1;
    }
    let total = records.len();
    let share = |count: usize| if total == 0 { 0.0 } else { count as f64 / total as f64 };
    let levels = DifficultyLevel::ALL
        .map(Level::Difficulty)
        .into_iter()
        .chain([Level::OutOfRange])
        .map(|level| {
            let count = level_counts.get(&level).copied().unwrap_or(0);
            LevelShare {
                level: level.as_str().to_owned(),
                count,
                proportion: share(count),
            }
        })
        .collect();
    Ok(StatsSummary {
        total,
        bin_width: HISTOGRAM_BIN_WIDTH,
        categories,
        levels,
    })
}
