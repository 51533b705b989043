use serde::{Deserialize, Serialize};

use super::DatasetRecord;
use crate::classify::Level;
use crate::model::DifficultyLevel;

/// Epochs for the monochrome easy, monochrome difficult, multicolor easy and
/// multicolor difficult stages.
pub const DEFAULT_EPOCHS: [u32; 4] = [1, 1, 3, 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurriculumStage {
    pub stage_name: String,
    /// `None` for an extension stage that no level feeds.
    pub difficulty_level: Option<DifficultyLevel>,
    pub epochs: u32,
    pub record_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurriculumManifest {
    pub stages: Vec<CurriculumStage>,
    /// Records above the command-count table, left out of every stage.
    pub excluded_out_of_range: Vec<String>,
}

impl CurriculumManifest {
    /// Every id placed in a stage, in stage order.
    pub fn staged_ids(&self) -> impl Iterator<Item = &str> {
        self.stages.iter().flat_map(|s| s.record_ids.iter().map(String::as_str))
    }
}

/// Partitions records into the four difficulty stages in fixed order.
///
/// Ids keep their input order within a stage. An `extension` stage, if
/// given, is appended empty.
pub fn build_curriculum(
    records: &[DatasetRecord],
    epochs: [u32; 4],
    extension: Option<(&str, u32)>,
) -> Result<CurriculumManifest, String> {
    let mut stages: Vec<CurriculumStage> = DifficultyLevel::ALL
        .iter()
        .zip(epochs)
        .map(|(&level, epochs)| CurriculumStage {
            stage_name: level.as_str().to_owned(),
            difficulty_level: Some(level),
            epochs,
            record_ids: Vec::new(),
        })
        .collect();
    let mut excluded = Vec::new();
    for r in records {
        match Level::parse(&r.difficulty_level) {
            Some(Level::Difficulty(level)) => {
                let i = DifficultyLevel::ALL.iter().position(|l| *l == level).expect("ALL lists every level");
                stages[i].record_ids.push(r.id.clone());
            }
            Some(Level::OutOfRange) => excluded.push(r.id.clone()),
            None => return Err(format!("record {:?} has unknown level {:?}", r.id, r.difficulty_level)),
        }
    }
    if let Some((name, epochs)) = extension {
        stages.push(CurriculumStage {
            stage_name: name.to_owned(),
            difficulty_level: None,
            epochs,
            record_ids: Vec::new(),
        });
    }
    Ok(CurriculumManifest {
        stages,
        excluded_out_of_range: excluded,
    })
}
