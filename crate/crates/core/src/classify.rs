//! Color category and difficulty level of normalized icons.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{DifficultyLevel, Document, Paint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ColorCategory {
    Monochrome,
    Multicolor,
}

impl ColorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ColorCategory::Monochrome => "Monochrome",
            ColorCategory::Multicolor => "Multicolor",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "Monochrome" => Some(ColorCategory::Monochrome),
            "Multicolor" => Some(ColorCategory::Multicolor),
            _ => None,
        }
    }
}

impl fmt::Display for ColorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A difficulty level, or a marker that the command count exceeds the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Difficulty(DifficultyLevel),
    OutOfRange,
}

impl Level {
    pub const OUT_OF_RANGE: &'static str = "OutOfRange";

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Difficulty(d) => d.as_str(),
            Level::OutOfRange => Self::OUT_OF_RANGE,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s == Self::OUT_OF_RANGE {
            Some(Level::OutOfRange)
        } else {
            DifficultyLevel::parse(s).map(Level::Difficulty)
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub color_category: ColorCategory,
    pub command_count: usize,
    pub path_count: usize,
    pub level: Level,
}

/// Command-count thresholds of the level table.
///
/// The table's ranges share their endpoints ("0 - 50", "50 - 200"); with
/// `shared_bound_is_harder` the shared bound goes to the difficult class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelThresholds {
    pub monochrome_split: usize,
    pub multicolor_split: usize,
    pub max_commands: usize,
    pub shared_bound_is_harder: bool,
}

impl Default for LevelThresholds {
    fn default() -> Self {
        Self {
            monochrome_split: 50,
            multicolor_split: 100,
            max_commands: 200,
            shared_bound_is_harder: true,
        }
    }
}

impl LevelThresholds {
    pub fn level(&self, category: ColorCategory, command_count: usize) -> Level {
        if command_count > self.max_commands {
            return Level::OutOfRange;
        }
        let (split, easy, hard) = match category {
            ColorCategory::Monochrome => (
                self.monochrome_split,
                DifficultyLevel::MonocolorEasy,
                DifficultyLevel::MonocolorDifficult,
            ),
            ColorCategory::Multicolor => (
                self.multicolor_split,
                DifficultyLevel::MulticolorEasy,
                DifficultyLevel::MulticolorDifficult,
            ),
        };
        let is_easy = if self.shared_bound_is_harder {
            command_count < split
        } else {
            command_count <= split
        };
        Level::Difficulty(if is_easy { easy } else { hard })
    }
}

/// Total M/L/C commands over all paths.
pub fn count_commands(doc: &Document) -> usize {
    doc.paths().iter().map(|p| p.commands().len()).sum()
}

/// Monochrome iff at most one distinct fill. Each paint-server reference
/// counts as its own color.
pub fn detect_color_category(doc: &Document) -> ColorCategory {
    let mut colors = BTreeSet::new();
    let mut references = 0usize;
    for path in doc.paths() {
        match path.fill() {
            Paint::Hex(c) => {
                colors.insert(*c);
            }
            Paint::Reference(_) => references += 1,
            Paint::None => {}
        }
    }
    if colors.len() + references <= 1 {
        ColorCategory::Monochrome
    } else {
        ColorCategory::Multicolor
    }
}

pub fn classify(doc: &Document) -> Classification {
    classify_with(doc, &LevelThresholds::default())
}

pub fn classify_with(doc: &Document, thresholds: &LevelThresholds) -> Classification {
    let color_category = detect_color_category(doc);
    let command_count = count_commands(doc);
    Classification {
        color_category,
        command_count,
        path_count: doc.paths().len(),
        level: thresholds.level(color_category, command_count),
    }
}
