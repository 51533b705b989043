//! Normalization of SVG icons to absolute M/L/C paths on a 1024×1024 canvas,
//! difficulty classification, reward scoring for generated SVG, seeded
//! augmentation and a geometric verifier for the conversion.

pub mod augment;
pub mod classify;
pub mod model;
pub mod normalize;
pub mod parser;
pub mod pipeline;
pub mod rewards;
pub mod verify;

pub use classify::{classify, Classification, ColorCategory, Level};
pub use model::{document_equal, DifficultyLevel, Document, Paint, PathCommand, PathElement, Point, Rgb};
pub use normalize::{normalize_document, NormalizeError, NormalizeReport};
pub use parser::{parse_document, serialize_document, ParseError};
pub use rewards::{integrity_indicator, total_reward, RewardParams};
