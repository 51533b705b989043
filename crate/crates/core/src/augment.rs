//! Seeded path swapping and color replacement for colored icons.

use std::collections::{BTreeSet, HashMap};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{Document, Paint, Point, Rgb};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AugmentError {
    #[error("n_variants must be at least 1")]
    NoVariants,
    #[error("a palette needs at least 2 colors, got {0}")]
    PaletteTooShort(usize),
    #[error("path swapping needs at least 2 paths, got {0}")]
    TooFewPaths(usize),
    #[error("palette has {palette} colors but the document uses {needed}")]
    PaletteTooSmall { palette: usize, needed: usize },
    #[error("no adjacent pair of paths has disjoint bounds")]
    NoSwapAvailable,
    #[error("augmentation expects a normalized document")]
    NotNormalized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentSpec {
    seed: u64,
    n_variants: usize,
    palette: Option<Vec<Rgb>>,
    allow_overlap_swap: bool,
}

impl AugmentSpec {
    pub fn new(
        seed: u64,
        n_variants: usize,
        palette: Option<Vec<Rgb>>,
        allow_overlap_swap: bool,
    ) -> Result<Self, AugmentError> {
        if n_variants == 0 {
            return Err(AugmentError::NoVariants);
        }
        if let Some(p) = &palette {
            if p.len() < 2 {
                return Err(AugmentError::PaletteTooShort(p.len()));
            }
        }
        Ok(Self {
            seed,
            n_variants,
            palette,
            allow_overlap_swap,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_variants(&self) -> usize {
        self.n_variants
    }

    pub fn palette(&self) -> Option<&[Rgb]> {
        self.palette.as_deref()
    }

    pub fn allow_overlap_swap(&self) -> bool {
        self.allow_overlap_swap
    }

    /// Same spec with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// Which operations a variant applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmentOps {
    Swap,
    Recolor,
    #[default]
    Both,
}

impl AugmentOps {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "swap" => Some(AugmentOps::Swap),
            "recolor" => Some(AugmentOps::Recolor),
            "both" => Some(AugmentOps::Both),
            _ => None,
        }
    }

    fn swaps(self) -> bool {
        self != AugmentOps::Recolor
    }

    fn recolors(self) -> bool {
        self != AugmentOps::Swap
    }
}

/// Why a swap left the document unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapNote {
    NoSwapAvailable,
}

/// Derives an independent per-variant seed from a base seed and a record key.
pub fn variant_seed(base: u64, key: &str, index: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(base.to_le_bytes());
    h.update((key.len() as u64).to_le_bytes());
    h.update(key.as_bytes());
    h.update((index as u64).to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

fn disjoint(a: (Point, Point), b: (Point, Point)) -> bool {
    a.1.x < b.0.x || b.1.x < a.0.x || a.1.y < b.0.y || b.1.y < a.0.y
}

/// Swaps the z-order of one seeded pair of adjacent paths.
///
/// Only pairs whose control-point bounds are disjoint qualify unless
/// `allow_overlap` is set; with no candidate the input comes back unchanged
/// together with a note.
pub fn swap_paths(
    doc: &Document,
    seed: u64,
    allow_overlap: bool,
) -> Result<(Document, Option<SwapNote>), AugmentError> {
    if !doc.is_normalized() {
        return Err(AugmentError::NotNormalized);
    }
    let paths = doc.paths();
    if paths.len() < 2 {
        return Err(AugmentError::TooFewPaths(paths.len()));
    }
    let candidates: Vec<usize> = (0..paths.len() - 1)
        .filter(|&i| {
            allow_overlap
                || match (paths[i].control_bounds(), paths[i + 1].control_bounds()) {
                    (Some(a), Some(b)) => disjoint(a, b),
                    _ => true,
                }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(&i) = candidates.choose(&mut rng) else {
        return Ok((doc.clone(), Some(SwapNote::NoSwapAvailable)));
    };
    let mut swapped = paths.to_vec();
    swapped.swap(i, i + 1);
    let out = doc.with_paths(swapped).map_err(|_| AugmentError::NotNormalized)?;
    Ok((out, None))
}

/// Distinct fills in order of first appearance.
fn distinct_fills(doc: &Document) -> Vec<Rgb> {
    let mut seen = BTreeSet::new();
    doc.paths()
        .iter()
        .filter_map(|p| match p.fill() {
            Paint::Hex(c) if seen.insert(*c) => Some(*c),
            _ => None,
        })
        .collect()
}

/// Recolors through a seeded injective map over the document's distinct fills.
///
/// Without a palette, targets are random colors that collide neither with
/// each other nor with any fill already in the document.
pub fn replace_colors(doc: &Document, spec: &AugmentSpec) -> Result<Document, AugmentError> {
    if !doc.is_normalized() {
        return Err(AugmentError::NotNormalized);
    }
    let sources = distinct_fills(doc);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let targets: Vec<Rgb> = match &spec.palette {
        Some(palette) => {
            let unique: Vec<Rgb> = {
                let mut seen = BTreeSet::new();
                palette.iter().copied().filter(|c| seen.insert(*c)).collect()
            };
            if unique.len() < sources.len() {
                return Err(AugmentError::PaletteTooSmall {
                    palette: unique.len(),
                    needed: sources.len(),
                });
            }
            let mut shuffled = unique;
            shuffled.shuffle(&mut rng);
            shuffled.truncate(sources.len());
            shuffled
        }
        None => {
            let mut taken: BTreeSet<Rgb> = sources.iter().copied().collect();
            let mut out = Vec::with_capacity(sources.len());
            while out.len() < sources.len() {
                let c = Rgb::from_u32(rng.random::<u32>() & 0x00ff_ffff);
                if taken.insert(c) {
                    out.push(c);
                }
            }
            out
        }
    };
    let mapping: HashMap<Rgb, Rgb> = sources.into_iter().zip(targets).collect();
    let paths = doc
        .paths()
        .iter()
        .map(|p| match p.fill() {
            Paint::Hex(c) => p.with_fill(Paint::Hex(mapping[c])),
            _ => p.clone(),
        })
        .collect();
    doc.with_paths(paths).map_err(|_| AugmentError::NotNormalized)
}

/// Applies `ops` with the given seed. Fails only if every requested operation
/// fails; a swap that finds no candidate counts as a failure.
pub fn augment_document(doc: &Document, spec: &AugmentSpec, ops: AugmentOps) -> Result<Document, AugmentError> {
    let mut current = doc.clone();
    let mut first_error = None;
    let mut applied = false;
    if ops.swaps() {
        match swap_paths(&current, spec.seed, spec.allow_overlap_swap) {
            Ok((swapped, None)) => {
                current = swapped;
                applied = true;
            }
            Ok((_, Some(SwapNote::NoSwapAvailable))) => first_error = Some(AugmentError::NoSwapAvailable),
            Err(e) => first_error = Some(e),
        }
    }
    if ops.recolors() {
        let recolor_spec = spec.with_seed(spec.seed.rotate_left(32) ^ 0x9e37_79b9_7f4a_7c15);
        match replace_colors(&current, &recolor_spec) {
            Ok(recolored) => {
                current = recolored;
                applied = true;
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    match (applied, first_error) {
        (false, Some(e)) => Err(e),
        _ => Ok(current),
    }
}
