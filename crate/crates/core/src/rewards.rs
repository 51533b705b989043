//! Integrity and path-count-matching rewards for generated SVG text.
//!
//! `R = R_int + R_match` where `R_int = α·I(S)` and `R_match` compares the
//! generated path count `N(S)` with the reference count `N(S_gt)`.
//!
//! Two readings of the matching term are available.
//! [`MatchSemantics::ProseConsistent`] (the default) saturates at β once
//! `N ≥ N_gt` and decays on a deficit. [`MatchSemantics::LiteralFormula`]
//! evaluates `max(β, β·exp(−γ·(N − N_gt)))` as written, which grows above β
//! when the generated icon has *fewer* paths than the reference.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::normalize::normalize_document;
use crate::parser::parse_document;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewardError {
    #[error("reward coefficients must be finite and strictly positive (alpha={alpha}, beta={beta}, gamma={gamma})")]
    InvalidParams { alpha: f64, beta: f64, gamma: f64 },
    #[error("reference SVG fails the integrity check")]
    InvalidReference,
    #[error("SVG text fails the integrity check")]
    Unparseable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchSemantics {
    /// `β·exp(−γ·max(0, N_gt − N))`: saturates at β, decays on a deficit.
    #[default]
    ProseConsistent,
    /// `max(β, β·exp(−γ·(N − N_gt)))` as written.
    LiteralFormula,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    semantics: MatchSemantics,
}

impl Default for RewardParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            semantics: MatchSemantics::ProseConsistent,
        }
    }
}

impl RewardParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, semantics: MatchSemantics) -> Result<Self, RewardError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(alpha) && ok(beta) && ok(gamma)) {
            return Err(RewardError::InvalidParams { alpha, beta, gamma });
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            semantics,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn semantics(&self) -> MatchSemantics {
        self.semantics
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub integrity: f64,
    #[serde(rename = "match")]
    pub match_: f64,
    pub total: f64,
    pub n_generated: usize,
    pub n_reference: usize,
    pub integrity_flag: u8,
}

/// Path count of text that parses and normalizes, `None` otherwise.
fn intact_path_count(svg_text: &str) -> Option<usize> {
    let (raw, _) = parse_document(svg_text).ok()?;
    let (doc, _) = normalize_document(&raw).ok()?;
    Some(doc.paths().len())
}

/// `I(S)`: 1 when the text is well-formed SVG whose path data all parses and
/// which normalizes to at least one path, 0 otherwise.
pub fn integrity_indicator(svg_text: &str) -> u8 {
    u8::from(intact_path_count(svg_text).is_some())
}

/// `I(S)` over raw bytes; invalid UTF-8 scores 0.
pub fn integrity_indicator_bytes(bytes: &[u8]) -> u8 {
    std::str::from_utf8(bytes).map_or(0, integrity_indicator)
}

/// `N(S)`: number of paths in the normalized document.
pub fn path_count(svg_text: &str) -> Result<usize, RewardError> {
    intact_path_count(svg_text).ok_or(RewardError::Unparseable)
}

/// `R_match` from path counts alone.
pub fn match_reward_from_counts(n_generated: usize, n_reference: usize, params: &RewardParams) -> f64 {
    let delta = n_generated as f64 - n_reference as f64;
    let RewardParams { beta, gamma, .. } = *params;
    match params.semantics {
        MatchSemantics::ProseConsistent => beta * (-gamma * (-delta).max(0.0)).exp(),
        MatchSemantics::LiteralFormula => beta.max(beta * (-gamma * delta).exp()),
    }
}

/// `R_match`. Generated text that fails integrity counts as zero paths.
pub fn match_reward(generated: &str, reference: &str, params: &RewardParams) -> Result<f64, RewardError> {
    let n_reference = path_count(reference).map_err(|_| RewardError::InvalidReference)?;
    let n_generated = intact_path_count(generated).unwrap_or(0);
    Ok(match_reward_from_counts(n_generated, n_reference, params))
}

/// `R = R_int + R_match` with its components.
pub fn total_reward(
    generated: &str,
    reference: &str,
    params: &RewardParams,
) -> Result<RewardBreakdown, RewardError> {
    let n_reference = path_count(reference).map_err(|_| RewardError::InvalidReference)?;
    let generated_count = intact_path_count(generated);
    Ok(breakdown(generated_count, n_reference, params))
}

/// Assembles a breakdown from a generated count (`None` = failed integrity).
pub fn breakdown(generated_count: Option<usize>, n_reference: usize, params: &RewardParams) -> RewardBreakdown {
    let integrity_flag = u8::from(generated_count.is_some());
    let n_generated = generated_count.unwrap_or(0);
    let integrity = params.alpha * f64::from(integrity_flag);
    let match_ = match_reward_from_counts(n_generated, n_reference, params);
    RewardBreakdown {
        integrity,
        match_,
        total: integrity + match_,
        n_generated,
        n_reference,
        integrity_flag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    const MINIMAL: &str =
        r##"<svg viewBox="0 0 1024 1024"><path d="M0 0L10 10" fill="#ff0000"/></svg>"##;

    fn svg_with_paths(n: usize) -> String {
        let mut s = String::from(r#"<svg viewBox="0 0 1024 1024">"#);
        for i in 0..n {
            s.push_str(&format!(r#"<path d="M{i} 0L{i} 10L{} 10z"/>"#, i + 1));
        }
        s.push_str("</svg>");
        s
    }

    fn literal() -> RewardParams {
        RewardParams::new(1.0, 1.0, 1.0, MatchSemantics::LiteralFormula).unwrap()
    }

    #[test]
    fn integrity_cases() {
        assert_eq!(integrity_indicator(MINIMAL), 1);
        assert_eq!(integrity_indicator(&MINIMAL.replace("</svg>", "")), 0);
        assert_eq!(
            integrity_indicator(r##"<svg viewBox="0 0 1024 1024"><path d="M0 0 L" fill="#000"/></svg>"##),
            0
        );
        assert_eq!(integrity_indicator_bytes(&[0xff, 0xfe]), 0);
    }

    #[test]
    fn path_counts() {
        assert_eq!(path_count(MINIMAL), Ok(1));
        assert_eq!(path_count(&svg_with_paths(3)), Ok(3));
        assert_eq!(path_count("<svg"), Err(RewardError::Unparseable));
    }

    #[test]
    fn match_examples() {
        let prose = RewardParams::default();
        assert_eq!(match_reward_from_counts(5, 5, &prose), 1.0);
        assert_eq!(match_reward_from_counts(5, 5, &literal()), 1.0);
        assert!((match_reward_from_counts(4, 5, &prose) - (-1.0f64).exp()).abs() < 1e-12);
        assert_eq!(match_reward_from_counts(7, 5, &prose), 1.0);
        assert_eq!(match_reward_from_counts(7, 5, &literal()), 1.0);
        assert!((match_reward_from_counts(4, 5, &literal()) - E).abs() < 1e-12);
    }

    #[test]
    fn total_examples() {
        let params = RewardParams::default();
        let same = total_reward(MINIMAL, MINIMAL, &params).unwrap();
        assert_eq!(same.total, 2.0);
        let reference = svg_with_paths(3);
        let truncated = &reference[..reference.len() - 3];
        let broken = total_reward(truncated, &reference, &params).unwrap();
        assert_eq!(broken.integrity, 0.0);
        assert_eq!(broken.n_generated, 0);
        assert!((broken.total - (-3.0f64).exp()).abs() < 1e-12);
        let more = total_reward(&svg_with_paths(13), &reference, &params).unwrap();
        assert_eq!(more.total, 2.0);
        assert_eq!(
            total_reward(MINIMAL, "<svg>", &params),
            Err(RewardError::InvalidReference)
        );
    }

    #[test]
    fn params_must_be_positive() {
        assert!(RewardParams::new(0.0, 1.0, 1.0, MatchSemantics::default()).is_err());
        assert!(RewardParams::new(1.0, f64::NAN, 1.0, MatchSemantics::default()).is_err());
        assert!(RewardParams::new(1.0, 1.0, -2.0, MatchSemantics::default()).is_err());
    }

    proptest! {
        #[test]
        fn bounded_and_saturating(
            n in 0usize..300, n_gt in 0usize..300,
            alpha in 0.01f64..10.0, beta in 0.01f64..10.0, gamma in 0.01f64..5.0,
            intact in any::<bool>(),
        ) {
            let params = RewardParams::new(alpha, beta, gamma, MatchSemantics::ProseConsistent).unwrap();
            let r = match_reward_from_counts(n, n_gt, &params);
            prop_assert!(r >= 0.0 && r <= beta);
            if n >= n_gt {
                prop_assert_eq!(r, beta);
            }
            prop_assert!(match_reward_from_counts(n + 1, n_gt, &params) >= r);
            let b = breakdown(intact.then_some(n), n_gt, &params);
            prop_assert!(b.total >= 0.0 && b.total <= alpha + beta);
            prop_assert_eq!(b.total, b.integrity + b.match_);
        }

        #[test]
        fn coefficients_scale_components(n in 0usize..50, n_gt in 0usize..50, alpha in 0.1f64..4.0, beta in 0.1f64..4.0) {
            let base = RewardParams::new(alpha, beta, 1.0, MatchSemantics::ProseConsistent).unwrap();
            let doubled = RewardParams::new(2.0 * alpha, 2.0 * beta, 1.0, MatchSemantics::ProseConsistent).unwrap();
            let a = breakdown(Some(n), n_gt, &base);
            let b = breakdown(Some(n), n_gt, &doubled);
            prop_assert_eq!(b.integrity, 2.0 * a.integrity);
            prop_assert_eq!(b.match_, 2.0 * a.match_);
        }
    }
}
