use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::FieldWeights;
use crate::textproc::Smoothing;

/// Relevance-model (pseudo-relevance feedback) expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelevanceModelConfig {
    /// Top first-pass documents used as feedback (clamped to what is there).
    pub feedback_docs: usize,
    /// Expansion terms kept.
    pub feedback_terms: usize,
    /// Weight of the original query in the mix; `1 - original_weight` goes to
    /// the expansion.
    pub original_weight: f64,
    pub smoothing: Smoothing,
}

impl Default for RelevanceModelConfig {
    fn default() -> Self {
        RelevanceModelConfig {
            feedback_docs: 10,
            feedback_terms: 20,
            original_weight: 0.5,
            smoothing: Smoothing::Dirichlet { mu: 2000.0 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ManifoldConfig {
    pub alpha: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Dirichlet prior for the candidate document models.
    pub mu: f64,
}

impl Default for ManifoldConfig {
    fn default() -> Self {
        ManifoldConfig {
            alpha: 0.6,
            tolerance: 1e-6,
            max_iterations: 200,
            mu: 2000.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FixedPointConfig {
    pub delta: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        FixedPointConfig {
            delta: 0.5,
            tolerance: 1e-4,
            max_iterations: 50,
        }
    }
}

/// Every tunable of the cascade. Loadable from JSON; missing keys take the
/// defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CascadeConfig {
    /// First-pass candidate count.
    pub first_pass_depth: usize,
    /// Candidates re-scored by stages 2-4.
    pub rerank_depth: usize,
    /// Interpolation weights of stages 1-4; non-negative, summing to 1.
    pub stage_weights: [f64; 4],
    pub field_weights: FieldWeights,
    pub relevance: RelevanceModelConfig,
    pub manifold: ManifoldConfig,
    pub fixed_point: FixedPointConfig,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        CascadeConfig {
            first_pass_depth: 1000,
            rerank_depth: 100,
            stage_weights: [0.2, 0.2, 0.3, 0.3],
            field_weights: FieldWeights::default(),
            relevance: RelevanceModelConfig::default(),
            manifold: ManifoldConfig::default(),
            fixed_point: FixedPointConfig::default(),
        }
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}

impl CascadeConfig {
    pub fn validate(&self) -> Result<()> {
        check(self.rerank_depth >= 1, || "rerank_depth must be >= 1".into())?;
        check(self.rerank_depth <= self.first_pass_depth, || {
            format!(
                "rerank_depth {} exceeds first_pass_depth {}",
                self.rerank_depth, self.first_pass_depth
            )
        })?;
        let w = self.stage_weights;
        check(w.iter().all(|x| x.is_finite() && *x >= 0.0), || {
            format!("stage weights must be non-negative, got {w:?}")
        })?;
        check((w.iter().sum::<f64>() - 1.0).abs() <= 1e-9, || {
            format!("stage weights must sum to 1, got {w:?}")
        })?;
        let fw = self.field_weights;
        check(
            [fw.content, fw.anchor].iter().all(|x| x.is_finite() && *x >= 0.0),
            || "field weights must be non-negative".into(),
        )?;
        let rm = self.relevance;
        check(rm.feedback_docs >= 1 && rm.feedback_terms >= 1, || {
            "feedback_docs and feedback_terms must be >= 1".into()
        })?;
        check((0.0..=1.0).contains(&rm.original_weight), || {
            format!("original_weight {} outside [0, 1]", rm.original_weight)
        })?;
        if let Smoothing::Dirichlet { mu } = rm.smoothing {
            check(mu.is_finite() && mu > 0.0, || format!("relevance mu {mu} must be > 0"))?;
        }
        let m = self.manifold;
        check(m.alpha > 0.0 && m.alpha < 1.0, || {
            format!("manifold alpha {} outside (0, 1)", m.alpha)
        })?;
        check(m.tolerance > 0.0 && m.mu > 0.0, || {
            "manifold tolerance and mu must be > 0".into()
        })?;
        let fp = self.fixed_point;
        check((0.0..1.0).contains(&fp.delta), || {
            format!("fixed-point delta {} outside [0, 1)", fp.delta)
        })?;
        check(fp.tolerance > 0.0, || "fixed-point tolerance must be > 0".into())?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: CascadeConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
