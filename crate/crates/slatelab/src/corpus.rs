//! Topic catalog and on-demand document sampling.
//!
//! Documents are never materialized as a corpus; a [`CorpusSampler`] draws
//! them from the content distribution when candidate sets are needed, with
//! ids assigned from a run-scoped 64-bit counter.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::{Result, SlateError};

/// Qualities are clamped to this band so the engagement bonus stays below the
/// document length for any satisfaction value.
pub const QUALITY_CLAMP: f64 = 3.4;

/// Default document length in time units.
pub const DEFAULT_DOC_LENGTH: f64 = 4.0;

/// Per-topic quality distribution parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopicCatalog {
    pub num_topics: usize,
    /// Mean quality per topic.
    pub mean_quality: Vec<f64>,
    /// Quality standard deviation, shared across topics.
    pub quality_stddev: f64,
    /// Constant document length.
    pub doc_length: f64,
}

impl TopicCatalog {
    pub fn new(mean_quality: Vec<f64>, quality_stddev: f64, doc_length: f64) -> Result<Self> {
        if mean_quality.is_empty() {
            return Err(SlateError::InvalidParam("catalog needs at least one topic".into()));
        }
        if quality_stddev < 0.0 {
            return Err(SlateError::InvalidParam("quality_stddev must be >= 0".into()));
        }
        if doc_length <= 0.0 {
            return Err(SlateError::InvalidParam("doc_length must be > 0".into()));
        }
        Ok(Self { num_topics: mean_quality.len(), mean_quality, quality_stddev, doc_length })
    }

    /// Default catalog: 20 topics, 14 low-quality with means evenly spaced
    /// over [-3, 0] and 6 high-quality with means evenly spaced over [0, 3].
    pub fn default_catalog() -> Self {
        Self::with_topics(20, 14, 1.0, DEFAULT_DOC_LENGTH)
    }

    /// Catalog with `num_low` low-quality topics spaced over [-3, 0] and the
    /// remainder spaced over [0, 3].
    pub fn with_topics(num_topics: usize, num_low: usize, stddev: f64, doc_length: f64) -> Self {
        assert!(num_low >= 2 && num_topics - num_low >= 2, "need >= 2 topics per band");
        let num_high = num_topics - num_low;
        let mut means = Vec::with_capacity(num_topics);
        for i in 0..num_low {
            means.push(-3.0 + 3.0 * i as f64 / (num_low - 1) as f64);
        }
        for i in 0..num_high {
            means.push(3.0 * i as f64 / (num_high - 1) as f64);
        }
        Self::new(means, stddev, doc_length).expect("valid spaced catalog")
    }
}

/// A recommendable item: one-hot topic, scalar quality, fixed length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: u64,
    pub topic: usize,
    pub quality: f64,
    pub length: f64,
}

/// Draws documents from the content distribution: topics uniform, quality
/// Normal(mu_topic, sigma^2) clamped to [-QUALITY_CLAMP, QUALITY_CLAMP].
#[derive(Debug, Clone)]
pub struct CorpusSampler {
    pub catalog: TopicCatalog,
    next_id: u64,
}

impl CorpusSampler {
    pub fn new(catalog: TopicCatalog) -> Self {
        Self { catalog, next_id: 0 }
    }

    pub fn sample_document<R: Rng>(&mut self, rng: &mut R) -> Document {
        let topic = rng.gen_range(0..self.catalog.num_topics);
        let quality = if self.catalog.quality_stddev == 0.0 {
            self.catalog.mean_quality[topic]
        } else {
            let dist = Normal::new(self.catalog.mean_quality[topic], self.catalog.quality_stddev)
                .expect("finite normal params");
            dist.sample(rng).clamp(-QUALITY_CLAMP, QUALITY_CLAMP)
        };
        let id = self.next_id;
        self.next_id += 1;
        Document { id, topic, quality, length: self.catalog.doc_length }
    }

    /// Draws `m` independent candidates; ids are unique within the run.
    pub fn sample_candidates<R: Rng>(&mut self, m: usize, rng: &mut R) -> Vec<Document> {
        assert!(m >= 1);
        (0..m).map(|_| self.sample_document(rng)).collect()
    }
}
