//! Reference-picture selection: the `k` samples of a valence/arousal
//! annotated table closest to each corner of the PA grid.

use alloc::string::String;
use alloc::vec::Vec;

use crate::emotion::{pa_distance, PleasureArousal};
use crate::units::Corner;

/// Number of references gathered per corner unless told otherwise.
pub const DEFAULT_REFERENCE_K: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReferenceError {
    #[error("duplicate sample id `{0}`")]
    DuplicateId(String),
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("k must be at least 1")]
    ZeroK,
}

impl ReferenceError {
    pub fn kind(&self) -> &'static str {
        match self {
            ReferenceError::DuplicateId(_) => "DuplicateId",
            ReferenceError::EmptyDataset => "EmptyDataset",
            ReferenceError::ZeroK => "InvalidK",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnotatedSample {
    pub id: String,
    pub pa: PleasureArousal,
}

/// Samples in ingestion order; the order breaks distance ties.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    source: String,
    samples: Vec<AnnotatedSample>,
}

impl Dataset {
    pub fn new(
        source: impl Into<String>,
        samples: Vec<AnnotatedSample>,
    ) -> Result<Self, ReferenceError> {
        let mut ids: Vec<&str> = samples.iter().map(|s| s.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(ReferenceError::DuplicateId(w[0].into()));
        }
        Ok(Dataset {
            source: source.into(),
            samples,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn samples(&self) -> &[AnnotatedSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Neighbor {
    /// Row position in the dataset.
    pub index: usize,
    pub id: String,
    pub distance: f64,
}

/// The `min(k, |d|)` samples nearest to `target`, closest first.
///
/// A single linear scan keeps a sorted buffer of at most `k` candidates; a
/// new candidate goes after every buffered one at the same distance, so
/// exact ties stay in dataset order.
pub fn knn_pick(
    d: &Dataset,
    target: PleasureArousal,
    k: usize,
) -> Result<Vec<Neighbor>, ReferenceError> {
    if k == 0 {
        return Err(ReferenceError::ZeroK);
    }
    if d.is_empty() {
        return Err(ReferenceError::EmptyDataset);
    }
    let keep = k.min(d.len());
    let mut best: Vec<(f64, usize)> = Vec::with_capacity(keep + 1);
    for (index, sample) in d.samples.iter().enumerate() {
        let dist = pa_distance(sample.pa, target);
        if best.len() == keep && dist >= best[keep - 1].0 {
            continue;
        }
        let at = best.partition_point(|&(b, _)| b <= dist);
        best.insert(at, (dist, index));
        best.truncate(keep);
    }
    Ok(best
        .into_iter()
        .map(|(distance, index)| Neighbor {
            index,
            id: d.samples[index].id.clone(),
            distance,
        })
        .collect())
}

/// [`knn_pick`] for each of the nine corners, in corner-target order.
pub fn corner_reference_sets(
    d: &Dataset,
    k: usize,
) -> Result<Vec<(Corner, Vec<Neighbor>)>, ReferenceError> {
    Corner::ALL
        .into_iter()
        .map(|c| knn_pick(d, c.into(), k).map(|n| (c, n)))
        .collect()
}
