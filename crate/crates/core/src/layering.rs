//! Layered compositing of the emotion, brows and mouthing channels.
//!
//! Every sample starts from the neutral face. Active spans become layers,
//! applied in policy priority order (lowest first); each layer pulls every
//! unit toward its own value by `weight × affinity(kind, region)`. With the
//! default policy a fully weighted mouthing pose owns the lower face while the
//! emotion pose keeps the upper face.

use alloc::vec::Vec;

use crate::emotion::{pa_to_pose, MappingMode};
use crate::notation::{LexiconError, Payload, PoseLexicon, SourcePos, Span, Timeline, TrackKind};
use crate::units::{ActivationVector, ControlUnit, CornerPoseGrid, Region};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PolicyError {
    #[error("{0} must appear in the priority order")]
    MissingKind(TrackKind),
    #[error("{0} appears more than once in the priority order")]
    DuplicateKind(TrackKind),
    #[error("the gloss track carries no facial activation and cannot be layered")]
    GlossLayer,
    #[error("affinity of {kind} on the {region} face is {value}, outside [0, 1]")]
    AffinityOutOfRange {
        kind: TrackKind,
        region: Region,
        value: f64,
    },
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LayerError {
    #[error("no {0} layer in the policy")]
    UnknownTrackKind(TrackKind),
    #[error("{source}")]
    Lexicon {
        source: LexiconError,
        pos: Option<SourcePos>,
    },
    #[error("frame rate must be positive and finite, got {0}")]
    InvalidFps(f64),
}

/// Priority order and per-region influence of each facial track.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerPolicy {
    priority: Vec<TrackKind>,
    affinity: [[f64; 3]; 4],
}

impl LayerPolicy {
    /// Validates a priority order (low → high) and pairs it with the default
    /// affinities.
    pub fn new(priority: Vec<TrackKind>) -> Result<Self, PolicyError> {
        for (i, kind) in priority.iter().enumerate() {
            if *kind == TrackKind::Gloss {
                return Err(PolicyError::GlossLayer);
            }
            if priority[..i].contains(kind) {
                return Err(PolicyError::DuplicateKind(*kind));
            }
        }
        for kind in [TrackKind::Emotion, TrackKind::Mouthing, TrackKind::Brows] {
            if !priority.contains(&kind) {
                return Err(PolicyError::MissingKind(kind));
            }
        }
        Ok(LayerPolicy {
            priority,
            affinity: DEFAULT_AFFINITY,
        })
    }

    pub fn with_affinity(
        mut self,
        kind: TrackKind,
        region: Region,
        value: f64,
    ) -> Result<Self, PolicyError> {
        if kind == TrackKind::Gloss {
            return Err(PolicyError::GlossLayer);
        }
        if !(0.0..=1.0).contains(&value) {
            return Err(PolicyError::AffinityOutOfRange {
                kind,
                region,
                value,
            });
        }
        self.affinity[kind as usize][region.index()] = value;
        Ok(self)
    }

    pub fn priority(&self) -> &[TrackKind] {
        &self.priority
    }

    /// `None` for kinds the policy does not layer.
    pub fn affinity(&self, kind: TrackKind, region: Region) -> Option<f64> {
        self.priority
            .contains(&kind)
            .then(|| self.affinity[kind as usize][region.index()])
    }
}

// rows follow TrackKind (gloss, emotion, mouthing, brows); columns follow Region
const DEFAULT_AFFINITY: [[f64; 3]; 4] = [
    [0.0, 0.0, 0.0],
    [1.0, 1.0, 1.0],
    [0.0, 0.0, 1.0],
    [1.0, 0.0, 0.0],
];

impl Default for LayerPolicy {
    /// Emotion < brows < mouthing.
    fn default() -> Self {
        LayerPolicy {
            priority: alloc::vec![TrackKind::Emotion, TrackKind::Brows, TrackKind::Mouthing],
            affinity: DEFAULT_AFFINITY,
        }
    }
}

/// A pose contributed by one track at one instant.
#[derive(Clone, Copy, Debug)]
pub struct Layer<'a> {
    pub vector: &'a ActivationVector,
    pub weight: f64,
    pub kind: TrackKind,
}

/// Weight of `span` at time `t`: zero outside the open interval, linear
/// ramps over `attack` and `release`, plateau at `span.weight`.
///
/// When the ramps are longer than the span the two ramps meet below full
/// weight instead of overlapping.
pub fn envelope_eval(span: &Span, t: f64) -> f64 {
    if !(t > span.start && t < span.end) {
        return 0.0;
    }
    let rise = if span.envelope.attack > 0.0 {
        (t - span.start) / span.envelope.attack
    } else {
        1.0
    };
    let fall = if span.envelope.release > 0.0 {
        (span.end - t) / span.envelope.release
    } else {
        1.0
    };
    rise.min(fall).min(1.0) * span.weight
}

/// Applies `layers` to `base` in the given order.
///
/// Each unit moves toward the layer's value by `k = weight × affinity`,
/// computed as `(1 − k)·out + k·layer` so that `k = 1` lands exactly on the
/// layer value and `k = 0` leaves the unit untouched.
pub fn blend_layers(
    base: &ActivationVector,
    layers: &[Layer<'_>],
    policy: &LayerPolicy,
) -> Result<ActivationVector, LayerError> {
    let mut out = *base.values();
    for layer in layers {
        let mut by_region = [0.0; 3];
        for region in Region::ALL {
            by_region[region.index()] = policy
                .affinity(layer.kind, region)
                .ok_or(LayerError::UnknownTrackKind(layer.kind))?
                * layer.weight;
        }
        for (unit, (slot, target)) in ControlUnit::ALL
            .iter()
            .zip(out.iter_mut().zip(layer.vector.values()))
        {
            let k = by_region[unit.region().index()];
            if k != 0.0 {
                *slot = (1.0 - k) * *slot + k * target;
            }
        }
    }
    Ok(ActivationVector::clamped(out))
}

/// Face curve sampled at a fixed rate; frame `i` is at `i / fps` seconds.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    fps: f64,
    frames: Vec<ActivationVector>,
}

impl SampledCurve {
    pub fn new(fps: f64, frames: Vec<ActivationVector>) -> Self {
        SampledCurve { fps, frames }
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn frames(&self) -> &[ActivationVector] {
        &self.frames
    }

    pub fn time(&self, frame: usize) -> f64 {
        frame as f64 / self.fps
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// `floor(duration · fps) + 1`, tolerant of products like `0.7 × 30` landing
/// a hair below an integer.
pub fn frame_count(duration: f64, fps: f64) -> usize {
    libm::floor(duration * fps + 1e-9) as usize + 1
}

/// Compiles a timeline into a sampled activation curve.
///
/// Gloss spans are timing references only and contribute nothing.
pub fn sample_timeline(
    t: &Timeline,
    grid: &CornerPoseGrid,
    lexicon: &PoseLexicon,
    policy: &LayerPolicy,
    fps: f64,
    mode: MappingMode,
) -> Result<SampledCurve, LayerError> {
    if !(fps > 0.0 && fps.is_finite()) {
        return Err(LayerError::InvalidFps(fps));
    }

    // resolve every span's pose once, in policy order
    let mut channels: Vec<(TrackKind, &[Span], Vec<ActivationVector>)> = Vec::new();
    for &kind in policy.priority() {
        let spans = t.track(kind);
        let poses = spans
            .iter()
            .map(|span| span_pose(span, grid, lexicon, mode))
            .collect::<Result<Vec<_>, _>>()?;
        channels.push((kind, spans, poses));
    }

    let count = frame_count(t.duration(), fps);
    let mut frames = Vec::with_capacity(count);
    let mut layers = Vec::with_capacity(channels.len());
    for i in 0..count {
        let time = i as f64 / fps;
        layers.clear();
        for (kind, spans, poses) in &channels {
            // spans are sorted and disjoint: only the last one starting before
            // `time` can be active
            let idx = spans.partition_point(|s| s.start < time);
            let Some(active) = idx.checked_sub(1) else {
                continue;
            };
            let weight = envelope_eval(&spans[active], time);
            if weight > 0.0 {
                layers.push(Layer {
                    vector: &poses[active],
                    weight,
                    kind: *kind,
                });
            }
        }
        frames.push(blend_layers(&ActivationVector::NEUTRAL, &layers, policy)?);
    }
    Ok(SampledCurve { fps, frames })
}

fn span_pose(
    span: &Span,
    grid: &CornerPoseGrid,
    lexicon: &PoseLexicon,
    mode: MappingMode,
) -> Result<ActivationVector, LayerError> {
    match &span.payload {
        Payload::Emotion(pa) => Ok(pa_to_pose(*pa, grid, mode)),
        Payload::Mouthing(name) | Payload::Brows(name) => lexicon
            .resolve(name, span.kind())
            .copied()
            .map_err(|source| LayerError::Lexicon {
                source,
                pos: span.origin,
            }),
        Payload::Gloss(_) => Ok(ActivationVector::NEUTRAL),
    }
}
