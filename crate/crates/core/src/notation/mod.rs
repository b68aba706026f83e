//! Annotation timelines and their line-oriented text format.
//!
//! ```text
//! # greeting
//! duration 2.4
//! fps 30
//! gloss    0.0 1.2 HELLO
//! emotion  0.0 2.4 p=1 a=0.5 attack=0.3 release=0.3
//! mouthing 0.4 0.9 pah w=0.8
//! brows    1.2 2.0 raised
//! ```
//!
//! The first directive must be `duration`; `fps` is optional. Span lines are
//! `<track> <start> <end> <payload> [w=<weight>] [attack=<sec>] [release=<sec>]`.
//! Unspecified envelopes default to `min(0.1, 10% of the timeline duration)`.
//! Every number is quantized to 6 decimals on input so the canonical
//! serialization round-trips exactly.

mod lexicon;
mod parse;
mod serialize;
mod validate;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::emotion::PleasureArousal;
use crate::num::quantize;
use crate::units::Region;

pub use self::lexicon::{LexiconError, LexiconPose, PoseLexicon};
pub use self::parse::{parse_annotation, parse_annotation_with, ParseOptions, Parsed};
pub use self::serialize::serialize_annotation;
pub use self::validate::validate_timeline;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrackKind {
    Gloss,
    Emotion,
    Mouthing,
    Brows,
}

impl TrackKind {
    /// Canonical serialization order.
    pub const ALL: [TrackKind; 4] = [
        TrackKind::Gloss,
        TrackKind::Emotion,
        TrackKind::Mouthing,
        TrackKind::Brows,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TrackKind::Gloss => "gloss",
            TrackKind::Emotion => "emotion",
            TrackKind::Mouthing => "mouthing",
            TrackKind::Brows => "brows",
        }
    }

    pub fn from_name(name: &str) -> Option<TrackKind> {
        TrackKind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Region a lexicon pose used on this track may touch.
    pub fn lexicon_region(self) -> Option<Region> {
        match self {
            TrackKind::Mouthing => Some(Region::Lower),
            TrackKind::Brows => Some(Region::Upper),
            TrackKind::Gloss | TrackKind::Emotion => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for TrackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// 1-based line and column (in characters) of a token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourcePos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Onset and offset ramp lengths in seconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub attack: f64,
    pub release: f64,
}

impl Envelope {
    pub const NONE: Envelope = Envelope {
        attack: 0.0,
        release: 0.0,
    };

    /// Envelope applied when a span line gives no `attack`/`release`.
    pub fn default_for(timeline_duration: f64) -> Envelope {
        let ramp = quantize(f64::min(0.1, 0.1 * timeline_duration));
        Envelope {
            attack: ramp,
            release: ramp,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Gloss(String),
    Emotion(PleasureArousal),
    Mouthing(String),
    Brows(String),
}

impl Payload {
    pub fn kind(&self) -> TrackKind {
        match self {
            Payload::Gloss(_) => TrackKind::Gloss,
            Payload::Emotion(_) => TrackKind::Emotion,
            Payload::Mouthing(_) => TrackKind::Mouthing,
            Payload::Brows(_) => TrackKind::Brows,
        }
    }

    /// Lexicon pose name for mouthing and brows payloads.
    pub fn pose_name(&self) -> Option<&str> {
        match self {
            Payload::Mouthing(name) | Payload::Brows(name) => Some(name),
            _ => None,
        }
    }
}

/// A timed annotation on one track.
///
/// Equality ignores `origin`, so a reparsed timeline compares equal to the one
/// it was serialized from.
#[derive(Clone, Debug)]
pub struct Span {
    pub start: f64,
    pub end: f64,
    pub payload: Payload,
    /// Peak influence in `(0, 1]`.
    pub weight: f64,
    pub envelope: Envelope,
    pub origin: Option<SourcePos>,
}

impl Span {
    pub fn new(start: f64, end: f64, payload: Payload, envelope: Envelope) -> Span {
        Span {
            start,
            end,
            payload,
            weight: 1.0,
            envelope,
            origin: None,
        }
    }

    pub fn with_weight(mut self, weight: f64) -> Span {
        self.weight = weight;
        self
    }

    pub fn kind(&self) -> TrackKind {
        self.payload.kind()
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    fn describe(&self) -> SpanRef {
        SpanRef {
            kind: self.kind(),
            start: self.start,
            end: self.end,
            origin: self.origin,
        }
    }
}

impl PartialEq for Span {
    fn eq(&self, other: &Self) -> bool {
        self.start == other.start
            && self.end == other.end
            && self.payload == other.payload
            && self.weight == other.weight
            && self.envelope == other.envelope
    }
}

/// Short description of a span for error messages.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpanRef {
    pub kind: TrackKind,
    pub start: f64,
    pub end: f64,
    pub origin: Option<SourcePos>,
}

impl fmt::Display for SpanRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{:.6}, {:.6}]", self.kind, self.start, self.end)?;
        if let Some(pos) = self.origin {
            write!(f, " at line {}", pos.line)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum NotationError {
    #[error("{message}")]
    Syntax { pos: SourcePos, message: String },
    #[error("span {second} overlaps span {first}")]
    Overlap { first: SpanRef, second: SpanRef },
    #[error("{message}")]
    Range {
        pos: Option<SourcePos>,
        message: String,
    },
    #[error("unknown {track} pose `{name}`")]
    UnknownPose {
        pos: Option<SourcePos>,
        track: TrackKind,
        name: String,
    },
    #[error("{track} pose `{name}` sets {unit}, which is outside the {region} face")]
    PoseRegion {
        pos: Option<SourcePos>,
        track: TrackKind,
        name: String,
        unit: crate::units::ControlUnit,
        region: Region,
    },
}

impl NotationError {
    /// Stable error kind used in diagnostics and API responses.
    pub fn kind(&self) -> &'static str {
        match self {
            NotationError::Syntax { .. } => "SyntaxError",
            NotationError::Overlap { .. } => "OverlapError",
            NotationError::Range { .. } => "RangeError",
            NotationError::UnknownPose { .. } => "UnknownPose",
            NotationError::PoseRegion { .. } => "PoseRegionError",
        }
    }

    pub fn position(&self) -> Option<SourcePos> {
        match self {
            NotationError::Syntax { pos, .. } => Some(*pos),
            NotationError::Overlap { second, .. } => second.origin,
            NotationError::Range { pos, .. }
            | NotationError::UnknownPose { pos, .. }
            | NotationError::PoseRegion { pos, .. } => *pos,
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            kind: self.kind(),
            message: alloc::string::ToString::to_string(self),
            pos: self.position(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl Severity {
    pub fn name(self) -> &'static str {
        match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: &'static str,
    pub message: String,
    pub pos: Option<SourcePos>,
}

impl Diagnostic {
    pub fn warning(kind: &'static str, message: String, pos: Option<SourcePos>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            kind,
            message,
            pos,
        }
    }

    pub fn error(kind: &'static str, message: String, pos: Option<SourcePos>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            kind,
            message,
            pos,
        }
    }
}

/// Parsed annotation document: one span list per track.
#[derive(Clone, Debug, PartialEq)]
pub struct Timeline {
    duration: f64,
    fps_hint: Option<f64>,
    tracks: [Vec<Span>; 4],
}

impl Timeline {
    pub fn new(duration: f64) -> Timeline {
        Timeline {
            duration,
            fps_hint: None,
            tracks: Default::default(),
        }
    }

    pub fn with_fps_hint(mut self, fps: f64) -> Timeline {
        self.fps_hint = Some(fps);
        self
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn fps_hint(&self) -> Option<f64> {
        self.fps_hint
    }

    pub fn default_envelope(&self) -> Envelope {
        Envelope::default_for(self.duration)
    }

    /// Spans of one track, sorted by start and pairwise disjoint.
    pub fn track(&self, kind: TrackKind) -> &[Span] {
        &self.tracks[kind.index()]
    }

    /// All spans in canonical track order.
    pub fn spans(&self) -> impl Iterator<Item = &Span> {
        self.tracks.iter().flatten()
    }

    pub fn is_empty(&self) -> bool {
        self.tracks.iter().all(Vec::is_empty)
    }

    /// Adds a span to its track, keeping the track sorted.
    ///
    /// Rejects empty or inverted intervals, weights outside `(0, 1]`, negative
    /// ramps, and overlap with a span already on the track (touching ends are
    /// fine). Spans past the timeline end are accepted here and reported by
    /// [`validate_timeline`].
    pub fn insert(&mut self, span: Span) -> Result<(), NotationError> {
        let range = |message: String| NotationError::Range {
            pos: span.origin,
            message,
        };
        if !(span.start >= 0.0 && span.end > span.start && span.end.is_finite()) {
            return Err(range(alloc::format!(
                "span must satisfy 0 <= start < end, got [{}, {}]",
                span.start,
                span.end
            )));
        }
        if !(span.weight > 0.0 && span.weight <= 1.0) {
            return Err(range(alloc::format!(
                "weight {} is outside (0, 1]",
                span.weight
            )));
        }
        let Envelope { attack, release } = span.envelope;
        if !(attack >= 0.0 && release >= 0.0 && attack.is_finite() && release.is_finite()) {
            return Err(range(alloc::format!(
                "attack and release must be non-negative, got {attack} and {release}"
            )));
        }

        let track = &mut self.tracks[span.kind().index()];
        let at = track.partition_point(|s| s.start <= span.start);
        let clash = at
            .checked_sub(1)
            .map(|i| &track[i])
            .filter(|prev| prev.end > span.start)
            .or_else(|| track.get(at).filter(|next| span.end > next.start));
        if let Some(existing) = clash {
            return Err(NotationError::Overlap {
                first: existing.describe(),
                second: span.describe(),
            });
        }
        track.insert(at, span);
        Ok(())
    }
}
