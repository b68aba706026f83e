use alloc::format;
use alloc::vec::Vec;

use super::{Diagnostic, Timeline, TrackKind};

const EPS: f64 = 1e-9;

/// Lints a timeline: spans outside `[0, duration]` are errors; envelopes that
/// never reach full weight, and mouthing spans whose apex has no length, are
/// warnings.
pub fn validate_timeline(t: &Timeline) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for span in t.spans() {
        let what = span.describe();
        if span.start < 0.0 || span.end > t.duration() {
            out.push(Diagnostic::error(
                "RangeError",
                format!(
                    "span {what} extends past the timeline [0, {}]",
                    t.duration()
                ),
                span.origin,
            ));
        }
        if span.kind() == TrackKind::Gloss {
            continue;
        }
        let ramps = span.envelope.attack + span.envelope.release;
        let length = span.length();
        if ramps > length + EPS {
            out.push(Diagnostic::warning(
                "EnvelopeWarning",
                format!(
                    "span {what} never reaches full weight: attack + release = {ramps:.6} s exceeds its length {length:.6} s"
                ),
                span.origin,
            ));
        } else if span.kind() == TrackKind::Mouthing && (ramps - length).abs() <= EPS {
            out.push(Diagnostic::warning(
                "EnvelopeWarning",
                format!("mouthing span {what} has a zero-length apex"),
                span.origin,
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emotion::PleasureArousal;
    use crate::notation::{parse_annotation, Envelope, Payload, Severity, Span};

    #[test]
    fn clean_file_has_no_diagnostics() {
        let t = parse_annotation(
            "duration 2\ngloss 0 1 HELLO\nemotion 0 2 p=1 a=0\nmouthing 0.5 1 pah\nbrows 1 2 raised\n",
        )
        .unwrap();
        assert!(validate_timeline(&t).is_empty());
    }

    #[test]
    fn span_past_duration_is_an_error() {
        let mut t = Timeline::new(1.0);
        t.insert(Span::new(
            0.5,
            1.5,
            Payload::Emotion(PleasureArousal::NEUTRAL),
            Envelope::NONE,
        ))
        .unwrap();
        let diags = validate_timeline(&t);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Error);
        assert!(diags[0].message.contains("[0.500000, 1.500000]"));
    }

    #[test]
    fn short_emotion_span_warns_about_unreachable_apex() {
        // default ramps are 0.1 s each once the timeline is at least 1 s long
        let t = parse_annotation("duration 2\nemotion 0.5 0.6 p=1 a=1\n").unwrap();
        let span = &t.track(TrackKind::Emotion)[0];
        assert_eq!(
            span.envelope,
            Envelope {
                attack: 0.1,
                release: 0.1
            }
        );
        let diags = validate_timeline(&t);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Warning);
        assert!(diags[0].message.contains("never reaches full weight"));
    }

    #[test]
    fn mouthing_with_zero_apex_warns() {
        let t = parse_annotation("duration 2\nmouthing 0.5 0.7 pah\n").unwrap();
        let diags = validate_timeline(&t);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("zero-length apex"));
    }
}
