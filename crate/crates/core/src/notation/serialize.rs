use alloc::string::String;
use core::fmt::Write;

use super::{Payload, Timeline};
use crate::num::Fixed6;

/// Canonical text form: `duration`, optional `fps`, then spans track by track
/// in start order. `w`, `attack` and `release` are written only when they
/// differ from their defaults.
pub fn serialize_annotation(t: &Timeline) -> String {
    let mut out = String::new();
    let default_envelope = t.default_envelope();
    // writing to a String cannot fail
    let _ = writeln!(out, "duration {}", Fixed6(t.duration()));
    if let Some(fps) = t.fps_hint() {
        let _ = writeln!(out, "fps {}", Fixed6(fps));
    }
    for span in t.spans() {
        let _ = write!(
            out,
            "{} {} {} ",
            span.kind(),
            Fixed6(span.start),
            Fixed6(span.end)
        );
        let _ = match &span.payload {
            Payload::Emotion(pa) => write!(out, "p={} a={}", Fixed6(pa.p()), Fixed6(pa.a())),
            Payload::Gloss(label) | Payload::Mouthing(label) | Payload::Brows(label) => {
                out.write_str(label)
            }
        };
        if span.weight != 1.0 {
            let _ = write!(out, " w={}", Fixed6(span.weight));
        }
        if span.envelope.attack != default_envelope.attack {
            let _ = write!(out, " attack={}", Fixed6(span.envelope.attack));
        }
        if span.envelope.release != default_envelope.release {
            let _ = write!(out, " release={}", Fixed6(span.envelope.release));
        }
        out.push('\n');
    }
    out
}
