use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{
    Diagnostic, Envelope, LexiconError, NotationError, Payload, PoseLexicon, SourcePos, Span,
    Timeline, TrackKind,
};
use crate::emotion::{PleasureArousal, Strictness};
use crate::num::quantize;

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions<'a> {
    pub strictness: Strictness,
    /// When set, mouthing and brow pose names must resolve here.
    pub lexicon: Option<&'a PoseLexicon>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub timeline: Timeline,
    /// Non-fatal findings, e.g. clamped emotion values in lenient mode.
    pub warnings: Vec<Diagnostic>,
}

/// Parses an annotation document with strict ranges and no lexicon check.
pub fn parse_annotation(text: &str) -> Result<Timeline, NotationError> {
    parse_annotation_with(text, &ParseOptions::default()).map(|p| p.timeline)
}

pub fn parse_annotation_with(
    text: &str,
    options: &ParseOptions<'_>,
) -> Result<Parsed, NotationError> {
    let mut parser = Parser {
        options,
        timeline: None,
        fps_seen: false,
        warnings: Vec::new(),
    };
    let mut last_line = 0;
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = u32::try_from(idx + 1).unwrap_or(u32::MAX);
        last_line = line_no;
        let tokens = tokenize(raw, line_no);
        if !tokens.is_empty() {
            parser.line(&tokens)?;
        }
    }
    let timeline = parser.timeline.ok_or_else(|| NotationError::Syntax {
        pos: SourcePos {
            line: last_line.max(1),
            col: 1,
        },
        message: "missing `duration` directive".to_string(),
    })?;
    Ok(Parsed {
        timeline,
        warnings: parser.warnings,
    })
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    pos: SourcePos,
}

impl Token<'_> {
    /// Position just past the token, for "expected more" errors.
    fn after(&self) -> SourcePos {
        SourcePos {
            line: self.pos.line,
            col: self.pos.col + self.text.chars().count() as u32,
        }
    }
}

/// Splits a line into whitespace-separated tokens, dropping `#` comments.
fn tokenize(line: &str, line_no: u32) -> Vec<Token<'_>> {
    let line = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start: Option<(usize, u32)> = None;
    let mut col = 0u32;
    for (byte, ch) in line.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                tokens.push(Token {
                    text: &line[b..byte],
                    pos: SourcePos {
                        line: line_no,
                        col: c,
                    },
                });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token {
            text: &line[b..],
            pos: SourcePos {
                line: line_no,
                col: c,
            },
        });
    }
    tokens
}

fn syntax(pos: SourcePos, message: impl Into<String>) -> NotationError {
    NotationError::Syntax {
        pos,
        message: message.into(),
    }
}

fn range(pos: SourcePos, message: String) -> NotationError {
    NotationError::Range {
        pos: Some(pos),
        message,
    }
}

fn number(tok: &Token<'_>, text: &str, what: &str) -> Result<f64, NotationError> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(quantize(v)),
        _ => Err(syntax(
            tok.pos,
            format!("expected a number for {what}, found `{}`", tok.text),
        )),
    }
}

fn keyed<'t>(tok: &Token<'t>, key: &str) -> Result<&'t str, NotationError> {
    match tok.text.split_once('=') {
        Some((k, v)) if k == key => Ok(v),
        _ => Err(syntax(
            tok.pos,
            format!("expected `{key}=<number>`, found `{}`", tok.text),
        )),
    }
}

struct Parser<'o> {
    options: &'o ParseOptions<'o>,
    timeline: Option<Timeline>,
    fps_seen: bool,
    warnings: Vec<Diagnostic>,
}

impl Parser<'_> {
    fn line(&mut self, tokens: &[Token<'_>]) -> Result<(), NotationError> {
        let head = tokens[0];
        match head.text {
            "duration" => self.duration(tokens),
            "fps" => self.fps(tokens),
            other => {
                let Some(kind) = TrackKind::from_name(other) else {
                    return Err(syntax(
                        head.pos,
                        format!(
                            "unknown directive `{other}`; expected duration, fps, gloss, emotion, mouthing or brows"
                        ),
                    ));
                };
                if self.timeline.is_none() {
                    return Err(syntax(
                        head.pos,
                        "expected `duration` directive before any span",
                    ));
                }
                self.span(kind, tokens)
            }
        }
    }

    fn single_argument<'t>(tokens: &[Token<'t>]) -> Result<Token<'t>, NotationError> {
        match tokens {
            [_, arg] => Ok(*arg),
            [head] => Err(syntax(
                head.after(),
                format!("`{}` needs a value", head.text),
            )),
            [_, _, extra, ..] => Err(syntax(extra.pos, format!("unexpected `{}`", extra.text))),
            [] => unreachable!("blank lines are skipped"),
        }
    }

    fn duration(&mut self, tokens: &[Token<'_>]) -> Result<(), NotationError> {
        if self.timeline.is_some() {
            return Err(syntax(tokens[0].pos, "duplicate `duration` directive"));
        }
        let arg = Self::single_argument(tokens)?;
        let duration = number(&arg, arg.text, "duration")?;
        if duration < 0.0 {
            return Err(range(arg.pos, format!("duration {duration} is negative")));
        }
        self.timeline = Some(Timeline::new(duration));
        Ok(())
    }

    fn fps(&mut self, tokens: &[Token<'_>]) -> Result<(), NotationError> {
        let Some(timeline) = self.timeline.as_mut() else {
            return Err(syntax(
                tokens[0].pos,
                "expected `duration` directive before `fps`",
            ));
        };
        if self.fps_seen {
            return Err(syntax(tokens[0].pos, "duplicate `fps` directive"));
        }
        let arg = Self::single_argument(tokens)?;
        let fps = number(&arg, arg.text, "fps")?;
        if fps <= 0.0 {
            return Err(range(arg.pos, format!("fps must be positive, got {fps}")));
        }
        timeline.fps_hint = Some(fps);
        self.fps_seen = true;
        Ok(())
    }

    fn span(&mut self, kind: TrackKind, tokens: &[Token<'_>]) -> Result<(), NotationError> {
        let timeline = self.timeline.as_ref().expect("checked by caller");
        let duration = timeline.duration();
        let default_envelope = timeline.default_envelope();

        let mut rest = tokens.iter();
        let head = rest.next().expect("non-empty line");
        let mut last = *head;
        let mut next = |what: &str| -> Result<Token<'_>, NotationError> {
            let tok = rest
                .next()
                .copied()
                .ok_or_else(|| syntax(last.after(), format!("expected {what}")))?;
            last = tok;
            Ok(tok)
        };

        let start_tok = next("start time")?;
        let start = number(&start_tok, start_tok.text, "start time")?;
        let end_tok = next("end time")?;
        let end = number(&end_tok, end_tok.text, "end time")?;
        if start < 0.0 {
            return Err(range(
                start_tok.pos,
                format!("start time {start} is negative"),
            ));
        }
        if end <= start {
            return Err(range(
                end_tok.pos,
                format!("end time {end} must be after start time {start}"),
            ));
        }
        if end > duration {
            return Err(range(
                end_tok.pos,
                format!("end time {end} is past the timeline duration {duration}"),
            ));
        }

        let payload = match kind {
            TrackKind::Gloss => Payload::Gloss(next("gloss label")?.text.to_string()),
            TrackKind::Emotion => {
                let p_tok = next("`p=<number>`")?;
                let p = number(&p_tok, keyed(&p_tok, "p")?, "p")?;
                let a_tok = next("`a=<number>`")?;
                let a = number(&a_tok, keyed(&a_tok, "a")?, "a")?;
                Payload::Emotion(self.emotion(p, a, &p_tok, &a_tok)?)
            }
            TrackKind::Mouthing | TrackKind::Brows => {
                let tok = next("pose name")?;
                self.check_pose(kind, &tok)?;
                let name = tok.text.to_string();
                if kind == TrackKind::Mouthing {
                    Payload::Mouthing(name)
                } else {
                    Payload::Brows(name)
                }
            }
        };

        let mut weight = None;
        let mut attack = None;
        let mut release = None;
        for tok in rest {
            let Some((key, value)) = tok.text.split_once('=') else {
                return Err(syntax(
                    tok.pos,
                    format!(
                        "unexpected `{}`; expected w=, attack= or release=",
                        tok.text
                    ),
                ));
            };
            let slot = match key {
                "w" => &mut weight,
                "attack" => &mut attack,
                "release" => &mut release,
                _ => {
                    return Err(syntax(
                        tok.pos,
                        format!("unknown option `{key}`; expected w, attack or release"),
                    ))
                }
            };
            if slot.is_some() {
                return Err(syntax(tok.pos, format!("duplicate option `{key}`")));
            }
            *slot = Some((number(tok, value, key)?, tok.pos));
        }

        let weight = match weight {
            Some((w, pos)) if !(w > 0.0 && w <= 1.0) => {
                return Err(range(pos, format!("weight {w} is outside (0, 1]")));
            }
            Some((w, _)) => w,
            None => 1.0,
        };
        for (value, what) in [(attack, "attack"), (release, "release")] {
            if let Some((v, pos)) = value {
                if v < 0.0 {
                    return Err(range(pos, format!("{what} {v} is negative")));
                }
            }
        }
        let envelope = Envelope {
            attack: attack.map_or(default_envelope.attack, |(v, _)| v),
            release: release.map_or(default_envelope.release, |(v, _)| v),
        };

        let span = Span {
            start,
            end,
            payload,
            weight,
            envelope,
            origin: Some(head.pos),
        };
        self.timeline
            .as_mut()
            .expect("checked by caller")
            .insert(span)
    }

    fn emotion(
        &mut self,
        p: f64,
        a: f64,
        p_tok: &Token<'_>,
        a_tok: &Token<'_>,
    ) -> Result<PleasureArousal, NotationError> {
        match PleasureArousal::resolve(p, a, self.options.strictness) {
            Ok((pa, clamped)) => {
                if clamped {
                    self.warnings.push(Diagnostic::warning(
                        "RangeWarning",
                        format!("emotion p={p} a={a} clamped to p={} a={}", pa.p(), pa.a()),
                        Some(p_tok.pos),
                    ));
                }
                Ok(pa)
            }
            Err(_) => {
                let (tok, value, axis) = if (-1.0..=1.0).contains(&p) {
                    (a_tok, a, "arousal")
                } else {
                    (p_tok, p, "pleasure")
                };
                Err(range(tok.pos, format!("{axis} {value} is outside [-1, 1]")))
            }
        }
    }

    fn check_pose(&self, kind: TrackKind, tok: &Token<'_>) -> Result<(), NotationError> {
        let Some(lexicon) = self.options.lexicon else {
            return Ok(());
        };
        match lexicon.resolve(tok.text, kind) {
            Ok(_) => Ok(()),
            Err(LexiconError::Unknown(name)) => Err(NotationError::UnknownPose {
                pos: Some(tok.pos),
                track: kind,
                name,
            }),
            Err(LexiconError::OutsideRegion { name, unit, region }) => {
                Err(NotationError::PoseRegion {
                    pos: Some(tok.pos),
                    track: kind,
                    name,
                    unit,
                    region,
                })
            }
        }
    }
}
