//! Annotation text → exported curve, shared by `padface compile` and
//! `POST /compile` so both produce the same bytes for the same input.

use padface_core::layering::LayerError;
use padface_core::notation::{parse_annotation_with, LexiconError, ParseOptions};
use padface_core::{
    sample_timeline, validate_timeline, CornerPoseGrid, Diagnostic, LayerPolicy, MappingMode,
    PoseLexicon, Severity, Strictness,
};

use crate::curves::{export_curves, CurveFormat};

/// Frame rate used when neither the caller nor the file names one.
pub const DEFAULT_FPS: f64 = 30.0;

#[derive(Clone, Copy, Debug, Default)]
pub struct CompileOptions {
    /// Overrides the file's `fps` directive.
    pub fps: Option<f64>,
    pub mode: MappingMode,
    pub format: CurveFormat,
    pub strictness: Strictness,
}

/// Immutable inputs every compile reads.
#[derive(Clone, Debug)]
pub struct Assets {
    pub grid: CornerPoseGrid,
    pub lexicon: PoseLexicon,
    pub policy: LayerPolicy,
}

impl Default for Assets {
    fn default() -> Self {
        Assets {
            grid: crate::default_grid(),
            lexicon: crate::default_lexicon(),
            policy: LayerPolicy::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Compiled {
    pub output: String,
    /// Warnings only.
    pub diagnostics: Vec<Diagnostic>,
}

/// All diagnostics gathered before the compile stopped; at least one is an
/// error.
#[derive(Clone, Debug, PartialEq)]
pub struct CompileFailure {
    pub diagnostics: Vec<Diagnostic>,
}

impl CompileFailure {
    fn single(d: Diagnostic) -> Self {
        CompileFailure {
            diagnostics: vec![d],
        }
    }

    /// The first error, as reported by the HTTP API.
    pub fn first_error(&self) -> &Diagnostic {
        self.diagnostics
            .iter()
            .find(|d| d.severity == Severity::Error)
            .expect("a failure carries an error")
    }
}

pub fn compile(
    text: &str,
    assets: &Assets,
    options: &CompileOptions,
) -> Result<Compiled, CompileFailure> {
    if let Some(fps) = options.fps {
        if !(fps > 0.0 && fps.is_finite()) {
            return Err(CompileFailure::single(Diagnostic::error(
                "RangeError",
                format!("frame rate must be positive, got {fps}"),
                None,
            )));
        }
    }

    let parse_options = ParseOptions {
        strictness: options.strictness,
        lexicon: Some(&assets.lexicon),
    };
    let parsed = parse_annotation_with(text, &parse_options)
        .map_err(|e| CompileFailure::single(e.to_diagnostic()))?;

    let mut diagnostics = parsed.warnings;
    diagnostics.extend(validate_timeline(&parsed.timeline));
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(CompileFailure { diagnostics });
    }

    let timeline = parsed.timeline;
    let fps = options.fps.or(timeline.fps_hint()).unwrap_or(DEFAULT_FPS);
    let curve = sample_timeline(
        &timeline,
        &assets.grid,
        &assets.lexicon,
        &assets.policy,
        fps,
        options.mode,
    )
    .map_err(|e| {
        diagnostics.push(layer_diagnostic(&e));
        CompileFailure {
            diagnostics: diagnostics.clone(),
        }
    })?;

    Ok(Compiled {
        output: export_curves(&curve, options.format),
        diagnostics,
    })
}

fn layer_diagnostic(e: &LayerError) -> Diagnostic {
    match e {
        LayerError::Lexicon { source, pos } => {
            let kind = match source {
                LexiconError::Unknown(_) => "UnknownPose",
                LexiconError::OutsideRegion { .. } => "PoseRegionError",
            };
            Diagnostic::error(kind, source.to_string(), *pos)
        }
        LayerError::InvalidFps(_) => Diagnostic::error("RangeError", e.to_string(), None),
        LayerError::UnknownTrackKind(_) => Diagnostic::error("PolicyError", e.to_string(), None),
    }
}
