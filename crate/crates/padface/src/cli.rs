//! The `padface` command line.
//!
//! Exit status: 0 on success, 1 for bad input (unreadable or invalid files,
//! annotation errors, bad flags), 2 for internal failures such as a closed
//! output stream.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use padface_core::reference::DEFAULT_REFERENCE_K;
use padface_core::{
    corner_reference_sets, corner_targets, knn_pick, Corner, CornerPoseGrid, Diagnostic,
    LayerPolicy, MappingMode, PleasureArousal, PoseLexicon, Strictness,
};

use crate::compile::{compile, Assets, CompileOptions};
use crate::curves::CurveFormat;
use crate::diagnostics;

#[derive(Debug, Parser)]
#[command(
    name = "padface",
    version,
    about = "Compile emotion-annotated sign timelines into facial control curves"
)]
pub struct Cli {
    /// Print diagnostics as JSON lines instead of text.
    #[arg(long, global = true)]
    pub json_diagnostics: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile an annotation file into sampled control-unit curves.
    Compile(CompileArgs),
    /// Inspect a corner-pose grid.
    Grid {
        #[command(subcommand)]
        action: GridAction,
        /// Grid JSON file (defaults to the bundled grid).
        #[arg(long, global = true)]
        grid: Option<PathBuf>,
    },
    /// Pick the dataset samples nearest to a target or to every corner.
    Pick(PickArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, clap::Args)]
pub struct CompileArgs {
    /// Annotation file.
    pub input: PathBuf,
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub policy: Option<PathBuf>,
    /// Frame rate; overrides the file's `fps` directive.
    #[arg(long)]
    pub fps: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Continuous)]
    pub mode: ModeArg,
    /// Output file (defaults to standard output).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Clamp out-of-range pleasure/arousal values with a warning.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Subcommand)]
pub enum GridAction {
    /// Nonzero units of every corner pose, as a 3×3 table.
    Show,
    /// The nine corner targets in grid order.
    Corners,
}

#[derive(Debug, clap::Args)]
#[command(group(clap::ArgGroup::new("what").required(true).args(["target", "corners"])))]
pub struct PickArgs {
    /// CSV with `id,pleasure,arousal` columns.
    pub dataset: PathBuf,
    #[arg(short, default_value_t = DEFAULT_REFERENCE_K)]
    pub k: usize,
    /// Target point as `p,a`.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
    /// Report the nearest samples for each of the nine corners.
    #[arg(long)]
    pub corners: bool,
}

#[derive(Debug, clap::Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub policy: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Discrete,
    Continuous,
}

impl From<ModeArg> for MappingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Discrete => MappingMode::Discrete,
            ModeArg::Continuous => MappingMode::Continuous,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for CurveFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => CurveFormat::Json,
            FormatArg::Csv => CurveFormat::Csv,
        }
    }
}

/// Why a command stopped early.
enum Failure {
    /// Diagnostics about `file`; exit 1.
    User {
        file: String,
        diagnostics: Vec<Diagnostic>,
    },
    /// Exit 2.
    Internal(String),
}

impl Failure {
    fn user(file: &Path, kind: &'static str, message: impl Into<String>) -> Failure {
        Failure::User {
            file: file.display().to_string(),
            diagnostics: vec![Diagnostic::error(kind, message.into(), None)],
        }
    }
}

type Outcome = Result<(), Failure>;

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    json_diagnostics: bool,
}

impl Io<'_> {
    fn diagnostics(&mut self, file: &str, diags: &[Diagnostic]) {
        for d in diags {
            let line = if self.json_diagnostics {
                diagnostics::render_json(file, d)
            } else {
                diagnostics::render(file, d)
            };
            let _ = writeln!(self.stderr, "{line}");
        }
    }

    fn out(&mut self, text: &str) -> Outcome {
        self.stdout
            .write_all(text.as_bytes())
            .and_then(|()| self.stdout.flush())
            .map_err(|e| Failure::Internal(format!("cannot write output: {e}")))
    }
}

/// Runs the CLI with `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let is_info = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if is_info {
                let _ = stdout.write_all(rendered.as_bytes());
                return 0;
            }
            let _ = stderr.write_all(rendered.as_bytes());
            return 1;
        }
    };
    let mut io = Io {
        stdout,
        stderr,
        json_diagnostics: cli.json_diagnostics,
    };
    let outcome = match cli.command {
        Command::Compile(args) => cmd_compile(&args, &mut io),
        Command::Grid { action, grid } => cmd_grid(action, grid.as_deref(), &mut io),
        Command::Pick(args) => cmd_pick(&args, &mut io),
        Command::Serve(args) => cmd_serve(&args, &mut io),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::User { file, diagnostics }) => {
            io.diagnostics(&file, &diagnostics);
            1
        }
        Err(Failure::Internal(message)) => {
            let _ = writeln!(io.stderr, "error: internal: {message}");
            2
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path)
        .map_err(|e| Failure::user(path, "IoError", format!("cannot read file: {e}")))
}

pub fn load_grid_arg(path: Option<&Path>) -> Result<CornerPoseGrid, (String, Diagnostic)> {
    match path {
        None => Ok(crate::default_grid()),
        Some(path) => {
            let file = path.display().to_string();
            let bytes = std::fs::read(path).map_err(|e| {
                (
                    file.clone(),
                    Diagnostic::error("IoError", format!("cannot read file: {e}"), None),
                )
            })?;
            crate::grid_file::load_grid(&bytes)
                .map_err(|e| (file, Diagnostic::error(e.kind(), e.to_string(), None)))
        }
    }
}

fn grid_arg(path: Option<&Path>) -> Result<CornerPoseGrid, Failure> {
    load_grid_arg(path).map_err(|(file, d)| Failure::User {
        file,
        diagnostics: vec![d],
    })
}

fn lexicon_arg(path: Option<&Path>) -> Result<PoseLexicon, Failure> {
    match path {
        None => Ok(crate::default_lexicon()),
        Some(path) => crate::lexicon_file::load_lexicon(&read(path)?)
            .map_err(|e| Failure::user(path, e.kind(), e.to_string())),
    }
}

fn policy_arg(path: Option<&Path>) -> Result<LayerPolicy, Failure> {
    match path {
        None => Ok(LayerPolicy::default()),
        Some(path) => crate::policy_file::load_policy(&read(path)?)
            .map_err(|e| Failure::user(path, e.kind(), e.to_string())),
    }
}

fn assets(
    grid: Option<&Path>,
    lexicon: Option<&Path>,
    policy: Option<&Path>,
) -> Result<Assets, Failure> {
    Ok(Assets {
        grid: grid_arg(grid)?,
        lexicon: lexicon_arg(lexicon)?,
        policy: policy_arg(policy)?,
    })
}

fn cmd_compile(args: &CompileArgs, io: &mut Io<'_>) -> Outcome {
    let assets = assets(
        args.grid.as_deref(),
        args.lexicon.as_deref(),
        args.policy.as_deref(),
    )?;
    let bytes = read(&args.input)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::user(&args.input, "SyntaxError", "file is not valid UTF-8"))?;
    let options = CompileOptions {
        fps: args.fps,
        mode: args.mode.into(),
        format: args.format.into(),
        strictness: if args.lenient {
            Strictness::Lenient
        } else {
            Strictness::Strict
        },
    };
    let file = args.input.display().to_string();
    let compiled = compile(&text, &assets, &options).map_err(|f| Failure::User {
        file: file.clone(),
        diagnostics: f.diagnostics,
    })?;
    io.diagnostics(&file, &compiled.diagnostics);
    match &args.output {
        Some(path) => std::fs::write(path, compiled.output.as_bytes())
            .map_err(|e| Failure::user(path, "IoError", format!("cannot write file: {e}"))),
        None => io.out(&compiled.output),
    }
}

fn corner_label(c: Corner) -> String {
    format!("({}, {})", c.p(), c.a())
}

fn cmd_grid(action: GridAction, grid: Option<&Path>, io: &mut Io<'_>) -> Outcome {
    let grid = grid_arg(grid)?;
    let mut out = String::new();
    match action {
        GridAction::Corners => {
            for target in corner_targets() {
                out.push_str(&corner_label(target.nearest_corner()));
                out.push('\n');
            }
        }
        GridAction::Show => {
            out.push_str(&format!(
                "grid {} (version {})\n",
                grid.name(),
                grid.version()
            ));
            for row in Corner::ALL.chunks(3) {
                let a = row[0].a();
                let label = if a == 0 {
                    "0".to_string()
                } else {
                    format!("{a:+}")
                };
                out.push_str(&format!("\narousal {label}\n"));
                for &corner in row {
                    let pose = grid.pose(corner);
                    let cell = if pose.is_neutral() {
                        "neutral".to_string()
                    } else {
                        pose.iter()
                            .filter(|(_, v)| *v != 0.0)
                            .map(|(u, v)| format!("{u}={}", padface_core::Fixed6(v)))
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    out.push_str(&format!("  {:<8} {cell}\n", corner_label(corner)));
                }
            }
        }
    }
    io.out(&out)
}

fn parse_target(text: &str) -> Result<PleasureArousal, String> {
    let (p, a) = text
        .split_once(',')
        .ok_or_else(|| format!("target `{text}` must be written `p,a`"))?;
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("`{s}` is not a number"))
    };
    PleasureArousal::new(num(p)?, num(a)?).map_err(|e| e.to_string())
}

fn cmd_pick(args: &PickArgs, io: &mut Io<'_>) -> Outcome {
    let label = args.dataset.display().to_string();
    let target = match &args.target {
        Some(text) => Some(parse_target(text).map_err(|m| Failure::User {
            file: "--target".into(),
            diagnostics: vec![Diagnostic::error("RangeError", m, None)],
        })?),
        None => None,
    };
    let bytes = read(&args.dataset)?;
    let dataset = crate::dataset::load_dataset(&label, &bytes).map_err(|e| Failure::User {
        file: label.clone(),
        diagnostics: vec![Diagnostic::error(
            e.kind(),
            e.to_string(),
            e.line().map(|line| padface_core::notation::SourcePos {
                line: u32::try_from(line).unwrap_or(u32::MAX),
                col: 1,
            }),
        )],
    })?;
    let pick_failure = |e: padface_core::reference::ReferenceError| {
        Failure::user(&args.dataset, e.kind(), e.to_string())
    };
    let report = match target {
        Some(target) => {
            let hits = knn_pick(&dataset, target, args.k).map_err(pick_failure)?;
            crate::report::target_report(target, args.k, &hits)
        }
        None => {
            let sets = corner_reference_sets(&dataset, args.k).map_err(pick_failure)?;
            crate::report::corners_report(args.k, &sets)
        }
    };
    io.out(&report)
}

fn cmd_serve(args: &ServeArgs, io: &mut Io<'_>) -> Outcome {
    let assets = assets(
        args.grid.as_deref(),
        args.lexicon.as_deref(),
        args.policy.as_deref(),
    )?;
    let runtime = tokio::runtime::Runtime::new()
        .map_err(|e| Failure::Internal(format!("cannot start runtime: {e}")))?;
    let addr = format!("{}:{}", args.host, args.port);
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .map_err(|e| Failure::User {
                file: addr.clone(),
                diagnostics: vec![Diagnostic::error(
                    "BindError",
                    format!("cannot listen: {e}"),
                    None,
                )],
            })?;
        let local = listener
            .local_addr()
            .map_or_else(|_| addr.clone(), |a| a.to_string());
        let _ = writeln!(io.stderr, "listening on http://{local}");
        axum::serve(listener, crate::serve::router(assets))
            .await
            .map_err(|e| Failure::Internal(format!("server stopped: {e}")))
    })
}
