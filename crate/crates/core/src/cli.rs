//! The `fcakit` command line.
//!
//! Exit codes: 0 success, 2 input parse error, 3 output I/O error, 4 bind
//! failure, 64 usage error, 130 aborted by the user.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::context::{ContextTable, FormalContext};
use crate::cxt::{parse_cxt, write_cxt};
use crate::exploration::{question_sentence, ExplorationEvent, ExplorationSession};
use crate::implications::{listing_order, render_implication, render_listing, stem_base, ImplicationReport};
use crate::lattice::ConceptLattice;
use crate::layout::build_scene;
use crate::service::{ServiceConfig, Workspace, DEFAULT_MAX_CONCEPTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_OUTPUT: i32 = 3;
pub const EXIT_BIND: i32 = 4;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_ABORT: i32 = 130;

pub const WORKSPACE_ENV: &str = "FCAKIT_WORKSPACE";
pub const DEFAULT_WORKSPACE: &str = "./fcakit-workspace";

#[derive(Debug, Parser)]
#[command(name = "fcakit", version, about = "Formal concept analysis toolkit")]
pub struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagramFormat {
    Dot,
    Svg,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Cxt,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the size of a context and its number of concepts.
    Info { path: PathBuf },
    /// Print the number of concepts.
    Concepts { path: PathBuf },
    /// Render the line diagram of the concept lattice.
    Lattice {
        path: PathBuf,
        #[arg(short, long, value_enum, default_value = "svg")]
        format: DiagramFormat,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the canonical implication base.
    Implications { path: PathBuf },
    /// Attribute exploration in the terminal.
    ///
    /// Answer `y` to accept a question, or `n <name>; <attr>, <attr>, ...`
    /// to add a counterexample object.
    Explore {
        path: PathBuf,
        /// Read answers from this file instead of standard input.
        #[arg(long)]
        answers: Option<PathBuf>,
        /// Write the enlarged context here when finished.
        #[arg(long)]
        save: Option<PathBuf>,
        /// Session log (JSON lines); defaults to the workspace sessions
        /// directory.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Convert between CXT and the JSON table format.
    Convert {
        input: PathBuf,
        output: PathBuf,
        /// Output format; guessed from the output extension when omitted.
        #[arg(long, value_enum)]
        to: Option<TableFormat>,
    },
    /// Run the HTTP service and web UI.
    Serve {
        #[arg(long)]
        workspace: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        /// Directory with the built web UI.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_CONCEPTS)]
        max_concepts: usize,
    },
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn output(path: &Path, e: io::Error) -> Self {
        Failure::new(EXIT_OUTPUT, format!("cannot write {}: {e}", path.display()))
    }
}

type CliResult = Result<(), Failure>;

/// Terminal streams, replaceable in tests.
pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Parses arguments and runs the command, returning the exit code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(io.stderr, "{text}");
            } else {
                let _ = write!(io.stdout, "{text}");
            }
            return code;
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match execute(cli.command, io) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(io.stderr, "fcakit: {}", f.message);
            f.code
        }
    }
}

fn read_context(path: &Path) -> Result<FormalContext, Failure> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let parsed = if is_json_path(path) {
        serde_json::from_slice::<ContextTable>(&bytes)
            .map_err(|e| e.to_string())
            .and_then(|t| FormalContext::from_table(&t).map_err(|e| e.to_string()))
    } else {
        parse_cxt(&bytes).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn is_json_path(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn emit(io: &mut Io<'_>, output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::output(path, e)),
        None => io
            .stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(EXIT_OUTPUT, format!("cannot write output: {e}"))),
    }
}

fn execute(command: Command, io: &mut Io<'_>) -> CliResult {
    match command {
        Command::Info { path } => {
            let ctx = read_context(&path)?;
            let text = format!(
                "objects: {}, attributes: {}, concepts: {}\ncrosses: {}\n",
                ctx.object_count(),
                ctx.attribute_count(),
                ctx.concept_count(),
                ctx.cross_count()
            );
            emit(io, None, &text)
        }
        Command::Concepts { path } => {
            let ctx = read_context(&path)?;
            emit(io, None, &format!("{}\n", ctx.concept_count()))
        }
        Command::Lattice {
            path,
            format,
            output,
        } => {
            let ctx = read_context(&path)?;
            let scene = build_scene(&ConceptLattice::build(&ctx));
            let text = match format {
                DiagramFormat::Dot => scene.to_dot(),
                DiagramFormat::Svg => scene.to_svg(),
                DiagramFormat::Json => scene.to_json(),
            };
            emit(io, output.as_deref(), &text)
        }
        Command::Implications { path } => {
            let ctx = read_context(&path)?;
            emit(io, None, &render_listing(&ctx, &stem_base(&ctx)))
        }
        Command::Explore {
            path,
            answers,
            save,
            log,
        } => {
            let ctx = read_context(&path)?;
            let log = match log {
                Some(p) => p,
                None => default_log_path(&path)?,
            };
            match answers {
                Some(file) => {
                    let f = fs::File::open(&file).map_err(|e| {
                        Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", file.display()))
                    })?;
                    let mut reader = BufReader::new(f);
                    explore(&ctx, &mut reader, io.stdout, io.stderr, &log, save.as_deref())
                }
                None => explore(&ctx, io.stdin, io.stdout, io.stderr, &log, save.as_deref()),
            }
        }
        Command::Convert { input, output, to } => {
            let ctx = read_context(&input)?;
            let to = to.unwrap_or(if is_json_path(&output) {
                TableFormat::Json
            } else {
                TableFormat::Cxt
            });
            let text = match to {
                TableFormat::Cxt => write_cxt(&ctx),
                TableFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&ctx.to_table()).expect("table serializes");
                    s.push('\n');
                    s
                }
            };
            emit(io, Some(&output), &text)
        }
        Command::Serve {
            workspace,
            bind,
            ui_dir,
            max_concepts,
        } => {
            let mut config = ServiceConfig::new(workspace.unwrap_or_else(workspace_dir));
            config.ui_dir = ui_dir;
            config.max_concepts = max_concepts;
            serve(config, bind, io)
        }
    }
}

fn workspace_dir() -> PathBuf {
    std::env::var_os(WORKSPACE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_WORKSPACE))
}

/// `<workspace>/sessions/<stem>-<n>.jsonl`, with the stem reduced to a
/// valid workspace name.
fn default_log_path(input: &Path) -> Result<PathBuf, Failure> {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut slug: String = stem
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '-' })
        .take(40)
        .collect();
    if slug.is_empty() {
        slug.push_str("context");
    }
    let dir = workspace_dir();
    let ws = Workspace::open(&dir)
        .map_err(|e| Failure::new(EXIT_OUTPUT, format!("cannot open workspace {}: {e}", dir.display())))?;
    let id = ws
        .new_session_id(&slug)
        .map_err(|e| Failure::new(EXIT_OUTPUT, e.to_string()))?;
    ws.session_path(&id)
        .map_err(|e| Failure::new(EXIT_OUTPUT, e.to_string()))
}

fn append_log(path: &Path, events: &[ExplorationEvent]) -> CliResult {
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Failure::output(path, e))?;
    for e in events {
        f.write_all(crate::exploration::event_line(e).as_bytes())
            .map_err(|e| Failure::output(path, e))?;
    }
    f.sync_all().map_err(|e| Failure::output(path, e))
}

enum Answer {
    Yes,
    Counterexample { name: String, attributes: Vec<String> },
}

/// `y` / `yes`, or `n <name>; <attr>, <attr>, ...`.
fn parse_answer(line: &str) -> Result<Answer, String> {
    let line = line.trim();
    if line.eq_ignore_ascii_case("y") || line.eq_ignore_ascii_case("yes") {
        return Ok(Answer::Yes);
    }
    let rest = line
        .strip_prefix("n ")
        .or_else(|| line.strip_prefix("N "))
        .ok_or_else(|| "answer `y` or `n <name>; <attr>, <attr>, ...`".to_owned())?;
    let (name, attrs) = rest.split_once(';').unwrap_or((rest, ""));
    let name = name.trim();
    if name.is_empty() {
        return Err("the counterexample needs a name".into());
    }
    let attributes = attrs
        .split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(str::to_owned)
        .collect();
    Ok(Answer::Counterexample {
        name: name.to_owned(),
        attributes,
    })
}

fn explore(
    ctx: &FormalContext,
    input: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    log: &Path,
    save: Option<&Path>,
) -> CliResult {
    let mut session = ExplorationSession::start(ctx);
    append_log(log, session.log())?;
    let mut line = String::new();
    while let Some(question) = session.question().cloned() {
        let current = session.context();
        let _ = writeln!(stderr, "{}", question_sentence(current, &question));
        let _ = write!(stderr, "[y / n <name>; <attributes>] > ");
        let _ = stderr.flush();
        line.clear();
        let read = input
            .read_line(&mut line)
            .map_err(|e| Failure::new(EXIT_ABORT, format!("cannot read answer: {e}")))?;
        if read == 0 {
            let _ = writeln!(stderr);
            return Err(Failure::new(
                EXIT_ABORT,
                format!("exploration aborted; session log kept in {}", log.display()),
            ));
        }
        let logged = session.log().len();
        let outcome = match parse_answer(&line) {
            Ok(Answer::Yes) => session.accept().map_err(|e| e.to_string()),
            Ok(Answer::Counterexample { name, attributes }) => {
                let mut intent = question.premise.clone();
                let mut unknown = None;
                for a in &attributes {
                    match current.attribute_index(a) {
                        Some(m) => intent.insert(m),
                        None => unknown = Some(a.clone()),
                    }
                }
                match unknown {
                    Some(a) => Err(format!("unknown attribute {a:?}")),
                    None => session
                        .reject_with_counterexample(&name, &intent)
                        .map_err(|e| e.to_string()),
                }
            }
            Err(e) => Err(e),
        };
        match outcome {
            Ok(()) => append_log(log, &session.log()[logged..])?,
            Err(message) => {
                let _ = writeln!(stderr, "{message}");
            }
        }
    }

    let (result, mut accepted) = session.result().expect("no question left");
    accepted.sort_by(listing_order);
    let reports: Vec<ImplicationReport> = accepted
        .into_iter()
        .enumerate()
        .map(|(i, imp)| ImplicationReport::new(&result, i + 1, imp).expect("attributes of result"))
        .collect();
    let _ = writeln!(
        stderr,
        "exploration finished: {} objects, {} implications",
        result.object_count(),
        reports.len()
    );
    stdout
        .write_all(render_listing(&result, &reports).as_bytes())
        .map_err(|e| Failure::new(EXIT_OUTPUT, format!("cannot write output: {e}")))?;
    if let Some(path) = save {
        fs::write(path, write_cxt(&result)).map_err(|e| Failure::output(path, e))?;
    }
    log::debug!(
        "accepted {}",
        reports
            .iter()
            .map(|r| render_implication(&result, &r.implication))
            .collect::<Vec<_>>()
            .join("; ")
    );
    Ok(())
}

fn serve(config: ServiceConfig, bind: SocketAddr, io: &mut Io<'_>) -> CliResult {
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::new(EXIT_BIND, format!("cannot start runtime: {e}")))?;
    runtime.block_on(async {
        let listener = crate::service::bind(bind)
            .await
            .map_err(|e| Failure::new(EXIT_BIND, format!("cannot bind {bind}: {e}")))?;
        let addr = listener.local_addr().unwrap_or(bind);
        let _ = writeln!(io.stderr, "fcakit: serving on http://{addr}");
        crate::service::serve(listener, &config)
            .await
            .map_err(|e| Failure::new(EXIT_OUTPUT, format!("service failed: {e}")))
    })
}
