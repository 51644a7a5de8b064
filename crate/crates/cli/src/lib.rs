//! The `recipe` command: one subcommand per design activity, plus `serve`
//! for the browser game.

pub mod server;

use std::collections::BTreeSet;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use recipe_core::abstraction::{
    default_atomic_forms, generate_scaffold, synthesize, SynthesisRequest, SynthesizedFunction,
};
use recipe_core::eval::{render_report, report_json, run_program, Interpreter};
use recipe_core::game::GameConfig;
use recipe_core::recipe::{check_recipe, RecipeConfig};
use recipe_core::syntax::{parse_program, print_expr, print_program, DefKind, Expr, ExprKind, Program};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "recipe", version, about = "Design functions from sample expressions, test them, and audit the design")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a program and print it back in canonical layout.
    Parse {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run every check-expect, check-within and check-random, and report
    /// code no test reaches.
    Test {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Abstract a function from the sample expressions in a file.
    Abstract(AbstractArgs),
    /// Audit one function against the nine design-recipe steps.
    Check {
        file: PathBuf,
        #[arg(long)]
        function: String,
        /// Extra operators whose applications count as single values.
        #[arg(long, value_delimiter = ',')]
        atomic: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Serve the rocket game over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct AbstractArgs {
    pub file: PathBuf,
    /// Name of the function to create.
    #[arg(long)]
    pub name: String,
    /// Parameter names, one per difference, in order of first appearance.
    #[arg(long, value_delimiter = ',')]
    pub params: Option<Vec<String>>,
    /// Constants holding the samples; by default every computed constant
    /// that no other definition refers to.
    #[arg(long, value_delimiter = ',')]
    pub samples: Option<Vec<String>>,
    #[arg(long)]
    pub purpose: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub atomic: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Game configuration JSON used for new games.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory of static files (the browser client) served at `/`.
    #[arg(long = "static")]
    pub static_dir: Option<PathBuf>,
    /// Minutes a game may sit idle before it is dropped.
    #[arg(long, default_value_t = 10)]
    pub idle_minutes: u64,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "{message}");
            code
        }
    }
}

struct Failure(i32, String);

fn usage(message: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, message.into())
}

fn failed(message: impl Into<String>) -> Failure {
    Failure(EXIT_FAILURE, message.into())
}

fn load(path: &Path) -> Result<Program, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_program(&src).map_err(|e| usage(format!("{}:{e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) {
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn emit_json(out: &mut dyn Write, value: &serde_json::Value) {
    emit(out, &serde_json::to_string_pretty(value).expect("json values serialize"));
}

fn atomic_forms(extra: &[String]) -> BTreeSet<String> {
    let mut forms = default_atomic_forms();
    forms.extend(extra.iter().filter(|s| !s.is_empty()).cloned());
    forms
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Parse { file, json } => {
            let program = load(&file)?;
            if json {
                emit_json(out, &program_json(&program));
            } else {
                emit(out, &print_program(&program));
            }
            Ok(EXIT_OK)
        }
        Command::Test { file, seed, json } => {
            let program = load(&file)?;
            let (tests, coverage) = run_program(&program, seed)
                .map_err(|e| failed(format!("{}:{}: {}", file.display(), e.span, e.kind)))?;
            if json {
                emit_json(out, &report_json(&tests, &coverage));
            } else {
                emit(out, &render_report(&tests, &coverage));
            }
            Ok(if tests.all_passed() && coverage.is_complete() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Abstract(args) => abstract_command(args, out, err),
        Command::Check { file, function, atomic, seed, json } => {
            let program = load(&file)?;
            let config = RecipeConfig { atomic_forms: atomic_forms(&atomic), seed, ..RecipeConfig::default() };
            let report = check_recipe(&program, &function, &config).map_err(|e| usage(e.to_string()))?;
            if json {
                emit_json(out, &report.to_json());
            } else {
                emit(out, &report.render());
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Serve(args) => serve(args, err),
    }
}

fn program_json(p: &Program) -> serde_json::Value {
    let defs: Vec<_> = p
        .definitions
        .iter()
        .map(|d| {
            let kind = match &d.kind {
                DefKind::Constant { .. } => "constant",
                DefKind::Function { .. } => "function",
                DefKind::Test(t) => t.kind.keyword(),
            };
            json!({
                "kind": kind,
                "name": d.name(),
                "line": d.span.line,
                "col": d.span.column,
                "comments": d.comments.as_ref().map(|c| c.lines.clone()).unwrap_or_default(),
            })
        })
        .collect();
    json!({ "definitions": defs, "floating_comments": p.floating_comments.len() })
}

/// Constants with computed bodies that nothing else in the program uses.
fn default_samples(p: &Program) -> Vec<String> {
    let mut referenced = BTreeSet::new();
    for d in &p.definitions {
        let mut note = |e: &Expr| {
            e.walk(&mut |n| {
                if let ExprKind::Var(v) = &n.kind {
                    referenced.insert(v.clone());
                }
            })
        };
        match &d.kind {
            DefKind::Constant { body, .. } | DefKind::Function { body, .. } => note(body),
            DefKind::Test(t) => {
                note(&t.actual);
                note(&t.expected);
            }
        }
    }
    p.definitions
        .iter()
        .filter_map(|d| match &d.kind {
            DefKind::Constant { name, body } if body.is_compound() && !referenced.contains(name) => Some(name.clone()),
            _ => None,
        })
        .collect()
}

fn abstract_command(args: AbstractArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let program = load(&args.file)?;
    let names = args.samples.clone().unwrap_or_else(|| default_samples(&program));
    let mut samples = Vec::new();
    for n in &names {
        let body = program.constant(n).ok_or_else(|| usage(format!("`{n}` is not a constant in this program")))?;
        samples.push((n.clone(), body.clone()));
    }
    let mut request = SynthesisRequest::new(args.name.clone());
    request.param_names = args.params.clone();
    request.purpose = args.purpose.clone();
    request.atomic_forms = atomic_forms(&args.atomic);

    let mut interp = Interpreter::load(&program, args.seed)
        .map_err(|e| failed(format!("{}:{}: {}", args.file.display(), e.span, e.kind)))?;
    let sf = synthesize(&samples, &request, &mut interp).map_err(|e| failed(e.to_string()))?;
    for w in &sf.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let scaffold = generate_scaffold(&sf, &sf.signature());
    if args.json {
        emit_json(out, &synthesis_json(&sf, &scaffold));
    } else {
        emit(out, &scaffold);
    }
    Ok(EXIT_OK)
}

fn synthesis_json(sf: &SynthesizedFunction, scaffold: &str) -> serde_json::Value {
    let params: Vec<_> = sf.params.iter().map(|(n, t)| json!({ "name": n, "type": t.to_string() })).collect();
    let tests: Vec<_> = sf
        .variable_tests
        .iter()
        .chain(&sf.fresh_tests)
        .map(|t| format!("({} {} {})", t.kind.keyword(), print_expr(&t.actual), print_expr(&t.expected)))
        .collect();
    json!({
        "name": sf.name,
        "params": params,
        "return": sf.return_type.to_string(),
        "signature": sf.signature().to_string(),
        "purpose": sf.purpose,
        "body": print_expr(&sf.body),
        "tests": tests,
        "warnings": sf.warnings,
        "scaffold": scaffold,
    })
}

fn serve(args: ServeArgs, err: &mut dyn Write) -> Result<i32, Failure> {
    let config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            GameConfig::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => GameConfig::default(),
    };
    let state = server::AppState::new(config, std::time::Duration::from_secs(args.idle_minutes * 60));
    let app = server::router(state, args.static_dir.as_deref());
    let runtime = tokio::runtime::Runtime::new().map_err(|e| failed(e.to_string()))?;
    let _ = writeln!(err, "serving the rocket game on http://{}", args.addr);
    runtime
        .block_on(async move {
            let listener = tokio::net::TcpListener::bind(args.addr).await?;
            axum::serve(listener, app)
                .with_graceful_shutdown(async {
                    let _ = tokio::signal::ctrl_c().await;
                })
                .await
        })
        .map_err(|e| failed(format!("server error: {e}")))?;
    Ok(EXIT_OK)
}
