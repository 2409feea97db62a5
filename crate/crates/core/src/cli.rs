//! Command-line front end.
//!
//! Exit codes: `0` success, `1` domain failure (invalid hierarchy, no
//! candidate role, unknown permission), `2` usage errors (bad flags,
//! unreadable files, out-of-range parameters).

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::authorizer::{
    rank_roles, s_grid, sensitivity_sweep, AuthorizationQuery, AuthorizeError, ExtendedCriterion,
    ExtendedCriterionSpec, GridScale, RankingResult, SweepResult,
};
use crate::model::{check_hierarchy, parse_hierarchy, PermissionRequest, RoleGraph, Severity};
use crate::service::{self, SnapshotStore};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "rbac-ahp",
    version,
    about = "Rank roles for user authorization in a role hierarchy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a hierarchy file and list every problem found.
    Validate {
        #[arg(long)]
        hierarchy: PathBuf,
        #[arg(long, value_enum, default_value_t = Output::Tsv)]
        output: Output,
    },
    /// Rank every candidate role for the requested permissions.
    Rank(QueryArgs),
    /// Print the recommended role.
    Authorize(QueryArgs),
    /// Re-rank over a grid of `s` values and report where the order changes.
    Sweep {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value_t = 0.1)]
        s_min: f64,
        #[arg(long, default_value_t = 10.0)]
        s_max: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Scale::Log)]
        scale: Scale,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Hierarchy to load at startup.
        #[arg(long)]
        hierarchy: Option<PathBuf>,
        /// Directory with the admin console's static files.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub hierarchy: PathBuf,
    /// Comma-separated permission ids, or `@file` with one id per line.
    #[arg(long)]
    pub require: String,
    /// How much more a dominated role counts than a surplus permission.
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    /// Extra criterion `NAME[:PREFERENCE]`: availability, integrity or manager-cost.
    #[arg(long = "criterion", value_parser = parse_criterion)]
    pub criteria: Vec<ExtendedCriterionSpec>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = Output::Tsv)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

fn parse_criterion(arg: &str) -> Result<ExtendedCriterionSpec, String> {
    let (name, pref) = arg.split_once(':').unwrap_or((arg, "1"));
    let id: ExtendedCriterion = name.parse().map_err(|e: AuthorizeError| e.to_string())?;
    let first_row_preference: f64 = pref
        .parse()
        .map_err(|_| format!("invalid preference `{pref}`"))?;
    Ok(ExtendedCriterionSpec {
        id,
        first_row_preference,
    })
}

/// A failed command: exit code plus the message for standard error.
struct Failure(i32, String);

impl From<AuthorizeError> for Failure {
    fn from(e: AuthorizeError) -> Self {
        let code = match e {
            AuthorizeError::InvalidParameter(_) | AuthorizeError::InvalidGrid(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        Failure(code, e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { hierarchy, output } => validate(&hierarchy, output, out, err),
        Command::Rank(q) => {
            let (graph, query) = load_query(&q)?;
            let ranking = rank_roles(&graph, &query)?;
            emit(out, &render_ranking(&ranking, q.output))?;
            Ok(EXIT_OK)
        }
        Command::Authorize(q) => {
            let (graph, query) = load_query(&q)?;
            let ranking = rank_roles(&graph, &query)?;
            let text = match q.output {
                Output::Tsv => format!("{} {}\n", ranking.mode, ranking.selected),
                Output::Json => {
                    let top = &ranking.scores[0];
                    json(&serde_json::json!({
                        "mode": ranking.mode,
                        "selected": ranking.selected,
                        "probability": top.probability,
                    }))
                }
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            query,
            s_min,
            s_max,
            steps,
            scale,
        } => {
            let scale = match scale {
                Scale::Linear => GridScale::Linear,
                Scale::Log => GridScale::Log,
            };
            let grid = s_grid(s_min, s_max, steps, scale)?;
            let (graph, base) = load_query(&query)?;
            let sweep = sensitivity_sweep(&graph, &base, &grid)?;
            emit(out, &render_sweep(&sweep, query.output))?;
            Ok(EXIT_OK)
        }
        Command::Serve {
            port,
            host,
            hierarchy,
            ui_dir,
        } => serve(&host, port, hierarchy.as_deref(), ui_dir, err),
    }
}

fn validate(
    path: &Path,
    output: Output,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let text = read(path)?;
    let report = check_hierarchy(&text).report;
    let rendered = match output {
        Output::Json => json(&report),
        Output::Tsv => {
            let mut s = String::new();
            for i in &report.issues {
                let severity = match i.severity {
                    Severity::Error => "error",
                    Severity::Warning => "warning",
                };
                let location = i.location.as_deref().unwrap_or("-");
                writeln!(s, "{severity}\t{}\t{location}\t{}", i.code, i.message).unwrap();
            }
            writeln!(s, "{}", if report.ok { "ok" } else { "invalid" }).unwrap();
            s
        }
    };
    emit(out, &rendered)?;
    for e in report.errors() {
        let _ = writeln!(err, "error: {}", e.message);
    }
    Ok(if report.ok { EXIT_OK } else { EXIT_DOMAIN })
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<RoleGraph, Failure> {
    let text = read(path)?;
    parse_hierarchy(&text).map_err(|e| Failure(EXIT_DOMAIN, format!("{}: {e}", path.display())))
}

/// `--require` value: `a,b,c` or `@path` with one id per line (`#` comments allowed).
pub fn parse_require(value: &str) -> Result<Vec<String>, String> {
    let ids: Vec<String> = match value.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {path}: {e}"))?
            .lines()
            .map(|l| {
                l.split_once('#')
                    .map_or(l, |(before, _)| before)
                    .trim()
                    .to_string()
            })
            .filter(|l| !l.is_empty())
            .collect(),
        None => value
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
    };
    if ids.is_empty() {
        return Err("--require names no permissions".into());
    }
    Ok(ids)
}

fn load_query(q: &QueryArgs) -> Result<(RoleGraph, AuthorizationQuery), Failure> {
    let ids = parse_require(&q.require).map_err(|m| Failure(EXIT_USAGE, m))?;
    let request = PermissionRequest::parse(&ids)
        .map_err(|e| Failure(EXIT_USAGE, format!("--require: {e}")))?;
    let graph = load_graph(&q.hierarchy)?;
    let mut query = AuthorizationQuery::new(request)
        .with_s(q.s)
        .with_alpha(q.alpha)
        .with_lambda(q.lambda);
    query.extended = q.criteria.clone();
    query.check()?;
    Ok((graph, query))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure(EXIT_USAGE, format!("write failed: {e}")))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn ranking_header(ranking: &RankingResult, prefix: &str) -> String {
    let mut header = format!("{prefix}rank\trole\tprobability\tdp\tdr");
    for c in ranking.parameters.criteria.iter().skip(2) {
        write!(header, "\t{}", c.id).unwrap();
    }
    header.push('\n');
    header
}

fn ranking_rows(ranking: &RankingResult, prefix: &str, s: &mut String) {
    for (i, score) in ranking.scores.iter().enumerate() {
        write!(
            s,
            "{prefix}{}\t{}\t{:.6}\t{}\t{}",
            i + 1,
            score.role,
            score.probability,
            score.dp,
            score.dr
        )
        .unwrap();
        for c in ranking.parameters.criteria.iter().skip(2) {
            write!(s, "\t{}", score.extended[&c.id]).unwrap();
        }
        s.push('\n');
    }
}

/// TSV columns: rank, role, probability (6 decimals), dp, dr, then one raw
/// value per enabled extended criterion.
pub fn render_ranking(ranking: &RankingResult, output: Output) -> String {
    match output {
        Output::Json => json(ranking),
        Output::Tsv => {
            let mut s = ranking_header(ranking, "");
            ranking_rows(ranking, "", &mut s);
            s
        }
    }
}

/// TSV: a ranking table keyed by `s`, a blank line, then one row per change point.
pub fn render_sweep(sweep: &SweepResult, output: Output) -> String {
    match output {
        Output::Json => json(sweep),
        Output::Tsv => {
            let mut s = match sweep.rankings.first() {
                Some(r) => ranking_header(r, "s\t"),
                None => String::new(),
            };
            for (value, ranking) in sweep.grid.iter().zip(&sweep.rankings) {
                ranking_rows(ranking, &format!("{value}\t"), &mut s);
            }
            s.push_str("\ns_before\ts_after\torder_before\torder_after\n");
            let join = |v: &[crate::model::RoleId]| {
                v.iter().map(|r| r.as_str()).collect::<Vec<_>>().join(",")
            };
            for cp in &sweep.change_points {
                writeln!(
                    s,
                    "{}\t{}\t{}\t{}",
                    cp.s_before,
                    cp.s_after,
                    join(&cp.order_before),
                    join(&cp.order_after)
                )
                .unwrap();
            }
            s
        }
    }
}

fn serve(
    host: &str,
    port: u16,
    hierarchy: Option<&Path>,
    ui_dir: Option<PathBuf>,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let store = Arc::new(SnapshotStore::new());
    if let Some(path) = hierarchy {
        let graph = load_graph(path)?;
        store.install(graph);
    }
    let runtime = tokio::runtime::Runtime::new()
        .map_err(|e| Failure(EXIT_USAGE, format!("cannot start runtime: {e}")))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| Failure(EXIT_USAGE, format!("cannot bind {host}:{port}: {e}")))?;
        let addr = listener
            .local_addr()
            .map_err(|e| Failure(EXIT_USAGE, e.to_string()))?;
        let _ = writeln!(err, "listening on http://{addr}");
        service::serve(listener, store, ui_dir)
            .await
            .map_err(|e| Failure(EXIT_DOMAIN, format!("server failed: {e}")))?;
        Ok(EXIT_OK)
    })
}
