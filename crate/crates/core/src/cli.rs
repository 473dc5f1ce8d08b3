//! Command-line front end.
//!
//! Every command builds one JSON payload; the CSV and text renderings are
//! derived from it, so all formats carry the same content.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::index::{compare_indices, index_approx, index_bracket, default_tol, DEFAULT_MAX_STEPS, IndexError};
use crate::partitions::{classify_covering, enumerate_omega, enumerate_omega_all, successor, Partition};
use crate::rational::{decimal_places, format_rational, int, parse_rational, to_decimal, Rational};
use crate::spectra::diagonalize;
use crate::trees::{parse_edge_list, RootedTree};
use crate::verify::{self, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 1;
pub const EXIT_VERIFICATION_FAILED: i32 = 2;

/// Caps the worker threads used by `verify`.
pub const THREADS_ENV: &str = "STARLIKE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "starlike", version, about = "Order starlike trees by their adjacency index")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Main,
    Coverings,
    #[value(name = "b-lemma")]
    BLemma,
    Residual,
    Oracle,
    Pairwise,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the starlikes on N vertices in increasing order.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only partitions with this many parts.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Show the covering partition and the covering kind.
    Successor {
        #[arg(long)]
        partition: String,
    },
    /// Certified bracket and decimal approximation of the index.
    Index {
        #[arg(long, required_unless_present = "edges", conflicts_with = "edges")]
        partition: Option<String>,
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Bracket width, as p/q or decimal (default 2^-40).
        #[arg(long)]
        tol: Option<String>,
    },
    /// Certify which of two starlikes has the larger index.
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Run a verification suite over all starlikes on N vertices.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Suite::Main)]
        suite: Suite,
        /// Restrict the main suite to partitions with this many parts.
        #[arg(long)]
        r: Option<usize>,
        /// Bracket width 2^-depth for the b-lemma and residual suites.
        #[arg(long, default_value_t = crate::index::DEFAULT_TOL_BITS)]
        depth: u32,
        /// Agreement tolerance for the oracle suite.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Random pairs for the pairwise suite.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Diagonal values of A + alpha I for a starlike or an edge-list tree.
    Diagonalize {
        #[arg(long, required_unless_present = "edges", conflicts_with = "edges")]
        partition: Option<String>,
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
}

/// A rendered command result.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub payload: Value,
    pub text: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(payload: Value, text: String) -> Self {
        Self {
            payload,
            text,
            exit_code: EXIT_OK,
        }
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.payload)?;
                s.push('\n');
                s
            }
            Format::Csv => to_csv(&self.payload)?,
            Format::Text => self.text.clone(),
        })
    }
}

fn cell(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_owned()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        scalar => out.push((prefix.to_owned(), cell(scalar))),
    }
}

fn is_flat_record(value: &Value) -> bool {
    value
        .as_object()
        .is_some_and(|m| m.values().all(|v| !v.is_object() && !v.is_array()))
}

/// Arrays of flat records become a table; anything else is flattened to
/// `field,value` rows with dotted paths.
fn to_csv(payload: &Value) -> anyhow::Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    match payload {
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(is_flat_record) => {
            let header: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
            writer.write_record(&header)?;
            for row in rows {
                let obj = row.as_object().unwrap();
                writer.write_record(header.iter().map(|k| obj.get(*k).map(cell).unwrap_or_default()))?;
            }
        }
        other => {
            let mut pairs = Vec::new();
            flatten("", other, &mut pairs);
            writer.write_record(["field", "value"])?;
            for (k, v) in pairs {
                writer.write_record([k, v])?;
            }
        }
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

fn parse_partition(text: &str) -> anyhow::Result<Partition> {
    text.parse().with_context(|| format!("invalid partition {text:?}"))
}

fn load_tree(partition: Option<&str>, edges: Option<&Path>, root: usize) -> anyhow::Result<(RootedTree, String)> {
    match (partition, edges) {
        (Some(p), _) => {
            let p = parse_partition(p)?;
            Ok((RootedTree::starlike(&p), p.to_string()))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let (n, edges) = parse_edge_list(&text)?;
            let tree = RootedTree::from_edge_list(n, &edges, root)?;
            Ok((tree, path.display().to_string()))
        }
        (None, None) => bail!("either --partition or --edges is required"),
    }
}

fn enumerate(n: usize, r: Option<usize>) -> anyhow::Result<Outcome> {
    let list = match r {
        Some(r) => enumerate_omega(n, r)?,
        None => enumerate_omega_all(n)?,
    };
    let mut rows = Vec::with_capacity(list.len());
    let mut text = String::new();
    for (k, p) in list.iter().enumerate() {
        let kind = list
            .get(k + 1)
            .map(|q| classify_covering(p, q).map(|c| c.label()))
            .transpose()?;
        rows.push(json!({
            "rank": k + 1,
            "n": p.n(),
            "r": p.r(),
            "partition": p.to_string(),
            "covering_kind_to_next": kind,
        }));
        let line = format!("{:>4}  {:<24} {}", k + 1, p, kind.unwrap_or(""));
        let _ = writeln!(text, "{}", line.trim_end());
    }
    Ok(Outcome::ok(Value::Array(rows), text))
}

fn successor_cmd(partition: &str) -> anyhow::Result<Outcome> {
    let p = parse_partition(partition)?;
    let (payload, text) = match successor(&p) {
        Some(q) => {
            let kind = classify_covering(&p, &q)?;
            (
                json!({"partition": p.to_string(), "successor": q.to_string(), "covering_kind": kind.label()}),
                format!("{q} (type {kind})\n"),
            )
        }
        None => (
            json!({"partition": p.to_string(), "successor": null, "covering_kind": null}),
            "none (last starlike)\n".to_owned(),
        ),
    };
    Ok(Outcome::ok(payload, text))
}

fn index_cmd(tree: &RootedTree, label: &str, tol: Option<&str>) -> anyhow::Result<Outcome> {
    let tol = match tol {
        Some(t) => parse_rational(t)?,
        None => default_tol(),
    };
    if tol <= Rational::from_integer(0.into()) {
        bail!("--tol must be positive");
    }
    let bracket = index_bracket(tree, &tol)?;
    // A tighter bracket keeps the printed digits stable under rounding.
    let fine = index_approx(tree, &(&tol / int(1024)))?;
    let digits = decimal_places(&tol);
    let approx = to_decimal(&fine, digits);
    let payload = json!({
        "tree": label,
        "n": tree.vertex_count(),
        "approx": approx,
        "lo": format_rational(&bracket.lo),
        "hi": format_rational(&bracket.hi),
    });
    let text = format!(
        "{approx}\nbracket ({}, {}]\n",
        format_rational(&bracket.lo),
        format_rational(&bracket.hi)
    );
    Ok(Outcome::ok(payload, text))
}

fn compare_cmd(a: &str, b: &str, max_steps: usize) -> anyhow::Result<Outcome> {
    let (pa, pb) = (parse_partition(a)?, parse_partition(b)?);
    let (ta, tb) = (RootedTree::starlike(&pa), RootedTree::starlike(&pb));
    match compare_indices(&ta, &tb, max_steps) {
        Ok(res) => {
            let mut payload = json!({"a": pa.to_string(), "b": pb.to_string()});
            if let (Value::Object(map), Value::Object(extra)) = (&mut payload, serde_json::to_value(&res)?) {
                map.extend(extra);
            }
            let sign = if res.verdict == crate::index::Verdict::Less { "<" } else { ">" };
            let text = format!(
                "{} index({pa}) {sign} index({pb})\nwitness {}\n",
                payload["verdict"].as_str().unwrap_or_default(),
                format_rational(&res.witness)
            );
            Ok(Outcome::ok(payload, text))
        }
        Err(IndexError::Unresolved(steps)) => Ok(Outcome {
            payload: json!({"a": pa.to_string(), "b": pb.to_string(), "verdict": "unresolved", "witness": null}),
            text: format!("unresolved after {steps} steps\n"),
            exit_code: EXIT_VERIFICATION_FAILED,
        }),
        Err(e) => Err(e.into()),
    }
}

fn report_text(report: &VerificationReport) -> String {
    let t = &report.tallies;
    let tallies = if t.type_i + t.type_ii + t.type_iii() > 0 {
        format!(" (I={} II={} III/alpha={} III/reset={})", t.type_i, t.type_ii, t.type_iii_alpha, t.type_iii_reset)
    } else {
        String::new()
    };
    let mut text = format!(
        "suite {} n={}: {} checked, {} failures{tallies} in {:.3}s\n",
        report.suite,
        report.n,
        report.pairs_checked,
        report.failures.len(),
        report.wall_time
    );
    for f in &report.failures {
        let show = |p: &Option<Partition>| p.as_ref().map(|p| p.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(text, "FAIL {} {} {}: {}", show(&f.a), show(&f.b), f.predicate, f.detail);
    }
    text
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    n: usize,
    suite: Suite,
    r: Option<usize>,
    depth: u32,
    tol: f64,
    samples: usize,
    seed: u64,
) -> anyhow::Result<Outcome> {
    if depth == 0 {
        bail!("--depth must be positive");
    }
    if !(tol > 0.0) {
        bail!("--tol must be positive");
    }
    let report = match (suite, r) {
        (Suite::Main, Some(r)) => verify::verify_main_theorem_with_parts(n, r)?,
        (Suite::Main, None) => verify::verify_main_theorem(n)?,
        (Suite::Coverings, _) => verify::verify_covering_theorem(n)?,
        (Suite::BLemma, _) => verify::verify_b_lemma_all(n, depth)?,
        (Suite::Residual, _) => verify::verify_residual_root_all(n, depth)?,
        (Suite::Oracle, _) => verify::verify_oracle_agreement(n, tol)?,
        (Suite::Pairwise, _) => verify::verify_pairwise_order(n, samples, seed)?,
    };
    Ok(Outcome {
        payload: serde_json::to_value(&report)?,
        text: report_text(&report),
        exit_code: if report.passed() { EXIT_OK } else { EXIT_VERIFICATION_FAILED },
    })
}

fn diagonalize_cmd(tree: &RootedTree, alpha: &str) -> anyhow::Result<Outcome> {
    let alpha = parse_rational(alpha)?;
    let profile = diagonalize(tree, &alpha);
    let mut text = format!("alpha {}\n", format_rational(&alpha));
    for (v, d) in profile.values.iter().enumerate() {
        let _ = writeln!(text, "{v:>4}  {}", format_rational(d));
    }
    let i = profile.inertia;
    let _ = writeln!(text, "inertia neg={} zero={} pos={}", i.neg, i.zero, i.pos);
    Ok(Outcome::ok(serde_json::to_value(&profile)?, text))
}

/// Applies `STARLIKE_THREADS` to the global rayon pool.
pub fn configure_threads(value: Option<&str>) -> anyhow::Result<()> {
    let Some(value) = value else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| anyhow!("{THREADS_ENV} must be a positive integer, got {value:?}"))?;
    // Already initialized pools keep their size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Runs one command and returns its outcome without writing anything.
pub fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Enumerate { n, r } => enumerate(*n, *r),
        Command::Successor { partition } => successor_cmd(partition),
        Command::Index {
            partition,
            edges,
            root,
            tol,
        } => {
            let (tree, label) = load_tree(partition.as_deref(), edges.as_deref(), *root)?;
            index_cmd(&tree, &label, tol.as_deref())
        }
        Command::Compare { a, b, max_steps } => compare_cmd(a, b, *max_steps),
        Command::Verify {
            n,
            suite,
            r,
            depth,
            tol,
            samples,
            seed,
        } => verify_cmd(*n, *suite, *r, *depth, *tol, *samples, *seed),
        Command::Diagonalize {
            partition,
            edges,
            root,
            alpha,
        } => {
            let (tree, _) = load_tree(partition.as_deref(), edges.as_deref(), *root)?;
            diagonalize_cmd(&tree, alpha)
        }
    }
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomically(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Executes the command, emits the result and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let threads = std::env::var(THREADS_ENV).ok();
    let result = configure_threads(threads.as_deref())
        .and_then(|_| execute(cli))
        .and_then(|outcome| {
            let rendered = outcome.render(cli.format)?;
            match &cli.output {
                Some(path) => write_atomically(path, &rendered)?,
                None => {
                    let mut stdout = std::io::stdout().lock();
                    stdout.write_all(rendered.as_bytes())?;
                    stdout.flush()?;
                }
            }
            Ok(outcome.exit_code)
        });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INVALID_INPUT
        }
    }
}
