//! Command-line front end: enumeration, matrices, atlases, value tables and
//! the verification suites.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use clustertube::cc::{verify_bijection, CcMap};
use clustertube::cluster::{enumerate_atlas, DEFAULT_CAP};
use clustertube::example::reproduce_example;
use clustertube::report::Report;
use clustertube::tube::{parse_indec_list, MaximalRigid, Tube};
use clustertube::verify::{verify_object, verify_sweep, Scope, Suites};
use clustertube::Error;

#[derive(Parser, Debug)]
#[command(name = "clustertube", version, about = "Cluster tubes and the locally free Caldero-Chapoton map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(clap::Args, Debug)]
struct Target {
    /// Number of summands of a maximal rigid object (the tube has rank n+1).
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    n: u64,
    /// Maximal rigid object, e.g. "(1,3),(1,2),(1,1)"; defaults to the
    /// first object in canonical order.
    #[arg(long)]
    object: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List all basic maximal rigid objects.
    EnumerateRigid {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
    },
    /// Exchange matrix of a maximal rigid object.
    BMatrix {
        #[command(flatten)]
        target: Target,
    },
    /// All seeds and cluster variables reachable from the matrix of an object.
    Atlas {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_CAP, value_parser = parse_cap)]
        cap: usize,
    },
    /// Values of the map on all indecomposable rigid objects.
    CcTable {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_CAP, value_parser = parse_cap)]
        cap: usize,
    },
    /// Runs the invariant suites on one object, or on all objects when
    /// no object is given.
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_CAP, value_parser = parse_cap)]
        cap: usize,
        /// Also compare against the finite-field point-count oracle.
        #[arg(long, value_enum, default_value_t = Switch::Off)]
        oracle: Switch,
    },
    /// Reproduces the worked rank-3 example against the frozen data.
    ReproduceExample,
}

fn parse_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(c) if c >= 1 => Ok(c),
        _ => Err(format!("cap must be a positive integer, got {s}")),
    }
}

/// Failure of a subcommand, mapped to an exit code.
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidObject(_) | Error::IndexOutOfRange { .. } | Error::InvalidMatrix(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn resolve(target: &Target) -> Result<(Tube, Option<MaximalRigid>), Failure> {
    let tube = Tube::new(target.n as usize)?;
    let t = match &target.object {
        Some(s) => Some(MaximalRigid::new(&tube, parse_indec_list(tube.rank(), s)?)?),
        None => None,
    };
    Ok((tube, t))
}

fn resolve_one(target: &Target) -> Result<(Tube, MaximalRigid), Failure> {
    let (tube, t) = resolve(target)?;
    let t = match t {
        Some(t) => t,
        None => tube
            .enumerate_maximal_rigid()
            .into_iter()
            .next()
            .ok_or_else(|| Failure::Internal("no maximal rigid object".into()))?,
    };
    Ok((tube, t))
}

fn matrix_text(rows: &[Vec<i64>]) -> String {
    let width = rows.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
    rows.iter()
        .map(|r| r.iter().map(|v| format!("{v:>width$}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Left-aligned table with columns padded to their widest cell.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push('\n');
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

fn vec_text(v: &[i64]) -> String {
    format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

fn reports_output(reports: &[Report]) -> Output {
    let ok = reports.iter().all(Report::passed);
    let mut text = String::new();
    for r in reports {
        let _ = writeln!(text, "{}", r.summary());
        for f in r.failures.iter().take(20) {
            let _ = writeln!(text, "  {f}");
        }
    }
    let _ = write!(text, "{}", if ok { "all suites passed" } else { "verification failed" });
    Output {
        text,
        json: json!({ "passed": ok, "reports": reports }),
        ok,
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::EnumerateRigid { n } => {
            let tube = Tube::new(*n as usize)?;
            let all = tube.enumerate_maximal_rigid();
            let text = all.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            let json = json!({
                "n": n,
                "count": all.len(),
                "objects": all.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            Ok(Output { text, json, ok: true })
        }
        Command::BMatrix { target } => {
            let (tube, t) = resolve_one(target)?;
            let b = tube.b_matrix_triangles(&t)?;
            Ok(Output {
                text: format!("{t}\n{}", matrix_text(b.rows())),
                json: json!({ "object": t.to_string(), "b": b.rows() }),
                ok: true,
            })
        }
        Command::Atlas { target, cap } => {
            let (tube, t) = resolve_one(target)?;
            let b = tube.b_matrix_triangles(&t)?;
            let atlas = enumerate_atlas(&b, *cap)?;
            let mut text = format!("{} seeds, {} cluster variables\n", atlas.seeds.len(), atlas.variables.len());
            text.push_str(
                &atlas
                    .variables
                    .iter()
                    .map(|v| v.to_fraction_string())
                    .collect::<Vec<_>>()
                    .join("\n"),
            );
            Ok(Output {
                text,
                json: atlas.to_json(),
                ok: true,
            })
        }
        Command::CcTable { target, cap } => {
            let (_, t) = resolve_one(target)?;
            let cm = CcMap::new(&t)?;
            let (report, mut rows) = verify_bijection(&cm, *cap)?;
            rows.sort_by(|a, b| (&a.rank, &a.object).cmp(&(&b.rank, &b.object)));
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.object.clone(), vec_text(&r.rank), vec_text(&r.coindex), vec_text(&r.denom), r.fraction.clone()])
                .collect();
            let text = format!(
                "{t}\n{}\n{}",
                table(&["object", "rank", "coindex", "denominator", "value"], &cells),
                report.summary()
            );
            Ok(Output {
                text,
                json: json!({
                    "object": t.to_string(),
                    "b": cm.b().rows(),
                    "rows": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                    "passed": report.passed(),
                }),
                ok: report.passed(),
            })
        }
        Command::Verify { target, cap, oracle } => {
            let (tube, t) = resolve(target)?;
            let suites = Suites::all(*oracle == Switch::On);
            let mut reports = Vec::new();
            match t {
                Some(t) => reports.extend(verify_object(&tube, &t, suites, *cap)?),
                None => reports.extend(verify_sweep(tube.n(), Scope::All, suites, *cap)?),
            }
            Ok(reports_output(&reports))
        }
        Command::ReproduceExample => {
            let o = reproduce_example()?;
            let cells: Vec<Vec<String>> = o
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.object.clone(),
                        vec_text(&r.rank),
                        vec_text(&r.denom),
                        r.fraction.clone(),
                        if r.matches { "ok" } else { "MISMATCH" }.to_string(),
                    ]
                })
                .collect();
            let text = format!(
                "T = {}\nB_T =\n{}\n{}\n{}",
                o.rigid,
                matrix_text(&o.b),
                table(&["object", "rank", "denominator", "value", "frozen"], &cells),
                o.report.summary()
            );
            Ok(Output {
                text,
                json: serde_json::to_value(&o).map_err(|e| Failure::Internal(e.to_string()))?,
                ok: o.report.passed(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let (body, code) = match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable"),
            };
            (body, if out.ok { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{body}\n")) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            use std::io::Write;
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout().lock(), "{body}");
        }
    }
    ExitCode::from(code)
}
