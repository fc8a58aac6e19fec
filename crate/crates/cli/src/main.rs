use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use detpure::level;
use detpure::matroid;
use detpure::pure_osequence::{self, SearchLimits};
use detpure::DegreeMatrix;
use detpure_cli::{analyze, run_conjecture, to_csv, ConjectureParams};

const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_CONTRADICTION: u8 = 3;

/// h-vectors, levelness and purity for standard determinantal schemes.
///
/// Matrices are given as a file path, `-` for stdin, or inline with rows
/// separated by `;` (for example "2 2 5; -1 -1 2"). JSON input
/// {"rows": [[...], ...]} is accepted in all three places.
#[derive(Parser)]
#[command(name = "detpure", version, about, long_about)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one degree matrix.
    Analyze {
        input: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Enumerate degree matrices and compare purity with the equal-rows test.
    Conjecture {
        /// Number of rows.
        #[arg(long)]
        t: usize,
        /// Codimension; matrices have t + c - 1 columns.
        #[arg(long)]
        c: usize,
        /// Largest allowed entry.
        #[arg(long, default_value_t = 3)]
        max_entry: i64,
        /// Skip matrices containing a zero entry.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        zero_free: bool,
        #[command(flatten)]
        budget: Budget,
        /// Worker threads (default: DETPURE_THREADS, else one per core).
        #[arg(long)]
        threads: Option<usize>,
        /// Also run the exhaustive search on verdicts decided by a rule.
        #[arg(long)]
        cross_check: bool,
    },
    /// Pure order ideal generated by the equal-rows witness.
    Gamma { input: String },
    /// Socle shifts and levelness.
    Level { input: String },
    /// The transversal matroid on `c` of the given groups.
    Matroid {
        #[arg(long)]
        c: usize,
        /// Group sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Also run the link/deletion recursion (small complexes only).
        #[arg(long)]
        cover: bool,
        /// Include the facet list.
        #[arg(long)]
        facets: bool,
        /// Include the Vandermonde representation and check it.
        #[arg(long)]
        represent: bool,
    },
}

#[derive(Args)]
struct Budget {
    /// Node budget of the exhaustive purity search.
    #[arg(long, default_value_t = 10_000_000)]
    budget_nodes: u64,
    /// Wall-clock budget of the search in seconds; 0 disables it.
    #[arg(long, default_value_t = 60)]
    budget_seconds: u64,
}

impl Budget {
    fn seconds(&self) -> Option<u64> {
        (self.budget_seconds > 0).then_some(self.budget_seconds)
    }

    fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_nodes: self.budget_nodes,
            max_duration: self.seconds().map(std::time::Duration::from_secs),
        }
    }
}

fn read_matrix(input: &str) -> anyhow::Result<DegreeMatrix> {
    let text = if input == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else if Path::new(input).is_file() {
        std::fs::read_to_string(input).with_context(|| format!("reading {input}"))?
    } else {
        input.replace(';', "\n")
    };
    Ok(DegreeMatrix::parse(&text)?)
}

fn threads_from_env() -> anyhow::Result<Option<usize>> {
    match std::env::var("DETPURE_THREADS") {
        Ok(v) => Ok(Some(v.trim().parse().context("DETPURE_THREADS")?)),
        Err(_) => Ok(None),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

fn csv_one<T: Serialize>(row: &T) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(row)?;
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let mut code = 0;
    let out = match cli.command {
        Command::Analyze { input, budget } => {
            let a = read_matrix(&input)?;
            let report = analyze(&a, &budget.limits())?;
            if let Err(msg) = report.check_consistency() {
                bail!("inconsistent report: {msg}");
            }
            if report.purity.is_inconclusive() {
                code = EXIT_INCONCLUSIVE;
            }
            match cli.format {
                Format::Json => json(&report),
                Format::Csv => to_csv([&report])?,
                Format::Text => report.to_text(),
            }
        }
        Command::Conjecture {
            t,
            c,
            max_entry,
            zero_free,
            budget,
            threads,
            cross_check,
        } => {
            if t == 0 || c == 0 {
                bail!("t and c must be positive");
            }
            let params = ConjectureParams {
                t,
                c,
                max_entry,
                zero_free,
                budget_nodes: budget.budget_nodes,
                budget_seconds: budget.seconds(),
                cross_check,
            };
            let threads = match threads {
                Some(n) => Some(n),
                None => threads_from_env()?,
            };
            let (summary, outcomes) = run_conjecture(&params, threads)?;
            for o in &outcomes {
                if let Err(msg) = o.report.check_consistency() {
                    bail!("inconsistent report for {:?}: {msg}", o.report.matrix);
                }
            }
            if !summary.contradictions.is_empty() {
                code = EXIT_CONTRADICTION;
            }
            match cli.format {
                Format::Json => json(&summary),
                Format::Csv => to_csv(outcomes.iter().map(|o| &o.report))?,
                Format::Text => summary.to_text(),
            }
        }
        Command::Gamma { input } => {
            let a = read_matrix(&input)?;
            let ideal = pure_osequence::gamma_from_matrix(&a)?;
            let f = ideal.f_vector();
            #[derive(Serialize)]
            struct Row {
                generators: String,
                f_vector: String,
            }
            match cli.format {
                Format::Json => json(&serde_json::json!({
                    "generators": ideal.generators(),
                    "f_vector": f,
                })),
                Format::Csv => csv_one(&Row {
                    generators: join(ideal.generators(), " "),
                    f_vector: join(f.as_slice(), " "),
                })?,
                Format::Text => format!(
                    "generators  {}\nf-vector    {f}\n",
                    join(ideal.generators(), ", ")
                ),
            }
        }
        Command::Level { input } => {
            let a = read_matrix(&input)?;
            let shifts = level::socle_shifts(&a);
            let is_level = level::is_level(&a);
            let kind = if is_level {
                Some(level::level_type(&a)?)
            } else {
                None
            };
            #[derive(Serialize)]
            struct Row {
                socle_shifts: String,
                level: bool,
                socle_degree: Option<i64>,
                cm_type: Option<u128>,
            }
            match cli.format {
                Format::Json => json(&serde_json::json!({
                    "socle_shifts": shifts,
                    "level": is_level,
                    "socle_degree": kind.map(|k| k.0),
                    "type": kind.map(|k| k.1),
                })),
                Format::Csv => csv_one(&Row {
                    socle_shifts: join(shifts.as_slice(), " "),
                    level: is_level,
                    socle_degree: kind.map(|k| k.0),
                    cm_type: kind.map(|k| k.1),
                })?,
                Format::Text => {
                    let mut s = format!(
                        "shifts  {}\nlevel   {is_level}\n",
                        join(shifts.as_slice(), " ")
                    );
                    if let Some((deg, ty)) = kind {
                        s += &format!("socle degree {deg}, type {ty}\n");
                    }
                    s
                }
            }
        }
        Command::Matroid {
            c,
            sizes,
            cover,
            facets,
            represent,
        } => {
            let h = matroid::delta0_h(c, &sizes)?;
            let complex = if cover || facets || represent {
                Some(matroid::delta0(c, &sizes)?)
            } else {
                None
            };
            let cover_h = match (&complex, cover) {
                (Some(d), true) => Some(matroid::cover_h(d)?),
                _ => None,
            };
            let representation = if represent {
                let m = matroid::represent_delta0(c, &sizes)?;
                let ok = complex
                    .as_ref()
                    .map(|d| matroid::column_matroid(&m).map(|cm| cm == *d));
                Some((m, ok.transpose()?.unwrap_or(false)))
            } else {
                None
            };
            #[derive(Serialize)]
            struct Row {
                c: usize,
                sizes: String,
                h: String,
                cover_h: Option<String>,
                facets: Option<usize>,
                represented: Option<bool>,
            }
            match cli.format {
                Format::Json => {
                    let mut v = serde_json::json!({ "c": c, "sizes": sizes, "h": h });
                    if let Some(ch) = &cover_h {
                        v["cover_h"] = serde_json::to_value(ch)?;
                    }
                    if let (true, Some(d)) = (facets, &complex) {
                        v["complex"] = serde_json::to_value(d)?;
                    }
                    if let Some((m, ok)) = &representation {
                        v["representation"] = serde_json::json!({ "matrix": m, "matches": ok });
                    }
                    json(&v)
                }
                Format::Csv => csv_one(&Row {
                    c,
                    sizes: join(&sizes, " "),
                    h: join(h.as_slice(), " "),
                    cover_h: cover_h.as_ref().map(|ch| join(ch.as_slice(), " ")),
                    facets: complex.as_ref().map(|d| d.facet_count()),
                    represented: representation.as_ref().map(|r| r.1),
                })?,
                Format::Text => {
                    let mut s = format!("h          {h}\n");
                    if let Some(ch) = &cover_h {
                        s += &format!("cover h    {ch}\n");
                    }
                    if let (true, Some(d)) = (facets, &complex) {
                        s += &format!("facets     {}\n", d.to_json());
                    }
                    if let Some((m, ok)) = &representation {
                        for row in m {
                            s += &format!("matrix     {}\n", join(row, " "));
                        }
                        s += &format!("represents {ok}\n");
                    }
                    s
                }
            }
        }
    };
    print!("{out}");
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
