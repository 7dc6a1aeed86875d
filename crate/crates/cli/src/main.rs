use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use canex_core::classical::DEFAULT_MAX_VARS;
use canex_core::count::{asymptotic_canonical_log10, bell, catalan, count_canonical, stam_table};
use canex_core::experiment::{
    classify, run_experiment, run_experiment_with_dump, simple_rate_csv, simple_rate_table, ExperimentConfig,
    DEFAULT_SEED,
};
use canex_core::oracle::enumerate_canonical;
use canex_core::randgen::{random_canonical, RngState};
use canex_core::{CanonicalExpression, Expr};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "canex", version, about = "Random canonical implicative expressions and their classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Draw uniform canonical expressions, one per line.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Classify one expression.
    Classify {
        #[arg(long)]
        expr: String,
        /// Renumber variables canonically instead of rejecting the input.
        #[arg(long)]
        canonicalize: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
        max_vars: usize,
        /// Include the falsifying valuation, if any.
        #[arg(long)]
        witness: bool,
    },
    /// Sample, classify and aggregate.
    Experiment {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
        max_vars: usize,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Summary CSV path; stdout when absent.
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// Per-sample JSONL dump.
        #[arg(long)]
        dump_jsonl: Option<PathBuf>,
        /// Write 0 for elapsedSeconds so the CSV is reproducible byte for byte.
        #[arg(long)]
        no_timing: bool,
    },
    /// Stream every canonical expression of a given size as JSONL.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        classify: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
        max_vars: usize,
    },
    /// Exact and asymptotic counts as CSV.
    Count {
        #[arg(long)]
        n: usize,
    },
    /// Rate of simple theorems against log(n)/n.
    Rntable {
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,500,1000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out_csv: Option<PathBuf>,
    },
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
    ))
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Sample { n, count, seed, format } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let table = stam_table(n);
            for i in 0..count {
                let e = random_canonical(&mut RngState::for_sample(seed, i), n, &table);
                match format {
                    Format::Text => writeln!(out, "{e}")?,
                    Format::Json => writeln!(out, "{}", e.to_json())?,
                }
            }
        }
        Command::Classify {
            expr,
            canonicalize,
            max_vars,
            witness,
        } => {
            if max_vars == 0 {
                bail!("--max-vars must be at least 1");
            }
            let e = if canonicalize {
                expr.parse::<Expr>()?.canonicalized()
            } else {
                CanonicalExpression::parse(&expr)?
            };
            let mut record = classify(&e.to_expr(), max_vars).to_json(witness);
            record["expr"] = json!(e.render());
            writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?;
        }
        Command::Experiment {
            n,
            count,
            seed,
            max_vars,
            workers,
            out_csv,
            dump_jsonl,
            no_timing,
        } => {
            let cfg = ExperimentConfig {
                n,
                count,
                seed,
                max_vars,
                workers,
                record_timing: !no_timing,
            };
            let report = match &dump_jsonl {
                Some(path) => {
                    let mut w = create(path)?;
                    let r = run_experiment_with_dump(&cfg, &mut w)?;
                    w.flush()?;
                    r
                }
                None => run_experiment(&cfg)?,
            };
            write_out(out_csv.as_ref(), &report.to_csv())?;
            let c = &report.counts;
            eprintln!(
                "{} samples of size {n}: {} tautologies ({:.4}), {} cheap tautologies, cheap/taut {:.4}, \
                 {} simple, gkz ratio {:.4}, {} searched, {} unknown, {} settled by cheap, {} cheap but refuted, {:.1}s",
                c.samples,
                c.tautology,
                report.tautology_rate(),
                c.cheap_and_tautology,
                report.cheap_over_tautology(),
                c.simple,
                report.gkz_ratio(),
                c.searched,
                c.unknown,
                c.tautology_by_cheap,
                c.cheap_not_tautology,
                report.elapsed_seconds,
            );
        }
        Command::Enumerate { n, classify: with_class, max_vars } => {
            for (i, e) in enumerate_canonical(n)?.enumerate() {
                let mut record = if with_class {
                    classify(&e.to_expr(), max_vars).to_json(false)
                } else {
                    json!({})
                };
                record["index"] = json!(i);
                record["expr"] = json!(e.render());
                record["rgs"] = json!(e.vars());
                record["shape"] = json!(e.shape().to_paren_string());
                writeln!(out, "{record}")?;
            }
        }
        Command::Count { n } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let asymptotic = if n >= 2 {
                format!("{:.6}", asymptotic_canonical_log10(n))
            } else {
                String::new()
            };
            writeln!(out, "n,catalan,bell,canonical,log10Asymptotic")?;
            writeln!(out, "{n},{},{},{},{asymptotic}", catalan(n - 1), bell(n), count_canonical(n))?;
        }
        Command::Rntable {
            sizes,
            count,
            seed,
            workers,
            out_csv,
        } => {
            let rows = simple_rate_table(&sizes, count, seed, workers)?;
            write_out(out_csv.as_ref(), &simple_rate_csv(&rows))?;
        }
    }
    out.flush()?;
    Ok(())
}
