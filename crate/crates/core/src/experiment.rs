//! Monte-Carlo experiments: sample canonical expressions in parallel,
//! classify each one and aggregate counts.
//!
//! Sample `i` of an experiment with base seed `s` is drawn from
//! `RngState::for_sample(s, i)`, so reports depend only on the
//! configuration and never on the number of workers.

use std::io::{BufRead, Write};
use std::ops::AddAssign;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::classical::{decide_cleaned, is_simple_non_tautology_gkz, CertificateKind, TautologyStatus, DEFAULT_MAX_VARS};
use crate::count::stam_table;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::intuition::{is_cheap, is_simple, IntuitVerdict};
use crate::randgen::{random_canonical, RngState};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_211_018;

/// Fixed CSV header of an experiment summary.
pub const CSV_HEADER: &str = "n,count,seed,nSimple,nMP,nEasy,nCheap,nTautology,nCheapAndTaut,nGKZSimpleNonTaut,nAntilogy,nUnknown,ratioCheapOverTaut,gkzRatio,simpleRate,elapsedSeconds";

pub const RN_CSV_HEADER: &str = "n,logNOverN,simpleRate,nSimple,count,seed";

/// Every verdict for one expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub intuit: IntuitVerdict,
    pub status: TautologyStatus,
    pub gkz_simple_non_taut: bool,
    /// The valuation pipeline gave up (too many variables) and the status
    /// was settled by the cheap certificate instead.
    pub tautology_by_cheap: bool,
}

impl Classification {
    pub fn antilogy(&self) -> bool {
        self.status.certificate() == Some(CertificateKind::Antilogy)
    }

    /// Whether the valuation search (direct or collapsed) was needed.
    pub fn searched(&self) -> bool {
        !self.antilogy()
    }

    pub fn to_json(&self, with_witness: bool) -> serde_json::Value {
        let mut v = json!({
            "simple": self.intuit.simple,
            "mp": self.intuit.mp,
            "easy": self.intuit.easy,
            "minorAfterClean": self.intuit.minor_after_clean,
            "cheap": self.intuit.cheap,
            "cleanedSize": self.intuit.cleaned_size,
            "cleaned": self.intuit.cleaned.to_string(),
            "status": self.status.label(),
            "certificate": self.status.certificate(),
            "gkzSimpleNonTaut": self.gkz_simple_non_taut,
            "antilogy": self.antilogy(),
            "tautologyByCheap": self.tautology_by_cheap,
        });
        if with_witness {
            v["witness"] = self
                .status
                .witness()
                .map_or(serde_json::Value::Null, |w| w.to_json());
        }
        v
    }
}

/// Run the intuitionistic cascade and the tautology pipeline on `e`.
///
/// Cheap expressions are intuitionistic theorems, hence tautologies; when the
/// valuation pipeline returns unknown for one of them the status is set to
/// tautology and `tautology_by_cheap` records it.
pub fn classify(e: &Expr, max_vars: usize) -> Classification {
    let intuit = is_cheap(e);
    let mut status = decide_cleaned(e, &intuit.cleaned, max_vars);
    let tautology_by_cheap = intuit.cheap && status.is_unknown();
    if tautology_by_cheap {
        status = TautologyStatus::Tautology;
    }
    Classification {
        intuit,
        status,
        gkz_simple_non_taut: is_simple_non_tautology_gkz(e),
        tautology_by_cheap,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub count: u64,
    pub seed: u64,
    pub max_vars: usize,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    /// Write 0 instead of the wall-clock time so that summaries are
    /// byte-for-byte reproducible.
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn new(n: usize, count: u64, seed: u64) -> Self {
        ExperimentConfig {
            n,
            count,
            seed,
            max_vars: DEFAULT_MAX_VARS,
            workers: 0,
            record_timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Argument("n must be at least 1".into()));
        }
        if self.count == 0 {
            return Err(Error::Argument("count must be at least 1".into()));
        }
        if self.max_vars == 0 {
            return Err(Error::Argument("max-vars must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub samples: u64,
    pub simple: u64,
    pub mp: u64,
    pub easy: u64,
    pub cheap: u64,
    pub tautology: u64,
    pub cheap_and_tautology: u64,
    pub gkz_simple_non_taut: u64,
    pub antilogy: u64,
    pub unknown: u64,
    /// Reached the valuation search.
    pub searched: u64,
    /// Cheap but refuted by a valuation; zero unless the cascade is unsound.
    pub cheap_not_tautology: u64,
    pub tautology_by_cheap: u64,
}

impl Counts {
    pub fn of(c: &Classification) -> Self {
        let b = u64::from;
        let taut = c.status.is_tautology();
        Counts {
            samples: 1,
            simple: b(c.intuit.simple),
            mp: b(c.intuit.mp),
            easy: b(c.intuit.easy),
            cheap: b(c.intuit.cheap),
            tautology: b(taut),
            cheap_and_tautology: b(c.intuit.cheap && taut),
            gkz_simple_non_taut: b(c.gkz_simple_non_taut),
            antilogy: b(c.antilogy()),
            unknown: b(c.status.is_unknown()),
            searched: b(c.searched()),
            cheap_not_tautology: b(c.intuit.cheap && !taut),
            tautology_by_cheap: b(c.tautology_by_cheap),
        }
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.samples += o.samples;
        self.simple += o.simple;
        self.mp += o.mp;
        self.easy += o.easy;
        self.cheap += o.cheap;
        self.tautology += o.tautology;
        self.cheap_and_tautology += o.cheap_and_tautology;
        self.gkz_simple_non_taut += o.gkz_simple_non_taut;
        self.antilogy += o.antilogy;
        self.unknown += o.unknown;
        self.searched += o.searched;
        self.cheap_not_tautology += o.cheap_not_tautology;
        self.tautology_by_cheap += o.tautology_by_cheap;
    }
}

fn merge(mut a: Counts, b: Counts) -> Counts {
    a += b;
    a
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub counts: Counts,
    pub elapsed_seconds: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        f64::NAN
    } else {
        num as f64 / den as f64
    }
}

impl ExperimentReport {
    /// Cheap tautologies over all tautologies.
    pub fn cheap_over_tautology(&self) -> f64 {
        ratio(self.counts.cheap_and_tautology, self.counts.tautology)
    }

    /// Simple theorems over expressions that are not GKZ simple
    /// non-tautologies.
    pub fn gkz_ratio(&self) -> f64 {
        ratio(self.counts.simple, self.counts.samples - self.counts.gkz_simple_non_taut)
    }

    pub fn simple_rate(&self) -> f64 {
        ratio(self.counts.simple, self.counts.samples)
    }

    pub fn tautology_rate(&self) -> f64 {
        ratio(self.counts.tautology, self.counts.samples)
    }

    pub fn csv_row(&self) -> String {
        let c = &self.counts;
        let elapsed = if self.config.record_timing { self.elapsed_seconds } else { 0.0 };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.3}",
            self.config.n,
            c.samples,
            self.config.seed,
            c.simple,
            c.mp,
            c.easy,
            c.cheap,
            c.tautology,
            c.cheap_and_tautology,
            c.gkz_simple_non_taut,
            c.antilogy,
            c.unknown,
            self.cheap_over_tautology(),
            self.gkz_ratio(),
            self.simple_rate(),
            elapsed,
        )
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}\n", self.csv_row())
    }
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Argument(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// Sample `i` of the experiment.
pub fn sample(cfg: &ExperimentConfig, index: u64) -> Expr {
    let table = stam_table(cfg.n);
    random_canonical(&mut RngState::for_sample(cfg.seed, index), cfg.n, &table).to_expr()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let start = Instant::now();
    let table = stam_table(cfg.n);
    let counts = with_pool(cfg.workers, || {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngState::for_sample(cfg.seed, i);
                let e = random_canonical(&mut rng, cfg.n, &table).to_expr();
                Counts::of(&classify(&e, cfg.max_vars))
            })
            .reduce(Counts::default, merge)
    })?;
    Ok(ExperimentReport {
        config: cfg.clone(),
        counts,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Like [`run_experiment`], also writing one JSON line per sample in index
/// order.
pub fn run_experiment_with_dump(cfg: &ExperimentConfig, dump: &mut impl Write) -> Result<ExperimentReport> {
    cfg.validate()?;
    let start = Instant::now();
    let table = stam_table(cfg.n);
    let records: Vec<(Counts, String)> = with_pool(cfg.workers, || {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngState::for_sample(cfg.seed, i);
                let e = random_canonical(&mut rng, cfg.n, &table).to_expr();
                let c = classify(&e, cfg.max_vars);
                let mut line = c.to_json(false);
                line["index"] = json!(i);
                line["expr"] = json!(e.to_string());
                (Counts::of(&c), line.to_string())
            })
            .collect()
    })?;
    let mut counts = Counts::default();
    for (c, line) in records {
        counts += c;
        writeln!(dump, "{line}").map_err(io_error)?;
    }
    Ok(ExperimentReport {
        config: cfg.clone(),
        counts,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

fn io_error(e: std::io::Error) -> Error {
    Error::Argument(format!("i/o failure: {e}"))
}

/// Re-classify the expressions of a JSONL dump and aggregate them again.
pub fn reclassify_dump(reader: impl BufRead, max_vars: usize) -> Result<Counts> {
    let mut counts = Counts::default();
    for line in reader.lines() {
        let line = line.map_err(io_error)?;
        if line.trim().is_empty() {
            continue;
        }
        let v: serde_json::Value =
            serde_json::from_str(&line).map_err(|e| Error::Syntax { pos: 0, msg: e.to_string() })?;
        let text = v["expr"]
            .as_str()
            .ok_or_else(|| Error::Syntax { pos: 0, msg: "record without \"expr\"".into() })?;
        counts += Counts::of(&classify(&text.parse()?, max_vars));
    }
    Ok(counts)
}

/// One row of the simple-theorem rate table.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleRateRow {
    pub n: usize,
    pub count: u64,
    pub seed: u64,
    pub simple: u64,
}

impl SimpleRateRow {
    pub fn rate(&self) -> f64 {
        ratio(self.simple, self.count)
    }

    /// `log(n) / n`, the asymptotic rate of simple theorems.
    pub fn log_n_over_n(&self) -> f64 {
        (self.n as f64).ln() / self.n as f64
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.9},{:.6},{},{},{}",
            self.n,
            self.log_n_over_n(),
            self.rate(),
            self.simple,
            self.count,
            self.seed
        )
    }
}

/// Fraction of simple theorems among `count` samples of size `n`. Uses the
/// same sample streams as [`run_experiment`].
pub fn simple_rate(n: usize, count: u64, seed: u64, workers: usize) -> Result<SimpleRateRow> {
    ExperimentConfig::new(n, count, seed).validate()?;
    let table = stam_table(n);
    let simple = with_pool(workers, || {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let e = random_canonical(&mut RngState::for_sample(seed, i), n, &table).to_expr();
                u64::from(is_simple(&e))
            })
            .sum()
    })?;
    Ok(SimpleRateRow { n, count, seed, simple })
}

pub fn simple_rate_table(sizes: &[usize], count: u64, seed: u64, workers: usize) -> Result<Vec<SimpleRateRow>> {
    sizes.iter().map(|&n| simple_rate(n, count, seed, workers)).collect()
}

pub fn simple_rate_csv(rows: &[SimpleRateRow]) -> String {
    let mut out = format!("{RN_CSV_HEADER}\n");
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn classify_examples() {
        let c = classify(&e("a1->a0->a0"), 32);
        assert!(c.intuit.simple && c.intuit.cheap && c.status.is_tautology());

        let c = classify(&e("((a1->a0)->a1)->a1"), 32);
        assert!(!c.intuit.cheap && c.status.is_tautology());

        let c = classify(&e("a1->a0"), 32);
        assert!(!c.intuit.cheap && c.antilogy() && c.gkz_simple_non_taut);
        assert_eq!(c.status.label(), "not-tautology");
    }

    #[test]
    fn single_sample_report() {
        let mut cfg = ExperimentConfig::new(10, 1, 5);
        cfg.record_timing = false;
        cfg.workers = 1;
        let r = run_experiment(&cfg).unwrap();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), CSV_HEADER.split(',').count());
        for field in &row[3..12] {
            assert!(matches!(*field, "0" | "1"), "{field}");
        }
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn invalid_config() {
        assert!(run_experiment(&ExperimentConfig::new(0, 1, 0)).is_err());
        assert!(run_experiment(&ExperimentConfig::new(5, 0, 0)).is_err());
        let mut cfg = ExperimentConfig::new(5, 1, 0);
        cfg.max_vars = 0;
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn rate_row_format() {
        let row = SimpleRateRow { n: 25, count: 10, seed: 1, simple: 2 };
        assert_eq!(row.csv_row(), "25,0.128755033,0.200000,2,10,1");
    }
}
