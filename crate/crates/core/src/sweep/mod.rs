//! Parameter sweeps over `(γ, λ, n, state)` and the analyses built on them.
//!
//! A sweep writes `table.csv` into the configured output directory. Rows are
//! journaled as grid points finish, so an interrupted sweep resumes where it
//! stopped; the finished table is sorted and carries the schema version and
//! config hash in its first line. Wall-clock data and per-row faults go to
//! `table.meta.csv` so the table itself is reproducible byte for byte.

pub mod config;
pub mod critical;
pub mod fit;
pub mod oracle;
pub mod preset;

use std::collections::{HashMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

pub use config::{EdConfig, FitConfig, Measure, SweepConfig};
pub use critical::{
    derivative_table, detect_critical_points, write_critical_csv, CriticalEstimate, CriticalPoints, DerivativeRow,
};
pub use fit::{fit_entanglement_length, g2_series, write_fit_csv, FitResult};
pub use oracle::{run_oracle, OracleCheck, OracleReport};
pub use preset::{emit_figure, FigureOutput, Preset};

use crate::correlators::ChainCorrelators;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::measures::{concurrence_interval, g1, g2n, negativity_interval, Branch};
use crate::params::{ModelParams, StateKind};

pub const SCHEMA_VERSION: u32 = 1;

pub const COLUMNS: [&str; 20] = [
    "gamma", "lambda", "n", "state", "px", "pz", "pxx", "pyy", "pzz", "pxz_lo", "pxz_hi", "C_lo", "C_hi", "N_lo",
    "N_hi", "G1", "G2_lo", "G2_hi", "branch", "energy",
];

const TABLE_FILE: &str = "table.csv";
const META_FILE: &str = "table.meta.csv";
const JOURNAL_FILE: &str = "table.journal.csv";
const DERIV_FILE: &str = "table.deriv.csv";

/// One grid point of a sweep. Empty fields were not requested or faulted.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub lambda: f64,
    pub n: usize,
    pub state: StateKind,
    pub px: Option<f64>,
    pub pz: Option<f64>,
    pub pxx: Option<f64>,
    pub pyy: Option<f64>,
    pub pzz: Option<f64>,
    pub pxz: Option<Interval>,
    pub concurrence: Option<Interval>,
    pub negativity: Option<Interval>,
    pub g1: Option<f64>,
    pub g2: Option<Interval>,
    /// Closed-form branch of the concurrence; symmetric rows only.
    pub branch: Option<Branch>,
    pub energy: Option<f64>,
    pub fault: Option<String>,
}

impl SweepRow {
    fn empty(gamma: f64, lambda: f64, n: usize, state: StateKind) -> Self {
        SweepRow {
            gamma,
            lambda,
            n,
            state,
            px: None,
            pz: None,
            pxx: None,
            pyy: None,
            pzz: None,
            pxz: None,
            concurrence: None,
            negativity: None,
            g1: None,
            g2: None,
            branch: None,
            energy: None,
            fault: None,
        }
    }

    pub fn key(&self) -> RowKey {
        RowKey::new(self.gamma, self.lambda, self.n, self.state)
    }

    fn fields(&self) -> Vec<String> {
        let o = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
        let lo = |x: Option<Interval>| o(x.map(|i| i.lo));
        let hi = |x: Option<Interval>| o(x.map(|i| i.hi));
        vec![
            fmt_f64(self.gamma),
            fmt_f64(self.lambda),
            self.n.to_string(),
            self.state.as_str().to_string(),
            o(self.px),
            o(self.pz),
            o(self.pxx),
            o(self.pyy),
            o(self.pzz),
            lo(self.pxz),
            hi(self.pxz),
            lo(self.concurrence),
            hi(self.concurrence),
            lo(self.negativity),
            hi(self.negativity),
            o(self.g1),
            lo(self.g2),
            hi(self.g2),
            self.branch.map(|b| b.as_str().to_string()).unwrap_or_default(),
            o(self.energy),
        ]
    }

    fn from_fields(rec: &csv::StringRecord) -> Result<Self> {
        let bad = |what: &str| Error::InvalidInput(format!("malformed table row ({what}): {rec:?}"));
        if rec.len() < COLUMNS.len() {
            return Err(bad("column count"));
        }
        let req = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(COLUMNS[i]));
        let opt = |i: usize| -> Result<Option<f64>> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                req(i).map(Some)
            }
        };
        let iv = |i: usize| -> Result<Option<Interval>> {
            Ok(match (opt(i)?, opt(i + 1)?) {
                (Some(lo), Some(hi)) => Some(Interval { lo, hi }),
                (None, None) => None,
                _ => return Err(bad(COLUMNS[i])),
            })
        };
        let branch = match &rec[18] {
            "" => None,
            "prime" => Some(Branch::Prime),
            "double_prime" => Some(Branch::DoublePrime),
            _ => return Err(bad("branch")),
        };
        Ok(SweepRow {
            gamma: req(0)?,
            lambda: req(1)?,
            n: rec[2].parse().map_err(|_| bad("n"))?,
            state: rec[3].parse().map_err(|_| bad("state"))?,
            px: opt(4)?,
            pz: opt(5)?,
            pxx: opt(6)?,
            pyy: opt(7)?,
            pzz: opt(8)?,
            pxz: iv(9)?,
            concurrence: iv(11)?,
            negativity: iv(13)?,
            g1: opt(15)?,
            g2: iv(16)?,
            branch,
            energy: opt(19)?,
            fault: None,
        })
    }
}

/// Identity of a row within a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowKey(String);

impl RowKey {
    pub fn new(gamma: f64, lambda: f64, n: usize, state: StateKind) -> Self {
        RowKey(format!("{}|{}|{}|{}", fmt_f64(gamma), fmt_f64(lambda), n, state.as_str()))
    }
}

/// Start time and duration of the grid point a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowTiming {
    pub started_unix_ms: u64,
    pub elapsed_us: u64,
}

/// Shortest round-trip decimal, switching to exponent form for very small or
/// large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Evaluates every `(n, state)` row of one `(γ, λ)` grid point. Numerical
/// failures are stored in the rows' `fault` field.
pub fn evaluate_point(cfg: &SweepConfig, gamma: f64, lambda: f64) -> Vec<SweepRow> {
    let max_n = cfg.ns.iter().copied().max().unwrap_or(1);
    let chain = ModelParams::new(gamma, lambda).and_then(|p| ChainCorrelators::new(&p, max_n));
    let mut rows = Vec::with_capacity(cfg.ns.len() * cfg.states.len());
    for &n in &cfg.ns {
        for &state in &cfg.states {
            let mut row = SweepRow::empty(gamma, lambda, n, state);
            match &chain {
                Ok(chain) => {
                    if let Err(e) = fill_row(cfg, chain, &mut row) {
                        row.fault = Some(e.to_string());
                    }
                }
                Err(e) => row.fault = Some(e.to_string()),
            }
            rows.push(row);
        }
    }
    rows
}

fn fill_row(cfg: &SweepConfig, chain: &ChainCorrelators, row: &mut SweepRow) -> Result<()> {
    if cfg.wants(Measure::Energy) {
        row.energy = Some(chain.energy_per_site());
    }
    let cs = chain.set(row.n, row.state)?;
    row.px = Some(cs.px);
    row.pz = Some(cs.pz);
    row.pxx = Some(cs.pxx);
    row.pyy = Some(cs.pyy);
    row.pzz = Some(cs.pzz);
    row.pxz = Some(cs.pxz);
    if row.state == StateKind::Symmetric {
        row.branch = Some(Branch::of(&cs));
    }
    if cfg.wants(Measure::G1) {
        row.g1 = Some(g1(&cs));
    }
    if cfg.wants(Measure::G2) {
        row.g2 = Some(g2n(&cs));
    }
    if cfg.wants(Measure::Concurrence) {
        row.concurrence = Some(concurrence_interval(&cs)?);
    }
    if cfg.wants(Measure::Negativity) {
        row.negativity = Some(negativity_interval(&cs)?);
    }
    Ok(())
}

/// Grid order: config γ order, then λ, n and config state order.
fn row_order(cfg: &SweepConfig) -> impl Fn(&SweepRow, &SweepRow) -> std::cmp::Ordering + '_ {
    let gamma_pos = |g: f64| cfg.gammas.iter().position(|&x| x == g).unwrap_or(usize::MAX);
    let state_pos = |s: StateKind| cfg.states.iter().position(|&x| x == s).unwrap_or(usize::MAX);
    move |a, b| {
        gamma_pos(a.gamma)
            .cmp(&gamma_pos(b.gamma))
            .then(a.lambda.total_cmp(&b.lambda))
            .then(a.n.cmp(&b.n))
            .then(state_pos(a.state).cmp(&state_pos(b.state)))
    }
}

/// The whole grid in memory, in grid order. No files are touched.
pub fn evaluate_table(cfg: &SweepConfig) -> Vec<SweepRow> {
    let points = grid_points(cfg);
    let mut rows: Vec<SweepRow> = points.par_iter().flat_map_iter(|&(g, l)| evaluate_point(cfg, g, l)).collect();
    rows.sort_by(row_order(cfg));
    rows
}

fn grid_points(cfg: &SweepConfig) -> Vec<(f64, f64)> {
    let lambdas = cfg.lambdas();
    cfg.gammas.iter().flat_map(|&g| lambdas.iter().map(move |&l| (g, l))).collect()
}

/// Controls for [`run_sweep_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Evaluate at most this many pending grid points, then stop and leave
    /// the journal in place.
    pub stop_after: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    /// Rows in grid order; the full table when `complete`.
    pub rows: Vec<SweepRow>,
    pub timings: Vec<RowTiming>,
    pub table_path: PathBuf,
    pub config_hash: String,
    /// Grid points taken from an earlier run.
    pub resumed_points: usize,
    pub computed_points: usize,
    pub complete: bool,
}

impl SweepOutcome {
    pub fn faults(&self) -> usize {
        self.rows.iter().filter(|r| r.fault.is_some()).count()
    }
}

/// Runs the sweep described by `cfg`, resuming from an earlier journal or
/// finished table in its output directory.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    run_sweep_with(cfg, RunOptions::default())
}

pub fn run_sweep_with(cfg: &SweepConfig, opts: RunOptions) -> Result<SweepOutcome> {
    cfg.validate()?;
    let hash = cfg.hash();
    let dir = &cfg.output;
    fs::create_dir_all(dir)?;
    let table_path = dir.join(TABLE_FILE);
    let journal_path = dir.join(JOURNAL_FILE);
    let meta_path = dir.join(META_FILE);

    if table_path.exists() {
        let (found, mut rows) = read_table(&table_path)?;
        if found == hash {
            let (faults, timings) = read_meta(&meta_path, &rows)?;
            for (row, fault) in rows.iter_mut().zip(faults) {
                row.fault = fault;
            }
            if cfg.derivatives {
                write_derivatives(&dir.join(DERIV_FILE), &hash, &derivative_table(&rows))?;
            }
            let points = grid_points(cfg).len();
            return Ok(SweepOutcome {
                rows,
                timings,
                table_path,
                config_hash: hash,
                resumed_points: points,
                computed_points: 0,
                complete: true,
            });
        }
    }

    let mut done: Vec<(SweepRow, RowTiming)> = Vec::new();
    if journal_path.exists() {
        let (found, entries) = read_journal(&journal_path)?;
        if found != hash {
            return Err(Error::Config(format!(
                "{} belongs to a different configuration; remove it to start over",
                journal_path.display()
            )));
        }
        done = entries;
    }
    let per_point = cfg.ns.len() * cfg.states.len();
    let mut counts: HashMap<(u64, u64), usize> = HashMap::new();
    for (r, _) in &done {
        *counts.entry((r.gamma.to_bits(), r.lambda.to_bits())).or_default() += 1;
    }
    let complete_points: HashSet<(u64, u64)> =
        counts.into_iter().filter(|&(_, c)| c >= per_point).map(|(k, _)| k).collect();
    done.retain(|(r, _)| complete_points.contains(&(r.gamma.to_bits(), r.lambda.to_bits())));
    let mut pending: Vec<(f64, f64)> = grid_points(cfg)
        .into_iter()
        .filter(|(g, l)| !complete_points.contains(&(g.to_bits(), l.to_bits())))
        .collect();
    let resumed_points = complete_points.len();
    let mut complete = true;
    if let Some(limit) = opts.stop_after {
        if pending.len() > limit {
            pending.truncate(limit);
            complete = false;
        }
    }

    // a fresh journal holds exactly the complete points carried over
    let mut journal = BufWriter::new(File::create(&journal_path)?);
    writeln!(journal, "# xychain journal schema={SCHEMA_VERSION} config={hash}")?;
    {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut journal);
        for (r, t) in &done {
            w.write_record(journal_fields(r, t))?;
        }
        w.flush()?;
    }
    journal.flush()?;
    drop(journal);

    let computed = evaluate_journaled(cfg, &pending, &journal_path)?;
    let computed_points = pending.len();
    done.extend(computed);

    let mut seen = HashSet::new();
    done.retain(|(r, _)| seen.insert(r.key()));
    let order = row_order(cfg);
    done.sort_by(|a, b| order(&a.0, &b.0));
    let (rows, timings): (Vec<SweepRow>, Vec<RowTiming>) = done.into_iter().unzip();

    if complete {
        write_table(&table_path, &hash, &rows)?;
        write_meta(&meta_path, &rows, &timings)?;
        if cfg.derivatives {
            write_derivatives(&dir.join(DERIV_FILE), &hash, &derivative_table(&rows))?;
        }
        fs::remove_file(&journal_path)?;
    }
    Ok(SweepOutcome { rows, timings, table_path, config_hash: hash, resumed_points, computed_points, complete })
}

/// Evaluates `points` in parallel; a single writer appends each finished
/// point to the journal.
fn evaluate_journaled(cfg: &SweepConfig, points: &[(f64, f64)], journal_path: &Path) -> Result<Vec<(SweepRow, RowTiming)>> {
    let file = OpenOptions::new().append(true).open(journal_path)?;
    let (tx, rx) = mpsc::channel::<Vec<(SweepRow, RowTiming)>>();
    std::thread::scope(|scope| {
        let writer = scope.spawn(move || -> Result<Vec<(SweepRow, RowTiming)>> {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
            let mut all = Vec::new();
            for batch in rx {
                for (r, t) in &batch {
                    w.write_record(journal_fields(r, t))?;
                }
                w.flush()?;
                all.extend(batch);
            }
            Ok(all)
        });
        points.par_iter().for_each_with(tx, |tx, &(g, l)| {
            let started_unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0);
            let clock = Instant::now();
            let rows = evaluate_point(cfg, g, l);
            let timing = RowTiming { started_unix_ms, elapsed_us: clock.elapsed().as_micros() as u64 };
            // a closed channel means the writer failed; its error is reported below
            let _ = tx.send(rows.into_iter().map(|r| (r, timing)).collect());
        });
        writer.join().expect("journal writer panicked")
    })
}

fn journal_fields(r: &SweepRow, t: &RowTiming) -> Vec<String> {
    let mut f = r.fields();
    f.push(r.fault.clone().unwrap_or_default());
    f.push(t.started_unix_ms.to_string());
    f.push(t.elapsed_us.to_string());
    f
}

/// Reads a header comment of the form `# ... config=<hash>`.
fn header_hash(text: &str) -> Option<String> {
    let first = text.lines().next()?;
    let first = first.strip_prefix('#')?;
    first.split_whitespace().find_map(|w| w.strip_prefix("config=")).map(str::to_string)
}

fn read_journal(path: &Path) -> Result<(String, Vec<(SweepRow, RowTiming)>)> {
    let mut text = fs::read_to_string(path)?;
    // drop a trailing record cut off mid-write
    if !text.ends_with('\n') {
        let keep = text.rfind('\n').map(|i| i + 1).unwrap_or(0);
        text.truncate(keep);
    }
    let hash = header_hash(&text).ok_or_else(|| Error::InvalidInput(format!("{} has no header", path.display())))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let mut row = SweepRow::from_fields(&rec)?;
        let n = COLUMNS.len();
        if rec.len() != n + 3 {
            return Err(Error::InvalidInput(format!("malformed journal record: {rec:?}")));
        }
        row.fault = Some(rec[n].to_string()).filter(|s| !s.is_empty());
        let parse = |s: &str| s.parse::<u64>().map_err(|_| Error::InvalidInput(format!("bad timing in {rec:?}")));
        let timing = RowTiming { started_unix_ms: parse(&rec[n + 1])?, elapsed_us: parse(&rec[n + 2])? };
        out.push((row, timing));
    }
    Ok((hash, out))
}

/// Writes the sorted table with its schema/hash comment line.
pub fn write_table(path: &Path, hash: &str, rows: &[SweepRow]) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    {
        let mut out = BufWriter::new(File::create(&tmp)?);
        writeln!(out, "# xychain sweep schema={SCHEMA_VERSION} config={hash}")?;
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(COLUMNS)?;
        for r in rows {
            w.write_record(r.fields())?;
        }
        w.flush()?;
        drop(w);
        out.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a table written by [`write_table`]; returns its config hash.
pub fn read_table(path: &Path) -> Result<(String, Vec<SweepRow>)> {
    let text = fs::read_to_string(path)?;
    let hash = header_hash(&text).ok_or_else(|| Error::InvalidInput(format!("{} has no header", path.display())))?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(Error::InvalidInput(format!("{} has an unexpected column layout", path.display())));
    }
    let rows = reader.records().map(|r| SweepRow::from_fields(&r?)).collect::<Result<Vec<_>>>()?;
    Ok((hash, rows))
}

fn write_meta(path: &Path, rows: &[SweepRow], timings: &[RowTiming]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["gamma", "lambda", "n", "state", "started_unix_ms", "elapsed_us", "fault"])?;
    for (r, t) in rows.iter().zip(timings) {
        w.write_record([
            fmt_f64(r.gamma),
            fmt_f64(r.lambda),
            r.n.to_string(),
            r.state.as_str().to_string(),
            t.started_unix_ms.to_string(),
            t.elapsed_us.to_string(),
            r.fault.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Faults and timings from the sidecar, aligned with `rows`.
fn read_meta(path: &Path, rows: &[SweepRow]) -> Result<(Vec<Option<String>>, Vec<RowTiming>)> {
    let mut by_key: HashMap<RowKey, (Option<String>, RowTiming)> = HashMap::new();
    if path.exists() {
        let mut reader = csv::Reader::from_path(path)?;
        for rec in reader.records() {
            let rec = rec?;
            if rec.len() != 7 {
                return Err(Error::InvalidInput(format!("malformed meta record: {rec:?}")));
            }
            let bad = || Error::InvalidInput(format!("malformed meta record: {rec:?}"));
            let key = RowKey::new(
                rec[0].parse().map_err(|_| bad())?,
                rec[1].parse().map_err(|_| bad())?,
                rec[2].parse().map_err(|_| bad())?,
                rec[3].parse().map_err(|_| bad())?,
            );
            let timing = RowTiming {
                started_unix_ms: rec[4].parse().map_err(|_| bad())?,
                elapsed_us: rec[5].parse().map_err(|_| bad())?,
            };
            by_key.insert(key, (Some(rec[6].to_string()).filter(|s| !s.is_empty()), timing));
        }
    }
    let zero = RowTiming { started_unix_ms: 0, elapsed_us: 0 };
    Ok(rows.iter().map(|r| by_key.remove(&r.key()).unwrap_or((None, zero))).unzip())
}

fn write_derivatives(path: &Path, hash: &str, rows: &[DerivativeRow]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# xychain derivatives schema={SCHEMA_VERSION} config={hash}")?;
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(DerivativeRow::COLUMNS)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    drop(w);
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(dir: &Path) -> SweepConfig {
        SweepConfig::parse(
            "gamma = 1, 0.5\nlambda_min = 0.8\nlambda_max = 1.3\nlambda_step = 0.1\nn = 1, 2\nstates = symmetric, broken",
            Some(dir),
        )
        .unwrap()
    }

    #[test]
    fn fmt_round_trips() {
        for x in [0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 1e-7, -2.5e-12, 123456.789, 1e20, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(1e-7), "1e-7");
        assert_eq!(fmt_f64(0.25), "0.25");
    }

    #[test]
    fn row_fields_round_trip() {
        let cfg = SweepConfig::parse("gamma = 0.6\nlambda_min = 1.5\nlambda_max = 1.5\nn = 2", None).unwrap();
        for row in evaluate_table(&cfg) {
            let rec = csv::StringRecord::from(row.fields());
            assert_eq!(SweepRow::from_fields(&rec).unwrap(), row);
        }
    }

    #[test]
    fn table_has_one_row_per_grid_point() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config(dir.path());
        let rows = evaluate_table(&cfg);
        assert_eq!(rows.len(), 2 * 6 * 2 * 2);
        let keys: HashSet<RowKey> = rows.iter().map(SweepRow::key).collect();
        assert_eq!(keys.len(), rows.len());
        assert!(rows.iter().all(|r| r.fault.is_none()));
        assert_eq!(rows[0].gamma, 1.0);
        assert_eq!(rows[0].lambda, 0.8);
    }

    #[test]
    fn sweep_writes_header_and_columns() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config(dir.path());
        let out = run_sweep(&cfg).unwrap();
        assert!(out.complete);
        let text = fs::read_to_string(&out.table_path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), format!("# xychain sweep schema=1 config={}", cfg.hash()));
        assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
        assert!(!cfg.output.join(JOURNAL_FILE).exists());
        assert!(cfg.output.join(META_FILE).exists());
    }

    #[test]
    fn empty_lambda_range_gives_empty_table() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SweepConfig::parse("lambda_min = 2\nlambda_max = 1", Some(dir.path())).unwrap();
        let out = run_sweep(&cfg).unwrap();
        assert!(out.rows.is_empty());
        assert!(out.complete);
        let (_, rows) = read_table(&out.table_path).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn journal_from_other_config_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config(dir.path());
        run_sweep_with(&cfg, RunOptions { stop_after: Some(2) }).unwrap();
        let mut other = cfg.clone();
        other.gammas = vec![0.7];
        assert!(matches!(run_sweep(&other), Err(Error::Config(_))));
    }

    #[test]
    fn truncated_journal_line_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config(dir.path());
        run_sweep_with(&cfg, RunOptions { stop_after: Some(3) }).unwrap();
        let path = cfg.output.join(JOURNAL_FILE);
        let mut text = fs::read_to_string(&path).unwrap();
        text.truncate(text.len() - 10);
        fs::write(&path, text).unwrap();
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.rows, evaluate_table(&cfg));
    }
}
