//! Figure presets: fixed parameter sets and the data series drawn from a
//! sweep table.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::config::{Measure, SweepConfig};
use super::SweepRow;
use crate::correlators::CorrelatorSet;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::measures::{r_spectrum_scan, symmetry_equivalence_lhs, XzEndpoint};
use crate::params::StateKind;

/// One of the nineteen figure presets, `fig1` to `fig19`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Preset(u8);

impl Preset {
    pub const COUNT: u8 = 19;

    pub fn new(number: u8) -> Result<Self> {
        if (1..=Self::COUNT).contains(&number) {
            Ok(Preset(number))
        } else {
            Err(Error::Config(format!("no preset fig{number}; presets run from fig1 to fig{}", Self::COUNT)))
        }
    }

    pub fn number(&self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Preset> {
        (1..=Self::COUNT).map(Preset)
    }

    fn layout(&self) -> Layout {
        use Pick::*;
        use Quantity::*;
        use StateKind::{Broken as B, Symmetric as S};
        const FIVE: &[f64] = &[1.0, 0.8, 0.6, 0.4, 0.2];
        const SIX: &[f64] = &[1.0, 0.8, 0.6, 0.4, 0.2, 0.1];
        const SURFACE: &[f64] = &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
        let (gammas, series): (&[f64], Vec<Series>) = match self.0 {
            1 => (FIVE, vec![Series::new(B, 1, Px, Value)]),
            2 => (FIVE, vec![Series::new(S, 1, Pz, Value)]),
            3 => (FIVE, vec![Series::new(S, 1, Pxx, Value)]),
            4 => (FIVE, vec![Series::new(S, 1, Pyy, Value)]),
            5 => (FIVE, vec![Series::new(S, 1, Pzz, Value)]),
            6 => (FIVE, vec![Series::new(S, 1, Lhs, Value)]),
            7 => (SIX, vec![Series::new(B, 1, Concurrence, Lower)]),
            8 => (
                FIVE,
                vec![Series::new(B, 1, Concurrence, Lower), Series::new(B, 1, Concurrence, Upper), Series::new(S, 1, Concurrence, Value)],
            ),
            9 => (&[0.8], (0..4).map(|k| Series::new(S, 1, REps(k), Value)).collect()),
            10 => (&[0.8], (0..4).map(|k| Series::new(B, 1, REps(k), Value)).collect()),
            11 => (FIVE, vec![Series::new(S, 1, Negativity, Value)]),
            12 => (&[1.0, 0.8, 0.6, 0.4], vec![Series::new(B, 2, Concurrence, Lower)]),
            13 => (
                &[0.2],
                vec![Series::new(B, 2, Concurrence, Upper), Series::new(B, 2, Concurrence, Lower), Series::new(S, 2, Concurrence, Value)],
            ),
            14 => (SIX, vec![Series::new(S, 2, Negativity, Value)]),
            15 => (SURFACE, vec![Series::new(B, 1, G1, Value)]),
            16 => (SURFACE, vec![Series::new(B, 1, G2, Value)]),
            17 => (&[1.0, 0.6, 0.2], vec![Series::new(B, 1, G2, Lower), Series::new(B, 1, G2, Upper)]),
            18 => (&[1.0, 0.4], vec![Series::new(S, 1, G1, Value), Series::new(B, 1, G1, Value)]),
            19 => (&[1.0, 0.4], vec![Series::new(S, 1, G2, Value), Series::new(B, 1, G2, Value)]),
            _ => unreachable!("preset number checked on construction"),
        };
        Layout { gammas, series }
    }

    /// Sets the γ list, separations, state kinds and measures of `cfg`.
    pub fn apply(&self, cfg: &mut SweepConfig) {
        let layout = self.layout();
        cfg.gammas = layout.gammas.to_vec();
        let mut ns: Vec<usize> = layout.series.iter().map(|s| s.n).collect();
        ns.sort();
        ns.dedup();
        cfg.ns = ns;
        let mut states = Vec::new();
        for kind in [StateKind::Symmetric, StateKind::Broken] {
            if layout.series.iter().any(|s| s.state == kind) {
                states.push(kind);
            }
        }
        cfg.states = states;
        let mut measures: Vec<Measure> = layout.series.iter().filter_map(|s| s.quantity.measure()).collect();
        measures.sort();
        measures.dedup();
        cfg.measures = measures;
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fig{}", self.0)
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let digits = s.strip_prefix("fig").unwrap_or(s);
        let number: u8 = digits.parse().map_err(|_| Error::Config(format!("unknown preset `{s}`")))?;
        Preset::new(number)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Px,
    Pz,
    Pxx,
    Pyy,
    Pzz,
    /// Left side of the symmetry-equivalence condition.
    Lhs,
    Concurrence,
    Negativity,
    G1,
    G2,
    /// k-th tracked eigenvalue branch of the concurrence matrix.
    REps(usize),
}

impl Quantity {
    fn measure(&self) -> Option<Measure> {
        match self {
            Quantity::Concurrence | Quantity::REps(_) => Some(Measure::Concurrence),
            Quantity::Negativity => Some(Measure::Negativity),
            Quantity::G1 => Some(Measure::G1),
            Quantity::G2 => Some(Measure::G2),
            _ => None,
        }
    }

    fn label(&self) -> String {
        match self {
            Quantity::Px => "px".into(),
            Quantity::Pz => "pz".into(),
            Quantity::Pxx => "pxx".into(),
            Quantity::Pyy => "pyy".into(),
            Quantity::Pzz => "pzz".into(),
            Quantity::Lhs => "lhs".into(),
            Quantity::Concurrence => "C".into(),
            Quantity::Negativity => "N".into(),
            Quantity::G1 => "G1".into(),
            Quantity::G2 => "G2".into(),
            Quantity::REps(k) => format!("eps{}", k + 1),
        }
    }

    fn read(&self, row: &SweepRow) -> Option<Interval> {
        let point = |x: Option<f64>| x.map(Interval::point);
        match self {
            Quantity::Px => point(row.px),
            Quantity::Pz => point(row.pz),
            Quantity::Pxx => point(row.pxx),
            Quantity::Pyy => point(row.pyy),
            Quantity::Pzz => point(row.pzz),
            Quantity::Lhs => {
                let cs = CorrelatorSet::symmetric(row.n, row.pz?, row.pxx?, row.pyy?, row.pzz?);
                Some(Interval::point(symmetry_equivalence_lhs(&cs)))
            }
            Quantity::Concurrence => row.concurrence,
            Quantity::Negativity => row.negativity,
            Quantity::G1 => point(row.g1),
            Quantity::G2 => row.g2,
            Quantity::REps(_) => None,
        }
    }
}

/// Which number of an interval becomes the `y` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pick {
    Value,
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy)]
struct Series {
    state: StateKind,
    n: usize,
    quantity: Quantity,
    pick: Pick,
}

impl Series {
    fn new(state: StateKind, n: usize, quantity: Quantity, pick: Pick) -> Self {
        Series { state, n, quantity, pick }
    }

    fn name(&self, gamma: f64) -> String {
        let pick = match self.pick {
            Pick::Value => "",
            Pick::Lower => "_lo",
            Pick::Upper => "_hi",
        };
        format!("{}{}_{}_n{}_g{}", self.quantity.label(), pick, self.state.as_str(), self.n, gamma)
    }
}

struct Layout {
    gammas: &'static [f64],
    series: Vec<Series>,
}

/// Files written by [`emit_figure`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOutput {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// One plot point: `x, y, y_lo, y_hi`.
type Point = [f64; 4];

/// Writes one `x y y_lo y_hi` file per series plus a gnuplot stub into
/// `dir`. Output is byte-identical for identical tables.
pub fn emit_figure(preset: Preset, rows: &[SweepRow], dir: &Path) -> Result<FigureOutput> {
    let mut out = FigureOutput::default();
    if rows.is_empty() {
        out.warnings.push(format!("{preset}: empty table, no files written"));
        return Ok(out);
    }
    let layout = preset.layout();
    let mut gammas: Vec<f64> = Vec::new();
    for r in rows {
        if !gammas.contains(&r.gamma) {
            gammas.push(r.gamma);
        }
    }
    let mut data: BTreeMap<usize, (String, Series, Vec<Point>)> = BTreeMap::new();
    let mut key = 0;
    for &gamma in &gammas {
        let spectra = spectrum_series(&layout, rows, gamma, &mut out)?;
        for s in &layout.series {
            let points = match s.quantity {
                Quantity::REps(k) => spectra.as_ref().map(|sp| sp[k].clone()).unwrap_or_default(),
                q => table_series(rows, gamma, s, q),
            };
            if points.is_empty() {
                out.warnings.push(format!("{preset}: series {} has no points", s.name(gamma)));
                continue;
            }
            data.insert(key, (s.name(gamma), *s, points));
            key += 1;
        }
    }
    if data.is_empty() {
        return Ok(out);
    }
    std::fs::create_dir_all(dir)?;
    let mut script = String::new();
    let _ = writeln!(script, "# {preset}");
    let _ = writeln!(script, "set xlabel 'lambda'");
    let mut plots = Vec::new();
    for (name, series, points) in data.values() {
        let file = format!("{preset}_{name}.dat");
        let mut body = String::new();
        let _ = writeln!(body, "# {preset} {name} state={} n={}", series.state, series.n);
        let _ = writeln!(body, "# x y y_lo y_hi");
        for p in points {
            let _ = writeln!(body, "{} {} {} {}", p[0], p[1], p[2], p[3]);
        }
        let path = dir.join(&file);
        std::fs::write(&path, body)?;
        out.files.push(path);
        let style = if series.state == StateKind::Symmetric && layout.series.iter().any(|s| s.state == StateKind::Broken) {
            "lines dt 2"
        } else {
            "lines"
        };
        plots.push(format!("'{file}' using 1:2 with {style} title '{name}'"));
    }
    let _ = writeln!(script, "plot {}", plots.join(", \\\n     "));
    let path = dir.join(format!("{preset}.gp"));
    std::fs::write(&path, script)?;
    out.files.push(path);
    Ok(out)
}

fn table_series(rows: &[SweepRow], gamma: f64, s: &Series, q: Quantity) -> Vec<Point> {
    let mut points: Vec<Point> = rows
        .iter()
        .filter(|r| r.gamma == gamma && r.n == s.n && r.state == s.state && r.fault.is_none())
        .filter_map(|r| {
            let iv = q.read(r)?;
            let y = match s.pick {
                Pick::Value => iv.mid(),
                Pick::Lower => iv.lo,
                Pick::Upper => iv.hi,
            };
            Some([r.lambda, y, iv.lo, iv.hi])
        })
        .collect();
    points.sort_by(|a, b| a[0].total_cmp(&b[0]));
    points
}

/// Tracked concurrence-matrix eigenvalues for the spectrum presets, or
/// `None` when the layout has no such series.
fn spectrum_series(layout: &Layout, rows: &[SweepRow], gamma: f64, out: &mut FigureOutput) -> Result<Option<[Vec<Point>; 4]>> {
    let Some(s) = layout.series.iter().find(|s| matches!(s.quantity, Quantity::REps(_))) else {
        return Ok(None);
    };
    let mut grid: Vec<f64> = rows
        .iter()
        .filter(|r| r.gamma == gamma && r.n == s.n && r.state == s.state && r.fault.is_none())
        .map(|r| r.lambda)
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.is_empty() {
        return Ok(None);
    }
    let scan = r_spectrum_scan(gamma, s.n, s.state, XzEndpoint::Upper, &grid)?;
    for c in &scan.crossings {
        out.warnings.push(format!("gamma {gamma}: largest eigenvalue changes branch at lambda {c}"));
    }
    let mut series: [Vec<Point>; 4] = Default::default();
    for p in &scan.points {
        for (k, s) in series.iter_mut().enumerate() {
            let v = p.tracked[k];
            s.push([p.lambda, v, v, v]);
        }
    }
    Ok(Some(series))
}
