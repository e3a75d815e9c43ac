//! Cross-check of the thermodynamic correlators against exact
//! diagonalization of a finite chain.

use std::path::Path;

use rayon::prelude::*;

use super::config::SweepConfig;
use super::fmt_f64;
use crate::correlators::{ChainCorrelators, CorrelatorSet};
use crate::ed::{self, Boundary, ChainSpec};
use crate::error::Result;
use crate::interval::Interval;
use crate::params::{ModelParams, StateKind};

/// Components that must vanish by symmetry, to this precision.
pub const VANISHING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub gamma: f64,
    pub lambda: f64,
    pub n: usize,
    pub state: StateKind,
    pub quantity: &'static str,
    pub ed: f64,
    /// Thermodynamic value, or the admissible interval for `pxz`.
    pub reference: Interval,
    /// Distance from `ed` to `reference`.
    pub deviation: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(OracleCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["gamma", "lambda", "n", "state", "quantity", "ed", "ref_lo", "ref_hi", "deviation", "tolerance", "pass"])?;
        for c in &self.checks {
            w.write_record([
                fmt_f64(c.gamma),
                fmt_f64(c.lambda),
                c.n.to_string(),
                c.state.as_str().to_string(),
                c.quantity.to_string(),
                fmt_f64(c.ed),
                fmt_f64(c.reference.lo),
                fmt_f64(c.reference.hi),
                fmt_f64(c.deviation),
                fmt_f64(c.tolerance),
                c.passed().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn distance(x: f64, iv: Interval) -> f64 {
    if iv.contains(x) {
        0.0
    } else {
        (x - iv.lo).abs().min((x - iv.hi).abs())
    }
}

/// Sites `(i, i + n)` used for a separation: the origin on a ring, the
/// centre of an open chain.
fn site_pair(spec: &ChainSpec, n: usize) -> (usize, usize) {
    let i = match spec.boundary {
        Boundary::Periodic => 0,
        Boundary::Open => (spec.sites - n) / 2,
    };
    (i, i + n)
}

/// Runs the `[ed]` grid of `cfg`: symmetric correlators and energy at every
/// point, plus `px` against `M` and `pxz` against its bounds in the
/// ferromagnetic phase.
pub fn run_oracle(cfg: &SweepConfig) -> Result<OracleReport> {
    let e = &cfg.ed;
    let points: Vec<(f64, f64)> = e.gammas.iter().flat_map(|&g| e.lambdas.iter().map(move |&l| (g, l))).collect();
    let per_point = points.par_iter().map(|&(g, l)| oracle_point(cfg, g, l)).collect::<Result<Vec<_>>>()?;
    Ok(OracleReport { checks: per_point.into_iter().flatten().collect() })
}

fn oracle_point(cfg: &SweepConfig, gamma: f64, lambda: f64) -> Result<Vec<OracleCheck>> {
    let e = &cfg.ed;
    let params = ModelParams::new(gamma, lambda)?;
    let spec = ChainSpec::new(e.sites, e.boundary, params)?;
    let doublet = ed::ground_doublet(&spec)?;
    let max_n = e.ns.iter().copied().max().unwrap_or(1);
    let chain = ChainCorrelators::new(&params, max_n)?;
    let mut checks = Vec::new();
    let mut push = |n: usize, state: StateKind, quantity: &'static str, ed: f64, reference: Interval, tolerance: f64| {
        checks.push(OracleCheck {
            gamma,
            lambda,
            n,
            state,
            quantity,
            ed,
            reference,
            deviation: distance(ed, reference),
            tolerance,
        });
    };
    let pt = Interval::point;
    push(0, StateKind::Symmetric, "energy", doublet.energy_per_site(), pt(chain.energy_per_site()), e.tolerance);

    let broken = params.is_ferromagnetic().then(|| ed::broken_state(&doublet));
    for &n in &e.ns {
        let (i, j) = site_pair(&spec, n);
        let measured = ed::measured_correlators(&doublet, i, j)?;
        let thermo = chain.symmetric_set(n)?;
        compare_common(&mut push, n, StateKind::Symmetric, &measured, &thermo, e.tolerance);
        if let Some(b) = &broken {
            let measured = ed::measured_correlators(b, i, j)?;
            let thermo = chain.set(n, StateKind::Broken)?;
            compare_common(&mut push, n, StateKind::Broken, &measured, &thermo, e.tolerance);
            push(n, StateKind::Broken, "px", measured.px, pt(thermo.px), e.tolerance);
            push(n, StateKind::Broken, "pxz", measured.pxz.lo, thermo.pxz, e.tolerance);
        }
    }
    Ok(checks)
}

fn compare_common(
    push: &mut impl FnMut(usize, StateKind, &'static str, f64, Interval, f64),
    n: usize,
    state: StateKind,
    measured: &CorrelatorSet,
    thermo: &CorrelatorSet,
    tolerance: f64,
) {
    let pt = Interval::point;
    push(n, state, "pz", measured.pz, pt(thermo.pz), tolerance);
    push(n, state, "pxx", measured.pxx, pt(thermo.pxx), tolerance);
    push(n, state, "pyy", measured.pyy, pt(thermo.pyy), tolerance);
    push(n, state, "pzz", measured.pzz, pt(thermo.pzz), tolerance);
    push(n, state, "pxy", measured.pxy, pt(0.0), VANISHING_TOL);
    push(n, state, "pyz", measured.pyz, pt(0.0), VANISHING_TOL);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ring_matches_within_tolerance() {
        let cfg = SweepConfig::parse("[ed]\nsites = 8\ngamma = 1\nlambda = 0.5, 2\nn = 1\ntolerance = 0.05", None).unwrap();
        let report = run_oracle(&cfg).unwrap();
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(report.checks.iter().any(|c| c.quantity == "pxz"));
    }

    #[test]
    fn distance_to_interval() {
        let iv = Interval::new(-1.0, 1.0);
        assert_eq!(distance(0.5, iv), 0.0);
        assert!((distance(1.5, iv) - 0.5).abs() < 1e-15);
        assert!((distance(-3.0, iv) - 2.0).abs() < 1e-15);
    }
}
