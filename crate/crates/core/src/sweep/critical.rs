//! Derivative columns of a sweep table and critical-point estimates.

use std::path::Path;

use super::{fmt_f64, SweepRow};
use crate::error::Result;
use crate::interval::Interval;
use crate::params::StateKind;

/// Below this the broken-state `G(1)` counts as vanishing.
pub const G1_ZERO_TOL: f64 = 1e-3;
/// Grids coarser than this get a widened uncertainty and a flag.
pub const MAX_RESOLVED_STEP: f64 = 0.05;
/// Series whose spread is below this are treated as flat.
const FLAT_TOL: f64 = 1e-12;

/// Central differences of one `(γ, n, state)` series at one λ.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeRow {
    pub gamma: f64,
    pub n: usize,
    pub state: StateKind,
    pub lambda: f64,
    pub d_c: Option<Interval>,
    pub d_n: Option<Interval>,
    pub d_g1: Option<f64>,
    pub d_g2: Option<Interval>,
    pub d2_energy: Option<f64>,
}

impl DerivativeRow {
    pub const COLUMNS: [&'static str; 12] =
        ["gamma", "lambda", "n", "state", "dC_lo", "dC_hi", "dN_lo", "dN_hi", "dG1", "dG2_lo", "dG2_hi", "d2E"];

    pub(crate) fn fields(&self) -> Vec<String> {
        let o = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
        let lo = |x: Option<Interval>| o(x.map(|i| i.lo));
        let hi = |x: Option<Interval>| o(x.map(|i| i.hi));
        vec![
            fmt_f64(self.gamma),
            fmt_f64(self.lambda),
            self.n.to_string(),
            self.state.as_str().to_string(),
            lo(self.d_c),
            hi(self.d_c),
            lo(self.d_n),
            hi(self.d_n),
            o(self.d_g1),
            lo(self.d_g2),
            hi(self.d_g2),
            o(self.d2_energy),
        ]
    }
}

/// Rows of one `(γ, n, state)` series sorted by λ, faults dropped.
fn series(rows: &[SweepRow], gamma: f64, n: usize, state: StateKind) -> Vec<&SweepRow> {
    let mut s: Vec<&SweepRow> =
        rows.iter().filter(|r| r.gamma == gamma && r.n == n && r.state == state && r.fault.is_none()).collect();
    s.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    s
}

fn first_derivative(x: [f64; 3], y: [Option<f64>; 3]) -> Option<f64> {
    let (y0, y2) = (y[0]?, y[2]?);
    Some((y2 - y0) / (x[2] - x[0]))
}

/// Three-point second derivative on a possibly uneven grid.
fn second_derivative(x: [f64; 3], y: [Option<f64>; 3]) -> Option<f64> {
    let (y0, y1, y2) = (y[0]?, y[1]?, y[2]?);
    let (h0, h1) = (x[1] - x[0], x[2] - x[1]);
    Some(2.0 * (h0 * y2 - (h0 + h1) * y1 + h1 * y0) / (h0 * h1 * (h0 + h1)))
}

fn interval_derivative(x: [f64; 3], y: [Option<Interval>; 3]) -> Option<Interval> {
    let lo = first_derivative(x, y.map(|v| v.map(|i| i.lo)))?;
    let hi = first_derivative(x, y.map(|v| v.map(|i| i.hi)))?;
    Some(Interval { lo, hi })
}

fn group_keys(rows: &[SweepRow]) -> Vec<(f64, usize, StateKind)> {
    let mut keys: Vec<(f64, usize, StateKind)> = Vec::new();
    for r in rows {
        let k = (r.gamma, r.n, r.state);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys
}

/// Central differences along λ for every interior point of every series.
/// Interval columns differentiate the two bounds separately.
pub fn derivative_table(rows: &[SweepRow]) -> Vec<DerivativeRow> {
    let mut out = Vec::new();
    for (gamma, n, state) in group_keys(rows) {
        let s = series(rows, gamma, n, state);
        for w in s.windows(3) {
            let x = [w[0].lambda, w[1].lambda, w[2].lambda];
            out.push(DerivativeRow {
                gamma,
                n,
                state,
                lambda: x[1],
                d_c: interval_derivative(x, [w[0].concurrence, w[1].concurrence, w[2].concurrence]),
                d_n: interval_derivative(x, [w[0].negativity, w[1].negativity, w[2].negativity]),
                d_g1: first_derivative(x, [w[0].g1, w[1].g1, w[2].g1]),
                d_g2: interval_derivative(x, [w[0].g2, w[1].g2, w[2].g2]),
                d2_energy: second_derivative(x, [w[0].energy, w[1].energy, w[2].energy]),
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalEstimate {
    pub value: f64,
    /// Half-width of the uncertainty window.
    pub uncertainty: f64,
}

impl CriticalEstimate {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.uncertainty + 1e-12
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoints {
    pub gamma: f64,
    pub lambda1: Option<CriticalEstimate>,
    pub lambda2: Option<CriticalEstimate>,
    pub flags: Vec<String>,
}

/// Index of the largest value, if it is interior to the series and the
/// series is not flat.
fn interior_argmax(values: &[f64]) -> std::result::Result<usize, &'static str> {
    if values.len() < 3 {
        return Err("fewer than three grid points");
    }
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo < FLAT_TOL {
        return Err("flat series");
    }
    let (idx, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    if idx == 0 || idx == values.len() - 1 {
        return Err("maximum on the grid boundary");
    }
    Ok(idx)
}

fn grid_step(lambdas: &[f64]) -> f64 {
    lambdas.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Estimates λ₁ and λ₂ for each γ of a table with `n = 1` rows.
///
/// λ₁ comes from the argmax of `|∂_λ C(1)|` in the symmetric state and the
/// argmax of the broken-state `G(1)`. λ₂ is the interior minimum of the
/// broken-state `G(1)` where it drops below [`G1_ZERO_TOL`], refined by a
/// parabola through its neighbours.
pub fn detect_critical_points(rows: &[SweepRow]) -> Vec<CriticalPoints> {
    let mut gammas: Vec<f64> = Vec::new();
    for r in rows {
        if !gammas.contains(&r.gamma) {
            gammas.push(r.gamma);
        }
    }
    gammas.into_iter().map(|g| detect_one(rows, g)).collect()
}

fn detect_one(rows: &[SweepRow], gamma: f64) -> CriticalPoints {
    let mut flags = Vec::new();
    let mut candidates: Vec<(f64, f64)> = Vec::new();

    let sym = series(rows, gamma, 1, StateKind::Symmetric);
    let slopes: Vec<(f64, f64)> = sym
        .windows(3)
        .filter_map(|w| {
            let x = [w[0].lambda, w[1].lambda, w[2].lambda];
            let d = first_derivative(x, [w[0].concurrence, w[1].concurrence, w[2].concurrence].map(|c| c.map(|i| i.mid())))?;
            Some((x[1], d.abs()))
        })
        .collect();
    if slopes.is_empty() {
        flags.push("no symmetric n = 1 concurrence series".to_string());
    } else {
        let xs: Vec<f64> = slopes.iter().map(|p| p.0).collect();
        match interior_argmax(&slopes.iter().map(|p| p.1).collect::<Vec<_>>()) {
            Ok(i) => candidates.push((slopes[i].0, grid_step(&xs))),
            Err(why) => flags.push(format!("|dC(1)/dλ|: {why}")),
        }
    }

    let broken = series(rows, gamma, 1, StateKind::Broken);
    let g1: Vec<(f64, f64)> = broken.iter().filter_map(|r| Some((r.lambda, r.g1?))).collect();
    let mut lambda2 = None;
    if g1.is_empty() {
        flags.push("no broken n = 1 G(1) series".to_string());
    } else {
        let xs: Vec<f64> = g1.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = g1.iter().map(|p| p.1).collect();
        let step = grid_step(&xs);
        match interior_argmax(&ys) {
            Ok(i) => candidates.push((xs[i], step)),
            Err(why) => flags.push(format!("broken G(1) maximum: {why}")),
        }
        lambda2 = zero_of_g1(&xs, &ys, step);
    }

    let lambda1 = match candidates.as_slice() {
        [] => {
            flags.push("no first critical point detected".to_string());
            None
        }
        [(x, step)] => Some(CriticalEstimate { value: *x, uncertainty: *step }),
        [(a, sa), (b, sb)] => {
            let step = sa.max(*sb);
            if (a - b).abs() > step + 1e-12 {
                flags.push(format!("λ₁ estimators disagree: {a} vs {b}"));
            }
            Some(CriticalEstimate { value: 0.5 * (a + b), uncertainty: step.max(0.5 * (a - b).abs() + step) })
        }
        _ => unreachable!("at most two λ₁ estimators"),
    };

    let mut out = CriticalPoints { gamma, lambda1, lambda2, flags };
    let mut lambdas: Vec<f64> = sym.iter().chain(&broken).map(|r| r.lambda).collect();
    lambdas.sort_by(f64::total_cmp);
    lambdas.dedup();
    let step = grid_step(&lambdas);
    if step > MAX_RESOLVED_STEP && (out.lambda1.is_some() || out.lambda2.is_some()) {
        for est in [&mut out.lambda1, &mut out.lambda2].into_iter().flatten() {
            est.uncertainty *= 2.0;
        }
        out.flags.push(format!("grid step {step} too coarse; uncertainty widened"));
    }
    out
}

/// Writes one row per γ: estimates, uncertainties and `;`-joined flags.
pub fn write_critical_csv(path: &Path, points: &[CriticalPoints]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["gamma", "lambda1", "lambda1_err", "lambda2", "lambda2_err", "flags"])?;
    let est = |e: Option<CriticalEstimate>| match e {
        Some(e) => [fmt_f64(e.value), fmt_f64(e.uncertainty)],
        None => [String::new(), String::new()],
    };
    for p in points {
        let [l1, e1] = est(p.lambda1);
        let [l2, e2] = est(p.lambda2);
        w.write_record([fmt_f64(p.gamma), l1, e1, l2, e2, p.flags.join("; ")])?;
    }
    w.flush()?;
    Ok(())
}

fn zero_of_g1(xs: &[f64], ys: &[f64], step: f64) -> Option<CriticalEstimate> {
    let best = (1..ys.len().saturating_sub(1))
        .filter(|&i| ys[i] <= ys[i - 1] && ys[i] <= ys[i + 1] && ys[i] < G1_ZERO_TOL)
        .min_by(|&a, &b| ys[a].total_cmp(&ys[b]))?;
    let (x0, x1, x2) = (xs[best - 1], xs[best], xs[best + 1]);
    let (y0, y1, y2) = (ys[best - 1], ys[best], ys[best + 1]);
    let denom = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    let mut value = x1;
    if denom.abs() > 0.0 {
        let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
        let vertex = x1 - 0.5 * num / denom;
        if vertex.is_finite() {
            value = vertex.clamp(x0, x2);
        }
    }
    Some(CriticalEstimate { value, uncertainty: step })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{evaluate_table, SweepConfig};

    fn synthetic(lambdas: &[f64], g1: impl Fn(f64) -> f64, c: impl Fn(f64) -> f64) -> Vec<SweepRow> {
        let mut rows = Vec::new();
        for &l in lambdas {
            for state in [StateKind::Symmetric, StateKind::Broken] {
                let mut r = SweepRow::empty(0.5, l, 1, state);
                r.g1 = Some(g1(l));
                r.concurrence = Some(Interval::point(c(l)));
                rows.push(r);
            }
        }
        rows
    }

    fn grid(step: f64, max: f64) -> Vec<f64> {
        (0..=((max / step).round() as usize)).map(|k| k as f64 * step).collect()
    }

    #[test]
    fn flat_table_detects_nothing() {
        let rows = synthetic(&grid(0.01, 3.0), |_| 0.3, |_| 0.1);
        let cp = &detect_critical_points(&rows)[0];
        assert!(cp.lambda1.is_none());
        assert!(cp.lambda2.is_none());
        assert!(!cp.flags.is_empty());
    }

    #[test]
    fn synthetic_peaks_are_found() {
        let rows = synthetic(
            &grid(0.01, 3.0),
            |l| (-(l - 1.0f64).powi(2) * 20.0).exp() * (l - 2.0).powi(2),
            |l| (l - 1.0).abs().sqrt(),
        );
        let cp = &detect_critical_points(&rows)[0];
        assert!(cp.lambda1.unwrap().contains(1.0), "{cp:?}");
        assert!(cp.lambda2.unwrap().contains(2.0), "{cp:?}");
    }

    #[test]
    fn coarse_grid_widens_and_flags() {
        let rows = synthetic(&grid(0.1, 3.0), |l| 3.0 - (l - 1.0).abs(), |l| (l - 1.0).abs().sqrt());
        let cp = &detect_critical_points(&rows)[0];
        let l1 = cp.lambda1.unwrap();
        assert!(l1.uncertainty > 0.1);
        assert!(cp.flags.iter().any(|f| f.contains("coarse")));
    }

    #[test]
    fn second_derivative_of_quadratic_is_exact() {
        let d = second_derivative([0.0, 0.1, 0.3], [Some(0.0), Some(0.01), Some(0.09)]).unwrap();
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_table_covers_interior_points() {
        let cfg = SweepConfig::parse("gamma = 1\nlambda_min = 0.5\nlambda_max = 0.8\nlambda_step = 0.1\nstates = symmetric", None)
            .unwrap();
        let d = derivative_table(&evaluate_table(&cfg));
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|r| r.d_c.is_some() && r.d2_energy.is_some()));
    }
}
