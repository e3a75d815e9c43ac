//! Two-spin reduced density matrices and positivity bounds on `⟨σˣσᶻ⟩`.

use nalgebra::{Matrix4, SymmetricEigen};

use crate::correlators::CorrelatorSet;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::params::StateKind;

/// Eigenvalue tolerance for positivity.
pub const PSD_TOL: f64 = 1e-10;

/// Inward nudge applied to pxz interval endpoints.
pub const ENDPOINT_NUDGE: f64 = 1e-12;

const SCAN_STEP: f64 = 1e-3;
const BISECT_TOL: f64 = 1e-12;
/// A collapsed feasible set (pure two-spin state) may come out of the
/// correlators with λ_min slightly below zero; accept it down to this level.
const COLLAPSE_SLACK: f64 = 1e-8;

/// Two-spin state in the basis `(↑↑, ↑↓, ↓↑, ↓↓)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSpinDensityMatrix {
    pub entries: Matrix4<f64>,
    pub source: CorrelatorSet,
    pub q_xz: f64,
}

impl TwoSpinDensityMatrix {
    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.entries)
    }

    /// Global π rotation about z (`σˣ, σʸ → −σˣ, −σʸ` on both sites).
    pub fn flipped(&self) -> Self {
        let u = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, 1.0));
        TwoSpinDensityMatrix {
            entries: u * self.entries * u,
            source: self.source.flipped(),
            q_xz: -self.q_xz,
        }
    }

    /// Matrix element with 1-based indices, as `(ρ)_{ab}`.
    pub fn element(&self, a: usize, b: usize) -> f64 {
        self.entries[(a - 1, b - 1)]
    }
}

/// Density matrix with `⟨σˣσᶻ⟩ = q`; every other entry comes from `cs`.
pub fn assemble_rho(cs: &CorrelatorSet, q: f64) -> TwoSpinDensityMatrix {
    TwoSpinDensityMatrix { entries: rho_entries(cs, q), source: *cs, q_xz: q }
}

fn rho_entries(cs: &CorrelatorSet, q: f64) -> Matrix4<f64> {
    let (px, pz, xx, yy, zz) = (cs.px, cs.pz, cs.pxx, cs.pyy, cs.pzz);
    let a = px + q;
    let b = px - q;
    #[rustfmt::skip]
    let m = Matrix4::new(
        1.0 + 2.0 * pz + zz, a,         a,         xx - yy,
        a,                   1.0 - zz,  xx + yy,   b,
        a,                   xx + yy,   1.0 - zz,  b,
        xx - yy,             b,         b,         1.0 - 2.0 * pz + zz,
    );
    m * 0.25
}

pub fn min_eigenvalue(m: &Matrix4<f64>) -> f64 {
    SymmetricEigen::new(*m).eigenvalues.min()
}

#[derive(Debug, Clone, PartialEq)]
pub struct XzBoundResult {
    pub interval: Interval,
    /// `(q, λ_min(q))` on the coarse scan grid.
    pub min_eigenvalue_profile: Vec<(f64, f64)>,
    /// Further feasible intervals. Non-empty only for an anomalous,
    /// non-convex feasible set.
    pub extra_intervals: Vec<Interval>,
    /// The feasible set collapsed to a single point (pure reduced state).
    pub degenerate: bool,
}

impl XzBoundResult {
    pub fn is_anomalous(&self) -> bool {
        !self.extra_intervals.is_empty()
    }
}

/// The set of `q` for which `assemble_rho(cs, q)` is positive semidefinite.
///
/// A coarse scan brackets the feasible runs and bisection on `λ_min`
/// resolves each endpoint. Feasible sets narrower than the scan step are
/// found from the maximizer of `λ_min`, which is concave in `q`.
pub fn xz_bounds(cs: &CorrelatorSet) -> Result<XzBoundResult> {
    if cs.state_kind == StateKind::Symmetric {
        return Ok(XzBoundResult {
            interval: Interval::point(0.0),
            min_eigenvalue_profile: Vec::new(),
            extra_intervals: Vec::new(),
            degenerate: true,
        });
    }
    let lmin = |q: f64| min_eigenvalue(&rho_entries(cs, q));
    let steps = (2.0 / SCAN_STEP).round() as usize;
    let profile: Vec<(f64, f64)> = (0..=steps)
        .map(|k| {
            let q = -1.0 + k as f64 * SCAN_STEP;
            (q, lmin(q))
        })
        .collect();

    // feasible runs on the scan grid, as index ranges
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (k, &(_, v)) in profile.iter().enumerate() {
        if v >= 0.0 {
            match runs.last_mut() {
                Some(run) if run.1 + 1 == k => run.1 = k,
                _ => runs.push((k, k)),
            }
        }
    }

    let (q_star, best) = maximize_concave(&lmin, &profile);

    let mut intervals: Vec<Interval> = runs
        .iter()
        .map(|&(i, j)| {
            let lo = if i == 0 { -1.0 } else { bisect(&lmin, profile[i - 1].0, profile[i].0) };
            let hi = if j == steps { 1.0 } else { bisect(&lmin, profile[j + 1].0, profile[j].0) };
            Interval::new(lo, hi)
        })
        .collect();

    let mut degenerate = false;
    if intervals.is_empty() {
        if best >= 0.0 {
            let left = (q_star - SCAN_STEP).max(-1.0);
            let right = (q_star + SCAN_STEP).min(1.0);
            let lo = if lmin(left) >= 0.0 { left } else { bisect(&lmin, left, q_star) };
            let hi = if lmin(right) >= 0.0 { right } else { bisect(&lmin, right, q_star) };
            intervals.push(Interval::new(lo, hi));
        } else if best >= -COLLAPSE_SLACK {
            degenerate = true;
            intervals.push(Interval::point(q_star));
        } else {
            return Err(Error::InconsistentCorrelators { max_min_eigenvalue: best });
        }
    }

    // primary interval: the one holding the λ_min maximizer
    let primary = intervals
        .iter()
        .position(|iv| iv.contains_with(q_star, SCAN_STEP))
        .unwrap_or(0);
    let mut interval = intervals.remove(primary);
    if interval.width() > 4.0 * ENDPOINT_NUDGE {
        interval = Interval::new(interval.lo + ENDPOINT_NUDGE, interval.hi - ENDPOINT_NUDGE);
    } else {
        degenerate = true;
    }
    Ok(XzBoundResult { interval, min_eigenvalue_profile: profile, extra_intervals: intervals, degenerate })
}

/// Root of `f` between an infeasible `out` and a feasible `inside` point.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut out: f64, mut inside: f64) -> f64 {
    while (inside - out).abs() > BISECT_TOL {
        let mid = 0.5 * (out + inside);
        if f(mid) >= 0.0 {
            inside = mid;
        } else {
            out = mid;
        }
    }
    inside
}

/// Golden-section search around the best scan sample.
fn maximize_concave<F: Fn(f64) -> f64>(f: &F, profile: &[(f64, f64)]) -> (f64, f64) {
    let (k, _) = profile
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("non-empty scan");
    let mut a = profile[k.saturating_sub(1)].0;
    let mut b = profile[(k + 1).min(profile.len() - 1)].0;
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-14 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let q = 0.5 * (a + b);
    (q, f(q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoDiagnostics {
    pub trace: f64,
    pub symmetry_residual: f64,
    /// Ascending.
    pub eigenvalues: [f64; 4],
    pub is_psd: bool,
}

pub fn validate_rho(m: &Matrix4<f64>) -> RhoDiagnostics {
    let symmetry_residual = (m - m.transpose()).amax();
    let sym = 0.5 * (m + m.transpose());
    let mut eigenvalues: [f64; 4] = SymmetricEigen::new(sym).eigenvalues.into();
    eigenvalues.sort_by(f64::total_cmp);
    RhoDiagnostics {
        trace: m.trace(),
        symmetry_residual,
        eigenvalues,
        is_psd: eigenvalues[0] >= -PSD_TOL && symmetry_residual <= PSD_TOL,
    }
}
