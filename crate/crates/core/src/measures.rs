//! Concurrence, negativity and the global-entanglement measures G(1), G(2,n).

use std::fmt;

use nalgebra::{Matrix4, SymmetricEigen};

use crate::correlators::{ChainCorrelators, CorrelatorSet};
use crate::density::{assemble_rho, PSD_TOL};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::params::{ModelParams, StateKind};

/// Interior samples used to look for extrema of interval-valued measures.
pub const INTERIOR_SAMPLES: usize = 32;

/// `σʸ ⊗ σʸ`, which is real.
fn sigma_yy() -> Matrix4<f64> {
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, 1.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
    );
    m
}

/// Square roots of the eigenvalues of `R = ρρ̃`, descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RSpectrum {
    pub eps: [f64; 4],
}

impl RSpectrum {
    pub fn concurrence(&self) -> f64 {
        (self.eps[0] - self.eps[1] - self.eps[2] - self.eps[3]).max(0.0)
    }
}

/// Eigenvalues of the partial transpose, ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTSpectrum {
    pub u: [f64; 4],
}

impl PTSpectrum {
    pub fn negativity(&self) -> f64 {
        (-2.0 * self.u[0]).max(0.0)
    }
}

/// Eigen-decomposition of `√ρ ρ̃ √ρ`, which shares its spectrum with `R`.
/// Returns `(ε, eigenvectors)` with columns matching `ε` (descending).
///
/// With `ρ = V D² Vᵀ` and `K = D Vᵀ (σʸ⊗σʸ) V D`, `√ρ ρ̃ √ρ = V K² Vᵀ`, so
/// `ε = |eig K|` without a square root of the spectrum. Near-singular states
/// keep their small `ε` to working precision this way.
pub fn r_eigensystem(rho: &Matrix4<f64>) -> Result<([f64; 4], Matrix4<f64>)> {
    let sym = 0.5 * (rho + rho.transpose());
    let eig = SymmetricEigen::new(sym);
    let min = eig.eigenvalues.min();
    if min < -PSD_TOL {
        return Err(Error::NotPositive(min));
    }
    let d = Matrix4::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()));
    let v = eig.eigenvectors;
    let k = d * v.transpose() * sigma_yy() * v * d;
    let eig_k = SymmetricEigen::new(0.5 * (k + k.transpose()));
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| eig_k.eigenvalues[b].abs().total_cmp(&eig_k.eigenvalues[a].abs()));
    let w = v * eig_k.eigenvectors;
    let mut eps = [0.0; 4];
    let mut vecs = Matrix4::zeros();
    for (slot, &j) in order.iter().enumerate() {
        eps[slot] = eig_k.eigenvalues[j].abs();
        vecs.set_column(slot, &w.column(j));
    }
    Ok((eps, vecs))
}

/// Wootters concurrence from the spectrum of `ρρ̃`.
pub fn concurrence(rho: &Matrix4<f64>) -> Result<(f64, RSpectrum)> {
    let (eps, _) = r_eigensystem(rho)?;
    let s = RSpectrum { eps };
    Ok((s.concurrence(), s))
}

fn require_symmetric(cs: &CorrelatorSet) -> Result<()> {
    if cs.state_kind != StateKind::Symmetric || cs.px != 0.0 || cs.pxz != Interval::point(0.0) {
        return Err(Error::ClosedFormNeedsSymmetric);
    }
    Ok(())
}

pub fn c_prime(cs: &CorrelatorSet) -> f64 {
    0.5 * ((cs.pxx - cs.pyy).abs() + cs.pzz - 1.0)
}

pub fn c_double_prime(cs: &CorrelatorSet) -> f64 {
    0.5 * ((cs.pxx + cs.pyy).abs() - ((1.0 + cs.pzz).powi(2) - 4.0 * cs.pz * cs.pz).max(0.0).sqrt())
}

pub fn concurrence_closed_form(cs: &CorrelatorSet) -> Result<f64> {
    require_symmetric(cs)?;
    Ok(c_prime(cs).max(c_double_prime(cs)).max(0.0))
}

/// `u₁` and `u₃` are `−2×` the two partial-transpose eigenvalues that can
/// turn negative, so the negativity is `max{0, u₁, u₃}`.
pub fn u1(cs: &CorrelatorSet) -> f64 {
    -0.5 * (1.0 + cs.pzz - ((cs.pxx + cs.pyy).powi(2) + 4.0 * cs.pz * cs.pz).sqrt())
}

pub fn u3(cs: &CorrelatorSet) -> f64 {
    -0.5 * (1.0 - cs.pxx + cs.pyy - cs.pzz)
}

pub fn negativity_closed_form(cs: &CorrelatorSet) -> Result<f64> {
    require_symmetric(cs)?;
    Ok(u1(cs).max(u3(cs)).max(0.0))
}

pub fn partial_transpose(rho: &Matrix4<f64>) -> Matrix4<f64> {
    // transpose the second spin: (a b),(c d) -> (a d),(c b)
    Matrix4::from_fn(|r, c| {
        let (a, b) = (r / 2, r % 2);
        let (cc, d) = (c / 2, c % 2);
        rho[(2 * a + d, 2 * cc + b)]
    })
}

pub fn negativity(rho: &Matrix4<f64>) -> Result<(f64, PTSpectrum)> {
    let min = SymmetricEigen::new(0.5 * (rho + rho.transpose())).eigenvalues.min();
    if min < -PSD_TOL {
        return Err(Error::NotPositive(min));
    }
    let pt = partial_transpose(rho);
    let mut u: [f64; 4] = SymmetricEigen::new(0.5 * (pt + pt.transpose())).eigenvalues.into();
    u.sort_by(f64::total_cmp);
    let s = PTSpectrum { u };
    Ok((s.negativity(), s))
}

/// Left-hand side of the condition under which the symmetric-state
/// concurrence formula also holds for the broken-symmetry state.
pub fn symmetry_equivalence_lhs(cs: &CorrelatorSet) -> f64 {
    ((1.0 + cs.pzz).powi(2) - 4.0 * cs.pz * cs.pz).max(0.0).sqrt() + cs.pzz - 2.0 * cs.pyy - 1.0
}

/// Single-site linear entropy, `1 − ⟨σˣ⟩² − ⟨σᶻ⟩²`.
pub fn g1(cs: &CorrelatorSet) -> f64 {
    (1.0 - cs.px * cs.px - cs.pz * cs.pz).clamp(0.0, 1.0)
}

/// Two-site linear entropy for `⟨σˣσᶻ⟩ = q`.
pub fn g2n_at(cs: &CorrelatorSet, q: f64) -> f64 {
    let s = 2.0 * cs.px * cs.px + 2.0 * cs.pz * cs.pz + 2.0 * q * q + cs.pxx * cs.pxx + cs.pyy * cs.pyy + cs.pzz * cs.pzz;
    (1.0 - s / 3.0).clamp(0.0, 1.0)
}

pub fn g2n(cs: &CorrelatorSet) -> Interval {
    interval_measure(cs, |q| Ok(g2n_at(cs, q))).map(|(iv, _)| iv).expect("infallible measure")
}

/// `d/(d−1) (1 − Tr ρ²)` for a `d × d` state.
pub fn scaled_linear_entropy(rho: &nalgebra::DMatrix<f64>) -> f64 {
    let d = rho.nrows() as f64;
    let purity = (rho * rho).trace();
    d / (d - 1.0) * (1.0 - purity)
}

/// Single-site reduced state with Bloch vector `(px, 0, pz)`.
pub fn single_site_rho(cs: &CorrelatorSet) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_row_slice(2, 2, &[
        0.5 * (1.0 + cs.pz), 0.5 * cs.px,
        0.5 * cs.px, 0.5 * (1.0 - cs.pz),
    ])
}

/// Which closed-form branch carries the concurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `C′` and `u₁`.
    Prime,
    /// `C″` and `u₃`.
    DoublePrime,
}

impl Branch {
    pub fn of(cs: &CorrelatorSet) -> Branch {
        if c_prime(cs) >= c_double_prime(cs) {
            Branch::Prime
        } else {
            Branch::DoublePrime
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Prime => "prime",
            Branch::DoublePrime => "double_prime",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evaluates `measure` at both pxz endpoints and `INTERIOR_SAMPLES` interior
/// points. Returns the hull and whether the extremum was found inside.
fn interval_measure<F: Fn(f64) -> Result<f64>>(cs: &CorrelatorSet, measure: F) -> Result<(Interval, bool)> {
    let iv = cs.pxz;
    let at_lo = measure(iv.lo)?;
    if iv.is_degenerate() {
        return Ok((Interval::point(at_lo), false));
    }
    let at_hi = measure(iv.hi)?;
    let ends = Interval::hull([at_lo, at_hi]);
    let mut all = ends;
    for k in 1..=INTERIOR_SAMPLES {
        let q = iv.lo + iv.width() * k as f64 / (INTERIOR_SAMPLES + 1) as f64;
        let v = measure(q)?;
        all = Interval::hull([all.lo, all.hi, v]);
    }
    let interior = all.lo < ends.lo - 1e-12 || all.hi > ends.hi + 1e-12;
    Ok((all, interior))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub concurrence: Interval,
    pub negativity: Interval,
    pub g1: f64,
    pub g2n: Interval,
    /// At the lower and upper pxz endpoints.
    pub r_spectrum: [RSpectrum; 2],
    pub pt_spectrum: [PTSpectrum; 2],
    pub regime: Branch,
    /// Some measure reached its extremum strictly inside the pxz interval.
    pub interior_extremum: bool,
}

/// Concurrence over the pxz interval of `cs`.
pub fn concurrence_interval(cs: &CorrelatorSet) -> Result<Interval> {
    Ok(interval_measure(cs, |q| Ok(concurrence(&assemble_rho(cs, q).entries)?.0))?.0)
}

/// Negativity over the pxz interval of `cs`.
pub fn negativity_interval(cs: &CorrelatorSet) -> Result<Interval> {
    Ok(interval_measure(cs, |q| Ok(negativity(&assemble_rho(cs, q).entries)?.0))?.0)
}

/// All measures for one correlator set.
pub fn evaluate(cs: &CorrelatorSet) -> Result<EntanglementReport> {
    let rho_at = |q: f64| assemble_rho(cs, q).entries;
    let (c, c_inner) = interval_measure(cs, |q| Ok(concurrence(&rho_at(q))?.0))?;
    let (nv, n_inner) = interval_measure(cs, |q| Ok(negativity(&rho_at(q))?.0))?;
    let (g2, g_inner) = interval_measure(cs, |q| Ok(g2n_at(cs, q)))?;
    let lo = rho_at(cs.pxz.lo);
    let hi = rho_at(cs.pxz.hi);
    Ok(EntanglementReport {
        concurrence: c,
        negativity: nv,
        g1: g1(cs),
        g2n: g2,
        r_spectrum: [concurrence(&lo)?.1, concurrence(&hi)?.1],
        pt_spectrum: [negativity(&lo)?.1, negativity(&hi)?.1],
        regime: Branch::of(cs),
        interior_extremum: c_inner || n_inner || g_inner,
    })
}

/// Which end of the pxz interval a broken-state scan uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XzEndpoint {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RScanPoint {
    pub lambda: f64,
    /// Descending.
    pub eps: [f64; 4],
    /// `eps` re-ordered by tracked branch label.
    pub tracked: [f64; 4],
    /// Branch label of the largest eigenvalue; `None` when all vanish.
    pub top_branch: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RScan {
    pub points: Vec<RScanPoint>,
    /// λ values (first point after the change) where the largest eigenvalue
    /// moves to a different branch.
    pub crossings: Vec<f64>,
}

/// Eigenvalues below this are treated as vanishing when tracking branches.
const TRACK_FLOOR: f64 = 1e-6;
/// Relative separation needed before a branch's reference vector is renewed.
const TRACK_SPLIT: f64 = 1e-6;

/// Tracks the spectrum of `R` along a λ grid, following eigenvectors of
/// `√ρ ρ̃ √ρ` between neighbouring points to tell branch crossings from
/// re-orderings of sorted values.
pub fn r_spectrum_scan(
    gamma: f64,
    n: usize,
    kind: StateKind,
    endpoint: XzEndpoint,
    grid: &[f64],
) -> Result<RScan> {
    let mut refs: Option<Matrix4<f64>> = None;
    let mut points = Vec::with_capacity(grid.len());
    let mut crossings = Vec::new();
    let mut last_top: Option<usize> = None;
    for &lambda in grid {
        let params = ModelParams::new(gamma, lambda)?;
        let cs = ChainCorrelators::new(&params, n)?.set(n, kind)?;
        let q = match endpoint {
            XzEndpoint::Lower => cs.pxz.lo,
            XzEndpoint::Upper => cs.pxz.hi,
        };
        let (eps, vecs) = r_eigensystem(&assemble_rho(&cs, q).entries)?;
        if eps[0] < TRACK_FLOOR {
            points.push(RScanPoint { lambda, eps, tracked: eps, top_branch: None });
            continue;
        }
        let assign = match &refs {
            None => [0, 1, 2, 3],
            Some(r) => best_assignment(r, &vecs),
        };
        // assign[slot] = branch label
        let mut tracked = [0.0; 4];
        for slot in 0..4 {
            tracked[assign[slot]] = eps[slot];
        }
        let mut next = refs.unwrap_or(vecs);
        for slot in 0..4 {
            let separated = (0..4)
                .filter(|&o| o != slot)
                .all(|o| (eps[o] - eps[slot]).abs() > TRACK_SPLIT * eps[0]);
            if separated || refs.is_none() {
                let mut v = vecs.column(slot).into_owned();
                // fix the sign against the previous reference
                if v.dot(&next.column(assign[slot])) < 0.0 {
                    v = -v;
                }
                next.set_column(assign[slot], &v);
            }
        }
        refs = Some(next);
        let top = assign[0];
        if let Some(prev) = last_top {
            if prev != top {
                crossings.push(lambda);
            }
        }
        last_top = Some(top);
        points.push(RScanPoint { lambda, eps, tracked, top_branch: Some(top) });
    }
    Ok(RScan { points, crossings })
}

fn best_assignment(refs: &Matrix4<f64>, vecs: &Matrix4<f64>) -> [usize; 4] {
    let overlap = refs.transpose() * vecs; // (branch, slot)
    let mut best = ([0, 1, 2, 3], f64::NEG_INFINITY);
    permute(&mut [0, 1, 2, 3], 0, &mut |perm| {
        let score: f64 = (0..4).map(|slot| overlap[(perm[slot], slot)].abs()).sum();
        if score > best.1 {
            best = (*perm, score);
        }
    });
    best.0
}

fn permute(arr: &mut [usize; 4], k: usize, visit: &mut dyn FnMut(&[usize; 4])) {
    if k == arr.len() {
        visit(arr);
        return;
    }
    for i in k..arr.len() {
        arr.swap(k, i);
        permute(arr, k + 1, visit);
        arr.swap(k, i);
    }
}

/// Central-difference step in λ.
pub const DERIVATIVE_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    pub lambda: f64,
    /// `∂²ℰ` by central differences.
    pub d2_energy: f64,
    /// `−(1/λ) ∂ p^z`.
    pub from_pz: f64,
    /// `−(2/λ) ∂[(ρ)₁₁ + (ρ)₂₂]`.
    pub from_rho: f64,
    /// `C(1)` (numeric Wootters, symmetric state).
    pub c1: f64,
    /// `2[(ρ)₄₁ − (ρ)₂₂]`, the `C′` form.
    pub c1_from_rho: f64,
    /// Branch carrying `C(1)`; `c1_from_rho` only applies on [`Branch::Prime`].
    pub regime: Branch,
    pub energy_residual: f64,
    pub rho_residual: f64,
    pub c1_residual: f64,
}

fn symmetric_nn(gamma: f64, lambda: f64) -> Result<(ChainCorrelators, CorrelatorSet)> {
    let c = ChainCorrelators::new(&ModelParams::new(gamma, lambda)?, 1)?;
    let cs = c.symmetric_set(1)?;
    Ok((c, cs))
}

/// Checks the energy-curvature and nearest-neighbour concurrence identities
/// on the symmetric state at each λ.
///
/// The population identity uses the `↑↑` and `↑↓` diagonal entries of this
/// crate's basis, which is the combination that reduces to `−(1/λ)∂p^z` for
/// the `+h σᶻ` field convention.
pub fn energy_derivative_identities(gamma: f64, lambdas: &[f64]) -> Result<Vec<IdentityResiduals>> {
    lambdas
        .iter()
        .map(|&lambda| {
            let h = DERIVATIVE_STEP;
            let energy = |l: f64| -> Result<f64> { Ok(symmetric_nn(gamma, l)?.0.energy_per_site()) };
            let e0 = energy(lambda)?;
            let d2_energy = (energy(lambda + h)? - 2.0 * e0 + energy(lambda - h)?) / (h * h);
            let (_, plus) = symmetric_nn(gamma, lambda + h)?;
            let (_, minus) = symmetric_nn(gamma, lambda - h)?;
            let dpz = (plus.pz - minus.pz) / (2.0 * h);
            let pops = |cs: &CorrelatorSet| {
                let r = assemble_rho(cs, 0.0);
                r.element(1, 1) + r.element(2, 2)
            };
            let dpop = (pops(&plus) - pops(&minus)) / (2.0 * h);
            let from_pz = -dpz / lambda;
            let from_rho = -2.0 / lambda * dpop;
            let (_, cs) = symmetric_nn(gamma, lambda)?;
            let rho = assemble_rho(&cs, 0.0);
            let c1 = concurrence(&rho.entries)?.0;
            let c1_from_rho = 2.0 * (rho.element(4, 1) - rho.element(2, 2));
            Ok(IdentityResiduals {
                lambda,
                d2_energy,
                from_pz,
                from_rho,
                c1,
                c1_from_rho,
                regime: Branch::of(&cs),
                energy_residual: (d2_energy - from_pz).abs(),
                rho_residual: (d2_energy - from_rho).abs(),
                c1_residual: (c1 - c1_from_rho).abs(),
            })
        })
        .collect()
}

/// `∂_λ C(1)` of the symmetric state by a central difference of width `2·step`.
pub fn concurrence_slope(gamma: f64, lambda: f64, step: f64) -> Result<f64> {
    let c = |l: f64| -> Result<f64> { concurrence_closed_form(&symmetric_nn(gamma, l)?.1) };
    Ok((c(lambda + step)? - c(lambda - step)?) / (2.0 * step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::correlator_set;

    fn bell_phi_plus() -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for (a, b) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(a, b)] = 0.5;
        }
        m
    }

    fn product_up_down() -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m[(1, 1)] = 1.0;
        m
    }

    #[test]
    fn product_and_bell_extremes() {
        assert_eq!(concurrence(&product_up_down()).unwrap().0, 0.0);
        assert_eq!(negativity(&product_up_down()).unwrap().0, 0.0);
        assert!((concurrence(&bell_phi_plus()).unwrap().0 - 1.0).abs() < 1e-12);
        assert!((negativity(&bell_phi_plus()).unwrap().0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn werner_half() {
        // brute-force oracle: R for p Bell + (1-p) I/4 has eps = ((1+3p)/4, (1-p)/4 ×3)
        let p = 0.5;
        let rho = bell_phi_plus() * p + Matrix4::identity() * ((1.0 - p) / 4.0);
        let (c, s) = concurrence(&rho).unwrap();
        assert!((c - 0.25).abs() < 1e-12);
        assert!((s.eps[0] - 0.625).abs() < 1e-12);
        for e in &s.eps[1..] {
            assert!((e - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_positive() {
        let mut m = Matrix4::identity() * 0.25;
        m[(0, 0)] = -0.01;
        m[(1, 1)] = 0.51;
        assert!(matches!(concurrence(&m), Err(Error::NotPositive(_))));
        assert!(matches!(negativity(&m), Err(Error::NotPositive(_))));
    }

    #[test]
    fn partial_transpose_is_trace_preserving() {
        let cs = correlator_set(1, &ModelParams::new(0.8, 0.9).unwrap(), StateKind::Symmetric).unwrap();
        let rho = assemble_rho(&cs, 0.0).entries;
        let (nv, s) = negativity(&rho).unwrap();
        assert!((s.u.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!((nv - negativity_closed_form(&cs).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn closed_forms_reject_broken_sets() {
        let cs = correlator_set(1, &ModelParams::new(0.8, 2.0).unwrap(), StateKind::Broken).unwrap();
        assert!(matches!(concurrence_closed_form(&cs), Err(Error::ClosedFormNeedsSymmetric)));
        assert!(matches!(negativity_closed_form(&cs), Err(Error::ClosedFormNeedsSymmetric)));
    }

    #[test]
    fn ising_closed_form_at_critical_point() {
        let cs = correlator_set(1, &ModelParams::new(1.0, 1.0).unwrap(), StateKind::Symmetric).unwrap();
        let numeric = concurrence(&assemble_rho(&cs, 0.0).entries).unwrap().0;
        assert!((numeric - concurrence_closed_form(&cs).unwrap()).abs() < 1e-10);
        assert!(numeric > 0.1);
    }

    #[test]
    fn trivial_g1() {
        let cs = correlator_set(1, &ModelParams::new(1.0, 0.0).unwrap(), StateKind::Symmetric).unwrap();
        assert!(g1(&cs) < 1e-12);
        assert!(concurrence_closed_form(&cs).unwrap() < 1e-12);
    }

    #[test]
    fn purity_definitions_agree() {
        for (gamma, lambda, n) in [(1.0, 0.7, 1), (0.4, 1.8, 2), (0.8, 2.5, 3)] {
            let cs = correlator_set(n, &ModelParams::new(gamma, lambda).unwrap(), StateKind::Symmetric).unwrap();
            let rho = assemble_rho(&cs, 0.0).entries;
            let rho2 = nalgebra::DMatrix::from_iterator(4, 4, rho.iter().copied());
            assert!((scaled_linear_entropy(&rho2) - g2n_at(&cs, 0.0)).abs() < 1e-10);
            assert!((scaled_linear_entropy(&single_site_rho(&cs)) - g1(&cs)).abs() < 1e-10);
        }
    }

    #[test]
    fn flip_invariance_of_broken_measures() {
        let cs = correlator_set(1, &ModelParams::new(0.6, 2.2).unwrap(), StateKind::Broken).unwrap();
        let a = evaluate(&cs).unwrap();
        let b = evaluate(&cs.flipped()).unwrap();
        assert!((a.concurrence.lo - b.concurrence.lo).abs() < 1e-12);
        assert!((a.concurrence.hi - b.concurrence.hi).abs() < 1e-12);
        assert!((a.negativity.lo - b.negativity.lo).abs() < 1e-12);
        assert!((a.g1 - b.g1).abs() < 1e-12);
        assert!((a.g2n.lo - b.g2n.lo).abs() < 1e-12 && (a.g2n.hi - b.g2n.hi).abs() < 1e-12);
    }

    #[test]
    fn symmetry_condition_signs() {
        let lhs = |g: f64, l: f64| {
            symmetry_equivalence_lhs(&correlator_set(1, &ModelParams::new(g, l).unwrap(), StateKind::Symmetric).unwrap())
        };
        for l in [0.5, 1.0, 2.0, 3.0] {
            assert!(lhs(1.0, l) > 0.0, "γ=1 λ={l}");
        }
        assert!(lhs(0.4, 1.5) < 0.0);
        assert!(lhs(0.4, 1.05) > 0.0);
    }

    #[test]
    fn g2n_interval_contains_pointwise_values() {
        let cs = correlator_set(1, &ModelParams::new(0.8, 2.0).unwrap(), StateKind::Broken).unwrap();
        let iv = g2n(&cs);
        assert!(iv.contains(g2n_at(&cs, cs.pxz.mid())));
    }

    #[test]
    fn energy_identities_ising_paramagnet() {
        let r = energy_derivative_identities(1.0, &[0.5]).unwrap()[0];
        assert!(r.energy_residual < 1e-4, "{r:?}");
        assert!(r.rho_residual < 1e-4, "{r:?}");
        assert_eq!(r.regime, Branch::Prime);
        assert!(r.c1_residual < 1e-10, "{r:?}");
    }

    #[test]
    fn energy_identity_beyond_second_critical_point() {
        let r = energy_derivative_identities(0.8, &[2.0]).unwrap()[0];
        assert!(r.energy_residual < 1e-4, "{r:?}");
        assert!(r.rho_residual < 1e-4, "{r:?}");
        assert_eq!(r.regime, Branch::DoublePrime);
    }
}
