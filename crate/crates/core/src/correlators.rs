//! Thermodynamic-limit one- and two-point correlators.
//!
//! Everything is built from the fermionic contraction
//! `G(r) = (1/π) ∫_0^π [(λ cos k − 1) cos kr + λγ sin k sin kr] / Λ_k dk`
//! with `Λ_k = sqrt((λ cos k − 1)² + (λγ sin k)²)` (field normalized to 1).
//! With this convention `⟨σᶻ⟩ = G(0)`,
//! `⟨σˣ_0 σˣ_n⟩ = det[G(i − j + 1)]`, `⟨σʸ_0 σʸ_n⟩ = det[G(i − j − 1)]` and
//! `⟨σᶻ_0 σᶻ_n⟩ = G(0)² − G(n) G(−n)`.

use std::f64::consts::PI;

use crate::accel::iterated_aitken;
use crate::density::xz_bounds;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::params::{ModelParams, StateKind};
use crate::quadrature::integrate_with_breaks;
use crate::toeplitz::toeplitz_det;

/// Absolute quadrature tolerance per contraction.
pub const QUAD_TOL: f64 = 1e-13;

/// Separations used for the spontaneous-magnetization extrapolation.
pub const MAGNETIZATION_LADDER: [usize; 4] = [8, 16, 32, 64];

/// Extrapolation error above which a magnetization is flagged.
pub const MAGNETIZATION_FLAG_TOL: f64 = 1e-7;

/// `G(r)` by adaptive quadrature.
pub fn fermion_correlator(r: isize, params: &ModelParams) -> Result<f64> {
    let lam = params.lambda;
    let g = params.gamma;
    let rf = r as f64;
    let integrand = move |k: f64| {
        let a = lam * k.cos() - 1.0;
        let b = lam * g * k.sin();
        let norm = a.hypot(b);
        if norm == 0.0 {
            // only reached at the critical point k = 0, λ = 1 where the
            // integrand tends to zero
            return 0.0;
        }
        (a * (k * rf).cos() + b * (k * rf).sin()) / norm
    };
    let mut breaks = vec![0.0];
    if lam > 1.0 {
        breaks.push((1.0 / lam).acos());
    }
    breaks.push(PI);
    let q = integrate_with_breaks(integrand, &breaks, QUAD_TOL * PI)?;
    Ok(q.value / PI)
}

/// Table of `G(r)` for `|r| ≤ r_max`, shared by every correlator at one
/// parameter point.
#[derive(Debug, Clone)]
pub struct FermionTable {
    params: ModelParams,
    r_max: usize,
    values: Vec<f64>,
}

impl FermionTable {
    pub fn new(params: &ModelParams, r_max: usize) -> Result<Self> {
        let values = (-(r_max as isize)..=r_max as isize)
            .map(|r| fermion_correlator(r, params))
            .collect::<Result<Vec<_>>>()?;
        Ok(FermionTable { params: *params, r_max, values })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Largest separation whose correlators the table can produce.
    pub fn max_separation(&self) -> usize {
        self.r_max.saturating_sub(1)
    }

    pub fn g(&self, r: isize) -> f64 {
        assert!(r.unsigned_abs() <= self.r_max, "G({r}) outside table of radius {}", self.r_max);
        self.values[(r + self.r_max as isize) as usize]
    }

    pub fn pz(&self) -> f64 {
        self.g(0)
    }

    pub fn pxx(&self, n: usize) -> f64 {
        self.check(n);
        clamp_unit(toeplitz_det(n, |d| self.g(d + 1)).value())
    }

    pub fn pyy(&self, n: usize) -> f64 {
        self.check(n);
        clamp_unit(toeplitz_det(n, |d| self.g(d - 1)).value())
    }

    pub fn pzz(&self, n: usize) -> f64 {
        self.check(n);
        let n = n as isize;
        clamp_unit(self.g(0).powi(2) - self.g(n) * self.g(-n))
    }

    fn check(&self, n: usize) {
        assert!(n >= 1 && n <= self.max_separation(), "separation {n} outside table");
    }

    /// Energy per site, `⟨H⟩/N`.
    pub fn energy_per_site(&self) -> f64 {
        let p = &self.params;
        let bond = (1.0 + p.gamma) * self.g(1) + (1.0 - p.gamma) * self.g(-1);
        p.h * (-0.5 * p.lambda * bond + self.g(0))
    }

    pub fn spontaneous_magnetization(&self) -> Magnetization {
        if self.params.lambda <= 1.0 {
            return Magnetization { value: 0.0, error: 0.0, flagged: false };
        }
        let seq: Vec<f64> = MAGNETIZATION_LADDER
            .iter()
            .filter(|&&n| n <= self.max_separation())
            .map(|&n| self.pxx(n).max(0.0).sqrt())
            .collect();
        let last = *seq.last().expect("table covers the magnetization ladder");
        let prev = seq[seq.len() - 2];
        if (last - prev).abs() < 1e-13 {
            return Magnetization { value: last, error: (last - prev).abs(), flagged: false };
        }
        let ext = iterated_aitken(&seq);
        let flagged = ext.error > MAGNETIZATION_FLAG_TOL || !ext.value.is_finite();
        if flagged {
            // the raw sequence is still drifting: report the extrapolated
            // value, widened to cover the last raw term
            let value = if ext.value.is_finite() { ext.value.clamp(0.0, 1.0) } else { last };
            let error = ext.error.max((value - last).abs());
            Magnetization { value, error, flagged }
        } else {
            Magnetization { value: ext.value.clamp(0.0, 1.0), error: ext.error, flagged }
        }
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Spontaneous magnetization `M` with its extrapolation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Magnetization {
    pub value: f64,
    pub error: f64,
    /// Set when the extrapolation has not converged (close to λ = 1).
    pub flagged: bool,
}

/// `⟨σᶻ⟩`.
pub fn transverse_magnetization(params: &ModelParams) -> Result<f64> {
    fermion_correlator(0, params)
}

fn table_for(n: usize, params: &ModelParams) -> Result<FermionTable> {
    if n == 0 {
        return Err(Error::InvalidInput("separation must be at least 1".into()));
    }
    FermionTable::new(params, n + 1)
}

pub fn xx_correlator(n: usize, params: &ModelParams) -> Result<f64> {
    Ok(table_for(n, params)?.pxx(n))
}

pub fn yy_correlator(n: usize, params: &ModelParams) -> Result<f64> {
    Ok(table_for(n, params)?.pyy(n))
}

pub fn zz_correlator(n: usize, params: &ModelParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("separation must be at least 1".into()));
    }
    let n = n as isize;
    let g0 = fermion_correlator(0, params)?;
    Ok(clamp_unit(g0 * g0 - fermion_correlator(n, params)? * fermion_correlator(-n, params)?))
}

pub fn spontaneous_magnetization(params: &ModelParams) -> Result<Magnetization> {
    if params.lambda <= 1.0 {
        return Ok(Magnetization { value: 0.0, error: 0.0, flagged: false });
    }
    let top = *MAGNETIZATION_LADDER.last().unwrap();
    Ok(FermionTable::new(params, top + 1)?.spontaneous_magnetization())
}

pub fn ground_state_energy_per_site(params: &ModelParams) -> Result<f64> {
    Ok(FermionTable::new(params, 1)?.energy_per_site())
}

/// One- and two-point correlators at separation `n` for one kind of state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSet {
    pub n: usize,
    pub px: f64,
    pub pz: f64,
    pub pxx: f64,
    pub pyy: f64,
    pub pzz: f64,
    /// Admissible values of `⟨σˣ_i σᶻ_j⟩`; `[0, 0]` in the symmetric state.
    pub pxz: Interval,
    pub pxy: f64,
    pub pyz: f64,
    pub state_kind: StateKind,
}

impl CorrelatorSet {
    /// Symmetric-state set from explicit parity-even correlators.
    pub fn symmetric(n: usize, pz: f64, pxx: f64, pyy: f64, pzz: f64) -> Self {
        CorrelatorSet {
            n,
            px: 0.0,
            pz,
            pxx,
            pyy,
            pzz,
            pxz: Interval::point(0.0),
            pxy: 0.0,
            pyz: 0.0,
            state_kind: StateKind::Symmetric,
        }
    }

    /// Broken-symmetry set with magnetization `px` and a pxz interval that is
    /// still to be determined (initialized to `[0, 0]`).
    pub fn broken_unbounded(n: usize, px: f64, pz: f64, pxx: f64, pyy: f64, pzz: f64) -> Self {
        CorrelatorSet { px, state_kind: StateKind::Broken, ..Self::symmetric(n, pz, pxx, pyy, pzz) }
    }

    /// The same state with `σˣ → −σˣ` on every site.
    pub fn flipped(&self) -> Self {
        CorrelatorSet {
            px: -self.px,
            pxz: Interval::new(-self.pxz.hi, -self.pxz.lo),
            ..*self
        }
    }

    /// Checks the range and symmetric-state constraints.
    pub fn validate(&self) -> Result<()> {
        let entries = [self.px, self.pz, self.pxx, self.pyy, self.pzz, self.pxz.lo, self.pxz.hi];
        if entries.iter().any(|v| !v.is_finite() || v.abs() > 1.0 + 1e-12) {
            return Err(Error::InvalidInput(format!("correlator outside [-1, 1]: {self:?}")));
        }
        if self.pxz.lo > self.pxz.hi {
            return Err(Error::InvalidInput("inverted pxz interval".into()));
        }
        if self.state_kind == StateKind::Symmetric && (self.px != 0.0 || self.pxz != Interval::point(0.0)) {
            return Err(Error::InvalidInput("symmetric set must have px = 0 and pxz = [0, 0]".into()));
        }
        Ok(())
    }
}

/// Correlator engine for one parameter point: caches the contraction table
/// and the spontaneous magnetization.
#[derive(Debug, Clone)]
pub struct ChainCorrelators {
    table: FermionTable,
    magnetization: Magnetization,
}

impl ChainCorrelators {
    /// Covers separations `1..=max_n` and the magnetization ladder.
    pub fn new(params: &ModelParams, max_n: usize) -> Result<Self> {
        let ladder = if params.lambda > 1.0 { *MAGNETIZATION_LADDER.last().unwrap() } else { 0 };
        let table = FermionTable::new(params, max_n.max(ladder).max(1) + 1)?;
        let magnetization = table.spontaneous_magnetization();
        Ok(ChainCorrelators { table, magnetization })
    }

    pub fn params(&self) -> &ModelParams {
        self.table.params()
    }

    pub fn table(&self) -> &FermionTable {
        &self.table
    }

    pub fn magnetization(&self) -> Magnetization {
        self.magnetization
    }

    pub fn energy_per_site(&self) -> f64 {
        self.table.energy_per_site()
    }

    pub fn symmetric_set(&self, n: usize) -> Result<CorrelatorSet> {
        if n == 0 || n > self.table.max_separation() {
            return Err(Error::InvalidInput(format!("separation {n} outside 1..={}", self.table.max_separation())));
        }
        let t = &self.table;
        Ok(CorrelatorSet::symmetric(n, t.pz(), t.pxx(n), t.pyy(n), t.pzz(n)))
    }

    /// Correlator set for the requested state; broken sets carry `px = +M`
    /// and the positivity interval for pxz. In the paramagnetic phase both
    /// kinds coincide and the symmetric set is returned.
    pub fn set(&self, n: usize, kind: StateKind) -> Result<CorrelatorSet> {
        let sym = self.symmetric_set(n)?;
        if kind == StateKind::Symmetric || !self.params().is_ferromagnetic() {
            return Ok(sym);
        }
        let mut broken =
            CorrelatorSet::broken_unbounded(n, self.magnetization.value, sym.pz, sym.pxx, sym.pyy, sym.pzz);
        broken.pxz = xz_bounds(&broken)?.interval;
        Ok(broken)
    }
}

pub fn correlator_set(n: usize, params: &ModelParams, kind: StateKind) -> Result<CorrelatorSet> {
    ChainCorrelators::new(params, n)?.set(n, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(gamma: f64, lambda: f64) -> ModelParams {
        ModelParams::new(gamma, lambda).unwrap()
    }

    #[test]
    fn field_polarized_limit() {
        let params = p(1.0, 0.0);
        assert!((transverse_magnetization(&params).unwrap() + 1.0).abs() < 1e-12);
        assert!(xx_correlator(1, &params).unwrap().abs() < 1e-12);
        assert!((ground_state_energy_per_site(&params).unwrap() + 1.0).abs() < 1e-12);
        let field = ModelParams::from_couplings(0.0, 2.5, 1.0).unwrap();
        assert!((ground_state_energy_per_site(&field).unwrap() + 2.5).abs() < 1e-12);
    }

    #[test]
    fn critical_ising_closed_values() {
        // G(r) = 2 / (π (2r - 1)) · sign at γ = λ = 1
        let params = p(1.0, 1.0);
        assert!((fermion_correlator(0, &params).unwrap() + 2.0 / PI).abs() < 1e-10);
        assert!((xx_correlator(1, &params).unwrap() - 2.0 / PI).abs() < 1e-10);
        assert!((yy_correlator(1, &params).unwrap() + 2.0 / (3.0 * PI)).abs() < 1e-10);
        assert!((ground_state_energy_per_site(&params).unwrap() + 4.0 / PI).abs() < 1e-10);
    }

    #[test]
    fn strong_coupling_ising_is_x_ordered() {
        let params = p(1.0, 1e6);
        assert!(transverse_magnetization(&params).unwrap().abs() < 1e-5);
        assert!((xx_correlator(3, &params).unwrap() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn ising_magnetization_closed_form() {
        for lambda in [1.5, 2.0, 3.0] {
            let m = spontaneous_magnetization(&p(1.0, lambda)).unwrap();
            let exact = (1.0 - lambda.powi(-2)).powf(0.125);
            assert!((m.value - exact).abs() < 1e-4, "λ={lambda}: {} vs {exact}", m.value);
            assert!(!m.flagged);
        }
    }

    #[test]
    fn anisotropic_magnetization_closed_form() {
        // M² = 2 sqrt(γ) (1 − λ⁻²)^{1/4} / (1 + γ)
        for (gamma, lambda) in [(0.4, 1.5), (0.8, 2.0), (0.6, 2.5)] {
            let m = spontaneous_magnetization(&p(gamma, lambda)).unwrap();
            let m2 = 2.0 * f64::sqrt(gamma) * (1.0 - lambda.powi(-2)).powf(0.25) / (1.0 + gamma);
            assert!((m.value - m2.sqrt()).abs() < 1e-4, "γ={gamma} λ={lambda}: {} vs {}", m.value, m2.sqrt());
        }
    }

    #[test]
    fn magnetization_vanishes_in_paramagnet() {
        assert_eq!(spontaneous_magnetization(&p(1.0, 0.5)).unwrap().value, 0.0);
        assert_eq!(spontaneous_magnetization(&p(0.3, 1.0)).unwrap().value, 0.0);
    }

    #[test]
    fn magnetization_near_critical_point_is_flagged() {
        let m = spontaneous_magnetization(&p(0.4, 1.05)).unwrap();
        assert!(m.value > 0.0 && m.value < 1.0);
        assert!(m.flagged);
        assert!(m.error > MAGNETIZATION_FLAG_TOL);
    }

    #[test]
    fn symmetric_set_has_five_entries() {
        let cs = correlator_set(3, &p(1.0, 1.0), StateKind::Symmetric).unwrap();
        assert_eq!(cs.px, 0.0);
        assert_eq!(cs.pxz, Interval::point(0.0));
        assert_eq!((cs.pxy, cs.pyz), (0.0, 0.0));
        for v in [cs.pz, cs.pxx, cs.pyy, cs.pzz] {
            assert!(v != 0.0);
        }
        cs.validate().unwrap();
    }

    #[test]
    fn broken_equals_symmetric_in_paramagnet() {
        let params = p(1.0, 0.5);
        let a = correlator_set(1, &params, StateKind::Broken).unwrap();
        let b = correlator_set(1, &params, StateKind::Symmetric).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn broken_set_in_ferromagnet() {
        let cs = correlator_set(1, &p(0.8, 2.0), StateKind::Broken).unwrap();
        assert!(cs.px > 0.0);
        assert!(cs.pxz.width() > 0.0);
        cs.validate().unwrap();
    }

    #[test]
    fn zero_separation_rejected() {
        assert!(xx_correlator(0, &p(1.0, 0.5)).is_err());
    }

    #[test]
    fn clustering_of_zz() {
        let t = FermionTable::new(&p(0.6, 0.7), 31).unwrap();
        let connected: Vec<f64> = [1, 5, 10, 30].iter().map(|&n| (t.pzz(n) - t.pz().powi(2)).abs()).collect();
        assert!(connected.windows(2).all(|w| w[1] < w[0]));
        assert!(connected[3] < 1e-8);
    }

    #[test]
    fn pxx_monotone_towards_m_squared() {
        // monotone below the factorizing point; γ = 1 has none
        for (gamma, lambda) in [(1.0, 1.5), (1.0, 2.0), (0.4, 1.05), (0.8, 1.5)] {
            let t = FermionTable::new(&p(gamma, lambda), 21).unwrap();
            let seq: Vec<f64> = (1..=20).map(|n| t.pxx(n)).collect();
            assert!(seq.windows(2).all(|w| w[0] >= w[1] && w[1] >= 0.0), "γ={gamma} λ={lambda}");
        }
    }

    #[test]
    fn pxx_oscillates_into_m_squared_beyond_factorizing_point() {
        for lambda in [1.5, 2.0] {
            let params = p(0.4, lambda);
            let t = FermionTable::new(&params, 41).unwrap();
            let m2 = t.spontaneous_magnetization().value.powi(2);
            let dev: Vec<f64> = (1..=40).map(|n| t.pxx(n) - m2).collect();
            assert!(dev.iter().any(|d| *d < 0.0) || dev.windows(2).any(|w| w[1] > w[0]));
            assert!(dev[39].abs() < 1e-10);
        }
    }
}
