//! Exact diagonalization of finite chains: an independent reference for the
//! thermodynamic correlators and density matrices.

pub mod chain;
pub mod lanczos;

use nalgebra::{Complex, Matrix4};

pub use chain::{Boundary, ChainSpec, SectorHamiltonian};
pub use lanczos::{Eigenpair, LanczosOptions, LinearOperator};

use crate::correlators::CorrelatorSet;
use crate::density::TwoSpinDensityMatrix;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::params::StateKind;

/// Lowest eigenpair in one parity sector, embedded in the full space.
#[derive(Debug, Clone)]
pub struct SectorState {
    pub energy: f64,
    /// `Π σᶻ = (−1)^parity`.
    pub parity: u32,
    pub vector: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct EdState {
    pub spec: ChainSpec,
    /// Lowest state of each parity sector, by ascending energy.
    pub doublet: [SectorState; 2],
    /// Selected state: the ground state, or the broken combination.
    pub vector: Vec<f64>,
    pub kind: StateKind,
    pub notice: Option<String>,
}

impl EdState {
    pub fn gap(&self) -> f64 {
        self.doublet[1].energy - self.doublet[0].energy
    }

    pub fn ground_energy(&self) -> f64 {
        self.doublet[0].energy
    }

    pub fn energy_per_site(&self) -> f64 {
        self.ground_energy() / self.spec.sites as f64
    }
}

/// The two lowest eigenpairs, one from each parity sector. The selected
/// state is the (symmetric) ground state.
pub fn ground_doublet(spec: &ChainSpec) -> Result<EdState> {
    if spec.pinning != 0.0 {
        return Err(Error::InvalidInput("ground doublet is defined without pinning".into()));
    }
    let solve = |parity: u32| -> Result<SectorState> {
        let h = SectorHamiltonian::parity(spec, parity)?;
        let pair = chain::lowest(spec, &h)?;
        Ok(SectorState { energy: pair.value, parity, vector: h.embed(&pair.vector), residual: pair.residual })
    };
    let mut doublet = [solve(0)?, solve(1)?];
    doublet.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let vector = doublet[0].vector.clone();
    Ok(EdState { spec: *spec, doublet, vector, kind: StateKind::Symmetric, notice: None })
}

/// The doublet combination with the largest positive `⟨σˣ⟩`.
///
/// Total σˣ is parity-odd, so on the doublet span it is off-diagonal and the
/// maximizing combination is `(ψ₀ ± ψ₁)/√2`. In the paramagnetic phase the
/// symmetric ground state is returned with a notice.
pub fn broken_state(state: &EdState) -> EdState {
    if !state.spec.params.is_ferromagnetic() {
        return EdState {
            notice: Some("paramagnetic phase: broken and symmetric states coincide".into()),
            vector: state.doublet[0].vector.clone(),
            kind: StateKind::Symmetric,
            ..state.clone()
        };
    }
    let (a, b) = (&state.doublet[0].vector, &state.doublet[1].vector);
    let coupling = apply_total_sx(&state.spec, b);
    let m: f64 = a.iter().zip(&coupling).map(|(x, y)| x * y).sum();
    let sign = if m >= 0.0 { 1.0 } else { -1.0 };
    let vector = a.iter().zip(b).map(|(x, y)| (x + sign * y) / 2f64.sqrt()).collect();
    EdState { vector, kind: StateKind::Broken, notice: None, ..state.clone() }
}

fn apply_total_sx(spec: &ChainSpec, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (s, &amp) in v.iter().enumerate() {
        for i in 0..spec.sites {
            out[s ^ (1 << i)] += amp;
        }
    }
    out
}

/// Ground state under the pinning field of `spec`.
pub fn pinned_ground_state(spec: &ChainSpec) -> Result<Vec<f64>> {
    let h = SectorHamiltonian::full(spec);
    let pair = chain::lowest(spec, &h)?;
    let mut v = pair.vector;
    // fix the global sign so that ⟨σˣ⟩ comparisons are unambiguous
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PinningEstimate {
    /// `(ε, ⟨σˣ⟩)` per field.
    pub samples: Vec<(f64, f64)>,
    /// Linear extrapolation to `ε = 0` through the two smallest fields.
    pub extrapolated: f64,
}

/// Site-averaged `⟨σˣ⟩` for each pinning field, extrapolated to zero field.
pub fn pinning_magnetization(spec: &ChainSpec, fields: &[f64]) -> Result<PinningEstimate> {
    if fields.len() < 2 {
        return Err(Error::InvalidInput("pinning extrapolation needs two fields".into()));
    }
    let mut samples = fields
        .iter()
        .map(|&eps| {
            let pinned = ChainSpec::with_pinning(spec.sites, spec.boundary, spec.params, eps)?;
            let v = pinned_ground_state(&pinned)?;
            let mx = (0..spec.sites).map(|i| expectation(&v, &[(Pauli::X, i)])).sum::<f64>() / spec.sites as f64;
            Ok((eps, mx))
        })
        .collect::<Result<Vec<_>>>()?;
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (e1, m1) = samples[0];
    let (e2, m2) = samples[1];
    let extrapolated = m1 - e1 * (m2 - m1) / (e2 - e1);
    Ok(PinningEstimate { samples, extrapolated })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl std::str::FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "i" | "I" | "0" => Ok(Pauli::I),
            "x" | "X" => Ok(Pauli::X),
            "y" | "Y" => Ok(Pauli::Y),
            "z" | "Z" => Ok(Pauli::Z),
            other => Err(Error::InvalidInput(format!("unknown Pauli `{other}`"))),
        }
    }
}

/// `⟨ψ| Π σ^{α}_{i} |ψ⟩` for a real state and a Pauli string on distinct
/// sites. The imaginary part is returned separately by
/// [`expectation_complex`]; for a Hermitian string it vanishes.
pub fn expectation(v: &[f64], ops: &[(Pauli, usize)]) -> f64 {
    expectation_complex(v, ops).re
}

pub fn expectation_complex(v: &[f64], ops: &[(Pauli, usize)]) -> Complex<f64> {
    let mut acc = Complex::new(0.0, 0.0);
    for (s, &amp) in v.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let mut t = s;
        let mut phase = Complex::new(1.0, 0.0);
        for &(p, site) in ops {
            let down = (t >> site) & 1 == 1;
            match p {
                Pauli::I => {}
                Pauli::X => t ^= 1 << site,
                Pauli::Y => {
                    // σʸ|↑⟩ = i|↓⟩, σʸ|↓⟩ = −i|↑⟩
                    phase *= if down { Complex::new(0.0, -1.0) } else { Complex::new(0.0, 1.0) };
                    t ^= 1 << site;
                }
                Pauli::Z => {
                    if down {
                        phase = -phase;
                    }
                }
            }
        }
        acc += phase * (v[t] * amp);
    }
    acc
}

/// `⟨σ^α_i σ^β_j⟩` in the selected state.
pub fn correlator_measure(state: &EdState, alpha: Pauli, beta: Pauli, i: usize, j: usize) -> Result<f64> {
    check_sites(state, i, j)?;
    Ok(expectation(&state.vector, &[(alpha, i), (beta, j)]))
}

fn check_sites(state: &EdState, i: usize, j: usize) -> Result<()> {
    if !(i < j && j < state.spec.sites) {
        return Err(Error::InvalidInput(format!("need 0 ≤ i < j < {}, got ({i}, {j})", state.spec.sites)));
    }
    Ok(())
}

/// Correlators of the selected state for sites `i < j`, with the measured
/// `⟨σˣ_i σᶻ_j⟩` as a point interval.
pub fn measured_correlators(state: &EdState, i: usize, j: usize) -> Result<CorrelatorSet> {
    check_sites(state, i, j)?;
    let v = &state.vector;
    let one = |p: Pauli, k: usize| expectation(v, &[(p, k)]);
    let two = |a: Pauli, b: Pauli| expectation(v, &[(a, i), (b, j)]);
    Ok(CorrelatorSet {
        n: j - i,
        px: 0.5 * (one(Pauli::X, i) + one(Pauli::X, j)),
        pz: 0.5 * (one(Pauli::Z, i) + one(Pauli::Z, j)),
        pxx: two(Pauli::X, Pauli::X),
        pyy: two(Pauli::Y, Pauli::Y),
        pzz: two(Pauli::Z, Pauli::Z),
        pxz: Interval::point(two(Pauli::X, Pauli::Z)),
        pxy: two(Pauli::X, Pauli::Y),
        pyz: two(Pauli::Y, Pauli::Z),
        state_kind: state.kind,
    })
}

/// Partial trace onto sites `i < j`, in the basis `(↑↑, ↑↓, ↓↑, ↓↓)`.
pub fn reduced_density(state: &EdState, i: usize, j: usize) -> Result<TwoSpinDensityMatrix> {
    check_sites(state, i, j)?;
    let v = &state.vector;
    let mask = !((1usize << i) | (1usize << j));
    let mut rho = Matrix4::zeros();
    for (s, &amp) in v.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let row = (((s >> i) & 1) << 1) | ((s >> j) & 1);
        let rest = s & mask;
        for col in 0..4 {
            let t = rest | (((col >> 1) & 1) << i) | ((col & 1) << j);
            rho[(row, col)] += amp * v[t];
        }
    }
    let source = measured_correlators(state, i, j)?;
    Ok(TwoSpinDensityMatrix { entries: rho, source, q_xz: source.pxz.lo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{assemble_rho, validate_rho};
    use crate::params::ModelParams;

    fn spec(n: usize, gamma: f64, lambda: f64) -> ChainSpec {
        ChainSpec::new(n, Boundary::Periodic, ModelParams::new(gamma, lambda).unwrap()).unwrap()
    }

    #[test]
    fn field_polarized_product_state() {
        let st = ground_doublet(&spec(4, 1.0, 0.0)).unwrap();
        // all spins down (aligned with +h σᶻ penalty) is basis index 0b1111
        assert!((st.vector[0b1111].abs() - 1.0).abs() < 1e-12);
        assert!((st.gap() - 2.0).abs() < 1e-12);
        assert!((st.energy_per_site() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_density_matches_correlator_expansion() {
        let st = broken_state(&ground_doublet(&spec(8, 0.6, 1.7)).unwrap());
        let rho = reduced_density(&st, 2, 4).unwrap();
        let d = validate_rho(&rho.entries);
        assert!(d.is_psd && (d.trace - 1.0).abs() < 1e-12 && d.symmetry_residual < 1e-12);
        let rebuilt = assemble_rho(&rho.source, rho.q_xz).entries;
        assert!((rebuilt - rho.entries).amax() < 1e-12);
    }

    #[test]
    fn symmetric_state_has_vanishing_odd_correlators() {
        let st = ground_doublet(&spec(8, 0.5, 0.6)).unwrap();
        let rho = reduced_density(&st, 0, 1).unwrap();
        for (r, c) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            assert!(rho.entries[(r, c)].abs() < 1e-10);
        }
    }

    #[test]
    fn imaginary_strings_vanish_on_real_states() {
        let st = broken_state(&ground_doublet(&spec(8, 0.4, 2.0)).unwrap());
        let c = expectation_complex(&st.vector, &[(Pauli::X, 0), (Pauli::Y, 1)]);
        assert!(c.re.abs() < 1e-12);
        let single_y = expectation_complex(&st.vector, &[(Pauli::Y, 3)]);
        assert!(single_y.norm() < 1e-12);
    }

    #[test]
    fn index_errors() {
        let st = ground_doublet(&spec(6, 1.0, 0.5)).unwrap();
        assert!(reduced_density(&st, 2, 2).is_err());
        assert!(correlator_measure(&st, Pauli::X, Pauli::X, 1, 6).is_err());
    }

    #[test]
    fn paramagnetic_broken_request_returns_symmetric() {
        let st = broken_state(&ground_doublet(&spec(8, 1.0, 0.5)).unwrap());
        assert_eq!(st.kind, StateKind::Symmetric);
        assert!(st.notice.is_some());
        assert!(expectation(&st.vector, &[(Pauli::X, 0)]).abs() < 1e-12);
    }
}
