//! Finite XY chains in the σᶻ product basis.
//!
//! Bit `i` of a basis index is site `i`; a cleared bit is `↑` (σᶻ = +1).

use nalgebra::{DMatrix, SymmetricEigen};

use super::lanczos::{lowest_eigenpair, start_vector, Eigenpair, LanczosOptions, LinearOperator};
use crate::error::{Error, Result};
use crate::params::ModelParams;

pub const MIN_SITES: usize = 4;
pub const MAX_SITES: usize = 14;
/// Largest chain solved by dense diagonalization.
pub const DENSE_MAX_SITES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Open,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "periodic" => Ok(Boundary::Periodic),
            "open" => Ok(Boundary::Open),
            other => Err(Error::Config(format!("unknown boundary `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub sites: usize,
    pub boundary: Boundary,
    pub params: ModelParams,
    /// Longitudinal pinning field `ε` entering as `−ε Σ σˣ`.
    pub pinning: f64,
}

impl ChainSpec {
    pub fn new(sites: usize, boundary: Boundary, params: ModelParams) -> Result<Self> {
        Self::with_pinning(sites, boundary, params, 0.0)
    }

    pub fn with_pinning(sites: usize, boundary: Boundary, params: ModelParams, pinning: f64) -> Result<Self> {
        if !(MIN_SITES..=MAX_SITES).contains(&sites) {
            return Err(Error::InvalidInput(format!("chain length {sites} outside {MIN_SITES}..={MAX_SITES}")));
        }
        if !(pinning >= 0.0) {
            return Err(Error::InvalidInput(format!("pinning field {pinning} must be non-negative")));
        }
        Ok(ChainSpec { sites, boundary, params, pinning })
    }

    pub fn dim(&self) -> usize {
        1 << self.sites
    }

    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.sites;
        let last = match self.boundary {
            Boundary::Periodic => n,
            Boundary::Open => n - 1,
        };
        (0..last).map(|i| (i, (i + 1) % n)).collect()
    }
}

/// Hamiltonian restricted to a set of basis states closed under its action.
pub struct SectorHamiltonian {
    spec: ChainSpec,
    bonds: Vec<(usize, usize)>,
    states: Vec<usize>,
    /// Position of a full-space index in `states`, or `usize::MAX`.
    position: Vec<usize>,
    diagonal: Vec<f64>,
}

impl SectorHamiltonian {
    /// Parity sector `Π σᶻ = (−1)^parity`. Requires zero pinning.
    pub fn parity(spec: &ChainSpec, parity: u32) -> Result<Self> {
        if spec.pinning != 0.0 {
            return Err(Error::InvalidInput("pinning field breaks parity".into()));
        }
        let states = (0..spec.dim()).filter(|s: &usize| s.count_ones() % 2 == parity).collect();
        Ok(Self::from_states(spec, states))
    }

    pub fn full(spec: &ChainSpec) -> Self {
        Self::from_states(spec, (0..spec.dim()).collect())
    }

    fn from_states(spec: &ChainSpec, states: Vec<usize>) -> Self {
        let mut position = vec![usize::MAX; spec.dim()];
        for (k, &s) in states.iter().enumerate() {
            position[s] = k;
        }
        let h = spec.params.h;
        let diagonal = states
            .iter()
            .map(|&s| {
                let down = s.count_ones() as f64;
                h * (spec.sites as f64 - 2.0 * down)
            })
            .collect();
        SectorHamiltonian { spec: *spec, bonds: spec.bonds(), states, position, diagonal }
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    /// Embeds a sector vector into the full `2^N` space.
    pub fn embed(&self, v: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.spec.dim()];
        for (k, &s) in self.states.iter().enumerate() {
            full[s] = v[k];
        }
        full
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        let mut e = vec![0.0; d];
        let mut col = vec![0.0; d];
        for j in 0..d {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            m.set_column(j, &nalgebra::DVector::from_column_slice(&col));
            e[j] = 0.0;
        }
        m
    }
}

impl LinearOperator for SectorHamiltonian {
    fn dim(&self) -> usize {
        self.states.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let p = &self.spec.params;
        let same = -p.j * p.gamma; // flip of two aligned spins
        let opposite = -p.j; // flip of two anti-aligned spins
        for (k, &s) in self.states.iter().enumerate() {
            let mut acc = self.diagonal[k] * x[k];
            for &(i, j) in &self.bonds {
                let t = s ^ ((1 << i) | (1 << j));
                let aligned = ((s >> i) & 1) == ((s >> j) & 1);
                let amp = if aligned { same } else { opposite };
                acc += amp * x[self.position[t]];
            }
            if self.spec.pinning != 0.0 {
                for i in 0..self.spec.sites {
                    acc -= self.spec.pinning * x[self.position[s ^ (1 << i)]];
                }
            }
            y[k] = acc;
        }
    }
}

/// Lowest eigenpair of `op`: dense for small chains, Lanczos otherwise.
pub(crate) fn lowest(spec: &ChainSpec, op: &SectorHamiltonian) -> Result<Eigenpair> {
    if spec.sites <= DENSE_MAX_SITES {
        let eig = SymmetricEigen::new(op.to_dense());
        let (k, &value) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty sector");
        let vector: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
        let mut work = vec![0.0; op.dim()];
        op.apply(&vector, &mut work);
        let residual = work.iter().zip(&vector).map(|(w, v)| (w - value * v).powi(2)).sum::<f64>().sqrt();
        Ok(Eigenpair { value, vector, residual, iterations: 0 })
    } else {
        lowest_eigenpair(op, &start_vector(op.dim()), LanczosOptions::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_hamiltonian_is_symmetric() {
        let spec = ChainSpec::with_pinning(6, Boundary::Periodic, ModelParams::new(0.7, 1.3).unwrap(), 0.1).unwrap();
        let m = SectorHamiltonian::full(&spec).to_dense();
        assert!((&m - m.transpose()).amax() < 1e-15);
    }

    #[test]
    fn sectors_partition_the_spectrum() {
        let spec = ChainSpec::new(6, Boundary::Open, ModelParams::new(0.5, 0.8).unwrap()).unwrap();
        let mut all: Vec<f64> = SymmetricEigen::new(SectorHamiltonian::full(&spec).to_dense()).eigenvalues.iter().copied().collect();
        let mut parts: Vec<f64> = (0..2)
            .flat_map(|p| {
                let h = SectorHamiltonian::parity(&spec, p).unwrap();
                SymmetricEigen::new(h.to_dense()).eigenvalues.iter().copied().collect::<Vec<_>>()
            })
            .collect();
        all.sort_by(f64::total_cmp);
        parts.sort_by(f64::total_cmp);
        for (a, b) in all.iter().zip(&parts) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn spec_validation() {
        let p = ModelParams::new(1.0, 1.0).unwrap();
        assert!(ChainSpec::new(3, Boundary::Periodic, p).is_err());
        assert!(ChainSpec::new(15, Boundary::Periodic, p).is_err());
        assert!(ChainSpec::with_pinning(8, Boundary::Periodic, p, -1e-3).is_err());
        assert_eq!(ChainSpec::new(8, Boundary::Open, p).unwrap().bonds().len(), 7);
    }

    #[test]
    fn lanczos_matches_dense_on_small_chain() {
        let spec = ChainSpec::new(8, Boundary::Periodic, ModelParams::new(0.6, 1.4).unwrap()).unwrap();
        let h = SectorHamiltonian::parity(&spec, 0).unwrap();
        let dense = lowest(&spec, &h).unwrap();
        let iterative = lowest_eigenpair(&h, &start_vector(h.dim()), LanczosOptions::default()).unwrap();
        assert!((dense.value - iterative.value).abs() < 1e-10);
    }
}
