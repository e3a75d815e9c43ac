//! Lanczos ground-state solver with full reorthogonalization and restarts.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Real symmetric operator applied matrix-free.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    /// `y = A x`; `y` is overwritten.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    pub tol: f64,
    pub krylov_dim: usize,
    pub max_restarts: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { tol: 1e-10, krylov_dim: 100, max_restarts: 40 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Deterministic start vector with generic overlaps.
pub fn start_vector(dim: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim)
        .map(|i| {
            let x = (i as f64 + 1.0) * 0.618_033_988_749_894_9;
            1.0 + 0.5 * (x - x.floor()) + 0.1 * (i as f64 * 1.3).sin()
        })
        .collect();
    normalize(&mut v);
    v
}

/// Lowest eigenpair of `op`, converged to `‖Ax − θx‖ ≤ tol`.
pub fn lowest_eigenpair<A: LinearOperator>(op: &A, start: &[f64], opts: LanczosOptions) -> Result<Eigenpair> {
    let dim = op.dim();
    let mut x = start.to_vec();
    if normalize(&mut x) == 0.0 {
        return Err(Error::InvalidInput("zero start vector".into()));
    }
    let mut work = vec![0.0; dim];
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut theta;
    for _ in 0..=opts.max_restarts {
        let m_max = opts.krylov_dim.min(dim);
        let mut basis: Vec<Vec<f64>> = vec![x.clone()];
        let mut alpha = Vec::with_capacity(m_max);
        let mut beta: Vec<f64> = Vec::with_capacity(m_max);
        for j in 0..m_max {
            op.apply(&basis[j], &mut work);
            iterations += 1;
            let a = dot(&work, &basis[j]);
            alpha.push(a);
            // full reorthogonalization, twice
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&work, v);
                    work.iter_mut().zip(v).for_each(|(w, vi)| *w -= c * vi);
                }
            }
            let b = norm(&work);
            if j + 1 == m_max || b < 1e-14 {
                break;
            }
            beta.push(b);
            basis.push(work.iter().map(|w| w / b).collect());
        }
        let m = alpha.len();
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let (k, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty tridiagonal");
        let coeffs = eig.eigenvectors.column(k);
        x.iter_mut().for_each(|v| *v = 0.0);
        for (c, v) in coeffs.iter().zip(&basis) {
            x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += c * vi);
        }
        normalize(&mut x);
        op.apply(&x, &mut work);
        iterations += 1;
        theta = dot(&x, &work);
        residual = work.iter().zip(&x).map(|(w, xi)| (w - theta * xi).powi(2)).sum::<f64>().sqrt();
        if residual <= opts.tol {
            return Ok(Eigenpair { value: theta, vector: x, residual, iterations });
        }
    }
    Err(Error::NoConvergence { residual, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Diag(Vec<f64>);

    impl LinearOperator for Diag {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            for i in 0..x.len() {
                y[i] = self.0[i] * x[i];
            }
        }
    }

    struct Path(usize);

    impl LinearOperator for Path {
        fn dim(&self) -> usize {
            self.0
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            for i in 0..self.0 {
                y[i] = 2.0 * x[i];
                if i > 0 {
                    y[i] -= x[i - 1];
                }
                if i + 1 < self.0 {
                    y[i] -= x[i + 1];
                }
            }
        }
    }

    #[test]
    fn diagonal_operator() {
        let d = Diag((0..500).map(|i| (i as f64 * 0.37).sin() + i as f64 * 0.01).collect());
        let e = lowest_eigenpair(&d, &start_vector(500), LanczosOptions::default()).unwrap();
        let min = d.0.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((e.value - min).abs() < 1e-10);
        assert!(e.residual <= 1e-10);
    }

    #[test]
    fn discrete_laplacian() {
        let n = 200;
        let e = lowest_eigenpair(&Path(n), &start_vector(n), LanczosOptions::default()).unwrap();
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((e.value - exact).abs() < 1e-9, "{} vs {exact}", e.value);
    }

    #[test]
    fn non_convergence_reported() {
        let opts = LanczosOptions { tol: 1e-14, krylov_dim: 3, max_restarts: 1 };
        let r = lowest_eigenpair(&Path(3000), &start_vector(3000), opts);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }
}
