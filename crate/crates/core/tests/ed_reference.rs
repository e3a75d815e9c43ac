//! Exact diagonalization of finite chains against the thermodynamic values.

use xychain::ed::{self, Boundary, ChainSpec};
use xychain::measures::concurrence_interval;
use xychain::{concurrence, correlator_set, ground_state_energy_per_site, spontaneous_magnetization, ModelParams, StateKind};

fn params(gamma: f64, lambda: f64) -> ModelParams {
    ModelParams::new(gamma, lambda).unwrap()
}

#[test]
fn energy_per_site_converges_on_fourteen_sites() {
    for (gamma, lambda) in [(1.0, 0.5), (1.0, 2.0), (0.4, 1.5), (0.6, 0.8)] {
        let p = params(gamma, lambda);
        let spec = ChainSpec::new(14, Boundary::Periodic, p).unwrap();
        let e = ed::ground_doublet(&spec).unwrap().energy_per_site();
        let thermo = ground_state_energy_per_site(&p).unwrap();
        assert!((e - thermo).abs() < 0.02, "({gamma}, {lambda}): {e} vs {thermo}");
    }
}

#[test]
fn broken_state_xz_correlator_lies_in_the_positivity_interval() {
    for (gamma, lambda) in [(1.0, 1.5), (0.8, 2.0), (0.4, 1.5)] {
        let p = params(gamma, lambda);
        let spec = ChainSpec::new(12, Boundary::Periodic, p).unwrap();
        let broken = ed::broken_state(&ed::ground_doublet(&spec).unwrap());
        for n in [1, 2] {
            let measured = ed::measured_correlators(&broken, 0, n).unwrap();
            let bounds = correlator_set(n, &p, StateKind::Broken).unwrap().pxz;
            assert!(bounds.contains_with(measured.pxz.lo, 0.05), "({gamma}, {lambda}, {n}): {} vs {bounds:?}", measured.pxz.lo);
        }
    }
}

#[test]
fn factorizing_point_gives_a_product_broken_state() {
    let gamma = 0.8;
    let p = params(gamma, xychain::lambda2(gamma));
    let spec = ChainSpec::new(10, Boundary::Periodic, p).unwrap();
    let broken = ed::broken_state(&ed::ground_doublet(&spec).unwrap());
    for n in 1..=3 {
        let rho = ed::reduced_density(&broken, 0, n).unwrap();
        let c = concurrence(&rho.entries).unwrap().0;
        assert!(c < 1e-6, "C({n}) = {c}");
    }
    let thermo = concurrence_interval(&correlator_set(1, &p, StateKind::Broken).unwrap()).unwrap();
    assert!(thermo.hi < 1e-6);
}

#[test]
fn pinning_field_reproduces_the_doublet_magnetization() {
    let p = params(0.6, 2.0);
    let spec = ChainSpec::new(12, Boundary::Periodic, p).unwrap();
    let broken = ed::broken_state(&ed::ground_doublet(&spec).unwrap());
    let doublet = ed::measured_correlators(&broken, 0, 1).unwrap().px;
    let pinned = ed::pinning_magnetization(&spec, &[1e-5, 1e-4]).unwrap();
    assert!((pinned.extrapolated - doublet).abs() < 1e-3, "{} vs {doublet}", pinned.extrapolated);
    let m = spontaneous_magnetization(&p).unwrap().value;
    assert!((doublet - m).abs() < 0.05, "{doublet} vs M = {m}");
}

#[test]
fn pinning_fails_when_the_field_is_below_the_doublet_splitting() {
    // at (γ, λ) = (1, 1.5) the 12-site splitting is about 3e-3, far above εN
    let spec = ChainSpec::new(12, Boundary::Periodic, params(1.0, 1.5)).unwrap();
    let doublet = ed::ground_doublet(&spec).unwrap();
    assert!(doublet.gap() > 1e-3);
    let pinned = ed::pinning_magnetization(&spec, &[1e-5, 1e-4]).unwrap();
    let px = ed::measured_correlators(&ed::broken_state(&doublet), 0, 1).unwrap().px;
    assert!(pinned.extrapolated < 0.1 && px > 0.9, "{} vs {px}", pinned.extrapolated);
}
