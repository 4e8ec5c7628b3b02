mod common;

use std::f64::consts::PI;

use common::{composite_simpson, fd_dirichlet_eigenvalue, rng, uniform_vec};
use spde_perturb::spectral::{from_grid, to_grid, DirichletDomain, GridVec, SineTransform, SpectralVec};
use spde_perturb::{DirichletDomain64, Error};

#[test]
fn eigenvalue_closed_forms() {
    let unit = DirichletDomain64::unit(4).unwrap();
    assert_eq!(unit.eigenvalue(1).unwrap(), PI * PI);
    let two = DirichletDomain64::new(2.0, 4).unwrap();
    assert!((two.eigenvalue(2).unwrap() - PI * PI).abs() < 1e-14);

    let stretched = DirichletDomain64::new(1.1, 4).unwrap();
    let (lambda3, phi3) = stretched.eigenpair(3).unwrap();
    assert!((lambda3 - 73.4103).abs() < 1e-4);
    let x = 0.37;
    assert!((phi3.eval(x) - (2.0 / 1.1_f64).sqrt() * (3.0 * PI * x / 1.1).sin()).abs() < 1e-15);

    let fd = fd_dirichlet_eigenvalue(1.1, 10_000, 70.0);
    assert!((fd - lambda3).abs() / lambda3 < 1e-3, "fd {fd} vs {lambda3}");
}

#[test]
fn eigenpair_index_checks() {
    let d = DirichletDomain64::unit(3).unwrap();
    assert!(matches!(d.eigenpair(0), Err(Error::ModeOutOfRange { .. })));
    assert!(matches!(d.eigenpair(4), Err(Error::ModeOutOfRange { .. })));
    assert!(DirichletDomain64::new(0.0, 3).is_err());
    assert!(DirichletDomain64::new(1.0, 0).is_err());
}

#[test]
fn eigenvalues_increase_and_scale_with_length() {
    for &len in &[0.5, 1.0, 1.1, 2.0, 3.7] {
        let d = DirichletDomain64::new(len, 32).unwrap();
        let ev = d.eigenvalues();
        assert!(ev[0] > 0.0);
        assert!(ev.windows(2).all(|w| w[1] > w[0]));
        for (n, &l) in ev.iter().enumerate() {
            let k = (n + 1) as f64 * PI;
            assert!((l * len * len - k * k).abs() <= 1e-13 * k * k);
        }
    }
}

#[test]
fn eigenfunctions_orthonormal_by_quadrature() {
    let d = DirichletDomain64::new(1.3, 8).unwrap();
    for n in 1..=8 {
        for m in 1..=8 {
            let (pn, pm) = (d.eigenfunction(n).unwrap(), d.eigenfunction(m).unwrap());
            let ip = composite_simpson(&|x| pn.eval(x) * pm.eval(x), 0.0, 1.3, 2000);
            let expected = if n == m { 1.0 } else { 0.0 };
            assert!((ip - expected).abs() < 1e-10, "({n},{m}): {ip}");
        }
    }
}

#[test]
fn single_mode_grid_values() {
    let d = DirichletDomain64::unit(3).unwrap();
    let g = to_grid(&SpectralVec::basis(d, 1).unwrap(), 3).unwrap();
    for (x, v) in g.nodes().iter().zip(g.values()) {
        assert!((v - 2f64.sqrt() * (PI * x).sin()).abs() < 1e-15);
    }
    assert_eq!(g.nodes(), vec![0.25, 0.5, 0.75]);
    let z = to_grid(&SpectralVec::zeros(d), 5).unwrap();
    assert!(z.values().iter().all(|&v| v == 0.0));
    assert!(matches!(to_grid(&SpectralVec::zeros(d), 2), Err(Error::GridTooCoarse { .. })));
}

#[test]
fn round_trip_is_identity() {
    let mut r = rng(11);
    for &(n, m) in &[(16, 16), (16, 40), (64, 64), (64, 129)] {
        let d = DirichletDomain64::new(1.2, n).unwrap();
        let v = SpectralVec::from_coeffs(d, uniform_vec(&mut r, n)).unwrap();
        let back = from_grid(&to_grid(&v, m).unwrap(), n).unwrap();
        let err = back.sub(&v).unwrap().coeffs().iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        assert!(err < 1e-12, "N={n}, M={m}: {err}");
    }
}

#[test]
fn table_transform_matches_direct_summation() {
    let mut r = rng(12);
    let d = DirichletDomain64::new(0.9, 24).unwrap();
    let v = SpectralVec::from_coeffs(d, uniform_vec(&mut r, 24)).unwrap();
    let g = to_grid(&v, 50).unwrap();
    for (x, val) in g.nodes().iter().zip(g.values()) {
        let direct: f64 = (1..=24)
            .map(|n| v.coeffs()[n - 1] * d.eigenfunction(n).unwrap().eval(*x))
            .sum();
        assert!((val - direct).abs() < 1e-12);
    }
}

#[test]
fn sampled_eigenfunction_projects_to_basis_vector() {
    let d = DirichletDomain64::unit(8).unwrap();
    let phi2 = d.eigenfunction(2).unwrap();
    let g = GridVec::sample(d, 8, |x| phi2.eval(x));
    let e = from_grid(&g, 8).unwrap();
    for (i, c) in e.coeffs().iter().enumerate() {
        let expected = if i == 1 { 1.0 } else { 0.0 };
        assert!((c - expected).abs() < 1e-14);
    }
}

/// Samples of a mode above the grid's resolution, projected back.
fn alias_of(mode: usize, n: usize) -> Vec<f64> {
    let d = DirichletDomain64::unit(n).unwrap();
    let high = DirichletDomain64::unit(mode).unwrap().eigenfunction(mode).unwrap();
    let g = GridVec::sample(d, n, |x| high.eval(x));
    from_grid(&g, n).unwrap().into_coeffs()
}

#[test]
fn aliasing_of_modes_above_the_grid() {
    // Mode N+1 vanishes at every node of an N-point grid.
    let a = alias_of(9, 8);
    assert!(a.iter().all(|c| c.abs() < 1e-14), "{a:?}");
    // Mode N+2 folds onto −e_N, mode N+3 onto −e_{N−1}.
    let b = alias_of(10, 8);
    assert!((b[7] + 1.0).abs() < 1e-14);
    assert!(b[..7].iter().all(|c| c.abs() < 1e-14));
    let c = alias_of(11, 8);
    assert!((c[6] + 1.0).abs() < 1e-14);
    // Mode 2(N+1)+1 wraps around to +e_1.
    let w = alias_of(19, 8);
    assert!((w[0] - 1.0).abs() < 1e-13);
}

#[test]
fn inner_products_and_parseval() {
    let d = DirichletDomain64::unit(16).unwrap();
    let e1 = SpectralVec::basis(d, 1).unwrap();
    let e2 = SpectralVec::basis(d, 2).unwrap();
    assert_eq!(e1.inner(&e1).unwrap(), 1.0);
    assert_eq!(e1.inner(&e2).unwrap(), 0.0);

    let mut r = rng(13);
    for trial in 0..5 {
        let v = SpectralVec::from_coeffs(d, uniform_vec(&mut r, 16)).unwrap();
        let quad = composite_simpson(&|x| v.eval(x).powi(2), 0.0, 1.0, 4 * 16 * 64);
        let n2 = v.norm_sq();
        assert!((n2 - quad).abs() <= 1e-8 * (1.0 + n2), "trial {trial}: {n2} vs {quad}");
        assert!((v.norm() - n2.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn mismatched_domains_are_rejected() {
    let a = SpectralVec::basis(DirichletDomain64::unit(4).unwrap(), 1).unwrap();
    let b = SpectralVec::basis(DirichletDomain64::unit(5).unwrap(), 1).unwrap();
    let c = SpectralVec::basis(DirichletDomain64::new(1.1, 4).unwrap(), 1).unwrap();
    assert!(matches!(a.inner(&b), Err(Error::DomainMismatch(_))));
    assert!(matches!(a.sub(&c), Err(Error::DomainMismatch(_))));
    assert!(SpectralVec::from_coeffs(DirichletDomain::<f64>::unit(4).unwrap(), vec![0.0; 3]).is_err());
    let t = SineTransform::new(DirichletDomain64::unit(4).unwrap(), 8).unwrap();
    assert!(t.to_grid(&c).is_err());
}
