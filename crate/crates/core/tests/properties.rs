use proptest::prelude::*;
use spde_perturb::operators::{operator_norm, semigroup_apply, EmbeddingPair};
use spde_perturb::spde::{cutoff, InitialCondition, NoiseKey, NoisePath, Nonlinearity, Pointwise, SpdeProblem, simulate_path};
use spde_perturb::spectral::{from_grid, to_grid, DirichletDomain, SpectralVec};

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0_f64, 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semigroup_property(c in coeffs(32), s in 0.0..1.0_f64, t in 0.0..1.0_f64, len in 0.5..2.0_f64) {
        let d = DirichletDomain::new(len, c.len()).unwrap();
        let u = SpectralVec::from_coeffs(d, c).unwrap();
        let two = semigroup_apply(s, &semigroup_apply(t, &u).unwrap()).unwrap();
        let one = semigroup_apply(s + t, &u).unwrap();
        prop_assert!(two.sub(&one).unwrap().norm() <= 1e-12 * (1.0 + u.norm()));
    }

    #[test]
    fn semigroup_contracts(c in coeffs(32), t in 0.0..2.0_f64) {
        let d = DirichletDomain::unit(c.len()).unwrap();
        let u = SpectralVec::from_coeffs(d, c).unwrap();
        let lambda1 = d.eigenvalue(1).unwrap();
        prop_assert!(semigroup_apply(t, &u).unwrap().norm() <= (-lambda1 * t).exp() * u.norm() + 1e-12);
    }

    #[test]
    fn grid_round_trip(c in coeffs(32), extra in 0usize..40, len in 0.5..2.0_f64) {
        let n = c.len();
        let d = DirichletDomain::new(len, n).unwrap();
        let u = SpectralVec::from_coeffs(d, c).unwrap();
        let back = from_grid(&to_grid(&u, n + extra).unwrap(), n).unwrap();
        prop_assert!(back.sub(&u).unwrap().coeffs().iter().all(|x| x.abs() <= 1e-12 * (1.0 + u.norm())));
    }

    #[test]
    fn extension_never_gains_norm(c in coeffs(16), eps in 0.0..0.5_f64, margin in 0usize..32) {
        let n = c.len();
        let pair = EmbeddingPair::new(eps, n, n + margin).unwrap();
        let u = SpectralVec::from_coeffs(*pair.base(), c).unwrap();
        let pu = pair.embed(&u).unwrap();
        prop_assert!(pu.norm() <= u.norm() * (1.0 + 1e-12) + 1e-14);
        prop_assert!(pair.restrict(&pu).unwrap().norm() <= u.norm() * (1.0 + 1e-12) + 1e-14);
    }

    #[test]
    fn operator_norm_dominates_probe_gains(
        entries in prop::collection::vec(-5.0..5.0_f64, 12),
        v in prop::collection::vec(-1.0..1.0_f64, 4),
    ) {
        let m = ndarray::Array2::from_shape_vec((3, 4), entries).unwrap();
        let cert = operator_norm(&m).unwrap();
        let v = ndarray::Array1::from(v);
        let vn = v.dot(&v).sqrt();
        prop_assume!(vn > 1e-8);
        let mv = m.dot(&v);
        prop_assert!(mv.dot(&mv).sqrt() / vn <= cert.value * (1.0 + 1e-8) + 1e-12);
    }

    #[test]
    fn cutoff_is_a_lipschitz_ramp(s in 0.0..10.0_f64, t in 0.0..10.0_f64, r in 0.1..5.0_f64) {
        let (a, b) = (cutoff(s, r).unwrap(), cutoff(t, r).unwrap());
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!((a - b).abs() <= 3.0 / r * (s - t).abs() + 1e-12);
    }

    #[test]
    fn cutoff_operator_vanishes_outside_its_ball(c in coeffs(16), r in 0.1..3.0_f64) {
        let d = DirichletDomain::unit(c.len()).unwrap();
        let u = SpectralVec::from_coeffs(d, c).unwrap();
        prop_assume!(u.norm() > 1e-6);
        let f = Nonlinearity::cutoff_nemytskii(d, Pointwise::Tanh, r, 2 * d.n_modes()).unwrap();
        let out = f.apply(&u.scaled(r * 1.01 / u.norm())).unwrap();
        prop_assert!(out.coeffs().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn free_heat_flow_never_grows(c in coeffs(12), seed in any::<u64>()) {
        let d = DirichletDomain::unit(c.len()).unwrap();
        let z = Nonlinearity::zero(d);
        let u0 = SpectralVec::from_coeffs(d, c).unwrap();
        let p = SpdeProblem::new(z.clone(), z, InitialCondition::deterministic(u0), 0.5, 20).unwrap();
        let noise = NoisePath::generate(NoiseKey::wiener(seed, 0), 0.5, 20).unwrap();
        let out = simulate_path(&p, &noise).unwrap();
        prop_assert!(out.trajectory.windows(2).all(|w| w[1].norm() <= w[0].norm()));
    }
}
