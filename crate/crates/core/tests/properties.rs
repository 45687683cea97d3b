use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use proptest::prelude::*;

use hnm::amplitude::arrowhead::ArrowheadEigen;
use hnm::amplitude::{amplitude_modes, amplitude_series, amplitude_volterra, DiscreteModeSystem};
use hnm::channel::{
    channel_from_generator, channel_superoperator, choi_matrix, evolve, extract_rates,
    gkls_generator, hermitian_eigenvalues, DensityMatrix,
};
use hnm::cli::csv::format_float;
use hnm::cli::ExperimentConfig;
use hnm::coupling::validate_coupling;
use hnm::markovianity::{defect_report, semigroup_defect, superoperator_defect};
use hnm::{CouplingSpec, ModelParams, TimeGrid};

fn state() -> impl Strategy<Value = DensityMatrix> {
    (0.0..1.0f64, 0.0..1.0f64, -PI..PI).prop_map(|(p, r, phi)| {
        let max = (p * (1.0 - p)).sqrt();
        DensityMatrix::from_populations(p, Complex64::from_polar(r * max, phi)).unwrap()
    })
}

fn disk() -> impl Strategy<Value = Complex64> {
    (0.0..=1.0f64, -PI..PI).prop_map(|(r, phi)| Complex64::from_polar(r, phi))
}

fn punctured_disk() -> impl Strategy<Value = Complex64> {
    (1e-3..=1.0f64, -PI..PI).prop_map(|(r, phi)| Complex64::from_polar(r, phi))
}

fn max_abs(m: &Matrix4<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn evolution_is_trace_preserving_and_positive(rho in state(), a in disk()) {
        let out = evolve(&rho, a).unwrap();
        prop_assert!((out.trace() - 1.0).norm() <= 1e-12);
        prop_assert!(out.min_eigenvalue() >= -1e-12);
        prop_assert!(hermitian_eigenvalues(&choi_matrix(a))[0] >= -1e-12);
    }

    #[test]
    fn channels_compose_like_amplitudes(a in punctured_disk(), b in punctured_disk()) {
        let lhs = channel_superoperator(a).unwrap().compose(&channel_superoperator(b).unwrap());
        let rhs = channel_superoperator(a * b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        prop_assert!(rhs.trace_defect() <= 1e-12);
    }

    #[test]
    fn channel_is_exponential_of_generator(a in punctured_disk()) {
        let direct = channel_superoperator(a).unwrap();
        prop_assert!(direct.max_abs_diff(&channel_from_generator(a).unwrap()) <= 1e-12);
    }

    #[test]
    fn flat_channel_matches_generator_flow(gamma0 in 0.1..5.0f64, eps0 in -5.0..5.0f64, x in 0.0..=1.0f64) {
        let t = 5.0 * x / gamma0;
        let a = Complex64::new(-0.5 * gamma0 * t, -eps0 * t).exp();
        let flow = gkls_generator(gamma0, eps0).scale(t).exp();
        prop_assert!(channel_superoperator(a).unwrap().max_abs_diff(&flow) <= 1e-10);
    }

    #[test]
    fn choi_spectrum_is_analytic(a in disk()) {
        let p = a.norm_sqr();
        let vals = hermitian_eigenvalues(&choi_matrix(a));
        let mut expected = [0.0, 0.0, 1.0 - p, 1.0 + p];
        expected.sort_by(f64::total_cmp);
        for (v, e) in vals.iter().zip(expected) {
            prop_assert!((v - e).abs() <= 1e-12);
        }
        let choi = choi_matrix(a);
        prop_assert!(max_abs(&(choi - choi.adjoint())) == 0.0);
    }

    #[test]
    fn series_is_exponential_before_first_delay(
        gamma0 in 0.1..5.0f64, eps0 in -10.0..10.0f64, alpha in -1.0..=1.0f64, frac in 0.0..1.0f64
    ) {
        let p = ModelParams::new(CouplingSpec::Sinusoidal { gamma0, period: 1.0, alpha }, eps0).unwrap();
        let grid = TimeGrid::new(0.01, 200).unwrap();
        let trace = amplitude_series(&p, &grid).unwrap();
        let k = (frac * 99.0) as usize;
        let t = grid.time(k);
        let exact = Complex64::new(-0.5 * gamma0 * t, -eps0 * t).exp();
        prop_assert!((trace.values()[k] - exact).norm() <= 1e-14);
    }

    /// The trapezoidal history integral is exact while the solution is a
    /// polynomial of degree ≤ 1 times the free exponential, i.e. before 3T.
    #[test]
    fn volterra_agrees_with_series_through_two_delays(
        gamma0 in 0.1..5.0f64, eps0 in -10.0..10.0f64, beta in 0.0..3.0f64
    ) {
        let p = ModelParams::new(CouplingSpec::ExpComb { gamma0, period: 1.0, beta }, eps0).unwrap();
        let grid = TimeGrid::new(0.01, 300).unwrap();
        let series = amplitude_series(&p, &grid).unwrap();
        let volterra = amplitude_volterra(&p, &grid).unwrap();
        prop_assert!(series.max_deviation(&volterra).unwrap() <= 1e-11);
    }

    #[test]
    fn rates_of_exponential_are_constant(gamma0 in 0.1..5.0f64, eps0 in -5.0..5.0f64) {
        let p = ModelParams::new(CouplingSpec::Flat { gamma0 }, eps0).unwrap();
        let grid = TimeGrid::new(1e-3, 500).unwrap();
        let rates = extract_rates(&amplitude_series(&p, &grid).unwrap()).unwrap();
        for (g, e) in rates.gamma().iter().zip(rates.eps()) {
            prop_assert!((g - gamma0).abs() <= 1e-8 && (e - eps0).abs() <= 1e-8);
        }
    }

    #[test]
    fn scalar_and_operator_defects_vanish_together(i in 0usize..150, j in 0usize..150, eps0 in -3.0..3.0f64) {
        let p = ModelParams::new(CouplingSpec::Sinusoidal { gamma0: 1.0, period: 1.0, alpha: 1.0 }, eps0).unwrap();
        let trace = amplitude_series(&p, &TimeGrid::new(0.01, 300).unwrap()).unwrap();
        let s = semigroup_defect(&trace, i, j).unwrap();
        let op = superoperator_defect(&trace, i, j).unwrap();
        if i + j <= 100 {
            prop_assert!(s <= 1e-12 && op <= 1e-12);
        } else if i > 0 && j > 0 {
            prop_assert!(s > 1e-12 && op > 1e-12);
        }
        prop_assert!(op >= s * (1.0 - 1e-9) - 1e-15);
        prop_assert!(op <= 2.0 * 2f64.sqrt() * s + 1e-15);
    }

    #[test]
    fn arrowhead_matches_dense_solver(
        shaft in -3.0..3.0f64,
        gaps in prop::collection::vec(0.01..1.0f64, 1..12),
        z in prop::collection::vec(-1.0..1.0f64, 12),
    ) {
        let mut poles = Vec::new();
        let mut acc = -2.0;
        for g in &gaps {
            acc += g;
            poles.push(acc);
        }
        let z = &z[..poles.len()];
        let eig = ArrowheadEigen::solve(shaft, &poles, z).unwrap();

        let n = poles.len() + 1;
        let mut dense = DMatrix::<f64>::zeros(n, n);
        dense[(0, 0)] = shaft;
        for k in 0..poles.len() {
            dense[(k + 1, k + 1)] = poles[k];
            dense[(0, k + 1)] = z[k];
            dense[(k + 1, 0)] = z[k];
        }
        let mut reference: Vec<f64> = dense.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        for (a, b) in eig.eigenvalues().iter().zip(&reference) {
            prop_assert!((a - b).abs() <= 1e-12 * 8.0, "{a} vs {b}");
        }

        let pairs = eig.eigenpairs();
        prop_assert_eq!(pairs.len(), n);
        for (lambda, v) in &pairs {
            let v = nalgebra::DVector::from_column_slice(v);
            prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
            prop_assert!((&dense * &v - v.clone() * *lambda).norm() <= 1e-11);
        }
        for i in 0..n {
            for j in 0..i {
                let dot: f64 = pairs[i].1.iter().zip(&pairs[j].1).map(|(x, y)| x * y).sum();
                prop_assert!(dot.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn small_mode_systems_conserve_probability(
        eps0 in -2.0..2.0f64, n in 1usize..30, g in 0.01..1.0f64, spacing in 0.05..1.0f64
    ) {
        let freqs: Vec<f64> = (0..n).map(|k| (k as f64 - n as f64 / 2.0) * spacing).collect();
        let system = DiscreteModeSystem::new(eps0, freqs, vec![g; n]).unwrap();
        let spectrum = system.diagonalize().unwrap();
        let grid = TimeGrid::new(0.37, 40).unwrap();
        let traj = amplitude_modes(&system, &grid).unwrap();
        for i in 0..grid.len() {
            prop_assert!((traj.total_probability(&spectrum, i) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn csv_floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn config_round_trip_is_idempotent(
        kind in 0usize..4, gamma0 in 0.1..10.0f64, period in 0.1..10.0f64, shape in 0.0..1.0f64, eps0 in -10.0..10.0f64
    ) {
        let coupling = match kind {
            0 => CouplingSpec::Flat { gamma0 },
            1 => CouplingSpec::Sinusoidal { gamma0, period, alpha: 2.0 * shape - 1.0 },
            2 => CouplingSpec::ExpComb { gamma0, period, beta: 3.0 * shape },
            _ => CouplingSpec::CustomFourier { gamma0, period, coeffs: vec![-0.4 * shape, 0.05] },
        };
        let text = format!(
            r#"{{"model": {{"coupling": {}, "eps0": {eps0}}}, "grid": {{"dt": 0.01, "t_max": 1.0}}}}"#,
            serde_json::to_string(&coupling).unwrap()
        );
        let first = ExperimentConfig::from_json(&text).unwrap();
        let second = ExperimentConfig::from_json(&first.to_json()).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(first.to_json(), second.to_json());
    }

    #[test]
    fn self_energy_has_positive_width(
        c1 in -0.5..0.5f64, share in -1.0..1.0f64, x in -20.0..20.0f64, y in 0.01..3.0f64
    ) {
        // |c₁| + |c₂| ≤ 1/2 keeps 1 + 2Σ cₙ cos(nωT) nonnegative.
        let c2 = share * (0.5 - c1.abs());
        let coupling = validate_coupling(
            CouplingSpec::CustomFourier { gamma0: 1.0, period: 1.0, coeffs: vec![c1, c2] }, 4096
        ).unwrap();
        let sigma = coupling.self_energy(Complex64::new(x, y)).unwrap();
        prop_assert!(sigma.im > 0.0);
    }
}

fn comb_defect_at(beta: f64, tau_steps: usize) -> f64 {
    let p = ModelParams::new(
        CouplingSpec::ExpComb {
            gamma0: 1.0,
            period: 1.0,
            beta,
        },
        0.0,
    )
    .unwrap();
    let trace = amplitude_series(&p, &TimeGrid::new(0.01, 200).unwrap()).unwrap();
    defect_report(&trace, Some(1e-10)).unwrap().pairs[tau_steps].2
}

#[test]
fn larger_beta_suppresses_the_defect() {
    let d: Vec<f64> = [1.0, 2.0, 3.0]
        .iter()
        .map(|&b| comb_defect_at(b, 150))
        .collect();
    for w in d.windows(2) {
        assert!(w[0] >= w[1] * 0.5f64.exp(), "{d:?}");
    }
}

#[test]
fn defect_onset_is_sharp() {
    let p = ModelParams::new(
        CouplingSpec::Sinusoidal {
            gamma0: 1.0,
            period: 1.0,
            alpha: 1.0,
        },
        0.0,
    )
    .unwrap();
    let trace = amplitude_series(&p, &TimeGrid::new(0.01, 300).unwrap()).unwrap();
    let report = defect_report(&trace, None).unwrap();
    assert!(report.max_defect_until(1.0) <= 1e-12);
    for k in 120..=300 {
        assert!(report.pairs[k].2 > 1e-3, "tau = {}", k as f64 * 0.01);
    }
    assert!((report.horizon_estimate - 1.0).abs() <= 0.01 + 1e-12);
}
