mod common;

use common::*;
use qdent_core::linalg::max_abs_diff;
use qdent_core::protocol::measure_photon;
use qdent_core::state::bell;
use qdent_core::tomography::*;
use qdent_core::*;
use rand::Rng;

fn dephasing() -> NoiseModel {
    NoiseModel::dephasing(1.0, 10.0)
}

#[test]
fn every_setting_reads_its_target_coefficient() {
    let mut r = rng(31);
    let channel = ProbeChannel::new(&dephasing(), [0.3, 0.2, 0.1]).unwrap();
    for _ in 0..40 {
        let rho = random_state(&mut r, 4);
        let alpha = hs_coefficients(&rho).unwrap();
        for setting in table_settings() {
            let value = extract_coefficient(channel.setting_probabilities(&rho, &setting).unwrap());
            let (i, j) = setting.target;
            assert!(
                (value - alpha.get(i, j)).abs() < 1e-10,
                "{}: {} vs {}",
                setting.label(),
                value,
                alpha.get(i, j)
            );
        }
    }
}

#[test]
fn yy_rotation_maps_xx_onto_zz() {
    let mut r = rng(32);
    for _ in 0..20 {
        let rho = random_state(&mut r, 4);
        let rotated = apply_rotations(&rho, &RotationSetting::new(Rotation::Y, Rotation::Y)).unwrap();
        let before = hs_coefficients(&rho).unwrap();
        let after = hs_coefficients(&rotated).unwrap();
        assert!((after.get(3, 3) - before.get(1, 1)).abs() < 1e-12);
    }
}

#[test]
fn coefficients_do_not_depend_on_probe_timing_under_dephasing() {
    let mut r = rng(33);
    let grids = [
        [0.0, 0.0, 0.0],
        [1.0, 1.0, 1.0],
        [3.0, 0.0, 0.0],
        [1.0, 5.0, 0.3],
        [0.0, 3.0, 3.0],
    ];
    let channels: Vec<ProbeChannel> = grids
        .iter()
        .map(|&t| ProbeChannel::new(&dephasing(), t).unwrap())
        .collect();
    for _ in 0..50 {
        let rho = random_state(&mut r, 4);
        for setting in table_settings() {
            let values: Vec<f64> = channels
                .iter()
                .map(|c| extract_coefficient(c.setting_probabilities(&rho, &setting).unwrap()))
                .collect();
            for v in &values[1..] {
                assert!((v - values[0]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn photon_states_match_readout_forms() {
    let phi = DensityOperator::from_pure(&bell::phi_minus()).unwrap();
    let photon = second_photon_state(&phi, Pattern::Both, &dephasing(), [0.4, 1.0, 2.0]).unwrap();
    let (p_h, p_v) = readout_probabilities(&photon, PolarizationBasis::Linear);
    assert!((p_h - 1.0).abs() < 1e-12 && p_v.abs() < 1e-12);

    let mixed = DensityOperator::maximally_mixed(4);
    let photon = second_photon_state(&mixed, Pattern::Both, &dephasing(), [0.1, 0.1, 0.1]).unwrap();
    assert!(max_abs_diff(photon.matrix(), DensityOperator::maximally_mixed(2).matrix()) < 1e-12);

    let psi = DensityOperator::from_pure(&bell::psi_plus()).unwrap();
    let photon = second_photon_state(&psi, Pattern::Both, &dephasing(), [0.0; 3]).unwrap();
    let (_, p_v) = readout_probabilities(&photon, PolarizationBasis::Linear);
    assert!((p_v - 1.0).abs() < 1e-12);
}

#[test]
fn negative_probe_time_is_rejected() {
    let rho = DensityOperator::maximally_mixed(4);
    assert!(second_photon_state(&rho, Pattern::Both, &dephasing(), [0.1, -0.2, 0.0]).is_err());
}

#[test]
fn measured_probe_leaves_definite_parity() {
    let mut r = rng(34);
    let channel = ProbeChannel::new(&dephasing(), [0.2, 0.5, 0.1]).unwrap();
    for _ in 0..50 {
        let rho = random_state(&mut r, 4);
        let joint = channel.interact(&rho, Pattern::Both).unwrap();
        let branches = measure_photon(&joint, PolarizationBasis::Linear).unwrap();
        for (branch, sign) in branches.iter().zip([1.0, -1.0]) {
            if let Some(state) = &branch.state {
                let zz = hs_coefficients(state).unwrap().get(3, 3);
                assert!((zz - sign).abs() < 1e-12, "zz = {zz}");
            }
        }
    }
}

#[test]
fn rotations_preserve_concurrence() {
    let mut r = rng(35);
    let rotations = [Rotation::Id, Rotation::X, Rotation::Y];
    for k in 0..200 {
        let rho = random_state(&mut r, 4);
        let setting = RotationSetting::new(rotations[k % 3], rotations[(k / 3) % 3]);
        let rotated = apply_rotations(&rho, &setting).unwrap();
        assert!((concurrence(&rho) - concurrence(&rotated)).abs() < 1e-12);
    }
    let rho = random_state(&mut r, 4);
    let same = apply_rotations(&rho, &RotationSetting::NONE).unwrap();
    assert!(max_abs_diff(same.matrix(), rho.matrix()) < 1e-15);
}

#[test]
fn bell_state_round_trip() {
    let psi = DensityOperator::from_pure(&bell::psi_plus()).unwrap();
    let report = full_tomography(&psi, &dephasing(), [1.0, 2.0, 0.5], SamplingMode::Exact).unwrap();
    assert!(report.records.is_empty());
    assert!((report.alpha.get(3, 3) + 1.0).abs() < 1e-12);
    assert!((report.alpha.get(1, 1) - 1.0).abs() < 1e-12);
    assert!((report.alpha.get(2, 2) - 1.0).abs() < 1e-12);
    let rebuilt = reconstruct_density(&report.alpha, false).unwrap();
    assert!(max_abs_diff(rebuilt.matrix(), psi.matrix()) < 1e-12);

    let phi = DensityOperator::from_pure(&bell::phi_minus()).unwrap();
    let rebuilt = reconstruct_density(&hs_coefficients(&phi).unwrap(), false).unwrap();
    assert!(max_abs_diff(rebuilt.matrix(), phi.matrix()) < 1e-12);

    let id = reconstruct_density(&CorrelationMatrix::identity_only(), false).unwrap();
    assert!(max_abs_diff(id.matrix(), DensityOperator::maximally_mixed(4).matrix()) < 1e-15);
}

#[test]
fn unphysical_coefficients_need_physicalization() {
    let mut alpha = CorrelationMatrix::identity_only();
    for k in 1..4 {
        alpha.set(k, k, 1.0);
    }
    assert!(matches!(
        reconstruct_density(&alpha, false),
        Err(Error::NonPhysical { .. })
    ));
    let fixed = reconstruct_density(&alpha, true).unwrap();
    assert_valid(&fixed);
}

#[test]
fn shot_reconstructions_physicalize() {
    let rho = DensityOperator::from_pure(&bell::psi_plus()).unwrap();
    for seed in 0..100 {
        let report = full_tomography(&rho, &dephasing(), [0.0; 3], SamplingMode::Shots { n: 1000, seed }).unwrap();
        assert_eq!(report.records.len(), 15);
        for record in &report.records {
            assert!(record.n_outcome_plus <= record.n_shots);
            assert!((-1.0..=1.0).contains(&record.estimate));
        }
        assert_valid(&reconstruct_density(&report.alpha, true).unwrap());
    }
}

#[test]
fn shot_estimates_are_reproducible() {
    let rho = random_state(&mut rng(36), 4);
    let mode = SamplingMode::Shots { n: 5000, seed: 9 };
    let a = full_tomography(&rho, &dephasing(), [0.1; 3], mode).unwrap();
    let b = full_tomography(&rho, &dephasing(), [0.1; 3], mode).unwrap();
    assert_eq!(a, b);
    let c = full_tomography(&rho, &dephasing(), [0.1; 3], SamplingMode::Shots { n: 5000, seed: 10 }).unwrap();
    assert_ne!(a.alpha, c.alpha);
}

#[test]
fn photon_string_repeats_under_dephasing() {
    let mut r = rng(37);
    let settings = table_settings();
    for k in 0..10 {
        let rho = random_state(&mut r, 4);
        let setting = settings[k % settings.len()];
        let taus = [
            r.random_range(0.0..1.0),
            r.random_range(0.0..1.0),
            r.random_range(0.0..1.0),
        ];
        let stats = photon_string_experiment(&rho, &setting, 10, &dephasing(), taus, SamplingMode::Exact).unwrap();
        assert_eq!(stats.agreement.len(), 9);
        assert!(
            stats.agreement.iter().all(|&a| (a - 1.0).abs() < 1e-12),
            "{:?}",
            stats.agreement
        );
        let expected = ProbeChannel::new(&dephasing(), taus)
            .unwrap()
            .setting_probabilities(&rho, &setting)
            .unwrap();
        assert!((stats.first_outcome[0] - expected.0).abs() < 1e-12);
    }
}

#[test]
fn photon_string_sampling_matches_exact() {
    let rho = random_state(&mut rng(38), 4);
    let setting = table_settings()[0];
    let mode = SamplingMode::Shots { n: 400, seed: 1 };
    let stats = photon_string_experiment(&rho, &setting, 4, &dephasing(), [0.2; 3], mode).unwrap();
    assert_eq!(stats.trajectories, 400);
    assert!(stats.agreement.iter().all(|&a| a == 1.0));
}

#[test]
fn photon_string_breaks_under_relaxation() {
    let psi = DensityOperator::from_pure(&bell::psi_plus()).unwrap();
    let setting = TomographySetting::new(RotationSetting::NONE, Pattern::Both, (3, 3));
    let noise = NoiseModel::relaxation(1.0, 0.0);
    let stats = photon_string_experiment(&psi, &setting, 5, &noise, [0.4; 3], SamplingMode::Exact).unwrap();
    assert!(stats.agreement.iter().all(|&a| a < 1.0 - 1e-3), "{:?}", stats.agreement);
    assert!(photon_string_experiment(&psi, &setting, 1, &noise, [0.0; 3], SamplingMode::Exact).is_err());
}

#[test]
fn relaxation_drifts_toward_positive_parity() {
    let psi = DensityOperator::from_pure(&bell::psi_plus()).unwrap();
    let setting = TomographySetting::new(RotationSetting::NONE, Pattern::Both, (3, 3));
    let grid: Vec<f64> = (0..=40).map(|k| 0.25 * k as f64).collect();
    let rows = relaxation_tomography_drift(&psi, &setting, 1.0, &grid).unwrap();
    assert!((rows[0].extracted + 1.0).abs() < 1e-12);
    assert!(rows.windows(2).all(|w| w[1].extracted > w[0].extracted));
    assert!(rows.last().unwrap().extracted > 0.9);
    let small = relaxation_tomography_drift(&psi, &setting, 1.0, &[0.1]).unwrap();
    assert!((small[0].extracted + 1.0).abs() > 1e-3);
    assert!(relaxation_tomography_drift(&psi, &setting, 0.0, &grid).is_err());
}

fn boost_config(t: f64) -> ProtocolConfig {
    ProtocolConfig::balanced(
        NoiseModel::relaxation(1.0, 0.0),
        protocol::ProtocolTimings::first_photon(t, t, t),
    )
}

#[test]
fn boost_without_waiting_keeps_full_entanglement() {
    let params = BoostParams {
        n_photons: 6,
        delay: 0.0,
        trajectories: 20,
        seed: 3,
    };
    let stats = entanglement_boost_experiment(&boost_config(0.0), &params).unwrap();
    assert!(stats.conditional_concurrence.iter().all(|&c| (c - 1.0).abs() < 1e-12));
    for trajectory in &stats.trajectories {
        let prefix = trajectory.psi_prefix();
        assert!(trajectory.concurrence[..prefix]
            .iter()
            .all(|&c| (c - 1.0).abs() < 1e-12));
    }
}

#[test]
fn boost_conditional_beats_unconditional() {
    let params = BoostParams {
        n_photons: 8,
        delay: 0.1,
        trajectories: 50,
        seed: 4,
    };
    let stats = entanglement_boost_experiment(&boost_config(0.02), &params).unwrap();
    for (c, u) in stats
        .conditional_concurrence
        .iter()
        .zip(&stats.unconditional_concurrence)
    {
        assert!(c + 1e-12 >= *u, "{c} < {u}");
    }
    assert!(stats.elapsed.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn all_psi_probability_falls_with_delay() {
    let last = |delay: f64| {
        let params = BoostParams {
            n_photons: 5,
            delay,
            trajectories: 0,
            seed: 0,
        };
        *entanglement_boost_experiment(&boost_config(0.02), &params)
            .unwrap()
            .all_psi_probability
            .last()
            .unwrap()
    };
    let values: Vec<f64> = [0.0, 0.05, 0.1, 0.2, 0.4].iter().map(|&d| last(d)).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
}

#[test]
fn boost_requires_relaxation() {
    let config = ProtocolConfig::balanced(dephasing(), protocol::ProtocolTimings::first_photon(0.1, 0.1, 0.1));
    let params = BoostParams {
        n_photons: 2,
        delay: 0.1,
        trajectories: 1,
        seed: 0,
    };
    assert!(matches!(
        entanglement_boost_experiment(&config, &params),
        Err(Error::UnsupportedNoise(_))
    ));
}
