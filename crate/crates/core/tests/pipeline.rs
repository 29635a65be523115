//! Cross-module checks of the simulation pipelines against analytic oracles.

use bicm_core::analytic::{conditional_transitions, ergodic_capacity_semianalytic, InstantaneousSnr};
use bicm_core::channel::{sigma2_from_snr_db, ChannelMatrix};
use bicm_core::harness::ber::{ber_point, design_offline, BerBudget, SoftInput};
use bicm_core::harness::config::ExperimentConfig;
use bicm_core::harness::ergodic::{ergodic_rates, required_snr_ergodic, ErgodicBudget, SnrSearch};
use bicm_core::harness::run::run_outage;
use bicm_core::infotheory::count_transitions;
use bicm_core::ldpc::{build_code, read_alist, write_alist};
use bicm_core::link::{ergodic_samples, fixed_channel_samples, llr_values};
use bicm_core::quant::design_boundaries_empirical;
use bicm_core::{BinEdges, ConstellationKind, Domain, Fading, LinkConfig, LlrQuantizer, MasterSeed, Resolution, SisoLlrDensity};
use num_complex::Complex64;

fn siso() -> LinkConfig {
    LinkConfig::new(1, 1, 1.0, ConstellationKind::Bpsk, Fading::Ergodic).unwrap()
}

#[test]
fn siso_monte_carlo_rates_match_semianalytic() {
    let budget = ErgodicBudget { calibration_uses: 200_000, evaluation_uses: 400_000, reference_bins: 4096, batches: 20 };
    let res = [Resolution::Bits(1), Resolution::Bits(2), Resolution::Bits(3)];
    for snr in [-2.0, 3.0, 8.0] {
        let pts = ergodic_rates(&siso(), snr, &res, &budget, MasterSeed(4)).unwrap();
        for p in pts {
            let exact = ergodic_capacity_semianalytic(sigma2_from_snr_db(snr, 1), p.resolution).unwrap();
            assert!((p.rate_bpcu - exact).abs() <= 2.0 * p.stderr, "{snr} dB {:?}: {} vs {exact} (se {})", p.resolution, p.rate_bpcu, p.stderr);
        }
    }
}

#[test]
fn siso_empirical_boundaries_match_inverse_cdf() {
    let sigma2 = sigma2_from_snr_db(2.0, 1);
    let link = siso().at_snr_db(2.0);
    let llrs = llr_values(&ergodic_samples(&link, MasterSeed(5), Domain::Test, 1_000_000).unwrap());
    let d = SisoLlrDensity::new(sigma2).unwrap();
    for k in [4, 8] {
        let emp = design_boundaries_empirical(&llrs, k).unwrap();
        let exact = d.equiprobable_edges(k).unwrap();
        for (a, b) in emp.boundaries().iter().zip(exact.boundaries()) {
            assert!((a - b).abs() < 0.02, "K={k}: {a} vs {b}");
        }
    }
}

#[test]
fn fixed_gain_transitions_match_q_function() {
    let sigma2 = sigma2_from_snr_db(1.0, 1);
    let h = 0.8;
    let link = siso().at_snr_db(1.0);
    let hm = ChannelMatrix::from_entries(1, 1, vec![Complex64::new(h, 0.0)]).unwrap();
    let n = 1_000_000;
    let samples = fixed_channel_samples(&link, &hm, MasterSeed(6), Domain::Test, n).unwrap();
    let edges = BinEdges::new(vec![-3.0, 0.0, 3.0]).unwrap();
    let counts = count_transitions(&samples, &edges);
    let (dc, _) = conditional_transitions(InstantaneousSnr::from_gain(h, sigma2).unwrap(), &edges).unwrap();
    for b in 0..2 {
        let rows = counts.row_total(b) as f64;
        for k in 0..4 {
            let p = dc.p(b, k);
            let se = (p * (1.0 - p) / rows).sqrt();
            let f = counts.count(b, k) as f64 / rows;
            assert!((f - p).abs() <= 3.0 * se + 1e-12, "bit {b} bin {k}: {f} vs {p}");
        }
    }
}

#[test]
fn required_snr_grows_with_target() {
    let link = LinkConfig::new(1, 1, 1.0, ConstellationKind::QpskGray, Fading::Ergodic).unwrap();
    let budget = ErgodicBudget { calibration_uses: 20_000, evaluation_uses: 20_000, reference_bins: 64, batches: 4 };
    let search = SnrSearch::default();
    let s: Vec<f64> = [0.5, 1.0, 1.5]
        .iter()
        .map(|&r| required_snr_ergodic(&link, r, Resolution::Bits(2), &budget, &search, MasterSeed(7)).unwrap())
        .collect();
    assert!(s[0] < s[1] && s[1] < s[2], "{s:?}");
}

#[test]
fn siso_outage_is_non_increasing() {
    let cfg = ExperimentConfig::from_toml(
        r#"
snr_grid_db = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0]
q_bits = [1, 2, 3]
target_rates = [0.25, 0.75]
[link]
mt = 1
mr = 1
constellation = "bpsk"
fading = "quasi_static"
[trials]
channels = 20000
"#,
    )
    .unwrap();
    let rows = run_outage(&cfg).unwrap();
    for w in rows.windows(2) {
        if w[0].q_bits == w[1].q_bits && w[0].target_rate == w[1].target_rate {
            assert!(w[1].p_out <= w[0].p_out, "{:?} -> {:?}", w[0], w[1]);
            assert!(w[0].ci_lo <= w[0].p_out && w[0].p_out <= w[0].ci_hi);
        }
    }
}

#[test]
fn ber_falls_with_snr() {
    let code = build_code(8000, 3, 6, MasterSeed(1)).unwrap();
    let budget = BerBudget { max_codewords: 32, ..Default::default() };
    let bers: Vec<f64> = [1.0, 2.5, 4.0]
        .iter()
        .map(|&s| ber_point(&siso(), s, &code, &SoftInput::Raw, &budget, MasterSeed(2)).unwrap().ber)
        .collect();
    assert!(bers[0] > bers[1] && bers[1] > bers[2], "{bers:?}");
    assert!(bers[2] < 1e-4);
}

#[test]
fn quantized_decoding_works_and_sign_flip_collapses() {
    let code = build_code(2000, 3, 6, MasterSeed(3)).unwrap();
    let link = siso().at_snr_db(7.0);
    let q = design_offline(&link, 3, 100_000, MasterSeed(8)).unwrap();
    let budget = BerBudget { min_bit_errors: 1, max_codewords: 16, ..Default::default() };
    let good = ber_point(&siso(), 7.0, &code, &SoftInput::Quantized(q.clone()), &budget, MasterSeed(9)).unwrap();
    let bad = ber_point(&siso(), 7.0, &code, &SoftInput::Inverted(q), &budget, MasterSeed(9)).unwrap();
    assert_eq!(good.bit_errors, 0);
    assert!(bad.ber >= 0.4, "{}", bad.ber);
}

#[test]
fn file_formats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let code = build_code(96, 3, 6, MasterSeed(10)).unwrap();
    let path = dir.path().join("code.alist");
    std::fs::write(&path, write_alist(&code)).unwrap();
    let back = read_alist(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back.checks(), code.checks());
    assert_eq!(back.k(), code.k());

    let q = design_offline(&siso().at_snr_db(3.0), 3, 50_000, MasterSeed(11)).unwrap();
    let record = q.to_record();
    assert_eq!(record.split(',').count(), 1 + 7 + 8);
    assert_eq!(LlrQuantizer::from_record(&record).unwrap(), q);
}
