use stator::verify::{chi_square_uniform, critical_value, run_batch, SIGNIFICANCE};
use stator::{Error, Involution, NLevel, Scenario, StateVector};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn critical_table_matches_reference_quantiles() {
    for dof in 1..=15 {
        let exact = ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - SIGNIFICANCE);
        let ours = critical_value(dof);
        assert!((ours - exact).abs() < 1e-3, "dof {dof}: table {ours} vs {exact}");
    }
    for dof in [16, 20, 40, 100] {
        let exact = ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - SIGNIFICANCE);
        assert!((critical_value(dof) / exact - 1.0).abs() < 5e-3, "dof {dof}");
    }
}

#[test]
fn chi_square_examples() {
    let fair = chi_square_uniform(&[5000, 5000]).unwrap();
    assert_eq!((fair.statistic, fair.dof, fair.pass), (0.0, 1, true));
    let biased = chi_square_uniform(&[10000, 0]).unwrap();
    assert_eq!((biased.statistic, biased.pass), (10000.0, false));
    assert_eq!(chi_square_uniform(&[]), Err(Error::EmptyCounts));
}

#[test]
fn two_level_protocol_is_fair() {
    let s = Scenario::Rotate2 { axis: Involution::named('x').unwrap(), alpha: 1.0 };
    let b = run_batch(&s, &StateVector::basis(vec![2], 0).unwrap(), 10_000, 1).unwrap();
    for c in &b.channels {
        let r = chi_square_uniform(&c.counts).unwrap();
        assert!(r.pass, "{:?}", c);
        let f = c.counts[0] as f64 / 10_000.0;
        assert!((f - 0.5).abs() <= 0.02);
    }
}

#[test]
fn batch_is_order_independent() {
    let s = Scenario::RotateN { spec: NLevel::standard(3).unwrap(), angles: vec![0.2, 0.9] };
    let psi = StateVector::basis(vec![3], 2).unwrap();
    let whole = run_batch(&s, &psi, 600, 77).unwrap();
    let again = run_batch(&s, &psi, 600, 77).unwrap();
    assert_eq!(whole, again);
    // the same trials run one by one in reverse give the same totals
    let mut counts = vec![vec![0u64; 3]; 2];
    for t in (0..600).rev() {
        let run = s.run(&psi, 77, t, &[]).unwrap();
        for (i, (_, _, symbol, _)) in run.transcript.messages().enumerate() {
            counts[i][symbol] += 1;
        }
    }
    let mut got: Vec<Vec<u64>> = whole.channels.iter().map(|c| c.counts.clone()).collect();
    got.sort();
    counts.sort();
    assert_eq!(got, counts);
}
