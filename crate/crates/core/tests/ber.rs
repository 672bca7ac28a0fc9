use dmrx_core::montecarlo::sweep;
use dmrx_core::{Method, ScenarioConfig, SweepAxis};

#[test]
fn ber_falls_with_snr() {
    let axis = SweepAxis::SnrDb(vec![-5.0, 0.0, 5.0, 10.0, 15.0]);
    let reports = sweep(&ScenarioConfig::default(), &Method::ALL, &axis, 20_000, 2).unwrap();
    for method in Method::ALL {
        let curve: Vec<_> = reports
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.ber.clone().unwrap())
            .collect();
        // a rise counts as a violation only when the intervals separate
        let violations = curve
            .windows(2)
            .filter(|w| w[1].ber > w[0].ber && w[1].ci95.0 > w[0].ci95.1)
            .count();
        let rises = curve.windows(2).filter(|w| w[1].ber > w[0].ber).count();
        assert!(violations == 0 && rises <= 1, "{method}: {curve:?}");
    }
}
