use std::fmt::Write as _;

use dmrx_core::PerformanceReport;

use crate::SweepSpec;

pub const COLUMNS: &str = "axis_value,method,sr_bits,sinr_bob_db,sinr_mallory_db,ber,ber_ci95,flops_formula";

fn db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Full CSV text: a `#` comment block with every effective parameter, the
/// column header, then one row per (axis value, method).
pub fn render_csv(spec: &SweepSpec, reports: &[PerformanceReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# dmrx sweep {}", spec.name);
    let _ = writeln!(out, "# axis = {}", spec.axis.name());
    let _ = writeln!(out, "# seed = {}", spec.seed);
    let _ = writeln!(out, "# n_symbols = {}", spec.n_symbols);
    let methods: Vec<_> = spec.methods.iter().map(|m| m.name()).collect();
    let _ = writeln!(out, "# methods = {}", methods.join(","));
    let _ = writeln!(
        out,
        "# snr = p_a_watt * g_ab / sigma_b2 (received) or p_a_watt / sigma_b2 (transmit); sigma_m2 = sigma_b2 on an snr axis"
    );
    for (key, value) in spec.scenario.entries() {
        let _ = writeln!(out, "# {key} = {value}");
    }
    out.push_str(COLUMNS);
    out.push('\n');
    for r in reports {
        let (ber, ci) = match &r.ber {
            Some(b) => (format!("{:.6e}", b.ber), format!("{:.6e}", b.ci95_half_width())),
            None => ("nan".to_string(), "nan".to_string()),
        };
        let _ = writeln!(
            out,
            "{},{},{:.12},{:.9},{:.9},{},{},{}",
            r.axis_value,
            r.method,
            r.rates.secrecy_rate,
            db(r.rates.sinr_bob),
            db(r.rates.sinr_mallory),
            ber,
            ci,
            r.flops_formula
        );
    }
    out
}

/// The CSV without its comment block.
pub fn csv_body(csv: &str) -> String {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .flat_map(|l| [l, "\n"])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{compute, Preset};
    use dmrx_core::{ScenarioConfig, SweepAxis};

    #[test]
    fn header_and_rows() {
        let mut spec = Preset::Fig4.spec(ScenarioConfig::default(), "out");
        spec.axis = SweepAxis::SnrDb(vec![0.0, 5.0]);
        spec.n_symbols = 500;
        let reports = compute(&spec, 1).unwrap();
        let text = render_csv(&spec, &reports);
        assert!(text.contains("# theta_r_mb_deg = 45.0"));
        assert!(text.contains("# beta1 = 0.9"));
        let body = csv_body(&text);
        let lines: Vec<_> = body.lines().collect();
        assert_eq!(lines[0], COLUMNS);
        assert_eq!(lines.len(), 1 + 2 * 6);
        for l in &lines[1..] {
            assert_eq!(l.split(',').count(), 8, "{l}");
        }
    }
}
