//! Fixtures shared by the criterion benches.

use dmrx_core::{Scenario, ScenarioConfig};

/// Bob array sizes swept by the benches.
pub const BOB_SIZES: [usize; 3] = [8, 32, 64];

/// Default scenario with `n_b` receive antennas at Bob.
pub fn scenario_with_bob_array(n_b: usize) -> Scenario {
    Scenario::new(ScenarioConfig {
        n_b,
        ..ScenarioConfig::default()
    })
    .expect("default scenario is valid for any N_B >= 1")
}
