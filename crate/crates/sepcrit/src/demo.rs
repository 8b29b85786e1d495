//! The built-in reproduction suite behind `sepcrit demo`: re-derives the
//! headline detection thresholds of both reference families and the
//! structural cross-checks, and compares them against their pinned targets.

use serde::{Deserialize, Serialize};

use crate::criteria::{ccn_check, ccn_witness, ccn_witness_realign, lur_ccn_value, lur_detect, ppt_check};
use crate::error::Result;
use crate::loo_basis::singlet_schmidt_loos;
use crate::operator_algebra::max_abs_diff;
use crate::scan::{bisect_threshold, ScanCriterion};
use crate::states;

/// One pass/fail row: `pass == (low <= observed <= high)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemoRow {
    pub name: String,
    pub observed: f64,
    pub low: f64,
    pub high: f64,
    pub pass: bool,
}

impl DemoRow {
    fn new(name: &str, observed: f64, low: f64, high: f64) -> Self {
        DemoRow {
            name: name.to_string(),
            observed,
            low,
            high,
            pass: low <= observed && observed <= high,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemoDocument {
    pub rows: Vec<DemoRow>,
    pub passed: bool,
}

/// Runs the full suite. Scans use a bisection tolerance of 1e-4; the
/// random-state samples are seeded from `seed`.
pub fn run_demo(seed: u64, tol_detect: f64) -> Result<DemoDocument> {
    let mut rows = Vec::new();
    let ns = states::noisy_singlet_family();
    let tiles = states::tiles_family();

    let scan = bisect_threshold(&ns, ScanCriterion::Ccn, (0.0, 1.0), 1e-4, None, tol_detect)?;
    rows.push(DemoRow::new(
        "noisy_singlet_ccn_threshold",
        scan.threshold,
        0.292 - 1e-3,
        0.292 + 1e-3,
    ));

    let scan = bisect_threshold(&ns, ScanCriterion::LurFixed, (0.0, 1.0), 1e-4, None, tol_detect)?;
    rows.push(DemoRow::new(
        "noisy_singlet_lur_threshold",
        scan.threshold,
        0.250 - 1e-3,
        0.250 + 1e-3,
    ));

    // strict detection gap at p = 0.27: the fixed-LOO LUR fires, CCN does not
    let gap_state = states::noisy_singlet(0.27)?;
    let (loos_a, loos_b) = singlet_schmidt_loos();
    let lur_gap = lur_ccn_value(&gap_state, loos_a.ops(), loos_b.ops(), tol_detect)?;
    rows.push(DemoRow::new(
        "noisy_singlet_lur_value_at_0.27",
        lur_gap.value,
        -1.0,
        -tol_detect,
    ));
    let ccn_gap = ccn_check(&gap_state, tol_detect)?;
    rows.push(DemoRow::new(
        "noisy_singlet_ccn_value_at_0.27",
        ccn_gap.value,
        0.0,
        1.0 + tol_detect,
    ));

    let ppt_small = ppt_check(&states::noisy_singlet(1e-3)?, tol_detect)?;
    rows.push(DemoRow::new(
        "noisy_singlet_ppt_min_eig_at_0.001",
        ppt_small.value,
        -1.0,
        -1e-9,
    ));

    let scan = bisect_threshold(&tiles, ScanCriterion::Ccn, (0.5, 1.0), 1e-4, None, tol_detect)?;
    rows.push(DemoRow::new(
        "tiles_ccn_threshold",
        scan.threshold,
        0.8897 - 5e-4,
        0.8897 + 5e-4,
    ));

    let scan =
        bisect_threshold(&tiles, ScanCriterion::LurFixed, (0.5, 1.0), 1e-4, None, tol_detect)?;
    rows.push(DemoRow::new(
        "tiles_lur_threshold",
        scan.threshold,
        0.8885 - 5e-4,
        0.8885 + 5e-4,
    ));

    let be_ppt = ppt_check(&states::tiles_rho_be(), tol_detect)?;
    rows.push(DemoRow::new(
        "tiles_rho_be_ppt_min_eig",
        be_ppt.value,
        -1e-9,
        1.0,
    ));

    // CCN detection always implies LUR detection on a random sample
    let mut counterexamples = 0u32;
    let mut ccn_hits = 0u32;
    for i in 0..90u64 {
        let (da, db) = [(2usize, 2usize), (2, 3), (3, 3)][(i % 3) as usize];
        let rank = 1 + (i as usize) % (da * db);
        let rho = states::random_bipartite_density(da, db, rank, seed.wrapping_add(i))?;
        if ccn_check(&rho, tol_detect)?.detected {
            ccn_hits += 1;
            if !lur_detect(&rho, tol_detect)?.detected {
                counterexamples += 1;
            }
        }
    }
    rows.push(DemoRow::new(
        "ccn_implies_lur_counterexamples",
        counterexamples as f64,
        0.0,
        0.0,
    ));
    rows.push(DemoRow::new(
        "ccn_implies_lur_detected_sample",
        ccn_hits as f64,
        1.0,
        f64::MAX,
    ));

    // both witness constructions agree
    let mut max_dev: f64 = 0.0;
    for i in 0..20u64 {
        let (da, db) = [(2usize, 2usize), (2, 3), (3, 3)][(i % 3) as usize];
        let rho = states::random_bipartite_density(da, db, da * db, seed.wrapping_add(1000 + i))?;
        let w1 = ccn_witness(&rho)?;
        let w2 = ccn_witness_realign(&rho)?;
        max_dev = max_dev.max(max_abs_diff(w1.mat(), w2.mat()));
    }
    rows.push(DemoRow::new(
        "witness_construction_max_deviation",
        max_dev,
        0.0,
        1e-9,
    ));

    let passed = rows.iter().all(|r| r.pass);
    Ok(DemoDocument { rows, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_algebra::TOL_DETECT;

    #[test]
    fn demo_passes_with_default_settings() {
        let doc = run_demo(12345, TOL_DETECT).unwrap();
        for row in &doc.rows {
            assert!(row.pass, "{}: {} not in [{}, {}]", row.name, row.observed, row.low, row.high);
        }
        assert!(doc.passed);
    }

    #[test]
    fn demo_fails_with_misconfigured_detection_margin() {
        // an inflated detection margin shifts the threshold rows out of
        // their windows
        let doc = run_demo(12345, 0.01).unwrap();
        assert!(!doc.passed);
    }
}
