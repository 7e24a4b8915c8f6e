//! Randomized suite confirming the finite-type bound on generated
//! instances: seeded vertex shifts with random 1-block rules, filtered to
//! codes with a retract, each checked against the image step bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{random_one_block_code, random_vertex_shift};
use crate::resolving::{verify_kbound, KBoundReport};
use crate::rng::SplitMix64;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KBoundExperiment {
    pub seed: u64,
    pub max_symbols: usize,
    pub requested: usize,
    /// instances whose code had no retract, drawn over and skipped
    pub skipped_no_retract: usize,
    /// instances skipped because a size cap was hit
    pub skipped_capped: usize,
    pub rows: Vec<KBoundRow>,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KBoundRow {
    pub instance: usize,
    #[serde(rename = "domainSymbols")]
    pub domain_symbols: usize,
    #[serde(rename = "imageSymbols")]
    pub image_symbols: usize,
    #[serde(rename = "kReport")]
    pub report: KBoundReport,
    pub gap: Option<usize>,
}

/// Run the bound experiment: `count` instances of (random 1-step SFT on at
/// most `max_symbols` symbols, random 1-block rule), keeping only codes
/// with a retract and confirming the image step stays within the bound.
pub fn run_kbound_experiment(
    count: usize,
    max_symbols: usize,
    seed: u64,
) -> Result<KBoundExperiment> {
    let mut rng = SplitMix64::new(seed);
    let mut out = KBoundExperiment {
        seed,
        max_symbols,
        requested: count,
        skipped_no_retract: 0,
        skipped_capped: 0,
        rows: Vec::new(),
        violations: 0,
    };
    while out.rows.len() < count {
        let symbols = 1 + rng.below(max_symbols);
        let domain = random_vertex_shift(&mut rng, symbols);
        let code = random_one_block_code(&mut rng, &domain, symbols)?;
        match verify_kbound(&code) {
            Ok(report) => {
                if !report.bound_respected() {
                    out.violations += 1;
                }
                out.rows.push(KBoundRow {
                    instance: out.rows.len(),
                    domain_symbols: domain.alphabet().len(),
                    image_symbols: code.codomain_alphabet().len(),
                    gap: report.gap(),
                    report,
                });
            }
            Err(Error::NoRetract) => out.skipped_no_retract += 1,
            Err(Error::CapExceeded { .. }) => out.skipped_capped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
