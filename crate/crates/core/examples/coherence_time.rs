//! Longest frame over which the aged first-stage SNR stays above threshold.
//!
//! cargo run --example coherence_time

use cogmimo::harness::{cmd_coherence, CoherenceCase};

fn main() -> cogmimo::Result<()> {
    let mut cases = Vec::new();
    for n in [64, 128, 256] {
        for a in [0.999, 0.9999] {
            cases.push(CoherenceCase { m: 10, n, a, gamma_th: 1.0 });
        }
    }
    print!("{}", cmd_coherence(&cases)?.to_csv());
    Ok(())
}
