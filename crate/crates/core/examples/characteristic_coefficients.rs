//! Partial-fraction form of a sum of exponentials with repeated means, and
//! its density.
//!
//! cargo run --example characteristic_coefficients

use cogmimo::stats::{residual_spectrum, COALESCE_TOLERANCE};

fn main() -> cogmimo::Result<()> {
    let means = [5.0, 1.0, 1.0, 1.0];
    let s = residual_spectrum(&means, COALESCE_TOLERANCE)?;
    for v in 0..s.rho() {
        let row: Vec<String> = s.char_coeff[v].iter().map(|c| format!("{c:+.6}")).collect();
        println!("pole {:.3} (multiplicity {}): {}", s.distinct[v], s.multiplicity[v], row.join(" "));
    }
    println!("coefficient sum {:.3e} from one", s.coefficient_sum() - 1.0);
    for y in [0.5, 2.0, 5.0, 10.0] {
        println!("density({y}) = {:.6}", s.density(y));
    }
    Ok(())
}
