//! Counter-derived random substreams.
//!
//! Every Monte Carlo trial owns an [`RngStream`] keyed by `(master_seed,
//! stream_index)`. The pair is hashed into a ChaCha8 seed, so the draws of a
//! trial do not depend on which worker ran it or in which order.

use nalgebra::DMatrix;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic random stream identified by a master seed and an index.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let key = mix64(master_seed ^ mix64(stream_index ^ 0xD1B5_4A32_D192_ED03));
        Self {
            master_seed,
            stream_index,
            rng: ChaCha8Rng::seed_from_u64(key),
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Matrix whose column `j` holds i.i.d. CN(0, column_variances[j]) entries.
pub fn sample_complex_gaussian(
    rows: usize,
    cols: usize,
    column_variances: &[f64],
    rng: &mut RngStream,
) -> Result<ComplexMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::domain("matrix dimensions must be positive"));
    }
    if column_variances.len() != cols {
        return Err(Error::domain(format!(
            "{} column variances given for {cols} columns",
            column_variances.len()
        )));
    }
    if let Some(v) = column_variances.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::domain(format!("column variance {v} must be finite and nonnegative")));
    }
    let scales: Vec<f64> = column_variances.iter().map(|v| (0.5 * v).sqrt()).collect();
    // Column-major fill keeps the draw order independent of matrix layout.
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    for (j, s) in scales.iter().enumerate() {
        for i in 0..rows {
            let re = rng.standard_normal();
            let im = rng.standard_normal();
            m[(i, j)] = C64::new(s * re, s * im);
        }
    }
    Ok(ComplexMatrix::from_inner(m))
}
