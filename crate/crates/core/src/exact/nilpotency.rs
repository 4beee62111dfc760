//! Deciding whether every element of a span of matrices is nilpotent.
//!
//! A span is all-nilpotent iff each characteristic-polynomial coefficient,
//! a polynomial of degree at most `n` in the span coordinates, vanishes
//! identically. Degree-bounded polynomials vanish identically iff they
//! vanish on the product grid `{0,...,n}^k`, so exact evaluation on that
//! grid is a complete decision procedure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::matrix::Matrix;
use super::scalar::Scalar;
use super::subspace::Subspace;
use super::ExactError;

/// Number of pseudo-random grid points probed before the full sweep; a span
/// with a non-nilpotent element is almost always refuted here.
const PROBE_COUNT: usize = 128;

/// First grid point (if any) whose matrix is not nilpotent, i.e. a witness
/// against "every element of the span is nilpotent".
pub fn all_nilpotent_witness(span: &Subspace) -> Result<Option<Vec<u64>>, ExactError> {
    let ambient = span.ambient_dim();
    let n = (ambient as f64).sqrt() as usize;
    if n * n != ambient {
        return Err(ExactError::NotMatrixSpace { ambient });
    }
    let k = span.dim();
    if k == 0 {
        return Ok(None);
    }
    let tag = span.tag();
    let basis: Vec<Matrix> = (0..k)
        .map(|j| Matrix::from_vectorized(n, n, span.basis_column(j), tag))
        .collect();

    let eval = |point: &[u64]| -> Result<bool, ExactError> {
        let mut m = Matrix::zero(n, n, tag);
        for (b, &t) in basis.iter().zip(point.iter()) {
            if t != 0 {
                m = m.add(&b.scale(&Scalar::from_integer(t as i64, tag)));
            }
        }
        let coeffs = m.char_poly()?;
        Ok(coeffs[1..].iter().all(Scalar::is_zero))
    };

    // Probe phase: fixed-seed random grid points, cheap refutation.
    let mut rng = ChaCha8Rng::seed_from_u64(0x9d2c5680);
    for _ in 0..PROBE_COUNT {
        let point: Vec<u64> = (0..k).map(|_| rng.gen_range(0..=n as u64)).collect();
        if !eval(&point)? {
            return Ok(Some(point));
        }
    }

    // Full sweep: the probes validate the field, so `eval` cannot fail now.
    let base = (n + 1) as u128;
    let total = base
        .checked_pow(k as u32)
        .filter(|&t| t <= u64::MAX as u128)
        .unwrap_or_else(|| panic!("nilpotency grid {}^{k} too large", n + 1)) as u64;
    let decode = |mut idx: u64| -> Vec<u64> {
        let mut point = vec![0u64; k];
        for slot in point.iter_mut() {
            *slot = idx % (base as u64);
            idx /= base as u64;
        }
        point
    };
    let hit = scan(total, |idx| !eval(&decode(idx)).expect("field checked in probe phase"));
    Ok(hit.map(decode))
}

/// True iff every element of the span is nilpotent.
pub fn all_nilpotent(span: &Subspace) -> Result<bool, ExactError> {
    Ok(all_nilpotent_witness(span)?.is_none())
}

#[cfg(feature = "parallel")]
fn scan(total: u64, pred: impl Fn(u64) -> bool + Sync) -> Option<u64> {
    (0..total).into_par_iter().find_first(|&idx| pred(idx))
}

#[cfg(not(feature = "parallel"))]
fn scan(total: u64, pred: impl Fn(u64) -> bool) -> Option<u64> {
    (0..total).find(|&idx| pred(idx))
}
