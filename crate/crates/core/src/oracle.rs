//! Brute-force transition amplitudes through a linear-optical unitary.
//!
//! These routines share nothing with [`crate::network`]: they work from the
//! full `m x m` transfer matrix and are used to cross-check the per-ket
//! polynomial expansion.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::BasisKet;

fn check_dims(unitary: &DMatrix<Complex64>, input: &BasisKet, output: &BasisKet) -> Result<()> {
    let m = unitary.nrows();
    if unitary.ncols() != m {
        return Err(Error::DimensionMismatch {
            rows: m,
            cols: unitary.ncols(),
            expected: m,
        });
    }
    for ket in [input, output] {
        if ket.mode_count() != m {
            return Err(Error::DimensionMismatch {
                rows: m,
                cols: unitary.ncols(),
                expected: ket.mode_count(),
            });
        }
    }
    Ok(())
}

/// Mode index of every photon, in mode order.
fn photon_modes(ket: &BasisKet) -> Vec<usize> {
    ket.occupations()
        .iter()
        .enumerate()
        .flat_map(|(mode, &n)| std::iter::repeat_n(mode, n as usize))
        .collect()
}

fn sqrt_factorial_product(ket: &BasisKet) -> f64 {
    ket.occupations()
        .iter()
        .map(|&n| (1..=n).map(f64::from).product::<f64>())
        .product::<f64>()
        .sqrt()
}

/// `<output| U |input>` by distributing the product of substituted creation
/// operators over every assignment of photons to output modes.
///
/// Cost is `m^N` for `N` photons on `m` modes.
pub fn transition_amplitude_oracle(
    unitary: &DMatrix<Complex64>,
    input: &BasisKet,
    output: &BasisKet,
) -> Result<Complex64> {
    check_dims(unitary, input, output)?;
    if input.total() != output.total() {
        return Ok(Complex64::default());
    }
    let m = unitary.nrows();
    let sources = photon_modes(input);
    let target = output.occupations();

    let mut sum = Complex64::default();
    let mut choice = vec![0usize; sources.len()];
    let mut counts = vec![0u32; m];
    loop {
        counts.iter_mut().for_each(|c| *c = 0);
        for &dst in &choice {
            counts[dst] += 1;
        }
        if counts == target {
            let term: Complex64 = sources
                .iter()
                .zip(&choice)
                .map(|(&src, &dst)| unitary[(src, dst)])
                .product();
            sum += term;
        }
        // odometer increment over m^N assignments
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(sum * sqrt_factorial_product(output) / sqrt_factorial_product(input));
            }
            choice[pos] += 1;
            if choice[pos] < m {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Matrix permanent by Ryser's inclusion-exclusion formula.
pub fn permanent(matrix: &DMatrix<Complex64>) -> Complex64 {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "permanent needs a square matrix");
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut total = Complex64::default();
    for subset in 1u64..(1u64 << n) {
        let mut prod = Complex64::new(1.0, 0.0);
        for row in 0..n {
            let row_sum: Complex64 = (0..n)
                .filter(|col| subset & (1 << col) != 0)
                .map(|col| matrix[(row, col)])
                .sum();
            prod *= row_sum;
        }
        let sign = if (n as u32 - subset.count_ones()).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        total += prod * sign;
    }
    total
}

/// `<output| U |input>` as the permanent of the photon-indexed submatrix of
/// `U`, divided by `sqrt(prod n_i! prod m_j!)`.
pub fn permanent_transition_amplitude(
    unitary: &DMatrix<Complex64>,
    input: &BasisKet,
    output: &BasisKet,
) -> Result<Complex64> {
    check_dims(unitary, input, output)?;
    if input.total() != output.total() {
        return Ok(Complex64::default());
    }
    let rows = photon_modes(input);
    let cols = photon_modes(output);
    let sub = DMatrix::from_fn(rows.len(), cols.len(), |i, j| unitary[(rows[i], cols[j])]);
    Ok(permanent(&sub) / (sqrt_factorial_product(input) * sqrt_factorial_product(output)))
}
