//! Input states: down-conversion output, pair Fock states, NOON states and
//! the two-mode superposition that a balanced splitter turns into a NOON state.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{factorial, BasisKet, PureState, MAX_PHOTONS};

/// Default number of pairs retained in a truncated squeezed vacuum.
pub const DEFAULT_PAIR_CUTOFF: u32 = 10;

/// Two-mode squeezed vacuum `sum_n alpha^n |n,n>` truncated at `pair_cutoff`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedVacuumSpec {
    alpha: Complex64,
    pair_cutoff: u32,
}

impl SqueezedVacuumSpec {
    pub fn new(alpha: Complex64, pair_cutoff: u32) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(SqueezedVacuumSpec { alpha, pair_cutoff })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn pair_cutoff(&self) -> u32 {
        self.pair_cutoff
    }
}

fn check_alpha(alpha: Complex64) -> Result<()> {
    let mag = alpha.norm();
    if mag < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(mag))
    }
}

/// One photon in the upper input mode, `|1,0>`.
pub fn single_photon() -> PureState {
    PureState::basis(BasisKet::from([1, 0]))
}

/// The truncated squeezed vacuum, renormalized inside the kept subspace.
/// Amplitudes are geometric in `alpha`: `c_n / c_{n-1} = alpha`.
pub fn squeezed_vacuum(spec: &SqueezedVacuumSpec) -> Result<PureState> {
    check_alpha(spec.alpha)?;
    let mut terms = BTreeMap::new();
    let mut amp = Complex64::new(1.0, 0.0);
    for n in 0..=spec.pair_cutoff {
        terms.insert(BasisKet::from([n, n]), amp);
        amp *= spec.alpha;
    }
    let unnormalized = PureState::from_terms(2, terms)?;
    Ok(unnormalized.normalize()?.0)
}

/// Probability of detecting exactly `n_pairs` pairs from the untruncated,
/// unit-norm squeezed vacuum: `(1 - |alpha|^2) |alpha|^(2 n)`.
pub fn pair_detection_probability(alpha: Complex64, n_pairs: u32) -> Result<f64> {
    check_alpha(alpha)?;
    let r = alpha.norm_sqr();
    Ok((1.0 - r) * r.powi(n_pairs as i32))
}

/// `|alpha|^(2 n) / (1 - |alpha|^2)`, the pair probability obtained when the
/// squeezed vacuum carries the prefactor `1/sqrt(1 - |alpha|^2)` instead of
/// `sqrt(1 - |alpha|^2)`. These values do not sum to one; they exceed
/// [`pair_detection_probability`] by the factor `1/(1 - |alpha|^2)^2`.
pub fn pair_detection_probability_unnormalized(alpha: Complex64, n_pairs: u32) -> Result<f64> {
    check_alpha(alpha)?;
    let r = alpha.norm_sqr();
    Ok(r.powi(n_pairs as i32) / (1.0 - r))
}

/// `|n,n>`.
pub fn pair_fock(n_pairs: u32) -> PureState {
    PureState::basis(BasisKet::from([n_pairs, n_pairs]))
}

/// `(|N,0> + |0,N>)/sqrt2`.
pub fn noon(n_photons: u32) -> Result<PureState> {
    if n_photons == 0 {
        return Err(Error::ZeroPhotons);
    }
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::from_terms(
        2,
        [
            (BasisKet::from([n_photons, 0]), h),
            (BasisKet::from([0, n_photons]), h),
        ],
    )
}

/// `[(a^dag - b^dag)^(2n) + (a^dag + b^dag)^(2n)] |0> / sqrt(2^(2n+1) (2n)!)`.
///
/// After the balanced splitter this becomes
/// `(|2n,0> + (-1)^n |0,2n>)/sqrt2`.
pub fn kitten_input(n: u32) -> Result<PureState> {
    if n == 0 {
        return Err(Error::ZeroPhotons);
    }
    let total = 2 * n;
    if total > MAX_PHOTONS {
        return Err(Error::TooManyPhotons(total));
    }
    // Exact integer coefficients of a^(2n-j) b^j: C(2n, j) ((-1)^j + 1).
    let mut binom = vec![1i64; total as usize + 1];
    for j in 1..=total as usize {
        binom[j] = binom[j - 1] * (total as i64 - j as i64 + 1) / j as i64;
    }
    let prefactor = 1.0 / (2f64.powi(total as i32 + 1) * factorial(total)).sqrt();
    let terms = (0..=total).filter_map(|j| {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let coeff = binom[j as usize] * (sign + 1);
        (coeff != 0).then(|| {
            let ladder = (factorial(total - j) * factorial(j)).sqrt();
            (
                BasisKet::from([total - j, j]),
                Complex64::new(coeff as f64 * ladder * prefactor, 0.0),
            )
        })
    });
    PureState::from_terms(2, terms)
}
