//! Sparse pure states over multi-mode Fock space.
//!
//! A [`PureState`] is a map from occupation-number kets to complex amplitudes.
//! Mode 0 is the upper rail and mode 1 the lower rail at every stage of an
//! interferometer, so the same state object flows through input splitter,
//! phase shifter and output mixer without relabelling.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest photon number handled by operations that need factorials.
pub const MAX_PHOTONS: u32 = 16;

/// Amplitudes with magnitude at or below this are dropped.
pub const DEFAULT_PRUNE_EPSILON: f64 = 1e-14;

const FACTORIALS: [u64; MAX_PHOTONS as usize + 1] = {
    let mut table = [1u64; MAX_PHOTONS as usize + 1];
    let mut i = 1;
    while i <= MAX_PHOTONS as usize {
        table[i] = table[i - 1] * i as u64;
        i += 1;
    }
    table
};

/// `n!` as a float. Exact for `n <= MAX_PHOTONS`.
pub(crate) fn factorial(n: u32) -> f64 {
    FACTORIALS[n as usize] as f64
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    (FACTORIALS[n as usize] / (FACTORIALS[k as usize] * FACTORIALS[(n - k) as usize])) as f64
}

/// Occupation numbers `|n0, n1, ...>`, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKet(Vec<u32>);

impl BasisKet {
    pub fn new(occupations: impl Into<Vec<u32>>) -> Self {
        BasisKet(occupations.into())
    }

    /// Builds a ket from signed input, rejecting negative entries.
    pub fn from_signed(occupations: &[i64]) -> Result<Self> {
        occupations
            .iter()
            .enumerate()
            .map(|(mode, &value)| {
                u32::try_from(value).map_err(|_| Error::NegativeOccupation { mode, value })
            })
            .collect::<Result<Vec<_>>>()
            .map(BasisKet)
    }

    pub fn vacuum(mode_count: usize) -> Self {
        BasisKet(vec![0; mode_count])
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub(crate) fn with_mode(&self, mode: usize, value: u32) -> Self {
        let mut occ = self.0.clone();
        occ[mode] = value;
        BasisKet(occ)
    }
}

impl fmt::Display for BasisKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ">")
    }
}

impl From<&[u32]> for BasisKet {
    fn from(occ: &[u32]) -> Self {
        BasisKet(occ.to_vec())
    }
}

impl<const N: usize> From<[u32; N]> for BasisKet {
    fn from(occ: [u32; N]) -> Self {
        BasisKet(occ.to_vec())
    }
}

/// A pure state with a fixed number of modes.
///
/// Values are immutable: every operation returns a new state. Terms are kept
/// in lexicographic ket order, which makes iteration and any printed output
/// deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    mode_count: usize,
    terms: BTreeMap<BasisKet, Complex64>,
    prune_epsilon: f64,
}

impl PureState {
    /// Builds a state from explicit terms using the default prune threshold.
    /// The result is not normalized.
    pub fn from_terms(
        mode_count: usize,
        entries: impl IntoIterator<Item = (BasisKet, Complex64)>,
    ) -> Result<Self> {
        Self::from_terms_with_epsilon(mode_count, entries, DEFAULT_PRUNE_EPSILON)
    }

    pub fn from_terms_with_epsilon(
        mode_count: usize,
        entries: impl IntoIterator<Item = (BasisKet, Complex64)>,
        prune_epsilon: f64,
    ) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::NoModes);
        }
        let mut terms = BTreeMap::new();
        for (ket, amp) in entries {
            if ket.mode_count() != mode_count {
                return Err(Error::ModeCountMismatch {
                    expected: mode_count,
                    found: ket.mode_count(),
                });
            }
            if terms.contains_key(&ket) {
                return Err(Error::DuplicateKet(ket.to_string()));
            }
            terms.insert(ket, amp);
        }
        Ok(Self::from_accumulated(mode_count, terms, prune_epsilon))
    }

    /// Wraps an accumulated map, dropping amplitudes at or below `prune_epsilon`.
    pub(crate) fn from_accumulated(
        mode_count: usize,
        mut terms: BTreeMap<BasisKet, Complex64>,
        prune_epsilon: f64,
    ) -> Self {
        terms.retain(|_, amp| amp.norm() > prune_epsilon);
        PureState {
            mode_count,
            terms,
            prune_epsilon,
        }
    }

    pub fn vacuum(mode_count: usize) -> Self {
        Self::basis(BasisKet::vacuum(mode_count))
    }

    /// The zero vector on `mode_count` modes.
    pub fn zero(mode_count: usize) -> Self {
        PureState {
            mode_count,
            terms: BTreeMap::new(),
            prune_epsilon: DEFAULT_PRUNE_EPSILON,
        }
    }

    /// A single basis ket with amplitude 1.
    pub fn basis(ket: BasisKet) -> Self {
        let mode_count = ket.mode_count();
        let mut terms = BTreeMap::new();
        terms.insert(ket, Complex64::new(1.0, 0.0));
        PureState {
            mode_count,
            terms,
            prune_epsilon: DEFAULT_PRUNE_EPSILON,
        }
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn prune_epsilon(&self) -> f64 {
        self.prune_epsilon
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKet, &Complex64)> {
        self.terms.iter()
    }

    /// Amplitude on `ket`, zero when absent.
    pub fn amplitude(&self, ket: &BasisKet) -> Complex64 {
        self.terms.get(ket).copied().unwrap_or_default()
    }

    /// Same state with a different prune threshold, re-pruned.
    pub fn with_prune_epsilon(&self, prune_epsilon: f64) -> Self {
        Self::from_accumulated(self.mode_count, self.terms.clone(), prune_epsilon)
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.mode_count {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                mode,
                mode_count: self.mode_count,
            })
        }
    }

    fn check_same_modes(&self, other: &PureState) -> Result<()> {
        if self.mode_count == other.mode_count {
            Ok(())
        } else {
            Err(Error::ModeCountMismatch {
                expected: self.mode_count,
                found: other.mode_count,
            })
        }
    }

    /// Applies the creation operator of `mode`: `|..n..> -> sqrt(n+1) |..n+1..>`.
    pub fn apply_creation(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let terms = self
            .terms
            .iter()
            .map(|(ket, amp)| {
                let n = ket.0[mode];
                (ket.with_mode(mode, n + 1), amp * f64::from(n + 1).sqrt())
            })
            .collect();
        Ok(Self::from_accumulated(
            self.mode_count,
            terms,
            self.prune_epsilon,
        ))
    }

    /// `<self|rhs>`, conjugate-linear in `self`.
    pub fn inner_product(&self, rhs: &PureState) -> Result<Complex64> {
        self.check_same_modes(rhs)?;
        let (small, large, conj_small) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs, true)
        } else {
            (rhs, self, false)
        };
        Ok(small
            .terms
            .iter()
            .filter_map(|(ket, a)| {
                large.terms.get(ket).map(|b| {
                    if conj_small {
                        a.conj() * b
                    } else {
                        b.conj() * a
                    }
                })
            })
            .sum())
    }

    /// Sum of squared amplitude magnitudes.
    pub fn norm_squared(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Returns the unit-norm state together with the original norm.
    pub fn normalize(&self) -> Result<(Self, f64)> {
        let norm = self.norm();
        if self.is_zero() || norm == 0.0 {
            return Err(Error::ZeroState);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, a)| (k.clone(), a / norm))
            .collect();
        Ok((
            Self::from_accumulated(self.mode_count, terms, self.prune_epsilon),
            norm,
        ))
    }

    /// Projects onto the sector with `n_total` photons.
    ///
    /// Returns the renormalized projection and the sector weight. An empty
    /// sector gives the zero state with probability 0.
    pub fn postselect_total(&self, n_total: u32) -> (Self, f64) {
        let sector: BTreeMap<_, _> = self
            .terms
            .iter()
            .filter(|(ket, _)| ket.total() == n_total)
            .map(|(k, a)| (k.clone(), *a))
            .collect();
        let probability: f64 = sector.values().map(|a| a.norm_sqr()).sum();
        if probability == 0.0 {
            let mut zero = Self::zero(self.mode_count);
            zero.prune_epsilon = self.prune_epsilon;
            return (zero, 0.0);
        }
        let scale = probability.sqrt();
        let terms = sector.into_iter().map(|(k, a)| (k, a / scale)).collect();
        (
            Self::from_accumulated(self.mode_count, terms, self.prune_epsilon),
            probability,
        )
    }

    /// Weight of each total-photon-number sector present in the state.
    pub fn sector_weights(&self) -> BTreeMap<u32, f64> {
        let mut weights = BTreeMap::new();
        for (ket, amp) in &self.terms {
            *weights.entry(ket.total()).or_insert(0.0) += amp.norm_sqr();
        }
        weights
    }

    /// `|<ket|self>|^2`.
    pub fn pattern_probability(&self, ket: &BasisKet) -> Result<f64> {
        if ket.mode_count() != self.mode_count {
            return Err(Error::ModeCountMismatch {
                expected: self.mode_count,
                found: ket.mode_count(),
            });
        }
        Ok(self.amplitude(ket).norm_sqr())
    }

    /// Largest total photon number over stored kets.
    pub fn max_photons(&self) -> u32 {
        self.terms.keys().map(BasisKet::total).max().unwrap_or(0)
    }

    /// `sum_i c_i |psi_i>` over states sharing a mode count. The prune
    /// threshold of the first state is used.
    pub fn linear_combination(parts: &[(Complex64, &PureState)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::ZeroState);
        };
        let mut terms: BTreeMap<BasisKet, Complex64> = BTreeMap::new();
        for (coeff, state) in parts {
            first.check_same_modes(state)?;
            for (ket, amp) in &state.terms {
                *terms.entry(ket.clone()).or_default() += coeff * amp;
            }
        }
        Ok(Self::from_accumulated(
            first.mode_count,
            terms,
            first.prune_epsilon,
        ))
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (ket, amp)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", amp.re, amp.im, ket)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn four_photon_inside() -> PureState {
        let s38 = (3.0f64 / 8.0).sqrt();
        PureState::from_terms(
            2,
            [
                (BasisKet::from([4, 0]), c(s38)),
                (BasisKet::from([2, 2]), c(0.5)),
                (BasisKet::from([0, 4]), c(s38)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn from_terms_vacuum() {
        let s = PureState::from_terms(2, [(BasisKet::from([0, 0]), c(1.0))]).unwrap();
        assert_eq!(s, PureState::vacuum(2));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn from_terms_noon_four() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = PureState::from_terms(
            2,
            [
                (BasisKet::from([4, 0]), c(h)),
                (BasisKet::from([0, 4]), c(h)),
            ],
        )
        .unwrap();
        assert_abs_diff_eq!(s.norm_squared(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(&BasisKet::from([0, 4])).re, h);
    }

    #[test]
    fn from_terms_prunes_tiny() {
        let s = PureState::from_terms(2, [(BasisKet::from([1, 0]), c(1e-20))]).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn from_terms_errors() {
        assert!(matches!(
            PureState::from_terms(2, [(BasisKet::from([1, 0, 0]), c(1.0))]),
            Err(Error::ModeCountMismatch { .. })
        ));
        assert!(matches!(
            PureState::from_terms(
                2,
                [
                    (BasisKet::from([1, 0]), c(1.0)),
                    (BasisKet::from([1, 0]), c(2.0))
                ]
            ),
            Err(Error::DuplicateKet(_))
        ));
        assert_eq!(
            BasisKet::from_signed(&[1, -2]),
            Err(Error::NegativeOccupation { mode: 1, value: -2 })
        );
        assert_eq!(PureState::from_terms(0, []), Err(Error::NoModes));
    }

    #[test]
    fn creation_ladder() {
        let v = PureState::vacuum(2);
        let one = v.apply_creation(0).unwrap();
        assert_eq!(one.amplitude(&BasisKet::from([1, 0])), c(1.0));
        let two = one.apply_creation(0).unwrap();
        assert_abs_diff_eq!(two.amplitude(&BasisKet::from([2, 0])).re, 2f64.sqrt());
        let pair = v.apply_creation(0).unwrap().apply_creation(1).unwrap();
        assert_eq!(pair.amplitude(&BasisKet::from([1, 1])), c(1.0));
        assert!(matches!(
            v.apply_creation(2),
            Err(Error::ModeOutOfRange { mode: 2, .. })
        ));
    }

    #[test]
    fn inner_products() {
        let v = PureState::vacuum(2);
        assert_eq!(v.inner_product(&v).unwrap(), c(1.0));
        let s = four_photon_inside();
        let k40 = PureState::basis(BasisKet::from([4, 0]));
        let k22 = PureState::basis(BasisKet::from([2, 2]));
        assert_abs_diff_eq!(
            k40.inner_product(&s).unwrap().re,
            6f64.sqrt() / 4.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(k22.inner_product(&s).unwrap().re, 0.5, epsilon = 1e-15);
        assert!(v.inner_product(&PureState::vacuum(3)).is_err());

        let i = Complex64::i();
        let a = PureState::from_terms(1, [(BasisKet::from([1]), i)]).unwrap();
        let b = PureState::basis(BasisKet::from([1]));
        // conjugate-linear in the left argument
        assert_eq!(a.inner_product(&b).unwrap(), -i);
        assert_eq!(b.inner_product(&a).unwrap(), i);
    }

    #[test]
    fn normalize_cases() {
        let s = PureState::from_terms(
            2,
            [
                (BasisKet::from([2, 0]), c(1.0)),
                (BasisKet::from([0, 2]), c(1.0)),
            ],
        )
        .unwrap();
        let (n, norm) = s.normalize().unwrap();
        assert_abs_diff_eq!(norm, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(
            n.amplitude(&BasisKet::from([2, 0])).re,
            std::f64::consts::FRAC_1_SQRT_2
        );

        let s = PureState::from_terms(2, [(BasisKet::from([1, 0]), c(2.0))]).unwrap();
        let (n, norm) = s.normalize().unwrap();
        assert_eq!(norm, 2.0);
        assert_eq!(n, PureState::basis(BasisKet::from([1, 0])));

        assert_eq!(PureState::zero(2).normalize(), Err(Error::ZeroState));
    }

    #[test]
    fn polynomial_four_photon_state_has_unit_norm() {
        // (u^4/8 + u^2 l^2/4 + l^4/8)|0> built from ladder operators
        let v = PureState::vacuum(2);
        let raise = |s: &PureState, mode: usize, times: usize| {
            (0..times).fold(s.clone(), |acc, _| acc.apply_creation(mode).unwrap())
        };
        let u4 = raise(&v, 0, 4);
        let u2l2 = raise(&raise(&v, 0, 2), 1, 2);
        let l4 = raise(&v, 1, 4);
        let s = PureState::linear_combination(&[
            (c(1.0 / 8.0), &u4),
            (c(1.0 / 4.0), &u2l2),
            (c(1.0 / 8.0), &l4),
        ])
        .unwrap();
        let (_, norm) = s.normalize().unwrap();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            s.amplitude(&BasisKet::from([2, 2])).re,
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn postselection() {
        let noon4 = PureState::from_terms(
            2,
            [
                (BasisKet::from([4, 0]), c(std::f64::consts::FRAC_1_SQRT_2)),
                (BasisKet::from([0, 4]), c(std::f64::consts::FRAC_1_SQRT_2)),
            ],
        )
        .unwrap();
        let (s, p) = noon4.postselect_total(3);
        assert_eq!(p, 0.0);
        assert!(s.is_zero());
        let (s, p) = noon4.postselect_total(4);
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn pattern_probabilities() {
        let s = four_photon_inside();
        assert_abs_diff_eq!(
            s.pattern_probability(&BasisKet::from([4, 0])).unwrap(),
            3.0 / 8.0,
            epsilon = 1e-15
        );
        assert_eq!(s.pattern_probability(&BasisKet::from([1, 0])).unwrap(), 0.0);
        assert!(s.pattern_probability(&BasisKet::from([4])).is_err());
    }

    #[test]
    fn display_is_lexicographic() {
        let s = PureState::from_terms(
            2,
            [
                (BasisKet::from([1, 0]), c(1.0)),
                (BasisKet::from([0, 1]), c(-1.0)),
            ],
        )
        .unwrap();
        assert_eq!(
            s.to_string(),
            "(-1.000000+0.000000i)|0,1> + (1.000000+0.000000i)|1,0>"
        );
    }

    #[test]
    fn factorial_table() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(16), 20_922_789_888_000.0);
        assert_eq!(binomial(6, 3), 20.0);
    }
}
