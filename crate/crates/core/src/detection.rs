//! Coincidence patterns at the interferometer output and phase scans.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::{BasisKet, PureState};
use crate::network::{apply_network, mach_zehnder, output_stage, Network};
use crate::spectrum::{self, check_uniform_grid};

/// Default number of phase samples per fringe.
pub const DEFAULT_GRID_SIZE: usize = 256;

/// Smallest accepted fringe grid.
pub const MIN_GRID_SIZE: usize = 8;

/// Tolerance on the norm of a state handed to [`coincidence_distribution`].
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Pattern probabilities below this are not reported.
pub const PATTERN_FLOOR: f64 = 1e-15;

/// Photon counts per output channel, e.g. `(3, 1)` for three photons in A
/// and one in B.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DetectionPattern(Vec<u32>);

impl DetectionPattern {
    pub fn new(counts: impl Into<Vec<u32>>) -> Result<Self> {
        let counts = counts.into();
        if counts.iter().sum::<u32>() == 0 {
            return Err(Error::ZeroPhotons);
        }
        Ok(DetectionPattern(counts))
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn to_ket(&self) -> BasisKet {
        BasisKet::new(self.0.clone())
    }
}

impl fmt::Display for DetectionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(":"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid detection pattern {0:?}, expected counts like \"3:1\"")]
pub struct ParsePatternError(String);

impl FromStr for DetectionPattern {
    type Err = ParsePatternError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let counts = s
            .split(':')
            .map(|part| part.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| ParsePatternError(s.to_string()))?;
        DetectionPattern::new(counts).map_err(|_| ParsePatternError(s.to_string()))
    }
}

/// Probability of every output pattern of a normalized state.
pub fn coincidence_distribution(state: &PureState) -> Result<BTreeMap<DetectionPattern, f64>> {
    if state.is_zero() {
        return Ok(BTreeMap::new());
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    Ok(state
        .terms()
        .filter(|(ket, _)| ket.total() > 0)
        .map(|(ket, amp)| (DetectionPattern(ket.occupations().to_vec()), amp.norm_sqr()))
        .filter(|(_, p)| *p >= PATTERN_FLOOR)
        .collect())
}

/// Where the input state enters the Mach-Zehnder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Injection {
    /// Before the input splitter: full interferometer.
    #[default]
    Input,
    /// Between the splitters: phase shifter and output mixer only.
    Inside,
}

impl Injection {
    pub fn network(self, phi: f64) -> Network {
        match self {
            Injection::Input => mach_zehnder(phi),
            Injection::Inside => output_stage(phi),
        }
    }
}

/// `2 pi i / n` for `i` in `0..n`.
pub fn phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

/// Pattern probabilities sampled on a uniform phase grid over one period.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeTable {
    phi: Vec<f64>,
    series: BTreeMap<DetectionPattern, Vec<f64>>,
}

impl FringeTable {
    pub fn new(phi: Vec<f64>, series: BTreeMap<DetectionPattern, Vec<f64>>) -> Result<Self> {
        if phi.len() < MIN_GRID_SIZE {
            return Err(Error::GridTooSmall {
                min: MIN_GRID_SIZE,
                got: phi.len(),
            });
        }
        check_uniform_grid(&phi)?;
        for values in series.values() {
            if values.len() != phi.len() {
                return Err(Error::SeriesLength {
                    series: values.len(),
                    grid: phi.len(),
                });
            }
            if let Some(&neg) = values.iter().find(|v| **v < 0.0) {
                return Err(Error::NegativeValue(neg));
            }
        }
        Ok(FringeTable { phi, series })
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn grid_size(&self) -> usize {
        self.phi.len()
    }

    pub fn patterns(&self) -> impl Iterator<Item = &DetectionPattern> {
        self.series.keys()
    }

    pub fn series(&self, pattern: &DetectionPattern) -> Option<&[f64]> {
        self.series.get(pattern).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DetectionPattern, &[f64])> {
        self.series.iter().map(|(p, v)| (p, v.as_slice()))
    }

    /// Sum over all patterns at grid index `i`.
    pub fn total_at(&self, i: usize) -> f64 {
        self.series.values().map(|v| v[i]).sum()
    }

    /// Keeps only the listed patterns; patterns never observed get a zero series.
    pub fn restricted_to(&self, patterns: &[DetectionPattern]) -> Self {
        let series = patterns
            .iter()
            .map(|p| {
                let values = self
                    .series
                    .get(p)
                    .cloned()
                    .unwrap_or_else(|| vec![0.0; self.phi.len()]);
                (p.clone(), values)
            })
            .collect();
        FringeTable {
            phi: self.phi.clone(),
            series,
        }
    }
}

/// Scans the full Mach-Zehnder over `grid_size` uniformly spaced phases.
pub fn fringe_scan(input: &PureState, grid_size: usize) -> Result<FringeTable> {
    fringe_scan_with(input, grid_size, Injection::Input)
}

pub fn fringe_scan_with(
    input: &PureState,
    grid_size: usize,
    injection: Injection,
) -> Result<FringeTable> {
    if grid_size < MIN_GRID_SIZE {
        return Err(Error::GridTooSmall {
            min: MIN_GRID_SIZE,
            got: grid_size,
        });
    }
    if input.mode_count() != 2 {
        return Err(Error::ModeCountMismatch {
            expected: 2,
            found: input.mode_count(),
        });
    }
    let phi = phase_grid(grid_size);
    let samples = phi
        .iter()
        .map(|&p| {
            apply_network(input, &injection.network(p)).and_then(|s| coincidence_distribution(&s))
        })
        .collect::<Result<Vec<_>>>()?;

    let keys: BTreeSet<DetectionPattern> = samples.iter().flat_map(|d| d.keys().cloned()).collect();
    let series = keys
        .into_iter()
        .map(|pattern| {
            let values = samples
                .iter()
                .map(|d| d.get(&pattern).copied().unwrap_or(0.0))
                .collect();
            (pattern, values)
        })
        .collect();
    FringeTable::new(phi, series)
}

/// Single-photon detection probabilities `((1 + sin phi)/2, (1 - sin phi)/2)`.
pub fn single_photon_response(phi: f64) -> (f64, f64) {
    let s = phi.sin();
    (0.5 * (1.0 + s), 0.5 * (1.0 - s))
}

/// Product of independent single-photon responses, `P_A^nA P_B^nB`.
pub fn classical_reference(pattern: &DetectionPattern, phi: f64) -> Result<f64> {
    let &[n_a, n_b] = pattern.counts() else {
        return Err(Error::ModeCountMismatch {
            expected: 2,
            found: pattern.counts().len(),
        });
    };
    let (pa, pb) = single_photon_response(phi);
    Ok(pa.powi(n_a as i32) * pb.powi(n_b as i32))
}

/// Probability that `n_photons` sent through a balanced `n_ports`-way splitter
/// leave by distinct ports: `ports! / ((ports - n)! ports^n)`.
pub fn multiport_resolution_probability(n_photons: u32, n_ports: u32) -> f64 {
    if n_photons > n_ports {
        return 0.0;
    }
    let falling = (0..n_photons).try_fold(1u128, |acc, i| acc.checked_mul(u128::from(n_ports - i)));
    let power = u128::from(n_ports).checked_pow(n_photons);
    match (falling, power) {
        (Some(num), Some(den)) => num as f64 / den as f64,
        _ => (0..n_photons)
            .map(|i| f64::from(n_ports - i) / f64::from(n_ports))
            .product(),
    }
}

impl FringeTable {
    /// Harmonic spectrum of one pattern's series.
    pub fn harmonics(
        &self,
        pattern: &DetectionPattern,
        threshold: f64,
    ) -> Option<Result<BTreeMap<usize, f64>>> {
        self.series(pattern)
            .map(|s| spectrum::harmonic_spectrum_on_grid(&self.phi, s, threshold))
    }
}
